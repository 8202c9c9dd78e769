"""Seeded corpora and law suites shared by the CLI, the tests and the scripts.

Every instance draws from its own generator seeded by (seed, index), so the
verdicts do not depend on how instances are spread over worker processes.
"""

import itertools
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from . import algebra as alg
from .baire_model import (SpaceSpec, bottom, check_reduction, identity_problem, is_choice_function, lift,
                          make_problem)
from .calculus import (WitnessClass, check_arrow_pointed, check_arrow_times,
                       check_modus_ponens, check_residuation, coprod, oplus, reduces,
                       reduction_search, times, witness_axiom8, witness_coprod_star,
                       witness_distributivity, witness_oplus_star)
from .clones import make_clone
from .errors import HypothesisError
from .llpo_family import (find_choice_function, llpo_inf_n, llpo_n1, separation_search,
                          sigma_llpo, split_choice, witness_sigma_split)
from .medvedev import (c_meet_witnesses, check_c_join_irreducible, check_obs_choice,
                       d_lemma_witnesses, d_order_witness, embed_c, embed_d, m_reduces,
                       mass, medvedev_reduces)

CONS3 = ("min", "max", "mux", "eq", "iszero", "nonzero", "and", "or")
KLEENE6 = ("min", "max", "mux", "eq", "iszero", "nonzero", "lt", "ismax")


def cons3_clone(depth=3):
    return make_clone("cons3", 3, CONS3, depth=depth, local=True)


def kleene6_clone(depth=3):
    return make_clone("kleene6", 6, KLEENE6, depth=depth, constants=(0, 1, 2, 3), local=True)


def instance_rng(seed, index):
    return random.Random(f"{seed}:{index}")


def random_problem(rng, in_space, out_space, max_dom=3, max_vals=2, name="P"):
    pts = list(in_space.points())
    outs = list(out_space.points())
    dom = rng.sample(pts, rng.randint(1, min(max_dom, len(pts))))
    return make_problem(in_space, out_space,
                        [(x, rng.sample(outs, rng.randint(1, min(max_vals, len(outs))))) for x in dom],
                        name)


def random_mass(rng, sp, max_points=3, name="A"):
    pts = list(sp.points())
    return mass(sp, rng.sample(pts, rng.randint(1, min(max_points, len(pts)))), name)


@dataclass
class Tally:
    law: str
    checked: int = 0
    failed: int = 0
    skipped: int = 0
    first_failure: Optional[str] = None
    notes: list = field(default_factory=list)

    def add(self, ok, detail="", skipped=False):
        if skipped:
            self.skipped += 1
            if detail:
                self.notes.append(detail)
            return
        self.checked += 1
        if not ok:
            self.failed += 1
            if self.first_failure is None:
                self.first_failure = detail or "?"

    def merge(self, other):
        self.checked += other.checked
        self.failed += other.failed
        self.skipped += other.skipped
        self.notes += other.notes
        if self.first_failure is None:
            self.first_failure = other.first_failure

    @property
    def passed(self):
        return self.failed == 0

    def line(self):
        s = f"{self.law:<28} {'PASS' if self.passed else 'FAIL'} checked={self.checked} failed={self.failed}"
        if self.skipped:
            s += f" skipped={self.skipped}"
        if self.first_failure:
            s += f" first={self.first_failure}"
        return s

    def porcelain(self):
        return (f"law={self.law} verdict={'PASS' if self.passed else 'FAIL'} checked={self.checked} "
                f"failed={self.failed} skipped={self.skipped}")


class Tallies(dict):
    def get_or_add(self, law):
        if law not in self:
            self[law] = Tally(law)
        return self[law]

    def absorb(self, items):
        for t in items:
            self.get_or_add(t.law).merge(t)

    @property
    def passed(self):
        return all(t.passed for t in self.values())


def run_instances(fn, args, jobs=1):
    """Map fn over args (in order), in worker processes when jobs > 1."""
    if jobs <= 1:
        return [fn(a) for a in args]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, args))


def _fmt_cex(report):
    c = report.counterexample
    if c is None:
        return report.note or "fails"
    return f"{c.reason.value} x={c.x} y={c.y}"


# ---------------------------------------------------------------- constructions

@dataclass(frozen=True)
class ConstructionConfig:
    alphabet: int = 2
    depth: int = 2
    star_budget: int = 3
    seed: int = 0
    count: int = 100
    modulus: int = 1


def construction_instance(arg):
    """All explicit constructions on one random triple; returns a list of Tally."""
    cfg, i = arg
    rng = instance_rng(cfg.seed, i)
    sp = SpaceSpec(cfg.alphabet, cfg.depth)
    P, Q, R = (random_problem(rng, sp, sp, name=n) for n in "PQR")
    out = {}

    def tally(law):
        return out.setdefault(law, Tally(law))

    for item in (1, 2, 3, 4):
        rep = witness_distributivity(item, P, Q, R).check()
        tally(f"distributivity-{item}").add(rep.holds, f"instance {i}: {_fmt_cex(rep)}")
    for n in range(cfg.star_budget + 1):
        for direction in ("LE", "GE"):
            level = {"LE": n, "GE": max(n * n, 2 * n)}[direction]
            a = max(cfg.alphabet, level + 1)
            LP, LQ = lift(P, a, a), lift(Q, a, a)
            if direction == "LE" or n <= 2:
                rep = witness_oplus_star(LP, LQ, n, direction).check()
                tally(f"oplus-star-{direction}").add(rep.holds, f"instance {i} n={n}: {_fmt_cex(rep)}")
            rep = witness_coprod_star(LP, LQ, n, direction).check()
            tally(f"coprod-star-{direction}").add(rep.holds, f"instance {i} n={n}: {_fmt_cex(rep)}")
    # axiom 8 needs P x Q <= P; search a modulus-bounded witness for it
    a = max(cfg.alphabet, cfg.star_budget + 1)
    LP, LQ = lift(P, a, a), lift(Q, a, a)
    res = reduction_search(times(LP, LQ), LP, WitnessClass.bounded(cfg.modulus))
    if res.found:
        for n in range(cfg.star_budget + 1):
            rep = witness_axiom8(LP, LQ, res.witness, n).check()
            tally("axiom-8").add(rep.holds, f"instance {i} n={n}: {_fmt_cex(rep)}")
    else:
        tally("axiom-8").add(True, f"instance {i}: P x Q not below P", skipped=True)
    return list(out.values())


def construction_suite(cfg=ConstructionConfig(), jobs=1):
    tallies = Tallies()
    for items in run_instances(construction_instance, [(cfg, i) for i in range(cfg.count)], jobs):
        tallies.absorb(items)
    return tallies


# ---------------------------------------------------------------- Kleene family

def kleene_family():
    """BOT, id, c4, c5 and their meet, join and product over alphabet 6."""
    sp = SpaceSpec(6, 1)
    c4 = make_problem(sp, sp, [((0,), [(4,)])], "c4")
    c5 = make_problem(sp, sp, [((0,), [(5,)])], "c5")
    return [bottom(sp, sp), identity_problem(sp), c4, c5, oplus(c4, c5), coprod(c4, c5), times(c4, c5)]


def kleene_suite(star_budget=3, budget=None):
    cls = WitnessClass.of_clone(kleene6_clone())
    D = alg.degree_quotient(kleene_family(), cls, budget)
    return D, alg.kleene_check(D, 0, 1, star_budget)


# ---------------------------------------------------------------- implication

def implication_problem(rng, name):
    sp, osp = SpaceSpec(2, 1), SpaceSpec(3, 1)
    return random_problem(rng, sp, osp, max_dom=2, max_vals=2, name=name)


def implication_corpus(seed=0, size=24, tries=8):
    """Seeded (P, Q, R, Q2) draws with P not below Q under cons3.

    R is redrawn until P + R <= Q (the residuation hypothesis); after `tries`
    misses R = Q, which always satisfies it.
    """
    cls = WitnessClass.of_clone(cons3_clone())
    out, i = [], 0
    while len(out) < size:
        rng = instance_rng(seed, i)
        i += 1
        P, Q = implication_problem(rng, "P"), implication_problem(rng, "Q")
        if reduces(P, Q, cls):
            continue
        for _ in range(tries):
            R = implication_problem(rng, "R")
            if reduces(oplus(P, R), Q, cls):
                break
        else:
            R = Q.renamed("R")
        Q2 = implication_problem(rng, "Q2")
        out.append((i - 1, P, Q, R, Q2))
    return out


def implication_instance(arg):
    idx, P, Q, R, Q2 = arg
    cls = WitnessClass.of_clone(cons3_clone())
    mp, res, at, ap = (Tally(n) for n in ("modus-ponens", "residuation", "arrow-times", "arrow-pointed"))
    rep = check_modus_ponens(P, Q, cls)
    mp.add(rep.holds, f"draw {idx}: {_fmt_cex(rep)}")
    w = reduction_search(oplus(P, R), Q, cls).witness
    rep = check_residuation(P, Q, R, w, cls)
    res.add(rep.holds, f"draw {idx}: {rep.note if rep.skipped else _fmt_cex(rep)}", skipped=rep.skipped)
    rep = check_arrow_times(P, Q, Q2, cls)
    at.add(rep.holds, f"draw {idx}: {_fmt_cex(rep)}")
    b = check_arrow_pointed(P, Q, cls)
    ap.add(b.holds, f"draw {idx}: pointed={b.lhs} map={b.rhs}")
    return [mp, res, at, ap]


def implication_suite(seed=0, size=24, jobs=1):
    tallies = Tallies()
    for items in run_instances(implication_instance, implication_corpus(seed, size), jobs):
        tallies.absorb(items)
    return tallies


# ---------------------------------------------------------------- Medvedev

def medvedev_instance(arg):
    seed, i = arg
    rng = instance_rng(seed, i)
    sp = SpaceSpec(3, 1)
    A, B = random_mass(rng, sp, name="A"), random_mass(rng, sp, name="B")
    clone = WitnessClass.of_clone(cons3_clone())
    classes = (clone, WitnessClass.bounded(0))
    t = {n: Tally(n) for n in ("c-meet", "d-order", "d-times", "d-plus", "c-join-irreducible", "obs-choice")}
    for src, tgt, w in c_meet_witnesses(A, B):
        rep = check_reduction(src, tgt, w)
        t["c-meet"].add(rep.holds, f"pair {i}: {_fmt_cex(rep)}")
    for cls in classes:
        res = medvedev_reduces(A, B, cls)
        if res.found:
            rep = check_reduction(*d_order_witness(A, B, res.k_map))
            t["d-order"].add(rep.holds, f"pair {i}: {_fmt_cex(rep)}")
        agree = res.found == reduces(embed_d(B), embed_d(A), cls)
        t["d-order"].add(agree, f"pair {i}: order disagreement under {cls.describe()}")
    for item, src, tgt, w in d_lemma_witnesses(A, B):
        rep = check_reduction(src, tgt, w)
        t[f"d-{item}"].add(rep.holds, f"pair {i}: {_fmt_cex(rep)}")
    # P carries an answer set inside A somewhere, so c_A <= P | Q holds
    P = random_problem(rng, sp, sp, name="P")
    anchor = min(P.dom())
    P = make_problem(sp, sp, [(x, P(x)) for x in P.dom() if x != anchor]
                     + [(anchor, rng.sample(sorted(A.points), 1))], "P")
    Q = random_problem(rng, sp, sp, name="Q")
    if rng.random() < 0.5:
        P, Q = Q, P
    res = reduction_search(embed_c(A), coprod(P, Q), WitnessClass.bounded(0))
    if res.found:
        try:
            side, fw = check_c_join_irreducible(A, P, Q, res.witness)
            ok = check_reduction(embed_c(A), P if side == "LEFT" else Q, fw).holds
        except AssertionError:
            ok = False
        t["c-join-irreducible"].add(ok, f"pair {i}: factored witness fails")
    else:
        t["c-join-irreducible"].add(False, f"pair {i}: no witness for c_A <= P | Q")
    for cls in classes:
        b = check_obs_choice(P, cls)
        t["obs-choice"].add(b.holds, f"pair {i}: choice={b.lhs} equiv={b.rhs}")
    return list(t.values())


def medvedev_suite(seed=0, count=50, jobs=1):
    tallies = Tallies()
    for items in run_instances(medvedev_instance, [(seed, i) for i in range(count)], jobs):
        tallies.absorb(items)
    return tallies


# ---------------------------------------------------------------- LLPO

@dataclass
class LlpoResults:
    identity_found: bool
    identity_seconds: float
    certificates: list          # SeparationCertificate
    split_checks: list          # (k, w, d, forward ok, backward ok)
    split_choice: Tally

    @property
    def passed(self):
        return (self.identity_found and self.identity_seconds <= 5.0
                and all(c.status == "ABSENT" and c.exhaustive for c in self.certificates)
                and all(f and b for *_, f, b in self.split_checks) and self.split_choice.passed)


def llpo_certificate_pairs():
    """The scaled separations: LLPO[2,1] against LLPO[inf,2] and against sigma[3]."""
    P = llpo_n1(2, 4, 3, out_alphabet=6)
    return [(P, llpo_inf_n(2, 5, 3)), (P, sigma_llpo(3, 5, 3, 4, out_alphabet=6))]


def split_corpus():
    return [(llpo_n1(2, 2, 2, 4), llpo_inf_n(1, 3, 2)),
            (llpo_inf_n(1, 3, 2), llpo_n1(2, 3, 2, 4)),
            (llpo_n1(2, 3, 2, 4), llpo_n1(3, 3, 2, 4)),
            (llpo_inf_n(1, 2, 2, 4), llpo_inf_n(2, 3, 2, 4))]


def llpo_suite(modulus=0, budget=None):
    t = time.time()
    res = reduction_search(llpo_n1(3, 3, 3), llpo_n1(2, 3, 3), WitnessClass.bounded(modulus), budget)
    elapsed = time.time() - t
    certs = [separation_search(P, Q, modulus, budget) for P, Q in llpo_certificate_pairs()]
    splits = []
    for k, w, d in ((2, 3, 3), (2, 4, 3), (3, 4, 3)):
        f, b = witness_sigma_split(k, w, d).check()
        splits.append((k, w, d, f.holds, b.holds))
    sc = Tally("split-choice")
    for P, Q in split_corpus():
        R = oplus(P, Q)
        # full lookahead: a transducer that sees its whole input
        I = find_choice_function(R, R.in_space.depth, budget)
        if I is None:
            sc.add(False, f"{P.name}+{Q.name}: no choice function")
            continue
        try:
            out = split_choice(P, Q, I)
        except AssertionError as e:
            sc.add(False, f"{P.name}+{Q.name}: {e}")
            continue
        ok = is_choice_function(out.table, P if out.side == "P" else Q)
        sc.add(ok, f"{P.name}+{Q.name}: side {out.side}")
    return LlpoResults(res.found, elapsed, certs, splits, sc)


# ---------------------------------------------------------------- algebra

def brute_distributive(L):
    """Oracle: distributivity from the order alone, bounds recomputed without the tables."""
    r = range(L.n)

    def meet(a, b):
        lower = [c for c in r if L.leq[c][a] and L.leq[c][b]]
        return next(c for c in lower if all(L.leq[d][c] for d in lower))

    def join(a, b):
        upper = [c for c in r if L.leq[a][c] and L.leq[b][c]]
        return next(c for c in upper if all(L.leq[c][d] for d in upper))
    return all(meet(a, join(b, c)) == join(meet(a, b), meet(a, c)) for a in r for b in r for c in r)


def algebra_suite(seed=0, extra=5):
    t = {n: Tally(n) for n in ("distributive", "tables", "adjunction", "dual", "jankov-iff", "chain3")}
    for L in alg.lattice_corpus(seed, extra):
        d = alg.is_distributive(L)
        t["distributive"].add(d == brute_distributive(L), L.name)
        H, B = alg.heyting_table(L), alg.brouwer_table(L)
        # finite lattices: Heyting iff Brouwer iff distributive
        t["tables"].add(bool(H) == bool(B) == d, L.name)
        if H:
            ok = all(L.leq[L.meet[c][a]][b] == L.leq[c][H[a, b]]
                     for a, b, c in itertools.product(range(L.n), repeat=3))
            t["adjunction"].add(ok, L.name)
        Ld = alg.dual(L)
        t["dual"].add(alg.dual(Ld) == L and bool(H) == bool(alg.brouwer_table(Ld)), L.name)
        try:
            t["jankov-iff"].add(alg.check_jankov_iff(L).holds, L.name)
        except HypothesisError:
            t["jankov-iff"].add(True, f"{L.name}: top join-reducible", skipped=True)
        except alg.MissingStructure:
            t["jankov-iff"].add(True, f"{L.name}: not Heyting", skipped=True)
    c3 = alg.chain(3)
    t["chain3"].add(alg.is_valid(c3, alg.parse_formula("~p0 | ~~p0")), "chain3 validates Jankov")
    t["chain3"].add(not alg.is_valid(c3, alg.parse_formula("p0 | ~p0")), "chain3 refutes excluded middle")
    out = Tallies()
    out.absorb(t.values())
    return out
