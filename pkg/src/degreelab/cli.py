"""Command line driver: `degreelab <subcommand> ...`.

Exit codes: 0 when every check passes (or a search ends with a definite
answer), 1 when a checked law fails or a search is cut short by its budget,
2 on usage or input-format errors.  Reports never contain timings, so equal
inputs, flags and seed give byte-identical output for any --jobs.
"""

import argparse
import sys
from dataclasses import dataclass
from typing import Optional

from . import algebra as alg
from . import suites
from .baire_model import fmt_seq, format_problem, format_witness, parse_problem
from .calculus import WitnessClass, check_arrow_pointed, check_modus_ponens, implication, reduction_search
from .clones import parse_clone
from .errors import BudgetExceeded, HypothesisError, LabError
from .llpo_family import (llpo_inf_n, llpo_n1, separation_search, sigma_llpo,
                          witness_sigma_split)
from .medvedev import embed_c, embed_d, medvedev_reduces, parse_mass


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    alphabet: Optional[int] = None
    depth: Optional[int] = None
    modulus: int = 0
    star_budget: int = 3
    clone: Optional[str] = None
    budget: Optional[int] = None
    seed: int = 0
    jobs: int = 1
    porcelain: bool = False

    def __post_init__(self):
        for name in ("alphabet", "depth", "budget"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        if self.modulus < 0 or self.star_budget < 0 or self.jobs < 1:
            raise UsageError("--modulus and --star-budget must be >= 0, --jobs >= 1")


class Out:
    """Collects report lines; porcelain mode prints key=value pairs instead of prose."""

    def __init__(self, porcelain):
        self.porcelain = porcelain
        self.lines = []

    def text(self, line):
        if not self.porcelain:
            self.lines.append(line)

    def kv(self, **pairs):
        if self.porcelain:
            self.lines.append(" ".join(f"{k}={v}" for k, v in pairs.items()))

    def both(self, line, **pairs):
        self.text(line)
        self.kv(**pairs)

    def flush(self):
        sys.stdout.write("\n".join(self.lines) + ("\n" if self.lines else ""))


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _config(args):
    return RunConfig(args.alphabet, args.depth, args.modulus, args.star_budget,
                     getattr(args, "clone", None), args.budget, args.seed, args.jobs, args.porcelain)


def _witness_class(args, cfg, alphabet):
    kind = getattr(args, "cls", None) or ("clone" if cfg.clone else "modulus")
    if kind == "all":
        return WitnessClass.all_maps()
    if kind == "modulus":
        return WitnessClass.bounded(cfg.modulus)
    if not cfg.clone:
        raise UsageError("--class clone needs --clone FILE")
    return WitnessClass.of_clone(parse_clone(_read(cfg.clone), cfg.alphabet or alphabet))


def _tally_lines(out, tallies):
    for t in tallies.values():
        out.text(t.line())
        out.kv(law=t.law, verdict="PASS" if t.passed else "FAIL", checked=t.checked,
               failed=t.failed, skipped=t.skipped)


# ---------------------------------------------------------------- subcommands

def cmd_laws(args, cfg, out):
    cc = suites.ConstructionConfig(cfg.alphabet or 2, cfg.depth or 2, cfg.star_budget,
                                   cfg.seed, args.count, cfg.modulus or 1)
    out.text(f"construction suite: {cc.count} triples, alphabet {cc.alphabet}, depth {cc.depth}, "
             f"star budget {cc.star_budget}, seed {cc.seed}")
    tallies = suites.construction_suite(cc, cfg.jobs)
    _tally_lines(out, tallies)
    ok = tallies.passed
    clone = parse_clone(_read(cfg.clone), 6) if cfg.clone else suites.kleene6_clone()
    cls = WitnessClass.of_clone(clone)
    D = alg.degree_quotient(suites.kleene_family(), cls, cfg.budget)
    rep = alg.kleene_check(D, 0, 1, cfg.star_budget)
    out.text(f"kleene family: {len(D.classes)} classes under {cls.describe()}")
    for r in rep.results:
        out.both(r.line(), law=f"kleene-{r.axiom}", verdict="PASS" if r.passed else "FAIL",
                 checked=r.checked)
    ok = ok and rep.passed
    out.both(f"laws {'PASS' if ok else 'FAIL'}", laws="PASS" if ok else "FAIL")
    return 0 if ok else 1


def cmd_reduce(args, cfg, out):
    P, Q = parse_problem(_read(args.P)), parse_problem(_read(args.Q))
    cls = _witness_class(args, cfg, max(P.out_space.alphabet, Q.in_space.alphabet))
    res = reduction_search(P, Q, cls, cfg.budget)
    out.both(f"{P.name} <= {Q.name} under {cls.describe()}: {res.status}",
             source=P.name, target=Q.name, status=res.status, exhaustive=str(res.exhaustive).lower())
    if res.found:
        w = res.witness
        K = {x: tuple(w.K(x)) for x in sorted(P.dom())}
        H = {(x, y): tuple(w.H(x, y)) for x in sorted(P.dom()) for y in sorted(Q(K[x]))}
        for line in format_witness(K, H, f"{P.name}_to_{Q.name}").splitlines():
            out.text(line)
        return 0
    if res.status == "ABSENT":
        out.text(f"exhaustive {str(res.exhaustive).lower()}")
        return 0
    return 1


def cmd_implication(args, cfg, out):
    P, Q = parse_problem(_read(args.P)), parse_problem(_read(args.Q))
    cls = _witness_class(args, cfg, max(P.out_space.alphabet, Q.in_space.alphabet, Q.out_space.alphabet))
    if args.check == "modus-ponens":
        rep = check_modus_ponens(P, Q, cls)
        verdict = "HOLDS" if rep.holds else "FAILS"
        out.both(f"modus ponens {P.name} + ({P.name} -> {Q.name}) <= {Q.name}: {verdict}",
                 check="modus-ponens", verdict=verdict)
        return 0 if rep.holds else 1
    if args.check == "arrow-pointed":
        b = check_arrow_pointed(P, Q, cls)
        verdict = "HOLDS" if b.holds else "FAILS"
        out.both(f"arrow pointed: pointed={b.lhs} map={b.rhs}: {verdict}",
                 check="arrow-pointed", verdict=verdict, value=str(b.value).lower())
        return 0 if b.holds else 1
    I = implication(P, Q, cls)
    if getattr(I, "is_top", False):
        out.both(f"{P.name} -> {Q.name} is TOP ({P.name} reduces to {Q.name})", implication="TOP")
        return 0
    xs = sorted(I.dom())
    out.both(f"{P.name} -> {Q.name}: {len(xs)} instances", implication="concrete", instances=len(xs))
    for x in xs[:args.show]:
        out.text(f"  {fmt_seq(x)}  {I.provenance(x)}")
    return 0


def cmd_lattice(args, cfg, out):
    L = alg.parse_lattice(_read(args.file))
    H, B = alg.heyting_table(L), alg.brouwer_table(L)
    mi, ji = alg.irreducibles(L)
    dist = alg.is_distributive(L)
    out.text(f"lattice {L.name}: {L.n} elements, bot {L.bot}, top {L.top}")
    out.text(f"distributive {'yes' if dist else 'no'}")
    out.text(f"heyting {'yes' if H else f'no (pair {H.offending})'}")
    out.text(f"brouwer {'yes' if B else f'no (pair {B.offending})'}")
    out.text(f"meet-irreducible {' '.join(map(str, sorted(mi)))}")
    out.text(f"join-irreducible {' '.join(map(str, sorted(ji)))}")
    out.kv(lattice=L.name, elements=L.n, distributive=str(dist).lower(),
           heyting=str(bool(H)).lower(), brouwer=str(bool(B)).lower())
    code = 0
    if args.formula is not None:
        f = alg.parse_formula(args.formula)
        bad = alg.refuting_assignment(L, f, H)
        verdict = "VALID" if bad is None else "INVALID"
        line = f"{alg.pretty(f)}: {verdict}"
        if bad is not None:
            line += " at " + ", ".join(f"p{i}={v}" for i, v in enumerate(bad))
        out.both(line, formula=alg.pretty(f).replace(" ", ""), verdict=verdict)
    if args.check == "jankov-iff":
        try:
            b = alg.check_jankov_iff(L)
        except HypothesisError as e:
            out.both(f"jankov-iff EXCLUDED: {e}", check="jankov-iff", verdict="EXCLUDED")
            return code
        verdict = "HOLDS" if b.holds else "FAILS"
        out.both(f"jankov-iff {verdict}: jankov valid={b.lhs}, bot meet-irreducible={b.rhs}",
                 check="jankov-iff", verdict=verdict, value=str(b.value).lower())
        code = 0 if b.holds else 1
    return code


def cmd_llpo(args, cfg, out):
    d = cfg.depth or 3
    if args.action == "make":
        a = args.out_alphabet
        if args.kind == "n1":
            P = llpo_n1(args.n, args.width, d, a)
        elif args.kind == "inf":
            P = llpo_inf_n(args.n, args.width, d, a)
        else:
            P = sigma_llpo(args.n, args.width, d, args.selector_depth, a)
        for line in format_problem(P).splitlines():
            out.text(line)
        out.kv(problem=P.name, instances=len(P.graph))
        return 0
    if args.action == "sigma-split":
        f, b = witness_sigma_split(args.n, args.width, d, args.selector_depth).check()
        ok = f.holds and b.holds
        out.both(f"sigma split k={args.n} width={args.width} depth={d}: "
                 f"forward {'HOLDS' if f.holds else 'FAILS'}, backward {'HOLDS' if b.holds else 'FAILS'}",
                 k=args.n, forward=str(f.holds).lower(), backward=str(b.holds).lower())
        return 0 if ok else 1
    # separate
    if (args.inf is None) == (args.sigma is None):
        raise UsageError("llpo separate needs exactly one of --inf K, --sigma K")
    wq = args.width_q
    a = max(args.width, wq) + 1
    P = llpo_n1(args.n, args.width, d, a)
    if args.inf is not None:
        Q = llpo_inf_n(args.inf, wq, d, a)
    else:
        Q = sigma_llpo(args.sigma, wq, d, args.selector_depth or d + 1, a)
    cert = separation_search(P, Q, cfg.modulus, cfg.budget)
    for line in cert.report().splitlines():
        out.text(line)
    verdict = {"FOUND": "REDUCIBLE", "ABSENT": "NOT-REDUCIBLE", "BUDGET": "UNKNOWN"}[cert.status]
    if cert.status == "ABSENT":
        verdict += " (exhaustive)" if cert.exhaustive else ""
    out.both(verdict, source=P.name, target=Q.name, status=cert.status,
             exhaustive=str(cert.exhaustive).lower())
    return 1 if cert.status == "BUDGET" else 0


def cmd_quotient(args, cfg, out):
    if args.family == "kleene":
        problems = suites.kleene_family()
        cls = WitnessClass.of_clone(parse_clone(_read(cfg.clone), 6)) if cfg.clone \
            else WitnessClass.of_clone(suites.kleene6_clone())
    else:
        if not args.files:
            raise UsageError("quotient needs problem files or --family kleene")
        problems = [parse_problem(_read(p)) for p in args.files]
        alpha = max(max(P.in_space.alphabet, P.out_space.alphabet) for P in problems)
        cls = _witness_class(args, cfg, alpha)
    D = alg.degree_quotient(problems, cls, cfg.budget)
    for line in D.report().splitlines():
        out.text(line)
    out.kv(classes=len(D.classes), lattice=str(D.quotient is not None).lower(),
           distributive=str(bool(D.distributive)).lower())
    code = 0
    if args.kleene:
        if args.family != "kleene":
            raise UsageError("--kleene needs --family kleene (bottom and identity positions)")
        rep = alg.kleene_check(D, 0, 1, cfg.star_budget)
        for r in rep.results:
            out.both(r.line(), law=f"kleene-{r.axiom}", verdict="PASS" if r.passed else "FAIL")
        code = 0 if rep.passed else 1
    if any("DISAGREES" in v for v in D.meet_join.values()):
        code = 1
    return code


def cmd_medvedev(args, cfg, out):
    A, B = parse_mass(_read(args.A)), parse_mass(_read(args.B))
    cls = _witness_class(args, cfg, max(A.space.alphabet, B.space.alphabet))
    res = medvedev_reduces(A, B, cls, cfg.budget)
    out.both(f"{A.name} <=_M {B.name} under {cls.describe()}: {res.status}",
             source=A.name, target=B.name, status=res.status)
    ok = True
    if len(A) and len(B):
        d = reduction_search(embed_d(B), embed_d(A), cls, cfg.budget)
        c = reduction_search(embed_c(A), embed_c(B), cls, cfg.budget)
        for label, r in (("d order d_B <= d_A", d), ("c order c_A <= c_B", c)):
            agree = r.found == res.found
            ok = ok and agree
            out.both(f"{label}: {r.status} ({'agrees' if agree else 'DISAGREES'})",
                     check=label.split()[0], status=r.status, agrees=str(agree).lower())
    return 0 if ok else 1


# ---------------------------------------------------------------- parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alphabet", type=int)
    common.add_argument("--depth", type=int)
    common.add_argument("--modulus", type=int, default=0)
    common.add_argument("--star-budget", type=int, default=3)
    common.add_argument("--budget", type=int, help="SAT conflict budget per search")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--porcelain", action="store_true")

    def with_class(p):
        p.add_argument("--class", dest="cls", choices=("all", "modulus", "clone"))
        p.add_argument("--clone", metavar="FILE")

    ap = argparse.ArgumentParser(prog="degreelab", description="Finite models of problem degrees.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("laws", parents=[common], help="witness constructions and Kleene axioms")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--clone", metavar="FILE", help="clone for the Kleene family (alphabet 6)")
    p.set_defaults(func=cmd_laws)

    p = sub.add_parser("reduce", parents=[common], help="search a reduction witness")
    p.add_argument("P")
    p.add_argument("Q")
    with_class(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("implication", parents=[common], help="implication problem and its laws")
    p.add_argument("P")
    p.add_argument("Q")
    with_class(p)
    p.add_argument("--check", choices=("modus-ponens", "arrow-pointed"))
    p.add_argument("--show", type=int, default=5)
    p.set_defaults(func=cmd_implication)

    p = sub.add_parser("lattice", parents=[common], help="lattice tables and formula validity")
    p.add_argument("file")
    p.add_argument("--formula")
    p.add_argument("--check", choices=("jankov-iff",))
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("llpo", parents=[common], help="LLPO problems and separations")
    p.add_argument("action", choices=("make", "separate", "sigma-split"))
    p.add_argument("--kind", choices=("n1", "inf", "sigma"), default="n1")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--inf", type=int)
    p.add_argument("--sigma", type=int)
    p.add_argument("--width", type=int, default=4)
    p.add_argument("--width-q", type=int, default=5)
    p.add_argument("--selector-depth", type=int)
    p.add_argument("--out-alphabet", type=int)
    p.set_defaults(func=cmd_llpo)

    p = sub.add_parser("quotient", parents=[common], help="degree quotient of a family")
    p.add_argument("files", nargs="*")
    p.add_argument("--family", choices=("kleene",))
    p.add_argument("--kleene", action="store_true")
    with_class(p)
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("medvedev", parents=[common], help="Medvedev reduction and embeddings")
    p.add_argument("A")
    p.add_argument("B")
    with_class(p)
    p.set_defaults(func=cmd_medvedev)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        out = Out(cfg.porcelain)
        code = args.func(args, cfg, out)
    except (UsageError, LabError) as e:
        if isinstance(e, BudgetExceeded):
            print(f"budget exceeded: {e}", file=sys.stderr)
            return 1
        print(f"error: {e}", file=sys.stderr)
        return 2
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
