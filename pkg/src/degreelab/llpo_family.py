"""LLPO-style problems, modulus-bounded transducers and separation certificates.

Inputs are w-tuples (tuple_w coding) of binary sequences of depth d; the
components are numbered 1..w.  The answer "i followed by zeros" is the output
sequence (i, 0, ..., 0) of depth d.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Optional

from .baire_model import (Problem, SpaceSpec, Witness, check_reduction,
                          is_choice_function, make_problem, untuple_w)
from .calculus import PairCodec, TagCodec, WitnessClass, coprod, oplus, reduction_search
from .errors import AlphabetError, BudgetExceeded, DimensionError, PreconditionError
from .mapsearch import ModulusFamily, Transducer, search_map


def _inputs(w, d, bound):
    """All w-tuples of binary depth-d sequences with at most `bound` nonzero entries."""
    n = w * d
    out = []
    for k in range(min(bound, n) + 1):
        for pos in itertools.combinations(range(n), k):
            x = [0] * n
            for i in pos:
                x[i] = 1
            out.append(tuple(x))
    return sorted(out)


def _answer(i, d):
    return (i,) + (0,) * (d - 1)


def _zero_components(x, w):
    return [i + 1 for i, p in enumerate(untuple_w(x, w)) if not any(p)]


def _check(w, d, alphabet, need):
    if w < 1 or d < 1:
        raise DimensionError("width and depth must be positive")
    if alphabet <= need:
        raise AlphabetError(f"answers up to {need} need alphabet > {need}")


def llpo_n1(n, w, d, out_alphabet=None):
    """At most one nonzero entry overall; answer any i <= n whose component is zero."""
    if n < 2 or w < n:
        raise DimensionError("llpo_n1 needs w >= n >= 2")
    a = out_alphabet or max(n, w) + 1
    _check(w, d, a, n)
    entries = []
    for x in _inputs(w, d, 1):
        ans = [_answer(i, d) for i in _zero_components(x, w) if i <= n]
        entries.append((x, ans))
    return make_problem(SpaceSpec(2, w * d), SpaceSpec(a, d), entries, f"LLPO[{n},1]")


def llpo_inf_n(k, w, d, out_alphabet=None):
    """At most k nonzero entries; answer any component that is zero.

    Inputs where every component is nonzero have no answer at finite width
    and are left out of the domain.
    """
    a = out_alphabet or w + 1
    _check(w, d, a, w)
    entries = []
    for x in _inputs(w, d, k):
        ans = [_answer(i, d) for i in _zero_components(x, w)]
        if ans:
            entries.append((x, ans))
    return make_problem(SpaceSpec(2, w * d), SpaceSpec(a, d), entries, f"LLPO[inf,{k}]")


def selector_modes(k, w, selector_depth):
    return list(range(k, min(w, selector_depth - 1) + 1))


def selector(n, selector_depth):
    """0^n 1 0 ... of the given depth."""
    return (0,) * n + (1,) + (0,) * (selector_depth - n - 1)


def sigma_llpo(k, w, d, selector_depth=None, out_alphabet=None):
    """pair(q, p): q all zeros selects LLPO[inf,2](p), q = 0^n 1 0... selects LLPO[n,1](p), n >= k."""
    if k < 2:
        raise DimensionError("sigma_llpo needs k >= 2")
    ds = selector_depth or max(d, k + 1)
    modes = selector_modes(k, w, ds)
    if not modes:
        raise DimensionError(f"no selector 0^n1 with {k} <= n <= {w} fits depth {ds}")
    a = out_alphabet or w + 1
    _check(w, d, a, w)
    cin = PairCodec(ds, w * d)
    entries = []
    for x in _inputs(w, d, 2):
        ans = [_answer(i, d) for i in _zero_components(x, w)]
        if ans:
            entries.append((cin.enc((0,) * ds, x), ans))
    for n in modes:
        q = selector(n, ds)
        for x in _inputs(w, d, 1):
            ans = [_answer(i, d) for i in _zero_components(x, w) if i <= n]
            entries.append((cin.enc(q, x), ans))
    return make_problem(SpaceSpec(2, cin.depth), SpaceSpec(a, d), entries, f"SIGMA[{k}]")


@dataclass
class SplitWitnesses:
    sigma: Problem
    split: Problem
    forward: Witness      # sigma <= LLPO[k,1] | sigma[k+1]
    backward: Witness     # LLPO[k,1] | sigma[k+1] <= sigma

    def check(self):
        return (check_reduction(self.sigma, self.split, self.forward),
                check_reduction(self.split, self.sigma, self.backward))


def witness_sigma_split(k, w, d, selector_depth=None):
    """Both directions of sigma[k] == LLPO[k,1] | sigma[k+1] at shared (w, d)."""
    ds = selector_depth or max(d, k + 2)
    a = w + 1
    S = sigma_llpo(k, w, d, ds, a)
    L = llpo_n1(k, w, d, a)
    S1 = sigma_llpo(k + 1, w, d, ds, a)
    C = coprod(L, S1)
    sin = PairCodec(ds, w * d)
    cin = TagCodec(w * d, sin.depth)
    cout = TagCodec(d, d)
    qk = selector(k, ds)

    def K(x):
        q, p = sin.dec(x)
        if q == qk:
            return cin.enc(0, p)
        return cin.enc(1, x)

    def H(x, y):
        return cout.dec(y)[1]

    def K2(z):
        t, body = cin.dec(z)
        if t == 0:
            return sin.enc(qk, body)
        return body

    def H2(z, y):
        return cout.enc(cin.dec(z)[0], y)
    return SplitWitnesses(S, C, Witness(K, H, "sigma-split"), Witness(K2, H2, "sigma-merge"))


# ---------------------------------------------------------------- transducers

def enumerate_transducers(in_space, out_space, modulus, budget=10 ** 6):
    """Every modulus-bounded transducer, once each, in lexicographic table order."""
    fam = ModulusFamily([in_space], out_space, modulus)
    size = fam.size()
    if size > budget:
        raise BudgetExceeded(f"{size} transducers exceed the budget {budget}", size)
    groups = []
    for k in range(out_space.depth):
        cut = fam.cut(k, 0)
        for pre in itertools.product(range(in_space.alphabet), repeat=cut):
            groups.append((k, (pre,)))
    groups.sort(key=fam.group_index)
    for syms in itertools.product(range(out_space.alphabet), repeat=len(groups)):
        yield Transducer(modulus, (in_space,), out_space, dict(zip(groups, syms)))


def transducer_count(in_space, out_space, modulus):
    return ModulusFamily([in_space], out_space, modulus).size()


def format_count(n):
    """Exact below 10^18, else a power of ten with two decimals."""
    if n < 10 ** 18:
        return str(n)
    return f"10^{math.log10(n):.2f}"


@dataclass
class SeparationCertificate:
    P_name: str
    Q_name: str
    depth: int
    modulus: int
    candidates_checked: int
    exhaustive: bool
    witness: Optional[tuple] = None     # (K transducer, H transducer)
    status: str = ""

    def report(self):
        lines = [f"certificate {self.P_name} <= {self.Q_name}",
                 f"depth {self.depth}",
                 f"modulus {self.modulus}",
                 f"status {self.status}",
                 f"candidates_checked {format_count(self.candidates_checked)}",
                 f"exhaustive {str(self.exhaustive).lower()}",
                 f"witness {'present' if self.witness else 'absent'}"]
        return "\n".join(lines) + "\n"


def separation_search(P, Q, modulus, budget=None):
    """Search all (K, H) transducer pairs of the given modulus for a reduction of P to Q."""
    res = reduction_search(P, Q, WitnessClass.bounded(modulus), budget)
    depth = max(P.in_space.depth, Q.in_space.depth)
    wit = (res.k_map, res.h_map) if res.found else None
    return SeparationCertificate(P.name, Q.name, depth, modulus, res.candidates_checked,
                                 res.exhaustive, wit, res.status)


# ---------------------------------------------------------------- clopen split

def find_choice_function(R, modulus, budget=None):
    """Least modulus-bounded transducer choosing from R on its domain, or None."""
    fam = ModulusFamily([R.in_space], R.out_space, modulus)
    res = search_map(fam, [((x,), R(x)) for x in sorted(R.dom())], budget)
    return res.k_map if res.found else None


@dataclass
class SplitResult:
    side: str               # "P" or "Q"
    table: dict             # choice function on the domain of that side
    anchor: dict            # p0 (side Q) or the q_p used for each p (side P)


def split_choice(P, Q, I):
    """Turn a choice function for P + Q into one for P or for Q.

    Partition by I's first output symbol.  If some p0 sends every (p0, q) to the
    Q side, q -> shift(I(p0, q)) chooses for Q.  Otherwise every p has a q_p
    landing on the P side, and p -> shift(I(p, q_p)) chooses for P.
    """
    R = oplus(P, Q)
    if not any(True for _ in R.graph):
        raise PreconditionError("P + Q has empty domain; there is nothing to split")
    if not is_choice_function(lambda x: tuple(I(x)), R):
        raise PreconditionError("I is not a choice function for P + Q")
    cin = PairCodec(P.in_space.depth, Q.in_space.depth)
    cout = TagCodec(P.out_space.depth, Q.out_space.depth)
    pdom, qdom = sorted(P.dom()), sorted(Q.dom())
    for p0 in pdom:
        if all(I(cin.enc(p0, q))[0] == 1 for q in qdom):
            table = {q: cout.dec(I(cin.enc(p0, q)))[1] for q in qdom}
            out = SplitResult("Q", table, {"p0": p0})
            break
    else:
        anchor, table = {}, {}
        for p in pdom:
            q = next(q for q in qdom if I(cin.enc(p, q))[0] == 0)
            anchor[p] = q
            table[p] = cout.dec(I(cin.enc(p, q)))[1]
        out = SplitResult("P", table, anchor)
    side = P if out.side == "P" else Q
    if not is_choice_function(out.table, side):
        raise AssertionError("split produced an invalid choice function")
    return out
