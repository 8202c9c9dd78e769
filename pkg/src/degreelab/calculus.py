"""Operations on problems, explicit reduction witnesses, witness classes and implication.

Depth bookkeeping: oplus and times pair the two (padded) sides, so their
input depth is 2*max(d_P, d_Q).  coprod and the outputs of oplus add one tag
symbol.  star_bounded(P, n) adds a length tag and reserves n*d symbols for
the tuple.  Shorter sides are always padded with trailing zeros.
"""

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .baire_model import (Counterexample, LazyGraph, Problem, Reason,
                          ReductionReport, SpaceSpec, TOP, Witness, check_reduction,
                          fmt_seq, identity_witness, is_pointed, is_top, pad, pair,
                          pair_padded, tuple_w, untuple_w)
from .clones import Clone
from .errors import (AlphabetError, BudgetExceeded, ClassError, DimensionError,
                     PreconditionError, WitnessError)
from .mapsearch import (CloneFamily, LocalCloneFamily, ModulusFamily, SearchResult,
                        relevant_h_points, search_map, search_witness)

MAX_DEPTH = 64


# ---------------------------------------------------------------- codecs

class PairCodec:
    """pair_padded for sides of known depth."""

    def __init__(self, da, db):
        self.da, self.db = da, db
        self.d = max(da, db)
        self.depth = 2 * self.d

    def enc(self, a, b):
        return pair(pad(a, self.d), pad(b, self.d))

    def dec(self, x):
        return tuple(x[0:2 * self.da:2]), tuple(x[1:2 * self.db:2])

    def valid(self, x):
        if len(x) != self.depth:
            return False
        return not any(x[2 * self.da::2]) and not any(x[2 * self.db + 1::2])


class TagCodec:
    """A tag symbol followed by the padded payload of side t."""

    def __init__(self, *depths):
        self.depths = depths
        self.d = max(depths)
        self.depth = 1 + self.d

    def enc(self, t, a):
        return (t,) + pad(a, self.d)

    def dec(self, x):
        t = min(x[0], len(self.depths) - 1)
        return t, tuple(x[1:1 + self.depths[t]])

    def valid(self, x):
        return (len(x) == self.depth and x[0] < len(self.depths)
                and not any(x[1 + self.depths[x[0]]:]))


class StarCodec:
    """k followed by tuple_k of the parts, padded to n*d."""

    def __init__(self, n, d):
        self.n, self.d = n, d
        self.depth = 1 + n * d

    def enc(self, parts):
        parts = [tuple(p) for p in parts]
        if len(parts) > self.n:
            raise DimensionError(f"tuple of length {len(parts)} exceeds star budget {self.n}")
        return (len(parts),) + pad(tuple_w(parts), self.n * self.d)

    def dec(self, x):
        k = min(x[0], self.n)
        if k == 0:
            return []
        return untuple_w(tuple(x[1:1 + k * self.d]), k)

    def valid(self, x):
        return len(x) == self.depth and x[0] <= self.n and not any(x[1 + x[0] * self.d:])


# ---------------------------------------------------------------- operations

def _compatible(P, Q):
    if P.in_space.alphabet != Q.in_space.alphabet or P.out_space.alphabet != Q.out_space.alphabet:
        raise DimensionError(f"alphabet mismatch between {P.name} and {Q.name}")


def _sp(alphabet, depth):
    if depth > MAX_DEPTH:
        raise DimensionError(f"depth {depth} exceeds the configured maximum {MAX_DEPTH}")
    return SpaceSpec(alphabet, depth)


def _need_tags(alphabet, n, what):
    if alphabet <= n:
        raise AlphabetError(f"{what} needs symbol {n} but alphabet is {alphabet}")


def oplus(P, Q):
    if is_top(Q):
        return P
    if is_top(P):
        return Q
    _compatible(P, Q)
    _need_tags(P.out_space.alphabet, 1, "oplus")
    cin = PairCodec(P.in_space.depth, Q.in_space.depth)
    cout = TagCodec(P.out_space.depth, Q.out_space.depth)

    def contains(x):
        if not cin.valid(x):
            return False
        p, q = cin.dec(x)
        return p in P.graph and q in Q.graph

    def values(x):
        p, q = cin.dec(x)
        return [cout.enc(0, y) for y in P(p)] + [cout.enc(1, y) for y in Q(q)]

    def keys():
        return (cin.enc(p, q) for p in sorted(P.dom()) for q in sorted(Q.dom()))
    return Problem(_sp(P.in_space.alphabet, cin.depth), _sp(P.out_space.alphabet, cout.depth),
                   LazyGraph(contains, values, keys, len(P.graph) * len(Q.graph)),
                   f"({P.name}+{Q.name})")


def coprod(P, Q):
    if is_top(P) or is_top(Q):
        return TOP
    _compatible(P, Q)
    _need_tags(P.in_space.alphabet, 1, "coprod")
    _need_tags(P.out_space.alphabet, 1, "coprod")
    cin = TagCodec(P.in_space.depth, Q.in_space.depth)
    cout = TagCodec(P.out_space.depth, Q.out_space.depth)
    sides = (P, Q)

    def contains(x):
        if not cin.valid(x):
            return False
        t, p = cin.dec(x)
        return p in sides[t].graph

    def values(x):
        t, p = cin.dec(x)
        return [cout.enc(t, y) for y in sides[t](p)]

    def keys():
        return itertools.chain((cin.enc(0, p) for p in sorted(P.dom())),
                               (cin.enc(1, q) for q in sorted(Q.dom())))
    return Problem(_sp(P.in_space.alphabet, cin.depth), _sp(P.out_space.alphabet, cout.depth),
                   LazyGraph(contains, values, keys, len(P.graph) + len(Q.graph)),
                   f"({P.name}|{Q.name})")


def times(P, Q):
    if is_top(P) or is_top(Q):
        return TOP
    _compatible(P, Q)
    cin = PairCodec(P.in_space.depth, Q.in_space.depth)
    cout = PairCodec(P.out_space.depth, Q.out_space.depth)

    def contains(x):
        if not cin.valid(x):
            return False
        p, q = cin.dec(x)
        return p in P.graph and q in Q.graph

    def values(x):
        p, q = cin.dec(x)
        return [cout.enc(a, b) for a in P(p) for b in Q(q)]

    def keys():
        return (cin.enc(p, q) for p in sorted(P.dom()) for q in sorted(Q.dom()))
    return Problem(_sp(P.in_space.alphabet, cin.depth), _sp(P.out_space.alphabet, cout.depth),
                   LazyGraph(contains, values, keys, len(P.graph) * len(Q.graph)),
                   f"({P.name}x{Q.name})")


def star_bounded(P, n):
    """Tuples of length at most n; the empty tuple is answered by all zeros."""
    if is_top(P):
        return P
    if n < 0:
        raise DimensionError("star budget must be nonnegative")
    _need_tags(P.in_space.alphabet, n, "star")
    _need_tags(P.out_space.alphabet, n, "star")
    cin = StarCodec(n, P.in_space.depth)
    cout = StarCodec(n, P.out_space.depth)
    dom = sorted(P.dom())

    def contains(x):
        return cin.valid(x) and all(p in P.graph for p in cin.dec(x))

    def values(x):
        parts = cin.dec(x)
        return [cout.enc(ys) for ys in itertools.product(*(sorted(P(p)) for p in parts))]

    def keys():
        for k in range(n + 1):
            for ps in itertools.product(dom, repeat=k):
                yield cin.enc(ps)
    size = sum(len(dom) ** k for k in range(n + 1))
    return Problem(_sp(P.in_space.alphabet, cin.depth), _sp(P.out_space.alphabet, cout.depth),
                   LazyGraph(contains, values, keys, size), f"{P.name}*{n}")


def parallel_w(P, w):
    """The w-fold product of P with itself under tuple_w coding."""
    if is_top(P):
        return P
    if w < 1:
        raise DimensionError("width must be positive")
    din, dout = P.in_space.depth, P.out_space.depth
    dom = sorted(P.dom())

    def contains(x):
        return len(x) == w * din and all(p in P.graph for p in untuple_w(x, w))

    def values(x):
        return [tuple_w(ys) for ys in itertools.product(*(sorted(P(p)) for p in untuple_w(x, w)))]

    def keys():
        return (tuple_w(ps) for ps in itertools.product(dom, repeat=w))
    return Problem(_sp(P.in_space.alphabet, w * din), _sp(P.out_space.alphabet, w * dout),
                   LazyGraph(contains, values, keys, len(dom) ** w), f"{P.name}^{w}")


# ---------------------------------------------------------------- witness constructions

@dataclass
class Construction:
    """An explicit witness together with the reduction it is meant to witness."""

    source: object
    target: object
    witness: Witness

    def check(self):
        return check_reduction(self.source, self.target, self.witness)


def _times_codecs(P, Q):
    return (PairCodec(P.in_space.depth, Q.in_space.depth),
            PairCodec(P.out_space.depth, Q.out_space.depth))


def witness_axiom8(P, Q, w, n):
    """From w: P x Q <= P build P x Q*_n <= P by recursion on the tuple length."""
    PQ = times(P, Q)
    rep = check_reduction(PQ, P, w)
    if not rep.holds:
        raise WitnessError("witness does not reduce P x Q to P", rep.counterexample)
    S = star_bounded(Q, n)
    src = times(P, S)
    cin, cout = _times_codecs(P, S)
    pin, pout = _times_codecs(P, Q)
    sin, sout = StarCodec(n, Q.in_space.depth), StarCodec(n, Q.out_space.depth)

    def kprime(p, qs):
        for q in qs:
            p = tuple(w.K(pin.enc(p, q)))
        return p

    def hprime(p, qs, r):
        # returns (answer for P, list of answers for the q's)
        if not qs:
            return r, []
        p_prev = kprime(p, qs[:-1])
        r2, h2 = pout.dec(w.H(pin.enc(p_prev, qs[-1]), r))
        h1, hs = hprime(p, qs[:-1], r2)
        return h1, hs + [h2]

    def K(x):
        p, s = cin.dec(x)
        return kprime(p, sin.dec(s))

    def H(x, r):
        p, s = cin.dec(x)
        h1, hs = hprime(p, sin.dec(s), tuple(r))
        return cout.enc(h1, sout.enc(hs))
    return Construction(src, P, Witness(K, H, f"axiom8[{n}]"))


def witness_oplus_star(P, Q, n, direction):
    """LE: (P+Q)*_n <= P*_n + Q*_n.  GE: P*_n + Q*_n <= (P+Q)*_{n*n}."""
    PQ = oplus(P, Q)
    opin = PairCodec(P.in_space.depth, Q.in_space.depth)
    opout = TagCodec(P.out_space.depth, Q.out_space.depth)
    if direction == "LE":
        src = star_bounded(PQ, n)
        tgt = oplus(star_bounded(P, n), star_bounded(Q, n))
        sin = StarCodec(n, opin.depth)
        sout = StarCodec(n, opout.depth)
        pin, pout = StarCodec(n, P.in_space.depth), StarCodec(n, P.out_space.depth)
        qin, qout = StarCodec(n, Q.in_space.depth), StarCodec(n, Q.out_space.depth)
        tin = PairCodec(pin.depth, qin.depth)
        tout = TagCodec(pout.depth, qout.depth)

        def K(x):
            pairs = [opin.dec(z) for z in sin.dec(x)]
            return tin.enc(pin.enc([a for a, _ in pairs]), qin.enc([b for _, b in pairs]))

        def H(x, z):
            d, body = tout.dec(z)
            ys = (pout if d == 0 else qout).dec(body)
            return sout.enc([opout.enc(d, y) for y in ys])
        return Construction(src, tgt, Witness(K, H, f"oplus-star-le[{n}]"))
    if direction != "GE":
        raise ValueError(f"direction must be LE or GE, not {direction!r}")
    m = n * n
    _need_tags(P.in_space.alphabet, m, "oplus-star GE")
    src = oplus(star_bounded(P, n), star_bounded(Q, n))
    tgt = star_bounded(PQ, m)
    pin, pout = StarCodec(n, P.in_space.depth), StarCodec(n, P.out_space.depth)
    qin, qout = StarCodec(n, Q.in_space.depth), StarCodec(n, Q.out_space.depth)
    sin = PairCodec(pin.depth, qin.depth)
    sout = TagCodec(pout.depth, qout.depth)
    tin, tout = StarCodec(m, opin.depth), StarCodec(m, opout.depth)

    def K(x):
        a, b = sin.dec(x)
        ps, qs = pin.dec(a), qin.dec(b)
        return tin.enc([opin.enc(p, q) for p in ps for q in qs])

    def H(x, z):
        a, b = sin.dec(x)
        np_, nq = len(pin.dec(a)), len(qin.dec(b))
        ans = [opout.dec(u) for u in tout.dec(z)]
        # ans[i*nq + j] answers the pair (p_i, q_j)
        if all(any(ans[i * nq + j][0] == 0 for j in range(nq)) for i in range(np_)):
            ys = []
            for i in range(np_):
                j = min(j for j in range(nq) if ans[i * nq + j][0] == 0)
                ys.append(ans[i * nq + j][1])
            return sout.enc(0, pout.enc(ys))
        i = min(i for i in range(np_) if all(ans[i * nq + j][0] == 1 for j in range(nq)))
        return sout.enc(1, qout.enc([ans[i * nq + j][1] for j in range(nq)]))
    return Construction(src, tgt, Witness(K, H, f"oplus-star-ge[{n}]"))


def witness_coprod_star(P, Q, n, direction):
    """LE: (P|Q)*_n <= P*_n x Q*_n.  GE: P*_n x Q*_n <= (P|Q)*_{2n}."""
    cp = coprod(P, Q)
    cpin = TagCodec(P.in_space.depth, Q.in_space.depth)
    cpout = TagCodec(P.out_space.depth, Q.out_space.depth)
    pin, pout = StarCodec(n, P.in_space.depth), StarCodec(n, P.out_space.depth)
    qin, qout = StarCodec(n, Q.in_space.depth), StarCodec(n, Q.out_space.depth)
    prin, prout = PairCodec(pin.depth, qin.depth), PairCodec(pout.depth, qout.depth)
    if direction == "LE":
        src = star_bounded(cp, n)
        tgt = times(star_bounded(P, n), star_bounded(Q, n))
        sin, sout = StarCodec(n, cpin.depth), StarCodec(n, cpout.depth)

        def K(x):
            rs = [cpin.dec(z) for z in sin.dec(x)]
            return prin.enc(pin.enc([r for d, r in rs if d == 0]),
                            qin.enc([r for d, r in rs if d == 1]))

        def H(x, z):
            tags = [cpin.dec(u)[0] for u in sin.dec(x)]
            a, b = prout.dec(z)
            ys = (pout.dec(a), qout.dec(b))
            seen = [0, 0]
            out = []
            for d in tags:
                out.append(cpout.enc(d, ys[d][seen[d]]))
                seen[d] += 1
            return sout.enc(out)
        return Construction(src, tgt, Witness(K, H, f"coprod-star-le[{n}]"))
    if direction != "GE":
        raise ValueError(f"direction must be LE or GE, not {direction!r}")
    m = 2 * n
    _need_tags(P.in_space.alphabet, m, "coprod-star GE")
    src = times(star_bounded(P, n), star_bounded(Q, n))
    tgt = star_bounded(cp, m)
    tin, tout = StarCodec(m, cpin.depth), StarCodec(m, cpout.depth)

    def K(x):
        a, b = prin.dec(x)
        return tin.enc([cpin.enc(0, p) for p in pin.dec(a)] + [cpin.enc(1, q) for q in qin.dec(b)])

    def H(x, z):
        a, _ = prin.dec(x)
        k = len(pin.dec(a))
        ys = [cpout.dec(u)[1] for u in tout.dec(z)]
        return prout.enc(pout.enc(ys[:k]), qout.enc(ys[k:]))
    return Construction(src, tgt, Witness(K, H, f"coprod-star-ge[{n}]"))


def witness_distributivity(item, P, Q, R):
    """The four reductions used for the distributive laws, as constructed in the proofs."""
    if item == 1:
        # P + (Q x R) <= (P + Q) x (P + R)
        src = oplus(P, times(Q, R))
        tgt = times(oplus(P, Q), oplus(P, R))
        qr_in, qr_out = _times_codecs(Q, R)
        sin = PairCodec(P.in_space.depth, qr_in.depth)
        sout = TagCodec(P.out_space.depth, qr_out.depth)
        pq_in, pr_in = PairCodec(P.in_space.depth, Q.in_space.depth), PairCodec(P.in_space.depth, R.in_space.depth)
        pq_out, pr_out = TagCodec(P.out_space.depth, Q.out_space.depth), TagCodec(P.out_space.depth, R.out_space.depth)
        tin, tout = PairCodec(pq_in.depth, pr_in.depth), PairCodec(pq_out.depth, pr_out.depth)

        def K(x):
            p, qr = sin.dec(x)
            q, r = qr_in.dec(qr)
            return tin.enc(pq_in.enc(p, q), pr_in.enc(p, r))

        def H(x, z):
            a, b = tout.dec(z)
            d1, u = pq_out.dec(a)
            d2, v = pr_out.dec(b)
            if d1 == 0:
                return sout.enc(0, u)
            if d2 == 0:
                return sout.enc(0, v)
            return sout.enc(1, qr_out.enc(u, v))
    elif item == 2:
        # (P + Q) x (P + R) <= (P x P) + (Q x R)
        src = times(oplus(P, Q), oplus(P, R))
        tgt = oplus(times(P, P), times(Q, R))
        pq_in, pr_in = PairCodec(P.in_space.depth, Q.in_space.depth), PairCodec(P.in_space.depth, R.in_space.depth)
        pq_out, pr_out = TagCodec(P.out_space.depth, Q.out_space.depth), TagCodec(P.out_space.depth, R.out_space.depth)
        sin, sout = PairCodec(pq_in.depth, pr_in.depth), PairCodec(pq_out.depth, pr_out.depth)
        pp_in, pp_out = _times_codecs(P, P)
        qr_in, qr_out = _times_codecs(Q, R)
        tin, tout = PairCodec(pp_in.depth, qr_in.depth), TagCodec(pp_out.depth, qr_out.depth)

        def K(x):
            a, b = sin.dec(x)
            p1, q = pq_in.dec(a)
            p2, r = pr_in.dec(b)
            return tin.enc(pp_in.enc(p1, p2), qr_in.enc(q, r))

        def H(x, z):
            d, body = tout.dec(z)
            u, v = (pp_out if d == 0 else qr_out).dec(body)
            return sout.enc(pq_out.enc(d, u), pr_out.enc(d, v))
    elif item == 3:
        # P x (Q + R) <= (P x Q) + (P x R)
        src = times(P, oplus(Q, R))
        tgt = oplus(times(P, Q), times(P, R))
        qr_in, qr_out = PairCodec(Q.in_space.depth, R.in_space.depth), TagCodec(Q.out_space.depth, R.out_space.depth)
        sin, sout = PairCodec(P.in_space.depth, qr_in.depth), PairCodec(P.out_space.depth, qr_out.depth)
        pq_in, pq_out = _times_codecs(P, Q)
        pr_in, pr_out = _times_codecs(P, R)
        tin, tout = PairCodec(pq_in.depth, pr_in.depth), TagCodec(pq_out.depth, pr_out.depth)

        def K(x):
            p, qr = sin.dec(x)
            q, r = qr_in.dec(qr)
            return tin.enc(pq_in.enc(p, q), pr_in.enc(p, r))

        def H(x, z):
            d, body = tout.dec(z)
            u, v = (pq_out if d == 0 else pr_out).dec(body)
            return sout.enc(u, qr_out.enc(d, v))
    elif item == 4:
        # (P x Q) + (P x R) <= (P x P) x (Q + R)
        src = oplus(times(P, Q), times(P, R))
        tgt = times(times(P, P), oplus(Q, R))
        pq_in, pq_out = _times_codecs(P, Q)
        pr_in, pr_out = _times_codecs(P, R)
        sin, sout = PairCodec(pq_in.depth, pr_in.depth), TagCodec(pq_out.depth, pr_out.depth)
        pp_in, pp_out = _times_codecs(P, P)
        qr_in, qr_out = PairCodec(Q.in_space.depth, R.in_space.depth), TagCodec(Q.out_space.depth, R.out_space.depth)
        tin, tout = PairCodec(pp_in.depth, qr_in.depth), PairCodec(pp_out.depth, qr_out.depth)

        def K(x):
            a, b = sin.dec(x)
            p1, q = pq_in.dec(a)
            p2, r = pr_in.dec(b)
            return tin.enc(pp_in.enc(p1, p2), qr_in.enc(q, r))

        def H(x, z):
            uu, dv = tout.dec(z)
            u1, u2 = pp_out.dec(uu)
            d, v = qr_out.dec(dv)
            return sout.enc(d, (pq_out if d == 0 else pr_out).enc(u1 if d == 0 else u2, v))
    else:
        raise ValueError(f"distributivity item must be 1..4, not {item}")
    return Construction(src, tgt, Witness(K, H, f"distributivity-{item}"))


# ---------------------------------------------------------------- witness classes

@dataclass(frozen=True)
class WitnessClass:
    """Finite stand-in for the computable (CLONE) or continuous (MODULUS) maps."""

    kind: str                       # ALL, MODULUS, CLONE
    modulus: int = 0
    clone: Optional[Clone] = None
    limit: int = 200000

    @staticmethod
    def all_maps():
        return WitnessClass("ALL")

    @staticmethod
    def bounded(m):
        return WitnessClass("MODULUS", modulus=m)

    @staticmethod
    def of_clone(clone, limit=200000):
        return WitnessClass("CLONE", clone=clone, limit=limit)

    def describe(self):
        if self.kind == "MODULUS":
            return f"MODULUS({self.modulus})"
        if self.kind == "CLONE":
            names = ",".join(g.name for g in self.clone.generators)
            return f"CLONE({self.clone.name}:{names};depth={self.clone.depth})"
        return "ALL"

    def family(self, arg_spaces, out_space, points):
        """The family of class maps arg_spaces -> out_space, known on points."""
        if self.kind == "CLONE":
            if out_space.alphabet > self.clone.alphabet:
                raise ClassError(f"clone alphabet {self.clone.alphabet} below space alphabet {out_space.alphabet}")
            if self.clone.local:
                return LocalCloneFamily(self.clone, points, out_space)
            return CloneFamily(self.clone, points, out_space, self.limit)
        if self.kind == "MODULUS":
            return ModulusFamily(arg_spaces, out_space, self.modulus)
        return ModulusFamily(arg_spaces, out_space, max(s.depth for s in arg_spaces))


def _zero_witness(P, Q):
    zk = Q.in_space.zeros() if not is_top(Q) else ()
    zh = P.out_space.zeros() if not is_top(P) else ()
    return Witness(lambda x: zk, lambda x, y: zh, "zero")


def reduction_search(P, Q, cls, budget=None, canonical=True):
    """Least class witness for P <= Q, or an (exhaustive when possible) absence result."""
    if is_top(Q):
        return SearchResult("FOUND", identity_witness(), False, 1)
    if is_top(P):
        return SearchResult("ABSENT", None, True, 0)
    Pdom = sorted(P.dom())
    if not Pdom:
        return SearchResult("FOUND", _zero_witness(P, Q), False, 1)
    Qdom = sorted(Q.dom())
    if not Qdom:
        return SearchResult("ABSENT", None, True, 0)
    if P.in_space == Q.in_space and P.out_space == Q.out_space:
        # identity is in every class; prefer it when it already works
        ident = identity_witness()
        if check_reduction(P, Q, ident).holds:
            return SearchResult("FOUND", ident, False, 1)
    if cls.kind == "ALL":
        q0 = Qdom[0]
        pick = {x: min(P(x)) for x in Pdom}
        zero = P.out_space.zeros()
        return SearchResult("FOUND", Witness(lambda x: q0, lambda x, y: pick.get(tuple(x), zero), "all"),
                            False, 1)
    kfam = cls.family([P.in_space], Q.in_space, [(x,) for x in Pdom])
    hfam = cls.family([P.in_space, Q.out_space], P.out_space, relevant_h_points(P, Q))
    return search_witness(P, Q, kfam, hfam, budget, canonical)


def reduces(P, Q, cls, budget=None):
    """True/False for P <= Q in cls; BudgetExceeded when the search was cut short."""
    res = reduction_search(P, Q, cls, budget)
    if res.status == "BUDGET":
        raise BudgetExceeded(f"search for {P.name} <= {Q.name} exceeded its budget", res.candidates_checked)
    return res.found


def equivalent(P, Q, cls, budget=None):
    return reduces(P, Q, cls, budget) and reduces(Q, P, cls, budget)


def map_exists(cls, src_space, src_points, dst_space, allowed):
    """Is there a class map f: src_space -> dst_space with f(x) in allowed for all src_points?"""
    src_points = sorted(src_points)
    if not src_points:
        return True
    if not allowed:
        return False
    if cls.kind == "ALL":
        return True
    fam = cls.family([src_space], dst_space, [(x,) for x in src_points])
    res = search_map(fam, [((x,), allowed) for x in src_points])
    if res.status == "BUDGET":
        raise BudgetExceeded("map search exceeded its budget")
    return res.found


# ---------------------------------------------------------------- implication

@dataclass
class Member:
    """A (K, H) behaviour on the points relevant to one oracle value q."""

    k_values: dict                  # p -> point of dom Q
    h_values: dict                  # (p, r) -> tagged output
    values: frozenset               # deferred answers (tag 1 bodies)


class Sections:
    """Candidate (K, H) behaviours for P -> Q, indexed by a mixed-radix rank.

    The rank lists K's choices (a point of dom Q for each p, in order) and then
    H's choices (an allowed output for each (p, r), in order).  A rank denotes a
    member at q when both maps are realisable in the class on the points
    pair(p, q) and H defers (tag 1) at least once.
    """

    def __init__(self, P, Q, cls, body_space):
        self.P, self.Q, self.cls, self.body_space = P, Q, cls, body_space
        self.pdom = sorted(P.dom())
        self.qdom = sorted(Q.dom())
        self.qpos = {q: i for i, q in enumerate(self.qdom)}
        self.bodies = sorted(body_space.points())
        self.hcodec = TagCodec(P.out_space.depth, body_space.depth)
        self.hspace = SpaceSpec(P.out_space.alphabet, self.hcodec.depth)
        self.allowed = {p: [self.hcodec.enc(0, y) for y in sorted(P(p))]
                        + [self.hcodec.enc(1, b) for b in self.bodies] for p in self.pdom}
        self.apos = {p: {h: i for i, h in enumerate(hs)} for p, hs in self.allowed.items()}
        widest = max((len(Q(q)) for q in self.qdom), default=0)
        self.kradix = len(self.qdom) ** len(self.pdom)
        self.hradix = 1
        for p in self.pdom:
            self.hradix *= len(self.allowed[p]) ** widest
        self.size = self.kradix * self.hradix
        self._fams = {}
        self._members = {}

    def _family(self, arg_spaces, out_space, points):
        key = (out_space, tuple(points))
        if key not in self._fams:
            self._fams[key] = self.cls.family(arg_spaces, out_space, list(points))
        return self._fams[key]

    def xs(self, q):
        return [(p, pair_padded(p, q)) for p in self.pdom]

    def kfam(self, q):
        xs = self.xs(q)
        xspace = SpaceSpec(self.P.in_space.alphabet, len(xs[0][1]))
        return self._family([xspace], self.Q.in_space, [(x,) for _, x in xs])

    def hpoints(self, q, kv):
        return [(p, x, r) for p, x in self.xs(q) for r in sorted(self.Q(kv[p]))]

    def hfam(self, q, hpts):
        xspace = SpaceSpec(self.P.in_space.alphabet, len(hpts[0][1]))
        return self._family([xspace, self.Q.out_space], self.hspace, [(x, r) for _, x, r in hpts])

    def rank(self, kv, hv):
        kr = 0
        for p in self.pdom:
            kr = kr * len(self.qdom) + self.qpos[kv[p]]
        hr = 0
        for (p, r) in sorted(hv):
            hr = hr * len(self.allowed[p]) + self.apos[p][hv[(p, r)]]
        return kr * self.hradix + hr

    def member(self, rank, q):
        """The member denoted by rank at q, or None."""
        if (rank, q) in self._members:
            return self._members[(rank, q)]
        m = self._decode(rank, q)
        self._members[(rank, q)] = m
        return m

    def _decode(self, rank, q):
        if not 0 <= rank < self.size:
            return None
        kr, hr = divmod(rank, self.hradix)
        kv = {}
        for p in reversed(self.pdom):
            kr, i = divmod(kr, len(self.qdom))
            kv[p] = self.qdom[i]
        xs = self.xs(q)
        if self.kfam(q).realize({(x,): kv[p] for p, x in xs}) is None:
            return None
        hpts = self.hpoints(q, kv)
        radices = [len(self.allowed[p]) for p, _, _ in hpts]
        total = 1
        for n in radices:
            total *= n
        if hr >= total:
            return None
        outs = []
        for (p, _, _), n in zip(reversed(hpts), reversed(radices)):
            hr, i = divmod(hr, n)
            outs.append(self.allowed[p][i])
        outs.reverse()
        if not any(h[0] == 1 for h in outs):
            return None
        if self.hfam(q, hpts).realize({(x, r): h for (_, x, r), h in zip(hpts, outs)}) is None:
            return None
        return self._make(kv, hpts, outs)

    def _make(self, kv, hpts, outs):
        hv = {(p, r): h for (p, _, r), h in zip(hpts, outs)}
        vals = frozenset(h[1:1 + self.body_space.depth] for h in outs if h[0] == 1)
        return Member(dict(kv), hv, vals)

    def members(self, q):
        """(rank, member) pairs at q in increasing rank order."""
        if not self.pdom or not self.qdom:
            return
        xs = self.xs(q)
        kfam = self.kfam(q)
        for kr, choice in enumerate(itertools.product(self.qdom, repeat=len(xs))):
            if kfam.realize({(x,): c for (_, x), c in zip(xs, choice)}) is None:
                continue
            kv = {p: c for (p, _), c in zip(xs, choice)}
            hpts = self.hpoints(q, kv)
            fam = self.hfam(q, hpts)
            for outs in _backtrack(fam, hpts, [self.allowed[p] for p, _, _ in hpts]):
                if not any(h[0] == 1 for h in outs):
                    continue
                m = self._make(kv, hpts, outs)
                r = self.rank(kv, m.h_values)
                self._members[(r, q)] = m
                yield r, m


def _backtrack(fam, hpts, allowed):
    """All output lists realisable by fam, in lexicographic order of choices."""
    pts = [(x, r) for _, x, r in hpts]
    outs = []

    def ok():
        if hasattr(fam, "prefix_ok"):
            return fam.prefix_ok(outs)
        return fam.realize(dict(zip(pts, outs))) is not None

    def go(i):
        if i == len(pts):
            yield list(outs)
            return
        for h in allowed[i]:
            outs.append(h)
            if ok():
                yield from go(i + 1)
            outs.pop()
    yield from go(0)


@dataclass(frozen=True, eq=False)
class ImplicationProblem(Problem):
    sections: object = None
    qspace: object = None
    width: int = 1

    def encode(self, k, q):
        a = self.in_space.alphabet
        digits = []
        for _ in range(self.width):
            digits.append(k % a)
            k //= a
        return tuple(reversed(digits)) + tuple(q)

    def decode(self, x):
        k = 0
        for c in x[:self.width]:
            k = k * self.in_space.alphabet + c
        return k, tuple(x[self.width:])

    def member(self, x):
        k, q = self.decode(x)
        return self.sections.member(k, q)

    def provenance(self, x):
        """Readable description of the (K, H) pair a domain point denotes."""
        m = self.member(x)
        if m is None:
            return None
        ks = " ".join(f"{fmt_seq(p)}>{fmt_seq(v)}" for p, v in sorted(m.k_values.items()))
        hs = " ".join(f"{fmt_seq(p)},{fmt_seq(r)}>{fmt_seq(v)}" for (p, r), v in sorted(m.h_values.items()))
        return f"K[{ks}] H[{hs}]"


def implication(P, Q, cls, qspace=None, body_space=None, budget=None):
    """P -> Q relative to a witness class; TOP when P <= Q in the class."""
    if is_top(P):
        return Q
    res = reduction_search(P, Q, cls, budget)
    if res.status == "BUDGET":
        raise BudgetExceeded(f"search for {P.name} <= {Q.name} exceeded its budget")
    if res.found:
        return TOP
    if is_top(Q):
        raise PreconditionError("Q = TOP always lies above P")
    qspace = qspace or SpaceSpec(P.in_space.alphabet, 1)
    body_space = body_space or P.out_space
    if qspace.alphabet != P.in_space.alphabet or body_space.alphabet != P.out_space.alphabet:
        raise DimensionError("oracle and body spaces must share the alphabets of P")
    sec = Sections(P, Q, cls, body_space)
    a = P.in_space.alphabet
    width = 1
    while a ** width < sec.size:
        width += 1
    holder = {}

    def contains(x):
        if len(x) != width + qspace.depth or not qspace.contains(x[width:]):
            return False
        return holder["I"].member(x) is not None

    def values(x):
        return holder["I"].member(x).values

    def keys():
        I = holder["I"]
        for q in qspace.points():
            for r, _ in sec.members(q):
                yield I.encode(r, q)
    I = ImplicationProblem(_sp(a, width + qspace.depth), body_space,
                           LazyGraph(contains, values, keys), f"({P.name}->{Q.name})",
                           sec, qspace, width)
    holder["I"] = I
    return I


def modus_ponens_witness(P, Q, I):
    """P + (P -> Q) <= Q: query Q where K_k sends p and dispatch on H_k's tag."""
    cin = PairCodec(P.in_space.depth, I.in_space.depth)

    def K(x):
        p, z = cin.dec(x)
        return I.member(z).k_values[p]

    def H(x, r):
        p, z = cin.dec(x)
        return I.member(z).h_values[(p, tuple(r))]
    return Witness(K, H, "modus-ponens")


def check_modus_ponens(P, Q, cls, **kw):
    I = implication(P, Q, cls, **kw)
    if is_top(I):
        raise PreconditionError("implication is TOP: P reduces to Q in the class")
    return check_reduction(oplus(P, I), Q, modus_ponens_witness(P, Q, I))


def check_residuation(P, Q, R, w, cls, **kw):
    """From w: P + R <= Q build R <= (P -> Q) with K'(q) = (rank of w at q, q), H' = id."""
    rep = check_reduction(oplus(P, R), Q, w)
    if not rep.holds:
        raise WitnessError("witness does not reduce P + R to Q", rep.counterexample)
    if P.in_space.alphabet != R.in_space.alphabet:
        raise DimensionError("R must share the input alphabet of P")
    I = implication(P, Q, cls, qspace=R.in_space, body_space=R.out_space, **kw)
    if is_top(I):
        return ReductionReport(True, note="TRIVIAL: implication is TOP")
    sec = I.sections
    K, skips = {}, []
    for q in sorted(R.dom()):
        xs = sec.xs(q)
        kv = {p: tuple(w.K(x)) for p, x in xs}
        if sec.kfam(q).realize({(x,): kv[p] for p, x in xs}) is None:
            raise ClassError(f"K of the witness is not in {cls.describe()} at q={fmt_seq(q)}")
        hpts = sec.hpoints(q, kv)
        outs = [tuple(w.H(x, r)) for _, x, r in hpts]
        if sec.hfam(q, hpts).realize({(x, r): h for (_, x, r), h in zip(hpts, outs)}) is None:
            raise ClassError(f"H of the witness is not in {cls.describe()} at q={fmt_seq(q)}")
        if not any(h[0] == 1 for h in outs):
            skips.append(q)
            continue
        K[q] = I.encode(sec.rank(kv, {(p, r): h for (p, _, r), h in zip(hpts, outs)}), q)
    if skips:
        return ReductionReport(True, note=f"SKIPPED_Q_SECTION q={fmt_seq(skips[0])}: "
                               "the witness never defers there", skipped=True)
    zero = I.in_space.zeros()
    wit = Witness(lambda q: K.get(tuple(q), zero), lambda q, s: tuple(s), "residuation")
    return check_reduction(R, I, wit)


def check_arrow_times(P, Q1, Q2, cls, qspace=None, body_space=None, **kw):
    """(P -> Q1) x (P -> Q2) <= P -> (Q1 x Q2), combining the two behaviours."""
    qspace = qspace or SpaceSpec(P.in_space.alphabet, 1)
    body_space = body_space or P.out_space
    I1 = implication(P, Q1, cls, qspace=qspace, body_space=body_space, **kw)
    I2 = implication(P, Q2, cls, qspace=qspace, body_space=body_space, **kw)
    QQ = times(Q1, Q2)
    if is_top(I1) or is_top(I2):
        return ReductionReport(True, note="TRIVIAL: some implication is TOP")
    I12 = implication(P, QQ, cls, qspace=SpaceSpec(qspace.alphabet, 2 * qspace.depth),
                      body_space=SpaceSpec(body_space.alphabet, 2 * body_space.depth), **kw)
    if is_top(I12):
        return ReductionReport(True, note="TRIVIAL: some implication is TOP")
    qin, qout = _times_codecs(Q1, Q2)
    h1c, h12c = I1.sections.hcodec, I12.sections.hcodec
    bc = PairCodec(body_space.depth, body_space.depth)
    sin = PairCodec(I1.in_space.depth, I2.in_space.depth)
    pd = P.out_space.depth

    def K(x):
        z1, z2 = sin.dec(x)
        (_, q1), (_, q2) = I1.decode(z1), I2.decode(z2)
        m1, m2 = I1.member(z1), I2.member(z2)
        kv, hv = {}, {}
        for p in sorted(P.dom()):
            kv[p] = qin.enc(m1.k_values[p], m2.k_values[p])
            for r in sorted(QQ(kv[p])):
                r1, r2 = qout.dec(r)
                t1, s1 = h1c.dec(m1.h_values[(p, r1)])
                t2, s2 = h1c.dec(m2.h_values[(p, r2)])
                if t1 == 0:
                    hv[(p, r)] = h12c.enc(0, s1[:pd])
                elif t2 == 0:
                    hv[(p, r)] = h12c.enc(0, s2[:pd])
                else:
                    hv[(p, r)] = h12c.enc(1, bc.enc(s1, s2))
        return I12.encode(I12.sections.rank(kv, hv), pair(q1, q2))
    wit = Witness(K, lambda x, s: tuple(s), "arrow-times")
    return check_reduction(times(I1, I2), I12, wit)


@dataclass(frozen=True)
class Biconditional:
    lhs: bool
    rhs: bool

    @property
    def holds(self):
        return self.lhs == self.rhs

    @property
    def value(self):
        return self.lhs

    def __bool__(self):
        return self.holds


def check_arrow_pointed(P, Q, cls, **kw):
    """(P -> Q) is pointed iff dom Q is Medvedev below dom P (a class map dom P -> dom Q)."""
    if is_top(P):
        raise PreconditionError("P must be concrete")
    if reduces(P, Q, cls):
        raise PreconditionError("P reduces to Q in the class")
    I = implication(P, Q, cls, **kw)
    lhs = is_pointed(I)
    rhs = map_exists(cls, P.in_space, list(P.dom()), Q.in_space, sorted(Q.dom()))
    return Biconditional(lhs, rhs)


# ---------------------------------------------------------------- lattice laws

def check_lattice_laws(P, Q, R, cls):
    """oplus is a greatest lower bound and coprod a least upper bound in the class preorder."""
    m, j = oplus(P, Q), coprod(P, Q)
    out = {
        "meet<=P": reduces(m, P, cls),
        "meet<=Q": reduces(m, Q, cls),
        "join>=P": reduces(P, j, cls),
        "join>=Q": reduces(Q, j, cls),
    }
    if reduces(R, P, cls) and reduces(R, Q, cls):
        out["R<=meet"] = reduces(R, m, cls)
    if reduces(P, R, cls) and reduces(Q, R, cls):
        out["join<=R"] = reduces(j, R, cls)
    return out
