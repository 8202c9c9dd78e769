"""Finite mass problems, class-relative Medvedev reducibility and the embeddings c and d.

A <=_M B means some class map H sends every point of B into A.  The embedding
c_A has the single instance 0...0 with answer set A; d_A has instance set A and
the constant answer 1...1.
"""

from dataclasses import dataclass

from .baire_model import (Problem, SpaceSpec, Witness, check_reduction,
                          fmt_seq, is_top, parse_seq)
from .calculus import (PairCodec, TagCodec, WitnessClass, coprod, oplus,
                       reduction_search, times)
from .errors import (AlphabetError, BudgetExceeded, DimensionError,
                     EmptyValueError, FormatError, PreconditionError)
from .mapsearch import SearchResult, TableMap, search_map


@dataclass(frozen=True)
class MassProblem:
    space: SpaceSpec
    points: frozenset
    name: str = "A"

    def __post_init__(self):
        for p in self.points:
            self.space.check(tuple(p), "point")

    def __len__(self):
        return len(self.points)


def mass(space, points, name="A"):
    return MassProblem(space, frozenset(tuple(p) for p in points), name)


def whole_space(space, name="all"):
    return mass(space, space.points(), name)


def _same_alphabet(A, B):
    if A.space.alphabet != B.space.alphabet:
        raise DimensionError("mass problems must share an alphabet")


def mass_plus(A, B):
    """0A u 1B."""
    _same_alphabet(A, B)
    if A.space.alphabet < 2:
        raise AlphabetError("tags need alphabet >= 2")
    c = TagCodec(A.space.depth, B.space.depth)
    pts = [c.enc(0, p) for p in A.points] + [c.enc(1, q) for q in B.points]
    return mass(SpaceSpec(A.space.alphabet, c.depth), pts, f"({A.name}+{B.name})")


def mass_times(A, B):
    """{<p, q> : p in A, q in B}."""
    _same_alphabet(A, B)
    c = PairCodec(A.space.depth, B.space.depth)
    pts = [c.enc(p, q) for p in A.points for q in B.points]
    return mass(SpaceSpec(A.space.alphabet, c.depth), pts, f"({A.name}x{B.name})")


def medvedev_reduces(A, B, cls, budget=None):
    """Least class map H with H(B) inside A (SearchResult; the map is in k_map)."""
    pts = sorted(B.points)
    if not pts:
        return SearchResult("FOUND", None, False, 1, TableMap({}, A.space))
    if not A.points:
        return SearchResult("ABSENT", None, True, 0)
    if cls.kind == "ALL":
        a0 = min(A.points)
        return SearchResult("FOUND", None, False, 1, TableMap({(p,): a0 for p in pts}, A.space))
    fam = cls.family([B.space], A.space, [(p,) for p in pts])
    res = search_map(fam, [((p,), A.points) for p in pts], budget)
    if res.status == "BUDGET":
        raise BudgetExceeded(f"search for {A.name} <=_M {B.name} exceeded its budget")
    return res


def m_reduces(A, B, cls, budget=None):
    return medvedev_reduces(A, B, cls, budget).found


def embed_c(A, in_alphabet=None):
    """c_A: single instance 0, answer set A."""
    if not A.points:
        raise EmptyValueError("c of the empty mass problem would have an empty value set")
    sp = SpaceSpec(in_alphabet or A.space.alphabet, 1)
    return Problem(sp, A.space, {sp.zeros(): frozenset(A.points)}, f"c[{A.name}]")


def embed_d(A, out_space=None):
    """d_A: instances A, constant answer 1...1."""
    out = out_space or SpaceSpec(max(2, A.space.alphabet), A.space.depth)
    one = frozenset([out.ones()])
    return Problem(A.space, out, {p: one for p in A.points}, f"d[{A.name}]")


# ---------------------------------------------------------------- witnesses

def c_meet_witnesses(A, B):
    """c_{A+B} == c_A + c_B: both directions are codec rewirings."""
    cab = embed_c(mass_plus(A, B))
    m = oplus(embed_c(A), embed_c(B))
    z = m.in_space.zeros()
    fwd = Witness(lambda x: z, lambda x, y: tuple(y), "c-meet")
    back = Witness(lambda x: cab.in_space.zeros(), lambda x, y: tuple(y), "c-meet-back")
    return (cab, m, fwd), (m, cab, back)


def c_join_witnesses(A, B):
    """c_{AxB} == c_A x c_B."""
    cab = embed_c(mass_times(A, B))
    t = times(embed_c(A), embed_c(B))
    fwd = Witness(lambda x: t.in_space.zeros(), lambda x, y: tuple(y), "c-times")
    back = Witness(lambda x: cab.in_space.zeros(), lambda x, y: tuple(y), "c-times-back")
    return (cab, t, fwd), (t, cab, back)


def d_order_witness(A, B, K):
    """A <=_M B via K gives d_B <= d_A with H constant 1...1."""
    dA, dB = embed_d(A), embed_d(B)
    ones = dB.out_space.ones()
    return dB, dA, Witness(lambda x: K(x), lambda x, y: ones, "d-order")


def d_lemma_witnesses(A, B):
    """Items 2 and 3: K = id both ways, H answers 1...1 (carrying the tag for the coprod)."""
    out = []
    dA, dB = embed_d(A), embed_d(B)
    dt = embed_d(mass_times(A, B), SpaceSpec(dA.out_space.alphabet, 1 + max(dA.out_space.depth, dB.out_space.depth)))
    m = oplus(dA, dB)
    ones = m.out_space.ones()
    const = Witness(lambda x: tuple(x), lambda x, y: ones, "d-times")
    out.append(("times", dt, m, const))
    out.append(("times", m, dt, const))
    dp = embed_d(mass_plus(A, B), SpaceSpec(dA.out_space.alphabet, 1 + max(dA.out_space.depth, dB.out_space.depth)))
    j = coprod(dA, dB)
    ones_j = j.out_space.ones()
    d = max(dA.out_space.depth, dB.out_space.depth)
    out.append(("plus", dp, j, Witness(lambda x: tuple(x), lambda x, y: ones_j, "d-plus")))
    out.append(("plus", j, dp, Witness(lambda x: tuple(x), lambda x, y: (x[0],) + (1,) * d, "d-plus-back")))
    return out


def check_c_join_irreducible(A, P, Q, w):
    """Factor a witness for c_A <= P | Q through the single point K(0)."""
    c = embed_c(A)
    J = coprod(P, Q)
    if is_top(J):
        raise PreconditionError("coprod with TOP")
    rep = check_reduction(c, J, w)
    if not rep.holds:
        raise PreconditionError("witness does not reduce c_A to P | Q")
    cin = TagCodec(P.in_space.depth, Q.in_space.depth)
    cout = TagCodec(P.out_space.depth, Q.out_space.depth)
    z = c.in_space.zeros()
    t, p = cin.dec(tuple(w.K(z)))
    side = P if t == 0 else Q
    fw = Witness(lambda x: p, lambda x, y: w.H(x, cout.enc(t, y)), "c-factor")
    if not check_reduction(c, side, fw).holds:
        raise AssertionError("factored witness fails")
    return ("LEFT" if t == 0 else "RIGHT"), fw


def check_obs_choice(P, cls, budget=None):
    """A class choice function exists iff P == d_{dom P} in the class."""
    from .calculus import Biconditional
    pts = sorted(P.dom())
    if not pts:
        lhs = True
    elif cls.kind == "ALL":
        lhs = True
    else:
        fam = cls.family([P.in_space], P.out_space, [(x,) for x in pts])
        res = search_map(fam, [((x,), P(x)) for x in pts], budget)
        if res.status == "BUDGET":
            raise BudgetExceeded("choice function search exceeded its budget")
        lhs = res.found
    d = embed_d(mass(P.in_space, pts, "dom"), P.out_space)
    a = reduction_search(P, d, cls, budget)
    b = reduction_search(d, P, cls, budget)
    if "BUDGET" in (a.status, b.status):
        raise BudgetExceeded("equivalence search exceeded its budget")
    return Biconditional(lhs, a.found and b.found)


@dataclass
class BrouwerExtraction:
    C: MassProblem
    p: tuple
    c_to_R: tuple           # (c_C, R, witness)
    c_to_product: tuple     # (c_A, c_B x c_C, witness)

    def check(self):
        return (check_reduction(*self.c_to_R), check_reduction(*self.c_to_product))


def check_c_brouwer_preservation(A, B, R, w):
    """From c_A <= c_B x R read p off K(0), set C = R(p), and rebuild both reductions."""
    cA, cB = embed_c(A, R.in_space.alphabet), embed_c(B, R.in_space.alphabet)
    T = times(cB, R)
    if not check_reduction(cA, T, w).holds:
        raise PreconditionError("witness does not reduce c_A to c_B x R")
    cin = PairCodec(cB.in_space.depth, R.in_space.depth)
    z = cA.in_space.zeros()
    _, p = cin.dec(tuple(w.K(z)))
    C = MassProblem(R.out_space, R(p), "C")
    cC = embed_c(C, R.in_space.alphabet)
    w1 = Witness(lambda x: p, lambda x, y: tuple(y), "c-extract")
    prod = times(cB, cC)
    zz = prod.in_space.zeros()
    w2 = Witness(lambda x: zz, lambda x, y: w.H(x, y), "c-brouwer")
    out = BrouwerExtraction(C, p, (cC, R, w1), (cA, prod, w2))
    r1, r2 = out.check()
    if not (r1.holds and r2.holds):
        raise AssertionError("extracted witnesses fail")
    return out


# ---------------------------------------------------------------- file format

def format_mass(A):
    lines = [f"mass {A.name}", f"space alphabet={A.space.alphabet} depth={A.space.depth}"]
    lines += [f"point {fmt_seq(p)}" for p in sorted(A.points)]
    lines.append("end")
    return "\n".join(lines) + "\n"


def parse_mass(text):
    name, sp, pts, ended = None, None, [], False
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] == "mass" and len(tok) == 2:
            name = tok[1]
        elif tok[0] == "space" and len(tok) == 3:
            kv = dict(t.split("=", 1) for t in tok[1:] if "=" in t)
            try:
                sp = SpaceSpec(int(kv["alphabet"]), int(kv["depth"]))
            except (KeyError, ValueError):
                raise FormatError(f"bad space line {line!r}") from None
        elif tok[0] == "point" and len(tok) == 2:
            pts.append(parse_seq(tok[1]))
        elif tok[0] == "end":
            ended = True
        else:
            raise FormatError(f"unexpected mass line {line!r}")
    if name is None or sp is None or not ended:
        raise FormatError("incomplete mass file")
    try:
        return mass(sp, pts, name)
    except (DimensionError, AlphabetError) as e:
        raise FormatError(str(e)) from None
