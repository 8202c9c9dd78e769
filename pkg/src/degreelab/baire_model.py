"""Truncated Baire space, codecs, multivalued problems and the reduction contract.

A point of the space is a tuple of ints of fixed length (the depth) over the
symbols 0..alphabet-1.  Problems are partial multivalued maps given by a graph
from points to nonempty frozensets of points, plus the adjoined symbolic TOP.
"""

import itertools
from collections.abc import Mapping
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

from .errors import (AlphabetError, DimensionError, EmptyValueError,
                     FormatError, TopError)

Seq = tuple


@dataclass(frozen=True)
class SpaceSpec:
    alphabet: int
    depth: int

    def __post_init__(self):
        if self.alphabet < 1 or self.depth < 1:
            raise DimensionError(f"bad space {self.alphabet}^{self.depth}")

    @property
    def size(self):
        return self.alphabet ** self.depth

    def points(self):
        return itertools.product(range(self.alphabet), repeat=self.depth)

    def contains(self, s):
        return (len(s) == self.depth
                and all(0 <= c < self.alphabet for c in s))

    def zeros(self):
        return (0,) * self.depth

    def ones(self):
        return (1,) * self.depth

    def check(self, s, what="sequence"):
        if len(s) != self.depth:
            raise DimensionError(f"{what} {fmt_seq(s)} has depth {len(s)}, expected {self.depth}")
        for c in s:
            if not 0 <= c < self.alphabet:
                raise AlphabetError(f"{what} {fmt_seq(s)} leaves alphabet {self.alphabet}")
        return s


def space(alphabet, depth):
    return SpaceSpec(alphabet, depth)


# ---------------------------------------------------------------- codecs

def pad(p, depth):
    """Right-pad with zeros up to depth (the convention for unequal sides)."""
    if len(p) > depth:
        raise DimensionError(f"cannot pad depth {len(p)} down to {depth}")
    return tuple(p) + (0,) * (depth - len(p))


def pair(p, q):
    if len(p) != len(q):
        raise DimensionError(f"pair of depths {len(p)} and {len(q)}")
    out = []
    for a, b in zip(p, q):
        out.append(a)
        out.append(b)
    return tuple(out)


def unpair(r):
    if len(r) % 2:
        raise DimensionError(f"unpair of odd depth {len(r)}")
    return tuple(r[0::2]), tuple(r[1::2])


def tuple_w(parts):
    parts = [tuple(p) for p in parts]
    if not parts:
        return ()
    d = len(parts[0])
    if any(len(p) != d for p in parts):
        raise DimensionError("ragged tuple")
    return tuple(p[i] for i in range(d) for p in parts)


def untuple_w(r, w):
    if w < 1 or len(r) % w:
        raise DimensionError(f"cannot split depth {len(r)} into {w} parts")
    return [tuple(r[i::w]) for i in range(w)]


def tag(n, p, alphabet=None):
    if n < 0 or (alphabet is not None and n >= alphabet):
        raise AlphabetError(f"tag symbol {n} outside alphabet {alphabet}")
    return (n,) + tuple(p)


def shift(p):
    if len(p) < 2:
        raise DimensionError("shift needs depth >= 2")
    return tuple(p[1:])


def pair_padded(p, q):
    """Pair two sequences of possibly different depth, padding the shorter."""
    d = max(len(p), len(q))
    return pair(pad(p, d), pad(q, d))


def fmt_seq(s):
    return ".".join(str(c) for c in s)


def parse_seq(text):
    text = text.strip()
    try:
        return tuple(int(c) for c in text.split("."))
    except ValueError:
        raise FormatError(f"bad sequence {text!r}") from None


# ---------------------------------------------------------------- problems

class LazyGraph(Mapping):
    """Read-only graph computed on demand.

    contains(x) decides membership, values(x) builds the value set and
    keys() enumerates the domain in a fixed order.  Value sets are cached.
    """

    def __init__(self, contains, values, keys, size=None):
        self._contains = contains
        self._values = values
        self._keys = keys
        self._size = size
        self._cache = {}

    def __contains__(self, x):
        return self._contains(tuple(x))

    def __getitem__(self, x):
        x = tuple(x)
        if x in self._cache:
            return self._cache[x]
        if not self._contains(x):
            raise KeyError(x)
        v = frozenset(self._values(x))
        self._cache[x] = v
        return v

    def __iter__(self):
        return iter(self._keys())

    def __len__(self):
        if self._size is None:
            self._size = sum(1 for _ in self._keys())
        return self._size


@dataclass(frozen=True, eq=False)
class Problem:
    in_space: SpaceSpec
    out_space: SpaceSpec
    graph: Mapping
    name: str = "P"

    is_top = False

    def dom(self):
        return iter(self.graph)

    def __call__(self, x):
        return self.graph[tuple(x)]

    def in_dom(self, x):
        return tuple(x) in self.graph

    def materialize(self):
        g = {x: frozenset(self.graph[x]) for x in self.graph}
        return Problem(self.in_space, self.out_space, g, self.name)

    def renamed(self, name):
        return Problem(self.in_space, self.out_space, self.graph, name)


class _Top:
    """The adjoined top degree; it has no graph."""

    is_top = True
    name = "TOP"

    def __repr__(self):
        return "TOP"

    def dom(self):
        raise TopError("TOP has no domain")


TOP = _Top()


def is_top(P):
    return getattr(P, "is_top", False)


def make_problem(in_space, out_space, entries, name="P"):
    """Build a concrete problem; duplicate keys merge by union."""
    graph = {}
    for x, ys in entries:
        x = in_space.check(tuple(x), "input")
        ys = [out_space.check(tuple(y), "output") for y in ys]
        if not ys:
            raise EmptyValueError(f"empty value set at {fmt_seq(x)}")
        graph.setdefault(x, set()).update(ys)
    return Problem(in_space, out_space, {x: frozenset(v) for x, v in graph.items()}, name)


def bottom(in_space, out_space):
    return Problem(in_space, out_space, {}, "BOT")


def identity_problem(sp, name="id"):
    return Problem(sp, sp, {x: frozenset([x]) for x in sp.points()}, name)


def lift(P, in_alphabet=None, out_alphabet=None):
    """Reinterpret P over larger alphabets (same graph)."""
    if is_top(P):
        return P
    ia = in_alphabet or P.in_space.alphabet
    oa = out_alphabet or P.out_space.alphabet
    if ia < P.in_space.alphabet or oa < P.out_space.alphabet:
        raise AlphabetError("lift can only enlarge alphabets")
    return Problem(SpaceSpec(ia, P.in_space.depth), SpaceSpec(oa, P.out_space.depth),
                   P.graph, P.name)


def is_choice_function(f, P):
    if is_top(P):
        raise TopError("TOP has no choice functions by convention")
    get = f.get if isinstance(f, Mapping) else f
    for x in P.dom():
        y = get(x)
        if y is None or tuple(y) not in P(x):
            return False
    return True


def is_pointed(P):
    return is_top(P) or any(True for _ in P.graph)


# ---------------------------------------------------------------- witnesses

@dataclass(frozen=True)
class Witness:
    K: Callable
    H: Callable
    name: str = ""


class Reason(Enum):
    K_OUTSIDE_DOMAIN = "K_OUTSIDE_DOMAIN"
    H_ANSWER_WRONG = "H_ANSWER_WRONG"
    TOP_NOT_BELOW = "TOP_NOT_BELOW"


@dataclass(frozen=True)
class Counterexample:
    x: Optional[tuple]
    y: Optional[tuple]
    reason: Reason


@dataclass(frozen=True)
class ReductionReport:
    holds: bool
    counterexample: Optional[Counterexample] = None
    note: str = ""
    skipped: bool = False

    def __bool__(self):
        return self.holds


HOLDS = ReductionReport(True)


def check_reduction(P, Q, w):
    """Pointwise contract: K(x) in dom Q and H(x, y) in P(x) for all y in Q(K(x))."""
    if is_top(Q):
        return HOLDS
    if is_top(P):
        return ReductionReport(False, Counterexample(None, None, Reason.TOP_NOT_BELOW))
    for x in P.dom():
        k = tuple(w.K(x))
        Q.in_space.check(k, "K output")
        if k not in Q.graph:
            return ReductionReport(False, Counterexample(x, k, Reason.K_OUTSIDE_DOMAIN))
        good = P.graph[x]
        for y in sorted(Q.graph[k]):
            h = tuple(w.H(x, y))
            if h not in good:
                P.out_space.check(h, "H output")
                return ReductionReport(False, Counterexample(x, y, Reason.H_ANSWER_WRONG))
    return HOLDS


def identity_witness():
    return Witness(lambda x: x, lambda x, y: y, "id")


def compose_witnesses(w1, w2):
    """w1: P <= Q and w2: Q <= R give P <= R."""
    def K(x):
        return w2.K(w1.K(x))

    def H(x, z):
        return w1.H(x, w2.H(w1.K(x), z))
    return Witness(K, H, f"{w1.name};{w2.name}")


def tabulate_witness(w, P, Q):
    """Full K and H tables over the declared spaces (small spaces only)."""
    K = {x: tuple(w.K(x)) for x in P.in_space.points()}
    H = {(x, y): tuple(w.H(x, y)) for x in P.in_space.points() for y in Q.out_space.points()}
    return K, H


def table_witness(K, H, name="table"):
    return Witness(lambda x: K[tuple(x)], lambda x, y: H[(tuple(x), tuple(y))], name)


# ---------------------------------------------------------------- text formats

def _space_line(tokens):
    kv = dict(t.split("=", 1) for t in tokens)
    try:
        return SpaceSpec(int(kv["alphabet"]), int(kv["depth"]))
    except (KeyError, ValueError):
        raise FormatError(f"bad space line {' '.join(tokens)!r}") from None


def format_problem(P):
    lines = [f"problem {P.name}",
             f"space in alphabet={P.in_space.alphabet} depth={P.in_space.depth}",
             f"space out alphabet={P.out_space.alphabet} depth={P.out_space.depth}"]
    for x in sorted(P.dom()):
        ys = ",".join(fmt_seq(y) for y in sorted(P(x)))
        lines.append(f"map {fmt_seq(x)} -> {ys}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def _lines(text):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def parse_problem(text):
    name, spaces, entries, ended = None, {}, [], False
    for line in _lines(text):
        tok = line.split()
        if tok[0] == "problem" and len(tok) == 2:
            name = tok[1]
        elif tok[0] == "space" and len(tok) == 4 and tok[1] in ("in", "out"):
            spaces[tok[1]] = _space_line(tok[2:])
        elif tok[0] == "map":
            if "->" not in line:
                raise FormatError(f"bad map line {line!r}")
            lhs, rhs = line[3:].split("->", 1)
            entries.append((parse_seq(lhs), [parse_seq(s) for s in rhs.split(",") if s.strip()]))
        elif tok[0] == "end":
            ended = True
        else:
            raise FormatError(f"unexpected line {line!r}")
    if name is None or set(spaces) != {"in", "out"} or not ended:
        raise FormatError("incomplete problem file")
    try:
        return make_problem(spaces["in"], spaces["out"], entries, name)
    except (DimensionError, AlphabetError, EmptyValueError) as e:
        raise FormatError(str(e)) from None


def format_witness(K, H, name="w"):
    lines = [f"witness {name}"]
    for x in sorted(K):
        lines.append(f"K {fmt_seq(x)} -> {fmt_seq(K[x])}")
    for (x, y) in sorted(H):
        lines.append(f"H {fmt_seq(x)} {fmt_seq(y)} -> {fmt_seq(H[(x, y)])}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def parse_witness(text, P=None, Q=None):
    """Parse a witness file; with P, Q given the tables must be total."""
    K, H, name = {}, {}, "w"
    for line in _lines(text):
        tok = line.split()
        if tok[0] == "witness":
            name = tok[1] if len(tok) > 1 else name
        elif tok[0] == "K" and len(tok) == 4 and tok[2] == "->":
            K[parse_seq(tok[1])] = parse_seq(tok[3])
        elif tok[0] == "H" and len(tok) == 5 and tok[3] == "->":
            H[(parse_seq(tok[1]), parse_seq(tok[2]))] = parse_seq(tok[4])
        elif tok[0] == "end":
            pass
        else:
            raise FormatError(f"unexpected line {line!r}")
    if P is not None and Q is not None:
        for x in P.in_space.points():
            if x not in K:
                raise FormatError(f"K missing entry for {fmt_seq(x)}")
            for y in Q.out_space.points():
                if (x, y) not in H:
                    raise FormatError(f"H missing entry for {fmt_seq(x)} {fmt_seq(y)}")
    return table_witness(K, H, name)
