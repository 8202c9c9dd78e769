"""Finite bounded lattices, Heyting/Brouwer tables, formulas, closures and degree quotients.

Elements of a FiniteLattice are 0..n-1; leq[i][j] means i <= j.  Everything is
brute force over elements, pairs, triples or assignments, which is the point:
at this scale the brute-force answer is the oracle.
"""

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional

from .baire_model import TOP, is_top
from .calculus import (Biconditional, coprod, oplus, reduction_search, star_bounded,
                       times, witness_axiom8)
from .errors import (BudgetExceeded, FamilyNotClosed, FormatError, HypothesisError,
                     MissingStructure, NotALattice, NotAPoset, NotBounded, NotClosure,
                     ParseError, PreconditionError, UnassignedVariable)


# ---------------------------------------------------------------- lattices

@dataclass(frozen=True, eq=False)
class FiniteLattice:
    n: int
    leq: tuple
    names: tuple
    meet: tuple
    join: tuple
    bot: int
    top: int
    name: str = "L"

    def le(self, a, b):
        return self.leq[a][b]

    def elements(self):
        return range(self.n)

    def label(self, a):
        return self.names[a]

    def __eq__(self, other):
        return isinstance(other, FiniteLattice) and self.leq == other.leq

    def __hash__(self):
        return hash(self.leq)


def _bound(leq, n, a, b, upper):
    """Least upper (or greatest lower) bound of a, b, or None."""
    if upper:
        cands = [c for c in range(n) if leq[a][c] and leq[b][c]]
        best = [c for c in cands if all(leq[c][d] for d in cands)]
    else:
        cands = [c for c in range(n) if leq[c][a] and leq[c][b]]
        best = [c for c in cands if all(leq[d][c] for d in cands)]
    return best[0] if best else None


def validate_lattice(raw, names=None, name="L"):
    """Check a square boolean order matrix and materialise meet and join tables."""
    leq = tuple(tuple(bool(v) for v in row) for row in raw)
    n = len(leq)
    if any(len(row) != n for row in leq):
        raise NotAPoset("order matrix is not square")
    if n == 0:
        raise NotBounded("the empty order has no bounds")
    for a in range(n):
        if not leq[a][a]:
            raise NotAPoset(f"not reflexive at {a}")
    for a, b in itertools.combinations(range(n), 2):
        if leq[a][b] and leq[b][a]:
            raise NotAPoset(f"not antisymmetric: {a} and {b}")
    for a, b, c in itertools.product(range(n), repeat=3):
        if leq[a][b] and leq[b][c] and not leq[a][c]:
            raise NotAPoset(f"not transitive: {a} <= {b} <= {c}")
    bots = [a for a in range(n) if all(leq[a][b] for b in range(n))]
    tops = [a for a in range(n) if all(leq[b][a] for b in range(n))]
    meet = [[None] * n for _ in range(n)]
    join = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            m, j = _bound(leq, n, a, b, False), _bound(leq, n, a, b, True)
            if m is None or j is None:
                raise NotALattice(f"{a} and {b} have no {'meet' if m is None else 'join'}", (a, b))
            meet[a][b] = meet[b][a] = m
            join[a][b] = join[b][a] = j
    if not bots or not tops:
        raise NotBounded("no least or no greatest element")
    labels = tuple(names) if names else tuple(str(i) for i in range(n))
    return FiniteLattice(n, leq, labels, tuple(map(tuple, meet)), tuple(map(tuple, join)),
                         bots[0], tops[0], name)


def from_relation(n, pairs, names=None, name="L"):
    """Reflexive-transitive closure of the given pairs, then validation."""
    leq = [[i == j for j in range(n)] for i in range(n)]
    for i, j in pairs:
        leq[i][j] = True
    for k in range(n):
        for i in range(n):
            if leq[i][k]:
                for j in range(n):
                    if leq[k][j]:
                        leq[i][j] = True
    return validate_lattice(leq, names, name)


def is_distributive(L):
    r = range(L.n)
    m, j = L.meet, L.join
    return all(m[a][j[b][c]] == j[m[a][b]][m[a][c]] and j[a][m[b][c]] == m[j[a][b]][j[a][c]]
               for a in r for b in r for c in r)


def irreducibles(L):
    """(meet-irreducible set, join-irreducible set)."""
    r = range(L.n)
    mi = {a for a in r if all(a in (b, c) for b in r for c in r if L.meet[b][c] == a)}
    ji = {a for a in r if all(a in (b, c) for b in r for c in r if L.join[b][c] == a)}
    return frozenset(mi), frozenset(ji)


@dataclass
class OpTable:
    """A binary operation table, or the first pair where the extremum is missing."""

    table: Optional[tuple] = None
    offending: Optional[tuple] = None

    @property
    def exists(self):
        return self.table is not None

    def __bool__(self):
        return self.exists

    def __getitem__(self, ab):
        a, b = ab
        return self.table[a][b]


def heyting_table(L):
    """a -> b = the largest c with c ^ a <= b."""
    out = []
    for a in range(L.n):
        row = []
        for b in range(L.n):
            cands = [c for c in range(L.n) if L.leq[L.meet[c][a]][b]]
            best = [c for c in cands if all(L.leq[d][c] for d in cands)]
            if not best:
                return OpTable(None, (a, b))
            row.append(best[0])
        out.append(tuple(row))
    return OpTable(tuple(out))


def brouwer_table(L):
    """Entry (a, b) = the smallest c with b <= c v a."""
    out = []
    for a in range(L.n):
        row = []
        for b in range(L.n):
            cands = [c for c in range(L.n) if L.leq[b][L.join[c][a]]]
            best = [c for c in cands if all(L.leq[c][d] for d in cands)]
            if not best:
                return OpTable(None, (a, b))
            row.append(best[0])
        out.append(tuple(row))
    return OpTable(tuple(out))


def dual(L):
    leq = [[L.leq[j][i] for j in range(L.n)] for i in range(L.n)]
    name = L.name[:-3] if L.name.endswith("^op") else L.name + "^op"
    return validate_lattice(leq, L.names, name)


# ---------------------------------------------------------------- corpus

def chain(k):
    return from_relation(k, [(i, i + 1) for i in range(k - 1)], name=f"chain{k}")


def boolean(k):
    n = 1 << k
    pairs = [(a, b) for a in range(n) for b in range(n) if a & b == a]
    return from_relation(n, pairs, name=f"2^{k}")


def m3():
    return from_relation(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)], name="M3")


def n5():
    # 0 < a=1 < b=2 < 4 and 0 < c=3 < 4
    return from_relation(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)], name="N5")


def square_plus_top():
    """2^2 with a new top adjoined above the old one."""
    return from_relation(5, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)], name="2^2+top")


def standard_corpus():
    return [chain(k) for k in range(2, 7)] + [boolean(2), boolean(3), m3(), n5(), square_plus_top()]


def random_lattice(rng, max_size=7, tries=200):
    """A random poset on <= max_size elements that happens to be a lattice (or None)."""
    for _ in range(tries):
        n = rng.randint(2, max_size)
        # random DAG over a topological order, with 0 bottom and n-1 top
        pairs = [(0, i) for i in range(1, n)] + [(i, n - 1) for i in range(n - 1)]
        pairs += [(i, j) for i in range(1, n - 1) for j in range(i + 1, n - 1) if rng.random() < 0.35]
        try:
            return from_relation(n, pairs, name=f"rand{n}")
        except NotALattice:
            continue
    return None


def lattice_corpus(seed=0, extra=5):
    rng = random.Random(seed)
    out = standard_corpus()
    while extra > 0:
        L = random_lattice(rng)
        if L is not None:
            out.append(validate_lattice(L.leq, name=f"rand{len(out)}"))
            extra -= 1
    return out


def format_lattice(L):
    lines = [f"lattice {L.name}", f"elements {L.n}"]
    lines += [f"leq {i} {j}" for i in range(L.n) for j in range(L.n) if i != j and L.leq[i][j]]
    lines.append("end")
    return "\n".join(lines) + "\n"


def parse_lattice(text):
    name, n, pairs, ended = None, None, [], False
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "lattice" and len(tok) == 2:
                name = tok[1]
            elif tok[0] == "elements" and len(tok) == 2:
                n = int(tok[1])
            elif tok[0] == "leq" and len(tok) == 3:
                pairs.append((int(tok[1]), int(tok[2])))
            elif tok[0] == "end" and len(tok) == 1:
                ended = True
            else:
                raise FormatError(f"unexpected lattice line {line!r}")
        except ValueError:
            raise FormatError(f"bad number in {line!r}") from None
    if name is None or n is None or not ended:
        raise FormatError("incomplete lattice file")
    if any(not (0 <= i < n and 0 <= j < n) for i, j in pairs):
        raise FormatError("leq pair out of range")
    return from_relation(n, pairs, name=name)


# ---------------------------------------------------------------- formulas

@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Imp:
    left: object
    right: object


def Not(a):
    return Imp(a, Bot())


def _tokens(text):
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif text.startswith("->", i):
            yield ("->", i)
            i += 2
        elif ch in "~&|()":
            yield (ch, i)
            i += 1
        elif ch == "p":
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError("variable needs an index", i + 1)
            yield (text[i:j], i)
            i = j
        elif text.startswith("bot", i) or text.startswith("top", i):
            yield (text[i:i + 3], i)
            i += 3
        else:
            raise ParseError(f"unexpected character {ch!r}", i + 1)
    yield ("$", len(text))


class _Parser:
    # positions are reported 1-based; end of input is len(text) + 1

    def __init__(self, text):
        self.toks = list(_tokens(text))
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def take(self, kind=None):
        tok, pos = self.toks[self.i]
        if kind is not None and tok != kind:
            raise ParseError(f"expected {kind!r}", pos + 1)
        self.i += 1
        return tok

    def fail(self, what):
        tok, pos = self.toks[self.i]
        got = "end of input" if tok == "$" else repr(tok)
        raise ParseError(f"expected {what}, got {got}", pos + 1)

    def imp(self):
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return Imp(left, self.imp())
        return left

    def disj(self):
        f = self.conj()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        tok = self.peek()
        if tok == "~":
            self.take()
            return Not(self.unary())
        if tok == "(":
            self.take()
            f = self.imp()
            self.take(")")
            return f
        if tok == "bot":
            self.take()
            return Bot()
        if tok == "top":
            self.take()
            return Top()
        if tok.startswith("p"):
            self.take()
            return Var(int(tok[1:]))
        self.fail("a formula")


def parse_formula(text):
    p = _Parser(text)
    f = p.imp()
    if p.peek() != "$":
        p.fail("end of input")
    return f


_PREC = {Imp: 1, Or: 2, And: 3}


def pretty(f, outer=0):
    """Minimal-parenthesis rendering; parse_formula(pretty(f)) == f."""
    if isinstance(f, Var):
        return f"p{f.index}"
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Imp) and isinstance(f.right, Bot):
        return "~" + pretty(f.left, 4)
    prec = _PREC[type(f)]
    op = {Imp: "->", Or: "|", And: "&"}[type(f)]
    if isinstance(f, Imp):
        # right associative
        s = f"{pretty(f.left, prec + 1)} {op} {pretty(f.right, prec)}"
    else:
        s = f"{pretty(f.left, prec)} {op} {pretty(f.right, prec + 1)}"
    return f"({s})" if prec < outer else s


def variables(f):
    if isinstance(f, Var):
        return {f.index}
    if isinstance(f, (And, Or, Imp)):
        return variables(f.left) | variables(f.right)
    return set()


def arity(f):
    vs = variables(f)
    return max(vs) + 1 if vs else 0


def random_formula(rng, depth, nvars):
    if depth == 0 or rng.random() < 0.25:
        r = rng.randrange(nvars + 2)
        return Var(r) if r < nvars else (Bot() if r == nvars else Top())
    k = rng.randrange(4)
    if k == 3:
        return Not(random_formula(rng, depth - 1, nvars))
    op = (And, Or, Imp)[k]
    return op(random_formula(rng, depth - 1, nvars), random_formula(rng, depth - 1, nvars))


def _need_heyting(L, H):
    H = H if H is not None else heyting_table(L)
    if not H:
        raise MissingStructure(f"{L.name} has no Heyting implication (pair {H.offending})")
    return H


def eval_formula(L, f, assignment, H=None):
    H = _need_heyting(L, H)

    def ev(g):
        if isinstance(g, Var):
            if g.index >= len(assignment) or assignment[g.index] is None:
                raise UnassignedVariable(f"p{g.index} has no value")
            return assignment[g.index]
        if isinstance(g, Bot):
            return L.bot
        if isinstance(g, Top):
            return L.top
        a, b = ev(g.left), ev(g.right)
        if isinstance(g, And):
            return L.meet[a][b]
        if isinstance(g, Or):
            return L.join[a][b]
        return H[a, b]
    return ev(f)


def refuting_assignment(L, f, H=None):
    """First assignment (lexicographic) with value other than top, or None."""
    H = _need_heyting(L, H)
    for asg in itertools.product(range(L.n), repeat=arity(f)):
        if eval_formula(L, f, asg, H) != L.top:
            return asg
    return None


def is_valid(L, f, H=None):
    return refuting_assignment(L, f, H) is None


JANKOV = Or(Not(Var(0)), Not(Not(Var(0))))


def jankov_valid(L):
    return is_valid(L, JANKOV)


def check_jankov_iff(L):
    """Jankov validity iff bot is meet-irreducible, for L with join-irreducible top."""
    mi, ji = irreducibles(L)
    if L.top not in ji:
        raise HypothesisError(f"top of {L.name} is join-reducible")
    return Biconditional(jankov_valid(L), L.bot in mi)


# ---------------------------------------------------------------- closures and maps

def check_closure(L, C):
    C = list(C)
    if len(C) != L.n or any(not (0 <= c < L.n) for c in C):
        raise PreconditionError("C must be a total map on the elements")
    for a in range(L.n):
        if not L.leq[a][C[a]]:
            raise NotClosure(f"{a} is not below C({a})", "extensive")
    for a, b in itertools.product(range(L.n), repeat=2):
        if L.leq[a][b] and not L.leq[C[a]][C[b]]:
            raise NotClosure(f"{a} <= {b} but C({a}) not <= C({b})", "monotone")
    for a in range(L.n):
        if C[C[a]] != C[a]:
            raise NotClosure(f"C(C({a})) != C({a})", "idempotent")
    return True


@dataclass(frozen=True, eq=False)
class ImageLattice:
    lattice: FiniteLattice
    elements: tuple         # image index -> element of the original lattice


def image_lattice(L, C):
    """C(L) with the induced order; its meet is L's meet and its join is C(a v b)."""
    check_closure(L, C)
    img = sorted(set(C))
    pos = {e: i for i, e in enumerate(img)}
    leq = [[L.leq[a][b] for b in img] for a in img]
    M = validate_lattice(leq, [L.names[e] for e in img], f"C({L.name})")
    for a, b in itertools.product(img, repeat=2):
        if M.meet[pos[a]][pos[b]] != pos[L.meet[a][b]]:
            raise AssertionError("closure image is not closed under meets")
        if M.join[pos[a]][pos[b]] != pos[C[L.join[a][b]]]:
            raise AssertionError("image join differs from C(a v b)")
    return ImageLattice(M, tuple(img))


def upper_cone(L, b):
    return [L.join[a][b] for a in range(L.n)]


HOM_KINDS = ("MEET", "JOIN", "LATTICE", "HEYTING", "BROUWER")


def hom_check(kind, m, L1, L2):
    """Does m: L1 -> L2 preserve the structure named by kind (suffix -EMBEDDING adds injectivity)?"""
    base, _, emb = kind.partition("-")
    if base not in HOM_KINDS or emb not in ("", "EMBEDDING"):
        raise ValueError(f"unknown homomorphism kind {kind!r}")
    m = list(m)
    if len(m) != L1.n or any(not (0 <= v < L2.n) for v in m):
        raise PreconditionError("m must be a total map L1 -> L2")
    pairs = list(itertools.product(range(L1.n), repeat=2))
    ok = True
    if base in ("MEET", "LATTICE", "HEYTING", "BROUWER"):
        ok &= all(m[L1.meet[a][b]] == L2.meet[m[a]][m[b]] for a, b in pairs)
    if base in ("JOIN", "LATTICE", "HEYTING", "BROUWER"):
        ok &= all(m[L1.join[a][b]] == L2.join[m[a]][m[b]] for a, b in pairs)
    if base in ("HEYTING", "BROUWER"):
        tab = heyting_table if base == "HEYTING" else brouwer_table
        T1, T2 = tab(L1), tab(L2)
        if not T1 or not T2:
            raise MissingStructure(f"{base.lower()} table missing on {L1.name if not T1 else L2.name}")
        ok &= m[L1.bot] == L2.bot and m[L1.top] == L2.top
        ok &= all(m[T1[a, b]] == T2[m[a], m[b]] for a, b in pairs)
    if emb:
        ok &= len(set(m)) == len(m)
    return bool(ok)


def theory_containment_sample(L1, L2, m, formulas):
    """For a Heyting embedding L1 -> L2: every sampled formula valid in L2 is valid in L1."""
    if not hom_check("HEYTING-EMBEDDING", m, L1, L2):
        raise PreconditionError("m is not a Heyting embedding")
    H1, H2 = heyting_table(L1), heyting_table(L2)
    return all(is_valid(L1, f, H1) for f in formulas if is_valid(L2, f, H2))


def embeddings(L1, L2, kind="HEYTING-EMBEDDING"):
    """All maps of the given kind (brute force over injective maps)."""
    for m in itertools.permutations(range(L2.n), L1.n):
        try:
            if hom_check(kind, m, L1, L2):
                yield m
        except MissingStructure:
            return


# ---------------------------------------------------------------- degree quotient

@dataclass
class DegreeStructure:
    problems: list
    cls: object
    preorder: list
    classes: list                   # lists of problem indices, ordered by least index
    class_of_index: list            # problem index -> class id
    quotient: Optional[FiniteLattice] = None
    reason: str = ""                # why quotient is None
    distributive: Optional[bool] = None
    meet_join: dict = field(default_factory=dict)
    budget: Optional[int] = None

    @property
    def reps(self):
        return [c[0] for c in self.classes]

    def rep(self, c):
        return self.problems[self.classes[c][0]]

    def leq(self, c, d):
        return self.preorder[self.classes[c][0]][self.classes[d][0]]

    def class_of(self, P):
        """Class id of a problem equivalent to some representative, else None."""
        for c in range(len(self.classes)):
            R = self.rep(c)
            if _reduces(P, R, self.cls, self.budget) and _reduces(R, P, self.cls, self.budget):
                return c
        return None

    def report(self):
        lines = [f"problems {len(self.problems)}", f"class {self.cls.describe()}",
                 f"classes {len(self.classes)}"]
        for c, members in enumerate(self.classes):
            names = " ".join(self.problems[i].name for i in members)
            lines.append(f"class {c} rep {self.problems[members[0]].name} members {names}")
        for c in range(len(self.classes)):
            ups = [str(d) for d in range(len(self.classes)) if d != c and self.leq(c, d)]
            lines.append(f"below {c}: {' '.join(ups) if ups else '-'}")
        lines.append(f"lattice {'yes' if self.quotient else 'no'}")
        if self.quotient is None:
            lines.append(f"reason {self.reason}")
        else:
            lines.append(f"distributive {'yes' if self.distributive else 'no'}")
        for k in sorted(self.meet_join):
            lines.append(f"{k} {self.meet_join[k]}")
        return "\n".join(lines) + "\n"


def _reduces(P, Q, cls, budget):
    res = reduction_search(P, Q, cls, budget)
    if res.status == "BUDGET":
        raise BudgetExceeded(f"search for {P.name} <= {Q.name} exceeded its budget",
                             res.candidates_checked)
    return res.found


def degree_quotient(problems, cls, budget=None, check_ops=True):
    """Preorder by exhaustive search, classes with least-index representatives, quotient order."""
    n = len(problems)
    pre = [[i == j or _reduces(problems[i], problems[j], cls, budget) for j in range(n)]
           for i in range(n)]
    cid = [None] * n
    classes = []
    for i in range(n):
        if cid[i] is None:
            members = [j for j in range(i, n) if pre[i][j] and pre[j][i]]
            for j in members:
                cid[j] = len(classes)
            classes.append(members)
    D = DegreeStructure(list(problems), cls, pre, classes, cid, budget=budget)
    k = len(classes)
    leq = [[pre[classes[c][0]][classes[d][0]] for d in range(k)] for c in range(k)]
    names = [problems[c[0]].name for c in classes]
    try:
        D.quotient = validate_lattice(leq, names, "W/=")
        D.distributive = is_distributive(D.quotient)
    except (NotALattice, NotBounded) as e:
        D.reason = f"{type(e).__name__}: {e}"
    if check_ops and D.quotient is not None:
        D.meet_join = _check_meet_join(D)
    return D


def _op_table(D, op):
    """Class of op(rep c, rep d) for all c, d; None entries where the family is not closed."""
    k = len(D.classes)
    out = [[None] * k for _ in range(k)]
    for c in range(k):
        for d in range(k):
            try:
                X = op(D.rep(c), D.rep(d))
            except Exception:
                continue
            out[c][d] = _class_with_top(D, X)
    return out


def _class_with_top(D, X):
    if is_top(X):
        for c in range(len(D.classes)):
            if is_top(D.rep(c)):
                return c
        return None
    return D.class_of(X)


def _check_meet_join(D):
    """oplus gives quotient meets and coprod quotient joins, where the family is closed."""
    L = D.quotient
    out = {}
    for label, op, table in (("meet", oplus, L.meet), ("join", coprod, L.join)):
        tab = _op_table(D, op)
        closed = all(v is not None for row in tab for v in row)
        agree = all(tab[c][d] == table[c][d] for c in range(L.n) for d in range(L.n)
                    if tab[c][d] is not None)
        out[label] = ("closed " if closed else "open ") + ("agrees" if agree else "DISAGREES")
    return out


# ---------------------------------------------------------------- Kleene axioms

@dataclass
class AxiomResult:
    axiom: int
    passed: bool
    checked: int
    witness: Optional[tuple] = None     # first failing class tuple

    def line(self):
        tail = f" fail at {self.witness}" if self.witness is not None else ""
        return f"axiom {self.axiom} {'pass' if self.passed else 'FAIL'} checked {self.checked}{tail}"


@dataclass
class KleeneReport:
    star_budget: int
    results: list
    zero: int
    one: int

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    def report(self):
        lines = [f"star_budget {self.star_budget}", f"zero class {self.zero}", f"one class {self.one}"]
        lines += [r.line() for r in self.results]
        lines.append(f"kleene {'pass' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def kleene_check(D, zero, one, star_budget=3):
    """Axioms 1-7 as equalities of classes (axiom 4 as (a v b) c = ac v bc), axiom 8 by witness.

    zero and one are problem indices of the bottom (empty) problem and the
    identity.  The operation tables are computed on representatives; the
    tables are then checked to be congruences on the remaining members.
    """
    if D.quotient is None:
        raise PreconditionError(f"quotient is not a lattice: {D.reason}")
    if any(is_top(P) for P in D.problems):
        raise PreconditionError("the Kleene check runs on families without TOP")
    k = len(D.classes)
    z, e = D.class_of_index[zero], D.class_of_index[one]
    ops = {"x": times, "|": coprod}

    def image(label, X):
        c = D.class_of(X)
        if c is None:
            raise FamilyNotClosed(f"{label} falls outside the family", label)
        return c

    tab = {}
    for s, op in ops.items():
        tab[s] = [[image(f"{D.rep(c).name} {s} {D.rep(d).name}", op(D.rep(c), D.rep(d)))
                   for d in range(k)] for c in range(k)]
    star = [image(f"{D.rep(c).name}*{star_budget}", star_bounded(D.rep(c), star_budget))
            for c in range(k)]
    # congruence: non-representative members behave like their representative
    for i, P in enumerate(D.problems):
        c = D.class_of_index[i]
        if i == D.classes[c][0]:
            continue
        for s, op in ops.items():
            for d in range(k):
                if image(f"{P.name} {s} {D.rep(d).name}", op(P, D.rep(d))) != tab[s][c][d]:
                    raise AssertionError(f"{s} is not a congruence at {P.name}")
    T, J = tab["x"], tab["|"]
    L = D.quotient
    R = range(k)
    results = []

    def run(num, cases, ok):
        bad, count = None, 0
        for case in cases:
            count += 1
            if not ok(*case):
                bad = case
                break
        results.append(AxiomResult(num, bad is None, count, bad))

    triples = list(itertools.product(R, repeat=3))
    run(1, triples, lambda a, b, c: T[T[a][b]][c] == T[a][T[b][c]])
    run(2, [(a,) for a in R], lambda a: T[e][a] == a and T[a][e] == a)
    run(3, triples, lambda a, b, c: T[a][J[b][c]] == J[T[a][b]][T[a][c]])
    run(4, triples, lambda a, b, c: T[J[a][b]][c] == J[T[a][c]][T[b][c]])
    run(5, [(a,) for a in R], lambda a: T[z][a] == z and T[a][z] == z)
    run(6, itertools.product(R, repeat=2), lambda a, b: T[a][b] == T[b][a])
    run(7, [(a,) for a in R], lambda a: L.leq[J[e][T[a][star[a]]]][star[a]])
    # axiom 8: where a x b <= a, build the recursion witness and check it
    cases, bad = 0, None
    for a, b in itertools.product(R, repeat=2):
        if not L.leq[T[a][b]][a]:
            continue
        cases += 1
        P, Q = D.rep(a), D.rep(b)
        res = reduction_search(times(P, Q), P, D.cls, D.budget)
        good = res.found and witness_axiom8(P, Q, res.witness, star_budget).check().holds
        good = good and L.leq[T[a][star[b]]][a]
        if not good and bad is None:
            bad = (a, b)
    results.append(AxiomResult(8, bad is None, cases, bad))
    return KleeneReport(star_budget, results, z, e)
