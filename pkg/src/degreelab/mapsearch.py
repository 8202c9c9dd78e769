"""SAT-backed search for reduction witnesses inside a restricted map family.

A map family fixes, for every output position k and argument tuple, a group
(the entry of the map that governs that output symbol) and a finite list of
options for each group.  Choosing one option per group determines the map.
Modulus-bounded transducers use (k, argument prefixes) as groups and output
symbols as options; clone maps use k as the group and term vectors as options.

search_witness encodes "some (K, H) in the families reduces P to Q" as CNF and
asks a SAT solver.  UNSAT is an exhaustive certificate of absence over the whole
family; a model is refined group by group to the lexicographically least one.
"""

from dataclasses import dataclass
from typing import Optional

from pysat.card import CardEnc, EncType
from pysat.formula import IDPool
from pysat.solvers import Solver

from .baire_model import Witness


# ---------------------------------------------------------------- families

@dataclass(frozen=True)
class Transducer:
    """A map whose output position k reads each argument through position k + modulus."""

    modulus: int
    arg_spaces: tuple
    out_space: object
    table: dict

    def cut(self, k, i):
        return min(k + self.modulus + 1, self.arg_spaces[i].depth)

    def key(self, k, args):
        return (k, tuple(tuple(a[:self.cut(k, i)]) for i, a in enumerate(args)))

    def __call__(self, *args):
        return tuple(self.table.get(self.key(k, args), 0) for k in range(self.out_space.depth))

    def depends_only_on_prefix(self):
        # holds structurally: the table is indexed by prefixes only
        return all(len(p) == self.cut(k, i) for (k, ps) in self.table for i, p in enumerate(ps))


class ModulusFamily:
    def __init__(self, arg_spaces, out_space, modulus):
        self.arg_spaces = tuple(arg_spaces)
        self.out_space = out_space
        self.modulus = modulus

    def cut(self, k, i):
        return min(k + self.modulus + 1, self.arg_spaces[i].depth)

    def key(self, k, args):
        return (k, tuple(tuple(a[:self.cut(k, i)]) for i, a in enumerate(args)))

    def n_options(self, key):
        return self.out_space.alphabet

    def value(self, key, o, args):
        return o

    def groups_at(self, k):
        n = 1
        for i, sp in enumerate(self.arg_spaces):
            n *= sp.alphabet ** self.cut(k, i)
        return n

    def n_groups(self):
        return sum(self.groups_at(k) for k in range(self.out_space.depth))

    def size(self):
        return self.out_space.alphabet ** self.n_groups()

    def group_index(self, key):
        k, prefixes = key
        idx = sum(self.groups_at(j) for j in range(k))
        r = 0
        for i, p in enumerate(prefixes):
            a = self.arg_spaces[i].alphabet
            for c in p:
                r = r * a + c
        return idx + r

    def rank(self, choice):
        a = self.out_space.alphabet
        n = self.n_groups()
        return sum(o * a ** (n - 1 - self.group_index(g)) for g, o in choice.items())

    def build(self, choice):
        return Transducer(self.modulus, self.arg_spaces, self.out_space, dict(choice))

    def realize(self, assignment):
        """Group choice reproducing assignment (args -> output), or None."""
        choice = {}
        for args, out in assignment.items():
            for k, s in enumerate(out):
                g = self.key(k, args)
                if choice.setdefault(g, s) != s:
                    return None
        return choice


class CloneMap:
    def __init__(self, clone, terms, name=""):
        self.clone = clone
        self.terms = tuple(terms)
        self.name = name

    def __call__(self, *args):
        flat = tuple(c for a in args for c in a)
        return tuple(self.clone.eval_term(t, flat) for t in self.terms)

    def describe(self):
        return "[" + ", ".join(self.clone.term_str(t) for t in self.terms) + "]"


class CloneFamily:
    """Maps whose output positions are clone terms, known on a finite point set."""

    def __init__(self, clone, points, out_space, limit=200000):
        self.clone = clone
        self.out_space = out_space
        self.points = [tuple(tuple(a) for a in args) for args in points]
        self.index = {args: i for i, args in enumerate(self.points)}
        flat = [tuple(c for a in args for c in a) for args in self.points]
        vecs = clone.closure(flat, limit) if flat else clone.closure([()], limit)
        self.options = [(v, t) for v, t in vecs if all(c < out_space.alphabet for c in v)]

    def key(self, k, args):
        return k

    def n_options(self, key):
        return len(self.options)

    def value(self, key, o, args):
        return self.options[o][0][self.index[tuple(tuple(a) for a in args)]]

    def n_groups(self):
        return self.out_space.depth

    def size(self):
        return len(self.options) ** self.out_space.depth

    def group_index(self, key):
        return key

    def rank(self, choice):
        n, d = len(self.options), self.out_space.depth
        return sum(o * n ** (d - 1 - k) for k, o in choice.items())

    def realize(self, assignment):
        if not hasattr(self, "_vec_index"):
            self._vec_index = {v: i for i, (v, _) in enumerate(self.options)}
        choice = {}
        for k in range(self.out_space.depth):
            vec = tuple(assignment[args][k] for args in self.points)
            o = self._vec_index.get(vec)
            if o is None:
                return None
            choice[k] = o
        return choice

    def prefix_ok(self, outs):
        """Can outputs on the first len(outs) points be extended to a member?"""
        i = len(outs)
        if not hasattr(self, "_prefixes"):
            self._prefixes = {}
        if i not in self._prefixes:
            self._prefixes[i] = set(v[:i] for v, _ in self.options)
        pre = self._prefixes[i]
        return all(tuple(o[k] for o in outs) in pre for k in range(self.out_space.depth))

    def build(self, choice):
        return CloneMap(self.clone, [self.options[choice.get(k, 0)][1]
                                     for k in range(self.out_space.depth)])


class TableMap:
    """A map given by its values on finitely many argument tuples (zeros elsewhere)."""

    def __init__(self, table, out_space):
        self.table = dict(table)
        self.out_space = out_space

    def __call__(self, *args):
        return self.table.get(tuple(tuple(a) for a in args), self.out_space.zeros())

    def describe(self):
        return "{" + ", ".join(f"{k}->{v}" for k, v in sorted(self.table.items())) + "}"


class LocalCloneFamily:
    """Maps of a local clone on a point set: each (position, point) is chosen freely
    among the symbols the clone can produce at that point."""

    def __init__(self, clone, points, out_space):
        self.clone = clone
        self.out_space = out_space
        self.points = [tuple(tuple(a) for a in args) for args in points]
        self.index = {args: i for i, args in enumerate(self.points)}
        self.allowed = []
        for args in self.points:
            flat = tuple(c for a in args for c in a)
            self.allowed.append([s for s in clone.point_values(flat) if s < out_space.alphabet])

    def key(self, k, args):
        return (k, self.index[tuple(tuple(a) for a in args)])

    def n_options(self, key):
        return len(self.allowed[key[1]])

    def value(self, key, o, args):
        return self.allowed[key[1]][o]

    def n_groups(self):
        return self.out_space.depth * len(self.points)

    def size(self):
        n = 1
        for al in self.allowed:
            n *= len(al) ** self.out_space.depth
        return n

    def group_index(self, key):
        k, j = key
        return k * len(self.points) + j

    def rank(self, choice):
        r = 0
        for k in range(self.out_space.depth):
            for j, al in enumerate(self.allowed):
                r = r * len(al) + choice.get((k, j), 0)
        return r

    def realize(self, assignment):
        choice = {}
        for args, out in assignment.items():
            j = self.index[args]
            for k, s in enumerate(out):
                if s not in self.allowed[j]:
                    return None
                choice[(k, j)] = self.allowed[j].index(s)
        return choice

    def build(self, choice):
        table = {}
        for j, args in enumerate(self.points):
            table[args] = tuple(self.allowed[j][choice.get((k, j), 0)] if self.allowed[j] else 0
                                for k in range(self.out_space.depth))
        return TableMap(table, self.out_space)


# ---------------------------------------------------------------- encoder

@dataclass
class SearchResult:
    status: str                    # FOUND, ABSENT, BUDGET
    witness: Optional[Witness]
    exhaustive: bool
    candidates_checked: int
    k_map: object = None
    h_map: object = None

    @property
    def found(self):
        return self.status == "FOUND"


class _Encoder:
    def __init__(self, budget=None):
        self.pool = IDPool()
        self.clauses = []
        self.sel = {}       # (fam, key) -> list of vars per option
        self.out = {}       # (fam, args, k, s) -> var or None
        self.families = {}
        self.budget = budget

    def new(self):
        return self.pool.id()

    def sel_vars(self, fam, key):
        g = (fam, key)
        if g not in self.sel:
            family = self.families[fam]
            vs = [self.new() for _ in range(family.n_options(key))]
            self.sel[g] = vs
            self.clauses.append(list(vs))
            if len(vs) > 1:
                enc = CardEnc.atmost(vs, 1, vpool=self.pool,
                                     encoding=EncType.seqcounter if len(vs) > 6 else EncType.pairwise)
                self.clauses.extend(enc.clauses)
        return self.sel[g]

    def out_lit(self, fam, args, k, s):
        """Literal for "output position k of the map at args equals s" (None if impossible)."""
        ck = (fam, args, k, s)
        if ck in self.out:
            return self.out[ck]
        family = self.families[fam]
        key = family.key(k, args)
        vs = self.sel_vars(fam, key)
        support = [v for o, v in enumerate(vs) if family.value(key, o, args) == s]
        if not support:
            self.out[ck] = None
            return None
        if len(support) == 1:
            lit = support[0]
        else:
            lit = self.new()
            self.clauses.append([-lit] + support)
            for v in support:
                self.clauses.append([-v, lit])
        self.out[ck] = lit
        return lit

    def equals_lit(self, fam, args, target):
        """Literal equivalent to "the map at args equals target" (None if impossible)."""
        lits = []
        for k, s in enumerate(target):
            lit = self.out_lit(fam, args, k, s)
            if lit is None:
                return None
            lits.append(lit)
        a = self.new()
        for lit in lits:
            self.clauses.append([-a, lit])
        self.clauses.append([a] + [-lit for lit in lits])
        return a


def search_witness(P, Q, kfam, hfam, budget=None, canonical=True):
    """Find the least (K, H) in kfam x hfam reducing P to Q, or prove none exists."""
    total = kfam.size() * hfam.size()
    enc = _Encoder(budget)
    enc.families = {"K": kfam, "H": hfam}
    Pdom = sorted(P.dom())
    Qdom = sorted(Q.dom())
    impossible = False
    for x in Pdom:
        good = sorted(P(x))
        options = []
        for q in Qdom:
            a = enc.equals_lit("K", (x,), q)
            if a is None:
                continue
            options.append(a)
            for y in sorted(Q(q)):
                answers = [enc.equals_lit("H", (x, y), v) for v in good]
                answers = [d for d in answers if d is not None]
                enc.clauses.append([-a] + answers)
        if not options:
            impossible = True
            break
        enc.clauses.append(options)
    if impossible:
        return SearchResult("ABSENT", None, True, total)
    with Solver(name="cd15", bootstrap_with=enc.clauses) as solver:
        ok = _solve(solver, [], budget)
        if ok is None:
            return SearchResult("BUDGET", None, False, 0)
        if not ok:
            return SearchResult("ABSENT", None, True, total)
        model = set(v for v in solver.get_model() if v > 0)
        groups = sorted(enc.sel, key=lambda g: (g[0] != "K", enc.families[g[0]].group_index(g[1])))
        fixed = []
        choice = {"K": {}, "H": {}}
        for g in groups:
            vs = enc.sel[g]
            cur = min(o for o, v in enumerate(vs) if v in model)
            if canonical:
                while cur > 0:
                    trial = fixed + [-v for v in vs[cur:]]
                    ok = _solve(solver, trial, budget)
                    if ok is None:
                        return SearchResult("BUDGET", None, False, 0)
                    if not ok:
                        break
                    model = set(v for v in solver.get_model() if v > 0)
                    cur = min(o for o, v in enumerate(vs) if v in model)
            fixed.append(vs[cur])
            choice[g[0]][g[1]] = cur
    kmap = kfam.build(choice["K"])
    hmap = hfam.build(choice["H"])
    rank = kfam.rank(choice["K"]) * hfam.size() + hfam.rank(choice["H"])
    w = Witness(lambda x: kmap(x), lambda x, y: hmap(x, y), "search")
    return SearchResult("FOUND", w, False, rank + 1, kmap, hmap)


def search_map(fam, constraints, budget=None, canonical=True):
    """Least single map in fam with f(args) in allowed for every (args, allowed)."""
    enc = _Encoder(budget)
    enc.families = {"F": fam}
    for args, allowed in constraints:
        lits = [enc.equals_lit("F", args, tuple(t)) for t in sorted(allowed)]
        lits = [a for a in lits if a is not None]
        if not lits:
            return SearchResult("ABSENT", None, True, fam.size())
        enc.clauses.append(lits)
    with Solver(name="cd15", bootstrap_with=enc.clauses) as solver:
        ok = _solve(solver, [], budget)
        if ok is None:
            return SearchResult("BUDGET", None, False, 0)
        if not ok:
            return SearchResult("ABSENT", None, True, fam.size())
        model = set(v for v in solver.get_model() if v > 0)
        choice = {}
        fixed = []
        for g in sorted(enc.sel, key=lambda g: fam.group_index(g[1])):
            vs = enc.sel[g]
            cur = min(o for o, v in enumerate(vs) if v in model)
            while canonical and cur > 0:
                ok = _solve(solver, fixed + [-v for v in vs[cur:]], budget)
                if ok is None:
                    return SearchResult("BUDGET", None, False, 0)
                if not ok:
                    break
                model = set(v for v in solver.get_model() if v > 0)
                cur = min(o for o, v in enumerate(vs) if v in model)
            fixed.append(vs[cur])
            choice[g[1]] = cur
    f = fam.build(choice)
    return SearchResult("FOUND", None, False, fam.rank(choice) + 1, f, None)


def _solve(solver, assumptions, budget):
    if budget is None:
        return solver.solve(assumptions=assumptions)
    solver.conf_budget(budget)
    return solver.solve_limited(assumptions=assumptions)


def relevant_h_points(P, Q):
    """(x, y) pairs the H map can ever be queried on in a reduction of P to Q."""
    ys = sorted(set(y for q in Q.dom() for y in Q(q)))
    return [(x, y) for x in sorted(P.dom()) for y in ys]
