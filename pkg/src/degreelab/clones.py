"""Position-wise clones on a finite alphabet.

A clone member maps a tuple of input symbols to one output symbol and is a
term over generator operations, projections and constants.  A map between
sequence spaces belongs to the clone when every output position is such a
term of the input positions.  Codec rewirings (pairing, tagging, shift) are
projections and constants, so they belong to every clone.

Membership questions are only ever asked on a finite set of relevant input
points, so the closure is computed on value vectors over those points.
"""

import itertools
from dataclasses import dataclass, field
from typing import Callable

from .errors import BudgetExceeded, FormatError


def _builtin_table():
    return {
        "min": (2, lambda a, x, y: min(x, y)),
        "max": (2, lambda a, x, y: max(x, y)),
        "succ": (1, lambda a, x: min(x + 1, a - 1)),
        "pred": (1, lambda a, x: max(x - 1, 0)),
        "neg": (1, lambda a, x: a - 1 - x),
        "iszero": (1, lambda a, x: int(x == 0)),
        "nonzero": (1, lambda a, x: int(x != 0)),
        "eq": (2, lambda a, x, y: int(x == y)),
        "lt": (2, lambda a, x, y: int(x < y)),
        "ifz": (2, lambda a, x, y: y if x == 0 else x),
        "ifnz": (2, lambda a, x, y: y if x != 0 else 0),
        "mux": (3, lambda a, c, x, y: x if c == 0 else y),
        "and": (2, lambda a, x, y: int(x != 0 and y != 0)),
        "or": (2, lambda a, x, y: int(x != 0 or y != 0)),
        "ismax": (1, lambda a, x: int(x == a - 1)),
    }


BUILTINS = _builtin_table()
# codec generators are rewirings: they add nothing beyond projections/constants
CODEC_NAMES = ("pair", "unpair", "tuple", "untuple", "tag0", "tag1", "shift", "id")


@dataclass(frozen=True)
class Generator:
    name: str
    arity: int
    fn: Callable = field(compare=False)
    spec: str = ""

    def __call__(self, *args):
        return self.fn(*args)


def builtin(name, alphabet):
    if name.startswith("const") and name[5:].isdigit():
        c = int(name[5:])
        return Generator(name, 0, lambda: c, name)
    if name not in BUILTINS:
        raise FormatError(f"unknown builtin generator {name!r}")
    arity, f = BUILTINS[name]
    return Generator(name, arity, lambda *xs: f(alphabet, *xs), name)


def table_generator(name, arity, values, alphabet):
    """values lists f(args) for args in lexicographic order over the alphabet."""
    if len(values) != alphabet ** arity:
        raise FormatError(f"generator {name}: table needs {alphabet ** arity} entries")
    if any(not 0 <= v < alphabet for v in values):
        raise FormatError(f"generator {name}: table leaves alphabet")
    vals = tuple(values)

    def f(*xs):
        i = 0
        for x in xs:
            i = i * alphabet + x
        return vals[i]
    return Generator(name, arity, f, f"{arity}:{','.join(map(str, vals))}")


@dataclass(frozen=True)
class Clone:
    name: str
    alphabet: int
    generators: tuple
    depth: int = 1
    constants: tuple = (0, 1)
    # local: the clone is the polymorphism clone of unary relations, so a
    # vector is realisable on a point set iff each entry is realisable at its
    # own point.  Declared, and cross-checked against closure in the tests.
    local: bool = False

    def point_values(self, point):
        """Symbols some member takes at this single point."""
        return sorted(set(v[0] for v, _ in self.closure([tuple(point)])))

    def closure(self, points, limit=200000):
        """Distinct value vectors over points realised by clone terms.

        Returns a list of (vector, term) in canonical order: constants, then
        projections, then terms by composition round and generator order.
        """
        n = len(points[0]) if points else 0
        seen = {}
        order = []

        def add(vec, term):
            if vec not in seen:
                seen[vec] = term
                order.append((vec, term))
                if len(order) > limit:
                    raise BudgetExceeded(f"clone closure exceeds {limit} vectors", len(order))
                return True
            return False

        for c in self.constants:
            add(tuple(c for _ in points), ("c", c))
        for i in range(n):
            add(tuple(p[i] for p in points), ("p", i))
        for g in self.generators:
            if g.arity == 0:
                c = g()
                add(tuple(c for _ in points), ("c", c))
        prev_count = 0
        for _ in range(self.depth):
            current = list(order)
            fresh_from = prev_count
            prev_count = len(current)
            grew = False
            for gi, g in enumerate(self.generators):
                if g.arity == 0:
                    continue
                for combo in _combos(len(current), g.arity, fresh_from):
                    vecs = [current[j][0] for j in combo]
                    vec = tuple(g(*col) for col in zip(*vecs)) if points else ()
                    if add(vec, ("g", gi, tuple(current[j][1] for j in combo))):
                        grew = True
            if not grew:
                break
        return order

    def eval_term(self, term, inp):
        kind = term[0]
        if kind == "c":
            return term[1]
        if kind == "p":
            return inp[term[1]]
        g = self.generators[term[1]]
        return g(*(self.eval_term(t, inp) for t in term[2]))

    def term_str(self, term):
        kind = term[0]
        if kind == "c":
            return str(term[1])
        if kind == "p":
            return f"x{term[1]}"
        g = self.generators[term[1]]
        return f"{g.name}({','.join(self.term_str(t) for t in term[2])})"


def _combos(size, arity, fresh_from):
    """Index tuples with at least one index >= fresh_from (new material)."""
    for combo in itertools.product(range(size), repeat=arity):
        if max(combo) >= fresh_from:
            yield combo


def make_clone(name, alphabet, names, depth=1, constants=(0, 1), local=False):
    gens = tuple(builtin(n, alphabet) for n in names)
    return Clone(name, alphabet, gens, depth, tuple(constants), local)


# ---------------------------------------------------------------- file format

def parse_clone(text, alphabet):
    """`clone <name>` / `gen <name> <builtin|codec|arity:v,v,...>` / `depth <k>` /
    `constants <c> ...` / `local` / `end`."""
    name, gens, depth, ended, local, consts = None, [], 1, False, False, (0, 1)
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] == "clone" and len(tok) == 2:
            name = tok[1]
        elif tok[0] == "gen" and len(tok) == 3:
            gname, spec = tok[1], tok[2]
            if spec in CODEC_NAMES:
                continue
            if ":" in spec:
                ar, vals = spec.split(":", 1)
                try:
                    gens.append(table_generator(gname, int(ar), [int(v) for v in vals.split(",")], alphabet))
                except ValueError:
                    raise FormatError(f"bad generator table {spec!r}") from None
            else:
                g = builtin(spec, alphabet)
                gens.append(Generator(gname, g.arity, g.fn, g.spec))
        elif tok[0] == "depth" and len(tok) == 2:
            try:
                depth = int(tok[1])
            except ValueError:
                raise FormatError(f"bad depth {tok[1]!r}") from None
            if depth < 1:
                raise FormatError("depth must be positive")
        elif tok[0] == "constants" and len(tok) >= 2:
            try:
                consts = tuple(int(t) for t in tok[1:])
            except ValueError:
                raise FormatError(f"bad constants line {line!r}") from None
            if any(not 0 <= c < alphabet for c in consts):
                raise FormatError(f"constant outside alphabet {alphabet}")
        elif tok[0] == "local" and len(tok) == 1:
            local = True
        elif tok[0] == "end":
            ended = True
        else:
            raise FormatError(f"unexpected clone line {line!r}")
    if name is None or not ended:
        raise FormatError("incomplete clone file")
    return Clone(name, alphabet, tuple(gens), depth, consts, local)


def format_clone(clone):
    lines = [f"clone {clone.name}"]
    for g in clone.generators:
        lines.append(f"gen {g.name} {g.spec or g.name}")
    lines.append(f"depth {clone.depth}")
    if tuple(clone.constants) != (0, 1):
        lines.append("constants " + " ".join(map(str, clone.constants)))
    if clone.local:
        lines.append("local")
    lines.append("end")
    return "\n".join(lines) + "\n"
