"""SAT-backed search against brute-force oracles, and clone locality."""

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from degreelab.baire_model import SpaceSpec, check_reduction
from degreelab.calculus import WitnessClass, reduction_search
from degreelab.clones import format_clone, make_clone, parse_clone
from degreelab.errors import FormatError
from degreelab.llpo_family import enumerate_transducers, transducer_count
from degreelab.suites import CONS3, KLEENE6, cons3_clone, kleene6_clone

from conftest import B2, rand_problem


def modulus0_oracle(P, Q):
    """Depth 2, modulus 0: position 0 of H reads (x0, y0), position 1 reads everything.

    So for fixed K an H exists iff, for each prefix group (x0, y0), some symbol is
    a first symbol of an answer in P(x) for every required (x, y) in that group.
    K itself ranges over the 64 modulus-0 transducers.
    """
    for K in enumerate_transducers(B2, B2, 0):
        ks = {x: K(x) for x in P.dom()}
        if any(k not in Q.graph for k in ks.values()):
            continue
        groups = {}
        for x, k in ks.items():
            firsts = {a[0] for a in P(x)}
            for y in Q(k):
                g = (x[0], y[0])
                groups[g] = groups.get(g, firsts) & firsts
        if all(groups.values()):
            return True
    return False


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_modulus_search_matches_oracle(seed):
    rng = random.Random(seed)
    P, Q = rand_problem(rng.random(), name="P"), rand_problem(rng.random(), name="Q")
    res = reduction_search(P, Q, WitnessClass.bounded(0))
    assert res.found == modulus0_oracle(P, Q)
    if res.found:
        assert check_reduction(P, Q, res.witness).holds
    else:
        assert res.exhaustive


def local_oracle(P, Q, clone):
    """Local clone: each value symbol must be producible at its own point."""
    def ok(seq, point):
        allowed = set(clone.point_values(point))
        return all(s in allowed for s in seq)
    for x in P.dom():
        if not any(ok(q, x) and all(any(ok(a, x + y) for a in P(x)) for y in Q(q)) for q in Q.dom()):
            return False
    return True


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_clone_search_matches_oracle(seed):
    rng = random.Random(seed)
    sp, osp = SpaceSpec(2, 1), SpaceSpec(3, 1)
    P = rand_problem(rng.random(), sp, osp, "P")
    Q = rand_problem(rng.random(), sp, osp, "Q")
    clone = cons3_clone()
    res = reduction_search(P, Q, WitnessClass.of_clone(clone))
    assert res.found == local_oracle(P, Q, clone)
    if res.found:
        assert check_reduction(P, Q, res.witness).holds


@pytest.mark.parametrize("make,alphabet", [(cons3_clone, 3), (kleene6_clone, 6)])
def test_declared_local_clones_match_closure(make, alphabet):
    clone = make()
    rng = random.Random(7)
    for _ in range(12):
        n = rng.randint(1, 2)
        pts = rng.sample(list(itertools.product(range(alphabet), repeat=n)), rng.randint(1, 3))
        closure = {v for v, _ in clone.closure(pts)}
        product = set(itertools.product(*[clone.point_values(p) for p in pts]))
        assert closure == product


def test_kleene6_keeps_high_symbols_out_of_reach():
    clone = kleene6_clone()
    assert clone.point_values((0,)) == [0, 1, 2, 3]
    assert 4 not in clone.point_values((5, 0)) and 5 in clone.point_values((5, 0))


def test_nonlocal_generators_detected():
    # without a test separating 2 from 3 the closure is smaller than the product
    clone = make_clone("weak", 4, CONS3, depth=3)
    pts = [(3,), (1,), (2,)]
    closure = {v for v, _ in clone.closure(pts)}
    product = set(itertools.product(*[clone.point_values(p) for p in pts]))
    assert closure < product


def test_transducer_counts():
    b1 = SpaceSpec(2, 1)
    assert transducer_count(b1, b1, 0) == 4
    assert sum(1 for _ in enumerate_transducers(b1, b1, 0)) == 4
    # position 0 reads 1 symbol (2 groups), position 1 reads 2 (4 groups)
    assert transducer_count(B2, B2, 0) == 2 ** (2 + 4)
    assert sum(1 for _ in enumerate_transducers(B2, B2, 0)) == 64
    # lookahead covering the whole input: every total map
    assert transducer_count(B2, B2, 1) == (4 ** 4)


def test_transducers_are_prefix_bounded():
    for T in enumerate_transducers(B2, B2, 0):
        assert T.depends_only_on_prefix()
        for x in B2.points():
            for z in B2.points():
                if x[0] == z[0]:
                    assert T(x)[0] == T(z)[0]


def test_clone_file_roundtrip():
    for clone in (cons3_clone(), kleene6_clone()):
        back = parse_clone(format_clone(clone), clone.alphabet)
        assert [g.name for g in back.generators] == list(CONS3 if clone.alphabet == 3 else KLEENE6)
        assert back.local and back.constants == clone.constants and back.depth == clone.depth


@pytest.mark.parametrize("text", ["clone c\ngen f nosuch\nend\n", "clone c\ndepth 0\nend\n",
                                  "clone c\n", "clone c\nconstants 9\nend\n"])
def test_clone_file_errors(text):
    with pytest.raises(FormatError):
        parse_clone(text, 3)
