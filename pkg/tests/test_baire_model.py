import random

import pytest
from hypothesis import given, settings, strategies as st

from degreelab.baire_model import (TOP, Reason, SpaceSpec, Witness, bottom, check_reduction,
                                   compose_witnesses, format_problem, format_witness,
                                   identity_problem, identity_witness, is_choice_function,
                                   is_pointed, make_problem, pair, pair_padded, parse_problem,
                                   parse_seq, parse_witness, shift, tabulate_witness, tag,
                                   table_witness, tuple_w, unpair, untuple_w, fmt_seq)
from degreelab.errors import (AlphabetError, DimensionError, EmptyValueError, FormatError)

from conftest import B1, B2, rand_problem

seqs = st.lists(st.integers(0, 5), min_size=1, max_size=6)


def test_space_counts():
    assert sum(1 for _ in SpaceSpec(3, 2).points()) == 9
    with pytest.raises(DimensionError):
        SpaceSpec(0, 1)


def test_pair_examples():
    assert pair((1, 2), (3, 4)) == (1, 3, 2, 4)
    assert unpair((1, 3, 2, 4)) == ((1, 2), (3, 4))
    assert pair((0, 0), (0, 0)) == (0, 0, 0, 0)


def test_tuple_examples():
    assert tuple_w([(1,), (2,), (3,)]) == (1, 2, 3)
    assert tuple_w([(1, 2), (3, 4)]) == (1, 3, 2, 4)
    assert untuple_w((5, 6, 7, 8), 2) == [(5, 7), (6, 8)]


def test_tag_shift_examples():
    assert tag(1, (0, 0)) == (1, 0, 0)
    assert shift((3, 1, 2)) == (1, 2)
    assert shift(tag(0, (2, 2))) == (2, 2)
    with pytest.raises(AlphabetError):
        tag(2, (0,), alphabet=2)


@given(seqs, seqs)
def test_pair_padded_roundtrip(p, q):
    d = max(len(p), len(q))
    a, b = unpair(pair_padded(p, q))
    assert a[:len(p)] == tuple(p) and b[:len(q)] == tuple(q)
    assert len(a) == d and not any(a[len(p):]) and not any(b[len(q):])


@given(st.integers(1, 4), st.integers(1, 3), st.data())
def test_tuple_roundtrip(w, d, data):
    parts = [tuple(data.draw(st.lists(st.integers(0, 3), min_size=d, max_size=d))) for _ in range(w)]
    assert untuple_w(tuple_w(parts), w) == parts


@given(seqs)
def test_seq_text_roundtrip(s):
    assert parse_seq(fmt_seq(s)) == tuple(s)


def test_make_problem_examples():
    P = make_problem(B1, B1, [], "P")
    assert list(P.dom()) == []
    idp = make_problem(B1, B1, [((0,), [(0,)]), ((1,), [(1,)])])
    assert dict(idp.graph) == dict(identity_problem(B1).graph)
    with pytest.raises(EmptyValueError):
        make_problem(B1, B1, [((0,), [])])
    with pytest.raises(DimensionError):
        make_problem(B1, B1, [((0, 0), [(0,)])])


def test_choice_function_examples():
    idp = identity_problem(B2)
    assert is_choice_function(lambda x: x, idp)
    assert is_choice_function(lambda x: (9, 9), bottom(B2, B2))
    assert not is_choice_function(lambda x: (0, 0), idp)


def test_pointed():
    assert not is_pointed(bottom(B1, B1))
    assert is_pointed(identity_problem(B1))
    assert is_pointed(TOP)


def test_check_reduction_examples():
    idp = identity_problem(B2)
    assert check_reduction(idp, idp, Witness(lambda x: x, lambda x, y: y)).holds
    P = rand_problem(1)
    junk = Witness(lambda x: (7,), lambda x, y: (7,))
    assert check_reduction(bottom(B2, B2), P, junk).holds
    assert check_reduction(P, TOP, junk).holds
    rep = check_reduction(TOP, P, junk)
    assert not rep.holds and rep.counterexample.reason is Reason.TOP_NOT_BELOW


def literal_oracle(P, Q, w):
    """Enumerate every x in dom P and every y in Q(K(x)) and test membership."""
    for x in P.graph:
        k = tuple(w.K(x))
        if k not in Q.graph:
            return False
        for y in Q.graph[k]:
            if tuple(w.H(x, y)) not in P.graph[x]:
                return False
    return True


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_check_reduction_matches_oracle(seed):
    rng = random.Random(seed)
    P, Q = rand_problem(rng.random(), name="P"), rand_problem(rng.random(), name="Q")
    K = {x: rng.choice(list(B2.points())) for x in B2.points()}
    H = {(x, y): rng.choice(list(B2.points())) for x in B2.points() for y in B2.points()}
    w = table_witness(K, H)
    rep = check_reduction(P, Q, w)
    assert rep.holds == literal_oracle(P, Q, w)
    if not rep.holds:
        c = rep.counterexample
        assert c.x in P.graph
        if c.reason is Reason.K_OUTSIDE_DOMAIN:
            assert tuple(w.K(c.x)) not in Q.graph
        else:
            assert tuple(w.H(c.x, c.y)) not in P(c.x)


def test_compose_witnesses():
    idp = identity_problem(B2)
    w = compose_witnesses(identity_witness(), identity_witness())
    assert check_reduction(idp, idp, w).holds


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_problem_file_roundtrip(seed):
    P = rand_problem(seed)
    Q = parse_problem(format_problem(P))
    assert Q.name == P.name and dict(Q.graph) == dict(P.graph)
    assert Q.in_space == P.in_space and Q.out_space == P.out_space


def test_problem_file_errors():
    with pytest.raises(FormatError):
        parse_problem("problem P\nspace in alphabet=2 depth=1\nend\n")
    with pytest.raises(FormatError):
        parse_problem("problem P\nspace in alphabet=2 depth=1\nspace out alphabet=2 depth=1\n"
                      "map 0 -> 5\nend\n")


def test_witness_file_roundtrip():
    idp = identity_problem(B1)
    K, H = tabulate_witness(identity_witness(), idp, idp)
    w = parse_witness(format_witness(K, H), idp, idp)
    assert check_reduction(idp, idp, w).holds
