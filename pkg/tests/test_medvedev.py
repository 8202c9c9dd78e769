import random

import pytest
from hypothesis import given, settings, strategies as st

from degreelab.baire_model import SpaceSpec, bottom, check_reduction, identity_problem
from degreelab.calculus import WitnessClass, coprod, equivalent, reduces, reduction_search, times
from degreelab.errors import EmptyValueError
from degreelab.medvedev import (c_join_witnesses, c_meet_witnesses, check_c_brouwer_preservation,
                                check_c_join_irreducible, check_obs_choice, d_lemma_witnesses,
                                embed_c, embed_d, format_mass, mass, mass_plus, mass_times,
                                medvedev_reduces, m_reduces, parse_mass, whole_space)
from degreelab.suites import kleene_family, random_mass, random_problem

S3 = SpaceSpec(3, 1)
M0 = WitnessClass.bounded(0)


def rmass(seed, name="A"):
    return random_mass(random.Random(seed), S3, name=name)


def test_reduces_examples():
    A = rmass(1)
    assert m_reduces(A, A, M0)
    res = medvedev_reduces(mass(S3, [], "E"), A, M0)
    assert not res.found and res.exhaustive


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9), st.booleans())
def test_constants_class_reduces_iff_nonempty(seed, empty):
    rng = random.Random(seed)
    A = mass(S3, [] if empty else rng.sample(list(S3.points()), 1), "A")
    B = random_mass(rng, S3, name="B")
    # modulus-bounded maps include every constant
    assert m_reduces(A, B, M0) == (not empty)


def test_mass_operation_counts():
    E = mass(S3, [])
    assert len(mass_plus(E, E)) == 0 and len(mass_times(rmass(2), E)) == 0
    A, B = rmass(3), rmass(4, "B")
    assert len(mass_plus(A, B)) == len(A) + len(B)
    assert len(mass_times(A, B)) == len(A) * len(B)


def test_embed_c_examples(cons3):
    Z = mass(S3, [(0,)])
    assert reduces(embed_c(Z), identity_problem(S3), cons3)
    with pytest.raises(EmptyValueError):
        embed_c(mass(S3, []))


def test_embed_d_examples():
    assert list(embed_d(mass(S3, [])).dom()) == []
    assert equivalent(embed_d(whole_space(S3)), identity_problem(S3), M0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_embeddings_preserve_order(seed):
    rng = random.Random(seed)
    A, B = random_mass(rng, S3, name="A"), random_mass(rng, S3, name="B")
    for cls in (M0, WitnessClass.of_clone(__import__("degreelab.suites").suites.cons3_clone())):
        m = m_reduces(A, B, cls)
        assert reduces(embed_c(A), embed_c(B), cls) == m
        assert reduces(embed_d(B), embed_d(A), cls) == m


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_witness_lemmas(seed):
    rng = random.Random(seed)
    A, B = random_mass(rng, S3, name="A"), random_mass(rng, S3, name="B")
    for src, tgt, w in c_meet_witnesses(A, B) + c_join_witnesses(A, B):
        assert check_reduction(src, tgt, w).holds
    for _, src, tgt, w in d_lemma_witnesses(A, B):
        assert check_reduction(src, tgt, w).holds


def test_join_irreducible_examples():
    A = mass(S3, [(1,)])
    P = random_problem(random.Random(5), S3, S3, name="P")
    P = P.__class__(P.in_space, P.out_space, dict(P.graph, **{}) | {(2,): frozenset([(1,)])}, "P")
    Z = bottom(S3, S3)
    w = reduction_search(embed_c(A), coprod(P, Z), M0).witness
    assert check_c_join_irreducible(A, P, Z, w)[0] == "LEFT"
    w = reduction_search(embed_c(A), coprod(P, P), M0).witness
    side, _ = check_c_join_irreducible(A, P, P, w)
    assert side == ("LEFT" if w.K((0,))[0] == 0 else "RIGHT")


def test_obs_choice_examples(cons3, kleene6):
    A = rmass(6)
    assert check_obs_choice(embed_d(A), cons3).lhs
    assert check_obs_choice(embed_d(A), cons3).holds
    # c4 has no class choice function (symbol 4 is out of reach) and is not a d-problem
    c4 = kleene_family()[2]
    b = check_obs_choice(c4, kleene6)
    assert b.holds and not b.lhs


def test_brouwer_extraction():
    rng = random.Random(2)
    for _ in range(10):
        A, B = random_mass(rng, S3, name="A"), random_mass(rng, S3, name="B")
        C = random_mass(rng, S3, name="C")
        R = embed_c(C)
        w = reduction_search(embed_c(A), times(embed_c(B), R), WitnessClass.all_maps()).witness
        out = check_c_brouwer_preservation(A, B, R, w)
        assert out.C.points == C.points
        r1, r2 = out.check()
        assert r1.holds and r2.holds


def test_mass_file_roundtrip():
    A = rmass(9)
    assert parse_mass(format_mass(A)) == A
