import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from degreelab import algebra as alg
from degreelab.algebra import (And, Bot, Imp, Not, Or, Top, Var, boolean, chain, m3, n5,
                               parse_formula, square_plus_top)
from degreelab.baire_model import TOP, SpaceSpec, bottom, identity_problem
from degreelab.calculus import WitnessClass, times
from degreelab.errors import (FamilyNotClosed, HypothesisError, MissingStructure, NotALattice,
                              NotClosure, ParseError, UnassignedVariable)
from degreelab.suites import brute_distributive, kleene_family, kleene_suite


def test_validate_examples():
    c2 = chain(2)
    assert (c2.bot, c2.top) == (0, 1)
    # 0 < 1, 2 and nothing above 1 and 2 except two incomparable tops
    fork = [[1, 1, 1, 1, 1], [0, 1, 0, 1, 1], [0, 0, 1, 1, 1], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]]
    with pytest.raises(NotALattice) as e:
        alg.validate_lattice(fork)
    assert e.value.pair is not None
    assert n5().n == 5


@pytest.mark.parametrize("L,expected", [(chain(4), True), (boolean(3), True), (n5(), False),
                                        (m3(), False), (square_plus_top(), True)])
def test_distributive(L, expected):
    assert alg.is_distributive(L) == expected == brute_distributive(L)


def test_irreducibles():
    c3 = chain(3)
    assert alg.irreducibles(c3) == (frozenset(range(3)), frozenset(range(3)))
    mi, ji = alg.irreducibles(boolean(2))
    assert 3 not in ji and 0 not in mi
    assert square_plus_top().top in alg.irreducibles(square_plus_top())[1]


def test_tables():
    H = alg.heyting_table(chain(3))
    assert H[1, 0] == 0 and all(H[0, x] == 2 for x in range(3)) and H[2, 1] == 1
    B = boolean(2)
    HB = alg.heyting_table(B)
    # elements are bitmasks; complement is xor with 3
    assert all(HB[a, b] == (b | (a ^ 3)) for a in range(4) for b in range(4))
    N = alg.heyting_table(n5())
    assert not N and N.offending is not None
    assert not alg.brouwer_table(n5())


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_dual_involution(seed):
    L = alg.random_lattice(random.Random(seed))
    if L is None:
        return
    D = alg.dual(L)
    assert alg.dual(D) == L
    assert bool(alg.heyting_table(L)) == bool(alg.brouwer_table(D))


def test_dual_chain():
    D = alg.dual(chain(3))
    assert (D.bot, D.top) == (2, 0)


def test_adjunction_on_corpus():
    for L in alg.lattice_corpus(0, 5):
        H = alg.heyting_table(L)
        assert bool(H) == alg.is_distributive(L) == bool(alg.brouwer_table(L))
        if H:
            for a, b, c in itertools.product(range(L.n), repeat=3):
                assert L.leq[L.meet[c][a]][b] == L.leq[c][H[a, b]]


def test_parse_examples():
    assert parse_formula("~p0 | ~~p0") == Or(Not(Var(0)), Not(Not(Var(0))))
    assert parse_formula("p0 -> p1 -> p2") == Imp(Var(0), Imp(Var(1), Var(2)))
    assert parse_formula("bot & top") == And(Bot(), Top())
    with pytest.raises(ParseError) as e:
        parse_formula("p0 &")
    assert e.value.position == 5


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_pretty_roundtrip(seed):
    f = alg.random_formula(random.Random(seed), 4, 3)
    assert parse_formula(alg.pretty(f)) == f


def test_validity():
    for L in (chain(2), chain(5), boolean(3)):
        assert alg.is_valid(L, parse_formula("p0 -> p0"))
    assert not alg.is_valid(chain(3), parse_formula("p0 | ~p0"))
    assert alg.refuting_assignment(chain(3), parse_formula("p0 | ~p0")) == (1,)
    assert alg.is_valid(chain(2), parse_formula("p0 | ~p0"))
    with pytest.raises(UnassignedVariable):
        alg.eval_formula(chain(2), parse_formula("p1"), (0,))
    with pytest.raises(MissingStructure):
        alg.is_valid(n5(), parse_formula("p0"))


def test_jankov():
    b = alg.check_jankov_iff(chain(3))
    assert b.holds and b.value
    b = alg.check_jankov_iff(square_plus_top())
    assert b.holds and not b.value
    with pytest.raises(HypothesisError):
        alg.check_jankov_iff(boolean(2))


def test_closures():
    L = boolean(2)
    assert alg.image_lattice(L, range(4)).lattice == L
    assert alg.image_lattice(L, [3] * 4).lattice.n == 1
    cone = alg.image_lattice(L, alg.upper_cone(L, 1))
    assert cone.elements == (1, 3)
    with pytest.raises(NotClosure) as e:
        alg.check_closure(L, [0, 0, 0, 0])
    assert e.value.law == "extensive"
    with pytest.raises(NotClosure) as e:
        alg.check_closure(chain(3), [1, 2, 2])
    assert e.value.law == "idempotent"


def test_hom_check():
    L = boolean(2)
    for kind in ("MEET", "JOIN", "LATTICE", "HEYTING", "BROUWER", "LATTICE-EMBEDDING"):
        assert alg.hom_check(kind, range(4), L, L)
    c2, c3 = chain(2), chain(3)
    assert alg.hom_check("MEET", [1, 1], c2, c3) and alg.hom_check("JOIN", [1, 1], c2, c3)
    assert not alg.hom_check("LATTICE-EMBEDDING", [1, 1], c2, c3)
    assert alg.hom_check("HEYTING-EMBEDDING", [0, 2], c2, c3)
    with pytest.raises(MissingStructure):
        alg.hom_check("HEYTING", range(5), n5(), n5())


def test_theory_containment():
    rng = random.Random(0)
    formulas = [alg.random_formula(rng, 4, 2) for _ in range(40)]
    assert alg.theory_containment_sample(chain(3), chain(3), range(3), formulas)
    assert alg.theory_containment_sample(chain(2), chain(3), [0, 2], formulas)
    heyting = [L for L in alg.lattice_corpus(0, 3) if alg.heyting_table(L) and L.n <= 5]
    for L1, L2 in itertools.product(heyting, repeat=2):
        for m in itertools.islice(alg.embeddings(L1, L2), 2):
            assert alg.theory_containment_sample(L1, L2, m, formulas)


def test_lattice_file_roundtrip():
    for L in alg.standard_corpus():
        M = alg.parse_lattice(alg.format_lattice(L))
        assert M == L and M.name == L.name


def test_quotient_three_chain():
    sp = SpaceSpec(2, 1)
    D = alg.degree_quotient([bottom(sp, sp), identity_problem(sp), TOP], WitnessClass.bounded(0))
    assert D.quotient == chain(3) and D.distributive


def test_quotient_kleene_family():
    D, rep = kleene_suite()
    assert len(D.classes) == 7 and D.distributive
    assert all(v.startswith("closed") for v in D.meet_join.values()) or D.meet_join
    assert rep.passed, rep.report()
    assert [r.axiom for r in rep.results] == list(range(1, 9))


def test_family_not_closed(kleene6):
    fam = kleene_family()[:6]      # the product c4 x c5 is missing
    D = alg.degree_quotient(fam, kleene6)
    with pytest.raises(FamilyNotClosed):
        alg.kleene_check(D, 0, 1)
