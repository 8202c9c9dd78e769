import pytest

from degreelab.baire_model import SpaceSpec, bottom, is_choice_function, make_problem, pair_padded
from degreelab.calculus import PairCodec, WitnessClass, oplus, reduction_search
from degreelab.errors import PreconditionError
from degreelab.llpo_family import (find_choice_function, llpo_inf_n, llpo_n1, selector,
                                   separation_search, sigma_llpo, split_choice,
                                   witness_sigma_split)
from degreelab.suites import split_corpus


def ans(i, d=3):
    return (i,) + (0,) * (d - 1)


def test_llpo_n1_examples():
    P = llpo_n1(2, 2, 3)
    assert P((0,) * 6) == {ans(1), ans(2)}
    # tuple_2 interleaves: component 2 owns the odd positions
    assert P((0, 1, 0, 0, 0, 0)) == {ans(1)}
    assert (1, 1, 0, 0, 0, 0) not in P.graph


def test_llpo_inf_examples():
    Z = llpo_inf_n(0, 3, 2)
    assert list(Z.dom()) == [(0,) * 6] and len(Z((0,) * 6)) == 3
    P = llpo_inf_n(2, 3, 2)
    x = (1, 0, 0, 1, 0, 0)          # both nonzeros in component 1
    assert P(x) == {ans(2, 2), ans(3, 2)}
    assert (1, 1, 1, 0, 0, 0) not in P.graph


def test_sigma_examples():
    k, w, d, ds = 2, 3, 3, 4
    S = sigma_llpo(k, w, d, ds)
    cin = PairCodec(ds, w * d)
    assert S(cin.enc((0,) * ds, (0,) * (w * d))) == {ans(1), ans(2), ans(3)}
    x = [0] * (w * d)
    x[k - 1] = 1                    # first position of component k
    assert S(cin.enc(selector(k, ds), tuple(x))) == {ans(1)}
    assert cin.enc((1, 1, 0, 0), (0,) * (w * d)) not in S.graph


@pytest.mark.parametrize("k,w,d", [(2, 3, 4), (2, 3, 3), (2, 4, 3), (3, 4, 3)])
def test_sigma_split(k, w, d):
    f, b = witness_sigma_split(k, w, d).check()
    assert f.holds and b.holds


def test_sigma_split_routing():
    s = witness_sigma_split(2, 3, 3)
    cin = PairCodec(4, 9)
    z = (0,) * 9
    assert s.forward.K(cin.enc(selector(2, 4), z))[0] == 0
    assert s.forward.K(cin.enc((0,) * 4, z))[0] == 1


def test_identity_witness_for_more_answers():
    res = reduction_search(llpo_n1(3, 3, 3), llpo_n1(2, 3, 3), WitnessClass.bounded(0))
    assert res.found and res.witness.name == "id"
    cert = separation_search(llpo_n1(2, 3, 3), llpo_n1(2, 3, 3), 0)
    assert cert.status == "FOUND" and cert.witness is not None


def test_small_width_reduces():
    # the narrower LLPO[inf,2] target still admits a modulus-0 reduction
    cert = separation_search(llpo_n1(2, 2, 3, 4), llpo_inf_n(2, 3, 3), 0)
    assert cert.status == "FOUND"


def test_certificate_exhaustive_count():
    cert = separation_search(llpo_n1(2, 2, 1, 3), bottom(SpaceSpec(2, 2), SpaceSpec(3, 1)), 0)
    assert cert.status == "ABSENT" and cert.exhaustive and cert.witness is None
    assert "exhaustive true" in cert.report()


@pytest.mark.parametrize("P,Q", split_corpus())
def test_split_choice(P, Q):
    R = oplus(P, Q)
    I = find_choice_function(R, R.in_space.depth)
    out = split_choice(P, Q, I)
    assert is_choice_function(out.table, P if out.side == "P" else Q)


def test_split_choice_crafted():
    sp, osp = SpaceSpec(2, 1), SpaceSpec(3, 1)
    P = make_problem(sp, osp, [((0,), [(1,)]), ((1,), [(2,)])], "P")
    Q = make_problem(sp, osp, [((0,), [(0,)])], "Q")
    # answer on the P side except at p = 1, where the Q side is used
    I = lambda x: (0, 1) if x[0] == 0 else (1, 0)
    out = split_choice(P, Q, I)
    assert out.side == "Q" and out.table == {(0,): (0,)}


def test_split_choice_empty():
    sp = SpaceSpec(2, 1)
    P = make_problem(sp, SpaceSpec(3, 1), [((0,), [(1,)])])
    with pytest.raises(PreconditionError):
        split_choice(P, bottom(sp, SpaceSpec(3, 1)), lambda x: (0, 0))
