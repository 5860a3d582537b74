import pytest
from hypothesis import given, settings, strategies as st

from burrlab.closed_forms import e_closed
from burrlab.construction import (Decomposition, GeneratorPlan, build_A, decompose, generators,
                                  interval_base, predicted_complement, side_condition_violations,
                                  verify_construction)
from burrlab.params import Params
from burrlab.sumset import complement_in_window, naive_psa, psa

GRID = [Params(u, v) for u in (4, 7, 8, 11, 12, 13, 16) for v in range(3 * u + 5, 3 * u + 40, 3)]


@st.composite
def params(draw):
    u = draw(st.one_of(st.sampled_from([4, 7, 8]), st.integers(11, 120)))
    return Params(u, draw(st.integers(3 * u + 5, 3 * u + 800)))


def test_interval_base_examples():
    assert interval_base(4) == (1, 2)
    assert naive_psa(interval_base(4)) == {0, 1, 2, 3}
    assert interval_base(8) == (1, 2, 4)
    base = interval_base(13)
    assert naive_psa(base) == set(range(13))


@pytest.mark.parametrize("u", [3, 5, 6, 9, 10])
def test_interval_base_impossible(u):
    with pytest.raises(ValueError):
        interval_base(u)


def test_interval_base_all_small_u():
    for u in [2, 4, 7, 8] + list(range(11, 400)):
        base = interval_base(u)
        assert all(1 <= a <= u - 1 for a in base)
        assert list(base) == sorted(set(base))
        assert psa(base, u - 1).is_interval() and sum(base) == u - 1


@pytest.mark.parametrize("u,v,expected", [
    (4, 17, Decomposition(3, 0, 0, (0, 0))),
    (4, 20, Decomposition(3, 3, 1, (0, 2))),
    (4, 50, Decomposition(6, 6, 1, (0, 0, 0, 2, 3))),
])
def test_decompose_examples(u, v, expected):
    assert decompose(Params(u, v)) == expected


@pytest.mark.parametrize("u,v,expected", [
    (4, 17, (5, 6, 7)),
    (4, 20, (5, 6, 10)),
    (4, 50, (5, 6, 7, 8, 11, 14)),
])
def test_generators_examples(u, v, expected):
    p = Params(u, v)
    assert generators(p, decompose(p)) == expected


@pytest.mark.parametrize("k,A", [(0, (1, 2, 5, 6, 7)), (1, (1, 2, 5, 6, 7, 18)), (2, (1, 2, 5, 6, 7, 18, 36))])
def test_build_A_examples(k, A):
    assert build_A(Params(4, 17), k).sequence == A


@pytest.mark.parametrize("k,window,comp", [
    (0, 21, (4, 17)),
    (1, 39, (4, 17, 22, 35)),
    (2, 75, (4, 17, 22, 35, 40, 53, 58, 71)),
])
def test_verify_construction_examples(k, window, comp):
    rep = verify_construction(build_A(Params(4, 17), k))
    assert rep.window == window
    assert rep.computed == comp == rep.predicted
    assert rep.match


def test_swap_fix_repairs_full_jump():
    # 22 = 5+6+7+4: greedy split of r - eps = 3 is (0, 3), a jump of u-1
    p = Params(4, 21)
    assert decompose(p) == Decomposition(3, 4, 1, (1, 2))
    assert generators(p, decompose(p)) == (5, 7, 10)
    assert verify_construction(build_A(p, 3)).match


@settings(max_examples=300, deadline=None)
@given(params())
def test_decomposition_invariants(p):
    d = decompose(p)
    u = p.u
    assert d.s >= 3
    assert sum(u + t for t in range(1, d.s + 1)) + d.r == p.v + 1
    # s is maximal
    assert sum(u + t for t in range(1, d.s + 2)) > p.v + 1
    assert 0 <= d.r <= u + d.s
    assert sum(d.r_list) + d.eps == d.r and d.eps == (d.r > 0)
    assert list(d.r_list) == sorted(d.r_list)
    assert all(0 <= x <= u - 1 for x in d.r_list)
    assert all(b - a <= u - 2 for a, b in zip(d.r_list, d.r_list[1:]))
    assert decompose(p) == d


@settings(max_examples=150, deadline=None)
@given(params(), st.integers(0, 4))
def test_plan_invariants(p, k):
    plan = build_A(p, k)
    u, v = p.u, p.v
    assert plan.gens[0] == u + 1
    assert sum(plan.gens[1:]) + u == v
    assert all(a < b <= a + u for a, b in zip(plan.gens, plan.gens[1:]))
    assert plan.tail == tuple((v + 1) * n for n in range(1, k + 1))
    assert not side_condition_violations(plan.sequence, u)
    mask = psa(plan.sequence, sum(plan.sequence))
    assert u not in mask and v not in mask and u + 1 in mask
    assert verify_construction(plan).match


def test_grid_matches():
    for p in GRID:
        for k in range(5):
            assert verify_construction(build_A(p, k)).match, (p, k)


def test_mismatch_is_reported_not_raised():
    p = Params(4, 17)
    good = build_A(p, 1)
    bad = GeneratorPlan(p, good.dec, good.base, (5, 6, 8), 1)
    rep = verify_construction(bad)
    assert not rep.match
    assert rep.computed != rep.predicted
    assert rep.to_json()["match"] is False


def test_predicted_complement_length():
    p = Params(7, 30)
    for k in range(6):
        m = k * (k + 1) // 2 + 1
        pred = predicted_complement(p, k)
        assert len(pred) == 2 * m
        assert pred[-1] == e_closed(p, 2 * m)


def test_side_condition_helper():
    assert side_condition_violations([1, 2, 5, 6, 7, 18], 4) == []
    assert side_condition_violations([1, 2, 5, 6, 7, 30], 4) == [30]
    assert side_condition_violations([1, 20], 30) == []


def test_eq_2_2_window():
    for p in GRID:
        plan = build_A(p, 0)
        assert complement_in_window(psa(plan.sequence, p.u + p.v)) == [p.u, p.v]
