import pytest
from hypothesis import given, settings, strategies as st

from kummer_census.abgroup import GroupSpec
from kummer_census.census import (Budget, CensusConstraint, count_F_D, count_H, count_H_star,
                                  count_H_star_direct, count_M, count_stratum, genus_strata,
                                  point_count_histogram, strata_of_weight)
from kummer_census.covers import KummerCover, point_count
from kummer_census.errors import BudgetExceeded, ConfigError
from kummer_census.ffield import make_field
from kummer_census.polyring import enumerate_monic_squarefree

F3, F5, F7 = make_field(3), make_field(5), make_field(7)
Z2, Z3, Z4, V4 = GroupSpec((2,)), GroupSpec((3,)), GroupSpec((4,)), GroupSpec((2, 2))


def test_genus_strata_examples():
    assert genus_strata(Z2, 1) == [(3,), (4,)]
    assert genus_strata(Z2, 0) == [(1,), (2,)]
    # 2g + 6 must be even for (Z/2)^2, so every genus works; odd D has no strata
    assert strata_of_weight(V4, 5) == []


def test_stratum_examples():
    assert count_stratum(Z2, F3, (4,)) == 54
    assert count_stratum(Z2, F3, (3,), CensusConstraint(k=(0,))) == 0
    want = sum(1 for f in enumerate_monic_squarefree(F3, 2) if f(0) and F3.is_rth_power(f(0), 2))
    assert count_stratum(Z2, F3, (2,), CensusConstraint(None, (0,), ((0,),))) == want


def test_count_F_D_examples():
    assert count_F_D(Z2, F3, 4, CensusConstraint((0,))) == 54
    assert count_F_D(Z2, F3, 3, CensusConstraint((1,))) == 18
    for G, ctx in ((Z2, F3), (V4, F5), (Z3, F7)):
        assert count_F_D(G, ctx, 0, CensusConstraint(G.zero())) == 1


def test_count_examples():
    assert count_M(Z2, F3, 1) == 72
    assert count_M(Z2, F3, 0) == 9
    assert count_H_star(Z2, F3, 1) == 72
    assert count_H_star(Z2, F3, 2) == 648
    assert count_H_star_direct(Z2, F3, 1) == 72
    assert count_H(Z2, F3, 1) == 144
    assert count_H(Z2, F3, 2) == 1296


def test_overcount_z4():
    M, H = count_M(Z4, F5, 1), count_H_star_direct(Z4, F5, 1)
    assert M - H == count_stratum(Z4, F5, (0, 3, 0)) + count_stratum(Z4, F5, (0, 4, 0))
    assert count_H_star(Z4, F5, 1) == H == count_H_star(Z4, F5, 1, path="abstract")


@pytest.mark.parametrize("G,ctx,gs", [(V4, F5, (0, 1)), (Z3, F7, (1, 2)), (Z4, F5, (0, 1))])
def test_paths_agree(G, ctx, gs):
    for g in gs:
        vals = {p: count_H_star(G, ctx, g, path=p) for p in ("direct", "mobius", "abstract", "series")}
        assert len(set(vals.values())) == 1, vals


@settings(max_examples=20, deadline=None)
@given(x=st.integers(0, 4), e=st.sampled_from([(0, 0), (1, 0), (0, 1), (1, 1)]),
       k=st.sampled_from([None, (0, 0), (1, 0), (1, 1)]), g=st.integers(0, 1))
def test_constrained_paths_agree(x, e, k, g):
    cc = CensusConstraint(k, (x,), (e,))
    assert count_H_star(V4, F5, g, cc) == count_H_star_direct(V4, F5, g, cc) == \
        count_H_star(V4, F5, g, cc, path="series")


@settings(max_examples=15, deadline=None)
@given(D=st.integers(0, 6), x=st.integers(0, 2), e=st.integers(0, 1))
def test_character_split(D, x, e):
    # the two character values at a point plus vanishing there partition the count
    total = count_F_D(Z2, F3, D)
    parts = sum(count_F_D(Z2, F3, D, CensusConstraint(None, (x,), ((v,),))) for v in (0, 1))
    vanish = sum(1 for d in (D,) for f in enumerate_monic_squarefree(F3, d) if f(x) == 0)
    assert parts + vanish == total


def test_histogram_small():
    h = point_count_histogram(Z2, F3, 1)
    assert h == {1: 8, 2: 24, 3: 24, 4: 32, 5: 24, 6: 24, 7: 8}
    # brute force over every monic cover and lead class
    brute = {}
    for d in (3, 4):
        for f in enumerate_monic_squarefree(F3, d):
            for a in (0, 1):
                n = point_count(KummerCover(Z2, (f,), (a,)))
                brute[n] = brute.get(n, 0) + 1
    assert brute == h


def test_histogram_v4_total():
    h = point_count_histogram(V4, F5, 1)
    assert sum(h.values()) == count_H(V4, F5, 1)


def test_workers_match():
    assert count_M(V4, F5, 2, workers=2) == count_M(V4, F5, 2)
    assert point_count_histogram(Z2, F3, 3, workers=2) == point_count_histogram(Z2, F3, 3)


def test_errors():
    with pytest.raises(ConfigError):
        count_M(Z3, F5, 1)
    with pytest.raises(ConfigError):
        count_M(Z2, F3, -1)
    with pytest.raises(ConfigError):
        count_M(Z2, F3, 1, CensusConstraint(None, (0, 0), ((0,), (1,))))
    with pytest.raises(BudgetExceeded):
        count_M(Z2, F3, 4, budget=10)
    b = Budget(5)
    b.spend(5)
    with pytest.raises(BudgetExceeded):
        b.spend(1)
