import pytest

from zarmod.grouptab import group_table
from zarmod.incidence import (
    ProjSet,
    apply_to_set,
    exhaustive_group_incidence,
    incidence_count,
    intersection_count,
    popular_product_count,
    richness_test,
    weighted_mean_check,
)
from zarmod.measures import GroupFunction
from zarmod.modp import Mat2, PrimeContext, ProjPoint, ResidueSet, identity
from zarmod.rng import CounterRng


def test_projset_basics():
    ctx = PrimeContext(5)
    Y = ProjSet.of([0, 1, ProjPoint.INFINITY], ctx)
    assert len(Y) == 3
    assert ProjPoint(1) in Y and ProjPoint(2) not in Y
    assert ProjPoint.INFINITY in Y
    assert ProjSet.full(ctx).bits == 0b111111
    with pytest.raises(ValueError):
        ProjSet.of([7], ctx)


def test_intersection_identity_and_full():
    ctx = PrimeContext(5)
    Y = ProjSet.of([0, 2, 4], ctx)
    assert intersection_count(Y, identity(ctx)) == 3
    full = ProjSet.full(ctx)
    g = Mat2(2, 1, 1, 1, ctx)
    assert intersection_count(full, g) == 6


def test_intersection_hand_example():
    # p = 5, Y = {0, 1}, g: x -> 1/x; gY = {inf, 1}, so |Y n gY| = 1
    ctx = PrimeContext(5)
    Y = ProjSet.of([0, 1], ctx)
    g = Mat2(0, 1, 1, 0, ctx)
    assert sorted(apply_to_set(g, Y).indices()) == [1, 5]
    assert intersection_count(Y, g) == 1


def test_incidence_count_cross_checks():
    ctx = PrimeContext(5)
    table = group_table(5)
    Y = ProjSet.of([0, 1, 3], ctx)
    S = [table.elem(i).rep for i in range(0, 60, 7)]
    total = incidence_count(Y, S)  # raises internally on disagreement
    assert total == sum(intersection_count(Y, g) for g in S)
    assert incidence_count(ProjSet.of([], ctx), S) == 0
    assert incidence_count(ProjSet.full(ctx), S) == len(S) * 6


def test_exhaustive_orbit_identity():
    ctx = PrimeContext(5)
    Y = ProjSet.of([0, 3], ctx)
    total, predicted = exhaustive_group_incidence(Y)
    assert total == predicted == 4 * 60 // 6


def test_exhaustive_orbit_identity_random():
    rng = CounterRng(3, 0)
    for p in (5, 7):
        ctx = PrimeContext(p)
        for _ in range(10):
            k = rng.randrange(p + 2)
            Y = ProjSet.of(rng.sample(range(p + 1), k), ctx)
            total, predicted = exhaustive_group_incidence(Y)
            assert total == predicted


def test_weighted_mean_uniform_measure():
    ctx = PrimeContext(5)
    table = group_table(5)
    Y = ProjSet.of([0, 1, 2], ctx)
    nu = GroupFunction.uniform_on_group(table, mode="float")
    r = weighted_mean_check(nu, identity(ctx), Y)
    # forced by the orbit identity: mean is |Y|^2/(p+1), reference |Y|^2/p
    assert r.lhs == pytest.approx(9 / 6)
    assert r.deviation == pytest.approx(9 / 6 - 9 / 5)


def test_popular_products():
    ctx = PrimeContext(7)
    assert popular_product_count(ResidueSet.of([1], ctx), 1) == 1
    H = ResidueSet.of([1, 2, 4], ctx)
    assert popular_product_count(H, 1) == 3  # (1,1),(2,4),(4,2)
    assert popular_product_count(H, 3) == 0
    for rho in (1, 2, 4):
        assert popular_product_count(H, rho) == 3  # subgroup closure
    with pytest.raises(ValueError):
        popular_product_count(H, 0)


def test_richness():
    ctx = PrimeContext(5)
    S = [Mat2(0, 1, 1, 0, ctx), identity(ctx)]
    assert richness_test(ProjSet.full(ctx), S, 0.9).rich
    empty = richness_test(ProjSet.of([], ctx), S, 0.5)
    assert empty.rich and empty.degenerate
    r = richness_test(ProjSet.of([0, 1], ctx), S, 0.9)
    assert not r.rich
    assert r.worst_ratio == pytest.approx(0.5)
