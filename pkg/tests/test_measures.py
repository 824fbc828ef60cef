from fractions import Fraction

import numpy as np
import pytest

from zarmod.grouptab import group_table
from zarmod.measures import (
    GroupFunction,
    adjoint,
    bsg_extract,
    convolve,
    flattening_profile,
    mult_energy,
    mult_energy_bruteforce,
    power_2k,
    quasirandom_check,
    subgroup_mass,
    mixing_dichotomy_check,
)
from zarmod.modp import Mat2, PrimeContext, ResidueSet, psl2_canonical, psl2_identity
from zarmod.rng import CounterRng


@pytest.fixture(scope="module")
def t7():
    return group_table(7)


def random_elem(table, rng):
    return table.elem(rng.randrange(table.order))


def test_delta_convolution_identity(t7):
    ctx = t7.ctx
    rng = CounterRng(5, 0)
    e = psl2_identity(ctx)
    f = GroupFunction.uniform_on(
        [random_elem(t7, rng) for _ in range(6)], ctx)
    assert convolve(GroupFunction.delta(e, ctx), f).weights == f.weights
    for _ in range(20):
        a, b = random_elem(t7, rng), random_elem(t7, rng)
        conv = convolve(GroupFunction.delta(a, ctx), GroupFunction.delta(b, ctx))
        assert conv.weights == {a * b: Fraction(1)}


def test_uniform_is_convolution_fixed_point(t7):
    u = GroupFunction.uniform_on_group(t7)
    assert convolve(u, u).weights == u.weights
    assert u.l2_sq() == Fraction(1, t7.order)


def test_mass_multiplies(t7):
    rng = CounterRng(6, 0)
    f = GroupFunction({random_elem(t7, rng): Fraction(1, 3),
                       random_elem(t7, rng): Fraction(1, 2)}, t7.ctx)
    g = GroupFunction({random_elem(t7, rng): Fraction(2, 5)}, t7.ctx)
    assert convolve(f, g).l1() == f.l1() * g.l1()


def test_adjoint(t7):
    rng = CounterRng(7, 0)
    a = random_elem(t7, rng)
    d = GroupFunction.delta(a, t7.ctx)
    assert adjoint(d).weights == {a.inverse(): Fraction(1)}
    f = GroupFunction({random_elem(t7, rng): Fraction(1, 4),
                       random_elem(t7, rng): Fraction(3, 4)}, t7.ctx)
    assert adjoint(adjoint(f)).weights == f.weights
    assert adjoint(f).l2_sq() == f.l2_sq()


def test_power_2k(t7):
    mu = GroupFunction.uniform_on_group(t7)
    assert power_2k(mu, 0).weights == mu.weights
    rng = CounterRng(8, 0)
    sup = [random_elem(t7, rng) for _ in range(4)]
    sup = list(dict.fromkeys(sup + [g.inverse() for g in sup]))
    nu = GroupFunction.uniform_on(sup, t7.ctx)
    sq = power_2k(nu, 1)
    assert sq.mass() == 1
    assert sq.l2_sq() <= nu.l2_sq()


def test_flattening_uniform_and_delta(t7):
    u = GroupFunction.uniform_on_group(t7, mode="float")
    prof = flattening_profile(u, 3)
    assert all(abs(s.deviation) < 1e-12 for s in prof.steps)
    d = GroupFunction.delta(psl2_identity(t7.ctx), t7.ctx, mode="float")
    prof = flattening_profile(d, 3)
    assert all(s.deviation == pytest.approx(1 - 1 / t7.order) for s in prof.steps)


def test_subgroup_mass(t7):
    e = psl2_identity(t7.ctx)
    d = GroupFunction.delta(e, t7.ctx)
    assert subgroup_mass(d, e, [e]) == 1
    # Borel pattern subgroup of PSL2(F_7) has (7*6/2) = 21 elements
    borel = [t7.elem(i) for i in range(t7.order)
             if t7.elem(i).entries()[2] == 0]
    assert len(borel) == 21
    u = GroupFunction.uniform_on_group(t7)
    assert subgroup_mass(u, e, borel) == Fraction(21, 168)


def test_mult_energy_examples():
    ctx = PrimeContext(7)
    assert mult_energy(ResidueSet.of([1], ctx)) == 1
    H = ResidueSet.of([1, 2, 4], ctx)  # cubes subgroup
    assert mult_energy(H) == 27
    A = ResidueSet.of([1, 3, 5], ctx)
    assert mult_energy(A) == mult_energy_bruteforce(A)
    assert mult_energy(A) >= len(A.elements) ** 2


def test_mult_energy_group_elements(t7):
    rng = CounterRng(9, 0)
    elems = list({random_elem(t7, rng) for _ in range(8)})
    assert mult_energy(elems) == mult_energy_bruteforce(elems)


def test_bsg_delta(t7):
    d = GroupFunction.delta(psl2_identity(t7.ctx), t7.ctx)
    r = bsg_extract(d, 2)
    assert r.hypothesis_holds
    assert r.card_A == 1
    assert r.energy == 1
    assert r.pointwise_ok and r.split_small_ok and r.split_large_ok


def test_bsg_subgroup_level_set(t7):
    borel = [t7.elem(i) for i in range(t7.order)
             if t7.elem(i).entries()[2] == 0]
    nu = GroupFunction.uniform_on(borel, t7.ctx)
    r = bsg_extract(nu, Fraction(3, 2))
    assert r.hypothesis_holds  # closure: nu*nu = nu
    assert r.card_A == len(borel)
    assert r.energy == len(borel) ** 3
    assert r.card_upper_ok and r.split_small_ok and r.split_large_ok


def test_bsg_hypothesis_failure_reported(t7):
    rng = CounterRng(10, 0)
    sup = list({random_elem(t7, rng) for _ in range(40)})
    nu = GroupFunction.uniform_on(sup, t7.ctx)
    r = bsg_extract(nu, Fraction(101, 100))
    # spread-out measures fail the near-subgroup hypothesis at M ~ 1
    assert isinstance(r.hypothesis_holds, bool)
    assert r.split_small_ok and r.split_large_ok


def test_quasirandom_zero_function(t7):
    mu = GroupFunction.uniform_on_group(t7, mode="float")
    f = np.zeros(8)
    h = np.zeros(8)
    r = quasirandom_check(mu, f, h, "projective")
    assert r.lhs == 0 and r.ok


def test_quasirandom_uniform_annihilates(t7):
    mu = GroupFunction.uniform_on_group(t7, mode="float")
    rng = CounterRng(11, 0)
    f = np.array([rng.random() for _ in range(8)])
    f -= f.mean()
    r = quasirandom_check(mu, f, f, "projective")
    assert r.lhs == pytest.approx(0, abs=1e-12)
    assert r.constant == pytest.approx((t7.order / 7) ** 0.5)


def test_quasirandom_mean_zero_enforced(t7):
    mu = GroupFunction.uniform_on_group(t7, mode="float")
    with pytest.raises(ValueError):
        quasirandom_check(mu, np.ones(8), np.ones(8), "projective")


def test_mixing_full_and_empty(t7):
    mu = GroupFunction.delta(psl2_identity(t7.ctx), t7.ctx, mode="float")
    r = mixing_dichotomy_check(mu, [])
    assert r.inner == 0 and r.disjunction_printed
    r = mixing_dichotomy_check(mu, range(8))
    assert r.inner == pytest.approx(8)  # p + 1
    assert r.bound_printed == pytest.approx(2 * 7**2)
