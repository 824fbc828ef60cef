import math
from fractions import Fraction

import pytest

from zarmod.cayley import (
    GEN_U,
    GEN_V,
    IntMat2,
    bfs_girth,
    collision_depth,
    distance_distribution,
    free_ball_count,
    free_generation_check,
    free_sphere_count,
    frobenius_bounds,
    generates_whole_group,
    kesten_bound,
    margulis_bound,
    nonconcentration_probe,
    operator_norm,
    return_probability,
    t_tilde_family,
    walk_l2_sq,
)
from zarmod.modp import PrimeContext
from zarmod.rng import CounterRng


def test_intmat2():
    g = IntMat2(1, 2, 0, 1)
    assert (g * g.inverse()).entries() == (1, 0, 0, 1)
    assert IntMat2(0, -1, 1, 0).det() == 1
    with pytest.raises(ValueError):
        IntMat2(2, 0, 0, 1)
    assert IntMat2(-1, 0, 0, -1).sign_canonical() == (1, 0, 0, 1)


def test_t_tilde_identity():
    # v^j u^{-j} really is ((1,-2j),(2j,1-4j^2)); checked inside the builder
    fam = t_tilde_family(3)
    assert fam[2].entries() == (1, -6, 6, -35)
    assert all(g.det() == 1 for g in fam)


def test_sphere_and_ball_counts():
    assert free_sphere_count(2, 1) == 4
    assert free_sphere_count(2, 2) == 12
    assert free_sphere_count(5, 3) == 810
    assert free_ball_count(2, 2) == 1 + 4 + 12


def test_return_probability_exact():
    assert return_probability(2, 1) == Fraction(1, 4)
    assert return_probability(2, 2) == Fraction(7, 64)
    # hand count: closed length-4 walks on the 4-regular tree are
    # 0,1,0,1,0 (4*1*4*1 = 16) and 0,1,2,1,0 (4*3*1*1 = 12); 28/256 = 7/64
    assert return_probability(3, 2) == Fraction(11, 216)


def test_kesten_and_l2_bounds():
    for k in range(2, 11):
        for m in range(1, 9):
            rp = return_probability(k, m)
            assert rp <= kesten_bound(k, m)
            l2 = walk_l2_sq(k, m)
            assert l2 <= Fraction(2, k) ** m
            # reversibility: sum of mu^(m)(g)^2 equals the 2m-step return
            assert l2 == distance_distribution(k, 2 * m)[0]


def test_operator_norm_examples():
    assert operator_norm(IntMat2(1, 0, 0, 1)) == pytest.approx(1.0)
    assert operator_norm(IntMat2(1, 2, 0, 1)) == pytest.approx(1 + math.sqrt(2))
    g = IntMat2(1, -2, 2, -3)
    assert g.frobenius_sq() == 18 == 2 + 16 * 1**4
    assert operator_norm(g) <= 5 * 1**2
    lo, hi = frobenius_bounds(g)
    assert lo <= operator_norm(g) <= hi


def test_frobenius_sandwich_random():
    rng = CounterRng(17, 0)
    for _ in range(500):
        # random determinant-1 integer matrix via u^a v^b u^c
        m = IntMat2(1, 0, 0, 1)
        for gen, reps in ((GEN_U, rng.randrange(5)), (GEN_V, rng.randrange(5)),
                          (GEN_U, rng.randrange(5))):
            for _ in range(reps):
                m = m * gen
        lo, hi = frobenius_bounds(m)
        assert lo <= operator_norm(m) <= hi + 1e-9


def test_free_generation():
    assert free_generation_check([GEN_U], 10).verdict  # unipotent powers
    assert free_generation_check([GEN_U, GEN_V], 6).verdict
    assert free_generation_check(t_tilde_family(3), 5).verdict
    # a relation shows up when the family is NOT free: u and u^2
    r = free_generation_check([GEN_U, GEN_U * GEN_U], 3)
    assert not r.verdict


def test_collision_depth_and_girth_relation():
    for p in (5, 11, 13):
        ctx = PrimeContext(p)
        fam = t_tilde_family(2)
        r = collision_depth(fam, ctx, depth_cap=10)
        if r.symmetric_overlap:
            continue
        g = bfs_girth(fam, ctx)
        d_fail = r.first_collision_length
        assert g in (2 * d_fail, 2 * d_fail - 1), (p, r.depth, g)


def test_collision_depth_exceeds_margulis():
    fam = t_tilde_family(5)
    for p in (101, 499):
        ctx = PrimeContext(p)
        r = collision_depth(fam, ctx, depth_cap=6)
        assert r.depth >= margulis_bound(p, fam)
        assert r.depth >= 0.25 * math.log(p) / math.log(5)


def test_margulis_values():
    fam = t_tilde_family(5)
    n = max(operator_norm(g) for g in fam)
    assert n == pytest.approx(math.sqrt((2 + 16 * 5**4 + math.sqrt((2 + 16 * 5**4) ** 2 - 4)) / 2))
    assert n <= 5 * 25
    assert margulis_bound(997, fam) == pytest.approx(math.log(498.5) / math.log(n))


def test_nonconcentration_probe():
    ctx = PrimeContext(101)
    fam = t_tilde_family(5)
    c = nonconcentration_probe(fam, ctx, 2, "borel")
    assert c <= 2**6
    assert nonconcentration_probe(fam, ctx, 2, "trivial") <= 1


def test_generates_whole_group():
    ctx = PrimeContext(101)
    assert generates_whole_group(t_tilde_family(5), ctx)
    # a single unipotent generates only a p-element subgroup
    assert not generates_whole_group([GEN_U], ctx)
