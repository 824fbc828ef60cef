import itertools

import pytest

from zarmod.group_sets import (
    build_family,
    classify_cyclic,
    coset_intersection_count,
    exhaustive_coset_sweep,
    in_borel_pattern,
    tripling,
)
from zarmod.modp import Mat2, PrimeContext, identity, psl2_canonical


def sl2_elements(ctx):
    p = ctx.p
    out = []
    for a, b, c, d in itertools.product(range(p), repeat=4):
        if (a * d - b * c) % p == 1:
            out.append(Mat2(a, b, c, d, ctx))
    return out


def test_families_are_sl2():
    ctx = PrimeContext(11)
    for fam in (
        build_family("S_rho", ctx, B=[1, 2], C=[3, 4], rho=5),
        build_family("S_unipotent", ctx, B=[1, 2], C=[3, 4]),
        build_family("T_free", ctx, N=4),
    ):
        for g in fam:
            assert g.is_sl2()
    assert len(build_family("S_rho", ctx, B=[1, 2], C=[3, 4], rho=5)) == 4


def test_family_shapes():
    ctx = PrimeContext(13)
    fam = build_family("S_unipotent", ctx, B=[2], C=[3])
    assert fam.members[0].entries() == (1, -2 % 13, 3, (1 - 6) % 13)
    tf = build_family("T_free", ctx, N=2)
    assert tf.members[1].entries() == (1, (-4) % 13, 4, (1 - 16) % 13)
    with pytest.raises(ValueError):
        build_family("S_rho", ctx, B=[1], C=[1], rho=0)


def test_classify_upper_triangular_is_borel():
    ctx = PrimeContext(7)
    g = Mat2(1, 1, 0, 1, ctx)
    r = classify_cyclic(g)
    assert r.kind == "borel" and r.verified
    assert in_borel_pattern(r.conjugator.inverse() * g * r.conjugator)


def test_classify_rotation_is_nonsplit_mod7():
    ctx = PrimeContext(7)
    g = Mat2(0, -1, 1, 0, ctx)  # tr^2 - 4 = -4 = 3, a nonsquare mod 7
    assert not ctx.is_square(3)
    r = classify_cyclic(g)
    assert r.kind == "k_epsilon" and r.verified
    assert not ctx.is_square(r.epsilon)


def test_classify_exhaustive_small():
    for p in (5, 7):
        ctx = PrimeContext(p)
        for g in sl2_elements(ctx):
            if g.entries() in ((1, 0, 0, 1), (p - 1, 0, 0, p - 1)):
                continue
            r = classify_cyclic(g)
            assert r.verified, g
            disc = (g.trace() ** 2 - 4) % p
            assert (r.kind == "borel") == ctx.is_square(disc)


def test_coset_count_identity_pair_is_zero():
    ctx = PrimeContext(7)
    fam = build_family("S_rho", ctx, B=[1, 2], C=[1, 2], rho=1)
    e = identity(ctx)
    assert coset_intersection_count(fam, e, e, "borel") == 0


def test_coset_count_conjugation_invariance():
    ctx = PrimeContext(7)
    fam = build_family("S_rho", ctx, B=[1, 2], C=[3, 5], rho=2)
    g1 = Mat2(1, 1, 0, 1, ctx)
    g2 = Mat2(1, 0, 1, 1, ctx)
    base = coset_intersection_count(fam, g1, g2, "borel")
    # conjugation by a Borel element preserves the lower-left-zero pattern
    h = Mat2(2, 1, 0, 4, ctx)  # det = 8 = 1 mod 7
    conj_members = tuple(h * m * h.inverse() for m in fam)
    fam2 = type(fam)(fam.kind, ctx, conj_members, fam.params)
    assert coset_intersection_count(fam2, h * g1 * h.inverse(),
                                    h * g2 * h.inverse(), "borel") == base


def test_exhaustive_sweep_respects_caps_p5():
    ctx = PrimeContext(5)
    fam = build_family("S_rho", ctx, B=[1, 2], C=[1, 2], rho=1)
    assert exhaustive_coset_sweep(fam, "borel") <= 2
    eps = ctx.smallest_nonsquare()
    assert exhaustive_coset_sweep(fam, "k_epsilon", eps) <= 2


def test_tripling():
    ctx = PrimeContext(101)
    e = psl2_canonical(identity(ctx))
    assert tripling({e}) == (1, 1)
    fam = build_family("T_free", ctx, N=3)
    base, triple = tripling(fam.psl2_members())
    assert base == 3
    assert triple >= base * base  # growth regime at this scale
