"""Intersection and incidence counting on the projective line: |Y n gY|,
sums over matrix families, the weighted mean against a measure, popular
products in F_p^*, and the richness predicate.

ProjSet stores a subset of P^1(F_p) as a bitmask over p+1 slots (slot p
is the point at infinity), so intersections are single AND operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from zarmod.modp import (
    Mat2,
    PrimeContext,
    ProjPoint,
    ResidueSet,
    inverse_set,
    lft_apply,
    point_from_index,
)


@dataclass(frozen=True)
class ProjSet:
    """Subset of P^1(F_p) as an int bitmask of p+1 slots."""

    bits: int
    ctx: PrimeContext

    def __post_init__(self):
        if self.bits >> (self.ctx.p + 1):
            raise ValueError("bit set outside the p+1 slots")

    @staticmethod
    def of(points: Iterable, ctx: PrimeContext) -> "ProjSet":
        bits = 0
        for x in points:
            if isinstance(x, ProjPoint):
                i = x.index(ctx)
            else:
                i = int(x)
                if not 0 <= i <= ctx.p:
                    raise ValueError(f"slot {i} out of range")
            bits |= 1 << i
        return ProjSet(bits, ctx)

    @staticmethod
    def full(ctx: PrimeContext) -> "ProjSet":
        return ProjSet((1 << (ctx.p + 1)) - 1, ctx)

    def __len__(self):
        return self.bits.bit_count()

    def __contains__(self, x: ProjPoint):
        return bool(self.bits >> x.index(self.ctx) & 1)

    def points(self):
        return [point_from_index(i, self.ctx)
                for i in range(self.ctx.p + 1) if self.bits >> i & 1]

    def indices(self):
        return [i for i in range(self.ctx.p + 1) if self.bits >> i & 1]

    def __repr__(self):
        return f"ProjSet({self.points()})"


def apply_to_set(g: Mat2, Y: ProjSet) -> ProjSet:
    """gY, by applying g to each member."""
    return ProjSet.of([lft_apply(g, y) for y in Y.points()], Y.ctx)


def intersection_count(Y: ProjSet, g: Mat2) -> int:
    """|Y n gY|."""
    return (Y.bits & apply_to_set(g, Y).bits).bit_count()


def incidence_count(Y: ProjSet, S) -> int:
    """Sum over the family of |Y n gY|, cross-checked against an
    independent point-on-curve counter (pairs (x, y) in Y x Y lying on the
    graph y = g.x)."""
    total = 0
    curve_total = 0
    pts = Y.points()
    for g in S:
        total += intersection_count(Y, g)
        on_curve = 0
        for x in pts:
            if lft_apply(g, x) in Y:
                on_curve += 1
        curve_total += on_curve
    if total != curve_total:
        raise AssertionError(
            f"incidence counters disagree: {total} vs {curve_total}")
    return total


def exhaustive_group_incidence(Y: ProjSet) -> tuple:
    """(observed, predicted) for the sum over ALL of PSL2(F_p); the
    transitivity orbit count forces |Y|^2 |G| / (p+1) exactly.

    Two independent counters run: a per-element bitset intersection and a
    vectorized pullback count over the action table. Disagreement raises.
    """
    import numpy as np

    from zarmod.grouptab import group_table

    table = group_table(Y.ctx.p)
    total = sum(intersection_count(Y, table.elem(i).rep)
                for i in range(table.order))
    # counter 2: sum_g #{x in Y : g^{-1} x in Y} over the act_inv table
    mask = np.zeros(table.p + 2, dtype=bool)  # one spare slot, never set
    for i in Y.indices():
        mask[i] = True
    idx = Y.indices()
    fast = int(mask[table.act_inv[:, idx]].sum()) if idx else 0
    if fast != total:
        raise AssertionError(f"incidence counters disagree: {total} vs {fast}")
    predicted = len(Y) ** 2 * table.order // (table.ctx.p + 1)
    return total, predicted


@dataclass(frozen=True)
class WeightedMeanReport:
    lhs: float  # sum_g (delta_z * nu)(g) |Y n gY|
    reference: float  # |Y|^2 / p
    deviation: float
    card_Y: int


def weighted_mean_check(nu, z: Mat2, Y: ProjSet) -> WeightedMeanReport:
    """Mean of |Y n gY| under the shifted measure delta_z * nu, compared
    against the |Y|^2/p reference. Diagnostic: the deviation is reported,
    never asserted (its provable ceiling involves ineffective constants)."""
    from zarmod.measures import GroupFunction, convolve
    from zarmod.modp import psl2_canonical

    if not isinstance(nu, GroupFunction):
        raise TypeError("nu must be a GroupFunction")
    shifted = convolve(GroupFunction.delta(psl2_canonical(z), nu.ctx, nu.mode), nu)
    lhs = sum(float(w) * intersection_count(Y, g.rep)
              for g, w in shifted.weights.items())
    ref = len(Y) ** 2 / Y.ctx.p
    return WeightedMeanReport(lhs, ref, lhs - ref, len(Y))


def popular_product_count(A: ResidueSet, rho: int) -> int:
    """|A n rho A^{-1}|, checked against the pair count
    #{(a, a') in A^2 : a a' = rho} by an independent double loop."""
    p = A.ctx.p
    if rho % p == 0:
        raise ValueError("rho must be nonzero")
    Ainv = inverse_set(A)
    from zarmod.modp import dilate

    inter = A.as_set() & dilate(rho, Ainv).as_set()
    pairs = 0
    for a in A:
        if a % p == 0:
            continue
        for b in A:
            if a * b % p == rho % p:
                pairs += 1
    # a in A n rho A^{-1} iff a in A and rho a^{-1} in A: same pairs
    if len(inter) != len({a for a in A if a % p and (rho * A.ctx.inv(a)) % p in A.as_set()}):
        raise AssertionError("intersection counters disagree")
    if pairs != len(inter):
        raise AssertionError(
            f"pair count {pairs} != intersection {len(inter)}")
    return len(inter)


@dataclass(frozen=True)
class RichnessReport:
    rich: bool
    degenerate: bool  # empty Y: vacuously rich
    worst_ratio: Optional[float]
    worst_g: Optional[Mat2]


def richness_test(Y: ProjSet, S, alpha: float) -> RichnessReport:
    """Whether |Y n gY| >= alpha |Y| for every g in the family."""
    if not 0 < alpha < 1:
        raise ValueError("0 < alpha < 1 required")
    if len(Y) == 0:
        return RichnessReport(True, True, None, None)
    worst = None
    worst_g = None
    for g in S:
        ratio = intersection_count(Y, g) / len(Y)
        if worst is None or ratio < worst:
            worst, worst_g = ratio, g
    return RichnessReport(worst >= alpha, False, worst, worst_g)
