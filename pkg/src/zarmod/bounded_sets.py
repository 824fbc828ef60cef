"""Bounded-partial-quotient sets: F_M(Q), Zaremba sets Z_M(p), the
half-convergent relaxation A_M(p), the floored image set and covering
interval, and dimension estimates for the bounded-quotient fractal.

Membership conventions. A rational in (0,1) has two regular CF
representations, [0;b_1..b_s] with b_s >= 2 and [0;b_1..b_s-1,1].
"canonical" bounds the quotients of the canonical representation only;
"relaxed" accepts a rational when either representation stays <= M
(equivalently: canonical prefix <= M and b_s <= M+1). Z_M(p) is always
canonical. The covering argument needs "relaxed" for the floored set,
since a truncation of a bounded expansion can canonicalize to a word
ending in b_{s-1}+1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

import numpy as np

from zarmod import _kernels
from zarmod.contfrac import cf_expand, convergents
from zarmod.modp import PrimeContext, ResidueSet, is_prime

DEFAULT_CONVENTION = "relaxed"


def _check_convention(convention: str):
    if convention not in ("canonical", "relaxed"):
        raise ValueError(f"unknown convention {convention!r}")


def quotients_bounded(quots, M: int, convention: str = DEFAULT_CONVENTION) -> bool:
    """Whether a canonical quotient word belongs to the M-bounded set."""
    _check_convention(convention)
    if not quots:
        return True
    if any(b > M for b in quots[:-1]):
        return False
    last = quots[-1]
    return last <= M if convention == "canonical" else last <= M + 1


@dataclass(frozen=True)
class FMQSet:
    """F_M(Q): bounded-quotient rationals u/v in [0,1] with v <= Q."""

    M: int
    Q: int
    convention: str
    members: tuple  # sorted Fractions

    def __len__(self):
        return len(self.members)

    def __contains__(self, x):
        return x in set(self.members)


def enumerate_FMQ(M: int, Q: int, convention: str = DEFAULT_CONVENTION) -> FMQSet:
    """Depth-first enumeration over the CF tree (quotients 1..M while the
    denominator continuant stays <= Q), emitting canonical words only."""
    _check_convention(convention)
    if M < 1 or Q < 1:
        raise ValueError("need M >= 1 and Q >= 1")
    record_cap = M if convention == "canonical" else M + 1
    members = [Fraction(0, 1), Fraction(1, 1)]  # boundary conventions

    # state: previous and current convergent (u_prev/v_prev, u/v)
    stack = [(1, 0, 0, 1, True)]  # (u_prev, v_prev, u, v, is_root)
    while stack:
        u_prev, v_prev, u, v, is_root = stack.pop()
        for b in range(1, record_cap + 1):
            u2 = b * u + u_prev
            v2 = b * v + v_prev
            if v2 > Q:
                break
            recordable = b >= 2 and not (is_root and (u2, v2) == (1, 1))
            if recordable:
                members.append(Fraction(u2, v2))
            if b <= M:
                stack.append((u, v, u2, v2, False))
    uniq = sorted(set(members))
    return FMQSet(M, Q, convention, tuple(uniq))


def brute_force_FMQ(M: int, Q: int, convention: str = DEFAULT_CONVENTION) -> FMQSet:
    """Independent oracle: Euclid on every coprime pair v <= Q."""
    members = [Fraction(0, 1)]
    for v in range(1, Q + 1):
        for u in range(1, v + 1):
            if gcd(u, v) != 1:
                continue
            if u == v:
                members.append(Fraction(1, 1))
                continue
            quots = cf_expand(u, v).quotients
            if quotients_bounded(quots, M, convention):
                members.append(Fraction(u, v))
    return FMQSet(M, Q, convention, tuple(sorted(set(members))))


@dataclass(frozen=True)
class ZarembaSet:
    """Z_M(p): residues a with every canonical quotient of a/p at most M."""

    p: int
    M: int
    members: ResidueSet

    def __len__(self):
        return len(self.members)


def zaremba_set(p: int, M: int, ctx: PrimeContext | None = None) -> ZarembaSet:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if M < 1:
        raise ValueError("M >= 1 required")
    ctx = ctx or PrimeContext(p)
    mq = _kernels.max_quotient_array(p)
    members = np.nonzero((mq[1:] <= M) & (mq[1:] > 0))[0] + 1
    return ZarembaSet(p, M, ResidueSet.of(members.tolist(), ctx))


def zaremba_count(p: int, M: int) -> int:
    """|Z_M(p)| without materializing a context (bulk sweeps)."""
    mq = _kernels.max_quotient_array(p)
    return int(np.count_nonzero((mq[1:] <= M) & (mq[1:] > 0)))


@dataclass(frozen=True)
class HalfConvergentSet:
    """A_M(p): the quotient b_k is bounded by M whenever the preceding
    convergent denominator v_{k-1} is at most sqrt(p).

    Indexing note: the condition is on v_{k-1}, not v_k. With the v_k
    reading, a residue like 11 mod 211 = [0;19,5,2] would qualify (its
    huge first quotient makes v_1 = 19 > sqrt(211) immediately) yet lies
    outside the covering sumset of the floored set and the interval at
    beta = 1/2, so the covering statement would be false. The v_{k-1}
    reading guarantees a chain of convergent denominators growing by
    factors <= M+1 throughout [1, sqrt(p)], which is exactly what the
    covering proof consumes, and the inclusion then verifies exhaustively.
    """

    p: int
    M: int
    members: ResidueSet

    def __len__(self):
        return len(self.members)


def half_convergent_set(p: int, M: int, ctx: PrimeContext | None = None) -> HalfConvergentSet:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    ctx = ctx or PrimeContext(p)
    members = []
    for a in range(1, p):
        cf = cf_expand(a, p)
        tab = convergents(cf)
        ok = True
        for k in range(1, len(cf.quotients) + 1):
            if tab.v[k - 1] * tab.v[k - 1] <= p and cf.quotients[k - 1] > M:
                ok = False
                break
        if ok:
            members.append(a)
    return HalfConvergentSet(p, M, ResidueSet.of(members, ctx))


@dataclass(frozen=True)
class FlooredSet:
    """Image of F_M(p^beta) under u/v -> floor(p u / v).

    integers: the exact image in [0, p] (flooring is injective here);
    residues: the same values reduced mod p (0/1 and 1/1 collide at 0).
    """

    p: int
    M: int
    beta: float
    convention: str
    integers: tuple
    residues: ResidueSet
    source_size: int


def floored_set(
    p: int, M: int, beta: float, ctx: PrimeContext | None = None,
    convention: str = DEFAULT_CONVENTION,
) -> FlooredSet:
    if not 0 < beta <= 0.5:
        raise ValueError("need 0 < beta <= 1/2")
    ctx = ctx or PrimeContext(p)
    Q = math.floor(p**beta)
    fmq = enumerate_FMQ(M, max(Q, 1), convention)
    ints = sorted(p * f.numerator // f.denominator for f in fmq.members)
    return FlooredSet(
        p, M, beta, convention, tuple(ints),
        ResidueSet.of(ints, ctx), len(fmq.members),
    )


def interval_set(p: int, M: int, beta: float, ctx: PrimeContext | None = None) -> ResidueSet:
    """Symmetric residue interval of radius floor((M+1)^2 p^(1-2beta) + 1)."""
    if not 0 < beta <= 0.5:
        raise ValueError("need 0 < beta <= 1/2")
    ctx = ctx or PrimeContext(p)
    radius = math.floor((M + 1) ** 2 * p ** (1 - 2 * beta) + 1)
    return ResidueSet.of(range(-radius, radius + 1), ctx)


def interval_radius(p: int, M: int, beta: float) -> int:
    return math.floor((M + 1) ** 2 * p ** (1 - 2 * beta) + 1)


@dataclass(frozen=True)
class CoveringReport:
    p: int
    M: int
    beta: float
    convention: str
    included: bool  # A subset of floored + interval (mod p)
    included_nonzero_reading: bool  # same with floored set cut to 1..p-1
    counterexamples: tuple
    card_A: int
    card_floored_int: int
    card_floored_res: int
    card_interval: int
    card_A_plus_interval: int
    card_floored_plus_interval: int
    chain_ok: bool  # |A+B| <= 3|Ab+B| <= 3|Ab||B|
    floored_injective: bool


def verify_covering(
    p: int, M: int, beta: float, ctx: PrimeContext | None = None,
    convention: str = DEFAULT_CONVENTION,
) -> CoveringReport:
    """Exhaustive check of the covering inclusion A_M(p) within the sumset
    of the floored set and the interval, plus the cardinality chain."""
    ctx = ctx or PrimeContext(p)
    A = half_convergent_set(p, M, ctx).members
    fl = floored_set(p, M, beta, ctx, convention)
    B = interval_set(p, M, beta, ctx)

    cover = {(x + y) % p for x in fl.residues for y in B}
    fl_nz = [x for x in fl.residues if x != 0]
    cover_nz = {(x + y) % p for x in fl_nz for y in B}

    missing = tuple(a for a in A if a not in cover)
    missing_nz = tuple(a for a in A if a not in cover_nz)

    a_plus_b = {(x + y) % p for x in A for y in B}
    chain_ok = (
        len(a_plus_b) <= 3 * len(cover)
        and len(cover) <= len(fl.residues) * len(B)
    )
    return CoveringReport(
        p=p, M=M, beta=beta, convention=convention,
        included=not missing,
        included_nonzero_reading=not missing_nz,
        counterexamples=missing[:8],
        card_A=len(A),
        card_floored_int=len(fl.integers),
        card_floored_res=len(fl.residues),
        card_interval=len(B),
        card_A_plus_interval=len(a_plus_b),
        card_floored_plus_interval=len(cover),
        chain_ok=chain_ok,
        floored_injective=len(fl.integers) == fl.source_size,
    )


@dataclass(frozen=True)
class DimensionEstimate:
    """Hensley-dimension estimates for the M-bounded fractal."""

    M: int
    w_hhd: float  # closed form, natural log
    w_hhd_log2: float  # closed form under the base-2 reading
    w_fit: float | None  # slope/2 of log|F_M(Q)| against log Q
    q_grid: tuple
    counts: tuple


def hensley_dimension(M: int) -> DimensionEstimate:
    """Closed-form dimension approximation (O(1/M^2) term dropped).

    The log-base ambiguity is resolved by emitting both candidates; the
    empirical fit arbitrates (natural log is the one that matches).
    """
    if M < 2:
        raise ValueError("M >= 2 required")
    c1 = 6 / math.pi**2
    c2 = 72 / math.pi**4
    w_ln = 1 - c1 / M - c2 * math.log(M) / M**2
    w_l2 = 1 - c1 / M - c2 * math.log2(M) / M**2
    return DimensionEstimate(M, w_ln, w_l2, None, (), ())


def empirical_dimension(
    M: int, Q_max: int, n_points: int = 8, convention: str = DEFAULT_CONVENTION
) -> DimensionEstimate:
    """Least-squares exponent of |F_M(Q)| over a geometric Q grid."""
    if Q_max < 100:
        raise ValueError("Q_max >= 100 required for a stable fit")
    if n_points < 3:
        raise ValueError("need at least 3 grid points")
    q_lo = max(20, isqrt(Q_max))
    grid = sorted({
        round(q_lo * (Q_max / q_lo) ** (i / (n_points - 1)))
        for i in range(n_points)
    })
    counts = [len(enumerate_FMQ(M, q, convention)) for q in grid]
    slope = np.polyfit(np.log(grid), np.log(counts), 1)[0]
    closed = hensley_dimension(M)
    return DimensionEstimate(
        M, closed.w_hhd, closed.w_hhd_log2, float(slope / 2),
        tuple(grid), tuple(counts),
    )
