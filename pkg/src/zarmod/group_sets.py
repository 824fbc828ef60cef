"""Explicit matrix families in SL2(F_p) and subgroup-theoretic analysis:
cyclic-subgroup classification, coset-intersection counts, and the
symmetrized tripling growth probe.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from zarmod.modp import (
    Mat2,
    PrimeContext,
    PSL2Elem,
    identity,
    psl2_canonical,
)


@dataclass(frozen=True)
class MatrixFamily:
    """A structured generator family inside SL2(F_p).

    kinds:
      S_rho:        rows ((-c/rho, -1 + bc/rho), (1, -b)), b in B, c in C
      S_unipotent:  ((1, -b), (c, 1 - bc)), b in B, c in C
      T_free:       ((1, -2j), (2j, 1 - 4j^2)), 1 <= j <= N
    """

    kind: str
    ctx: PrimeContext
    members: tuple  # Mat2, in parameter order
    params: dict

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def psl2_members(self):
        return [psl2_canonical(g) for g in self.members]

    def projectively_distinct(self) -> bool:
        return len(set(g.entries() for g in self.psl2_members())) == len(self.members)


def build_family(
    kind: str,
    ctx: PrimeContext,
    B: Optional[Sequence[int]] = None,
    C: Optional[Sequence[int]] = None,
    rho: Optional[int] = None,
    N: Optional[int] = None,
) -> MatrixFamily:
    p = ctx.p
    members = []
    if kind == "S_rho":
        if rho is None or rho % p == 0:
            raise ValueError("S_rho requires nonzero rho")
        if not B or not C:
            raise ValueError("S_rho requires nonempty B and C")
        ri = ctx.inv(rho)
        for b in B:
            for c in C:
                members.append(Mat2(-ri * c, -1 + ri * b * c, 1, -b, ctx))
        params = {"B": tuple(B), "C": tuple(C), "rho": rho % p}
    elif kind == "S_unipotent":
        if not B or not C:
            raise ValueError("S_unipotent requires nonempty B and C")
        for b in B:
            for c in C:
                members.append(Mat2(1, -b, c, 1 - b * c, ctx))
        params = {"B": tuple(B), "C": tuple(C)}
    elif kind == "T_free":
        if not N or N < 1:
            raise ValueError("T_free requires N >= 1")
        for j in range(1, N + 1):
            members.append(Mat2(1, -2 * j, 2 * j, 1 - 4 * j * j, ctx))
        params = {"N": N}
    else:
        raise ValueError(f"unknown family kind {kind!r}")
    for g in members:
        assert g.is_sl2(), g
    fam = MatrixFamily(kind, ctx, tuple(members), params)
    return fam


@dataclass(frozen=True)
class SubgroupDescriptor:
    """Where a cyclic subgroup generator lives up to conjugacy."""

    kind: str  # "borel" or "k_epsilon"
    conjugator: Mat2
    epsilon: Optional[int] = None  # nonsquare parameter for k_epsilon
    verified: bool = False  # conjugation identity checked by multiplication


_WEYL = (0, -1, 1, 0)


def classify_cyclic(g: Mat2) -> SubgroupDescriptor:
    """Conjugate a non-central SL2 element into the standard Borel (split /
    parabolic case: trace^2 - 4 a square) or into the nonsplit torus shape
    (x, y; eps*y, x) with eps a nonsquare.

    The torus conjugator (1,0; (d-a)/2b, 1) needs b != 0; when b = 0 we
    first conjugate by the Weyl element to move a nonzero entry into b.
    """
    ctx = g.ctx
    p = ctx.p
    if not g.is_sl2():
        raise ValueError("classify_cyclic requires det = 1")
    if g.entries() in ((1, 0, 0, 1), (p - 1, 0, 0, p - 1)):
        raise ValueError("central element")
    t = g.trace()
    disc = (t * t - 4) % p

    if ctx.is_square(disc):
        conj = _borel_conjugator(g)
        res = conj.inverse() * g * conj
        ok = res.c == 0
        return SubgroupDescriptor("borel", conj, verified=ok)

    pre = identity(ctx)
    h = g
    if h.b == 0:
        w = Mat2(*_WEYL, ctx)
        h = w.inverse() * g * w
        pre = w
        assert h.b != 0  # b=c=0 would make the discriminant a square
    shift = (h.d - h.a) * ctx.inv(2 * h.b % p) % p
    u = Mat2(1, 0, shift, 1, ctx)
    conj = pre * u
    res = conj.inverse() * g * conj
    x = (h.a + h.d) * ctx.inv(2) % p
    y = h.b
    eps = disc * ctx.inv(4 * y * y % p) % p
    ok = (
        res.a == x
        and res.d == x
        and res.b == y
        and res.c == eps * y % p
        and not ctx.is_square(eps)
    )
    return SubgroupDescriptor("k_epsilon", conj, epsilon=eps, verified=ok)


def _borel_conjugator(g: Mat2) -> Mat2:
    """Matrix whose first column is an eigenvector of g (det normalized to 1)."""
    ctx = g.ctx
    p = ctx.p
    t = g.trace()
    disc = (t * t - 4) % p
    root = _sqrt_mod(disc, ctx)
    lam = (t + root) * ctx.inv(2) % p
    # eigenvector for lambda: (b, lam - a) unless degenerate, else (lam - d, c)
    w1, w2 = g.b, (lam - g.a) % p
    if w1 == 0 and w2 == 0:
        w1, w2 = (lam - g.d) % p, g.c
    if w1 == 0 and w2 == 0:
        raise AssertionError("central element slipped through")
    # complete (w1, w2) to determinant 1
    if w1 != 0:
        return Mat2(w1, 0, w2, ctx.inv(w1), ctx)
    return Mat2(0, -ctx.inv(w2), w2, 0, ctx)


def _sqrt_mod(x: int, ctx: PrimeContext) -> int:
    x %= ctx.p
    if not ctx.is_square(x):
        raise ValueError("not a square")
    for r in range((ctx.p + 1) // 2):
        if r * r % ctx.p == x:
            return r
    raise AssertionError("unreachable")


def in_borel_pattern(h: Mat2) -> bool:
    return h.c == 0


def in_k_epsilon_pattern(h: Mat2, eps: int) -> bool:
    """Shape (x, eps*y; y, x), tested projectively (sign-invariant)."""
    p = h.ctx.p
    return h.a == h.d and h.b == eps * h.c % p


def coset_intersection_count(
    family: MatrixFamily, g1: Mat2, g2: Mat2, subgroup: str, eps: Optional[int] = None
) -> int:
    """Number of family members h with g1^{-1} h g2^{-1} in the named
    subgroup (pattern test, projective: both signs of the product count)."""
    if subgroup not in ("borel", "k_epsilon"):
        raise ValueError("subgroup must be 'borel' or 'k_epsilon'")
    if subgroup == "k_epsilon" and eps is None:
        raise ValueError("k_epsilon needs its nonsquare parameter")
    g1i = g1.inverse()
    g2i = g2.inverse()
    count = 0
    for h in family:
        m = g1i * h * g2i
        for cand in (m, m.neg()):
            if subgroup == "borel":
                hit = in_borel_pattern(cand)
            else:
                hit = in_k_epsilon_pattern(cand, eps)
            if hit:
                count += 1
                break
    return count


def exhaustive_coset_sweep(
    family: MatrixFamily, subgroup: str, eps: Optional[int] = None
) -> int:
    """Max of coset_intersection_count over ALL (g1, g2) in SL2(F_p)^2,
    vectorized (both pattern tests are invariant under the global sign, so
    the projective test needs no explicit sign loop). Only meant for the
    exhaustive p in {5, 7} sweeps."""
    import numpy as np

    if subgroup not in ("borel", "k_epsilon"):
        raise ValueError("subgroup must be 'borel' or 'k_epsilon'")
    if subgroup == "k_epsilon" and eps is None:
        raise ValueError("k_epsilon needs its nonsquare parameter")
    ctx = family.ctx
    p = ctx.p
    ents = np.array([_sl2_entry_list(ctx)], dtype=np.int64)[0]
    # inverse of (a,b,c,d) with det 1: (d,-b,-c,a)
    inv = np.stack([ents[:, 3], -ents[:, 1] % p, -ents[:, 2] % p, ents[:, 0]],
                   axis=1)
    n = len(ents)
    counts = np.zeros((n, n), dtype=np.int16)
    a1, b1, c1, d1 = inv[:, 0], inv[:, 1], inv[:, 2], inv[:, 3]
    a2, b2, c2, d2 = inv[:, 0], inv[:, 1], inv[:, 2], inv[:, 3]
    for h in family:
        ha, hb, hc, hd = h.entries()
        # t = g1^{-1} h, then m = t g2^{-1}
        ta = (a1 * ha + b1 * hc) % p
        tb = (a1 * hb + b1 * hd) % p
        tc = (c1 * ha + d1 * hc) % p
        td = (c1 * hb + d1 * hd) % p
        mc = (tc[:, None] * a2[None, :] + td[:, None] * c2[None, :]) % p
        if subgroup == "borel":
            counts += mc == 0
        else:
            ma = (ta[:, None] * a2[None, :] + tb[:, None] * c2[None, :]) % p
            mb = (ta[:, None] * b2[None, :] + tb[:, None] * d2[None, :]) % p
            md = (tc[:, None] * b2[None, :] + td[:, None] * d2[None, :]) % p
            counts += (ma == md) & (mb == eps * mc % p)
    return int(counts.max())


def _sl2_entry_list(ctx: PrimeContext):
    p = ctx.p
    out = []
    for a in range(p):
        for b in range(p):
            if a == 0 and b == 0:
                continue
            for c in range(p):
                if a:
                    out.append((a, b, c, (1 + b * c) * ctx.inv(a) % p))
                elif c == (-ctx.inv(b)) % p:
                    out.extend((a, b, c, d) for d in range(p))
    return out


def tripling(A: Iterable[PSL2Elem], cap: int = 2_000_000) -> tuple:
    """(|A|, |(A u A^{-1} u {e})^3|) via hashing of canonical reps."""
    base = set(A)
    if not base:
        raise ValueError("empty set")
    ctx = next(iter(base)).rep.ctx
    sym = set(base)
    sym.update(g.inverse() for g in base)
    sym.add(psl2_canonical(identity(ctx)))
    if len(sym) ** 2 > cap:
        raise MemoryError("projected pair-product size exceeds cap")
    pairs = {g * h for g in sym for h in sym}
    if len(pairs) * len(sym) > 50 * cap:
        raise MemoryError("projected triple-product size exceeds cap")
    triple = {g * h for g in pairs for h in sym}
    return len(base), len(triple)
