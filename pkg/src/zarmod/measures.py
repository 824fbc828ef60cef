"""Finitely supported functions on PSL2(F_p): convolution, norms,
flattening profiles under repeated self-convolution, quasirandom mixing
inequalities, multiplicative energy, and the constructive weighted
Balog-Szemeredi-Gowers extraction.

Two arithmetic modes. "exact" keeps Fraction weights in a sparse dict and
every norm is a rational number; "float" converts to a dense numpy array
indexed by the GroupTable and pays 1e-9 style roundoff. Exact mode is the
acceptance-grade path at p <= 13; float mode is for profiling runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from zarmod.grouptab import GroupTable, group_table
from zarmod.modp import PrimeContext, PSL2Elem, ResidueSet


@dataclass(frozen=True)
class GroupFunction:
    """Sparse function PSL2(F_p) -> Q (or float). Treated as immutable."""

    weights: dict
    ctx: PrimeContext
    mode: str = "exact"  # "exact" | "float"

    def __post_init__(self):
        if self.mode not in ("exact", "float"):
            raise ValueError(f"unknown mode {self.mode!r}")

    # -- constructors --------------------------------------------------
    @staticmethod
    def delta(g: PSL2Elem, ctx: PrimeContext, mode="exact") -> "GroupFunction":
        one = Fraction(1) if mode == "exact" else 1.0
        return GroupFunction({g: one}, ctx, mode)

    @staticmethod
    def uniform_on(elems: Iterable[PSL2Elem], ctx: PrimeContext, mode="exact") -> "GroupFunction":
        elems = list(dict.fromkeys(elems))
        if not elems:
            raise ValueError("empty support")
        w = Fraction(1, len(elems)) if mode == "exact" else 1.0 / len(elems)
        return GroupFunction({g: w for g in elems}, ctx, mode)

    @staticmethod
    def uniform_on_group(table: GroupTable, mode="exact") -> "GroupFunction":
        w = Fraction(1, table.order) if mode == "exact" else 1.0 / table.order
        return GroupFunction({table.elem(i): w for i in range(table.order)},
                             table.ctx, mode)

    # -- basic queries -------------------------------------------------
    def __call__(self, g: PSL2Elem):
        return self.weights.get(g, Fraction(0) if self.mode == "exact" else 0.0)

    def support(self):
        return [g for g, w in self.weights.items() if w]

    def mass(self):
        return sum(self.weights.values())

    def l1(self):
        return sum(abs(w) for w in self.weights.values())

    def l2_sq(self):
        return sum(w * w for w in self.weights.values())

    def linf(self):
        return max((abs(w) for w in self.weights.values()), default=0)

    def is_probability(self, tol=1e-9) -> bool:
        if any(w < 0 for w in self.weights.values()):
            return False
        m = self.mass()
        return m == 1 if self.mode == "exact" else abs(m - 1) <= tol

    def is_symmetric(self, tol=0) -> bool:
        for g, w in self.weights.items():
            w2 = self(g.inverse())
            if (w != w2) if self.mode == "exact" else abs(w - w2) > tol:
                return False
        return True

    def scaled(self, c) -> "GroupFunction":
        return GroupFunction({g: w * c for g, w in self.weights.items()},
                             self.ctx, self.mode)

    # -- dense interop -------------------------------------------------
    def to_dense(self, table: GroupTable) -> np.ndarray:
        arr = np.zeros(table.order)
        for g, w in self.weights.items():
            arr[table.elem_index(g)] = float(w)
        return arr

    @staticmethod
    def from_dense(arr: np.ndarray, table: GroupTable) -> "GroupFunction":
        w = {table.elem(i): float(arr[i]) for i in np.nonzero(arr)[0]}
        return GroupFunction(w, table.ctx, "float")


def convolve(f: GroupFunction, g: GroupFunction) -> GroupFunction:
    """(f*g)(x) = sum_y f(y) g(y^{-1} x), computed over the supports."""
    if f.ctx.p != g.ctx.p:
        raise ValueError("context mismatch")
    zero = Fraction(0) if f.mode == "exact" else 0.0
    out: dict = {}
    for a, wa in f.weights.items():
        if not wa:
            continue
        for b, wb in g.weights.items():
            if not wb:
                continue
            x = a * b
            out[x] = out.get(x, zero) + wa * wb
    return GroupFunction(out, f.ctx, f.mode)


def adjoint(f: GroupFunction) -> GroupFunction:
    """f~(x) = f(x^{-1})."""
    return GroupFunction({g.inverse(): w for g, w in f.weights.items()},
                         f.ctx, f.mode)


def dense_convolve(farr: np.ndarray, garr: np.ndarray, table: GroupTable) -> np.ndarray:
    """(f*g)[x] = sum_y f[y] g[idx(y^{-1} x)] via the precomputed index table."""
    return farr @ garr[table.conv_index]


def power_2k(mu: GroupFunction, k: int, table: Optional[GroupTable] = None) -> GroupFunction:
    """mu^(2^k) by k squarings. Dense float path when a table is given."""
    if k < 0:
        raise ValueError("k >= 0 required")
    if table is not None and mu.mode == "float":
        cur = mu.to_dense(table)
        for _ in range(k):
            cur = dense_convolve(cur, cur, table)
        return GroupFunction.from_dense(cur, table)
    cur = mu
    for _ in range(k):
        cur = convolve(cur, cur)
    return cur


@dataclass(frozen=True)
class FlatteningStep:
    k: int
    l2_sq: float
    deviation: float  # ||mu^(2^k)||_2^2 - 1/|G|
    mass: float
    symmetric: bool


@dataclass(frozen=True)
class FlatteningProfile:
    p: int
    steps: tuple
    ratios: tuple  # per-step deviation ratios
    fitted_exponent: Optional[float]  # c in deviation ~ base^(-c k)

    def deviations(self):
        return [s.deviation for s in self.steps]


def flattening_profile(
    mu: GroupFunction, k_max: int, exact_up_to: int = 0
) -> FlatteningProfile:
    """Deviation sequence ||mu^(2^k)||_2^2 - 1/|G| for k = 0..k_max.

    Steps k <= exact_up_to are recomputed in exact rational arithmetic and
    must agree with the float values to 1e-9 (cross-validation, not speed).
    """
    if exact_up_to > 0 and mu.mode != "exact":
        raise ValueError("exact cross-validation needs an exact-mode measure")
    table = group_table(mu.ctx.p)
    n = table.order
    gamma = 1.0 / n

    cur = mu.to_dense(table)
    steps = []
    exact_cur = mu if exact_up_to > 0 or mu.mode == "exact" else None
    for k in range(k_max + 1):
        l2 = float(cur @ cur)
        mass = float(cur.sum())
        sym = bool(np.allclose(cur, cur[table.inv_index], atol=1e-12))
        if exact_cur is not None and k <= exact_up_to:
            ex = exact_cur.l2_sq()
            if abs(float(ex) - l2) > 1e-9:
                raise AssertionError(f"float/exact drift at k={k}: {ex} vs {l2}")
            l2 = float(ex)
        steps.append(FlatteningStep(k, l2, l2 - gamma, mass, sym))
        if k < k_max:
            cur = dense_convolve(cur, cur, table)
            if exact_cur is not None and k + 1 <= exact_up_to:
                exact_cur = convolve(exact_cur, exact_cur)
            else:
                exact_cur = None

    devs = [s.deviation for s in steps]
    ratios = tuple(
        devs[i + 1] / devs[i] if devs[i] > 0 else float("nan")
        for i in range(len(devs) - 1)
    )
    pos = [(k, d) for k, d in enumerate(devs) if d > 1e-15]
    fit = None
    if len(pos) >= 3:
        ks = np.array([k for k, _ in pos], dtype=float)
        ys = np.log([d for _, d in pos])
        fit = float(-np.polyfit(ks, ys, 1)[0])
    return FlatteningProfile(mu.ctx.p, tuple(steps), ratios, fit)


def subgroup_mass(mu: GroupFunction, g: PSL2Elem, gamma_elems: Iterable[PSL2Elem]):
    """mu(g * Gamma) for an explicitly listed subgroup Gamma."""
    coset = {g * h for h in gamma_elems}
    zero = Fraction(0) if mu.mode == "exact" else 0.0
    return sum((mu(x) for x in coset), zero)


def mult_energy(A) -> int:
    """E(A) = #{(a1,a2,a3,a4) in A^4 : a1 a2 = a3 a4}, via the product
    histogram: E = sum_pi r(pi)^2 with r(pi) = #{(a,a'): a a' = pi}."""
    if isinstance(A, ResidueSet):
        p = A.ctx.p
        elems = list(A)
        if any(a % p == 0 for a in elems):
            raise ValueError("multiplicative energy needs invertible elements")
        prods = {}
        for a in elems:
            for b in elems:
                pi = a * b % p
                prods[pi] = prods.get(pi, 0) + 1
    else:
        elems = list(A)
        prods = {}
        for a in elems:
            for b in elems:
                pi = a * b
                prods[pi] = prods.get(pi, 0) + 1
    return sum(r * r for r in prods.values())


def mult_energy_bruteforce(A) -> int:
    """Quadruple-loop oracle, only sensible for |A| <= ~30."""
    elems = list(A)
    if isinstance(A, ResidueSet):
        p = A.ctx.p
        eq = lambda a, b, c, d: a * b % p == c * d % p
    else:
        eq = lambda a, b, c, d: a * b == c * d
    count = 0
    for a in elems:
        for b in elems:
            for c in elems:
                for d in elems:
                    if eq(a, b, c, d):
                        count += 1
    return count


@dataclass(frozen=True)
class BSGReport:
    """Outcome of the weighted high-energy-level-set extraction."""

    M: Fraction
    lam: Fraction
    Lam: float  # sqrt(M), irrational in general
    hypothesis_holds: bool
    level_set: tuple  # A, as PSL2Elems
    card_A: int
    card_upper: float  # M^2 / ||nu||_2^2, must dominate |A|
    card_upper_ok: bool
    pointwise_ok: bool  # |nu(x)| >= lam ||nu||_2^2 on A
    split_small_ok: bool  # ||nu_1||_2^2 <= lam ||nu||_2^2 ||nu_1||_1
    split_large_ok: bool  # ||nu_3||_1 <= ||nu_3||_2^2 / (Lam ||nu||_2^2)
    energy: int
    energy_constant: float  # E(A) * M^9 / |A|^3, logged not asserted


def bsg_extract(nu: GroupFunction, M) -> BSGReport:
    """Level set A = {x : |nu(x)| >= ||nu||_2^2 / M} with the split
    inequalities of the three-part decomposition checked exactly.

    Hypothesis ||nu*nu||_2^2 >= ||nu||_2^2 / M is tested and reported;
    the conclusions are still evaluated either way (the level set exists
    regardless), so callers can see near-threshold behavior.
    """
    M = Fraction(M)
    if M <= 1:
        raise ValueError("M > 1 required")
    if nu.l1() > 2:
        raise ValueError("||nu||_1 <= 2 expected for this extraction")
    lam = 1 / M
    n2 = nu.l2_sq()
    if n2 == 0:
        raise ValueError("zero function")
    conv2 = convolve(nu, nu).l2_sq()
    hypothesis = conv2 >= n2 / M

    thr_small = lam * n2
    A = sorted(
        (g for g, w in nu.weights.items() if abs(w) >= thr_small),
        key=lambda g: g.entries(),
    )
    card_upper = float(M * M / n2)

    # three-part split: |nu| < lam*n2 | middle | >= Lam*n2
    Lam_sq = M  # Lam = sqrt(M); compare against Lam^2 to stay rational
    small = {g: w for g, w in nu.weights.items() if abs(w) < thr_small}
    large = {g: w for g, w in nu.weights.items() if w * w >= Lam_sq * n2 * n2}
    s1_l2 = sum(w * w for w in small.values())
    s1_l1 = sum(abs(w) for w in small.values())
    s3_l2 = sum(w * w for w in large.values())
    s3_l1 = sum(abs(w) for w in large.values())
    split_small_ok = s1_l2 <= lam * n2 * s1_l1
    # ||nu_3||_1 * Lam * ||nu||_2^2 <= ||nu_3||_2^2, squared to avoid sqrt
    split_large_ok = (s3_l1 * s3_l1) * Lam_sq * n2 * n2 <= s3_l2 * s3_l2 or s3_l1 == 0

    energy = mult_energy(A) if A else 0
    e_const = float(energy * M**9 / len(A) ** 3) if A else float("nan")
    return BSGReport(
        M=M, lam=lam, Lam=math.sqrt(float(M)),
        hypothesis_holds=bool(hypothesis),
        level_set=tuple(A), card_A=len(A),
        card_upper=card_upper,
        card_upper_ok=len(A) <= M * M / n2,
        pointwise_ok=all(abs(nu(g)) >= thr_small for g in A),
        split_small_ok=bool(split_small_ok),
        split_large_ok=bool(split_large_ok),
        energy=energy, energy_constant=e_const,
    )


@dataclass(frozen=True)
class QuasirandomReport:
    lhs: float
    rhs: float
    constant: float
    constant_alt: Optional[float]  # the sharper printed constant, logged
    ok: bool


def act_on_function(mu: GroupFunction, f: np.ndarray, table: GroupTable,
                    action: str) -> np.ndarray:
    """(mu * f)(x) = sum_g mu(g) f(g^{-1} x), accumulated over the support
    of mu (one gather row per support element)."""
    if action not in ("projective", "group"):
        raise ValueError(f"unknown action {action!r}")
    out = np.zeros_like(f, dtype=float)
    cols = np.arange(table.order) if action == "group" else None
    for g, w in mu.weights.items():
        i = table.elem_index(g)
        if action == "projective":
            out += float(w) * f[table.act_inv[i]]
        else:
            out += float(w) * f[table.mul_indices(table.inv_index[i], cols)]
    return out


def quasirandom_check(
    mu: GroupFunction, f: np.ndarray, h: np.ndarray, action: str = "projective",
    tol: float = 1e-9,
) -> QuasirandomReport:
    """|<mu*f, h>| <= C ||mu||_2 ||f||_2 ||h||_2 for mean-zero f, h.

    Projective action (X = P^1): C = sqrt(|G| / (|X|-1)) = sqrt((p^2-1)/2).
    Group-on-itself action: the doubly-transitive constant degenerates, so
    C = sqrt(p(p+1)) (the representation-theoretic constant); the smaller
    printed candidate p is reported alongside but not used as the gate.
    """
    table = group_table(mu.ctx.p)
    p = table.p
    size = p + 1 if action == "projective" else table.order
    if f.shape != (size,) or h.shape != (size,):
        raise ValueError("f, h must live on the action space")
    if abs(f.sum()) > tol * max(1, np.abs(f).max()) or \
       abs(h.sum()) > tol * max(1, np.abs(h).max()):
        raise ValueError("f and h must have mean zero")
    lhs = abs(float(act_on_function(mu, f, table, action) @ h))
    mu_l2 = math.sqrt(float(sum(float(w) ** 2 for w in mu.weights.values())))
    if action == "projective":
        const = math.sqrt(table.order / (size - 1))
        const_alt = None
    else:
        const = math.sqrt(p * (p + 1))
        const_alt = float(p)
    rhs = const * mu_l2 * math.sqrt(float(f @ f)) * math.sqrt(float(h @ h))
    return QuasirandomReport(lhs, rhs, const, const_alt, lhs <= rhs + tol)


@dataclass(frozen=True)
class MixingReport:
    """Both alternatives of the indicator-mixing dichotomy for W in P^1."""

    p: int
    card_W: int
    inner: float  # <mu * 1_W, 1_W>
    bound_printed: float  # 2 ||mu||_inf^(1/3) (|W| - |W|/(p+1))^2
    bound_provable: float  # (4 ||mu||_inf)^(1/3) |W|^2
    disjunction_printed: bool  # inner < 4 or inner <= bound_printed
    disjunction_provable: bool  # inner < 4 or inner <= bound_provable
    inner_balanced: float  # <mu * f_W, f_W>, f_W = 1_W - |W|/(p+1)
    balanced_small: bool  # inner_balanced <= 8 + tol


def mixing_dichotomy_check(mu: GroupFunction, W, tol: float = 1e-9) -> MixingReport:
    """Evaluate <mu*1_W, 1_W> against the small-inner-product alternative
    and both candidate majorants (the tighter printed one and the form the
    proof actually yields)."""
    table = group_table(mu.ctx.p)
    p = table.p
    ind = np.zeros(p + 1)
    for x in W:
        ind[x] = 1.0
    card = int(ind.sum())
    conv = act_on_function(mu, ind, table, "projective")
    inner = float(conv @ ind)
    linf = float(max(abs(float(w)) for w in mu.weights.values()))
    shifted = card - card / (p + 1)
    b_printed = 2 * linf ** (1 / 3) * shifted**2
    b_provable = (4 * linf) ** (1 / 3) * card**2
    f_bal = ind - card / (p + 1)
    inner_bal = float(act_on_function(mu, f_bal, table, "projective") @ f_bal)
    return MixingReport(
        p=p, card_W=card, inner=inner,
        bound_printed=b_printed, bound_provable=b_provable,
        disjunction_printed=inner < 4 or inner <= b_printed + tol,
        disjunction_provable=inner < 4 or inner <= b_provable + tol,
        inner_balanced=inner_bal,
        balanced_small=inner_bal <= 8 + tol,
    )
