"""Cayley-graph combinatorics for projected free groups: collision depth
and girth, free-group ball counts, exact return probabilities for the
uniform walk on F_k, integer operator norms, and the norm-based girth
lower bound.

Words are sequences of letters 2i (generator i) and 2i+1 (its inverse);
a word is reduced when no letter is adjacent to its own inverse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from zarmod.modp import Mat2, PrimeContext, PSL2Elem, psl2_canonical

_WORD_CAP = 100_000_000  # hash-table entry guard


@dataclass(frozen=True)
class IntMat2:
    """Exact integer 2x2 matrix, determinant +-1, no modular reduction."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det() not in (1, -1):
            raise ValueError("determinant must be +-1")

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __mul__(self, o: "IntMat2") -> "IntMat2":
        return IntMat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def inverse(self) -> "IntMat2":
        s = self.det()
        return IntMat2(s * self.d, -s * self.b, -s * self.c, s * self.a)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def sign_canonical(self):
        """Entries up to global sign (PSL2(Z) representative)."""
        for e in (self.a, self.b, self.c, self.d):
            if e:
                return self.entries() if e > 0 else (-self.a, -self.b, -self.c, -self.d)
        raise ValueError("zero matrix")

    def frobenius_sq(self) -> int:
        return self.a**2 + self.b**2 + self.c**2 + self.d**2

    def reduce_mod(self, ctx: PrimeContext) -> Mat2:
        return Mat2(self.a, self.b, self.c, self.d, ctx)

    def __repr__(self):
        return f"IntMat2{self.entries()}"


INT_IDENTITY = IntMat2(1, 0, 0, 1)
GEN_U = IntMat2(1, 2, 0, 1)
GEN_V = IntMat2(1, 0, 2, 1)


def t_tilde_family(N: int) -> List[IntMat2]:
    """The integer matrices ((1, -2j), (2j, 1-4j^2)) = v^j u^{-j}, j <= N."""
    if N < 1:
        raise ValueError("N >= 1 required")
    out = []
    for j in range(1, N + 1):
        m = IntMat2(1, -2 * j, 2 * j, 1 - 4 * j * j)
        vj = INT_IDENTITY
        uj = INT_IDENTITY
        for _ in range(j):
            vj = vj * GEN_V
            uj = uj * GEN_U
        assert (vj * uj.inverse()).entries() == m.entries()
        out.append(m)
    return out


# -- free-group ball combinatorics -------------------------------------

def free_sphere_count(k: int, m: int) -> int:
    """Number of reduced words of length exactly m over k free generators."""
    if k < 1 or m < 0:
        raise ValueError("need k >= 1, m >= 0")
    if m == 0:
        return 1
    return 2 * k * (2 * k - 1) ** (m - 1)


def free_ball_count(k: int, m: int) -> int:
    return sum(free_sphere_count(k, j) for j in range(m + 1))


def reduced_words(n_gens: int, length: int, prefix=()):
    """All reduced words of the exact length (letters 2i / 2i+1)."""
    if length == 0:
        yield prefix
        return
    for letter in range(2 * n_gens):
        if prefix and prefix[-1] == letter ^ 1:
            continue
        yield from reduced_words(n_gens, length - 1, prefix + (letter,))


# -- collision depth and girth -----------------------------------------

@dataclass(frozen=True)
class CollisionReport:
    depth: int  # largest m with injective word evaluation
    exact: bool  # False when the cap was hit without any collision
    first_collision_length: Optional[int]
    words_evaluated: int
    symmetric_overlap: bool  # S n S^{-1} nonempty (walk degeneracy flag)


def _project_family(S, ctx: PrimeContext) -> List[PSL2Elem]:
    gens = []
    for g in S:
        if isinstance(g, IntMat2):
            g = g.reduce_mod(ctx)
        if isinstance(g, Mat2):
            g = psl2_canonical(g)
        gens.append(g)
    return gens


def collision_depth(S, ctx: PrimeContext, depth_cap: int = 12) -> CollisionReport:
    """Largest m such that all reduced words of length <= m over S u S^{-1}
    evaluate injectively into PSL2(F_p). Incremental sphere expansion with
    a collision hash; no graph is ever materialized."""
    gens = _project_family(S, ctx)
    steps = []  # letters in order 2i, 2i+1
    for g in gens:
        steps.append(g)
        steps.append(g.inverse())
    overlap = len({g.entries() for g in steps}) < len(steps)

    seen = {psl2_identity_entries(ctx): ()}
    frontier = [((), psl2_canonical(Mat2(1, 0, 0, 1, ctx)))]
    total = 1
    for m in range(1, depth_cap + 1):
        new_frontier = []
        for word, val in frontier:
            for letter in range(len(steps)):
                if word and word[-1] == letter ^ 1:
                    continue
                w2 = word + (letter,)
                v2 = val * steps[letter]
                key = v2.entries()
                if key in seen:
                    return CollisionReport(m - 1, True, m, total, overlap)
                seen[key] = w2
                new_frontier.append((w2, v2))
                total += 1
                if total > _WORD_CAP:
                    return CollisionReport(m - 1, False, None, total, overlap)
        frontier = new_frontier
    return CollisionReport(depth_cap, False, None, total, overlap)


def psl2_identity_entries(ctx: PrimeContext):
    return (1, 0, 0, 1)


def bfs_girth(S, ctx: PrimeContext) -> int:
    """Exact girth of the (simple, undirected) Cayley graph of PSL2(F_p)
    with connection set S u S^{-1}. Dense BFS from every vertex; only
    intended for p <= 13."""
    from zarmod.grouptab import group_table

    table = group_table(ctx.p)
    gens = _project_family(S, ctx)
    conn = sorted({table.elem_index(g) for g in gens}
                  | {table.elem_index(g.inverse()) for g in gens})
    n = table.order
    import numpy as np

    adj = [np.asarray(table.mul_indices(np.arange(n), s)) for s in conn]
    nbrs = [sorted({int(a[v]) for a in adj}) for v in range(n)]

    best = math.inf
    for root in range(n):
        dist = {root: 0}
        parent = {root: -1}
        queue = [root]
        while queue:
            nxt = []
            for u in queue:
                if 2 * dist[u] >= best - 1:
                    continue
                for w in nbrs[u]:
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        parent[w] = u
                        nxt.append(w)
                    elif parent[u] != w and parent[w] != u:
                        best = min(best, dist[u] + dist[w] + 1)
            queue = nxt
        if best == 3:
            break
    return int(best)


# -- return probabilities ----------------------------------------------

def distance_distribution(k: int, m: int) -> List[Fraction]:
    """P(|X_m| = j) for the uniform nearest-neighbour walk on F_k, exact."""
    if k < 2:
        raise ValueError("k >= 2 required")
    probs = [Fraction(1)] + [Fraction(0)] * m
    for _ in range(m):
        nxt = [Fraction(0)] * (m + 1)
        for j, pj in enumerate(probs):
            if not pj:
                continue
            if j == 0:
                nxt[1] += pj
            else:
                if j + 1 <= m:
                    nxt[j + 1] += pj * Fraction(2 * k - 1, 2 * k)
                nxt[j - 1] += pj * Fraction(1, 2 * k)
        probs = nxt
    return probs


def return_probability(k: int, m: int) -> Fraction:
    """Exact p^(2m)(e, e) on F_k."""
    return distance_distribution(k, 2 * m)[0]


def walk_l2_sq(k: int, m: int) -> Fraction:
    """Sum over g of mu^(m)(g)^2, using isotropy: elements at equal
    distance are equiprobable, so the sum is sum_j P_j^2 / |sphere_j|."""
    probs = distance_distribution(k, m)
    total = Fraction(0)
    for j, pj in enumerate(probs):
        if pj:
            total += pj * pj / free_sphere_count(k, j)
    return total


def kesten_bound(k: int, m: int) -> Fraction:
    """((2k-1)/k^2)^m, the squared-spectral-radius bound for p^(2m)(e,e)."""
    return Fraction(2 * k - 1, k * k) ** m


# -- integer norms and the girth lower bound ---------------------------

def operator_norm(g: IntMat2) -> float:
    """Largest singular value, from the closed-form eigenvalue of g^T g."""
    F = g.frobenius_sq()
    disc = F * F - 4  # det(g^T g) = det(g)^2 = 1
    return math.sqrt((F + math.sqrt(disc)) / 2)


def frobenius_bounds(g: IntMat2) -> Tuple[float, float]:
    """(lower, upper) sandwich: half the Frobenius norm and the Frobenius
    norm bracket the operator norm."""
    f = math.sqrt(g.frobenius_sq())
    return 0.5 * f, f


def margulis_bound(p: int, family: Sequence[IntMat2]) -> float:
    """log_n(p/2) with n = max operator norm over the family; every
    collision depth of the mod-p projection must reach at least this."""
    n = max(operator_norm(g) for g in family)
    if n <= 1:
        raise ValueError("norm <= 1 is degenerate for the bound")
    return math.log(p / 2) / math.log(n)


@dataclass(frozen=True)
class FreeGenerationReport:
    free_to_depth: Optional[int]  # depth certified collision-free
    verdict: bool
    words_evaluated: int


def free_generation_check(family: Sequence[IntMat2], depth: int) -> FreeGenerationReport:
    """No two distinct reduced words of length <= depth agree up to sign
    (exact integer evaluation, a finite certificate of freeness)."""
    steps = []
    for g in family:
        steps.append(g)
        steps.append(g.inverse())
    seen = {INT_IDENTITY.sign_canonical()}
    frontier = [((), INT_IDENTITY)]
    total = 1
    for m in range(1, depth + 1):
        new_frontier = []
        for word, val in frontier:
            for letter in range(len(steps)):
                if word and word[-1] == letter ^ 1:
                    continue
                v2 = val * steps[letter]
                key = v2.sign_canonical()
                if key in seen:
                    return FreeGenerationReport(m - 1, False, total)
                seen.add(key)
                new_frontier.append((word + (letter,), v2))
                total += 1
        frontier = new_frontier
    return FreeGenerationReport(depth, True, total)


def walk_support(S, ctx: PrimeContext, m: int) -> set:
    """Support of mu^(m) for the uniform walk on S u S^{-1} mod p."""
    gens = _project_family(S, ctx)
    steps = [g for g in gens] + [g.inverse() for g in gens]
    cur = {psl2_canonical(Mat2(1, 0, 0, 1, ctx))}
    for _ in range(m):
        cur = {x * s for x in cur for s in steps}
    return cur


def nonconcentration_probe(S, ctx: PrimeContext, m: int, subgroup: str,
                           g: Optional[Mat2] = None, eps: Optional[int] = None) -> int:
    """|supp(mu^(m)) n g H| for H a Borel or nonsplit-torus pattern,
    membership tested projectively. Logged against the m^6 reference."""
    from zarmod.group_sets import in_borel_pattern, in_k_epsilon_pattern

    if subgroup not in ("borel", "k_epsilon", "trivial"):
        raise ValueError("subgroup must be borel, k_epsilon, or trivial")
    gi = (g or Mat2(1, 0, 0, 1, ctx)).inverse()
    count = 0
    for x in walk_support(S, ctx, m):
        h = gi * x.rep
        if subgroup == "trivial":
            hit = h.entries() in ((1, 0, 0, 1), (ctx.p - 1, 0, 0, ctx.p - 1))
        elif subgroup == "borel":
            hit = in_borel_pattern(h) or in_borel_pattern(h.neg())
        else:
            hit = in_k_epsilon_pattern(h, eps) or in_k_epsilon_pattern(h.neg(), eps)
        if hit:
            count += 1
    return count


def generates_whole_group(S, ctx: PrimeContext, cap: int = 200_000) -> bool:
    """Probe (never assumed): does the projected family generate a subgroup
    acting transitively on P^1 with order exceeding every structural
    subgroup threshold? True is strong evidence for all of PSL2(F_p)."""
    from zarmod.modp import ProjPoint, lft_apply

    gens = _project_family(S, ctx)
    steps = [g.rep for g in gens] + [g.rep.inverse() for g in gens]
    orbit = {ProjPoint(0)}
    frontier = list(orbit)
    while frontier:
        nxt = []
        for x in frontier:
            for s in steps:
                y = lft_apply(s, x)
                if y not in orbit:
                    orbit.add(y)
                    nxt.append(y)
        frontier = nxt
    if len(orbit) != ctx.p + 1:
        return False
    # transitive on P^1 plus an element count beyond the Borel order p(p-1)/2
    seen = {psl2_canonical(Mat2(1, 0, 0, 1, ctx))}
    frontier = list(seen)
    limit = min(cap, ctx.p * (ctx.p - 1) // 2 + 1)
    while frontier and len(seen) <= limit:
        nxt = []
        for x in frontier:
            for g in gens:
                for y in (x * g, x * g.inverse()):
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
        frontier = nxt
    return len(seen) > ctx.p * (ctx.p - 1) // 2
