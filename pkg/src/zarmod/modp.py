"""Prime-field arithmetic, the projective line, 2x2 matrix groups, and
residue-set algebra.

Everything here is an immutable value; functions never mutate their
arguments, so unrestricted concurrent reads are safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import ClassVar, Iterable, Optional


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond any modulus used here."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeContext:
    """The ambient field F_p with cached inverse and squareness tables."""

    p: int

    def __post_init__(self):
        if self.p < 5 or not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not a prime >= 5")

    @cached_property
    def inverse_table(self) -> tuple:
        t = [0] * self.p
        for x in range(1, self.p):
            t[x] = pow(x, self.p - 2, self.p)
        return tuple(t)

    @cached_property
    def square_table(self) -> tuple:
        t = [False] * self.p
        for x in range(self.p):
            t[x * x % self.p] = True
        return tuple(t)

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("0 has no inverse mod p")
        return self.inverse_table[x]

    def is_square(self, x: int) -> bool:
        return self.square_table[x % self.p]

    def smallest_nonsquare(self) -> int:
        for x in range(2, self.p):
            if not self.square_table[x]:
                return x
        raise AssertionError("unreachable for p >= 3")

    def __repr__(self):
        return f"PrimeContext({self.p})"


@dataclass(frozen=True)
class ProjPoint:
    """Point of P^1(F_p): Affine(r) or Infinity (r is None).

    Infinity is a tagged alternative, never a sentinel residue.
    """

    r: Optional[int]

    INFINITY: ClassVar["ProjPoint"]

    @staticmethod
    def affine(r: int, ctx: PrimeContext) -> "ProjPoint":
        return ProjPoint(r % ctx.p)

    @property
    def is_infinity(self) -> bool:
        return self.r is None

    def index(self, ctx: PrimeContext) -> int:
        """Slot in [0, p]: affine points by residue, infinity last."""
        return ctx.p if self.r is None else self.r

    def __lt__(self, other):  # infinity sorts last
        if self.r is None:
            return False
        if other.r is None:
            return True
        return self.r < other.r

    def __repr__(self):
        return "∞" if self.r is None else f"{self.r}"


ProjPoint.INFINITY = ProjPoint(None)


def point_from_index(i: int, ctx: PrimeContext) -> ProjPoint:
    return ProjPoint.INFINITY if i == ctx.p else ProjPoint(i)


def all_points(ctx: PrimeContext):
    """The p+1 points of P^1(F_p)."""
    return [ProjPoint(r) for r in range(ctx.p)] + [ProjPoint.INFINITY]


@dataclass(frozen=True)
class Mat2:
    """Invertible 2x2 matrix over F_p."""

    a: int
    b: int
    c: int
    d: int
    ctx: PrimeContext

    def __post_init__(self):
        p = self.ctx.p
        object.__setattr__(self, "a", self.a % p)
        object.__setattr__(self, "b", self.b % p)
        object.__setattr__(self, "c", self.c % p)
        object.__setattr__(self, "d", self.d % p)
        if self.det() == 0:
            raise ValueError("matrix is singular")

    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.ctx.p

    def is_sl2(self) -> bool:
        return self.det() == 1

    def __mul__(self, other: "Mat2") -> "Mat2":
        if self.ctx.p != other.ctx.p:
            raise ValueError("context mismatch")
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            self.ctx,
        )

    def inverse(self) -> "Mat2":
        di = self.ctx.inv(self.det())
        return Mat2(di * self.d, -di * self.b, -di * self.c, di * self.a, self.ctx)

    def neg(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d, self.ctx)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def trace(self) -> int:
        return (self.a + self.d) % self.ctx.p

    def __repr__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]] mod {self.ctx.p}"


def identity(ctx: PrimeContext) -> Mat2:
    return Mat2(1, 0, 0, 1, ctx)


def lft_apply(g: Mat2, x: ProjPoint) -> ProjPoint:
    """Linear fractional action x -> (ax+b)/(cx+d) on P^1(F_p).

    Conventions: a pole (cx+d = 0) maps to infinity; infinity maps to a/c,
    or to infinity when c = 0.
    """
    p = g.ctx.p
    if x.is_infinity:
        if g.c == 0:
            return ProjPoint.INFINITY
        return ProjPoint(g.a * g.ctx.inv(g.c) % p)
    num = (g.a * x.r + g.b) % p
    den = (g.c * x.r + g.d) % p
    if den == 0:
        return ProjPoint.INFINITY
    return ProjPoint(num * g.ctx.inv(den) % p)


def canonical_entries(a: int, b: int, c: int, d: int, p: int):
    """Projective sign normalization: first nonzero entry in scan order
    (a, b, c, d) lands in {1, ..., (p-1)/2}."""
    for e in (a, b, c, d):
        if e % p:
            if e % p > (p - 1) // 2:
                return ((-a) % p, (-b) % p, (-c) % p, (-d) % p)
            return (a % p, b % p, c % p, d % p)
    raise ValueError("zero matrix")


@dataclass(frozen=True)
class PSL2Elem:
    """Canonical representative of an element of PSL2(F_p)."""

    rep: Mat2

    def __mul__(self, other: "PSL2Elem") -> "PSL2Elem":
        return psl2_canonical(self.rep * other.rep)

    def inverse(self) -> "PSL2Elem":
        return psl2_canonical(self.rep.inverse())

    def entries(self):
        return self.rep.entries()

    def __eq__(self, other):
        return isinstance(other, PSL2Elem) and self.rep.entries() == other.rep.entries()

    def __hash__(self):
        return hash(self.rep.entries())

    def __repr__(self):
        return f"PSL2{self.rep.entries()} mod {self.rep.ctx.p}"


def psl2_canonical(g: Mat2) -> PSL2Elem:
    """Quotient SL2 -> PSL2: canonical(g) = canonical(-g)."""
    if not g.is_sl2():
        raise ValueError("psl2_canonical requires det = 1")
    a, b, c, d = canonical_entries(g.a, g.b, g.c, g.d, g.ctx.p)
    return PSL2Elem(Mat2(a, b, c, d, g.ctx))


def psl2_identity(ctx: PrimeContext) -> PSL2Elem:
    return PSL2Elem(identity(ctx))


@dataclass(frozen=True)
class ResidueSet:
    """Sorted duplicate-free subset of F_p."""

    elements: tuple
    ctx: PrimeContext
    dropped_zero: bool = False  # set when inverse_set silently removed 0

    @staticmethod
    def of(values: Iterable[int], ctx: PrimeContext, dropped_zero=False) -> "ResidueSet":
        return ResidueSet(tuple(sorted({v % ctx.p for v in values})), ctx, dropped_zero)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, v: int):
        return (v % self.ctx.p) in set(self.elements)

    def as_set(self):
        return set(self.elements)

    def __repr__(self):
        return f"ResidueSet({list(self.elements)} mod {self.ctx.p})"


def sumset(A: ResidueSet, B: ResidueSet) -> ResidueSet:
    """A+B = {a+b mod p}."""
    if A.ctx.p != B.ctx.p:
        raise ValueError("context mismatch")
    p = A.ctx.p
    return ResidueSet.of({(a + b) % p for a in A for b in B}, A.ctx)


def dilate(rho: int, A: ResidueSet) -> ResidueSet:
    """rho*A = {rho*a mod p}; rho must be nonzero."""
    p = A.ctx.p
    if rho % p == 0:
        raise ValueError("dilation by 0")
    return ResidueSet.of({rho * a % p for a in A}, A.ctx)


def inverse_set(A: ResidueSet) -> ResidueSet:
    """A^{-1}; drops 0 silently and records the fact on the result."""
    dropped = 0 in A.as_set()
    return ResidueSet.of(
        {A.ctx.inv(a) for a in A if a % A.ctx.p != 0}, A.ctx, dropped_zero=dropped
    )
