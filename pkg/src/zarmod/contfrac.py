"""Regular continued fractions: expansion, convergents, and the
inverse-mirror identities mod p.

All arithmetic is exact (Python ints / Fraction). Conventions:
0/1 expands to the empty quotient list, 1/1 to [0;1]; every other value
in (0,1) gets the unique canonical expansion with last quotient >= 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from zarmod.modp import is_prime


@dataclass(frozen=True)
class CFExpansion:
    """Finite quotient sequence b_1,...,b_s of [0; b_1,...,b_s]."""

    quotients: tuple

    def __post_init__(self):
        if any(b < 1 for b in self.quotients):
            raise ValueError("partial quotients must be positive")

    @property
    def depth(self) -> int:
        return len(self.quotients)

    def max_quotient(self) -> int:
        return max(self.quotients) if self.quotients else 0

    def is_canonical(self) -> bool:
        q = self.quotients
        if not q:
            return True
        if q == (1,):  # the value 1/1, exempt: no alternative exists
            return True
        return q[-1] >= 2

    def __repr__(self):
        return "[0;" + ",".join(map(str, self.quotients)) + "]"


@dataclass(frozen=True)
class ConvergentTable:
    """Numerators u_0..u_s and denominators v_0..v_s of the convergents."""

    u: tuple
    v: tuple

    def pairs(self):
        return list(zip(self.u, self.v))

    @property
    def final(self) -> Fraction:
        return Fraction(self.u[-1], self.v[-1])


def cf_expand(a: int, q: int) -> CFExpansion:
    """Canonical expansion of a/q, 0 <= a <= q, gcd(a, q) = 1."""
    if q < 1 or a < 0 or a > q:
        raise ValueError(f"need 0 <= a <= q >= 1, got {a}/{q}")
    if a == 0:
        if q != 1:
            raise ValueError(f"{a}/{q} is not in lowest terms")
        return CFExpansion(())
    if gcd(a, q) != 1:
        raise ValueError(f"{a}/{q} is not in lowest terms")
    quots = []
    r0, r1 = q, a
    while r1:
        b = r0 // r1
        quots.append(b)
        r0, r1 = r1, r0 - b * r1
    return CFExpansion(tuple(quots))


def cf_value(cf: CFExpansion) -> Fraction:
    """Exact value of [0; b_1,...,b_s]; the empty expansion is 0."""
    val = Fraction(0)
    for b in reversed(cf.quotients):
        val = Fraction(1, b + val)
    return val


def convergents(cf: CFExpansion) -> ConvergentTable:
    """u_{k+1} = b_{k+1} u_k + u_{k-1} (same for v), u_0/v_0 = 0/1."""
    u = [0]
    v = [1]
    u_prev, v_prev = 1, 0
    for b in cf.quotients:
        u_next = b * u[-1] + u_prev
        v_next = b * v[-1] + v_prev
        u_prev, v_prev = u[-1], v[-1]
        u.append(u_next)
        v.append(v_next)
    return ConvergentTable(tuple(u), tuple(v))


def max_quotient(a: int, q: int) -> int:
    """Largest partial quotient of the canonical expansion of a/q."""
    return cf_expand(a, q).max_quotient()


@dataclass(frozen=True)
class MirrorReport:
    """Outcome of checking the quotient-reversal formulas for a^{-1} mod p."""

    a: int
    p: int
    a_star: int
    parity_even: bool
    reversal_value: Fraction  # value of [0; b_s, ..., b_1]
    parity_formula_value: Fraction  # reversal with the odd-s 1,(b_s - 1) head
    verdict: str  # "mirror-of-inverse" or "mirror-of-negative"


def mirror_inverse(a: int, p: int) -> MirrorReport:
    """a^{-1} mod p together with the verdict on which of a*/p or
    (p - a*)/p the quotient-reversal formulas actually produce.

    The plain reversal [0; b_s,...,b_1] equals a*/p when s is odd and
    (p - a*)/p when s is even (from u_s v_{s-1} - u_{s-1} v_s = (-1)^{s-1});
    the parity-adjusted formula, which rewrites the odd case through
    [0; 1, b_s - 1, ...], lands on (p - a*)/p for both parities.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not 1 <= a <= p - 1:
        raise ValueError("need 1 <= a <= p-1")
    a_star = pow(a, p - 2, p)
    cf = cf_expand(a, p)
    b = cf.quotients
    s = len(b)
    reversal = cf_value(CFExpansion(tuple(reversed(b))))
    if s % 2 == 0:
        formula = reversal
    else:
        head = (1, b[-1] - 1) if b[-1] > 1 else (2,)  # [0;1,0,...] degenerates
        if b[-1] > 1:
            formula = cf_value(CFExpansion(head + tuple(reversed(b[:-1]))))
        else:
            # b_s = 1 only happens for a/p = (p-1)/p ([0;1,p-1]) which has
            # even s; for s = 1, b_1 >= 2 always since a < p. Unreachable.
            raise AssertionError("canonical expansion cannot end in 1 here")
    target_inv = Fraction(a_star, p)
    target_neg = Fraction(p - a_star, p)
    if formula == target_inv:
        verdict = "mirror-of-inverse"
    elif formula == target_neg:
        verdict = "mirror-of-negative"
    else:
        verdict = "neither"
    return MirrorReport(a, p, a_star, s % 2 == 0, reversal, formula, verdict)
