"""Dense tables for PSL2(F_p) at small p: element enumeration, inverse
and multiplication indexing, and the action on the projective line.

Only built for |PSL2(F_p)| up to ~50k (p <= 43 or so); everything above
that stays in the sparse/hashing code paths.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from zarmod.modp import Mat2, PrimeContext, PSL2Elem, psl2_canonical

_MAX_ORDER = 60_000


class GroupTable:
    """Enumeration of PSL2(F_p) with fast index arithmetic."""

    def __init__(self, ctx: PrimeContext):
        p = ctx.p
        order = (p**3 - p) // 2
        if order > _MAX_ORDER:
            raise ValueError(f"|PSL2(F_{p})| = {order} too large for dense tables")
        self.ctx = ctx
        self.p = p
        self.order = order

        elems = set()
        # a != 0: d = (1 + bc)/a; a = 0: c = -b^{-1}, d free
        inv = ctx.inverse_table
        for a in range(1, p):
            ai = inv[a]
            for b in range(p):
                for c in range(p):
                    d = (1 + b * c) * ai % p
                    elems.add(_canon(a, b, c, d, p))
        for b in range(1, p):
            c = -inv[b] % p
            for d in range(p):
                elems.add(_canon(0, b, c, d, p))
        assert len(elems) == order, (len(elems), order)

        self.elements = sorted(elems)
        self.index = {e: i for i, e in enumerate(self.elements)}
        arr = np.array(self.elements, dtype=np.int64)
        self.A, self.B, self.C, self.D = arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3]
        self._keys = self._encode(self.A, self.B, self.C, self.D)
        self._key_order = np.argsort(self._keys)
        self._keys_sorted = self._keys[self._key_order]

        # inverse of (a,b,c,d) with det 1 is (d,-b,-c,a)
        self.inv_index = self._lookup(
            *_canon_arrays(self.D, (-self.B) % p, (-self.C) % p, self.A, p)
        )

    # -- index plumbing ------------------------------------------------
    def _encode(self, a, b, c, d):
        p = self.p
        return ((a * p + b) * p + c) * p + d

    def _lookup(self, a, b, c, d):
        keys = self._encode(a, b, c, d)
        pos = np.searchsorted(self._keys_sorted, keys)
        return self._key_order[pos]

    def mul_indices(self, i, j):
        """Index array of element_i * element_j (broadcasting ok)."""
        p = self.p
        a1, b1, c1, d1 = self.A[i], self.B[i], self.C[i], self.D[i]
        a2, b2, c2, d2 = self.A[j], self.B[j], self.C[j], self.D[j]
        a = (a1 * a2 + b1 * c2) % p
        b = (a1 * b2 + b1 * d2) % p
        c = (c1 * a2 + d1 * c2) % p
        d = (c1 * b2 + d1 * d2) % p
        return self._lookup(*_canon_arrays(a, b, c, d, p))

    def elem_index(self, g) -> int:
        """Index of a PSL2Elem / Mat2 / entry tuple."""
        if isinstance(g, PSL2Elem):
            return self.index[g.entries()]
        if isinstance(g, Mat2):
            return self.index[psl2_canonical(g).entries()]
        return self.index[_canon(*g, self.p)]

    def elem(self, i: int) -> PSL2Elem:
        a, b, c, d = self.elements[i]
        return PSL2Elem(Mat2(a, b, c, d, self.ctx))

    # -- cached big tables ---------------------------------------------
    @property
    def conv_index(self):
        """idx[y, x] = index(inverse(y) * x); (f*g)(x) = sum_y f[y] g[idx[y,x]]."""
        if not hasattr(self, "_conv_index"):
            n = self.order
            out = np.empty((n, n), dtype=np.int32)
            cols = np.arange(n)
            for y in range(n):
                out[y] = self.mul_indices(self.inv_index[y], cols)
            self._conv_index = out
        return self._conv_index

    @property
    def act(self):
        """act[g, x] = point index of g . x (projective line, slot p = infinity)."""
        if not hasattr(self, "_act"):
            p = self.p
            n = self.order
            out = np.empty((n, p + 1), dtype=np.int64)
            x = np.arange(p)
            inv = np.array([0] + [self.ctx.inverse_table[t] for t in range(1, p)],
                           dtype=np.int64)
            for g in range(n):
                a, b, c, d = self.elements[g]
                num = (a * x + b) % p
                den = (c * x + d) % p
                img = np.where(den == 0, p, num * inv[den] % p)
                out[g, :p] = img
                out[g, p] = p if c == 0 else a * self.ctx.inverse_table[c] % p
            self._act = out
        return self._act

    @property
    def act_inv(self):
        """act_inv[g, x] = g^{-1} . x."""
        if not hasattr(self, "_act_inv"):
            self._act_inv = self.act[self.inv_index]
        return self._act_inv


def _canon(a, b, c, d, p):
    a, b, c, d = a % p, b % p, c % p, d % p
    half = (p - 1) // 2
    for e in (a, b, c, d):
        if e:
            if e > half:
                return ((-a) % p, (-b) % p, (-c) % p, (-d) % p)
            return (a, b, c, d)
    raise ValueError("zero matrix")


def _canon_arrays(a, b, c, d, p):
    piv = np.where(a != 0, a, np.where(b != 0, b, np.where(c != 0, c, d)))
    flip = piv > (p - 1) // 2
    sign = np.where(flip, -1, 1)
    return (sign * a % p, sign * b % p, sign * c % p, sign * d % p)


@lru_cache(maxsize=8)
def group_table(p: int) -> GroupTable:
    return GroupTable(PrimeContext(p))
