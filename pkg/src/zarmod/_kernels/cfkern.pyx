# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for bulk continued-fraction sweeps.

Semantics must match zarmod._kernels.pyfallback exactly; the test suite
runs both backends against each other.
"""

import numpy as np

cimport numpy as cnp


def max_quotient_array(long q):
    """Largest partial quotient of a/q for every a in 1..q-1.

    Returns an int64 array ``out`` of length q with out[0] = 0 and
    out[a] = -1 when gcd(a, q) > 1.
    """
    if q < 1:
        raise ValueError("q must be positive")
    out = np.zeros(q, dtype=np.int64)
    cdef cnp.int64_t[::1] view = out
    cdef long a, r0, r1, b, mx, t
    for a in range(1, q):
        r0 = q
        r1 = a
        mx = 0
        while r1 > 0:
            b = r0 / r1
            if b > mx:
                mx = b
            t = r0 - b * r1
            r0 = r1
            r1 = t
        view[a] = mx if r0 == 1 else -1
    return out


def cf_sweep_check(long q_max):
    """Round-trip / canonicality / convergent-gap sweep over all coprime
    pairs 1 <= a < q <= q_max.

    For each pair the canonical Euclidean expansion is rebuilt into its
    convergents and four exact facts are checked, by cross-multiplication
    in integers (no floats):

      * the final convergent is a/q (round trip),
      * the last quotient is >= 2,
      * |a/q - u_k/v_k| < 1/(v_k v_{k+1}) for k+1 < s, with exact
        equality at k+1 = s,
      * |u_{k+1} v_k - u_k v_{k+1}| = 1 for every k.

    Returns (pairs_checked, violations).
    """
    cdef long q, a, r0, r1, b, t, s, k
    cdef long long pairs = 0, violations = 0
    cdef long long u_prev, u_cur, v_prev, v_cur, u_next, v_next, err, det
    cdef bint bad
    cdef long quots[128]
    for q in range(2, q_max + 1):
        for a in range(1, q):
            r0 = q
            r1 = a
            s = 0
            while r1 > 0:
                b = r0 / r1
                quots[s] = b
                s += 1
                t = r0 - b * r1
                r0 = r1
                r1 = t
            if r0 != 1:
                continue
            pairs += 1
            if quots[s - 1] < 2:
                violations += 1
                continue
            # convergent recursion seeded with u_{-1}/v_{-1} = 1/0
            u_prev = 1
            v_prev = 0
            u_cur = 0
            v_cur = 1
            bad = False
            for k in range(s):
                u_next = quots[k] * u_cur + u_prev
                v_next = quots[k] * v_cur + v_prev
                det = u_next * v_cur - u_cur * v_next
                if det != 1 and det != -1:
                    bad = True
                    break
                err = a * v_cur - q * u_cur
                if err < 0:
                    err = -err
                if k < s - 1:
                    if err * v_next >= q:
                        bad = True
                        break
                else:
                    if err * v_next != q:
                        bad = True
                        break
                u_prev = u_cur
                v_prev = v_cur
                u_cur = u_next
                v_cur = v_next
            if bad or u_cur != a or v_cur != q:
                violations += 1
    return pairs, violations
