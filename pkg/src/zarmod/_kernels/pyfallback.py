"""Pure-Python fallback for the compiled sweep kernels.

Same contract as zarmod._kernels.cfkern; used when the extension is not
built (or when ZARMOD_PURE_PYTHON=1 forces it).
"""

import numpy as np


def max_quotient_array(q: int):
    """Largest partial quotient of a/q for every a in 1..q-1.

    out[0] = 0; out[a] = -1 when gcd(a, q) > 1.
    """
    if q < 1:
        raise ValueError("q must be positive")
    out = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        r0, r1 = q, a
        mx = 0
        while r1:
            b = r0 // r1
            if b > mx:
                mx = b
            r0, r1 = r1, r0 - b * r1
        out[a] = mx if r0 == 1 else -1
    return out


def cf_sweep_check(q_max: int):
    """See cfkern.cf_sweep_check. Returns (pairs_checked, violations)."""
    pairs = 0
    violations = 0
    for q in range(2, q_max + 1):
        for a in range(1, q):
            r0, r1 = q, a
            quots = []
            while r1:
                b = r0 // r1
                quots.append(b)
                r0, r1 = r1, r0 - b * r1
            if r0 != 1:
                continue
            pairs += 1
            if quots[-1] < 2:
                violations += 1
                continue
            s = len(quots)
            u_prev, v_prev = 1, 0
            u_cur, v_cur = 0, 1
            bad = False
            for k, b in enumerate(quots):
                u_next = b * u_cur + u_prev
                v_next = b * v_cur + v_prev
                if abs(u_next * v_cur - u_cur * v_next) != 1:
                    bad = True
                    break
                err = abs(a * v_cur - q * u_cur)
                if k < s - 1:
                    if err * v_next >= q:
                        bad = True
                        break
                elif err * v_next != q:
                    bad = True
                    break
                u_prev, v_prev = u_cur, v_cur
                u_cur, v_cur = u_next, v_next
            if bad or u_cur != a or v_cur != q:
                violations += 1
    return pairs, violations
