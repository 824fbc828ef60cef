import numpy as np

from zarmod import _kernels
from zarmod._kernels import pyfallback
from zarmod.contfrac import cf_expand


def test_backend_reports():
    assert _kernels.BACKEND in ("cython", "python")


def test_max_quotient_array_matches_expansion():
    for q in (7, 101, 360):
        arr = np.asarray(_kernels.max_quotient_array(q))
        assert len(arr) == q
        for a in range(1, q):
            from math import gcd

            if gcd(a, q) == 1:
                assert arr[a] == cf_expand(a, q).max_quotient()
            else:
                assert arr[a] == -1


def test_backends_agree():
    for q in (13, 101, 500):
        assert np.array_equal(
            np.asarray(_kernels.max_quotient_array(q)),
            np.asarray(pyfallback.max_quotient_array(q)),
        )
    assert _kernels.cf_sweep_check(300) == pyfallback.cf_sweep_check(300)


def test_sweep_counts_coprime_pairs():
    # pairs = #{(a, q): 1 <= a < q <= 50, gcd = 1}
    from math import gcd

    expect = sum(1 for q in range(2, 51) for a in range(1, q)
                 if gcd(a, q) == 1)
    pairs, violations = _kernels.cf_sweep_check(50)
    assert pairs == expect
    assert violations == 0
