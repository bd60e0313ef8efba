from fractions import Fraction

import numpy as np
import pytest

from hyperfour.modular import build_tables, inv_lambda_series, lambda_eval
from hyperfour.qseries import InvalidSeries
from hyperfour.snpoly import remainder_series, sn_compute, sn_remainder


def principal_part(exact, T=20):
    """Coefficients of q^-k (k = 1..n) in q^-n - S(1/lambda), from the exact 1/lambda series."""
    n = len(exact)
    P = inv_lambda_series(T)[: n + 1]
    out = [Fraction(0)] * (n + 1)  # index j: power q^-j
    out[n] += 1
    pk = [Fraction(1)] + [Fraction(0)] * n
    for k in range(1, n + 1):
        pk = [sum(pk[i] * P[j - i] for i in range(j + 1)) for j in range(n + 1)]
        for j in range(k):
            out[k - j] -= exact[k - 1] * pk[j]
    return out[1:]


class TestSn:
    def test_low_orders(self):
        assert sn_compute(1).exact == (16,)
        assert sn_compute(2).exact == (-256, 256)
        assert sn_compute(3).exact == (2112, -6144, 4096)

    @pytest.mark.parametrize("n", range(1, 13))
    def test_integer_coefficients(self, n):
        s = sn_compute(n)
        assert all(c.denominator == 1 for c in s.exact)
        assert s.exact[-1] == 16**n

    def test_vanishes_at_zero(self):
        assert sn_compute(5)(0.0) == 0

    def test_float_matches_exact(self):
        s = sn_compute(6)
        w = 0.3 - 0.2j
        assert abs(s(w) - complex(s.eval_mp(w))) < 1e-9 * abs(s(w))

    def test_derivative(self):
        s, w, h = sn_compute(4), 0.2 + 0.1j, 1e-6
        fd = (s(w + h) - s(w - h)) / (2 * h)
        assert abs(s.derivative(w) - fd) < 1e-6 * abs(fd)

    def test_truncation_too_small(self):
        with pytest.raises(InvalidSeries):
            sn_compute(60, build_tables(64))

    def test_principal_part_cancels(self):
        for n in range(1, 7):
            assert all(v == 0 for v in principal_part(sn_compute(n).exact))

    @pytest.mark.parametrize("n", [2, 4])
    def test_uniqueness(self, n):
        """Any change to one coefficient leaves a pole at the cusp."""
        exact = sn_compute(n).exact
        for k in range(n):
            pert = list(exact)
            pert[k] += Fraction(1, 1000)
            assert any(v != 0 for v in principal_part(pert))

    def test_remainder_series_rational(self):
        assert all(isinstance(v, Fraction) for v in remainder_series(2, 10))

    def test_remainder_at_top(self):
        assert sn_remainder(1, 10j) == pytest.approx(-8, abs=1e-10)

    def test_remainder_paths_agree(self):
        tau = 0.2 + 1.0j
        direct = np.exp(-3j * np.pi * tau) - sn_compute(3)(1 / lambda_eval(tau))
        assert abs(sn_remainder(3, tau) - direct) < 1e-9
