import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperfour.modular import exact_series
from hyperfour.qseries import (
    DomainError,
    InvalidSeries,
    NomeSeries,
    from_integers,
    ns_eval,
    ns_exp,
    ns_inv,
    ns_log,
    ns_mul,
    ns_pow,
)

coeff = st.floats(-1.0, 1.0, allow_nan=False)
series = st.lists(coeff, min_size=6, max_size=12).map(lambda c: NomeSeries([1.0] + c, 0))


class TestArithmetic:
    def test_product_of_binomials(self):
        p = ns_mul(NomeSeries([1, 1, 0]), NomeSeries([1, -1, 0]))
        assert np.allclose(p.coeffs, [1, 0, -1])

    def test_geometric_inverse(self):
        assert np.allclose(ns_inv(NomeSeries([1, -1, 0, 0, 0])).coeffs, 1)

    def test_inverse_of_lambda(self):
        lam = NomeSeries([16, -128, 704, -3072], 1)
        inv = ns_inv(lam)
        assert inv.min_order == -1
        assert np.allclose(inv.coeffs[:3], [1 / 16, 1 / 2, 5 / 4])

    def test_zero_leading_coefficient(self):
        with pytest.raises(InvalidSeries):
            ns_inv(NomeSeries([0, 1]))

    @given(series, series, series)
    @settings(max_examples=30, deadline=None)
    def test_ring_axioms(self, a, b, c):
        left = ns_mul(ns_mul(a, b), c).coeffs
        right = ns_mul(a, ns_mul(b, c)).coeffs
        n = min(left.size, right.size)
        assert np.allclose(left[:n], right[:n], atol=1e-12)
        one = ns_mul(a, ns_inv(a)).coeffs
        assert np.allclose(one, np.eye(1, one.size)[0], atol=1e-9)


class TestTranscendental:
    def test_exp_of_zero(self):
        assert np.allclose(ns_exp(NomeSeries(np.zeros(5))).coeffs, [1, 0, 0, 0, 0])

    def test_mercator(self):
        k = np.arange(1, 8)
        assert np.allclose(ns_log(NomeSeries([1, 1] + [0] * 6)).coeffs[1:], (-1.0) ** (k + 1) / k)

    def test_theta_roundtrip(self):
        th = from_integers(exact_series(64)["theta00"])
        assert np.max(np.abs(ns_exp(ns_log(th)).coeffs - th.coeffs)) < 1e-14

    def test_pow(self):
        assert np.allclose(ns_pow(NomeSeries([1, 1, 0, 0]), 2).coeffs, [1, 2, 1, 0])
        half = ns_pow(NomeSeries([1, 1, 0, 0, 0]), 0.5)
        assert np.allclose(ns_mul(half, half).coeffs, [1, 1, 0, 0, 0], atol=1e-15)

    def test_fractional_monomial_kept(self):
        p = ns_pow(NomeSeries([2.0, 0.0], 1), Fraction_quarter())
        assert p.min_order == 0 and p.lead_exp == Fraction_quarter()

    @given(series, st.floats(-2, 2))
    @settings(max_examples=30, deadline=None)
    def test_pow_inverse_pair(self, a, alpha):
        back = ns_mul(ns_pow(a, alpha), ns_pow(a, -alpha)).coeffs
        assert np.allclose(back, np.eye(1, back.size)[0], atol=1e-9)

    @given(series)
    @settings(max_examples=30, deadline=None)
    def test_exp_log_inverse(self, a):
        assert np.allclose(ns_exp(ns_log(a)).coeffs, a.coeffs, atol=1e-10)

    def test_log_needs_unit(self):
        with pytest.raises(InvalidSeries):
            ns_log(NomeSeries([1, 2], 1))


def Fraction_quarter():
    from fractions import Fraction

    return Fraction(1, 4)


class TestEval:
    def test_constant(self):
        assert ns_eval(NomeSeries([1, 1]), 0)[0] == 1

    def test_geometric(self):
        val, tail = ns_eval(NomeSeries(np.ones(60)), 0.5)
        assert abs(val - 2) <= tail + 1e-15

    def test_lambda_at_i(self):
        lam = from_integers([0] + exact_series(64)["lam"])
        val, _ = ns_eval(lam, np.exp(-np.pi))
        assert abs(val - 0.5) < 1e-12

    def test_outside_disk(self):
        with pytest.raises(DomainError):
            ns_eval(NomeSeries([1, 1]), 1.0)
