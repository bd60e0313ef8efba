import numpy as np
import pytest

from hyperfour.modular import (
    ConvergenceError,
    build_tables,
    lambda_eval,
    lambda_hat,
    lambda_inverse,
    lambda_mp,
    lambda_pow_series,
    lambda_prime_eval,
    theta00_eval,
    theta_pow_series,
)
from hyperfour.qseries import DomainError


def random_points(rng, n=100):
    return rng.uniform(-1, 1, n) + 1j * rng.uniform(1e-3, 10, n)


class TestLambda:
    def test_fourier_coefficients(self):
        assert [lambda_hat(n) for n in range(1, 7)] == [16, -128, 704, -3072, 11488, -38400]

    def test_value_at_i(self):
        assert abs(lambda_eval(1j) - 0.5) < 1e-14

    def test_near_cusp_matches_mpmath(self):
        assert abs(lambda_eval(1 + 0.5j) - complex(lambda_mp(1 + 0.5j, 30))) < 1e-10
        # the cusp asymptotic 1/2 - e^{2 pi}/16 is only good to O(1)
        assert abs(lambda_eval(1 + 0.5j) - (0.5 - np.exp(2 * np.pi) / 16)) < 1

    def test_functional_equations(self, rng):
        tau = random_points(rng)
        lam = lambda_eval(tau)
        scale = np.maximum(1, np.abs(lam))
        assert np.max(np.abs(lambda_eval(-1 / tau) + lam - 1) / scale) < 1e-9
        with np.errstate(over="ignore"):
            assert np.max(np.abs(lambda_eval(tau + 1) - lam / (lam - 1)) / scale) < 1e-9

    def test_semicircle_maps_to_line(self):
        theta = np.linspace(0.1, np.pi - 0.1, 50)
        lam = lambda_eval(np.exp(1j * theta))
        # |lambda| reaches 3e12 at theta = 0.1; the error is relative to it
        assert np.max(np.abs(lam.real - 0.5) / np.maximum(1, np.abs(lam))) < 1e-9

    def test_derivative(self, rng):
        tau = rng.uniform(-1, 1, 20) + 1j * rng.uniform(0.3, 2, 20)
        h = 1e-5
        fd = (lambda_eval(tau + h) - lambda_eval(tau - h)) / (2 * h)
        d = lambda_prime_eval(tau)
        assert np.max(np.abs(fd - d) / np.abs(d)) < 1e-6

    def test_lower_half_plane(self):
        with pytest.raises(DomainError):
            lambda_eval(-1j)


class TestTheta:
    def test_modular_relation(self, rng):
        tau = rng.uniform(-1, 1, 30) + 1j * rng.uniform(0.5, 3, 30)
        lhs = theta00_eval(tau)
        rhs = (tau / 1j) ** -0.5 * theta00_eval(-1 / tau)
        assert np.max(np.abs(lhs - rhs)) < 1e-10

    def test_pow_series_zero(self):
        s = theta_pow_series(0.0)
        assert s.coeffs[0] == 1 and np.all(s.coeffs[1:] == 0)

    def test_lambda_pow_constant(self):
        first, second = lambda_pow_series(0.5)
        assert abs(first.coeffs[0] - 4) < 1e-14 and abs(second.coeffs[0] - 1) < 1e-15


class TestInverse:
    @pytest.mark.parametrize("tau", [0.3 + 1.2j, -0.7 + 0.9j, 0.1 + 3j])
    def test_roundtrip(self, tau):
        t = lambda_inverse(lambda_eval(tau))
        assert abs(lambda_eval(t) - lambda_eval(tau)) < 1e-10

    def test_cusp_asymptotic(self):
        zeta = 0.1 - 1e4j
        t = lambda_inverse(zeta)
        assert abs(t - (-1 + 1j * np.pi / np.log(8 - 16 * zeta))) < 1e-3

    def test_slit(self):
        with pytest.raises(DomainError):
            lambda_inverse(2.0)


def test_table_order_env(monkeypatch):
    from hyperfour import modular

    monkeypatch.setenv("HYPERFOUR_TABLE_ORDER", "80")
    assert modular.default_order() == 80
    assert build_tables(80).truncation_order == 80
