import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperfour.hfs import (
    HfsCoefficients,
    InvalidInput,
    conjugate_flip,
    exceptional_series,
    exceptional_series_two_sided,
    exceptional_tail_bound,
    expskew_convert,
    growth_envelope_check,
    hfs_eval,
    pskew_convert,
    schwarz_transform,
    split_harmonic,
)
from hyperfour.modular import lambda_eval, theta00_eval
from hyperfour.qseries import DomainError

TAUS = [1j, 0.2 + 1.1j, -0.4 + 0.7j, 0.9 + 2.0j]


def decaying(rng, N=40, rate=1.0):
    z = lambda: complex(*rng.normal(size=2))
    return HfsCoefficients(z(), {n: z() * np.exp(-rate * n) for n in range(1, N + 1)},
                           {n: z() * np.exp(-rate * n) for n in range(1, N + 1)})


class TestEval:
    def test_single_terms(self):
        assert hfs_eval(HfsCoefficients(a={1: 1}), 1j) == pytest.approx(np.exp(-np.pi))
        assert hfs_eval(HfsCoefficients(b={1: 1}), 2j) == pytest.approx(np.exp(-np.pi / 2))
        assert hfs_eval(HfsCoefficients(a0=3), 0.3 + 0.1j) == 3

    def test_negative_index_uses_conjugate(self):
        c = HfsCoefficients(a={-1: 1}, sided="two")
        tau = 0.3 + 0.5j
        assert hfs_eval(c, tau) == pytest.approx(np.exp(-1j * np.pi * np.conj(tau)))

    def test_vectorized(self):
        c = HfsCoefficients(1, {1: 2, 3: -1}, {2: 0.5j})
        vals = hfs_eval(c, np.array(TAUS))
        assert np.allclose(vals, [hfs_eval(c, t) for t in TAUS], rtol=0, atol=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            hfs_eval(HfsCoefficients(1), -1j)

    def test_validation(self):
        with pytest.raises(InvalidInput):
            HfsCoefficients(a={0: 1})
        with pytest.raises(InvalidInput):
            HfsCoefficients(a={-2: 1})

    def test_json_roundtrip(self, rng):
        c = decaying(rng, 8)
        d = HfsCoefficients.from_json(c.to_json())
        assert d == c


class TestExceptional:
    @pytest.mark.parametrize("P", [[0, 1], [0, 0, 1], [0, 2, -1j, 0.5]])
    def test_sums_to_zero(self, P):
        c = exceptional_series(P, 300)
        for tau in TAUS:
            assert abs(hfs_eval(c, tau)) < 1e-8 * max(1, sum(map(abs, P)))

    def test_w_squared_coefficients(self):
        c = exceptional_series([0, 0, 1], 10)
        # lambda^2 = 256 q^2 - 4096 q^3 + ...
        assert c.a0 == -1
        assert c.a.get(1, 0) == 0
        assert c.a[2] == pytest.approx(256)
        assert c.a[3] == pytest.approx(-4096)

    def test_linear_in_P(self):
        c1, c2 = exceptional_series([0, 1], 50), exceptional_series([0, 0, 1], 50)
        c = exceptional_series([0, 2, 3], 50)
        assert np.allclose(c.a_array(50), 2 * c1.a_array(50) + 3 * c2.a_array(50))
        assert np.allclose(c.b_array(50), 2 * c1.b_array(50) + 3 * c2.b_array(50))

    def test_requires_zero_constant(self):
        with pytest.raises(InvalidInput):
            exceptional_series([1, 1])

    def test_two_sided(self):
        c, c0 = exceptional_series_two_sided([0, 1], [0, 0, 1], 300)
        assert c0 == -1
        for tau in TAUS:
            assert abs(hfs_eval(c, tau)) < 1e-8

    def test_tail_bound_covers_truncation(self):
        tau = 0.2 + 0.6j
        short = exceptional_series([0, 1], 20)
        assert abs(hfs_eval(short, tau)) <= exceptional_tail_bound([0, 1], 20, tau)


class TestTransforms:
    def test_conjugate_flip_is_conjugation(self, rng):
        c = decaying(rng, 6)
        for tau in TAUS:
            assert abs(hfs_eval(conjugate_flip(c), tau) - np.conj(hfs_eval(c, tau))) < 1e-14

    def test_conjugate_flip_involution(self, rng):
        c = decaying(rng, 5)
        assert conjugate_flip(conjugate_flip(c)) == HfsCoefficients(c.a0, c.a, c.b, sided="two")

    def test_schwarz_agrees_on_semicircle(self):
        c = HfsCoefficients(0.5, {1: 1.0, 2: -0.3j, -1: 0.7, -3: 0.2}, sided="two")
        s = schwarz_transform(c)
        for theta in np.linspace(0.2, np.pi - 0.2, 7):
            eta = np.exp(1j * theta)
            assert abs(hfs_eval(s, eta) - hfs_eval(c, eta)) < 1e-13

    def test_schwarz_rejects_b_terms(self):
        with pytest.raises(InvalidInput):
            schwarz_transform(HfsCoefficients(b={1: 1}))

    def test_split_harmonic(self, rng):
        z = lambda: complex(*rng.normal(size=2))
        c = HfsCoefficients(z(), {1: z(), -2: z()}, {3: z(), -1: z()}, sided="two")
        holo, anti, k = split_harmonic(c)
        assert abs(hfs_eval(holo, 1j)) < 1e-14 and abs(hfs_eval(anti, 1j)) < 1e-14
        tau = 0.3 + 0.8j
        assert abs(hfs_eval(holo, tau) + hfs_eval(anti, tau) + k - hfs_eval(c, tau)) < 1e-13


class TestSkew:
    @pytest.mark.parametrize("beta", [0.5, 1.5, -0.75])
    def test_power_skew_identity(self, rng, beta):
        g = decaying(rng)
        f = pskew_convert(g, beta)
        for tau in (1.1j, 0.15 + 1.3j):
            expected = theta00_eval(tau) ** (2 * beta) * hfs_eval(g, tau)
            assert abs(hfs_eval(f, tau) - expected) < 1e-10 * max(1, abs(expected))

    def test_exponential_skew_identity(self, rng):
        g = decaying(rng)
        w1, w2 = 0.3, -0.4
        f = expskew_convert(g, w1, w2)
        tau = 1.1j
        lam = lambda_eval(tau).real
        expected = lam**w1 * (1 - lam) ** w2 * hfs_eval(g, tau)
        assert abs(hfs_eval(f, tau) - expected) < 1e-10 * abs(expected)

    def test_constant_rule(self, rng):
        g = decaying(rng, 10)
        assert abs(expskew_convert(g, 0.3, -0.4).a0 - 16**0.3 * g.a0) < 1e-12 * abs(g.a0)
        assert pskew_convert(g, 1.5).a0 == g.a0

    def test_extended_precision_roundtrip(self, rng):
        g = decaying(rng, 30, rate=0.0)
        back = pskew_convert(pskew_convert(g, 1.5, dps=40), 1.5, "to_plain", dps=40)
        assert np.max(np.abs(back.a_array(30) - g.a_array(30))) < 1e-9
        assert np.max(np.abs(back.b_array(30) - g.b_array(30))) < 1e-9

    def test_two_sided_rejected(self):
        with pytest.raises(InvalidInput):
            pskew_convert(HfsCoefficients(a={-1: 1}, sided="two"), 1.0)
        with pytest.raises(InvalidInput):
            pskew_convert(HfsCoefficients(a={1: 1}), 1.0, direction="sideways")


class TestGrowth:
    y = np.linspace(0.05, 1.0, 40)

    def test_polynomial_growth_inside_envelope(self):
        c = HfsCoefficients(a={n: 1.0 for n in range(1, 400)})
        assert growth_envelope_check(c, 0.5, self.y)["max_ratio"] < 2

    def test_fast_growth_breaks_small_envelope(self):
        c = HfsCoefficients(a={n: np.exp(2 * np.pi * np.sqrt(n)) for n in range(1, 1500)})
        assert growth_envelope_check(c, 0.5, self.y)["max_ratio"] > 1e3

    def test_fast_growth_inside_wide_envelope(self):
        c = HfsCoefficients(a={n: np.exp(2 * np.pi * np.sqrt(n)) for n in range(1, 1500)})
        assert growth_envelope_check(c, 1.5, self.y)["max_ratio"] < 2


@settings(max_examples=30, deadline=None)
@given(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_eval_is_linear(u, v):
    c1 = HfsCoefficients(1, {1: 2, 2: -1j}, {1: 0.5})
    c2 = HfsCoefficients(-2j, {3: 1}, {2: 1j})
    combo = HfsCoefficients(u * c1.a0 + v * c2.a0,
                            {n: u * c1.a.get(n, 0) + v * c2.a.get(n, 0) for n in (1, 2, 3)},
                            {n: u * c1.b.get(n, 0) + v * c2.b.get(n, 0) for n in (1, 2)})
    tau = 0.1 + 0.9j
    lhs = hfs_eval(combo, tau)
    rhs = u * hfs_eval(c1, tau) + v * hfs_eval(c2, tau)
    assert abs(lhs - rhs) <= 1e-12 * (1 + abs(u) + abs(v)) * 10
