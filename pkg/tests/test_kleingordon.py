import json
import math

import numpy as np
import pytest
from scipy.special import jv

from hyperfour.kleingordon import (
    J1,
    GridFunction,
    InvalidInput,
    WaveFunction,
    goursat_check,
    kg_eval,
    kg_interp_solution,
    kg_interpolate,
    kg_pde_residual,
    load_lattice,
    periodize,
    transfer_apply,
)
from hyperfour.qseries import DomainError


@pytest.fixture(scope="module")
def u5():
    return kg_interp_solution(5)


class TestInterpolation:
    def test_lattice_fast_path(self):
        w = kg_interpolate({2: 1.0, 0: 0.5}, {3: 1.0})
        assert abs(w.lattice_value(2, "x") - 1) < 1e-7
        assert abs(w.lattice_value(0, "x") - 0.5) < 1e-7
        assert abs(w.lattice_value(4, "x")) < 1e-7
        assert abs(w.lattice_value(3, "y") - 1) < 1e-7
        assert abs(w.lattice_value(-3, "y")) < 1e-7

    def test_direct_quadrature(self, u5):
        assert abs(kg_eval(u5, 5 * math.pi, 0) - 1) < 1e-3
        assert abs(kg_eval(u5, 2 * math.pi, 0)) < 1e-3
        assert abs(kg_eval(u5, 0, math.pi)) < 1e-3

    def test_beta0_consistency(self):
        kg_interpolate({0: 1.0}, {0: 1.0})
        with pytest.raises(InvalidInput):
            kg_interpolate({0: 1.0}, {0: 2.0})

    def test_range(self):
        with pytest.raises(InvalidInput):
            kg_interpolate({40: 1.0}, {})

    def test_plain_density_has_no_fast_path(self):
        with pytest.raises(InvalidInput):
            WaveFunction(func=lambda t: np.exp(-t * t)).lattice_value(1)

    def test_load_lattice(self):
        w = load_lattice(json.dumps({"alpha": {"1": [0, 1]}, "beta": {"2": 3}}))
        assert w.alpha == {1: 1j} and w.beta == {2: 3}


class TestSolution:
    def test_gaussian_fourier_transform(self):
        # u(x, 0) = int phi(t) e^{ixt} dt for a Gaussian density
        w = WaveFunction(func=lambda t: np.exp(-t * t))
        exact = math.sqrt(math.pi) * math.exp(-1.3**2 / 4)
        # the closed-form tails are exact for c/s^2; the O(X^-3) remainder is left
        err200 = abs(kg_eval(w, 1.3, 0.0) - exact)
        err1000 = abs(kg_eval(w, 1.3, 0.0, X=1000.0) - exact)
        assert err200 < 1e-6
        assert err1000 < err200 / 50

    def test_pde(self, u5):
        assert kg_pde_residual(u5, 0.7, 0.4) < 1e-3

    def test_real_when_data_real(self, u5):
        # A_n has conjugate-symmetric transform structure: u_(n,0) on the axes
        assert abs(kg_eval(u5, 0.0, 0.0).imag) < 1e-9

    def test_bound(self, u5):
        u, bound = kg_eval(u5, 1.0, 0.5, with_bound=True)
        assert bound >= 0 and np.isfinite(u)

    def test_goursat(self):
        w = WaveFunction(func=lambda t: np.exp(-t * t))
        lhs, rhs, res = goursat_check(w, -0.5)
        assert res < 1e-4

    def test_goursat_domain(self, u5):
        with pytest.raises(DomainError):
            goursat_check(u5, 0.5)


class TestJ1:
    def test_small(self):
        assert J1(1.0, 0.0) == 1.0
        assert J1(0.5, 0.5) == pytest.approx(0.5 * jv(1, 1.0) / 0.5, rel=1e-14)

    def test_branches_agree(self):
        for x, y in ((4.0, 3.9), (4.0, 4.1), (-4.0, 4.1)):
            z = x * y
            r = math.sqrt(abs(z))
            ref = x * jv(1, 2 * r) / r if z > 0 else None
            if ref is not None:
                assert J1(x, y) == pytest.approx(ref, rel=1e-10, abs=1e-12)

    def test_negative_argument_growth(self):
        assert J1(-5.0, 5.0) < 0 and abs(J1(-5.0, 5.0)) > 5

    def test_domain(self):
        with pytest.raises(DomainError):
            J1(100.0, 100.0)


class TestTransfer:
    f = GridFunction.from_callable(lambda t: np.cos(3 * t) + 0.5j * t)

    def test_grid_size(self):
        with pytest.raises(ValueError):
            GridFunction(np.ones(10))

    def test_constant_omega_zero(self):
        one = GridFunction.from_callable(np.ones_like)
        val, _ = transfer_apply(("omega", 0), one, 0.0)
        # sum_{j != 0} (2j)^-2 = pi^2 / 12
        assert abs(val - math.pi**2 / 12) < 1e-10

    @pytest.mark.parametrize("w", [0.0, 0.25, 0.5])
    @pytest.mark.parametrize("t", [-0.6, 0.1])
    def test_triangle_inequality(self, w, t):
        val, _ = transfer_apply(("omega", w), self.f, t)
        dom, _ = transfer_apply(("abs_k", 0), self.f.abs(), t)
        assert abs(val) <= dom.real + 1e-12

    def test_k2_bound(self):
        for t in (-0.9, 0.0, 0.5):
            val, _ = transfer_apply(("k", 2), self.f, t)
            one = GridFunction.from_callable(np.ones_like)
            dom, _ = transfer_apply(("abs_k", 2), one, t)
            assert abs(val) <= self.f.sup * dom.real + 1e-12

    def test_domain(self):
        with pytest.raises(DomainError):
            transfer_apply(("k", 0), self.f, 1.0)


class TestPeriodize:
    def test_lorentzian(self):
        val, bound = periodize(lambda s: 1 / (1 + s * s), 0.0)
        exact = (math.pi / 2) / math.tanh(math.pi / 2)
        assert abs(val - exact) <= bound
        assert bound < 1e-4

    def test_periodic(self):
        g = lambda s: 1 / (1 + s * s)
        assert abs(periodize(g, 0.3)[0] - periodize(g, 2.3)[0]) < 2e-4
