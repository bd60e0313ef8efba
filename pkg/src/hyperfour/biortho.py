"""Biorthogonal coefficient functions A_0, A_n, B_n on the real line.

A_n and B_n are contour integrals over the unit semicircle T+ of
``S_n(1/lambda(eta))`` against ``(x - eta)**-2`` and ``(1 + x eta)**-2``.
On T+ the factor ``S_n(1/lambda)`` reaches ``exp(pi n)`` while the integrals
are of order one, so the integrand is split as ``S_n(1/lambda) = E_n - V_n``:

* ``E_n(eta) = exp(-i pi n eta) - p_n(eta)`` where ``p_n`` is the cubic
  Hermite interpolant of ``exp(-i pi n eta)`` at ``eta = +-1``.  E_n is
  entire and vanishes to second order at both cusps, so its integrals are
  moved by Cauchy's theorem to paths where it is bounded by 1, plus
  residues.
* ``V_n = E_n - S_n(1/lambda)`` is bounded on T+; its values at the fixed
  quadrature nodes are computed once in extended precision with mpmath.

Contour integrals run along T+ from -1 to +1 (through i).
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np
from scipy.special import exp1, j1, polygamma

from .modular import build_tables, lambda_eval, lambda_mp
from .snpoly import sn_compute

DEFAULT_NMAX = 25
NODES_PER_PANEL = 16


class ConsistencyError(RuntimeError):
    """Raised when a fast identity and its slow cross-check disagree."""


class OrientationError(RuntimeError):
    """Raised when the orientation self-test fails."""


def _gl(n):
    return np.polynomial.legendre.leggauss(n)


def panel_rule(edges, n=NODES_PER_PANEL):
    """Composite Gauss-Legendre nodes and weights over consecutive panels."""
    x, w = _gl(n)
    edges = np.asarray(edges, dtype=float)
    a, b = edges[:-1, None], edges[1:, None]
    nodes = 0.5 * (b - a) * x + 0.5 * (a + b)
    weights = 0.5 * (b - a) * w
    return nodes.ravel(), weights.ravel()


def _half_edges(n_geometric=30, n_uniform=28):
    """Panel edges on [0, pi/2]: geometric toward the cusp, uniform in the middle."""
    base = np.pi / 16
    geo = base * 2.0 ** -np.arange(n_geometric)[::-1]
    uni = np.linspace(base, np.pi / 2, n_uniform + 1)
    return np.concatenate([[0.0], geo, uni[1:]])


@dataclass(frozen=True)
class SemicirclePath:
    """Fixed quadrature rule on T+ in the angle theta in (0, pi).

    Nodes are symmetric under ``theta -> pi - theta``; the first half of the
    arrays holds theta in (0, pi/2) and ``mirror`` maps each node to its
    partner.

    Attributes
    ----------
    theta, weight : ndarray
        Angles and Gauss-Legendre weights (for d theta).
    eta : ndarray
        ``exp(i theta)``.
    fwd : ndarray
        Weights for ``int ... d eta`` along T+ from -1 to +1.
    lower : ndarray
        Weights for ``int ... d eta`` along the lower semicircle from -1 to +1,
        whose nodes are ``conj(eta)``.
    """

    theta: np.ndarray
    weight: np.ndarray
    eta: np.ndarray = field(init=False)
    fwd: np.ndarray = field(init=False)
    lower: np.ndarray = field(init=False)

    def __post_init__(self):
        eta = np.exp(1j * self.theta)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "fwd", -1j * eta * self.weight)
        object.__setattr__(self, "lower", 1j * np.conj(eta) * self.weight)

    @property
    def orientation(self):
        return "from -1 to +1 through i"


@lru_cache(maxsize=None)
def semicircle_path():
    t, w = panel_rule(_half_edges())
    return SemicirclePath(np.concatenate([t, np.pi - t[::-1]]), np.concatenate([w, w[::-1]]))


def hermite_part(n, eta):
    """Cubic Hermite interpolant of ``exp(-i pi n eta)`` at +-1."""
    eta = np.asarray(eta, dtype=complex)
    return (-1) ** n * (1 + 0.5j * np.pi * n * (eta - eta**3))


def e_part(n, eta):
    """``E_n(eta) = exp(-i pi n eta) - p_n(eta)``."""
    eta = np.asarray(eta, dtype=complex)
    return np.exp(-1j * np.pi * n * eta) - hermite_part(n, eta)


def e_part_prime(n, eta):
    eta = np.asarray(eta, dtype=complex)
    return -1j * np.pi * n * np.exp(-1j * np.pi * n * eta) - (-1) ** n * 0.5j * np.pi * n * (1 - 3 * eta**2)


def _v_table(path, n_max):
    """Extended-precision values of V_n at the path nodes, n = 1..n_max."""
    import mpmath as mp

    half = path.theta.size // 2
    dps = 20 + int(math.ceil(1.4 * n_max))
    polys = [sn_compute(n) for n in range(1, n_max + 1)]
    out = np.empty((n_max, path.theta.size), dtype=complex)
    with mp.workdps(dps):
        coeffs = [[mp.mpf(c.numerator) / c.denominator for c in p.exact] for p in polys]
        pi = mp.pi
        for i in range(half):
            eta = mp.expjpi(mp.mpf(path.theta[i]) / pi)
            w = 1 / lambda_mp(eta, dps)
            for n in range(1, n_max + 1):
                s = mp.mpf(0)
                for c in reversed(coeffs[n - 1]):
                    s = (s + c) * w
                sgn = -1 if n % 2 else 1
                e = mp.expjpi(-n * eta) - sgn * (1 + 0.5j * pi * n * (eta - eta**3))
                out[n - 1, i] = complex(e - s)
    out[:, half:] = np.conj(out[:, :half][:, ::-1])
    return out


@dataclass
class BiorthoTable:
    """Node tables backing the evaluators of A_0, A_n and B_n.

    Parameters
    ----------
    n_max : int
        Largest |n| supported.
    """

    n_max: int = DEFAULT_NMAX
    path: SemicirclePath = field(default_factory=semicircle_path)

    def __post_init__(self):
        tables = build_tables(max(64, self.n_max + 8))
        self.polys = [sn_compute(n, tables) for n in range(1, self.n_max + 1)]
        self.V = _v_table(self.path, self.n_max)
        lam, dlam = lambda_eval(self.path.eta, derivative=True)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            dens = np.abs(dlam) / np.abs(lam) ** 2
        self.a0_density = np.where(np.isfinite(dens), dens, 0.0)
        if not self.an(1, 0.0).real > 0:
            raise OrientationError("A_1(0) is not positive; contour orientation is wrong")

    def _check(self, n):
        if not 1 <= abs(n) <= self.n_max:
            raise ValueError("|n| must be in 1..%d" % self.n_max)

    def a0(self, x):
        """A_0(x) (vectorized over x)."""
        x = np.asarray(x, dtype=float)
        p = self.path
        ker = p.eta.imag / np.abs(x[..., None] - p.eta) ** 2
        out = ker @ (p.weight * self.a0_density) / (2 * np.pi**2)
        return float(out) if out.ndim == 0 else out

    def _contour(self, n, kernel, pole, residue):
        """``int_{T+} S_n(1/lambda) K d eta`` split as E-part minus V-part."""
        p = self.path
        e_low = e_part(n, np.conj(p.eta))
        lower = kernel(np.conj(p.eta)) @ (p.lower * e_low)
        v_part = kernel(p.eta) @ (p.fwd * self.V[n - 1])
        res = np.where(pole, residue, 0.0)
        return lower - 2j * np.pi * res - v_part

    def an(self, n, x):
        """A_n(x) for nonzero n (vectorized over x)."""
        self._check(n)
        x = np.asarray(x, dtype=float)
        m = abs(n)
        with np.errstate(divide="ignore", invalid="ignore"):
            inside = np.abs(x) < 1
            val = self._contour(
                m,
                lambda eta: 1.0 / (x[..., None] - eta) ** 2,
                inside,
                e_part_prime(m, np.where(inside, x, 0.0)),
            )
        out = -val / (4 * np.pi**2 * m)
        out = np.conj(out) if n < 0 else out
        return complex(out) if out.ndim == 0 else out

    def bn(self, n, x):
        """B_n(x) for nonzero n (vectorized over x)."""
        self._check(n)
        x = np.asarray(x, dtype=float)
        m = abs(n)
        with np.errstate(divide="ignore", invalid="ignore"):
            outside = np.abs(x) > 1
            xs = np.where(outside, x, 2.0)
            val = self._contour(
                m,
                lambda eta: 1.0 / (1 + x[..., None] * eta) ** 2,
                outside,
                e_part_prime(m, -1.0 / xs) / xs**2,
            )
        out = -val / (4 * np.pi**2 * m)
        out = np.conj(out) if n < 0 else out
        return complex(out) if out.ndim == 0 else out

    def pairing_a(self, n, m):
        """Fast path for ``<A_n, e_m> = int A_n(x) exp(i pi m x) dx``."""
        self._check(n)
        if n < 0:
            return np.conj(self.pairing_a(-n, -m))
        if m <= 0:
            return 0j
        p = self.path
        t, w = panel_rule(np.linspace(-1, 1, 17), 24)
        e_int = np.sum(w * e_part(n, t) * np.exp(1j * np.pi * m * t))
        v_int = np.sum(p.fwd * self.V[n - 1] * np.exp(1j * np.pi * m * p.eta))
        return complex(m / (2 * n) * (e_int - v_int))

    def pairing_b(self, n, m):
        """Fast path for ``<B_n, e_m> = int B_n(x) exp(i pi m x) dx``.

        For ``m > 0`` this is ``-(m/2n) int_{T+} conj(S_n(1/lambda(xi)))
        exp(i pi m xi) d xi`` (substitute ``x -> -1/x`` and use
        ``1 - lambda = conj(lambda)`` on T+); it vanishes for ``m <= 0``.
        """
        self._check(n)
        if n < 0:
            return np.conj(self.pairing_b(-n, -m))
        if m <= 0:
            return 0j
        p = self.path
        herm = np.sum(p.fwd * np.conj(hermite_part(n, p.eta)) * np.exp(1j * np.pi * m * p.eta))
        v_int = np.sum(p.fwd * np.conj(self.V[n - 1]) * np.exp(1j * np.pi * m * p.eta))
        return complex(-(m / (2 * n)) * (_bessel_arc(n, m) - herm - v_int))

    def pairing_a0(self, m):
        """``<A_0, e_m>`` from the Poisson extension of ``exp(i pi m x)``."""
        p = self.path
        f = np.exp(1j * np.pi * m * p.eta.real - np.pi * abs(m) * p.eta.imag)
        return complex(np.sum(p.weight * self.a0_density * f) / (2 * np.pi))


def _bessel_arc(n, m):
    """``int_{T+} exp(i pi (n/xi + m xi)) d xi`` from -1 to +1.

    The path is moved below the origin onto a circle of radius
    ``rho = min(1, sqrt(n/m))`` (joined to +-1 along the real axis), where the
    integrand is bounded by 1; the essential singularity at 0 contributes the
    residue ``i sqrt(n/m) J_1(2 pi sqrt(nm))``.
    """
    rho = min(1.0, math.sqrt(n / m))
    f = lambda z: np.exp(1j * np.pi * (n / z + m * z))
    k = int(max(8, math.ceil(np.pi * (n / rho + m * rho))))
    phi, w = panel_rule(np.linspace(np.pi, 2 * np.pi, k + 1), 16)
    z = rho * np.exp(1j * phi)
    total = np.sum(w * 1j * z * f(z))
    if rho < 1:
        ku = int(max(4, math.ceil(n * (1 / rho - 1)) + 2))
        u, wu = panel_rule(np.linspace(1.0, 1.0 / rho, ku + 1), 16)
        t = 1.0 / u
        # int_rho^1 g(t) dt = int_1^{1/rho} g(1/u) u^-2 du, and the mirror segment
        total += np.sum(wu * (f(t) + f(-t)) / u**2)
    res = 1j * math.sqrt(n / m) * j1(2 * np.pi * math.sqrt(n * m))
    return total - 2j * np.pi * res


@lru_cache(maxsize=4)
def _table(n_max):
    return BiorthoTable(n_max)


def get_table(n=1):
    """Shared table covering |n| (at least DEFAULT_NMAX)."""
    return _table(max(DEFAULT_NMAX, abs(int(n))))


def a0_eval(x):
    """A_0(x), a strictly positive even function with ``A_0(0) = 4 log 2 / pi^2``."""
    return get_table().a0(x)


def an_eval(n, x):
    """A_n(x); negative n gives the complex conjugate of A_|n|."""
    if n == 0:
        return a0_eval(x)
    return get_table(n).an(n, x)


def bn_eval(n, x):
    """B_n(x); negative n gives the complex conjugate of B_|n|."""
    return get_table(n).bn(n, x)


def r4_count(n, lattice="Z"):
    """Number of representations of n as a sum of four squares from the lattice.

    Parameters
    ----------
    n : int
    lattice : {"Z", "Z+1/2"}
        For ``"Z+1/2"`` the entries are half odd integers, i.e. odd ``m_i``
        with ``sum m_i^2 = 4 n``.
    """
    if lattice in ("Z", "z"):
        target, r = n, int(math.isqrt(n))
        vals = range(-r, r + 1)
    elif lattice in ("Z+1/2", "Z+½", "half"):
        target, r = 4 * n, int(math.isqrt(4 * n))
        vals = [v for v in range(-r, r + 1) if v % 2]
    else:
        raise ValueError("lattice must be 'Z' or 'Z+1/2'")
    sq = {v: v * v for v in vals}
    count = 0
    for a, b, c in product(vals, repeat=3):
        rest = target - sq[a] - sq[b] - sq[c]
        if rest >= 0:
            d = math.isqrt(rest)
            if d * d == rest and (lattice in ("Z", "z") or d % 2):
                count += 2 if d else 1
    return count


def value_at_zero_oracle(n):
    """Closed-form values at 0: ``(A_n(0), A_n(0) + B_n(0))``, n >= 1."""
    return (r4_count(n, "Z+1/2") / (2 * np.pi**2 * n), r4_count(n, "Z") / (2 * np.pi**2 * n))


def value_at_zero_report(n_max=10):
    """Quadrature values at 0 next to the closed forms, reported side by side."""
    rows = [("A_0(0)", a0_eval(0.0), 4 * math.log(2) / np.pi**2)]
    for n in range(1, n_max + 1):
        a_ref, ab_ref = value_at_zero_oracle(n)
        a = an_eval(n, 0.0)
        rows.append(("A_%d(0)" % n, a, a_ref))
        rows.append(("A_%d(0)+B_%d(0)" % (n, n), a + bn_eval(n, 0.0), ab_ref))
    return rows


@dataclass(frozen=True)
class PairingResult:
    value: complex
    cross_check: complex = None
    residual: float = None
    tail_bound: float = None


def _tail_integral(a, X):
    """``int_X^inf exp(i a x) x^-2 dx`` for real a != 0."""
    return np.exp(1j * a * X) / X + 1j * a * exp1(-1j * a * X)


def direct_pairing(n, m, X=2000.0, which="A"):
    """Real-line quadrature of ``int A_n(x) exp(i pi m x) dx`` (or B_n).

    The integral over ``|x| <= X`` uses Gauss-Legendre panels resolving
    ``exp(i pi m x)`` with at least 8 nodes per period; the tails use the
    leading ``c/x^2`` behaviour (``c = B_n(0)`` for A_n, ``A_n(0)`` for B_n).

    Returns
    -------
    value : complex
    tail_bound : float
        ``sup |x^2 f(x)| * 2/X``, a bound on the omitted tails before the
        leading-order correction.
    """
    tab = get_table(n)
    f = tab.an if which == "A" else tab.bn
    g = tab.bn if which == "A" else tab.an
    per = 2.0 / max(abs(m), 1)
    npan = int(math.ceil(2 * X / per * 8 / 16))
    edges = np.linspace(-X, X, npan + 1)
    total = 0j
    chunk = 400
    for k in range(0, npan, chunk):
        x, w = panel_rule(edges[k : min(k + chunk, npan) + 1], 16)
        total += np.sum(w * f(n, x) * np.exp(1j * np.pi * m * x))
    c = g(n, 0.0)
    if m != 0:
        a = np.pi * m
        total += c * (_tail_integral(a, X) + _tail_integral(-a, X))
    else:
        total += 2 * c / X
    return complex(total), 2 * abs(c) / X


def biortho_pairing(n, m, cross_check=False, X=2000.0, tol=1e-6):
    """``<A_n, e_m>`` by the semicircle identity, optionally cross-checked.

    Raises
    ------
    ConsistencyError
        If the cross-check differs by more than ``tol`` plus its tail bound.
    """
    tab = get_table(n)
    val = complex(tab.pairing_a(n, m)) if n != 0 else tab.pairing_a0(m)
    if not cross_check:
        return PairingResult(val)
    slow, tail = direct_pairing(n, m, X) if n != 0 else (_direct_a0(m, X), 2 * a0_eval(0.0) / X)
    res = abs(slow - val)
    if res > tol + tail:
        raise ConsistencyError("fast %r vs direct %r" % (val, slow))
    return PairingResult(val, slow, res, tail)


def _direct_a0(m, X):
    per = 2.0 / max(abs(m), 1)
    npan = int(math.ceil(2 * X / per * 8 / 16))
    x, w = panel_rule(np.linspace(-X, X, npan + 1), 16)
    total = np.sum(w * a0_eval(x) * np.exp(1j * np.pi * m * x))
    c = a0_eval(0.0)
    if m != 0:
        a = np.pi * m
        return complex(total + c * (_tail_integral(a, X) + _tail_integral(-a, X)))
    return complex(total + 2 * c / X)


def periodization_sum(which, n, x, J=10**4):
    """Partial sum ``sum_{|j| <= J} F(x + 2j)`` for F in {A_0, A_n, B_n}.

    Returns
    -------
    value : complex
    tail_bound : float
        ``C / (2J - |x|)`` with ``C = max |F(t)| (1 + t^2)`` over the
        sampled points.
    """
    if J < 10:
        raise ValueError("J must be >= 10")
    pts = x + 2.0 * np.arange(-J, J + 1)
    if which in ("A0", "A_0") or (which in ("A", "A_n") and n == 0):
        vals = a0_eval(pts)
    elif which in ("A", "A_n"):
        vals = an_eval(n, pts)
    elif which in ("B", "B_n"):
        vals = bn_eval(n, pts)
    else:
        raise ValueError("which must be A_0, A_n or B_n")
    C = float(np.max(np.abs(vals) * (1 + pts**2)))
    return complex(np.sum(vals)), C / (2 * J - abs(x))


def aplus_aminus(n, x):
    """``(A_n^+, A_n^-) = (A_n + B_n, A_n - B_n)`` at x."""
    a, b = an_eval(n, x), bn_eval(n, x)
    return a + b, a - b


def t0_apply(func, x, J=200):
    """``T_0 f(x) = sum_{j != 0} (2j - x)^-2 f(1/(2j - x))`` for |x| < 1.

    Terms with ``|j| > J`` are summed with ``f`` frozen at ``f(0)`` using
    the trigamma function.
    """
    j = np.concatenate([np.arange(-J, 0), np.arange(1, J + 1)])
    d = 2.0 * j - x
    s = np.sum(func(1.0 / d) / d**2)
    tail = 0.25 * (polygamma(1, J + 1 - x / 2) + polygamma(1, J + 1 + x / 2))
    return s + func(0.0) * tail


def fixed_point_residuals(n, x):
    """Residuals of ``(I +- T_0) A_n^{+-} = exp(-i pi n x)/2`` at x in (-1, 1)."""
    target = 0.5 * np.exp(-1j * np.pi * n * x)
    ap = lambda t: an_eval(n, t) + bn_eval(n, t)
    am = lambda t: an_eval(n, t) - bn_eval(n, t)
    rp = ap(x) + t0_apply(ap, x) - target
    rm = am(x) - t0_apply(am, x) - target
    return abs(rp), abs(rm)


def write_csv(fh, n, xs, tol=1e-10):
    """Write ``x, re_A_n, im_A_n, re_B_n, im_B_n`` rows for the grid ``xs``.

    For ``n = 0`` the A columns hold A_0 and the B columns are zero.
    """
    xs = np.asarray(xs, dtype=float)
    if n == 0:
        a = a0_eval(xs).astype(complex)
        b = np.zeros_like(a)
    else:
        a, b = an_eval(n, xs), bn_eval(n, xs)
    a, b = np.atleast_1d(a), np.atleast_1d(b)
    fh.write("# n=%d quadrature_tol=%s\n" % (n, repr(tol)))
    fh.write("x,re_A_n,im_A_n,re_B_n,im_B_n\n")
    for row in zip(np.atleast_1d(xs), a.real, a.imag, b.real, b.imag):
        fh.write(",".join(fmt(v) for v in row) + "\n")


def fmt(v):
    """Shortest round-trip representation of a float."""
    return repr(float(v))
