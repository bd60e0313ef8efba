"""From boundary data on the unit semicircle to hyperbolic Fourier coefficients.

The pipeline for a function f given near T+ (the upper unit semicircle):

1. ``h_0`` on the region above the disks ``|tau - 2j| <= 1`` is the Poisson
   integral of f in the coordinate ``lambda``, where T+ becomes the line
   ``Re lambda = 1/2``.
2. h extends to all of H through the fly-catcher orbit,
   ``h(tau) = f_sym(tau) - h(S* tau)`` with ``f_sym = f + f o S*``.
3. The harmonic Fourier coefficients ``c_n`` of the 2-periodic h are read
   off on a horizontal line and relabelled into ``(a0, a_n, b_n)``.

A second, direct route for ``a_n`` (n > 0) integrates ``S_n(1/lambda)``
against ``f'`` along T+ and reuses the biorthogonal node tables.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicSpline

from .biortho import ConsistencyError, e_part, get_table, panel_rule, semicircle_path
from .halfplane import flycatcher_height, mod2, s_star
from .hfs import HfsCoefficients, hfs_eval
from .modular import lambda_eval
from .qseries import DomainError

EXTRACT_NODES = 256
AMPLIFICATION = 1e4
SMALLEST_GAP = 1e-14


@dataclass(frozen=True)
class BoundaryFunction:
    """Boundary data on T+, optionally with a holomorphic extension to H.

    Use the constructors :meth:`cauchy`, :meth:`constant`,
    :meth:`pure_exponential`, :meth:`sampled` and :meth:`from_callable`.

    Attributes
    ----------
    kind : str
    params : tuple
    func : callable
        Vectorized evaluator. For sampled data it only accepts points on T+
        (through their angle).
    deriv : callable or None
        Complex derivative; None means a finite-difference fallback.
    arc_only : bool
        True when f is only known on T+ (sampled data).
    interp_error : float
        Cubic interpolation error estimate for sampled data, else 0.
    """

    kind: str
    params: tuple
    func: object
    deriv: object = None
    arc_only: bool = False
    interp_error: float = 0.0
    spline_deriv: object = field(default=None, repr=False)

    def __call__(self, tau):
        return self.func(np.asarray(tau, dtype=complex))

    def derivative(self, tau):
        tau = np.asarray(tau, dtype=complex)
        if self.deriv is not None:
            return self.deriv(tau)
        if self.arc_only:
            # d f / d eta = (d f / d theta) / (i eta) on T+
            return self.spline_deriv(np.angle(tau)) / (1j * tau)
        h = 1e-3
        f = self.func
        return (8 * (f(tau + h) - f(tau - h)) - (f(tau + 2 * h) - f(tau - 2 * h))) / (12 * h)

    @classmethod
    def cauchy(cls, x):
        """``f_x(tau) = 1 / (2 pi i (x - tau))``."""
        x = float(x)
        return cls(
            "cauchy",
            (x,),
            lambda t: 1.0 / (2j * np.pi * (x - t)),
            lambda t: 1.0 / (2j * np.pi * (x - t) ** 2),
        )

    @classmethod
    def constant(cls, v):
        v = complex(v)
        return cls("constant", (v,), lambda t: np.full(np.shape(t), v), lambda t: np.zeros(np.shape(t), complex))

    @classmethod
    def pure_exponential(cls, n):
        """``exp(i pi n tau)``."""
        n = int(n)
        return cls(
            "pure_exponential",
            (n,),
            lambda t: np.exp(1j * np.pi * n * t),
            lambda t: 1j * np.pi * n * np.exp(1j * np.pi * n * t),
        )

    @classmethod
    def from_callable(cls, f, df=None):
        return cls("callable", (), f, df)

    @classmethod
    def sampled(cls, theta, values):
        """Samples of f at angles ``theta`` in (0, pi), interpolated by cubic splines.

        Outside the sampled angle range the end values are held constant; the
        Poisson weight of those cusp neighbourhoods is negligible.
        """
        theta = np.asarray(theta, dtype=float)
        values = np.asarray(values, dtype=complex)
        order = np.argsort(theta)
        theta, values = theta[order], values[order]
        if theta.size < 8 or theta[0] <= 0 or theta[-1] >= np.pi:
            raise ValueError("need at least 8 samples with theta in (0, pi)")
        spline = CubicSpline(theta, values)
        coarse = CubicSpline(theta[::2], values[::2])
        err = float(np.max(np.abs(coarse(theta[1::2]) - values[1::2]))) / 16
        lo, hi = theta[0], theta[-1]

        def func(t):
            return spline(np.clip(np.angle(t), lo, hi))

        def dtheta(th):
            inside = (th >= lo) & (th <= hi)
            return np.where(inside, spline(np.clip(th, lo, hi), 1), 0.0)

        return cls("sampled", (lo, hi), func, None, True, err, dtheta)

    @classmethod
    def parse(cls, spec):
        """Parse ``const:v``, ``cauchy:x``, ``exp:n`` or ``csv:path``."""
        kind, _, arg = spec.partition(":")
        if kind == "const":
            return cls.constant(complex(arg.replace("i", "j")))
        if kind == "cauchy":
            return cls.cauchy(float(arg))
        if kind == "exp":
            return cls.pure_exponential(int(arg))
        if kind == "csv":
            data = np.genfromtxt(arg, delimiter=",", names=True)
            return cls.sampled(data["theta"], data["re"] + 1j * data["im"])
        raise ValueError("unknown boundary spec %r (use const:, cauchy:, exp: or csv:)" % spec)


def _panel_edges():
    half = np.asarray(semicircle_path().theta)
    # recover the composite panel edges of the fixed semicircle rule
    from .biortho import _half_edges

    e = _half_edges()
    return np.concatenate([e, np.pi - e[::-1][1:]])


@dataclass
class _BaseRule:
    """Cached node data of the fixed semicircle rule for one boundary function."""

    f: BoundaryFunction

    def __post_init__(self):
        p = semicircle_path()
        self.edges = _panel_edges()
        self.theta, self.weight = p.theta, p.weight
        self.inv_lam, self.dens = _node_data(p.eta)
        self.fval = self.f(p.eta)
        self.panel = np.repeat(np.arange(self.edges.size - 1), p.theta.size // (self.edges.size - 1))


def _node_data(eta):
    """``1/lambda`` and ``|lambda'|/|lambda|^2`` on T+, cusp overflow mapped to 0."""
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        lam, dlam = lambda_eval(eta, derivative=True)
        inv = 1.0 / lam
        dens = np.abs(dlam) / np.abs(lam) ** 2
    bad = ~(np.isfinite(inv) & np.isfinite(dens))
    return np.where(bad, 0.0, inv), np.where(bad, 0.0, dens)


def _graded_edges(a, b, theta0, delta):
    """Split [a, b] at ``theta0 +- delta 2^k`` (geometric toward theta0)."""
    k = delta * 2.0 ** np.arange(0, 60)
    k = k[k < (b - a) * 2 + abs(theta0 - a) + abs(theta0 - b)]
    inner = np.concatenate([theta0 - k, theta0 + k])
    # theta0 itself stays interior to the central panel [theta0 - delta, theta0 + delta]
    inner = inner[(inner > a) & (inner < b)]
    inner = inner[np.minimum(inner - a, b - inner) > 0.25 * delta]
    return np.unique(np.concatenate([[a, b], inner]))


class HarmonicEvaluator:
    """The harmonic function h on H with ``h = f`` on T+.

    Parameters
    ----------
    f : BoundaryFunction
    """

    def __init__(self, f):
        self.f = f

    @cached_property
    def _base(self):
        return _BaseRule(self.f)

    def f_sym(self, tau):
        tau = np.asarray(tau, dtype=complex)
        return self.f(tau) + self.f(s_star(tau))

    def h0(self, tau):
        """Poisson integral in lambda coordinates at a point above the disks."""
        tau = complex(mod2(tau))
        if abs(tau) < 1 - 1e-12 or tau.imag <= 0:
            raise DomainError("point lies inside a disk |tau - 2j| < 1")
        delta = math.log(abs(tau))
        if delta < SMALLEST_GAP:
            return complex(self.f(np.array([tau]))[0])
        zeta = complex(lambda_eval(tau))
        base = self._base
        theta0 = float(np.angle(tau))
        e = base.edges
        # panels whose width is not small against their distance to the
        # kernel singularity at theta0 + i delta are regraded
        gap = np.maximum(0.0, np.maximum(e[:-1] - theta0, theta0 - e[1:]))
        bad = (e[1:] - e[:-1]) > 0.5 * np.hypot(gap, delta)
        keep = ~bad[base.panel]
        w_inv, dens, fv, wt = base.inv_lam[keep], base.dens[keep], base.fval[keep], base.weight[keep]
        if bad.any():
            th, wq = [], []
            for i in np.flatnonzero(bad):
                t, w = panel_rule(_graded_edges(e[i], e[i + 1], theta0, delta))
                th.append(t)
                wq.append(w)
            th, wq = np.concatenate(th), np.concatenate(wq)
            eta = np.exp(1j * th)
            inv2, dens2 = _node_data(eta)
            w_inv = np.concatenate([w_inv, inv2])
            dens = np.concatenate([dens, dens2])
            fv = np.concatenate([fv, self.f(eta)])
            wt = np.concatenate([wt, wq])
        ker = (0.5 - zeta.real) * dens / np.abs(zeta * w_inv - 1) ** 2
        return complex(np.sum(wt * ker * fv) / np.pi)

    def __call__(self, tau):
        """Evaluate h anywhere in H (vectorized over a loop)."""
        scalar = np.ndim(tau) == 0
        pts = np.atleast_1d(np.asarray(tau, dtype=complex))
        out = np.array([self._one(t) for t in pts.ravel()]).reshape(pts.shape)
        return complex(out[0]) if scalar else out

    def _one(self, tau):
        if self.f.arc_only:
            raise DomainError("sampled data has no extension off T+; use expand_fast_positive")
        res = flycatcher_height(tau)
        orbit = res.orbit
        total = 0j
        for j in range(res.N):
            total += (-1) ** j * complex(self.f_sym(orbit[j]))
        return total + (-1) ** res.N * self.h0(orbit[-1])


def poisson_lambda_solve(f, tau):
    """``h_0(tau)`` for boundary data f at a point of height 0."""
    return HarmonicEvaluator(f).h0(tau)


def extend_harmonic(ev, tau):
    """h(tau) for any tau in H through the fly-catcher orbit."""
    return ev(tau)


def default_height(n):
    """Extraction height: 2, lowered so that ``exp(pi |n| s)`` stays at 1e4."""
    if n == 0:
        return 2.0
    return min(2.0, math.log(AMPLIFICATION) / (math.pi * abs(n)))


def _line_values(h, s, M):
    t = -1.0 + 2.0 * np.arange(M) / M
    return np.asarray(h(t + 1j * s), dtype=complex)


def extract_coeff(h, n, s=None, M=EXTRACT_NODES):
    """Harmonic Fourier coefficient ``c_n`` of a 2-periodic harmonic h.

    ``c_n = (e^{pi |n| s} / 2) int_{-1}^{1} e^{-i pi n t} h(t + i s) dt`` by
    the M-point trapezoid rule.

    Parameters
    ----------
    h : callable
        Vectorized harmonic function (e.g. a :class:`HarmonicEvaluator`).
    n : int
    s : float, optional
        Height of the line; defaults to :func:`default_height`.
    M : int
    """
    s = default_height(n) if s is None else s
    if s <= 0:
        raise ValueError("s must be positive")
    t = -1.0 + 2.0 * np.arange(M) / M
    vals = _line_values(h, s, M)
    return complex(math.exp(math.pi * abs(n) * s) * np.mean(np.exp(-1j * np.pi * n * t) * vals))


def harmonic_coefficients(h, N, M=EXTRACT_NODES):
    """``{n: c_n}`` for ``|n| <= N``; +-n share one line of samples."""
    out = {}
    t = -1.0 + 2.0 * np.arange(M) / M
    for k in range(N + 1):
        s = default_height(k)
        vals = _line_values(h, s, M)
        for n in {k, -k}:
            out[n] = complex(math.exp(math.pi * k * s) * np.mean(np.exp(-1j * np.pi * n * t) * vals))
    return out


def expand_boundary(f, N, M=EXTRACT_NODES, report=False):
    """Hyperbolic Fourier coefficients of the holomorphic f with boundary data on T+.

    Parameters
    ----------
    f : BoundaryFunction
    N : int
        Largest index computed.
    report : bool
        Also return ``{"residual": ..., "points": ...}``: the mismatch
        ``|f(eta') - series(eta')|`` at 20 points ``eta' = 1.5 e^{i theta}``.

    Returns
    -------
    HfsCoefficients, or (HfsCoefficients, dict) when ``report`` is set.
    """
    if f.arc_only:
        a = {n: expand_fast_positive(f, n) for n in range(1, N + 1)}
        c = HfsCoefficients(_a0_direct(f), a, {})
        return (c, {"residual": float("nan"), "note": "sampled data: fast path only, no b_n"}) if report else c
    c = harmonic_coefficients(HarmonicEvaluator(f), N, M)
    out = HfsCoefficients(
        c[0], {n: c[n] for n in range(1, N + 1)}, {n: c[-n] for n in range(1, N + 1)}
    )
    if not report:
        return out
    theta = np.linspace(0.3, np.pi - 0.3, 20)
    pts = 1.5 * np.exp(1j * theta)
    res = np.abs(f(pts) - hfs_eval(out, pts))
    return out, {"residual": float(np.max(res)), "points": pts}


def _a0_direct(f):
    """``a0 = h_0(i infinity) = (1/2pi) int f |lambda'|/|lambda|^2 d theta``."""
    p = semicircle_path()
    dens = get_table().a0_density
    return complex(np.sum(p.weight * dens * f(p.eta)) / (2 * np.pi))


def _indented_rule(n):
    """Path -1 -> -1 + i eps -> 1 + i eps -> 1 with ``eps = min(1/2, 2/n)``."""
    eps = min(0.5, 2.0 / n)
    ys, wy = panel_rule(np.linspace(0, eps, 5), 16)
    xs, wx = panel_rule(np.linspace(-1, 1, 33), 16)
    z = np.concatenate([-1 + 1j * ys, xs + 1j * eps, 1 + 1j * ys[::-1]])
    dz = np.concatenate([1j * wy, wx.astype(complex), -1j * wy[::-1]])
    return z, dz


def expand_fast_positive(f, n, cross_check=False, tol=1e-7):
    """``a_n(f)`` for n >= 1 from ``-(i/2 pi n) int_{T+} S_n(1/lambda) f' d eta``.

    The integral runs from -1 to +1 along T+. ``S_n(1/lambda)`` is split as
    ``E_n - V_n``; the entire part E_n is moved onto an indented path just
    above [-1, 1] (or kept on T+ for sampled data) and the bounded V_n part
    uses the tabulated values.

    Raises
    ------
    ConsistencyError
        With ``cross_check``, when the Poisson route disagrees beyond tol.
    """
    if n < 1:
        raise ValueError("n must be positive")
    tab = get_table(n)
    p = tab.path
    fp = f.derivative(p.eta)
    v_int = np.sum(p.fwd * tab.V[n - 1] * fp)
    if f.arc_only:
        e_int = np.sum(p.fwd * e_part(n, p.eta) * fp)
    else:
        z, dz = _indented_rule(n)
        e_int = np.sum(dz * e_part(n, z) * f.derivative(z))
    val = complex(-1j / (2 * np.pi * n) * (e_int - v_int))
    if cross_check:
        slow = extract_coeff(HarmonicEvaluator(f), n)
        if abs(slow - val) > tol:
            raise ConsistencyError("fast a_%d = %r, Poisson route %r" % (n, val, slow))
    return val
