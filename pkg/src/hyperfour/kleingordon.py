"""Klein-Gordon solutions ``U[phi](x, y) = int exp(i x t + i y / t) phi(t) dt``.

``U[phi]`` solves ``u_xy + u = 0``.  With phi a finite combination of the
biorthogonal functions, the values on the lattice-cross ``{(pi m, 0)} u
{(0, pi m)}`` reduce to the semicircle pairings:

* ``U[A_n](pi m, 0) = <A_n, e_m>``,
* ``U[A_n](0, pi m) = <B_n, e_{-m}>`` (substitute ``t = -1/s``),
* ``U[B_{-n}](x, y) = U[A_n](y, x)``.

The module also holds the transfer operators on [-1, 1], periodization and
the Goursat identity on the y-axis.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import iv, jv, zeta

from .biortho import _tail_integral, a0_eval, an_eval, bn_eval, get_table, panel_rule, DEFAULT_NMAX
from .qseries import DomainError

NODE_BUDGET = 2_000_000


class ResolutionError(RuntimeError):
    """Raised when the oscillation-resolving rule exceeds its node budget."""


class InvalidInput(ValueError):
    """Raised for lattice data outside the supported index range."""


@dataclass(frozen=True)
class WaveFunction:
    """Source density phi of a Klein-Gordon solution.

    Attributes
    ----------
    alpha, beta : dict
        For biorthogonal combinations,
        ``phi = alpha_0 A_0 + sum_{n != 0} (alpha_n A_n + beta_n B_{-n})``.
    func : callable or None
        A plain density; used instead of alpha/beta when given.
    """

    alpha: dict = field(default_factory=dict)
    beta: dict = field(default_factory=dict)
    func: object = None

    @property
    def is_biortho(self):
        return self.func is None

    def phi(self, t):
        """phi at real t (vectorized)."""
        t = np.asarray(t, dtype=float)
        if self.func is not None:
            return np.asarray(self.func(t), dtype=complex)
        out = np.zeros(t.shape, dtype=complex)
        for n, a in self.alpha.items():
            out = out + a * (a0_eval(t) if n == 0 else an_eval(n, t))
        for n, b in self.beta.items():
            out = out + b * (a0_eval(t) if n == 0 else bn_eval(-n, t))
        return out

    def phi_inverted(self, u):
        """``phi(1/u) / u^2`` for ``|u| >= 1``, using the exact symmetry for A_n, B_n."""
        u = np.asarray(u, dtype=float)
        if self.func is not None:
            return np.asarray(self.func(1.0 / u), dtype=complex) / u**2
        out = np.zeros(u.shape, dtype=complex)
        for n, a in self.alpha.items():
            # A_n(1/u) / u^2 = B_n(-u), and A_0 is invariant
            out = out + a * (a0_eval(u) if n == 0 else bn_eval(n, -u))
        for n, b in self.beta.items():
            out = out + b * (a0_eval(u) if n == 0 else an_eval(-n, -u))
        return out

    def lattice_value(self, m, axis="x"):
        """``u(pi m, 0)`` (axis "x") or ``u(0, pi m)`` (axis "y") by the fast pairings."""
        if not self.is_biortho:
            raise InvalidInput("lattice fast path needs a biorthogonal combination")
        total = 0j
        for n, a in self.alpha.items():
            total += a * _u_a(n, m, axis)
        other = "y" if axis == "x" else "x"
        for n, b in self.beta.items():
            total += b * _u_a(n, m, other)
        return total


def _u_a(n, m, axis):
    """``U[A_n](pi m, 0)`` or ``U[A_n](0, pi m)`` from the semicircle identities."""
    tab = get_table(n)
    if n == 0:
        return tab.pairing_a0(m if axis == "x" else -m)
    if axis == "x":
        return complex(tab.pairing_a(n, m))
    return complex(tab.pairing_b(n, -m))


def _check_range(d):
    for n in d:
        if abs(int(n)) > DEFAULT_NMAX:
            raise InvalidInput("index %d outside the table range |n| <= %d" % (n, DEFAULT_NMAX))


def kg_interpolate(alpha, beta):
    """Solution with ``u(pi m, 0) = alpha_m`` and ``u(0, pi n) = beta_n``.

    ``beta_0`` must be absent or equal to ``alpha_0`` (both are ``u(0, 0)``).
    """
    alpha = {int(k): complex(v) for k, v in alpha.items() if v != 0}
    beta = {int(k): complex(v) for k, v in beta.items() if v != 0}
    _check_range(alpha)
    _check_range(beta)
    if 0 in beta:
        if abs(beta[0] - alpha.get(0, 0)) > 1e-15:
            raise InvalidInput("alpha_0 and beta_0 both prescribe u(0, 0)")
        del beta[0]
    return WaveFunction(alpha, beta)


def kg_interp_solution(n, axis="x_axis"):
    """``u_(n,0) = U[A_n]`` (axis "x_axis") or ``u_(0,n) = U[B_{-n}]`` ("y_axis")."""
    if axis in ("x", "x_axis") or n == 0:
        return kg_interpolate({n: 1.0}, {})
    if axis in ("y", "y_axis"):
        return kg_interpolate({}, {n: 1.0})
    raise ValueError("axis must be x_axis or y_axis")


def load_lattice(text):
    """Parse ``{"alpha": {"0": v, ...}, "beta": {...}}``; v is a number or [re, im]."""
    d = json.loads(text)
    z = lambda v: complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v)
    return kg_interpolate(
        {int(k): z(v) for k, v in d.get("alpha", {}).items()},
        {int(k): z(v) for k, v in d.get("beta", {}).items()},
    )


def _edges(a, b, lin, inv, floor=0.0):
    """Panels on [a, b] (0 < a < b) for the phase ``lin t + inv / t``.

    Each 16-node panel spans at most two local periods (8 nodes per period)
    and at most ``max(1/2, t/2)``.
    """
    edges = [a]
    t = a
    while t < b:
        freq = abs(lin) + abs(inv) / t**2 + floor
        w = min(4 * math.pi / freq if freq > 0 else np.inf, max(0.5, 0.5 * t))
        t = min(b, t + w)
        edges.append(t)
        if len(edges) * 16 > NODE_BUDGET:
            raise ResolutionError("oscillation needs more than %d nodes" % NODE_BUDGET)
    return np.asarray(edges)


@dataclass(frozen=True)
class KgRule:
    """Nodes for ``|t| in [1, X]`` (outer) and ``|u| in [1, X]`` with u = 1/t (inner)."""

    t: np.ndarray
    wt: np.ndarray
    u: np.ndarray
    wu: np.ndarray
    X: float


def kg_rule(x, y, X=200.0, floor=8.0):
    """Quadrature rule resolving ``exp(i x t + i y/t)``; ``floor`` covers phi's own oscillation."""
    t, wt = panel_rule(_edges(1.0, X, x, y, floor))
    u, wu = panel_rule(_edges(1.0, X, y, x, floor))
    return KgRule(np.concatenate([-t[::-1], t]), np.concatenate([wt[::-1], wt]),
                  np.concatenate([-u[::-1], u]), np.concatenate([wu[::-1], wu]), float(X))


def _tail(a, X, c_plus, c_minus):
    """``int_{|s| > X} c(s) exp(i a s) / s^2 ds`` with constants c_+- on each side."""
    if a == 0:
        return (c_plus + c_minus) / X
    return c_plus * _tail_integral(a, X) + c_minus * _tail_integral(-a, X)


def kg_eval(w, x, y, X=200.0, rule=None, with_bound=False):
    """``U[phi](x, y)`` by panel quadrature.

    ``|t| >= 1`` is integrated in t and ``|t| < 1`` in ``u = 1/t``, each
    truncated at X; the ``c/s^2`` tails beyond X are added in closed form.

    Returns
    -------
    complex, or (complex, float) with ``with_bound``: the tail bound
    ``sup_{|t| = X} |phi (1 + t^2)| 2/X`` for both truncations.
    """
    if X < 100:
        raise ValueError("X must be at least 100")
    r = kg_rule(x, y, X) if rule is None else rule
    fo = w.phi(r.t)
    fi = w.phi_inverted(r.u)
    outer = np.sum(r.wt * fo * np.exp(1j * (x * r.t + y / r.t)))
    inner = np.sum(r.wu * fi * np.exp(1j * (y * r.u + x / r.u)))
    end = np.array([-r.X, r.X])
    co = w.phi(end) * end**2
    ci = w.phi_inverted(end) * end**2
    total = outer + inner + _tail(x, r.X, co[1], co[0]) + _tail(y, r.X, ci[1], ci[0])
    if not with_bound:
        return complex(total)
    bound = float((np.max(np.abs(co)) + np.max(np.abs(ci))) * (1 + 1 / r.X**2) * 2 / r.X)
    return complex(total), bound


def kg_pde_residual(w, x, y, h=1e-3, X=200.0):
    """Finite-difference ``u_xy + u`` at (x, y) with one shared quadrature rule."""
    r = kg_rule(abs(x) + h, abs(y) + h, X)
    u = lambda a, b: kg_eval(w, a, b, rule=r)
    uxy = (u(x + h, y + h) - u(x + h, y - h) - u(x - h, y + h) + u(x - h, y - h)) / (4 * h * h)
    return abs(uxy + u(x, y))


def J1(x, y):
    """Goursat kernel ``sum_k (-1)^k x^{k+1} y^k / (k! (k+1)!)``.

    Summed with ``math.fsum`` for ``|xy| <= 16``; beyond, ``x J_1(2 sqrt(xy))/sqrt(xy)``
    (or the I_1 form when ``xy < 0``).
    """
    x, y = float(x), float(y)
    z = x * y
    if abs(z) > 1e3:
        raise DomainError("|xy| must be <= 1e3")
    if abs(z) <= 16:
        terms, term, k = [], x, 0
        while True:
            terms.append(term)
            k += 1
            term = term * (-z) / (k * (k + 1))
            if abs(term) < 1e-18 * max(1.0, abs(x)) and k > 2:
                break
        return math.fsum(terms)
    r = math.sqrt(abs(z))
    if z > 0:
        return x * float(jv(1, 2 * r)) / r
    return x * float(iv(1, 2 * r)) / r


def goursat_check(w, y, t_max=20.0, X=200.0):
    """Compare ``u(0, y)`` with ``u(0, 0) - int_0^inf J1(-y, t) u(t, 0) dt``.

    The t-integral is truncated at ``t_max`` (suited to densities whose
    Fourier transform decays there) with 16-node panels of unit width.

    Returns
    -------
    lhs, rhs, residual
    """
    if y > 0:
        raise DomainError("y must be <= 0")
    lhs = kg_eval(w, 0.0, y, X)
    u00 = kg_eval(w, 0.0, 0.0, X)
    if y == 0:
        return lhs, u00, abs(lhs - u00)
    t, wt = panel_rule(np.linspace(0.0, t_max, int(math.ceil(t_max)) + 1))
    vals = np.array([kg_eval(w, tt, 0.0, X) for tt in t])
    ker = np.array([J1(-y, tt) for tt in t])
    rhs = u00 - np.sum(wt * ker * vals)
    return lhs, complex(rhs), abs(lhs - rhs)


@dataclass(frozen=True)
class GridFunction:
    """Samples of f on a uniform grid over [-1, 1] with cubic interpolation."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.size < 64:
            raise ValueError("a grid function needs at least 64 nodes")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "_spline", CubicSpline(self.grid, v))

    @property
    def grid(self):
        return np.linspace(-1.0, 1.0, np.asarray(self.values).size)

    @classmethod
    def from_callable(cls, f, n=257):
        return cls(np.asarray(f(np.linspace(-1.0, 1.0, n)), dtype=complex))

    def __call__(self, t):
        return self._spline(t)

    def abs(self):
        return GridFunction(np.abs(self.values))

    @property
    def sup(self):
        return float(np.max(np.abs(self.values)))


def transfer_apply(kind, f, t, J=1000):
    """Apply a transfer operator at t in (-1, 1).

    Parameters
    ----------
    kind : tuple
        ``("omega", w)``: ``sum_{j != 0} e^{2 pi i j w} (2j - t)^-2 f(1/(2j - t))``;
        ``("k", k)``: weight ``(2j - t)^{-2-k}``; ``("abs_k", k)``: weight
        ``|2j - t|^{-2-k}``.
    f : GridFunction
    t : float
    J : int
        Terms ``1 <= |j| <= J`` are summed; for the phase-free kinds the rest
        is added with f frozen at ``f(0)`` (Hurwitz zeta).

    Returns
    -------
    value : complex
    tail_bound : float
        ``sup|f| sum_{|j| > J} (2|j| - 1)^{-2-k}``.
    """
    if abs(t) >= 1:
        raise DomainError("t must lie in (-1, 1)")
    if J < 100:
        raise ValueError("J must be at least 100")
    name, par = kind
    j = np.concatenate([np.arange(-J, 0), np.arange(1, J + 1)]).astype(float)
    d = 2 * j - t
    vals = f(1.0 / d)
    k = 0.0 if name == "omega" else float(par)
    if name == "omega":
        weight = np.exp(2j * np.pi * j * par) * d**-2.0
    elif name == "k":
        weight = d.astype(complex) ** (-2.0 - k)
    elif name == "abs_k":
        weight = np.abs(d) ** (-2.0 - k)
    else:
        raise ValueError("kind must be omega, k or abs_k")
    value = complex(np.sum(weight * vals))
    s = 2.0 + k
    plus = 2.0**-s * zeta(s, J + 1 - t / 2)
    minus = 2.0**-s * zeta(s, J + 1 + t / 2)
    if name == "abs_k" or (name == "omega" and float(par).is_integer()) or (name == "k" and k == 0):
        value += complex(f(0.0)) * (plus + minus)
    elif name == "k" and float(k).is_integer():
        value += complex(f(0.0)) * (plus + (-1) ** int(k) * minus)
    bound = f.sup * 2 * 2.0**-s * zeta(s, J + 0.5)
    return value, float(bound)


def periodize(psi, t, J=10**4, C=1.0):
    """``sum_{|j| <= J} psi(t + 2j)`` with the bound ``C / (2J - 1 - |t|)``
    for an envelope ``|psi(s)| <= C / s^2``."""
    pts = t + 2.0 * np.arange(-J, J + 1)
    val = np.sum(np.asarray(psi(pts)))
    return complex(val), C / (2 * J - 1 - abs(t))
