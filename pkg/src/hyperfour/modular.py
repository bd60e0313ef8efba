"""Jacobi theta functions and the modular lambda function.

Evaluation anywhere in the upper half-plane reduces tau with
``T: tau -> tau + 1`` and ``S: tau -> -1/tau`` until ``|Re tau| <= 1/2`` and
``|tau| >= 1``, evaluates the nome series there (``|q| <= exp(-pi*sqrt(3)/2)``)
and pulls the value back through the exact actions
``lambda(tau + 1) = lambda/(lambda - 1)`` and ``lambda(-1/tau) = 1 - lambda``.
"""

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .qseries import (DEFAULT_ORDER, DomainError, NomeSeries, from_integers,
                      ns_eval, ns_exp, ns_inv, ns_log, ns_mul, ns_pow)


class ReductionOverflow(RuntimeError):
    """Raised when the modular reduction needs too many steps."""


class ConvergenceError(RuntimeError):
    """Raised when an iterative solver does not converge."""


MAX_STEPS = 10**4


def _int_mul(a, b, T):
    out = [0] * (T + 1)
    for i, x in enumerate(a[: T + 1]):
        if x:
            for j, y in enumerate(b[: T + 1 - i]):
                out[i + j] += x * y
    return out


def _int_inv(a, T):
    """Inverse of an integer power series with constant term 1."""
    assert a[0] == 1
    out = [0] * (T + 1)
    out[0] = 1
    for k in range(1, T + 1):
        out[k] = -sum(a[j] * out[k - j] for j in range(1, min(k, len(a) - 1) + 1))
    return out


def _int_pow(a, p, T):
    out = [1] + [0] * T
    for _ in range(p):
        out = _int_mul(out, a, T)
    return out


@lru_cache(maxsize=None)
def exact_series(T):
    """Exact integer q-series used by the tables.

    Returns
    -------
    dict
        ``theta00``: coefficients of theta00; ``t``: sum of q**(k(k+1)) so that
        ``theta10 = 2 q**(1/4) t``; ``lam``: lambda-hat(1..T+1) as a list whose
        entry k is the coefficient of q**(k+1); ``inv_lam``: coefficients of
        ``16 q / lambda`` (constant term 1).
    """
    th = [0] * (T + 2)
    k = 0
    while k * k <= T + 1:
        th[k * k] += 1 if k == 0 else 2
        k += 1
    t = [0] * (T + 2)
    k = 0
    while k * (k + 1) <= T + 1:
        t[k * (k + 1)] += 1
        k += 1
    th4 = _int_pow(th, 4, T + 1)
    t4 = _int_pow(t, 4, T + 1)
    # lambda = 16 q t^4 / th^4
    lam = [16 * c for c in _int_mul(t4, _int_inv(th4, T + 1), T)]
    inv_lam = _int_mul(th4, _int_inv(t4, T + 1), T + 1)
    return {"theta00": th[: T + 1], "t": t[: T + 1], "lam": lam, "inv_lam": inv_lam}


@dataclass(frozen=True)
class ModularTables:
    """Series tables for theta00, theta10, lambda and their logarithms.

    Attributes
    ----------
    theta00 : NomeSeries
    theta10_tail : NomeSeries
        ``theta10 / (2 q**(1/4))``; the full theta10 is ``theta10``.
    theta10 : NomeSeries
        Carries the monomial ``q**(1/4)`` in ``lead_exp``.
    lam : NomeSeries
        lambda with ``min_order = 1``.
    lambda_prime_q : NomeSeries
        d lambda / d q.
    L00 : NomeSeries
        log theta00 (constant term 0).
    L10_tail : NomeSeries
        log of ``theta10_tail`` (constant term 0).
    truncation_order : int
    """

    theta00: NomeSeries
    theta10_tail: NomeSeries
    theta10: NomeSeries
    lam: NomeSeries
    lambda_prime_q: NomeSeries
    L00: NomeSeries
    L10_tail: NomeSeries
    truncation_order: int

    @property
    def lambda_hat(self):
        """Real coefficients lambda-hat(1..T) as a float array (index 0 is n=1)."""
        return self.lam.coeffs.real


def default_order():
    """Truncation order, overridable by ``HYPERFOUR_TABLE_ORDER``."""
    env = os.environ.get("HYPERFOUR_TABLE_ORDER")
    return int(env) if env else DEFAULT_ORDER


@lru_cache(maxsize=8)
def build_tables(T=None):
    """Build the modular series tables to truncation order ``T``.

    Integer-valued series (theta powers, lambda) are formed in exact integer
    arithmetic and then stored as double precision series.
    """
    T = default_order() if T is None else int(T)
    if T < 8:
        raise ValueError("truncation order must be >= 8")
    ex = exact_series(T)
    th00 = from_integers(ex["theta00"])
    t = from_integers(ex["t"])
    lam = from_integers(ex["lam"][:T], min_order=1)
    dq = np.arange(1, T + 1) * lam.coeffs
    lam_prime = NomeSeries(dq, 0)
    return ModularTables(
        theta00=th00,
        theta10_tail=t,
        theta10=NomeSeries(2 * t.coeffs, 0, Fraction(1, 4)),
        lam=lam,
        lambda_prime_q=lam_prime.truncate(T - 1),
        L00=ns_log(th00),
        L10_tail=ns_log(t),
        truncation_order=T,
    )


def _reduce(tau):
    """Reduce an array of points to the standard fundamental domain.

    Returns the reduced points and the per-step records ``(shift, flip,
    pre_flip_point)`` needed to pull values back.
    """
    tau = np.array(tau, dtype=complex)
    if np.any(tau.imag <= 0):
        raise DomainError("Im tau must be positive")
    steps = []
    active = np.ones(tau.shape, dtype=bool)
    for _ in range(MAX_STEPS):
        r = np.where(active, np.round(tau.real), 0.0)
        tau = tau - r
        flip = active & (np.abs(tau) < 1.0 - 1e-14)
        pre = tau.copy()
        tau = np.where(flip, -1.0 / np.where(flip, tau, 1.0), tau)
        steps.append((r, flip, pre))
        active = flip
        if not active.any():
            return tau, steps
    raise ReductionOverflow("modular reduction exceeded the step cap")


def _base(tau, tables):
    q = np.exp(1j * np.pi * tau)
    lam, _ = ns_eval(tables.lam, q)
    dlam, _ = ns_eval(tables.lambda_prime_q, q)
    return lam, 1j * np.pi * q * dlam


def lambda_eval(tau, tables=None, derivative=False):
    """Modular lambda function on the upper half-plane.

    Parameters
    ----------
    tau : complex or array_like
        Points with ``Im tau > 0``.
    tables : ModularTables, optional
    derivative : bool, optional
        Also return d lambda / d tau.

    Returns
    -------
    lam : complex or ndarray
    dlam : complex or ndarray
        Only when ``derivative`` is true.
    """
    tables = build_tables() if tables is None else tables
    scalar = np.ndim(tau) == 0
    t0, steps = _reduce(np.atleast_1d(tau))
    v, d = _base(t0, tables)
    # carry w = 1 - lambda alongside lambda so neither loses digits
    w = 1.0 - v
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for r, flip, pre in reversed(steps):
            d = np.where(flip, -d / np.where(flip, pre, 1.0) ** 2, d)
            v, w = np.where(flip, w, v), np.where(flip, v, w)
            odd = (np.abs(r) % 2) == 1
            ws = np.where(odd, w, 1.0)
            d = np.where(odd, -d / ws**2, d)
            v, w = np.where(odd, -v / ws, v), np.where(odd, 1.0 / ws, w)
    if scalar:
        v, d = complex(v[0]), complex(d[0])
    return (v, d) if derivative else v


def lambda_prime_eval(tau, tables=None):
    """Derivative d lambda / d tau (chain rule through the reduction)."""
    return lambda_eval(tau, tables, derivative=True)[1]


def theta00_eval(tau, tables=None):
    """theta00(tau) = sum_n exp(i pi n^2 tau) for ``Im tau >= 0.1``.

    Small imaginary parts are handled with ``theta00(-1/tau) =
    (tau/i)**(1/2) theta00(tau)`` when that lands higher in H.
    """
    tau = np.asarray(tau, dtype=complex)
    if np.any(tau.imag <= 0):
        raise DomainError("Im tau must be positive")
    low = tau.imag < 0.1
    t = np.where(low, -1.0 / np.where(low, tau, 1j), tau)
    if np.any(t.imag < 0.1):
        raise DomainError("theta00 needs Im tau >= 0.1 or Im(-1/tau) >= 0.1")
    n = np.arange(1, 200)
    val = 1 + 2 * np.sum(np.exp(1j * np.pi * np.multiply.outer(t, n**2)), axis=-1)
    # theta00(tau) = (tau/i)^(-1/2) theta00(-1/tau)
    val = np.where(low, (tau / 1j) ** -0.5 * val, val)
    return complex(val) if val.ndim == 0 else val


def _to_d2theta(tau):
    """Move a point into the closure of the lambda fundamental domain.

    Uses the Gamma(2) generators ``tau + 2``, ``tau/(2 tau + 1)`` and
    ``tau/(1 - 2 tau)``, all of which leave lambda invariant.
    """
    for _ in range(10000):
        tau = tau - 2 * np.floor((tau.real + 1) / 2)
        if abs(tau + 0.5) < 0.5:
            tau = tau / (2 * tau + 1)
        elif abs(tau - 0.5) < 0.5:
            tau = tau / (1 - 2 * tau)
        else:
            return tau
    raise ReductionOverflow("could not reach the fundamental domain")


def lambda_inverse(zeta, tables=None, tol=1e-12, max_iter=100):
    """Inverse of lambda on the doubly slit plane.

    Newton iteration on ``lambda(tau) - zeta`` from a region-dependent seed.

    Parameters
    ----------
    zeta : complex
        Not on ``(-inf, 0]`` or ``[1, inf)``.

    Returns
    -------
    complex
        tau in the closure of D_2Theta with ``lambda(tau) = zeta``.
    """
    tables = build_tables() if tables is None else tables
    zeta = complex(zeta)
    if zeta.imag == 0 and (zeta.real <= 0 or zeta.real >= 1):
        raise DomainError("zeta lies on a slit of the lambda image")
    if abs(zeta) <= 0.25:
        tau = np.log(zeta / 16) / (1j * np.pi)
    elif abs(zeta - 0.5) <= 0.25:
        tau = 1j
    elif abs(zeta) >= 4:
        sign = -1 if zeta.imag < 0 else 1
        tau = sign + 1j * np.pi / np.log(8 - 16 * zeta)
    else:
        xs, ys = np.meshgrid(np.linspace(-0.99, 0.99, 41), np.geomspace(0.05, 3, 41))
        grid = (xs + 1j * ys).ravel()
        grid = grid[(np.abs(grid - 0.5) > 0.5) & (np.abs(grid + 0.5) > 0.5)]
        tau = grid[np.argmin(np.abs(lambda_eval(grid, tables) - zeta))]
    if tau.imag <= 0:
        tau = complex(tau.real, 1e-3)
    scale = max(1.0, abs(zeta))
    for _ in range(max_iter):
        lam, dlam = lambda_eval(tau, tables, derivative=True)
        res = lam - zeta
        if abs(res) < tol * scale:
            return complex(_to_d2theta(tau))
        step = res / dlam
        h = 1.0
        while (tau - h * step).imag <= 0:
            h *= 0.5
        tau = tau - h * step
    raise ConvergenceError("Newton iteration for lambda^-1 did not converge")


def theta_pow_series(beta, tables=None):
    """q-series of ``theta00**(2 beta) = exp(2 beta L00)``."""
    tables = build_tables() if tables is None else tables
    return ns_exp(tables.L00 * (2.0 * beta))


def lambda_pow_series(omega, tables=None):
    """Series for the two factors of lambda-powers.

    Returns
    -------
    first : NomeSeries
        ``exp(-i pi omega tau) lambda(tau)**omega``, constant term ``16**omega``.
    second : NomeSeries
        ``(1 - lambda(tau))**omega``, constant term 1.
    """
    tables = build_tables() if tables is None else tables
    lam_over_q = NomeSeries(tables.lam.coeffs, 0)
    first = ns_pow(lam_over_q, omega)
    one_minus = NomeSeries(np.concatenate([[1.0], -tables.lam.coeffs[:-1]]), 0)
    return first, ns_pow(one_minus, omega)


def lambda_hat(n, tables=None):
    """Fourier coefficient lambda-hat(n) from the exact integer series."""
    tables = build_tables() if tables is None else tables
    return exact_series(tables.truncation_order)["lam"][n - 1]


def inv_lambda_series(T):
    """Exact Fractions of the coefficients of 1/lambda.

    ``1/lambda = sum_k out[k] q**(k - 1)``.
    """
    c = exact_series(T)["inv_lam"]
    return [Fraction(v, 16) for v in c]


def lambda_mp(tau, dps=30):
    """High-precision lambda(tau) with mpmath, via the same reduction."""
    import mpmath as mp

    with mp.workdps(dps):
        tau = mp.mpc(tau)
        if tau.imag <= 0:
            raise DomainError("Im tau must be positive")
        ops = []
        for _ in range(MAX_STEPS):
            r = int(mp.nint(tau.real))
            tau -= r
            flip = abs(tau) < 1
            if flip:
                tau = -1 / tau
            ops.append((r, flip))
            if not flip:
                break
        q = mp.exp(1j * mp.pi * tau)
        t3 = mp.jtheta(3, 0, q) ** 4
        v = mp.jtheta(2, 0, q) ** 4 / t3
        w = mp.jtheta(4, 0, q) ** 4 / t3
        for r, flip in reversed(ops):
            if flip:
                v, w = w, v
            if r % 2:
                v, w = -v / w, 1 / w
        return v
