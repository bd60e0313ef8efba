"""Principal-part polynomials S_n.

``S_n`` is the degree-n polynomial with ``S_n(0) = 0`` such that
``exp(-i pi n tau) - S_n(1/lambda(tau))`` stays bounded as ``Im tau -> inf``.
Coefficients are found by triangular elimination on the q-expansion of
``1/lambda``; the elimination runs in exact rational arithmetic.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .modular import build_tables, exact_series, inv_lambda_series, lambda_eval
from .qseries import InvalidSeries, NomeSeries


@dataclass(frozen=True)
class SnPolynomial:
    """``S_n(w) = sum_{k=1}^n coeffs[k-1] w**k``.

    Attributes
    ----------
    n : int
    coeffs : ndarray
        Float coefficients s_1..s_n.
    exact : tuple of Fraction
        The same coefficients as exact rationals.
    """

    n: int
    coeffs: np.ndarray
    exact: tuple

    def __call__(self, w):
        """Evaluate at w (vectorized, Horner)."""
        w = np.asarray(w, dtype=complex)
        out = np.zeros_like(w)
        for c in self.coeffs[::-1]:
            out = (out + c) * w
        return out if out.ndim else complex(out)

    def derivative(self, w):
        w = np.asarray(w, dtype=complex)
        out = np.zeros_like(w)
        k = np.arange(1, self.n + 1)
        for c in (k * self.coeffs)[::-1][:-1]:
            out = (out + c) * w
        out = out + self.coeffs[0]
        return out if out.ndim else complex(out)

    def eval_mp(self, w):
        """Horner evaluation with the exact coefficients in the current mpmath context."""
        import mpmath as mp

        out = mp.mpf(0)
        for c in self.exact[::-1]:
            out = (out + mp.mpf(c.numerator) / c.denominator) * w
        return out


@lru_cache(maxsize=None)
def _inv_lambda_powers(n, T):
    """Exact coefficient lists of P**k, k = 1..n, where 1/lambda = P(q)/q."""
    P = inv_lambda_series(T)[: n + 1]
    powers = [None, P]
    for _ in range(2, n + 1):
        prev = powers[-1]
        powers.append([sum(prev[i] * P[j - i] for i in range(j + 1)) for j in range(n + 1)])
    return powers


@lru_cache(maxsize=None)
def _sn_exact(n, T):
    pw = _inv_lambda_powers(n, T)
    s = [Fraction(0)] * (n + 1)
    for j in range(n, 0, -1):
        target = Fraction(1 if j == n else 0)
        acc = sum(s[k] * pw[k][k - j] for k in range(j + 1, n + 1))
        s[j] = (target - acc) / pw[j][0]
    return tuple(s[1:])


def sn_compute(n, tables=None):
    """Compute the polynomial S_n.

    Parameters
    ----------
    n : int
        Degree, ``n >= 1``.
    tables : ModularTables, optional
        Only their truncation order is used (must be at least ``n + 8``).

    Returns
    -------
    SnPolynomial
    """
    tables = build_tables() if tables is None else tables
    if n < 1:
        raise ValueError("n must be positive")
    if tables.truncation_order < n + 8:
        raise InvalidSeries("truncation order too small for S_%d" % n)
    ex = _sn_exact(int(n), tables.truncation_order)
    return SnPolynomial(int(n), np.array([float(c) for c in ex]), ex)


@lru_cache(maxsize=None)
def remainder_series(n, T):
    """Exact power series of ``q**(-n) - S_n(1/lambda)`` (nonnegative powers).

    Returns a list of Fractions, entry k being the coefficient of q**k.
    """
    P = inv_lambda_series(T + n)
    s = _sn_exact(n, T + n)
    # (1/lambda)^k = q^-k P^k; accumulate coefficients of q^j for j = -n..T
    out = [Fraction(0)] * (T + n + 1)  # index j + n
    out[0] += 1
    pk = [Fraction(1)] + [Fraction(0)] * (T + n)
    for k in range(1, n + 1):
        pk = [sum(pk[i] * P[j - i] for i in range(j + 1)) for j in range(T + n + 1)]
        for j in range(T + n + 1):
            idx = j - k + n
            if 0 <= idx <= T + n:
                out[idx] -= s[k - 1] * pk[j]
    neg = out[:n]
    if any(abs(v) > 0 for v in neg):
        raise InvalidSeries("principal part did not cancel")
    return out[n:]


def sn_remainder(n, tau, tables=None):
    """Bounded remainder ``R_n(tau) = exp(-i pi n tau) - S_n(1/lambda(tau))``.

    High in the half-plane (``Im tau >= 1`` after no reduction) the exact
    remainder q-series is summed, which avoids the cancellation between two
    terms of size ``exp(pi n Im tau)``; elsewhere the direct difference is
    returned.
    """
    tables = build_tables() if tables is None else tables
    tau = np.asarray(tau, dtype=complex)
    out = np.empty(tau.shape, dtype=complex)
    high = tau.imag >= 1.0
    if np.any(high):
        T = 48
        c = np.array([float(v) for v in remainder_series(int(n), T)])
        q = np.exp(1j * np.pi * tau[high])
        out[high] = np.polyval(c[::-1], q)
    if np.any(~high):
        t = tau[~high]
        S = sn_compute(n, tables)
        out[~high] = np.exp(-1j * np.pi * n * t) - S(1.0 / lambda_eval(t, tables))
    return complex(out) if out.ndim == 0 else out
