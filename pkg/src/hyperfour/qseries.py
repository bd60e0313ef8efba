"""Truncated power series in the nome q = exp(i*pi*tau).

A :class:`NomeSeries` stores ``q**min_order * (c_0 + c_1 q + ... + c_T q**T)``
known modulo ``q**(min_order + T + 1)``.  An optional fractional monomial
``q**lead_exp`` (with ``lead_exp`` a :class:`fractions.Fraction`) is carried
separately so that series such as ``2 q**(1/4) (1 + q**2 + ...)`` keep
integer-indexed coefficients.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

DEFAULT_ORDER = 64


class InvalidSeries(ValueError):
    """Raised when a series operation's precondition is violated."""


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of an operation."""


@dataclass(frozen=True)
class NomeSeries:
    """Truncated Laurent series in q.

    Parameters
    ----------
    coeffs : array_like of complex
        ``coeffs[k]`` is the coefficient of ``q**(min_order + k)``.
    min_order : int, optional
        Lowest power of q represented.
    lead_exp : Fraction, optional
        Extra monomial factor ``q**lead_exp`` (used for theta10's q**(1/4)).
    """

    coeffs: np.ndarray
    min_order: int = 0
    lead_exp: Fraction = field(default=Fraction(0))

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise InvalidSeries("a series needs at least one coefficient")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "min_order", int(self.min_order))
        object.__setattr__(self, "lead_exp", Fraction(self.lead_exp))

    @property
    def truncation_order(self):
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def __mul__(self, other):
        if isinstance(other, NomeSeries):
            return ns_mul(self, other)
        return NomeSeries(self.coeffs * other, self.min_order, self.lead_exp)

    __rmul__ = __mul__

    def __add__(self, other):
        return ns_add(self, other)

    def __sub__(self, other):
        return ns_add(self, other * -1.0)

    def __neg__(self):
        return self * -1.0

    def coefficient(self, power):
        """Coefficient of ``q**power`` (zero outside the stored range)."""
        k = power - self.min_order
        if 0 <= k < self.coeffs.size:
            return self.coeffs[k]
        if k < 0:
            return 0j
        raise InvalidSeries("q^%d lies beyond the truncation order" % power)

    def truncate(self, T):
        """Return the series truncated to relative order ``T``."""
        T = min(int(T), self.truncation_order)
        return NomeSeries(self.coeffs[: T + 1], self.min_order, self.lead_exp)


def from_integers(values, min_order=0, lead_exp=0):
    """Build a series from exact integer (or Fraction) coefficients."""
    return NomeSeries(np.array([complex(v) for v in values]), min_order, lead_exp)


def ns_add(a, b):
    """Sum of two series with the same fractional monomial."""
    if a.lead_exp != b.lead_exp:
        raise InvalidSeries("cannot add series with different fractional monomials")
    lo = min(a.min_order, b.min_order)
    hi = min(a.min_order + a.truncation_order, b.min_order + b.truncation_order)
    out = np.zeros(hi - lo + 1, dtype=complex)
    for s in (a, b):
        k = s.min_order - lo
        m = min(s.coeffs.size, out.size - k)
        if m > 0:
            out[k : k + m] += s.coeffs[:m]
    return NomeSeries(out, lo, a.lead_exp)


def ns_mul(a, b):
    """Cauchy product of two series.

    The relative truncation order of the product is the smaller of the two
    operands' orders, so no unproven coefficient is ever reported.
    """
    T = min(a.truncation_order, b.truncation_order)
    c = np.convolve(a.coeffs[: T + 1], b.coeffs[: T + 1])[: T + 1]
    return NomeSeries(c, a.min_order + b.min_order, a.lead_exp + b.lead_exp)


def ns_inv(a):
    """Multiplicative inverse ``1/a``.

    Raises
    ------
    InvalidSeries
        If the leading coefficient is zero.
    """
    c = a.coeffs
    if c[0] == 0:
        raise InvalidSeries("leading coefficient is zero")
    T = a.truncation_order
    out = np.zeros(T + 1, dtype=complex)
    out[0] = 1.0 / c[0]
    for k in range(1, T + 1):
        out[k] = -np.dot(c[1 : k + 1], out[k - 1 :: -1][:k]) / c[0]
    return NomeSeries(out, -a.min_order, -a.lead_exp)


def _absolute(a):
    """Coefficients of an integer-order series as a plain power series."""
    if a.lead_exp != 0 or a.min_order < 0:
        raise InvalidSeries("series must be a power series in q")
    T = a.min_order + a.truncation_order
    out = np.zeros(T + 1, dtype=complex)
    out[a.min_order :] = a.coeffs
    return out


def ns_exp(a):
    """Formal exponential of a power series.

    A constant term ``c`` is split off as the scalar factor ``exp(c)``.
    """
    f = _absolute(a)
    T = f.size - 1
    g = np.zeros(T + 1, dtype=complex)
    g[0] = 1.0
    k = np.arange(T + 1)
    for n in range(1, T + 1):
        g[n] = np.dot(k[1 : n + 1] * f[1 : n + 1], g[n - 1 :: -1][:n]) / n
    return NomeSeries(g * np.exp(f[0]), 0)


def ns_log(a):
    """Formal logarithm of a series with nonzero constant term.

    The constant ``c`` contributes the principal value ``log(c)``; the series
    must not have a pole or zero at q = 0.
    """
    if a.min_order != 0 or a.lead_exp != 0:
        raise InvalidSeries("log needs a series with min_order 0 (factor the monomial first)")
    c = a.coeffs
    if c[0] == 0:
        raise InvalidSeries("leading coefficient is zero")
    u = c / c[0]
    T = u.size - 1
    g = np.zeros(T + 1, dtype=complex)
    for n in range(1, T + 1):
        s = np.dot(np.arange(1, n) * g[1:n], u[n - 1 : 0 : -1]) if n > 1 else 0.0
        g[n] = u[n] - s / n
    g[0] = np.log(c[0])
    return NomeSeries(g, 0)


def ns_pow(a, alpha):
    """Complex power ``a**alpha``.

    The series is written ``c q**m (1 + u)``; ``(1 + u)**alpha`` is expanded
    by the binomial recurrence, ``c**alpha`` uses the principal branch and
    ``q**(m*alpha)`` is folded into ``min_order`` when integral, otherwise it
    is kept in ``lead_exp`` (``alpha`` must then be rational-valued).
    """
    c = a.coeffs
    if c[0] == 0:
        raise InvalidSeries("leading coefficient is zero")
    u = c / c[0]
    T = u.size - 1
    g = np.zeros(T + 1, dtype=complex)
    g[0] = 1.0
    for k in range(1, T + 1):
        j = np.arange(1, k + 1)
        g[k] = np.dot((alpha + 1) * j - k, u[1 : k + 1] * g[k - 1 :: -1][:k]) / k
    scale = np.exp(alpha * np.log(c[0])) if alpha != 0 else 1.0
    total = (a.min_order + a.lead_exp) * _as_fraction(alpha, a)
    m = int(np.floor(total))
    return NomeSeries(g * scale, m, total - m)


def _as_fraction(alpha, a):
    if a.min_order == 0 and a.lead_exp == 0:
        return Fraction(0)
    if complex(alpha).imag != 0:
        raise InvalidSeries("complex power of a series with a monomial factor")
    f = Fraction(complex(alpha).real).limit_denominator(10**6)
    if abs(float(f) - complex(alpha).real) > 1e-12:
        raise InvalidSeries("monomial power needs a rational exponent")
    return f


def ns_eval(a, q, tau=None):
    """Evaluate a series at q (vectorized).

    Parameters
    ----------
    a : NomeSeries
    q : complex or ndarray
        Nome values with ``|q| < 1``.
    tau : complex or ndarray, optional
        When given, the fractional monomial is evaluated as
        ``exp(i*pi*lead_exp*tau)`` instead of the principal power of q.

    Returns
    -------
    value : complex or ndarray
    tail : float or ndarray
        Geometric majorant of the omitted terms.
    """
    q = np.asarray(q, dtype=complex)
    aq = np.abs(q)
    if np.any(aq >= 1):
        raise DomainError("|q| must be < 1")
    val = np.polyval(a.coeffs[::-1], q)
    T = a.truncation_order
    last = np.max(np.abs(a.coeffs[max(0, T - 2) :]))
    tail = last * aq ** (T + 1) / (1 - aq)
    mono = q ** a.min_order if a.min_order else 1.0
    if a.lead_exp:
        if tau is None:
            mono = mono * q ** float(a.lead_exp)
        else:
            mono = mono * np.exp(1j * np.pi * float(a.lead_exp) * np.asarray(tau))
    val = val * mono
    tail = tail * np.abs(mono)
    if val.ndim == 0:
        return complex(val), float(tail)
    return val, tail
