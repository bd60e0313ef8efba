"""Hyperbolic Fourier series as coefficient data.

A series ``a0 + sum_n (a_n e^{i pi n tau} + b_n e^{-i pi n / tau})`` is held
in :class:`HfsCoefficients` with finitely many nonzero coefficients.  For
two-sided (harmonic) series, indices ``n < 0`` use the conjugate-holomorphic
exponentials ``e^{i pi n conj(tau)}`` and ``e^{-i pi n / conj(tau)}``.
"""

import json
from dataclasses import dataclass, field, replace

import mpmath as mp
import numpy as np

from .modular import exact_series
from .qseries import DomainError, NomeSeries, from_integers, ns_mul


class InvalidInput(ValueError):
    """Raised for coefficient data that violates an operation's preconditions."""


def _num(v):
    """Complex scalar; mpmath values are kept so extended-precision data survives."""
    if isinstance(v, mp.mpc):
        return v
    if isinstance(v, mp.mpf):
        return mp.mpc(v, 0)
    return complex(v)


def _clean(d):
    return {int(k): _num(v) for k, v in d.items() if _num(v) != 0}


@dataclass(frozen=True)
class HfsCoefficients:
    """Finitely supported hyperbolic Fourier series.

    Attributes
    ----------
    a0 : complex
    a, b : dict
        Maps from nonzero integer n to complex coefficients (positive n only
        for one-sided series).
    sided : {"one", "two"}
    skew : dict
        ``{"type": "none"}``, ``{"type": "power", "beta": ...}`` or
        ``{"type": "exponential", "omega1": ..., "omega2": ...}``.
    growth : str
        Declared growth class (metadata only).
    """

    a0: complex = 0j
    a: dict = field(default_factory=dict)
    b: dict = field(default_factory=dict)
    sided: str = "one"
    skew: dict = field(default_factory=lambda: {"type": "none"})
    growth: str = "polynomial"

    def __post_init__(self):
        object.__setattr__(self, "a0", _num(self.a0))
        object.__setattr__(self, "a", _clean(self.a))
        object.__setattr__(self, "b", _clean(self.b))
        if 0 in self.a or 0 in self.b:
            raise InvalidInput("index 0 belongs in a0; b_0 is always 0")
        if self.sided not in ("one", "two"):
            raise InvalidInput("sided must be 'one' or 'two'")
        if self.sided == "one" and any(k < 0 for k in list(self.a) + list(self.b)):
            raise InvalidInput("one-sided series take positive indices only")

    @property
    def support(self):
        keys = list(self.a) + list(self.b)
        return max((abs(k) for k in keys), default=0)

    def a_array(self, N=None):
        """Coefficients a_1..a_N as an array."""
        N = self.support if N is None else N
        return np.array([complex(self.a.get(n, 0j)) for n in range(1, N + 1)], dtype=complex)

    def b_array(self, N=None):
        N = self.support if N is None else N
        return np.array([complex(self.b.get(n, 0j)) for n in range(1, N + 1)], dtype=complex)

    def to_json(self):
        pair = lambda z: [float(z.real), float(z.imag)]
        skew = dict(self.skew)
        return json.dumps(
            {
                "a0": pair(self.a0),
                "a": {str(k): pair(v) for k, v in sorted(self.a.items())},
                "b": {str(k): pair(v) for k, v in sorted(self.b.items())},
                "sided": self.sided,
                "skew": skew,
            },
            indent=1,
        )

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        z = lambda p: complex(p[0], p[1]) if isinstance(p, (list, tuple)) else complex(p)
        return cls(
            a0=z(d.get("a0", [0, 0])),
            a={int(k): z(v) for k, v in d.get("a", {}).items()},
            b={int(k): z(v) for k, v in d.get("b", {}).items()},
            sided=d.get("sided", "one"),
            skew=d.get("skew", {"type": "none"}),
        )


def hfs_eval(c, tau):
    """Evaluate a (possibly skewed or two-sided) series at tau in H (vectorized)."""
    tau = np.asarray(tau, dtype=complex)
    if np.any(tau.imag <= 0):
        raise DomainError("Im tau must be positive")
    kind = c.skew.get("type", "none")
    w1 = c.skew.get("omega1", 0.0) if kind == "exponential" else 0.0
    w2 = c.skew.get("omega2", 0.0) if kind == "exponential" else 0.0
    pw = (tau / 1j) ** (-c.skew["beta"]) if kind == "power" else 1.0
    out = complex(c.a0) * np.exp(1j * np.pi * w1 * tau)
    for n, v in c.a.items():
        z = tau if n > 0 else np.conj(tau)
        out = out + complex(v) * np.exp(1j * np.pi * (n + w1) * z)
    for n, v in c.b.items():
        z = tau if n > 0 else np.conj(tau)
        out = out + complex(v) * pw * np.exp(-1j * np.pi * (n + w2) / z)
    return complex(out) if out.ndim == 0 else out


def _poly_series(P, base, N):
    """q-series of ``P(base)`` for a coefficient list P (constant first)."""
    out = NomeSeries(np.zeros(N + 1), 0)
    power = NomeSeries(np.concatenate([[1.0], np.zeros(N)]), 0)
    for k, p in enumerate(P):
        if k:
            power = ns_mul(power, base)
        if p:
            out = out + power * complex(p)
    return out


def exceptional_series(P, N=300):
    """One-sided series summing to zero on H, built from a polynomial P.

    Parameters
    ----------
    P : sequence of complex
        Coefficients of P, constant term first; ``P(0) = 0`` is required.
    N : int
        Truncation of the coefficient sequences.

    Returns
    -------
    HfsCoefficients
        ``a0 = -P(1)``, ``a_n`` the q-coefficients of ``P(lambda)`` and
        ``b_n`` those of ``-a0 - P(1 - lambda)``.
    """
    P = list(P)
    if P and P[0] != 0:
        raise InvalidInput("P(0) must be 0")
    if not any(P):
        return HfsCoefficients()
    lam_int = exact_series(max(N, 8))["lam"][:N]
    lam = from_integers([0] + lam_int)
    one_minus = from_integers([1] + [-v for v in lam_int])
    a0 = -sum(P)
    pa = _poly_series(P, lam, N).coeffs
    pb = -_poly_series(P, one_minus, N).coeffs
    pb[0] -= a0
    a = {n: pa[n] for n in range(1, N + 1)}
    b = {n: pb[n] for n in range(1, N + 1)}
    return HfsCoefficients(a0, a, b)


def exceptional_series_two_sided(P, Q, N=300):
    """Two-sided exceptional series from polynomials P (n > 0) and Q (n < 0).

    The free constant of the two-sided definition is ``c0 = -Q(1)``; it is
    returned alongside the coefficients.
    """
    plus = exceptional_series(P, N)
    minus = exceptional_series(Q, N)
    a = dict(plus.a)
    b = dict(plus.b)
    a.update({-n: v for n, v in minus.a.items()})
    b.update({-n: v for n, v in minus.b.items()})
    c0 = minus.a0
    return HfsCoefficients(plus.a0 + c0, a, b, sided="two"), c0


def exceptional_tail_bound(P, N, tau):
    """Majorant of the omitted terms ``n > N`` at tau for the series of P.

    Uses ``|lambda_hat(n)| <= exp(2 pi sqrt(n)) / 16`` raised to the degree
    of P as a crude bound on the coefficients of P(lambda).
    """
    deg = max(len(P) - 1, 1)
    y = min(complex(tau).imag, (-1 / complex(tau)).imag)
    n = np.arange(N + 1, N + 2000)
    s = np.sum(np.exp(2 * np.pi * np.sqrt(deg * n) - np.pi * n * y))
    return float(sum(abs(p) for p in P) * s / 16)


def schwarz_transform(c):
    """Relabel a 2-periodic harmonic series ``sum c_n e_n`` as a holomorphic HFS.

    ``a_n <- c_n`` for ``n >= 0`` and ``b_n <- c_{-n}`` for ``n > 0``; the
    result agrees with the input on the unit semicircle.
    """
    if c.skew.get("type", "none") != "none":
        raise InvalidInput("the Schwarz transform takes unskewed series")
    if c.b:
        raise InvalidInput("input must be a harmonic Fourier series (no b terms)")
    a = {n: v for n, v in c.a.items() if n > 0}
    b = {-n: v for n, v in c.a.items() if n < 0}
    return HfsCoefficients(c.a0, a, b, sided="one")


def _mp_pow(c, alpha, N):
    """``(sum c_k q^k)**alpha`` to order N in mpmath (principal branch at q = 0)."""
    c = [mp.mpf(v) for v in c[: N + 1]] + [mp.mpf(0)] * max(0, N + 1 - len(c))
    alpha = mp.mpf(alpha)
    g = [c[0] ** alpha] + [mp.mpf(0)] * N
    for k in range(1, N + 1):
        g[k] = mp.fsum(((alpha + 1) * j - k) * c[j] * g[k - j] for j in range(1, k + 1)) / (k * c[0])
    return g


def _mp_conv(a, b, N):
    return [mp.fsum(a[j] * b[k - j] for j in range(k + 1)) for k in range(N + 1)]


FACTOR_DPS = 30


def _convert(c, first_factor, second_factor, N, dps):
    """Multiply ``(a0, a_1..a_N)`` and ``(0, b_1..b_N)`` by the two factor series.

    The factor series are always built in mpmath (their double recurrences
    cancel badly); with ``dps=None`` they are rounded once and the products
    are formed in double.
    """
    with mp.workdps(max(dps or 0, FACTOR_DPS)):
        F1, F2 = first_factor(), second_factor()
        if dps is not None:
            av = [mp.mpc(c.a0)] + [mp.mpc(c.a.get(n, 0)) for n in range(1, N + 1)]
            bv = [mp.mpc(0)] + [mp.mpc(c.b.get(n, 0)) for n in range(1, N + 1)]
            return _mp_conv(F1, av, N), _mp_conv(F2, bv, N)
    F1 = np.array([complex(v) for v in F1])
    F2 = np.array([complex(v) for v in F2])
    first = np.convolve(F1, _with_const(c.a0, c.a_array(N)))[: N + 1]
    second = np.convolve(F2, _with_const(0, c.b_array(N)))[: N + 1]
    return first, second


def _with_const(a0, arr):
    return np.concatenate([[complex(a0)], arr])


def _require_one_sided(c, direction):
    if c.sided != "one":
        raise InvalidInput("skew conversions take one-sided series")
    if direction not in ("to_skewed", "to_plain"):
        raise InvalidInput("direction must be to_skewed or to_plain")


def pskew_convert(c, beta, direction="to_skewed", dps=None):
    """Convert between a plain series g and the power-skewed series of
    ``f = theta00**(2 beta) g``.

    With ``Theta = theta00**(2 beta)``: ``a0 = a0~``,
    ``a0 + f_1 = Theta (a0~ + g_1)`` and ``f_2 = Theta g_2``.

    Parameters
    ----------
    c : HfsCoefficients
        One-sided input.
    beta : float
    direction : {"to_skewed", "to_plain"}
    dps : int, optional
        Work in mpmath with this many digits and keep mpmath coefficients.
        The coefficients of ``theta00**(-2 beta)`` grow like
        ``exp(C sqrt(n))``, so a double-precision round trip loses about
        ``log10`` of that growth in digits.
    """
    _require_one_sided(c, direction)
    N = c.support
    sign = 1 if direction == "to_skewed" else -1
    factor = lambda: _mp_pow(exact_series(N + 1)["theta00"], 2 * sign * beta, N)
    first, second = _convert(c, factor, factor, N, dps)
    skew = {"type": "power", "beta": float(beta)} if sign > 0 else {"type": "none"}
    return HfsCoefficients(
        c.a0,
        {n: first[n] for n in range(1, N + 1)},
        {n: second[n] for n in range(1, N + 1)},
        skew=skew,
    )


def expskew_convert(c, omega1, omega2, direction="to_skewed", dps=None):
    """Convert between a plain series g and the exponentially skewed series of
    ``f = lambda(tau)**omega1 lambda(-1/tau)**omega2 g``.

    ``a0 + f_1 = (e^{-i pi w1 tau} lambda^{w1}) (1 - lambda)^{w2} (a0~ + g_1)``,
    ``f_2 = (e^{-i pi w2 tau} lambda^{w2}) (1 - lambda)^{w1} g_2``, so
    ``a0 = 16**w1 a0~``.  ``dps`` works as in :func:`pskew_convert`.
    """
    _require_one_sided(c, direction)
    N = c.support
    sign = 1 if direction == "to_skewed" else -1
    w1, w2 = sign * omega1, sign * omega2
    lam = exact_series(N + 1)["lam"]
    over_q = lam[: N + 1]
    one_minus = [1] + [-v for v in lam[:N]]
    f1 = lambda: _mp_conv(_mp_pow(over_q, w1, N), _mp_pow(one_minus, w2, N), N)
    f2 = lambda: _mp_conv(_mp_pow(over_q, w2, N), _mp_pow(one_minus, w1, N), N)
    first, second = _convert(c, f1, f2, N, dps)
    skew = {"type": "exponential", "omega1": float(omega1), "omega2": float(omega2)}
    return HfsCoefficients(
        first[0],
        {n: first[n] for n in range(1, N + 1)},
        {n: second[n] for n in range(1, N + 1)},
        skew=skew if sign > 0 else {"type": "none"},
    )


def growth_envelope_check(c, beta, y_grid):
    """Compare ``|sum a_n e^{-pi n y}|`` with ``C exp(pi beta / y)``.

    C is fitted at the largest y; the report holds the ratio at every y.

    Returns
    -------
    dict
        ``{"C": C, "ratios": array, "max_ratio": float}``
    """
    y = np.sort(np.asarray(y_grid, dtype=float))
    n = np.array(sorted(k for k in c.a if k > 0), dtype=float)
    a = np.array([c.a[int(k)] for k in n], dtype=complex)
    vals = np.array([abs(np.sum(a * np.exp(-np.pi * n * yy))) for yy in y])
    env = np.exp(np.pi * beta / y)
    C = vals[-1] / env[-1] if vals[-1] > 0 else 1.0
    ratios = vals / (C * env)
    return {"C": float(C), "y": y, "ratios": ratios, "max_ratio": float(np.max(ratios))}


def split_harmonic(c):
    """Split a two-sided series into holomorphic and antiholomorphic parts.

    Returns ``(holo, anti, k)`` with ``holo(i) = anti(i) = 0`` and
    ``h = holo + anti + k``.
    """
    if c.skew.get("type", "none") != "none":
        raise InvalidInput("split_harmonic takes unskewed series")
    hp = HfsCoefficients(0, {n: v for n, v in c.a.items() if n > 0},
                         {n: v for n, v in c.b.items() if n > 0}, sided="two")
    hm = HfsCoefficients(0, {n: v for n, v in c.a.items() if n < 0},
                         {n: v for n, v in c.b.items() if n < 0}, sided="two")
    vp, vm = hfs_eval(hp, 1j), hfs_eval(hm, 1j)
    return replace(hp, a0=-vp), replace(hm, a0=-vm), c.a0 + vp + vm


def conjugate_flip(c):
    """``a_n <-> conj(a_{-n})``, ``b_n <-> conj(b_{-n})``, ``a0 -> conj(a0)``."""
    return HfsCoefficients(
        np.conj(c.a0),
        {-n: np.conj(v) for n, v in c.a.items()},
        {-n: np.conj(v) for n, v in c.b.items()},
        sided="two",
    )
