"""Geometry of the upper half-plane under the Theta group.

Maps ``S(tau) = -1/tau``, ``T(tau) = tau + 1``, ``S*(tau) = 1/conj(tau)``,
``R*(tau) = -conj(tau)`` and ``mod2`` (shift by an even integer into
``-1 <= Re < 1``), the fundamental domain ``D_Theta = {|Re| < 1, |tau| > 1}``,
the fly-catcher height and reduction words.
"""

from dataclasses import dataclass

import numpy as np

from .qseries import DomainError

BOUNDARY_TOL = 1e-12


class AlgorithmError(RuntimeError):
    """Raised when the height iteration exceeds its proven step bound."""


def mod2(tau):
    """Shift by ``2k`` so that ``-1 <= Re tau < 1`` (ties go to -1)."""
    tau = np.asarray(tau, dtype=complex)
    k = np.floor((tau.real + 1.0) / 2.0)
    out = tau - 2.0 * k
    # floating rounding can leave Re exactly at 1
    out = np.where(out.real >= 1.0, out - 2.0, out)
    return complex(out) if out.ndim == 0 else out


def s_map(tau):
    return -1.0 / np.asarray(tau, dtype=complex)


def s_star(tau):
    return 1.0 / np.conj(np.asarray(tau, dtype=complex))


def r_star(tau):
    return -np.conj(np.asarray(tau, dtype=complex))


_MAPS = {
    "S": s_map,
    "T": lambda t: np.asarray(t, dtype=complex) + 1.0,
    "T2": lambda t: np.asarray(t, dtype=complex) + 2.0,
    "S*": s_star,
    "R*": r_star,
    "mod2": mod2,
}


def apply_map(name, tau):
    """Apply one of ``S, T, T2, S*, R*, mod2`` to tau.

    Examples
    --------
    >>> apply_map("mod2", 3.5 + 1j)
    (-0.5+1j)
    """
    tau = np.asarray(tau, dtype=complex)
    if np.any(tau.imag <= 0):
        raise DomainError("Im tau must be positive")
    out = np.asarray(_MAPS[name](tau))
    return complex(out) if out.ndim == 0 else out


def in_DTheta(tau, tol=BOUNDARY_TOL):
    """Classify tau as ``"interior"``, ``"boundary"`` or ``"outside"`` of D_Theta."""
    tau = complex(tau)
    re, r = abs(tau.real), abs(tau)
    if re > 1 + tol or r < 1 - tol:
        return "outside"
    if abs(re - 1) <= tol or abs(r - 1) <= tol:
        return "boundary"
    return "interior"


def _in_closure(tau, tol=BOUNDARY_TOL):
    return (np.abs(tau.real) <= 1 + tol) & (np.abs(tau) >= 1 - tol)


@dataclass(frozen=True)
class HeightResult:
    """Outcome of the fly-catcher algorithm.

    Attributes
    ----------
    N : int
        Number of ``g*_2`` steps.
    orbit : list of complex
        ``tau_0 = mod2(tau), ..., tau_N``.
    is_mesh : bool
        True when the terminal point lies on the boundary of D_Theta.
    """

    N: int
    orbit: list
    is_mesh: bool


def step_cap(tau):
    return int(np.ceil(1 + 1 / complex(tau).imag))


def flycatcher_height(tau, use_g2=False):
    """Height of tau by iterating ``g*_2 = mod2 o S*`` until D_Theta is reached.

    Parameters
    ----------
    tau : complex
    use_g2 : bool, optional
        Iterate ``g_2 = mod2 o S`` instead (same count off mesh points).

    Returns
    -------
    HeightResult
    """
    tau = complex(tau)
    if tau.imag <= 0:
        raise DomainError("Im tau must be positive")
    step = s_map if use_g2 else s_star
    t = mod2(tau)
    orbit = [t]
    cap = step_cap(tau)
    while not _in_closure(np.asarray(t)):
        if len(orbit) > cap:
            raise AlgorithmError("height iteration exceeded 1 + 1/Im tau steps")
        t = mod2(complex(step(t)))
        orbit.append(t)
    return HeightResult(len(orbit) - 1, orbit, in_DTheta(t) == "boundary")


def heights(tau):
    """Vectorized fly-catcher heights for an array of points."""
    t = mod2(np.asarray(tau, dtype=complex))
    if np.any(t.imag <= 0):
        raise DomainError("Im tau must be positive")
    n = np.zeros(t.shape, dtype=int)
    active = ~_in_closure(t)
    cap = int(np.ceil(1 + 1 / np.min(np.imag(tau))))
    while active.any():
        t = np.where(active, mod2(s_star(t)), t)
        n += active
        active = ~_in_closure(t)
        if n.max() > cap:
            raise AlgorithmError("height iteration exceeded its bound")
    return n


def average_height(y, n_points=4096):
    """Mean height over ``t + iy``, ``t`` on a midpoint grid of [-1, 1]."""
    t = -1 + (np.arange(n_points) + 0.5) * 2.0 / n_points
    return float(np.mean(heights(t + 1j * y)))


@dataclass(frozen=True)
class ThetaWord:
    """An element of the modular group as a word and an integer matrix.

    Attributes
    ----------
    matrix : ndarray
        ``[[a, b], [c, d]]`` with determinant 1.
    letters : tuple
        Sequence of ``("S", 1)`` and ``("T2", k)`` (meaning ``tau + 2k``),
        applied right to left as in function composition.
    """

    matrix: np.ndarray
    letters: tuple

    def __call__(self, tau):
        (a, b), (c, d) = self.matrix
        return (a * tau + b) / (c * tau + d)

    @property
    def length(self):
        return len(self.letters)

    def in_theta_group(self):
        m = np.mod(self.matrix, 2)
        return bool(np.array_equal(m, np.eye(2, dtype=int)) or np.array_equal(m, [[0, 1], [1, 0]]))

    @classmethod
    def from_letters(cls, letters):
        m = np.eye(2, dtype=np.int64)
        kept = []
        for name, k in letters:
            if name == "S":
                g = np.array([[0, -1], [1, 0]], dtype=np.int64)
            elif name == "T2":
                if k == 0:
                    continue
                g = np.array([[1, 2 * k], [0, 1]], dtype=np.int64)
            else:
                raise ValueError("unknown letter %r" % name)
            m = m @ g
            kept.append((name, int(k)))
        return cls(m, tuple(kept))


def reduce_to_tile(tau):
    """Find gamma in the Theta group and tau0 in closed D_Theta with gamma(tau0) = tau.

    Follows the ``g_2 = mod2 o S`` orbit: each step contributes ``T2^k S``.

    Returns
    -------
    gamma : ThetaWord
    tau0 : complex
    is_mesh : bool
    """
    tau = complex(tau)
    if tau.imag <= 0:
        raise DomainError("Im tau must be positive")
    letters = []
    t = mod2(tau)
    letters.append(("T2", int(round((tau - t).real / 2))))
    cap = step_cap(tau)
    steps = 0
    while not _in_closure(np.asarray(t)):
        s = complex(s_map(t))
        t = mod2(s)
        letters.append(("S", 1))
        letters.append(("T2", int(round((s - t).real / 2))))
        steps += 1
        if steps > cap:
            raise AlgorithmError("reduction exceeded its step bound")
    return ThetaWord.from_letters(letters), t, in_DTheta(t) == "boundary"


def big_M(tau):
    """Growth gauge ``M(tau) = max(1, |tau|^2) / Im tau``."""
    tau = np.asarray(tau, dtype=complex)
    if np.any(tau.imag <= 0):
        raise DomainError("Im tau must be positive")
    out = np.maximum(1.0, np.abs(tau) ** 2) / tau.imag
    return float(out) if out.ndim == 0 else out
