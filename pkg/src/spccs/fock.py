"""Truncated single- and two-mode Fock-space states.

Amplitudes are stored as read-only numpy arrays indexed by photon number.
Factorial-bearing factors are evaluated in log space so truncations well
beyond n = 170 stay finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from .errors import TruncationError

DEFAULT_TAIL_TOL = 1e-12


def _frozen(arr, dtype=complex):
    out = np.array(arr, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class TruncationPolicy:
    """How large a number basis to use.

    ``n_max=None`` selects the adaptive rule
    ``N = ceil(|alpha|^2 + 10 sqrt(max(|alpha|^2, 1)) + 20)``.
    """

    n_max: int | None = None
    tail_tol: float = DEFAULT_TAIL_TOL

    def __post_init__(self):
        if self.n_max is not None and self.n_max < 0:
            raise ValueError(f"n_max must be nonnegative, got {self.n_max}")
        if not self.tail_tol > 0:
            raise ValueError(f"tail_tol must be positive, got {self.tail_tol}")

    @classmethod
    def fixed(cls, n_max, tail_tol=DEFAULT_TAIL_TOL):
        return cls(n_max=int(n_max), tail_tol=tail_tol)

    @classmethod
    def adaptive(cls, tail_tol=DEFAULT_TAIL_TOL):
        return cls(n_max=None, tail_tol=tail_tol)

    @property
    def is_adaptive(self):
        return self.n_max is None

    def size_for(self, alpha=0.0):
        """Truncation index N for a coherent amplitude ``alpha``."""
        if self.n_max is not None:
            return self.n_max
        return adaptive_size(alpha)


def adaptive_size(alpha):
    x = abs(complex(alpha)) ** 2
    return int(math.ceil(x + 10.0 * math.sqrt(max(x, 1.0)) + 20.0))


@dataclass(frozen=True)
class FockVector:
    """Single-mode pure state truncated to photon numbers 0..N.

    ``tail_mass`` is the probability discarded by the truncation before
    renormalization (coherent inputs); ``overflow`` is the squared norm pushed
    past N by a creation operator.
    """

    amplitudes: np.ndarray
    tail_mass: float = 0.0
    overflow: float = 0.0

    def __post_init__(self):
        amps = np.asarray(self.amplitudes)
        if amps.ndim != 1 or amps.size == 0:
            raise ValueError("amplitudes must be a non-empty 1-D sequence")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def truncation(self):
        return self.amplitudes.size - 1

    def __len__(self):
        return self.amplitudes.size

    def __getitem__(self, n):
        return self.amplitudes[n]

    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def normalize(self):
        nrm = self.norm()
        if nrm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return FockVector(self.amplitudes / nrm, self.tail_mass, self.overflow)

    def padded(self, n_max):
        """Zero-extend to truncation ``n_max`` (never shortens)."""
        if n_max <= self.truncation:
            return self
        amps = np.zeros(n_max + 1, dtype=complex)
        amps[: len(self)] = self.amplitudes
        return FockVector(amps, self.tail_mass, self.overflow)

    def probabilities(self):
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class TwoModeFockMatrix:
    """Two-mode pure state; ``amplitudes[n_a, n_b]``."""

    amplitudes: np.ndarray
    spill: float = field(default=0.0)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes)
        if amps.ndim != 2 or amps.size == 0:
            raise ValueError("amplitudes must be a non-empty 2-D grid")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def truncations(self):
        na, nb = self.amplitudes.shape
        return na - 1, nb - 1

    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def total_photon_number(self):
        na, nb = self.amplitudes.shape
        n = np.arange(na)[:, None] + np.arange(nb)[None, :]
        return float(np.sum(n * np.abs(self.amplitudes) ** 2))


def coherent_amplitudes(alpha, n_max):
    """Unnormalized ``alpha^n exp(-|alpha|^2/2) / sqrt(n!)`` for n = 0..n_max."""
    alpha = complex(alpha)
    n = np.arange(n_max + 1)
    if alpha == 0:
        amps = np.zeros(n_max + 1, dtype=complex)
        amps[0] = 1.0
        return amps
    r = abs(alpha)
    log_mod = n * math.log(r) - 0.5 * r * r - 0.5 * gammaln(n + 1)
    return np.exp(log_mod) * np.exp(1j * n * np.angle(alpha))


def coherent(alpha, policy=None):
    """Coherent state |alpha>, renormalized over the truncated window."""
    policy = policy or TruncationPolicy()
    n_max = policy.size_for(alpha)
    x = abs(complex(alpha)) ** 2
    tail = float(poisson.sf(n_max, x)) if x > 0 else 0.0
    if tail > policy.tail_tol:
        raise TruncationError(
            f"truncation N={n_max} leaves tail mass {tail:.3e} for |alpha|^2={x:g}",
            mass=tail,
        )
    amps = coherent_amplitudes(alpha, n_max)
    return FockVector(amps / np.linalg.norm(amps), tail_mass=tail)


def fock(n, policy=None):
    policy = policy or TruncationPolicy()
    if n < 0:
        raise ValueError(f"photon number must be nonnegative, got {n}")
    n_max = policy.size_for(0.0)
    if policy.is_adaptive:
        n_max = max(n_max, n)
    elif n > n_max:
        raise TruncationError(f"Fock index {n} exceeds truncation N={n_max}")
    amps = np.zeros(n_max + 1, dtype=complex)
    amps[n] = 1.0
    return FockVector(amps)


def vacuum(policy=None):
    return fock(0, policy)


def inner(u, v):
    """<u|v>, zero-padding the shorter operand."""
    n = max(u.truncation, v.truncation)
    a = u.padded(n).amplitudes
    b = v.padded(n).amplitudes
    return complex(np.vdot(a, b))


def fidelity(u, v):
    """|<u|v>|^2 for normalized pure states."""
    return abs(inner(u, v)) ** 2


def _lower(amps, times):
    # (a^l psi)[n] = sqrt((n+l)!/n!) psi[n+l]
    if times == 0:
        return amps.copy()
    size = amps.size
    out = np.zeros(size, dtype=complex)
    if times >= size:
        return out
    n = np.arange(size - times)
    out[: size - times] = np.exp(0.5 * (gammaln(n + times + 1) - gammaln(n + 1))) * amps[times:]
    return out


def _raise(amps, times):
    # (a^dag^k psi)[n+k] = sqrt((n+k)!/n!) psi[n]; the part landing past N is returned as overflow
    if times == 0:
        return amps.copy(), 0.0
    size = amps.size
    n = np.arange(size)
    full = np.exp(0.5 * (gammaln(n + times + 1) - gammaln(n + 1))) * amps
    out = np.zeros(size, dtype=complex)
    keep = max(size - times, 0)
    out[times:] = full[:keep]
    overflow = float(np.sum(np.abs(full[keep:]) ** 2))
    return out, overflow


def ladder(state, creations, annihilations, tail_tol=DEFAULT_TAIL_TOL):
    """Apply ``a^l`` then ``a^dag^k`` (unnormalized).

    The squared norm that a creation pushes past the truncation is recorded in
    ``overflow``; above ``tail_tol`` a :class:`TruncationError` is raised.
    Pass ``tail_tol=None`` to only record it.
    """
    if creations < 0 or annihilations < 0:
        raise ValueError("ladder powers must be nonnegative")
    lowered = _lower(state.amplitudes, annihilations)
    raised, overflow = _raise(lowered, creations)
    if tail_tol is not None and overflow > tail_tol:
        raise TruncationError(
            f"creation overflow {overflow:.3e} exceeds tolerance {tail_tol:.1e}",
            mass=overflow,
        )
    return FockVector(raised, tail_mass=state.tail_mass, overflow=state.overflow + overflow)


def moment(state, creations, annihilations):
    """Normally ordered expectation <a^dag^k a^l> computed as <a^k psi|a^l psi>."""
    left = _lower(state.amplitudes, creations)
    right = _lower(state.amplitudes, annihilations)
    return complex(np.vdot(left, right))


def tensor(u, v):
    return TwoModeFockMatrix(np.outer(u.amplitudes, v.amplitudes))
