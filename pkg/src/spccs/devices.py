"""Beam splitter and two-mode squeezer acting on truncated Fock grids.

Conventions: ``B(theta) = exp[theta (a^dag b - a b^dag)]`` and
``S(lam) = exp[lam (a^dag b^dag - a b)]``. The catalysis parameter is
``Lambda = sin(theta)^2`` for the beam splitter and ``tanh(lam)^2`` for the
amplifier; at equal Lambda the heralded outputs coincide up to a global phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DegenerateHeraldError, TruncationError
from .fock import (
    DEFAULT_TAIL_TOL,
    FockVector,
    TruncationPolicy,
    TwoModeFockMatrix,
    coherent,
    fock,
    tensor,
)

BS = "bs"
PA = "pa"
DEVICE_KINDS = (BS, PA)

# Hard ceiling on the amplifier output truncation (per mode).
PA_MAX_TRUNCATION = 1024


def check_kind(kind):
    k = str(kind).lower()
    if k not in DEVICE_KINDS:
        raise ValueError(f"device must be one of {DEVICE_KINDS}, got {kind!r}")
    return k


def check_lambda(lam, kind=BS):
    lam = float(lam)
    kind = check_kind(kind)
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"catalysis parameter must lie in [0, 1], got {lam}")
    if kind == PA and lam >= 1.0:
        raise ValueError("the amplifier requires Lambda < 1 (finite gain)")
    return lam


@dataclass(frozen=True)
class DeviceSpec:
    kind: str
    interaction: float

    def __post_init__(self):
        object.__setattr__(self, "kind", check_kind(self.kind))
        if self.kind == BS and not 0.0 <= self.interaction <= math.pi / 2:
            raise ValueError(f"theta must lie in [0, pi/2], got {self.interaction}")
        if self.kind == PA and not (0.0 <= self.interaction < math.inf):
            raise ValueError(f"lambda must be finite and nonnegative, got {self.interaction}")

    @classmethod
    def from_lambda(cls, lam, kind):
        kind = check_kind(kind)
        lam = check_lambda(lam, kind)
        if kind == BS:
            return cls(BS, math.asin(math.sqrt(lam)))
        return cls(PA, math.atanh(math.sqrt(lam)))

    @property
    def catalysis(self):
        if self.kind == BS:
            return math.sin(self.interaction) ** 2
        return math.tanh(self.interaction) ** 2


@dataclass(frozen=True)
class HeraldResult:
    state: FockVector
    probability: float


def _log_binom(n, k):
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def bs_apply(state, theta):
    """Exact beam-splitter action, one input basis state at a time.

    ``B|p,q> = (t a^dag - r b^dag)^p (r a^dag + t b^dag)^q |0,0> / sqrt(p! q!)``
    expanded binomially. Photon number is conserved, so the output grid
    ``(N_tot+1) x (N_tot+1)`` with ``N_tot`` the largest occupied ``p+q``
    holds the result exactly.
    """
    if not 0.0 <= theta <= math.pi / 2 + 1e-15:
        raise ValueError(f"theta must lie in [0, pi/2], got {theta}")
    t, r = math.cos(theta), math.sin(theta)
    if theta == math.pi / 2:
        t = 0.0
    amps = state.amplitudes
    occupied = np.argwhere(amps != 0)
    n_tot = int(occupied.sum(axis=1).max()) if occupied.size else 0
    out = np.zeros((n_tot + 1, n_tot + 1), dtype=complex)

    for p, q in occupied:
        p, q = int(p), int(q)
        i = np.arange(p + 1)[:, None]
        j = np.arange(q + 1)[None, :]
        na = i + j
        nb = p + q - na
        log_mag = (
            _log_binom(p, i)
            + _log_binom(q, j)
            + 0.5 * (gammaln(na + 1) + gammaln(nb + 1) - gammaln(p + 1) - gammaln(q + 1))
        )
        # t^i r^(p-i) r^j t^(q-j); 0**0 == 1 covers the endpoints
        powers = t ** (i + q - j) * r ** (p - i + j)
        sign = np.where((p - i) % 2 == 0, 1.0, -1.0)
        contrib = amps[p, q] * sign * powers * np.exp(log_mag)
        np.add.at(out, (na.ravel(), nb.ravel()), contrib.ravel())
    return TwoModeFockMatrix(out)


def _pa_once(amps, lam, n_out):
    kappa = math.tanh(lam)
    cosh = math.cosh(lam)
    na, nb = amps.shape
    i = np.arange(na)[:, None]
    j = np.arange(nb)[None, :]

    # exp(-kappa a b): finite series
    mid = np.zeros_like(amps)
    for k in range(min(na, nb)):
        if k == 0:
            mid += amps
            continue
        coef = np.exp(
            0.5 * (gammaln(i[k:] + 1) - gammaln(i[k:] - k + 1) + gammaln(j[:, k:] + 1) - gammaln(j[:, k:] - k + 1))
            - gammaln(k + 1)
        ) * (-kappa) ** k
        mid[: na - k, : nb - k] += coef * amps[k:, k:]

    # cosh(lam)^-(a^dag a + b^dag b + 1)
    mid *= np.exp(-(i + j + 1.0) * math.log(cosh))

    # exp(kappa a^dag b^dag): cut at the output truncation
    out = np.zeros((n_out + 1, n_out + 1), dtype=complex)
    log_kappa = math.log(kappa) if kappa > 0 else -math.inf
    for k in range(n_out + 1):
        ra = min(na, n_out + 1 - k)
        rb = min(nb, n_out + 1 - k)
        if ra <= 0 or rb <= 0:
            break
        if k == 0:
            out[:ra, :rb] += mid[:ra, :rb]
            continue
        if kappa == 0:
            break
        coef = np.exp(
            k * log_kappa
            - gammaln(k + 1)
            + 0.5 * (gammaln(i[:ra] + k + 1) - gammaln(i[:ra] + 1) + gammaln(j[:, :rb] + k + 1) - gammaln(j[:, :rb] + 1))
        )
        out[k : k + ra, k : k + rb] += coef * mid[:ra, :rb]
    return out


def pa_output_truncation(n_in, lam_catalysis):
    """Initial per-mode output truncation ``N_in + ceil(10/(1-Lambda))``."""
    if lam_catalysis >= 1.0:
        return PA_MAX_TRUNCATION
    return min(PA_MAX_TRUNCATION, n_in + int(math.ceil(10.0 / (1.0 - lam_catalysis))))


def pa_apply(state, lam, tail_tol=DEFAULT_TAIL_TOL, n_out=None):
    """Two-mode squeezer via its normally ordered factorization.

    ``S = exp(kappa a^dag b^dag) cosh^-(n_a+n_b+1) exp(-kappa a b)`` with
    ``kappa = tanh(lam)``. The squeezer does not conserve photon number, so the
    output grid is enlarged; the squared norm lost at the edge is ``spill``.
    With ``n_out=None`` the truncation starts at :func:`pa_output_truncation`
    and the headroom doubles until the spill drops below ``tail_tol`` or
    ``PA_MAX_TRUNCATION`` is reached.
    """
    if not 0.0 <= lam < math.inf:
        raise ValueError(f"lambda must be finite and nonnegative, got {lam}")
    amps = state.amplitudes
    n_in = max(amps.shape) - 1
    norm_in = float(np.sum(np.abs(amps) ** 2))
    lam_cat = math.tanh(lam) ** 2

    if n_out is not None:
        sizes = [int(n_out)]
    else:
        size = pa_output_truncation(n_in, lam_cat)
        sizes = [size]
        while size < PA_MAX_TRUNCATION:
            size = min(PA_MAX_TRUNCATION, n_in + 2 * (size - n_in))
            sizes.append(size)

    for size in sizes:
        out = _pa_once(amps, lam, size)
        spill = max(norm_in - float(np.sum(np.abs(out) ** 2)), 0.0)
        if tail_tol is None or spill <= tail_tol:
            return TwoModeFockMatrix(out, spill=spill)
    raise TruncationError(
        f"amplifier spill {spill:.3e} exceeds {tail_tol:.1e} at Lambda={lam_cat:.6g} "
        f"(output truncation {sizes[-1]})",
        mass=spill,
        lam=lam_cat,
    )


def herald_single_photon(state):
    """Project mode b onto |1> and renormalize mode a."""
    amps = state.amplitudes
    if amps.shape[1] < 2:
        raise DegenerateHeraldError("mode b is truncated below one photon")
    v = amps[:, 1]
    prob = float(np.sum(np.abs(v) ** 2))
    if prob < 1e-300:
        raise DegenerateHeraldError(f"single-photon herald probability {prob:.3e} is zero")
    return HeraldResult(FockVector(v / math.sqrt(prob)), prob)


def catalyze_numeric(alpha, lam, kind=BS, policy=None):
    """Brute-force catalysis: |alpha>|1> through the device, herald one photon in b."""
    kind = check_kind(kind)
    lam = check_lambda(lam, kind)
    policy = policy or TruncationPolicy()
    spec = DeviceSpec.from_lambda(lam, kind)
    psi_in = tensor(coherent(alpha, policy), fock(1, TruncationPolicy.fixed(1)))
    if kind == BS:
        out = bs_apply(psi_in, spec.interaction)
    else:
        out = pa_apply(psi_in, spec.interaction, tail_tol=policy.tail_tol)
    return herald_single_photon(out)
