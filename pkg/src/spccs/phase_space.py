"""Numeric Wigner functions and negative-volume quadrature.

Phase-space points are complex ``beta = (q + i p)/sqrt(2)``; every Wigner
function here integrates to one in the ``d^2 beta`` measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import IntegrationError

MAX_KERNEL_INDEX = 400
DEFAULT_STEP = 0.02
NORMALIZATION_TOL = 1e-4
# amplitudes below this are dropped before building the kernel sum
_TRIM = 1e-18


@dataclass(frozen=True)
class PhaseSpaceRegion:
    """Square ``[c - R, c + R]^2`` in the beta plane, tiled by panels of width ``step``."""

    center: complex
    radius: float
    step: float = DEFAULT_STEP

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if not self.step > 0:
            raise ValueError(f"step must be positive, got {self.step}")

    @classmethod
    def for_catalysis(cls, alpha, lam, n_max, step=DEFAULT_STEP):
        """Region around the displaced Gaussian envelope ``sqrt(1-lam) alpha``."""
        centre = math.sqrt(1.0 - lam) * complex(alpha)
        radius = 6.0 / math.sqrt(2.0) + abs(centre) + math.sqrt(n_max) / 2.0
        return cls(centre, radius, step)

    @classmethod
    def for_state(cls, state, step=DEFAULT_STEP):
        amps = _trimmed(state.amplitudes)
        n = np.arange(1, amps.size)
        centre = complex(np.vdot(amps[:-1], np.sqrt(n) * amps[1:])) if amps.size > 1 else 0j
        radius = 6.0 / math.sqrt(2.0) + abs(centre) + math.sqrt(amps.size - 1) / 2.0
        return cls(centre, radius, step)


@dataclass(frozen=True)
class NegativityResult:
    delta: float
    abs_integral: float
    signed_integral: float
    error_estimate: float


def _trimmed(amps):
    big = np.nonzero(np.abs(amps) > _TRIM)[0]
    if big.size == 0:
        raise ValueError("state has no amplitude above the trim threshold")
    return amps[: big[-1] + 1]


def wigner_numeric(state, beta):
    """Wigner function of a pure Fock-basis state.

    Sums ``conj(c_m) c_n W_mn(beta)`` with the Laguerre kernel, walking the
    normalized Laguerre functions ``sqrt(n!/(n+d)!) r^d e^{-r^2/2} L_n^d(r^2)``
    (``r = 2|beta|``) upward in ``n`` for each off-diagonal offset ``d``.
    """
    amps = _trimmed(np.asarray(state.amplitudes, dtype=complex))
    size = amps.size
    if 2 * (size - 1) > MAX_KERNEL_INDEX:
        raise ValueError(f"kernel index {2 * (size - 1)} exceeds supported {MAX_KERNEL_INDEX}")
    beta = np.asarray(beta, dtype=complex)
    scalar = beta.ndim == 0
    beta = np.atleast_1d(beta)

    x = 4.0 * np.abs(beta) ** 2
    with np.errstate(divide="ignore"):
        log_r = 0.5 * np.log(x)
    phase = np.exp(-1j * np.angle(beta))
    total = np.zeros(beta.shape)

    for d in range(size):
        pair = np.conj(amps[: size - d]) * amps[d:]
        if not np.any(pair):
            continue
        if d == 0:
            lag = np.exp(-0.5 * x)
        else:
            lag = np.exp(d * log_r - 0.5 * x - 0.5 * gammaln(d + 1))
        prev = np.zeros_like(lag)
        acc = np.zeros(beta.shape, dtype=complex)
        for n in range(size - d):
            sign = -1.0 if n % 2 else 1.0
            acc += sign * pair[n] * lag
            nxt = ((2 * n + 1 + d - x) * lag - math.sqrt(n * (n + d)) * prev) / math.sqrt((n + 1) * (n + 1 + d))
            prev, lag = lag, nxt
        if d == 0:
            total += acc.real
        else:
            total += 2.0 * (acc * phase**d).real
    w = (2.0 / math.pi) * total
    return float(w[0]) if scalar else w


def _panel_rule(lo, hi, step, order):
    n_panels = max(1, int(math.ceil((hi - lo) / step - 1e-9)))
    h = (hi - lo) / n_panels
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = lo + h * np.arange(n_panels)
    x = (edges[:, None] + 0.5 * h * (nodes + 1.0)).ravel()
    w = np.tile(0.5 * h * weights, n_panels)
    return x, w


def _integrate(evaluator, region, step, order, block):
    lo_r, hi_r = region.center.real - region.radius, region.center.real + region.radius
    lo_i, hi_i = region.center.imag - region.radius, region.center.imag + region.radius
    xr, wr = _panel_rule(lo_r, hi_r, step, order)
    xi, wi = _panel_rule(lo_i, hi_i, step, order)
    signed = 0.0
    negative = 0.0
    # fixed row-block order keeps the reduction bit-reproducible
    for start in range(0, xr.size, block):
        rows = slice(start, start + block)
        beta = xr[rows, None] + 1j * xi[None, :]
        w = np.asarray(evaluator(beta), dtype=float)
        weights = wr[rows, None] * wi[None, :]
        signed += float(np.sum(weights * w))
        negative += float(np.sum(weights * np.maximum(-w, 0.0)))
    return signed, negative


def negativity_volume(evaluator, region, order=3, block=256):
    """Negative volume ``delta = (int|W| - int W)/2`` by composite Gauss-Legendre.

    The integral is done at ``region.step`` and again at half the step; the
    finer result is reported and the difference serves as the error estimate.
    ``evaluator`` maps a complex array of beta to real Wigner values.
    """
    coarse_signed, coarse_neg = _integrate(evaluator, region, region.step, order, block)
    signed, negative = _integrate(evaluator, region, region.step / 2.0, order, block)
    drift = abs(signed - 1.0)
    if drift > NORMALIZATION_TOL:
        raise IntegrationError(
            f"signed Wigner volume {signed:.8f} drifts from 1 by {drift:.2e}; enlarge the region or refine the step"
        )
    error = max(abs(negative - coarse_neg), abs(signed - coarse_signed), drift) + 1e-14
    return NegativityResult(
        delta=negative,
        abs_integral=signed + 2.0 * negative,
        signed_integral=signed,
        error_estimate=error,
    )
