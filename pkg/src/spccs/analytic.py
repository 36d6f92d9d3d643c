"""Closed forms for single-photon catalyzed coherent states.

The state produced with catalysis parameter ``lam`` from input ``alpha`` is

    omega_n = alpha^n exp(-(1-lam)|alpha|^2/2) sqrt(1-lam)^(n-1) (1-lam-n lam) / sqrt(n! I0)

and every statistic below is a ratio of the quartic polynomials ``I0..I4`` in
``|alpha|^2``. At ``lam = 1`` the state is the single-photon Fock state for
every ``alpha``; that point is handled as a limit rather than by formula.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, ive

from .devices import BS, PA, check_kind, check_lambda
from .fock import FockVector, adaptive_size

VACUUM_VARIANCE = 0.5

# coefficients of I_k in powers of |alpha|^2: (constant, linear, quartic)
_I_COEFFS = {
    0: lambda L: ((1 - L), L * (3 * L - 2), L * L * (1 - L)),
    1: lambda L: ((1 - 2 * L), 2 * L * (2 * L - 1), L * L * (1 - L)),
    2: lambda L: ((1 - 3 * L), L * (5 * L - 2), L * L * (1 - L)),
    3: lambda L: ((2 * L - 1) ** 2, L * (1 - L) * (5 * L - 2), L * L * (1 - L) ** 2),
    4: lambda L: ((3 * L - 1) ** 2, L * (1 - L) * (7 * L - 2), L * L * (1 - L) ** 2),
}


@dataclass(frozen=True)
class CatalysisParams:
    alpha: complex
    lam: float

    def __post_init__(self):
        alpha = complex(self.alpha)
        if not cmath.isfinite(alpha):
            raise ValueError(f"alpha must be finite, got {self.alpha}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "lam", check_lambda(self.lam, BS))

    @property
    def x(self):
        """|alpha|^2"""
        return abs(self.alpha) ** 2

    @property
    def transmitted(self):
        """sqrt(1-lam) alpha, the displacement of the coherent component."""
        return math.sqrt(1.0 - self.lam) * self.alpha


def I_k(alpha, lam, k):
    """Quartic polynomial I_k(alpha, lam), k in 0..4, in Horner form."""
    if k not in _I_COEFFS:
        raise ValueError(f"k must be in 0..4, got {k}")
    lam = check_lambda(lam, BS)
    x = abs(complex(alpha)) ** 2
    c0, c1, c2 = _I_COEFFS[k](lam)
    return c0 + x * (c1 + x * c2)


@dataclass(frozen=True)
class AnalyticSPCCS:
    params: CatalysisParams
    omega: np.ndarray
    c0: complex | None
    c1: complex | None
    d0: complex | None
    d1: complex | None
    p_bs: float
    p_pa: float

    def as_fock(self):
        return FockVector(self.omega)

    def pnd(self):
        return np.abs(self.omega) ** 2


def _omega(alpha, lam, n_max):
    n = np.arange(n_max + 1)
    x = abs(alpha) ** 2
    out = np.zeros(n_max + 1, dtype=complex)
    if lam == 1.0:
        # pure |1>; the phase follows the Lambda -> 1 limit of omega_1
        out[1] = -alpha / abs(alpha) if alpha != 0 else 1.0
        return out
    if alpha == 0:
        out[0] = 1.0
        return out
    t = math.sqrt(1.0 - lam)
    i0 = I_k(alpha, lam, 0)
    log_common = -0.5 * (1.0 - lam) * x - 0.5 * math.log(i0)
    # n = 0 written as t e^{...} to avoid t^-1
    with np.errstate(divide="ignore"):
        log_mod = n * math.log(abs(alpha)) + (n - 1) * math.log(t) - 0.5 * gammaln(n + 1)
    factor = (1.0 - lam) - n * lam
    # Lambda = 1/(n+1) is a root of the n-th coefficient; snap its rounding residue to zero
    factor[np.abs(factor) <= 4.0 * np.finfo(float).eps * (1.0 + n * lam)] = 0.0
    out[:] = np.exp(log_mod + log_common) * factor * np.exp(1j * n * cmath.phase(alpha))
    return out


def spccs_coefficients(params, n_max=None):
    """Fock coefficients, superposition weights and herald probabilities."""
    alpha, lam = params.alpha, params.lam
    needed = adaptive_size(params.transmitted)
    if n_max is None:
        n_max = max(adaptive_size(alpha), needed)
    if n_max < needed:
        raise ValueError(f"n_max={n_max} is below the adaptive truncation {needed}")
    omega = _omega(alpha, lam, n_max)

    p_bs = p_success(params, BS)
    p_pa = p_success(params, PA) if lam < 1.0 else 0.0
    x = params.x
    damp = math.exp(-lam * x / 2.0)
    t = math.sqrt(1.0 - lam)
    c0 = c1 = d0 = d1 = None
    if p_bs > 0:
        c0 = complex(t * damp / math.sqrt(p_bs))
        c1 = complex(-lam * alpha * damp / math.sqrt(p_bs))
    if p_pa > 0:
        d0 = complex((1.0 - lam) * damp / math.sqrt(p_pa))
        d1 = complex(-t * lam * alpha * damp / math.sqrt(p_pa))
    omega.setflags(write=False)
    return AnalyticSPCCS(params, omega, c0, c1, d0, d1, p_bs, p_pa)


def pnd(params, n_max=None):
    """Photon-number distribution |omega_n|^2."""
    return spccs_coefficients(params, n_max).pnd()


def p_success(params, kind=BS):
    """Herald probability: e^{-lam|alpha|^2} I0 for BS, times (1-lam) for PA."""
    kind = check_kind(kind)
    lam = check_lambda(params.lam, kind)
    p = math.exp(-lam * params.x) * I_k(params.alpha, lam, 0)
    if kind == PA:
        p *= 1.0 - lam
    return p


@dataclass(frozen=True)
class MomentSet:
    """Normally ordered moments and derived statistics.

    ``q_mandel`` and ``g2`` are ``None`` when the mean photon number vanishes.
    """

    mean_a: complex
    mean_a2: complex
    n_mean: float
    n2: float
    q_mandel: float | None
    g2: float | None
    var_x: float
    var_p: float
    db_x: float
    db_p: float

    def as_dict(self):
        return {
            "mean_a": self.mean_a,
            "mean_a2": self.mean_a2,
            "n_mean": self.n_mean,
            "n2": self.n2,
            "q_mandel": self.q_mandel,
            "g2": self.g2,
            "var_x": self.var_x,
            "var_p": self.var_p,
            "db_x": self.db_x,
            "db_p": self.db_p,
        }


def moments_from(mean_a, mean_a2, n_mean, n2):
    """Assemble a MomentSet from <a>, <a^2>, <a^dag a>, <a^dag^2 a^2>."""
    mean_a = complex(mean_a)
    mean_a2 = complex(mean_a2)
    n_mean = float(n_mean)
    n2 = float(n2)
    if n_mean > 0:
        q = n2 / n_mean - n_mean
        g2 = n2 / n_mean / n_mean
    else:
        q = g2 = None
    # <a^dag^2> - <a^dag>^2 plus its conjugate is 2 Re(<a^2> - <a>^2)
    coherence = (mean_a2 - mean_a * mean_a).real
    spread = n_mean - abs(mean_a) ** 2 + 0.5
    var_x = spread + coherence
    var_p = spread - coherence
    return MomentSet(
        mean_a=mean_a,
        mean_a2=mean_a2,
        n_mean=n_mean,
        n2=n2,
        q_mandel=q,
        g2=g2,
        var_x=var_x,
        var_p=var_p,
        db_x=10.0 * math.log10(var_x / VACUUM_VARIANCE),
        db_p=10.0 * math.log10(var_p / VACUUM_VARIANCE),
    )


def moments_analytic(params):
    """Moments from the I-polynomial ratios."""
    alpha, lam = params.alpha, params.lam
    if lam == 1.0:
        return moments_from(0.0, 0.0, 1.0, 0.0)
    x = params.x
    i0 = I_k(alpha, lam, 0)
    t = math.sqrt(1.0 - lam)
    ac = alpha.conjugate()
    mean_adag = I_k(alpha, lam, 1) / i0 * t * ac
    mean_adag2 = I_k(alpha, lam, 2) / i0 * (1.0 - lam) * ac * ac
    n_mean = I_k(alpha, lam, 3) / i0 * x
    n2 = I_k(alpha, lam, 4) / i0 * (1.0 - lam) * x * x
    return moments_from(mean_adag.conjugate(), mean_adag2.conjugate(), n_mean, n2)


def wigner_quadratic(params):
    """Coefficients of F(beta)/I0 = A|beta|^2 - 2 Re(conj(b) beta) + C."""
    alpha, lam = params.alpha, params.lam
    if lam == 1.0:
        return 4.0, 0j, -1.0
    x = params.x
    i0 = I_k(alpha, lam, 0)
    t = math.sqrt(1.0 - lam)
    a_coef = 4.0 * lam * lam * x / i0
    b_coef = 2.0 * lam * t * (1.0 + lam * x) * alpha / i0
    c_coef = ((1.0 - lam) - lam * (3.0 * lam - 2.0) * x + lam * lam * (1.0 - lam) * x * x) / i0
    return a_coef, complex(b_coef), c_coef


def wigner_closed(beta, params):
    """Closed-form Wigner function in the d^2 beta measure (unit integral)."""
    beta = np.asarray(beta, dtype=complex)
    a_coef, b_coef, c_coef = wigner_quadratic(params)
    f = a_coef * np.abs(beta) ** 2 - 2.0 * (np.conj(b_coef) * beta).real + c_coef
    gauss = np.exp(-2.0 * np.abs(beta - params.transmitted) ** 2)
    w = (2.0 / math.pi) * f * gauss
    return w if w.ndim else float(w)


_RADIAL_NODES, _RADIAL_WEIGHTS = np.polynomial.legendre.leggauss(96)


def delta_closed(params):
    """Negative volume of the closed-form Wigner function.

    ``F < 0`` exactly on a disc of radius 1/2 centred at ``b/A``, a distance
    ``d = t|alpha| |1 - lam|alpha|^2| / (2 lam |alpha|^2)`` from the Gaussian
    centre. Integrating the envelope over angles in closed form leaves a
    smooth radial integral.
    """
    alpha, lam = params.alpha, params.lam
    x = params.x
    if lam == 0.0 or (x == 0.0 and lam < 1.0):
        return 0.0
    a_coef = wigner_quadratic(params)[0]
    if lam == 1.0:
        d = 0.0
    else:
        d = math.sqrt(1.0 - lam) * abs(alpha) * abs(1.0 - lam * x) / (2.0 * lam * x)
    radius = 0.5
    if d - radius > 30.0:
        # the envelope is below e^-1800 on the whole disc
        return 0.0
    rho = 0.5 * radius * (_RADIAL_NODES + 1.0)
    w = 0.5 * radius * _RADIAL_WEIGHTS
    # angular integral of exp(-2|d + rho e^{i phi}|^2) = 2 pi e^{-2(d^2+rho^2)} I_0(4 d rho)
    angular = 2.0 * math.pi * np.exp(-2.0 * (d - rho) ** 2) * ive(0, 4.0 * d * rho)
    integrand = (2.0 / math.pi) * a_coef * (rho * rho - radius * radius) * angular * rho
    return float(-np.dot(w, integrand))
