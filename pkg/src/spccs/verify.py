"""Closed form versus brute-force oracle, check by check."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import analytic
from .analytic import CatalysisParams, moments_analytic, p_success, spccs_coefficients
from .devices import BS, DEVICE_KINDS, catalyze_numeric
from .fock import fidelity, moment
from .phase_space import wigner_numeric

DEFAULT_ALPHAS = (0.5, 1.0, 2.0, 1 + 1j)
DEFAULT_LAMBDAS = (0.1, 0.3, 0.5, 0.7, 0.9)
DEFAULT_TOL = 1e-9
WIGNER_TOL = 1e-7
WIGNER_HALF_WIDTH = 3.0
WIGNER_POINTS = 61


@dataclass(frozen=True)
class CheckResult:
    name: str
    alpha: complex
    lam: float
    device: str
    value: float
    threshold: float
    passed: bool


def wigner_grid(params, half_width=WIGNER_HALF_WIDTH, points=WIGNER_POINTS):
    """Square beta grid centred on the coherent component."""
    axis = np.linspace(-half_width, half_width, points)
    return params.transmitted + axis[:, None] + 1j * axis[None, :]


def _check(results, name, params, device, value, threshold, larger_is_worse=True):
    passed = value <= threshold if larger_is_worse else value >= threshold
    results.append(CheckResult(name, params.alpha, params.lam, device, float(value), threshold, bool(passed)))


def verify_point(alpha, lam, devices=DEVICE_KINDS, tol=DEFAULT_TOL, wigner_tol=WIGNER_TOL,
                 wigner_closed=analytic.wigner_closed, policy=None):
    """All cross-path checks at one (alpha, Lambda)."""
    params = CatalysisParams(alpha, lam)
    closed = spccs_coefficients(params)
    closed_state = closed.as_fock()
    results = []
    oracle = {}
    for kind in devices:
        herald = catalyze_numeric(alpha, lam, kind, policy)
        oracle[kind] = herald.state
        _check(results, "fidelity_closed", params, kind, 1.0 - fidelity(herald.state, closed_state), tol)
        _check(results, "probability", params, kind, abs(herald.probability - p_success(params, kind)), tol)
    if len(oracle) == 2:
        _check(results, "fidelity_bs_pa", params, "bs|pa", 1.0 - fidelity(oracle["bs"], oracle["pa"]), tol)

    mom = moments_analytic(params)
    pairs = (
        ("moment_a", moment(closed_state, 0, 1), mom.mean_a),
        ("moment_a2", moment(closed_state, 0, 2), mom.mean_a2),
        ("moment_n", moment(closed_state, 1, 1), mom.n_mean),
        ("moment_n2", moment(closed_state, 2, 2), mom.n2),
    )
    for name, direct, closed_form in pairs:
        _check(results, name, params, "closed", abs(direct - closed_form), tol)

    if BS in oracle:
        reference = oracle[BS]
    else:
        reference = next(iter(oracle.values()), closed_state)
    grid = wigner_grid(params)
    gap = float(np.max(np.abs(wigner_closed(grid, params) - wigner_numeric(reference, grid))))
    _check(results, "wigner_pointwise", params, next(iter(oracle), "closed"), gap, wigner_tol)
    return results


def run_verify(alphas=DEFAULT_ALPHAS, lambdas=DEFAULT_LAMBDAS, devices=DEVICE_KINDS, tol=DEFAULT_TOL,
               wigner_tol=WIGNER_TOL, wigner_closed=analytic.wigner_closed, policy=None):
    results = []
    for alpha in alphas:
        for lam in lambdas:
            results.extend(verify_point(alpha, lam, devices, tol, wigner_tol, wigner_closed, policy))
    return results


def all_passed(results):
    return all(r.passed for r in results) and bool(results)


def summary_line(r):
    mark = "PASS" if r.passed else "FAIL"
    return (f"{mark} {r.name:<17} alpha={r.alpha.real:g}{r.alpha.imag:+g}j lambda={r.lam:g} "
            f"device={r.device} value={r.value:.3e} threshold={r.threshold:.1e}")

