"""Acceptance criteria 1-9, one PASS/FAIL line each (see the terminal summary)."""

import math

import numpy as np
import pytest

from spccs import (
    CatalysisParams,
    I_k,
    PhaseSpaceRegion,
    bs_apply,
    catalyze_numeric,
    coherent,
    delta_closed,
    fidelity,
    find_extremum,
    fock,
    moment,
    moments_analytic,
    negativity_volume,
    p_success,
    pa_apply,
    pnd,
    spccs_coefficients,
    tensor,
    wigner_closed,
    wigner_numeric,
)
from spccs.devices import BS, PA
from spccs.fock import TwoModeFockMatrix
from spccs.scan import locate_extremum
from spccs.verify import wigner_grid

pytestmark = pytest.mark.acceptance

ALPHAS = (0.5, 1.0, 2.0, 3.0, 1 + 1j, 2.7)
LAMBDAS = (0.1, 0.3, 0.5, 0.7, 0.9)
GRID = [(a, lam) for a in ALPHAS for lam in LAMBDAS]
NEGATIVE_CASES = ((1 + 1j, 0.5), (2.0, 0.25), (2.7, 0.125))


@pytest.fixture(scope="module")
def oracle():
    """BS and PA heralded outputs over the criterion-1 grid, computed once."""
    return {(a, lam, kind): catalyze_numeric(a, lam, kind) for a, lam in GRID for kind in (BS, PA)}


def test_criterion_1_bs_pa_equivalence(oracle, report):
    worst = 0.0
    for a, lam in GRID:
        closed = spccs_coefficients(CatalysisParams(a, lam)).as_fock()
        bs = oracle[(a, lam, BS)].state
        pa = oracle[(a, lam, PA)].state
        worst = max(worst, 1 - fidelity(bs, pa), 1 - fidelity(bs, closed), 1 - fidelity(pa, closed))
    report("1 BS/PA/closed-form equivalence", worst <= 1e-9, f"max infidelity {worst:.2e} (tol 1e-9)")


def test_criterion_2_success_probabilities(oracle, report):
    worst = 0.0
    for a, lam in GRID:
        params = CatalysisParams(a, lam)
        worst = max(worst, abs(oracle[(a, lam, BS)].probability - p_success(params, BS)))
        worst = max(worst, abs(oracle[(a, lam, PA)].probability - p_success(params, PA)))
    endpoints = all(I_k(a, 0.0, 0) == 1.0 and I_k(a, 1.0, 0) == abs(complex(a)) ** 2 for a in ALPHAS)
    report("2 herald probabilities", worst <= 1e-9 and endpoints,
           f"max |p_oracle - p_closed| {worst:.2e} (tol 1e-9); I0 endpoints exact: {endpoints}")


def test_criterion_3_statistics_endpoints(report):
    worst = 0.0
    worst_db = 0.0
    for a in (0.5, 1.0, 2.0, 3.0, 1 + 1j, 2.7):
        m0 = moments_analytic(CatalysisParams(a, 0.0))
        m1 = moments_analytic(CatalysisParams(a, 1.0))
        worst = max(worst, abs(m0.q_mandel), abs(m0.g2 - 1), abs(m0.var_x - 0.5), abs(m0.var_p - 0.5))
        worst = max(worst, abs(m1.q_mandel + 1), abs(m1.g2), abs(m1.var_x - 1.5))
        worst_db = max(worst_db, abs(m0.db_x), abs(m1.db_x - 10 * math.log10(3)))
    report("3 statistics endpoints", worst <= 1e-9 and worst_db <= 1e-6,
           f"max error {worst:.2e} (tol 1e-9), dB error {worst_db:.2e} (tol 1e-6)")


def test_criterion_4_squeezing_extrema(report):
    cases = ((1.0, (0.1, 0.6), 0.322185), (2.0, (0.05, 0.2), 0.129649), (3.0, (0.01, 0.1), 0.0695085))
    lam_err = val_err = 0.0
    for a, bracket, expected in cases:
        res = find_extremum("var_x", a, bracket, "min")
        lam_err = max(lam_err, abs(res.lam_star - expected))
        val_err = max(val_err, abs(res.value - 0.375))
    anti = max(abs(moments_analytic(CatalysisParams(2.0, 0.25)).var_x - 1.5),
               abs(moments_analytic(CatalysisParams(3.0, 1 / 9)).var_x - 1.5))
    ok = lam_err <= 1e-4 and val_err <= 1e-6 and anti <= 1e-6
    report("4 squeezing extrema", ok,
           f"Lambda* error {lam_err:.2e} (tol 1e-4), value error {val_err:.2e}, antisqueezing error {anti:.2e} (tol 1e-6)")


def test_criterion_5_moment_closed_forms(report):
    worst = 0.0
    for a, lam in GRID:
        params = CatalysisParams(a, lam)
        state = spccs_coefficients(params).as_fock()
        m = moments_analytic(params)
        worst = max(worst,
                    abs(moment(state, 0, 1) - m.mean_a),
                    abs(moment(state, 0, 2) - m.mean_a2),
                    abs(moment(state, 1, 1) - m.n_mean),
                    abs(moment(state, 2, 2) - m.n2))
    report("5 moment closed forms", worst <= 1e-9, f"max moment gap {worst:.2e} (tol 1e-9)")


def test_criterion_6_wigner_cross_path(report):
    gap = 0.0
    minima = []
    for a, lam in NEGATIVE_CASES:
        params = CatalysisParams(a, lam)
        grid = wigner_grid(params)
        state = catalyze_numeric(a, lam, BS).state
        closed = wigner_closed(grid, params)
        gap = max(gap, float(np.max(np.abs(closed - wigner_numeric(state, grid)))))
        minima.append(float(closed.min()))
    ok = gap <= 1e-7 and all(m < 0 for m in minima)
    report("6 Wigner cross-path", ok,
           f"max pointwise gap {gap:.2e} (tol 1e-7); min W {', '.join(f'{m:.4f}' for m in minima)}")


def test_criterion_7_negativity_volume(report):
    plain = CatalysisParams(1.5, 0.0)
    region = PhaseSpaceRegion.for_catalysis(1.5, 0.0, spccs_coefficients(plain).omega.size - 1)
    coh = coherent(0.5)
    d_coh = max(negativity_volume(lambda b: wigner_closed(b, plain), region).delta,
                negativity_volume(lambda b: wigner_numeric(coh, b), PhaseSpaceRegion.for_state(coh, step=0.1)).delta)
    one = fock(1)
    d_one = negativity_volume(lambda b: wigner_numeric(one, b), PhaseSpaceRegion.for_state(one)).delta
    exact = 2 * math.exp(-0.5) - 1
    peaks = {a: locate_extremum("delta", a, "max").lam_star for a, _ in NEGATIVE_CASES}
    peak_ok = all(abs(peaks[a] - lam) <= 0.05 for a, lam in NEGATIVE_CASES)
    ok = abs(d_coh) <= 1e-8 and abs(d_one - exact) <= 5e-6 and peak_ok
    report("7 negativity volume", ok,
           f"delta(coherent) {d_coh:.1e}, |delta(|1>) - (2e^-1/2 - 1)| {abs(d_one - exact):.1e}, "
           f"peaks {', '.join(f'{peaks[a]:.3f}' for a, _ in NEGATIVE_CASES)}")


def test_criterion_8_property_suites(report):
    norm_err = 0.0
    unc_min = math.inf
    for a in ALPHAS:
        for lam in np.linspace(0.0, 1.0, 41):
            params = CatalysisParams(a, float(lam))
            norm_err = max(norm_err, abs(pnd(params).sum() - 1))
            m = moments_analytic(params)
            unc_min = min(unc_min, m.var_x * m.var_p - 0.25)

    signed_err = 0.0
    for a, lam in NEGATIVE_CASES + ((0.0, 1.0), (3.0, 0.07)):
        params = CatalysisParams(a, lam)
        size = spccs_coefficients(params).omega.size - 1
        region = PhaseSpaceRegion.for_catalysis(a, lam, size)
        res = negativity_volume(lambda b: wigner_closed(b, params), region)
        signed_err = max(signed_err, abs(res.signed_integral - 1))

    cov = 0.0
    for a, lam in ((1.3, 0.2), (2.0, 0.6)):
        ref = CatalysisParams(a, lam)
        for phi in (0.7, 2.0, -2.9):
            rot = CatalysisParams(a * np.exp(1j * phi), lam)
            mr, mt = moments_analytic(ref), moments_analytic(rot)
            cov = max(cov, float(np.max(np.abs(pnd(ref) - pnd(rot)))),
                      abs(mr.q_mandel - mt.q_mandel), abs(mr.g2 - mt.g2),
                      abs(p_success(ref) - p_success(rot)), abs(p_success(ref, PA) - p_success(rot, PA)),
                      abs(delta_closed(ref) - delta_closed(rot)))

    roots = spccs_coefficients(CatalysisParams(1.3, 0.5)).omega[1] == 0
    for n in (2, 3, 5):
        probs = pnd(CatalysisParams(1.7, 1.0 / (n + 1)))
        roots = roots and probs[n] == 0.0
    ok = norm_err <= 1e-12 and signed_err <= 1e-6 and unc_min >= -1e-12 and cov <= 1e-6 and roots
    report("8 property suites", ok,
           f"PND norm {norm_err:.1e}, signed W {signed_err:.1e}, min(dX2 dP2 - 1/4) {unc_min:.1e}, "
           f"phase covariance {cov:.1e}, coefficient roots exact: {roots}")


def test_criterion_9_device_oracle_sanity(report):
    hom = bs_apply(tensor(fock(1), fock(1)), math.pi / 4).amplitudes
    target = np.zeros_like(hom)
    target[2, 0], target[0, 2] = 1 / math.sqrt(2), -1 / math.sqrt(2)
    hom_err = float(np.max(np.abs(hom - target)))

    vac = TwoModeFockMatrix(np.ones((1, 1), dtype=complex))
    tmsv_err = 0.0
    for lam in (0.1, 0.5, 1.0, 1.5):
        out = pa_apply(vac, lam).amplitudes
        n = np.arange(min(out.shape))
        expected = np.tanh(lam) ** n / np.cosh(lam)
        diag = np.array([out[k, k] for k in n])
        off = out.copy()
        off[n, n] = 0
        tmsv_err = max(tmsv_err, float(np.max(np.abs(diag - expected))), float(np.max(np.abs(off))))
    ok = hom_err <= 1e-12 and tmsv_err <= 1e-10
    report("9 device oracle sanity", ok, f"HOM error {hom_err:.1e} (tol 1e-12), TMSV error {tmsv_err:.1e} (tol 1e-10)")
