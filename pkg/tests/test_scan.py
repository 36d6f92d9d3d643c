import math

import pytest

from spccs import BracketError
from spccs.analytic import CatalysisParams, delta_closed, moments_analytic, p_success
from spccs.devices import PA
from spccs.scan import (
    ScanRequest,
    classify,
    coarse_brackets,
    find_extremum,
    golden_section,
    lambda_grid,
    locate_extremum,
    metric_value,
    scan_metric,
)


def test_lambda_grid_inclusive():
    grid = lambda_grid(0.0, 1.0, 0.1)
    assert len(grid) == 11 and grid[0] == 0.0 and grid[-1] == 1.0
    assert lambda_grid(0.0, 0.25, 0.1)[-1] == 0.25
    with pytest.raises(ValueError):
        lambda_grid(0.5, 0.2, 0.1)
    with pytest.raises(ValueError):
        lambda_grid(0.0, 1.0, 0.0)


def test_classification_boundaries():
    assert classify("q", -0.1) == "sub-poissonian"
    assert classify("q", 0.0) == "boundary"
    assert classify("q", 0.2) == "super-poissonian"
    assert classify("g2", 0.5) == "antibunching"
    assert classify("g2", 1.0) == "boundary"
    assert classify("g2", 1.5) == "bunching"
    assert classify("g2", 2.0) == "boundary"
    assert classify("g2", 2.5) == "superbunching"
    assert classify("var_x", 0.4) == "squeezed"
    assert classify("var_x", 0.5) == "boundary"
    assert classify("db_x", 1.0) == "unsqueezed"
    assert classify("q", None) == "undefined"
    assert classify("delta", 0.1) == ""


def test_request_validation():
    with pytest.raises(ValueError):
        ScanRequest("nonsense", (1.0,))
    with pytest.raises(ValueError):
        ScanRequest("var_x", (1 + 1j,))
    with pytest.raises(ValueError):
        ScanRequest("q", ())
    assert ScanRequest("p_pa", (1.0,), step=0.5).lambdas() == [0.0, 0.5]


@pytest.mark.parametrize("metric", ["q", "g2", "var_x", "db_x", "p_bs"])
def test_endpoint_anchoring(metric):
    rows = scan_metric(ScanRequest(metric, (0.5, 2.0, 3.0), step=0.25))
    start = {r.alpha: r.value for r in rows if r.lam == 0.0}
    end = {r.alpha: r.value for r in rows if r.lam == 1.0}
    coherent_values = {"q": 0.0, "g2": 1.0, "var_x": 0.5, "db_x": 0.0, "p_bs": 1.0}
    for value in start.values():
        assert value == pytest.approx(coherent_values[metric], abs=1e-9)
    fock_values = {"q": -1.0, "g2": 0.0, "var_x": 1.5, "db_x": 10 * math.log10(3)}
    for alpha, value in end.items():
        expected = fock_values.get(metric, abs(alpha) ** 2 * math.exp(-abs(alpha) ** 2))
        assert value == pytest.approx(expected, abs=1e-9)


def test_scan_values_equal_direct_calls():
    rows = scan_metric(ScanRequest("q", (1 + 1j,), step=0.1))
    for r in rows:
        assert r.value == moments_analytic(CatalysisParams(r.alpha, r.lam)).q_mandel
    rows = scan_metric(ScanRequest("delta", (2.0,), 0.05, 0.95, 0.05))
    for r in rows:
        assert r.value == delta_closed(CatalysisParams(r.alpha, r.lam))
    rows = scan_metric(ScanRequest("p_pa", (1.5,), step=0.1))
    assert rows[-1].lam < 1.0
    for r in rows:
        assert r.value == p_success(CatalysisParams(r.alpha, r.lam), PA)


def test_delta_scan_has_single_interior_peak():
    rows = scan_metric(ScanRequest("delta", (2.0,), 0.05, 0.95, 0.05))
    values = [r.value for r in rows]
    peaks = [i for i in range(1, len(values) - 1) if values[i - 1] < values[i] > values[i + 1]]
    assert len(peaks) == 1 and abs(rows[peaks[0]].lam - 0.25) < 0.05


def test_pnd_scan_rows():
    rows = scan_metric(ScanRequest("pnd", (1.0,), 0.0, 0.5, 0.5, n_max=40))
    assert len(rows) == 82
    assert [r.n for r in rows[:3]] == [0, 1, 2]
    assert rows[41 + 1].value == 0.0  # omega_1 vanishes at Lambda = 1/2


def test_golden_section_quadratic():
    x, y, bracket, calls = golden_section(lambda v: (v - 0.3) ** 2, 0.0, 1.0, "min", 1e-8)
    assert x == pytest.approx(0.3, abs=1e-8)
    assert bracket[1] - bracket[0] < 1e-8
    x, _, _, _ = golden_section(lambda v: -((v - 0.7) ** 2), 0.0, 1.0, "max")
    assert x == pytest.approx(0.7, abs=1e-6)


def test_golden_section_rejects_bimodal():
    with pytest.raises(BracketError):
        # a hump at the first interior probe point is a three-point violation
        golden_section(lambda v: math.exp(-(((v - 0.382) / 0.05) ** 2)) - v, 0.0, 1.0, "min")


@pytest.mark.parametrize("alpha,bracket,expected", [(1.0, (0.1, 0.6), 0.322185), (3.0, (0.01, 0.1), 0.0695085)])
def test_squeezing_minimum(alpha, bracket, expected):
    res = find_extremum("var_x", alpha, bracket, "min")
    assert res.lam_star == pytest.approx(expected, abs=1e-4)
    assert res.value == pytest.approx(0.375, abs=1e-6)
    assert res.tolerance < 1e-6
    assert bracket[0] <= res.lam_star <= bracket[1]
    assert res.value == metric_value("var_x", alpha, res.lam_star)
    for offset in (-1e-4, 1e-4):
        assert metric_value("var_x", alpha, res.lam_star + offset) >= res.value


def test_non_unimodal_bracket_raises():
    # the antisqueezing peak at Lambda = 1/9 sits inside this bracket
    with pytest.raises(BracketError):
        find_extremum("var_x", 3.0, (0.01, 0.2), "min")


def test_delta_maximum():
    res = find_extremum("delta", 2.0, (0.05, 0.6), "max")
    assert res.lam_star == pytest.approx(0.25, abs=0.05)
    for offset in (-1e-4, 1e-4):
        assert metric_value("delta", 2.0, res.lam_star + offset) <= res.value


def test_extremum_argument_checks():
    with pytest.raises(ValueError):
        find_extremum("pnd", 1.0, (0.1, 0.2))
    with pytest.raises(ValueError):
        find_extremum("q", 1.0, (0.4, 0.2))


def test_locate_extremum_without_bracket():
    assert locate_extremum("var_x", 3.0, "min").lam_star == pytest.approx(0.0695085, abs=1e-4)
    assert locate_extremum("var_x", 1.0, "min").lam_star == pytest.approx(0.322185, abs=1e-4)
    assert coarse_brackets("p_bs", 0.5, "max")[0][0] == 0.0
