"""Parameter sweeps, region labels and golden-section extremum search."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .analytic import CatalysisParams, delta_closed, moments_analytic, p_success, pnd
from .devices import BS, PA, check_kind
from .errors import BracketError

METRICS = ("q", "g2", "var_x", "db_x", "delta", "p_bs", "p_pa", "pnd")
SCALAR_METRICS = tuple(m for m in METRICS if m != "pnd")
REAL_ALPHA_METRICS = ("var_x", "db_x")

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def check_metric(metric):
    m = str(metric).lower()
    if m not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}, got {metric!r}")
    return m


def metric_value(metric, alpha, lam):
    """Scalar metric at one (alpha, Lambda) point; ``None`` where undefined."""
    metric = check_metric(metric)
    params = CatalysisParams(alpha, lam)
    if metric == "q":
        return moments_analytic(params).q_mandel
    if metric == "g2":
        return moments_analytic(params).g2
    if metric == "var_x":
        return moments_analytic(params).var_x
    if metric == "db_x":
        return moments_analytic(params).db_x
    if metric == "delta":
        return delta_closed(params)
    if metric == "p_bs":
        return p_success(params, BS)
    if metric == "p_pa":
        return p_success(params, PA)
    raise ValueError("pnd is not a scalar metric")


def classify(metric, value):
    """Region label; strict inequalities, equality reported as ``boundary``."""
    if value is None:
        return "undefined"
    if metric == "q":
        if value < 0:
            return "sub-poissonian"
        return "super-poissonian" if value > 0 else "boundary"
    if metric == "g2":
        if value < 1:
            return "antibunching"
        if 1 < value < 2:
            return "bunching"
        return "superbunching" if value > 2 else "boundary"
    if metric == "var_x":
        if value < 0.5:
            return "squeezed"
        return "unsqueezed" if value > 0.5 else "boundary"
    if metric == "db_x":
        if value < 0:
            return "squeezed"
        return "unsqueezed" if value > 0 else "boundary"
    return ""


def lambda_grid(lo, hi, step):
    """Inclusive grid lo, lo+step, ..., hi (the endpoint is kept when it is hit within rounding)."""
    if not (0.0 <= lo <= hi <= 1.0):
        raise ValueError(f"need 0 <= lo <= hi <= 1, got [{lo}, {hi}]")
    if not step > 0:
        raise ValueError(f"step must be positive, got {step}")
    count = int(math.floor((hi - lo) / step + 1e-9))
    grid = lo + step * np.arange(count + 1)
    grid = np.minimum(grid, hi)
    if hi - grid[-1] > 1e-9 * max(1.0, step):
        grid = np.append(grid, hi)
    return [float(g) for g in grid]


@dataclass(frozen=True)
class ScanRequest:
    metric: str
    alphas: tuple
    lo: float = 0.0
    hi: float = 1.0
    step: float = 0.01
    device: str = BS
    n_max: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "metric", check_metric(self.metric))
        object.__setattr__(self, "device", check_kind(self.device))
        alphas = tuple(complex(a) for a in self.alphas)
        if not alphas:
            raise ValueError("at least one alpha is required")
        if self.metric in REAL_ALPHA_METRICS and any(a.imag != 0 or a.real < 0 for a in alphas):
            raise ValueError(f"{self.metric} scans take real nonnegative alpha")
        object.__setattr__(self, "alphas", alphas)
        if not (0.0 <= self.lo <= self.hi <= 1.0) or not self.step > 0:
            raise ValueError(f"invalid Lambda range [{self.lo}, {self.hi}] step {self.step}")

    def lambdas(self):
        grid = lambda_grid(self.lo, self.hi, self.step)
        if self.metric == "p_pa" or (self.metric == "pnd" and self.device == PA):
            grid = [g for g in grid if g < 1.0]
        return grid


@dataclass(frozen=True)
class ScanRow:
    alpha: complex
    lam: float
    value: float | None
    region: str = ""
    n: int | None = None


def scan_metric(request):
    """Dense table, alpha-major then Lambda ascending (then n for ``pnd``)."""
    rows = []
    for alpha in request.alphas:
        for lam in request.lambdas():
            if request.metric == "pnd":
                probs = pnd(CatalysisParams(alpha, lam), request.n_max)
                rows.extend(ScanRow(alpha, lam, float(p), "", n) for n, p in enumerate(probs))
                continue
            value = metric_value(request.metric, alpha, lam)
            rows.append(ScanRow(alpha, lam, value, classify(request.metric, value)))
    return rows


@dataclass(frozen=True)
class ExtremumResult:
    lam_star: float
    value: float
    kind: str
    bracket: tuple
    tolerance: float
    evaluations: int = field(default=0, compare=False)


def _check_unimodal(points, values, kind):
    sign = 1.0 if kind == "min" else -1.0
    v = [sign * y for y in values]
    for i in range(1, len(v) - 1):
        if v[i] > v[i - 1] and v[i] > v[i + 1]:
            raise BracketError(
                f"bracket [{points[0]:.6g}, {points[-1]:.6g}] is not unimodal for a {kind}: "
                f"interior point {points[i]:.6g} is a local {'max' if kind == 'min' else 'min'}"
            )


def golden_section(func, lo, hi, kind="min", tol=1e-6):
    """Golden-section search on ``[lo, hi]``; returns (x, f(x), final bracket, evaluations).

    Every iteration checks its four points for a three-point violation of
    unimodality and raises :class:`BracketError` when one is found.
    """
    if kind not in ("min", "max"):
        raise ValueError(f"kind must be 'min' or 'max', got {kind!r}")
    if not lo < hi:
        raise ValueError(f"empty bracket [{lo}, {hi}]")
    sign = 1.0 if kind == "min" else -1.0
    calls = 0

    def f(x):
        nonlocal calls
        calls += 1
        y = func(x)
        if y is None:
            raise BracketError(f"metric undefined at Lambda={x:.6g}")
        return y

    a, b = lo, hi
    fa, fb = f(a), f(b)
    c = a + INV_PHI2 * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a >= tol:
        _check_unimodal((a, c, d, b), (fa, fc, fd, fb), kind)
        if sign * fc < sign * fd:
            b, fb = d, fd
            d, fd = c, fc
            c = a + INV_PHI2 * (b - a)
            fc = f(c)
        else:
            a, fa = c, fc
            c, fc = d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    candidates = [(a, fa), (c, fc), (d, fd), (b, fb)]
    x_best, y_best = min(candidates, key=lambda p: sign * p[1])
    return x_best, y_best, (a, b), calls


def find_extremum(metric, alpha, bracket, kind="min", tol=1e-6):
    """Locate the extremum of a scalar metric in Lambda on a caller-supplied bracket."""
    metric = check_metric(metric)
    if metric == "pnd":
        raise ValueError("pnd has no scalar extremum")
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (0.0 <= lo < hi <= 1.0):
        raise ValueError(f"bracket must satisfy 0 <= lo < hi <= 1, got {bracket}")
    x, y, final, calls = golden_section(lambda lam: metric_value(metric, alpha, lam), lo, hi, kind, tol)
    # report the metric at the returned point exactly
    y = metric_value(metric, alpha, x)
    return ExtremumResult(x, y, kind, (lo, hi), final[1] - final[0], calls)


def coarse_brackets(metric, alpha, kind="min", lo=0.0, hi=1.0, points=200):
    """Brackets around interior local extrema of a ``points``-sized grid.

    Falls back to the bracket around the global best grid value when the grid
    has no interior local extremum (monotone metric).
    """
    metric = check_metric(metric)
    if metric == "p_pa":
        hi = min(hi, 1.0 - 1e-9)
    grid = np.linspace(lo, hi, points)
    sign = 1.0 if kind == "min" else -1.0
    values = []
    for lam in grid:
        v = metric_value(metric, alpha, float(lam))
        values.append(math.inf if v is None else sign * v)
    brackets = [
        (float(grid[i - 1]), float(grid[i + 1]))
        for i in range(1, points - 1)
        if values[i] <= values[i - 1] and values[i] <= values[i + 1] and math.isfinite(values[i])
    ]
    if not brackets:
        best = int(np.argmin(values))
        brackets = [(float(grid[max(best - 1, 0)]), float(grid[min(best + 1, points - 1)]))]
    return brackets


def locate_extremum(metric, alpha, kind="min", lo=0.0, hi=1.0, points=200, tol=1e-6):
    """Refine every coarse bracket and keep the best extremum (smallest Lambda on ties)."""
    sign = 1.0 if kind == "min" else -1.0
    results = [find_extremum(metric, alpha, br, kind, tol) for br in coarse_brackets(metric, alpha, kind, lo, hi, points)]
    best = min(sign * r.value for r in results)
    scale = max(abs(best), 1.0)
    return min((r for r in results if sign * r.value <= best + 1e-12 * scale), key=lambda r: r.lam_star)
