"""Command-line interface.

    spccs state   --alpha 1,0 --lambda 0.7
    spccs prob    --alpha 0:3:0.25 --lambda 0:1:0.05
    spccs pnd     --alpha 1 --lambda 0.7
    spccs metrics --alpha 2 --lambda 0:1:0.1
    spccs scan    --metric q --alpha 2 --lambda 0:1:0.01
    spccs extremum --metric var_x --alpha 1 --kind min
    spccs wigner  --alpha 2,0 --lambda 0.25
    spccs delta   --alpha 1,1 --lambda 0.5
    spccs verify  [--device pa] [--lambda 0.9] [--tol 1e-9]

Alpha accepts ``re,im``, ``mag@deg``, a real number, or a real range
``lo:hi:step``; Lambda accepts a number or ``lo:hi:step``. Output is CSV
(12 significant digits, ``#`` metadata lines, one header row) or JSON
matching ``schema/output.schema.json``.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .analytic import CatalysisParams, delta_closed, moments_analytic, p_success, spccs_coefficients, wigner_closed
from .devices import BS, DEVICE_KINDS, PA, catalyze_numeric
from .errors import SpccsError
from .fock import TruncationPolicy
from .phase_space import DEFAULT_STEP, PhaseSpaceRegion, negativity_volume, wigner_numeric
from .scan import METRICS, ScanRequest, find_extremum, locate_extremum, scan_metric
from .verify import DEFAULT_ALPHAS, DEFAULT_LAMBDAS, DEFAULT_TOL, all_passed, run_verify, summary_line

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2

SIG_DIGITS = 12
WIGNER_STEP = 0.1
# the Fock-kernel Wigner costs O(N^2) per point, so the numeric delta integrates coarser
NUMERIC_DELTA_STEP = 0.1
WIGNER_EXTENT = 5.0


# ---------------------------------------------------------------- parsing


def _range(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"range must be lo:hi:step, got {text!r}")
    lo, hi, step = (float(p) for p in parts)
    if not step > 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    count = int(math.floor((hi - lo) / step + 1e-9))
    values = [lo + step * k for k in range(count + 1)]
    if hi - values[-1] > 1e-9 * max(1.0, step):
        values.append(hi)
    return [min(v, hi) for v in values]


def parse_alpha(text):
    """Parse one alpha token into a list of complex amplitudes."""
    text = text.strip()
    try:
        if ":" in text:
            return [complex(v) for v in _range(text)]
        if "@" in text:
            mag, deg = text.split("@")
            return [cmath.rect(float(mag), math.radians(float(deg)))]
        if "," in text:
            re_, im_ = text.split(",")
            return [complex(float(re_), float(im_))]
        return [complex(float(text))]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse alpha {text!r}: {exc}") from None


def format_alpha(alpha):
    return f"{_fmt(alpha.real)},{_fmt(alpha.imag)}"


def parse_lambda(text):
    text = text.strip()
    try:
        values = _range(text) if ":" in text else [float(text)]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse lambda {text!r}: {exc}") from None
    if any(not 0.0 <= v <= 1.0 for v in values):
        raise argparse.ArgumentTypeError(f"lambda must lie in [0, 1], got {text!r}")
    return values


def parse_bracket(text):
    try:
        lo, hi = (float(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bracket must be lo:hi, got {text!r}") from None
    return lo, hi


def _flatten(groups, default):
    if not groups:
        return list(default)
    return [v for group in groups for v in group]


# ---------------------------------------------------------------- output


def _fmt(value):
    if value is None:
        return "undefined"
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if v == 0.0:
        v = 0.0  # drop negative zero
    return format(v, f".{SIG_DIGITS}g")


def _json_value(value):
    if value is None or isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    v = float(value)
    return float(format(v if v != 0.0 else 0.0, f".{SIG_DIGITS}g"))


class Table:
    def __init__(self, command, columns, meta=None):
        self.command = command
        self.columns = list(columns)
        self.meta = dict(meta or {})
        self.rows = []
        self.exit_code = EXIT_OK

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError("row width does not match columns")
        self.rows.append(values)

    def to_csv(self):
        buf = io.StringIO()
        for key, value in self.meta.items():
            buf.write(f"# {key}={_fmt(value)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_fmt(v) for v in row])
        return buf.getvalue()

    def to_json(self):
        doc = {
            "command": self.command,
            "version": __version__,
            "meta": {k: _json_value(v) for k, v in self.meta.items()},
            "columns": self.columns,
            "rows": [[_json_value(v) for v in row] for row in self.rows],
        }
        return json.dumps(doc, indent=1) + "\n"

    def render(self, fmt):
        return self.to_json() if fmt == "json" else self.to_csv()


def write_output(text, path):
    """Write to ``path`` atomically (temp file then rename), or to stdout."""
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".spccs-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------- commands


def _policy(args):
    return TruncationPolicy.fixed(args.trunc) if args.trunc is not None else TruncationPolicy()


def _single(values, name):
    if len(values) != 1:
        raise ValueError(f"{name} takes exactly one value here, got {len(values)}")
    return values[0]


def cmd_state(args):
    alpha = _single(_flatten(args.alpha, [1.0]), "--alpha")
    lam = _single(_flatten(args.lam, [0.5]), "--lambda")
    state = spccs_coefficients(CatalysisParams(alpha, lam), args.trunc)
    meta = {"alpha": format_alpha(alpha), "lambda": lam, "p_bs": state.p_bs, "p_pa": state.p_pa}
    for name in ("c0", "c1", "d0", "d1"):
        value = getattr(state, name)
        meta[f"{name}_re"] = None if value is None else value.real
        meta[f"{name}_im"] = None if value is None else value.imag
    table = Table("state", ["n", "prob", "re", "im"], meta)
    for n, w in enumerate(state.omega):
        table.add(n, abs(w) ** 2, w.real, w.imag)
    return table


def cmd_prob(args):
    alphas = _flatten(args.alpha, [complex(v) for v in _range("0:3:0.25")])
    lams = _flatten(args.lam, _range("0:1:0.05"))
    table = Table("prob", ["abs_alpha", "lambda", "p_bs", "p_pa"])
    for alpha in alphas:
        for lam in lams:
            params = CatalysisParams(abs(alpha), lam)
            p_bs = p_success(params, BS)
            p_pa = p_success(params, PA) if lam < 1.0 else 0.0
            table.add(abs(alpha), lam, p_bs, p_pa)
    return table


def cmd_pnd(args):
    alphas = _flatten(args.alpha, [1.0])
    lams = _flatten(args.lam, [0.0, 0.7])
    table = Table("pnd", ["alpha_re", "alpha_im", "lambda", "n", "prob"])
    for alpha in alphas:
        for lam in lams:
            state = spccs_coefficients(CatalysisParams(alpha, lam), args.trunc)
            for n, p in enumerate(state.pnd()):
                table.add(alpha.real, alpha.imag, lam, n, p)
    return table


METRIC_COLUMNS = ["alpha_re", "alpha_im", "lambda", "n_mean", "n2", "q_mandel", "g2", "var_x", "var_p",
                  "db_x", "db_p", "mean_a_re", "mean_a_im", "mean_a2_re", "mean_a2_im"]


def cmd_metrics(args):
    alphas = _flatten(args.alpha, [1.0])
    lams = _flatten(args.lam, _range("0:1:0.1"))
    table = Table("metrics", METRIC_COLUMNS)
    for alpha in alphas:
        for lam in lams:
            m = moments_analytic(CatalysisParams(alpha, lam))
            table.add(alpha.real, alpha.imag, lam, m.n_mean, m.n2, m.q_mandel, m.g2, m.var_x, m.var_p,
                      m.db_x, m.db_p, m.mean_a.real, m.mean_a.imag, m.mean_a2.real, m.mean_a2.imag)
    return table


def cmd_scan(args):
    alphas = _flatten(args.alpha, [1.0, 2.0, 3.0])
    lams = _flatten(args.lam, _range("0:1:0.01"))
    lo, hi = min(lams), max(lams)
    step = (lams[1] - lams[0]) if len(lams) > 1 else 1.0
    request = ScanRequest(args.metric, tuple(alphas), lo, hi, step, args.device, args.trunc)
    pnd_metric = request.metric == "pnd"
    columns = ["alpha_re", "alpha_im", "lambda"] + (["n"] if pnd_metric else []) + ["value", "region"]
    table = Table("scan", columns, {"metric": request.metric, "device": request.device})
    for row in scan_metric(request):
        lead = [row.alpha.real, row.alpha.imag, row.lam] + ([row.n] if pnd_metric else [])
        table.add(*lead, row.value, row.region)
    return table


def cmd_extremum(args):
    alpha = _single(_flatten(args.alpha, [1.0]), "--alpha")
    if args.bracket is not None:
        result = find_extremum(args.metric, alpha, args.bracket, args.kind)
    else:
        result = locate_extremum(args.metric, alpha, args.kind)
    table = Table("extremum", ["metric", "alpha_re", "alpha_im", "kind", "lambda_star", "value",
                               "bracket_lo", "bracket_hi", "tolerance"])
    table.add(args.metric, alpha.real, alpha.imag, result.kind, result.lam_star, result.value,
              result.bracket[0], result.bracket[1], result.tolerance)
    return table


def _wigner_evaluator(args, alpha, lam):
    params = CatalysisParams(alpha, lam)
    if args.path == "numeric":
        state = catalyze_numeric(alpha, lam, args.device, _policy(args)).state
        return params, (lambda beta: wigner_numeric(state, beta))
    return params, (lambda beta: wigner_closed(beta, params))


def cmd_wigner(args):
    alpha = _single(_flatten(args.alpha, [2.0]), "--alpha")
    lam = _single(_flatten(args.lam, [0.25]), "--lambda")
    step = args.step if args.step is not None else WIGNER_STEP
    _, evaluator = _wigner_evaluator(args, alpha, lam)
    count = int(round(2 * args.extent / step))
    axis = -args.extent + step * np.arange(count + 1)
    q, p = np.meshgrid(axis, axis, indexing="ij")
    w = evaluator((q + 1j * p) / math.sqrt(2.0))
    table = Table("wigner", ["q", "p", "W"], {"alpha": format_alpha(alpha), "lambda": lam, "path": args.path,
                                               "min_W": float(w.min()), "max_W": float(w.max())})
    for qi, pi, wi in zip(q.ravel(), p.ravel(), w.ravel()):
        table.add(qi, pi, wi)
    return table


def cmd_delta(args):
    alpha = _single(_flatten(args.alpha, [1 + 1j]), "--alpha")
    lam = _single(_flatten(args.lam, [0.5]), "--lambda")
    if args.step is not None:
        step = args.step
    else:
        step = NUMERIC_DELTA_STEP if args.path == "numeric" else DEFAULT_STEP
    params, evaluator = _wigner_evaluator(args, alpha, lam)
    n_max = args.trunc if args.trunc is not None else spccs_coefficients(params).omega.size - 1
    region = PhaseSpaceRegion.for_catalysis(alpha, lam, n_max, step)
    result = negativity_volume(evaluator, region)
    table = Table("delta", ["alpha_re", "alpha_im", "lambda", "path", "delta", "abs_integral",
                            "signed_integral", "error_estimate", "delta_exact"],
                  {"region_center": format_alpha(region.center), "region_radius": region.radius, "step": step})
    table.add(alpha.real, alpha.imag, lam, args.path, result.delta, result.abs_integral,
              result.signed_integral, result.error_estimate, delta_closed(params))
    return table


def cmd_verify(args):
    alphas = _flatten(args.alpha, DEFAULT_ALPHAS)
    lams = _flatten(args.lam, DEFAULT_LAMBDAS)
    devices = (args.device,) if args.device else DEVICE_KINDS
    results = run_verify(alphas, lams, devices, args.tol, policy=_policy(args))
    table = Table("verify", ["check", "alpha_re", "alpha_im", "lambda", "device", "value", "threshold", "passed"],
                  {"passed": all_passed(results), "checks": len(results)})
    for r in results:
        table.add(r.name, r.alpha.real, r.alpha.imag, r.lam, r.device, r.value, r.threshold, r.passed)
        print(summary_line(r), file=sys.stderr)
    table.exit_code = EXIT_OK if all_passed(results) else EXIT_VERIFY_FAILED
    return table


COMMANDS = {
    "state": (cmd_state, "Fock coefficients and superposition weights"),
    "prob": (cmd_prob, "herald success probabilities over (|alpha|, Lambda)"),
    "pnd": (cmd_pnd, "photon-number distributions"),
    "metrics": (cmd_metrics, "moments, Mandel Q, g2, quadrature variances"),
    "scan": (cmd_scan, "sweep one metric over Lambda with region labels"),
    "extremum": (cmd_extremum, "golden-section extremum of a metric in Lambda"),
    "wigner": (cmd_wigner, "Wigner function on a (q, p) grid"),
    "delta": (cmd_delta, "negative volume of the Wigner function"),
    "verify": (cmd_verify, "closed forms against the Fock-space oracle"),
}


def build_parser():
    parser = argparse.ArgumentParser(prog="spccs", description="Single-photon catalyzed coherent states.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", action="append", type=parse_alpha, metavar="A",
                        help="re,im | mag@deg | x | lo:hi:step (repeatable)")
    common.add_argument("--lambda", dest="lam", action="append", type=parse_lambda, metavar="L",
                        help="catalysis parameter x or lo:hi:step (repeatable)")
    common.add_argument("--device", choices=DEVICE_KINDS, default=None)
    common.add_argument("--trunc", type=int, default=None, metavar="N", help="fixed Fock truncation (default adaptive)")
    common.add_argument("--step", type=float, default=None,
                        help=(f"delta integration step in beta units (default {DEFAULT_STEP}, {NUMERIC_DELTA_STEP} on the numeric path); "
                              f"wigner grid step in q,p (default {WIGNER_STEP})"))
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, metavar="PATH", help="output file (default stdout)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="verify tolerance")

    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name in ("scan", "extremum"):
            p.add_argument("--metric", required=True, choices=METRICS if name == "scan" else
                           tuple(m for m in METRICS if m != "pnd"))
        if name == "extremum":
            p.add_argument("--kind", choices=("min", "max"), default="min")
            p.add_argument("--bracket", type=parse_bracket, default=None, metavar="LO:HI")
        if name in ("wigner", "delta"):
            p.add_argument("--path", choices=("closed", "numeric"), default="closed")
        if name == "wigner":
            p.add_argument("--extent", type=float, default=WIGNER_EXTENT, help="half-width of the q and p axes")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.device is None and args.command != "verify":
        args.device = BS
    handler = COMMANDS[args.command][0]
    try:
        table = handler(args)
    except SpccsError as exc:
        print(f"spccs {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"spccs {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    write_output(table.render(args.format), args.out)
    return table.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
