"""Command-line front end.

Exit codes: 0 success, 1 usage or space-description error, 2 numerical or
degenerate-measure error. Every report embeds the configuration that produced it.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
import traceback

import numpy as np

from .covering import build_cover, default_probes, guaranteed_overlap_bound, measure_overlap
from .criteria import EmbeddingQuery, ThetaScan, classify, theta_scan
from .doubling import doubling_constant, fit_exponents, write_measure_rows
from .errors import BudgetExceededError, DegenerateMeasureError, FitFailureError, SobembedError
from .poincare import DiscreteField, bump_certificate, check_pi
from .scenarios import SCENARIOS, run_scenario
from .spaces import BallSpec, SpaceModel, sample_region

THREADS_ENV = "SOBEMBED_THREADS"

CSV_HELP = """CSV columns:
  cover build   x0..x{d-1}, overlap          (per-probe overlap counts)
  dims fit      x0..x{d-1}, r, measure, error
  doubling      x0..x{d-1}, r, measure, error
  theta scan    r, theta, profile, rel_error
  pi check      field CSV input: x0..x{d-1}, u[, g]
Lines starting with '#' in CSV output carry the run configuration as JSON."""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_radii(spec):
    """'start:end:count' -> strictly decreasing log-spaced grid."""
    try:
        a, b, n = spec.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise UsageError(f"radius grid must look like start:end:count, got {spec!r}") from None
    if not (a > b > 0 and n >= 2):
        raise UsageError("radius grid must be strictly decreasing with positive ends and count >= 2")
    return np.geomspace(a, b, n)


def parse_points(spec):
    """'x,y;x,y' -> (k, d) array."""
    try:
        return np.array([[float(c) for c in p.split(",")] for p in spec.split(";") if p.strip()])
    except ValueError:
        raise UsageError(f"cannot parse points {spec!r}; use 'x,y;x,y'") from None


def read_points_csv(path):
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    try:
        float(rows[0][0])
    except (ValueError, IndexError):
        rows = rows[1:]
    return np.array([[float(c) for c in r] for r in rows])


def _space(args):
    if not getattr(args, "space", None):
        raise UsageError("--space is required")
    return SpaceModel.from_json(args.space)


def _E(args, space, default=None):
    if getattr(args, "E", None):
        pts = parse_points(args.E)
    elif getattr(args, "E_file", None):
        pts = read_points_csv(args.E_file)
    elif getattr(args, "sample", None):
        pts = sample_region(space, n=args.sample, seed=args.seed)
    elif default is not None:
        pts = np.asarray(default, float)
    else:
        raise UsageError("give centres with --E, --E-file or --sample")
    if pts.ndim != 2 or pts.shape[1] != space.dim:
        raise UsageError(f"centres must have dimension {space.dim}")
    return pts


def _config(args):
    skip = {"func", "debug", "out", "threads"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _csv_text(header, rows, config):
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()


def _clean(x):
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (float, np.floating)):
        return "inf" if math.isinf(x) else float(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _json_text(report, config):
    return json.dumps(_clean({"config": config, **report}), indent=2, sort_keys=True) + "\n"


def _text(report, config):
    lines = [f"config: {json.dumps(config, sort_keys=True)}"]
    for k, v in _clean(report).items():
        lines.append(f"{k}: {json.dumps(v) if isinstance(v, (dict, list)) else v}")
    return "\n".join(lines) + "\n"


def _emit(args, report, csv_header=None, csv_rows=None):
    cfg = _config(args)
    if args.format == "csv":
        if csv_header is None:
            raise UsageError("this subcommand has no CSV output; use --format json or text")
        out = _csv_text(csv_header, csv_rows, cfg)
    elif args.format == "text":
        out = _text(report, cfg)
    else:
        out = _json_text(report, cfg)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


# --- subcommands --------------------------------------------------------------

def cmd_cover_build(args):
    if args.points:
        pts = read_points_csv(args.points)
    elif args.sample:
        pts = sample_region(_space(args), n=args.sample, seed=args.seed)
    else:
        raise UsageError("give --points or --space with --sample")
    cover = build_cover(pts, args.r, order=args.order, dilation=args.dilation)
    probes = default_probes(cover, pts)
    rep = measure_overlap(cover, args.dilation, probes)
    bound = guaranteed_overlap_bound(("lebesgue", pts.shape[1]), args.dilation)
    report = {"cover": cover.to_dict(), "max_overlap": rep.max_overlap, "probe_count": rep.probe_count,
              "guaranteed_bound": bound}
    dim = pts.shape[1]
    rows = [[*p, int(c)] for p, c in zip(probes.tolist(), rep.counts)]
    _emit(args, report, [f"x{i}" for i in range(dim)] + ["overlap"], rows)


def _table_rows(table):
    buf = io.StringIO()
    write_measure_rows(buf, table)
    rows = list(csv.reader(io.StringIO(buf.getvalue())))
    return rows[0], rows[1:]


def cmd_dims_fit(args):
    space = _space(args)
    E = _E(args, space)
    radii = parse_radii(args.radii) if args.radii else None
    fit = fit_exponents(space, args.measure, E, radii, args.direction, args.rel_error, args.seed, args.threads)
    header, rows = _table_rows(fit.table)
    _emit(args, {"fit": fit.to_dict()}, header, rows)


def cmd_doubling(args):
    space = _space(args)
    E = _E(args, space)
    radii = parse_radii(args.radii) if args.radii else None
    rep = doubling_constant(space, args.measure, E, radii, args.rel_error, args.seed, args.threads)
    header, rows = _table_rows(rep.table)
    _emit(args, {"doubling": rep.to_dict()}, header, rows)


def cmd_theta_scan(args):
    space = _space(args)
    E = _E(args, space, default=np.zeros((1, space.dim)))
    query = EmbeddingQuery(args.p, args.q, args.alpha, args.lam, args.mu, args.nu, E,
                           not args.no_truncation, args.measure_density)
    scan = theta_scan(space, query, parse_radii(args.radii), args.rel_error, args.seed, args.threads)
    rows = list(zip(scan.radii, scan.theta_values, scan.profile, scan.rel_error))
    _emit(args, {"query": query.to_dict(), "scan": scan.to_dict()},
          ["r", "theta", "profile", "rel_error"], rows)


def cmd_classify(args):
    if not args.scan:
        raise UsageError("classify needs --scan FILE (JSON written by 'theta scan')")
    try:
        with open(args.scan) as fh:
            doc = json.load(fh)
        s, q = doc["scan"], doc["query"]
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        raise UsageError(f"cannot read scan file {args.scan!r}: {exc}") from None
    trunc = q["truncation_supported"] if args.truncation is None else args.truncation == "yes"
    dens = q["measure_density"] if args.measure_density is None else args.measure_density == "yes"
    query = EmbeddingQuery(q["p"], q["q"], q["alpha"], q["lambda"], q["mu"], q["nu"], q["E"], trunc, dens)
    scan = ThetaScan(np.array(s["radii"]), np.array(s["theta"]), s["fitted_log_slope"], s["sup_over_range"],
                     np.array(s["profile"]), np.array(s["argmax_centers"]), np.array(s["rel_error"]), query.key())
    v = classify(scan, query)
    d = v.to_dict()
    d.pop("evidence")
    _emit(args, {"query": query.to_dict(), "verdict": d})


def cmd_pi_check(args):
    field = DiscreteField.from_csv(args.field)
    ball = BallSpec(parse_points(args.center)[0], args.radius)
    space = SpaceModel.from_json(args.space) if args.space else None
    if space is not None and not args.mu:
        raise UsageError("--mu is required with --space")
    rep = check_pi(field, ball, args.mu, args.p, args.alpha, args.lam, space=space)
    _emit(args, {"pi": rep.to_dict()})


def cmd_bump(args):
    space = _space(args)
    ball = BallSpec(parse_points(args.center)[0], args.radius)
    cert = bump_certificate(space, args.mu, ball, args.lam, args.p, args.nu, args.q, n_grid=args.grid)
    _emit(args, {"bump": cert.to_dict()})


def cmd_scenario_run(args):
    params = {k: v for k, v in (("n", args.n), ("p", args.p), ("q", args.q), ("alpha", args.alpha),
                                ("beta", args.beta), ("gamma", args.gamma), ("depth", args.depth))
              if v is not None}
    rep = run_scenario(args.id, params, args.seed)
    cfg = _config(args)
    if args.format == "text":
        out = f"config: {json.dumps(cfg, sort_keys=True)}\n" + rep.to_text()
    elif args.format == "csv":
        tab = rep.tables.get("theta_q2")
        if tab is None:
            raise UsageError("CSV output is only available for the optimal-weight Theta table")
        out = _csv_text(["r", "theta", "profile"], zip(tab["r"], tab["theta"], tab["profile"]), cfg)
    else:
        out = json.dumps(_clean({"config": cfg, **rep.to_dict()}), indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


# --- parser -----------------------------------------------------------------------

def _common(p):
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None,
                   help=f"worker cap (default ${THREADS_ENV} or 1)")
    p.add_argument("--debug", action="store_true", help="show tracebacks")


def _centres(p):
    p.add_argument("--E", help="centres 'x,y;x,y'")
    p.add_argument("--E-file", dest="E_file", help="CSV of centres")
    p.add_argument("--sample", type=int, help="sample N centres from the space's domain")


def build_parser():
    ap = _Parser(prog="sobembed", description="Embedding diagnostics on metric measure spaces.",
                 epilog=CSV_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    cover = sub.add_parser("cover", help="ball coverings").add_subparsers(dest="action", parser_class=_Parser)
    p = cover.add_parser("build", help="greedy maximal r-separated cover and overlap report")
    p.add_argument("--points", help="CSV of sample points")
    p.add_argument("--space")
    p.add_argument("--sample", type=int)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--lambda", dest="dilation", type=float, default=1.0)
    p.add_argument("--order", choices=("lexicographic", "input"), default="lexicographic")
    _common(p)
    p.set_defaults(func=cmd_cover_build)

    dims = sub.add_parser("dims", help="dimension exponents").add_subparsers(dest="action", parser_class=_Parser)
    p = dims.add_parser("fit", help="fit s, sigma or delta")
    p.add_argument("--space", required=True)
    p.add_argument("--measure", required=True)
    p.add_argument("--direction", choices=("lower", "upper", "decay"), default="lower")
    p.add_argument("--radii", help="start:end:count (default 16 radii in [1e-4, 1e-1] diam E)")
    p.add_argument("--rel-error", dest="rel_error", type=float, default=1e-2)
    _centres(p)
    _common(p)
    p.set_defaults(func=cmd_dims_fit)

    p = sub.add_parser("doubling", help="doubling constant over balls centred in E")
    p.add_argument("--space", required=True)
    p.add_argument("--measure", required=True)
    p.add_argument("--radii")
    p.add_argument("--rel-error", dest="rel_error", type=float, default=1e-2)
    _centres(p)
    _common(p)
    p.set_defaults(func=cmd_doubling)

    theta = sub.add_parser("theta", help="local Poincare constant").add_subparsers(dest="action", parser_class=_Parser)
    p = theta.add_parser("scan", help="Theta_{q,lambda}(r) on a radius grid")
    p.add_argument("--space", required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--nu", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--radii", required=True)
    p.add_argument("--no-truncation", action="store_true")
    p.add_argument("--measure-density", action="store_true")
    p.add_argument("--rel-error", dest="rel_error", type=float, default=1e-2)
    _centres(p)
    _common(p)
    p.set_defaults(func=cmd_theta_scan)

    p = sub.add_parser("classify", help="verdict from a saved theta scan")
    p.add_argument("--scan", help="JSON written by 'theta scan --format json'")
    p.add_argument("--truncation", choices=("yes", "no"))
    p.add_argument("--measure-density", choices=("yes", "no"))
    _common(p)
    p.set_defaults(func=cmd_classify)

    pi = sub.add_parser("pi", help="Poincare inequality checks").add_subparsers(dest="action", parser_class=_Parser)
    p = pi.add_parser("check", help="ratio of the p-Poincare inequality on one ball")
    p.add_argument("--field", required=True, help="CSV with x0.., u[, g]")
    p.add_argument("--center", required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--space")
    p.add_argument("--mu")
    _common(p)
    p.set_defaults(func=cmd_pi_check)

    p = sub.add_parser("bump", help="bump-function certificate on a ball")
    p.add_argument("--space", required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--nu")
    p.add_argument("--q", type=float)
    p.add_argument("--center", required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=2.0)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--grid", type=int, default=64)
    _common(p)
    p.set_defaults(func=cmd_bump)

    sc = sub.add_parser("scenario", help="worked examples").add_subparsers(dest="action", parser_class=_Parser)
    p = sc.add_parser("run", help="run a named scenario")
    p.add_argument("id", choices=SCENARIOS)
    for name in ("p", "q", "alpha", "beta", "gamma"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--depth", type=int)
    _common(p)
    p.set_defaults(func=cmd_scenario_run)
    return ap


def run(argv=None):
    ap = build_parser()
    debug = "--debug" in (argv if argv is not None else sys.argv[1:])
    try:
        args = ap.parse_args(argv)
        if not hasattr(args, "func"):
            raise UsageError(ap.format_usage().strip())
        if args.threads is None:
            args.threads = int(os.environ.get(THREADS_ENV, "1"))
        args.func(args)
        return 0
    except (DegenerateMeasureError, BudgetExceededError, FitFailureError, FloatingPointError) as exc:
        if debug:
            traceback.print_exc()
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ValueError, SobembedError, OSError) as exc:
        if debug:
            traceback.print_exc()
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())
