"""Command-line entry point: ``gvsmooth {extend,fit,analyze,polish,decompose}``.

Exit codes: 0 success, 1 bad arguments or unreadable/malformed input,
2 Lipschitz constant below the samples' own (``extend``),
3 no gradually varied extension exists (``fit``).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from gvsmooth import fileio
from gvsmooth.domain import LevelSequence, build_grid_domain, build_path_domain
from gvsmooth.errors import InfeasibleFillError, InfeasibleLipschitzError, InvalidArgument
from gvsmooth.gvf import GvfStrategy, gvf_fill, is_gradually_varied
from gvsmooth.mwk import Metric, lipschitz_constant, mwk_extension
from gvsmooth.polish import PolishConfig, polish_1d, polish_grid
from gvsmooth.smoothness import (
    DEFAULT_KMAX,
    classify_discrete_smoothness,
    decompose_micro_macro,
    difference_ladder,
    natural_smoothness_1d,
    natural_smoothness_kd,
)

EXIT_USAGE = 1
EXIT_INFEASIBLE_LIP = 2
EXIT_INFEASIBLE_FIT = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 is reserved for an infeasible lip
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class UsageError(Exception):
    pass


def _grid_size(text):
    try:
        w, h = (int(p) for p in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid size must look like WxH, got {text!r}") from None
    return w, h


def _levels(args) -> LevelSequence:
    if args.levels is not None:
        try:
            return LevelSequence(tuple(float(t) for t in args.levels.split(",")))
        except ValueError as exc:
            raise UsageError(f"--levels: {exc}") from None
    if args.levels_range is not None:
        try:
            lo, hi, n = args.levels_range.split(":")
            return LevelSequence(tuple(np.linspace(float(lo), float(hi), int(n))))
        except ValueError as exc:
            raise UsageError(f"--levels-range must be lo:hi:n ({exc})") from None
    raise UsageError("one of --levels or --levels-range is required")


def _domain(args):
    if args.path is not None:
        return build_path_domain(args.path)
    return build_grid_domain(*args.grid, adjacency=args.adj)


def _add_domain_flags(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--path", type=int, metavar="N", help="path domain with N vertices")
    g.add_argument("--grid", type=_grid_size, metavar="WxH", help="grid domain, row-major ids")
    p.add_argument("--adj", type=int, choices=(4, 8), default=4, help="grid adjacency (default 4)")


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, allow_nan=False)
        fh.write("\n")


# ---------------------------------------------------------------------------
# reports


def _ns1d_report(values):
    ns = natural_smoothness_1d(values)
    return {"n_samples": ns.n_samples, "sign_changes": ns.sign_changes, "ratio": ns.ratio}


def _nskd_report(sn, field):
    ns = natural_smoothness_kd(sn, field)
    return {
        "sn": ns.sn,
        "en": ns.en,
        "ratio_paper": ns.ratio,
        "ratio_alt": ns.ratio_alt,
        "perfectly_smooth": ns.perfectly_smooth,
    }


def _ladder_report(values, kmax, c1, c2):
    ladder = difference_ladder(values, kmax)
    out = {"lip": list(ladder.lip), "decrease_onset": ladder.decrease_onset}
    if len(ladder.lip) >= 2:
        cls = classify_discrete_smoothness(ladder, c1, c2)
        out.update({"class": cls.kind, "K": cls.K, "c1": cls.c1, "c2": cls.c2})
    else:
        out.update({"class": None, "K": None, "c1": c1, "c2": c2})
    return out


# ---------------------------------------------------------------------------
# commands


def cmd_extend(args):
    dom = _domain(args)
    samples = fileio.read_samples(args.samples, dom)
    est = lipschitz_constant(samples, dom, args.metric)
    print(f"lip={est.lip!r} witness={est.witness}")
    try:
        field = mwk_extension(args.method, samples, dom, args.lip, args.metric)
    except InfeasibleLipschitzError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE_LIP
    fileio.write_field(args.out, field)
    return 0


def cmd_fit(args):
    dom = _domain(args)
    levels = _levels(args)
    samples = fileio.read_samples(args.samples, dom, value_type=int)
    try:
        field = gvf_fill(samples, dom, levels, args.strategy)
    except InfeasibleFillError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE_FIT
    ok, edge = is_gradually_varied(field, dom, levels)
    assert ok, f"fill produced a jump across edge {edge}"
    fileio.write_field(args.out, field.to_real(levels))
    return 0


def cmd_analyze(args):
    field = fileio.read_field(args.field, args.adj)
    report = {}
    if field.domain.is_grid:
        if args.sn is not None:
            report["natural_smoothness_kd"] = _nskd_report(args.sn, field)
    else:
        if field.domain.n_vertices < 2:
            raise UsageError("a 1-D field needs at least two values")
        report["natural_smoothness_1d"] = _ns1d_report(field.values)
        report["ladder"] = _ladder_report(field.values, args.kmax, args.c1, args.c2)
    _write_json(args.out, report)
    if args.pgm:
        fileio.write_pgm(args.pgm, field)
    return 0


def cmd_polish(args):
    field = fileio.read_field(args.field, args.adj)
    dom = field.domain
    mask = np.zeros(dom.n_vertices, dtype=bool)
    if args.guiding:
        mask[fileio.read_coordinates(args.guiding, dom)] = True
    if args.epsilon is None:
        cfg = PolishConfig.for_values(field.values, max_iters=args.max_iters, relaxation=args.relaxation)
    else:
        cfg = PolishConfig(args.epsilon, args.max_iters, args.relaxation)

    if dom.is_grid:
        outcome = polish_grid(field, mask.reshape(dom.shape), cfg)
        sn = args.sn if args.sn is not None else int(mask.sum())
        before = after = None
        extra = {}
        if sn > 0 and min(dom.width, dom.height) >= 3:
            kb, ka = natural_smoothness_kd(sn, field), natural_smoothness_kd(sn, outcome.field)
            before, after = kb.ratio, ka.ratio
            extra = {"sn": sn, "en_before": kb.en, "en_after": ka.en}
    else:
        outcome = polish_1d(field, mask, cfg)
        if dom.n_vertices >= 2:
            before = natural_smoothness_1d(field.values).ratio
            after = natural_smoothness_1d(outcome.field.values).ratio
        else:
            before = after = None
        extra = {}
    fileio.write_field(args.out, outcome.field)
    report = {
        "polish": {
            "converged": outcome.converged,
            "iterations": outcome.iterations,
            "max_residual": outcome.max_residual,
            "epsilon": cfg.epsilon,
            "ratio_before": before,
            "ratio_after": after,
            **extra,
        }
    }
    _write_json(args.report, report)
    return 0


def cmd_decompose(args):
    field = fileio.read_field(args.field, args.adj)
    dec = decompose_micro_macro(field, args.stride, args.strategy)
    err = np.max(np.abs(dec.macro.values + dec.micro.values - field.values))
    if not err <= 1e-12:
        raise RuntimeError(f"macro + micro differs from the field by {err}")
    fileio.write_field(args.macro_out, dec.macro)
    fileio.write_field(args.micro_out, dec.micro)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gvsmooth", description="Lipschitz and gradually varied reconstruction of sampled fields, plus smoothness analysis.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("extend", help="MWK Lipschitz extension of real-valued samples")
    p.add_argument("samples", help="CSV with x,value or x,y,value rows")
    _add_domain_flags(p)
    p.add_argument("--method", choices=("inf", "sup", "mid"), default="mid")
    p.add_argument("--lip", type=float, help="Lipschitz constant (default: tight constant of the samples)")
    p.add_argument("--metric", choices=[m.value for m in Metric], default="geodesic")
    p.add_argument("--out", required=True, help="output field CSV")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("fit", help="gradually varied fill of level-indexed samples")
    p.add_argument("samples", help="CSV whose value column holds 1-based level indices")
    _add_domain_flags(p)
    lv = p.add_mutually_exclusive_group(required=True)
    lv.add_argument("--levels", help="comma-separated increasing level values, e.g. 1,2,3")
    lv.add_argument("--levels-range", help="lo:hi:n evenly spaced levels")
    p.add_argument("--strategy", choices=[s.value for s in GvfStrategy], default="mid_envelope")
    p.add_argument("--out", required=True, help="output field CSV (level values)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("analyze", help="smoothness report for a field")
    p.add_argument("field")
    p.add_argument("--adj", type=int, choices=(4, 8), default=4)
    p.add_argument("--kmax", type=int, default=DEFAULT_KMAX, help="difference ladder depth")
    p.add_argument("--c1", type=float, default=None, help="classification constant c1 (default 0)")
    p.add_argument("--c2", type=float, default=None, help="classification constant c2 (default max(lip[0], 1))")
    p.add_argument("--sn", type=int, help="number of samples behind a grid field (enables the k-D ratio)")
    p.add_argument("--out", required=True, help="output JSON report")
    p.add_argument("--pgm", help="also write the field as a P2 grayscale image")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("polish", help="second-difference polishing with frozen guiding points")
    p.add_argument("field")
    p.add_argument("--adj", type=int, choices=(4, 8), default=4)
    p.add_argument("--guiding", help="CSV of x or x,y coordinates to freeze")
    p.add_argument("--epsilon", type=float, help="residual bound (default 1e-6 * value range)")
    p.add_argument("--max-iters", type=int, default=10_000)
    p.add_argument("--relaxation", type=float, default=1.0)
    p.add_argument("--sn", type=int, help="sample count for the grid ratio (default: number of guiding points)")
    p.add_argument("--out", required=True, help="output field CSV")
    p.add_argument("--report", required=True, help="output JSON report")
    p.set_defaults(func=cmd_polish)

    p = sub.add_parser("decompose", help="split a field into macro (coarse) and micro (residual) parts")
    p.add_argument("field")
    p.add_argument("--adj", type=int, choices=(4, 8), default=4)
    p.add_argument("--stride", type=int, required=True)
    p.add_argument("--strategy", choices=["mwk_mid"] + [s.value for s in GvfStrategy], default="mwk_mid")
    p.add_argument("--macro-out", required=True)
    p.add_argument("--micro-out", required=True)
    p.set_defaults(func=cmd_decompose)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidArgument, UsageError, OSError, InfeasibleFillError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
