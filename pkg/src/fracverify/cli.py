"""``fracverify`` command line.

Exit codes: 0 success (or expected verdict), 1 verdict mismatch,
2 usage, domain or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import replace
from pathlib import Path

from .core.config import EvalConfig, load_config
from .core.functions import BumpPerturbation, parse_descriptor
from .errors import FracVerifyError
from .harness import (
    STATE_AUGMENTED,
    OperatorKind,
    OperatorSpec,
    classify_operator,
    expected_verdict,
    locality_probe,
    series_convergence_study,
)
from .local_ops import conformable_reduced, mfractional_reduced
from .nonlocal_ops import caputo_fabrizio_higher, rl_series
from .report import RunManifest, format_fixed, format_sci, report_to_csv, report_to_json

EVAL_OPS = ("conformable", "katugampola", "mfractional", "kg", "cf", "rl-gl", "rl-series")
VERIFY_OPS = tuple(k.value for k in OperatorKind)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _config(args) -> EvalConfig:
    cfg = load_config(args.config) if getattr(args, "config", None) else EvalConfig()
    overrides = {}
    if getattr(args, "panels", None) is not None:
        overrides["quad_panels"] = args.panels
    if getattr(args, "gl_steps", None) is not None:
        overrides["gl_steps"] = args.gl_steps
    return replace(cfg, **overrides)


def _flags(args) -> dict:
    flags = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    if "bump" in flags:
        flags["bump"] = [[b.center, b.radius, b.amplitude] for b in flags["bump"]]
    return flags


def _bump(text: str) -> BumpPerturbation:
    try:
        center, radius, amplitude = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected center,radius,amplitude, got {text!r}") from None
    return BumpPerturbation(center, radius, amplitude)


def _operator(args) -> OperatorSpec:
    return OperatorSpec(args.op, args.alpha, args.t0, args.beta, args.m)


def cmd_eval(args, out) -> int:
    cfg = _config(args)
    f = parse_descriptor(args.fn)
    if args.op == "rl-series":
        K = args.K if args.K is not None else 8
        value = rl_series(f, args.alpha, args.t0, args.t, K)
    elif args.op == "cf" and args.order > 0:
        value = caputo_fabrizio_higher(f, args.alpha, args.order, args.t0, args.t, cfg)
    elif args.route == "reduced" and args.op in ("conformable", "katugampola"):
        value = conformable_reduced(f, args.alpha, args.t)
    elif args.route == "reduced" and args.op == "mfractional":
        value = mfractional_reduced(f, args.alpha, args.beta, args.t)
    else:
        value = _operator(args).evaluate(f, args.t, cfg)
    out.write(format_fixed(value) + "\n")
    return 0


def cmd_verify(args, out) -> int:
    cfg = _config(args)
    op = OperatorSpec(args.op, args.alpha, 0.0, args.beta, args.m)
    report = classify_operator(op, cfg)
    manifest = RunManifest("verify", _flags(args), (), report.operator, cfg.to_dict())
    text = report_to_json(report, manifest) if args.format == "json" else report_to_csv(report, manifest)
    if args.out:
        Path(args.out).write_text(text)
    else:
        out.write(text)
    expected = expected_verdict(op.kind)
    ok = report.verdict is expected
    if op.kind is OperatorKind.CAPUTO_FABRIZIO:
        ok = ok and report.qualifier == STATE_AUGMENTED
    return 0 if ok else 1


def cmd_probe(args, out) -> int:
    cfg = _config(args)
    op = _operator(args)
    f = parse_descriptor(args.fn)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["operator", "alpha", "t", "center", "radius", "amplitude", "baseline", "perturbed", "delta"])
    rows = []
    for b in args.bump:
        p = locality_probe(op, f, b, args.t, cfg)
        rows.append([op.kind.value] + [format_sci(x) for x in (op.alpha, args.t, b.center, b.radius, b.amplitude,
                                                                 p.baseline, p.perturbed, p.delta)])
    w.writerows(rows)
    _maybe_manifest(args, "probe", [f.descriptor], op.to_dict(), cfg)
    return 0


def cmd_study(args, out) -> int:
    cfg = _config(args)
    f = parse_descriptor(args.fn)
    rows = series_convergence_study(f, args.alpha, args.t0, args.t, range(args.kmax + 1), cfg)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["K", "series_value", "gl_reference", "abs_error"])
    for K, s, ref, err in rows:
        w.writerow([K, format_sci(s), format_sci(ref), format_sci(err)])
    _maybe_manifest(args, "study", [f.descriptor], {"kind": "rl-series", "alpha": args.alpha, "t0": args.t0}, cfg)
    return 0


def _maybe_manifest(args, command, functions, operator, cfg) -> None:
    if args.manifest:
        m = RunManifest(command, _flags(args), tuple(functions), operator, cfg.to_dict())
        Path(args.manifest).write_text(json.dumps(m.to_dict(), sort_keys=True, indent=2) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracverify", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, ops):
        p.add_argument("--op", required=True, choices=ops)
        p.add_argument("--alpha", required=True, type=float)
        p.add_argument("--beta", type=float, default=1.0)
        p.add_argument("--m", type=int, default=1)
        p.add_argument("--config", help="key = value file mirroring EvalConfig")
        p.add_argument("--panels", type=int, help="quadrature panels / ODE steps")
        p.add_argument("--gl-steps", type=int, help="Grunwald-Letnikov reference resolution")

    p = sub.add_parser("eval", help="evaluate one operator at one point")
    common(p, EVAL_OPS)
    p.add_argument("--fn", required=True)
    p.add_argument("--t", required=True, type=float)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--K", type=int)
    p.add_argument("--order", type=int, default=0, help="cf only: evaluate order alpha+n on f^(n)")
    p.add_argument("--route", choices=("reduced", "limit"), default="reduced",
                   help="local operators: reduced first-derivative form or raw limit definition")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="classify an operator and write a report")
    common(p, VERIFY_OPS)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("probe", help="history-perturbation probe")
    common(p, VERIFY_OPS)
    p.add_argument("--fn", required=True)
    p.add_argument("--t", required=True, type=float)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--bump", required=True, action="append", type=_bump)
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("study", help="RL series convergence table")
    p.add_argument("--fn", required=True)
    p.add_argument("--alpha", required=True, type=float)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t", required=True, type=float)
    p.add_argument("--kmax", required=True, type=int)
    p.add_argument("--config")
    p.add_argument("--gl-steps", type=int)
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_study)
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        buf = io.StringIO()
        code = args.func(args, buf)
        stdout.write(buf.getvalue())
        return code
    except (UsageError, FracVerifyError, ValueError, OSError) as exc:
        stderr.write(f"fracverify: error: {exc}\n")
        return 2
    except Exception as exc:  # noqa: BLE001 - exit-code contract allows only 0/1/2
        stderr.write(f"fracverify: internal error: {type(exc).__name__}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())


def main_entry() -> None:
    sys.exit(main())
