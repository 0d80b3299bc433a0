"""Command-line front end: ``mlpd {eval,deriv,compare,audit,table}``.

Exit codes: 0 success, 1 usage or domain error, 2 not converged,
3 a comparison or audit entry failed (its records are still printed).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import fields

import numpy as np

from .deriv import evaluate_param_derivative
from .errors import ConfigError, MLPDError
from .mellin_barnes import ContourSpec
from .reports import fmt, fmt_complex
from .series import FAMILIES, TAIL_MODES, Evaluation, TruncationPolicy, make_params
from .validation import (
    FD_REL_TOL,
    AuditConfig,
    EvalRequest,
    METHOD_ALIASES,
    SUITES,
    compare_methods,
    evaluate_with,
    run_full_audit,
)

EXIT_OK, EXIT_USAGE, EXIT_NOT_CONVERGED, EXIT_FAILED = 0, 1, 2, 3

PARAM_NAMES = ("alpha", "beta", "gamma", "alpha1", "beta1", "alpha2", "beta2")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_complex(text: str) -> complex:
    """Parse ``a``, ``bi``, ``a+bi`` or ``a-bi`` (no spaces)."""
    t = text.strip().lower()
    if not t or " " in t or "n" in t:
        raise argparse.ArgumentTypeError(f"invalid complex number {text!r} (use a+bi)")
    if t.endswith("i"):
        t = t[:-1] + "j"
        if t in ("j", "+j", "-j"):
            t = t[:-1] + "1j"
        elif t[-2] in "+-":
            t = t[:-1] + "1j"
    try:
        return complex(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid complex number {text!r} (use a+bi)") from None


def parse_grid(text: str) -> list[complex]:
    """``re0:re1:n,im0:im1:m`` -> n*m points, real part varying fastest."""
    try:
        re_spec, im_spec = text.split(",")
        r0, r1, n = re_spec.split(":")
        i0, i1, m = im_spec.split(":")
        n, m = int(n), int(m)
        if n < 1 or m < 1:
            raise ValueError
        res = np.linspace(float(r0), float(r1), n)
        ims = np.linspace(float(i0), float(i1), m)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid grid {text!r} (use re0:re1:n,im0:im1:m)") from None
    return [complex(r, i) for i in ims for r in res]


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _add_common(p: argparse.ArgumentParser, z: str | None = "append") -> None:
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    for name in PARAM_NAMES:
        p.add_argument(f"--{name}", type=parse_complex, metavar="A+Bi")
    if z == "append":
        p.add_argument("--z", type=parse_complex, action="append", required=True, metavar="A+Bi",
                       help="evaluation point; repeat for several")
    _add_numerics(p)


def _add_numerics(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rel-tol", type=float, default=1e-12)
    p.add_argument("--max-terms", type=_positive_int, default=100_000)
    p.add_argument("--tail-mode", choices=TAIL_MODES, default="geometric-ratio")
    p.add_argument("--quad-tol", type=float, default=1e-10)
    p.add_argument("--phi", type=float, default=1.0)
    p.add_argument("--c", type=float, default=0.5)
    p.add_argument("--x-max", type=float, default=None)
    p.add_argument("--max-nodes", type=_positive_int, default=200_000)
    p.add_argument("--format", choices=("csv", "json-lines"), default="csv")
    p.add_argument("--config", help="key=value file of defaults (or set MLPD_CONFIG)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mlpd", description="Mittag-Leffler-type functions and their parameter derivatives.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate the function")
    _add_common(p)
    p.add_argument("--method", choices=("series", "mb"), default="series")

    p = sub.add_parser("deriv", help="derivative with respect to a parameter")
    _add_common(p)
    p.add_argument("--target", required=True, choices=PARAM_NAMES)
    p.add_argument("--method", choices=("series", "mb", "fd"), default="series")
    p.add_argument("--check-fd", type=float, metavar="H", help="append a central-difference record with step H")

    p = sub.add_parser("compare", help="compare two evaluation pathways")
    _add_common(p)
    p.add_argument("--target", choices=PARAM_NAMES)
    p.add_argument("--methods", default="series,mb", help="two of series, mb, fd")

    p = sub.add_parser("audit", help="run the numerical audits")
    p.add_argument("--suite", default="default", help=f"{' | '.join(SUITES)} or a comma list of audit names")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--format", choices=("text", "csv", "json-lines"), default="text")
    p.add_argument("--config", help="key=value file of defaults (or set MLPD_CONFIG)")

    p = sub.add_parser("table", help="tabulate over a rectangular z grid")
    _add_common(p, z=None)
    p.add_argument("--z-grid", type=parse_grid, required=True, metavar="RE0:RE1:N,IM0:IM1:M")
    p.add_argument("--target", choices=PARAM_NAMES)
    p.add_argument("--method", choices=("series", "mb"), default="series")
    return parser


# ---------------------------------------------------------------- config


def read_config(path: str) -> dict[str, str]:
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for n, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{n}: expected key=value")
                key, value = (s.strip() for s in line.split("=", 1))
                out[key.replace("-", "_")] = value
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return out


def _config_path(argv) -> str | None:
    for i, a in enumerate(argv):
        if a == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if a.startswith("--config="):
            return a.split("=", 1)[1]
    return os.environ.get("MLPD_CONFIG") or None


def _apply_config(parser: argparse.ArgumentParser, cfg: dict[str, str]) -> None:
    """Config values become subcommand defaults, so explicit flags still win."""
    subs = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    known = set()
    for sp in subs.choices.values():
        dests = {a.dest for a in sp._actions}
        known |= dests
        sp.set_defaults(**{k: v for k, v in cfg.items() if k in dests})
    unknown = sorted(set(cfg) - known)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")


def _coerce_defaults(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    # argparse only converts string defaults that reach it via parse_args;
    # set_defaults values stay strings, so convert them here
    subs = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    sp = subs.choices[args.command]
    for action in sp._actions:
        v = getattr(args, action.dest, None)
        if isinstance(v, str) and action.type is not None:
            try:
                setattr(args, action.dest, action.type(v))
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise ConfigError(f"config value for {action.dest}: {exc}") from None
        if action.choices is not None and v is not None and not isinstance(v, list):
            if getattr(args, action.dest) not in action.choices:
                raise ConfigError(f"config value {v!r} not allowed for --{action.dest.replace('_', '-')}")


# ---------------------------------------------------------------- records


def _params(args):
    cls = FAMILIES[args.family]
    names = [f.name for f in fields(cls)]
    for name in PARAM_NAMES:
        if name not in names and getattr(args, name) is not None:
            raise UsageError(f"--{name} is not a parameter of {args.family}")
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.family} needs " + ", ".join(f"--{n}" for n in missing))
    return make_params(args.family, **{n: getattr(args, n) for n in names})


def _policy(args) -> TruncationPolicy:
    return TruncationPolicy(rel_tol=args.rel_tol, max_terms=args.max_terms, tail_mode=args.tail_mode)


def _contour(args) -> ContourSpec:
    return ContourSpec(c=args.c, phi=args.phi, x_max=args.x_max, quad_tol=args.quad_tol, max_nodes=args.max_nodes)


def _param_columns(params) -> dict:
    return {k: fmt_complex(v) if isinstance(v, complex) else fmt(v) for k, v in params.as_dict().items()}


def eval_record(params, z: complex, target: str | None, ev: Evaluation) -> dict:
    rec = {"family": params.family, **_param_columns(params), "target": target or "", "z_re": z.real, "z_im": z.imag}
    rec.update(
        value_re=ev.value.real, value_im=ev.value.imag, abs_err_est=ev.abs_err_est,
        terms_or_nodes=ev.terms_used, method=ev.method, converged=ev.converged,
    )
    return rec


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt(v)
    if v is None:
        return ""
    return str(v)


def _json_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt(v) if math.isfinite(v) else "null"
    if isinstance(v, int):
        return str(v)
    if v is None:
        return "null"
    return json.dumps(str(v))


def emit(records: list[dict], fmt_name: str, out) -> None:
    if fmt_name == "json-lines":
        for r in records:
            out.write("{" + ", ".join(f"{json.dumps(k)}: {_json_value(v)}" for k, v in r.items()) + "}\n")
        return
    if not records:
        return
    # rows of different shapes (e.g. an fd record) share the union header
    header: list[str] = []
    for r in records:
        header += [k for k in r if k not in header]
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for r in records:
        w.writerow([_cell(r.get(k)) for k in header])


# ---------------------------------------------------------------- commands


def cmd_eval(args, out) -> int:
    params = _params(args)
    records, ok = [], True
    for z in args.z:
        ev = evaluate_with(args.method, params, z, None, _policy(args), _contour(args))
        records.append(eval_record(params, z, None, ev))
        ok &= ev.converged
    emit(records, args.format, out)
    return EXIT_OK if ok else EXIT_NOT_CONVERGED


def cmd_deriv(args, out) -> int:
    params = _params(args)
    params.check_target(args.target)
    records, ok, fd_ok = [], True, True
    for z in args.z:
        ev = evaluate_with(args.method, params, z, args.target, _policy(args), _contour(args))
        records.append(eval_record(params, z, args.target, ev))
        ok &= ev.converged
        if args.check_fd is not None:
            fd = evaluate_with("fd", params, z, args.target, _policy(args), h=args.check_fd)
            rec = eval_record(params, z, args.target, fd)
            rel = abs(fd.value - ev.value) / max(abs(ev.value), 1e-300)
            rec.update(rel_diff=rel, agrees=bool(rel <= FD_REL_TOL))
            fd_ok &= rel <= FD_REL_TOL
            records.append(rec)
    emit(records, args.format, out)
    if not fd_ok:
        return EXIT_FAILED
    return EXIT_OK if ok else EXIT_NOT_CONVERGED


def comparison_record(rep) -> dict:
    return {
        "family": rep.family,
        **{k: fmt_complex(v) if isinstance(v, complex) else fmt(v) for k, v in rep.params.items()},
        "target": rep.target or "",
        "z_re": rep.z.real,
        "z_im": rep.z.imag,
        "method_a": rep.method_a,
        "method_b": rep.method_b,
        "value_a_re": rep.value_a.real,
        "value_a_im": rep.value_a.imag,
        "value_b_re": rep.value_b.real,
        "value_b_im": rep.value_b.imag,
        "abs_diff": rep.abs_diff,
        "budget": rep.budget,
        "pass": rep.passed,
        "error": rep.error or "",
    }


def cmd_compare(args, out) -> int:
    params = _params(args)
    methods = [m.strip() for m in args.methods.split(",")]
    if len(methods) != 2 or any(m not in METHOD_ALIASES for m in methods):
        raise UsageError("--methods needs exactly two of series, mb, fd")
    if args.target is not None:
        params.check_target(args.target)
    reqs = [EvalRequest(params, z, args.target, methods[0], methods[1], _policy(args), _contour(args)) for z in args.z]
    reports = compare_methods(reqs)
    emit([comparison_record(r) for r in reports], args.format, out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def cmd_audit(args, out) -> int:
    bundle = run_full_audit(AuditConfig.for_suite(args.suite, seed=args.seed))
    if args.format == "text":
        out.write(bundle.to_text())
    else:
        recs = [
            {"audit": r.audit, "point": r.point, "margin": r.margin, "pass": r.passed}
            for rep in bundle.reports
            for r in rep.records
        ]
        emit(recs, args.format, out)
    return EXIT_OK if bundle.passed else EXIT_FAILED


def cmd_table(args, out) -> int:
    params = _params(args)
    if args.target is not None:
        params.check_target(args.target)
    records, ok = [], True
    for z in args.z_grid:
        if args.target is None:
            ev = evaluate_with(args.method, params, z, None, _policy(args), _contour(args))
        elif args.method == "series":
            ev = evaluate_param_derivative(params, args.target, z, _policy(args))
        else:
            ev = evaluate_with(args.method, params, z, args.target, _policy(args), _contour(args))
        records.append(eval_record(params, z, args.target, ev))
        ok &= ev.converged
    emit(records, args.format, out)
    return EXIT_OK if ok else EXIT_NOT_CONVERGED


COMMANDS = {"eval": cmd_eval, "deriv": cmd_deriv, "compare": cmd_compare, "audit": cmd_audit, "table": cmd_table}


def main(argv=None, out=None, err=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        path = _config_path(argv)
        if path:
            _apply_config(parser, read_config(path))
        args = parser.parse_args(argv)
        _coerce_defaults(args, parser)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except MLPDError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
