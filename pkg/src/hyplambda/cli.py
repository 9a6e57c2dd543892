"""Command-line front end.

    hyplambda lambda  --curve curve.json [--delta-f X]
    hyplambda nonarch --reduction red.json
    hyplambda sweep   --spec sweep.json [--jobs N] [--summary path]
    hyplambda theta   --tau '[[...]]' --char 10/01
    hyplambda selftest

Exit codes: 0 success, 2 input error, 3 numerical failure.  Errors are
reported as ``{"error": {"kind": ..., "message": ...}}`` on stdout.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .errors import HypLambdaError, InputError, ParseError
from .hyperelliptic import INF, curve_from_roots
from .invariants import ReductionData, lambda_na, lambda_na_closed, psi_na, zhang_bound_rhs
from .pipeline import curve_report, tolerance_settings
from .siegel import validate_siegel
from .sweep import SweepSpec, run_sweep, summarize
from .theta import DEFAULT_EPS, ThetaCharacteristic, parity, theta_constant, truncation_radius

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL = 0, 2, 3


# --- deterministic output ------------------------------------------------------


def fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def _plain(obj):
    """Map numpy scalars, complex numbers and Fractions to JSON-friendly values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, Fraction):
        return str(obj.numerator) if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    return obj


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with floats at 17 significant digits and sorted keys, so output is byte-stable."""
    obj = _plain(obj) if _level == 0 else obj
    pad, inner = " " * (indent * _level), " " * (indent * (_level + 1))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {dumps(obj[k], indent, _level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + dumps(v, indent, _level + 1) for v in obj) + "\n" + pad + "]"
    if isinstance(obj, float):
        return fmt_float(obj)
    return json.dumps(obj)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return fmt_float(float(v))
    return str(v)


def write_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out and out != "-":
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# --- input parsing -----------------------------------------------------------


def _load_json(source: str):
    try:
        text = sys.stdin.read() if source == "-" else Path(source).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: {exc}") from None


def _number(v) -> float:
    try:
        return float(v)
    except (TypeError, ValueError):
        raise ParseError(f"not a number: {v!r}") from None


def _root(v):
    if isinstance(v, str) and v.strip().lower() in (INF, "infinity", "oo"):
        return INF
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(_number(v[0]), _number(v[1]))
    if isinstance(v, (int, float, str)) and not isinstance(v, bool):
        return complex(_number(v), 0.0)
    raise ParseError(f"a root must be [re, im], a real number or \"inf\"; got {v!r}")


def _int(v, name: str) -> int:
    if isinstance(v, bool):
        raise ParseError(f"{name} must be an integer")
    if isinstance(v, str):
        try:
            return int(v)
        except ValueError:
            raise ParseError(f"{name} must be an integer, got {v!r}") from None
    if isinstance(v, int):
        return v
    if isinstance(v, float) and v.is_integer():
        return int(v)
    raise ParseError(f"{name} must be an integer, got {v!r}")


def parse_curve(doc):
    if not isinstance(doc, dict) or "roots" not in doc:
        raise ParseError('curve JSON needs a "roots" list')
    roots = doc["roots"]
    if not isinstance(roots, list):
        raise ParseError('"roots" must be a list')
    ordering = doc.get("ordering")
    if ordering is not None:
        ordering = [_int(i, "ordering entry") for i in ordering]
    curve = curve_from_roots([_root(v) for v in roots], ordering)
    if "genus" in doc and _int(doc["genus"], "genus") != curve.g:
        raise InputError(f"genus {doc['genus']} does not match {len(roots)} roots (genus {curve.g})")
    return curve


def parse_reduction(doc) -> tuple[ReductionData, dict]:
    if not isinstance(doc, dict) or "g" not in doc:
        raise ParseError('reduction JSON needs at least "g"')
    g = _int(doc["g"], "g")
    if g < 2:
        raise InputError(f"genus must be >= 2, got {g}")
    data = ReductionData(
        g,
        _int(doc.get("xi0", 0), "xi0"),
        # an absent vector means all zeros; a present one must have the right length
        tuple(_int(v, "xi") for v in doc.get("xi", [0] * ((g - 1) // 2))),
        tuple(_int(v, "delta") for v in doc.get("delta", [0] * (g // 2))),
    )
    extra = {"elementary": bool(doc.get("elementary", True))}
    if doc.get("c") is not None:
        try:
            extra["c"] = Fraction(str(doc["c"]))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"c must be a rational, got {doc['c']!r}") from None
    return data, extra


def parse_sweep(doc) -> SweepSpec:
    if not isinstance(doc, dict) or "base_roots" not in doc:
        raise ParseError('sweep JSON needs "base_roots"')
    clusters = doc.get("clusters", doc.get("moving_indices"))
    if not clusters:
        raise ParseError('sweep JSON needs "clusters" (lists of root indices)')
    kw = {}
    for key in ("t0", "q"):
        if key in doc:
            kw[key] = _number(doc[key])
    for key in ("K", "fit_points"):
        if key in doc:
            kw[key] = _int(doc[key], key)
    if "precision" in doc:
        kw["precision"] = str(doc["precision"])
    roots = tuple(_root(v) for v in doc["base_roots"])
    return SweepSpec(
        roots,
        tuple(tuple(_int(i, "cluster index") for i in cl) for cl in clusters),
        label=str(doc.get("label", "")),
        **kw,
    )


def parse_tau(text: str):
    """JSON matrix whose entries are numbers, [re, im] pairs or complex strings like "0.5+1j"."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        doc = _load_json(text)

    def entry(v):
        if isinstance(v, list) and len(v) == 2:
            return complex(_number(v[0]), _number(v[1]))
        if isinstance(v, str):
            try:
                return complex(v.replace(" ", "").replace("i", "j"))
            except ValueError:
                raise ParseError(f"bad matrix entry {v!r}") from None
        return complex(_number(v))

    if not isinstance(doc, list) or not doc or not all(isinstance(r, list) for r in doc):
        raise ParseError("tau must be a JSON list of rows")
    rows = [[entry(v) for v in r] for r in doc]
    return validate_siegel(len(rows), rows)


def parse_char(text: str, g: int) -> ThetaCharacteristic:
    s = text.strip().strip("[]")
    if "/" not in s:
        raise ParseError(f"characteristic must look like 10/01, got {text!r}")
    top, bottom = s.split("/")
    if len(top) != g or len(bottom) != g or set(top + bottom) - {"0", "1"}:
        raise ParseError(f"characteristic {text!r} needs {g} binary digits per row")
    return ThetaCharacteristic.from_bits([int(c) for c in top], [int(c) for c in bottom])


# --- subcommands ---------------------------------------------------------------


def _header(args, command: str) -> dict:
    return {
        "program": "hyplambda",
        "version": __version__,
        "command": command,
        "seed": args.seed,
        "tolerance_settings": tolerance_settings(args.eps, args.prec),
    }


def cmd_lambda(args) -> int:
    if not args.curve:
        raise InputError("lambda needs --curve")
    curve = parse_curve(_load_json(args.curve))
    delta_f = None if args.delta_f is None else _number(args.delta_f)
    rep = curve_report(curve, args.eps, args.prec, delta_F=delta_f)
    doc = rep.to_dict()
    if args.format == "csv":
        cols = ["genus", "lambda", "log_petersson_norm", "phi", "delta_F"]
        _emit(write_csv(cols, [[doc.get(c) for c in cols]]), args.out)
    else:
        doc["header"] = _header(args, "lambda")
        _emit(dumps(doc), args.out)
    return EXIT_OK


def cmd_nonarch(args) -> int:
    if not args.reduction:
        raise InputError("nonarch needs --reduction")
    data, extra = parse_reduction(_load_json(args.reduction))
    # non-separating nodes: subtype-0 points plus both points of each subtype-j pair
    delta0 = data.xi0 + 2 * sum(data.xi)
    doc = {
        "g": data.g,
        "delta_total": data.total_delta,
        "psi": psi_na(data),
        "lambda": lambda_na(data),
        "closed_form": lambda_na_closed(data),
        "zhang_bound_rhs": zhang_bound_rhs(delta0, data.delta, data.g, extra["elementary"], extra.get("c")),
    }
    if args.format == "csv":
        cols = list(doc)
        _emit(write_csv(cols, [[_plain(doc[c]) for c in cols]]), args.out)
    else:
        doc["header"] = {k: v for k, v in _header(args, "nonarch").items() if k != "tolerance_settings"}
        doc["header"]["arithmetic"] = "exact rational"
        _emit(dumps(doc), args.out)
    return EXIT_OK


SWEEP_COLUMNS = [
    "k",
    "t",
    "minus_log_t",
    "log_petersson_norm",
    "lambda",
    "lambda_theta",
    "log_det_im_tau",
    "quadrature_nodes",
    "symmetry_residual",
    "min_eigenvalue_im_tau",
    "truncation_radius",
    "min_abs_theta",
    "escalated",
    "error",
]


def cmd_sweep(args) -> int:
    if not args.spec:
        raise InputError("sweep needs --spec")
    spec = parse_sweep(_load_json(args.spec))
    if args.prec == "extended":
        spec = dataclasses.replace(spec, precision="extended")
    rows = run_sweep(spec, args.eps, args.jobs)
    summary = summarize(spec, rows)
    table = []
    for r in rows:
        d = r.diagnostics
        table.append(
            [r.k, r.t, -math.log(r.t), r.log_petersson, r.lambda_, r.lambda_theta, r.log_det_im]
            + [d.get(c) for c in SWEEP_COLUMNS[7:13]]
            + [r.error]
        )
    if args.format == "json":
        doc = {
            "header": _header(args, "sweep"),
            "rows": [dict(zip(SWEEP_COLUMNS, row)) for row in table],
            "summary": summary,
        }
        _emit(dumps(doc), args.out)
    else:
        _emit(write_csv(SWEEP_COLUMNS, table), args.out)
        summary_doc = dumps({"header": _header(args, "sweep"), "summary": summary})
        if args.summary:
            _emit(summary_doc, args.summary)
        else:
            sys.stderr.write(summary_doc + "\n")
    return EXIT_NUMERICAL if summary["failed_points"] else EXIT_OK


def cmd_theta(args) -> int:
    if not args.tau or not args.char:
        raise InputError("theta needs --tau and --char")
    tau = parse_tau(args.tau)
    eta = parse_char(args.char, tau.g)
    val = complex(theta_constant(eta, tau, args.eps, args.prec))
    doc = {
        "characteristic": str(eta),
        "parity": parity(eta),
        "value": val,
        "abs": abs(val),
        "truncation_radius": truncation_radius(tau, args.eps),
    }
    if args.format == "csv":
        _emit(write_csv(["characteristic", "parity", "re", "im"], [[str(eta), parity(eta), val.real, val.imag]]), args.out)
    else:
        doc["header"] = _header(args, "theta")
        _emit(dumps(doc), args.out)
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    results = run_selftest(args.seed)
    ok = all(r["passed"] for r in results.values())
    if args.format == "csv":
        rows = [[name, r["passed"], r["detail"]] for name, r in results.items()]
        _emit(write_csv(["check", "passed", "detail"], rows), args.out)
    else:
        _emit(dumps({"header": _header(args, "selftest"), "checks": results, "passed": ok}), args.out)
    return EXIT_OK if ok else EXIT_NUMERICAL


# --- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eps", type=float, default=DEFAULT_EPS, help="theta truncation tolerance")
    common.add_argument("--prec", choices=("double", "extended"), default="double")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default=None)

    p = argparse.ArgumentParser(prog="hyplambda", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("lambda", parents=[common], help="lambda of a curve from its branch points")
    s.add_argument("--curve", help="curve JSON file ('-' for stdin)")
    s.add_argument("--delta-f", dest="delta_f", default=None, help="Faltings delta, adds phi to the report")
    s = sub.add_parser("nonarch", parents=[common], help="psi and lambda of a semistable fiber")
    s.add_argument("--reduction", help="reduction-data JSON file ('-' for stdin)")
    s = sub.add_parser("sweep", parents=[common], help="lambda along a degenerating family")
    s.add_argument("--spec", help="sweep JSON file")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--summary", default=None, help="summary JSON path for CSV output (default stderr)")
    s = sub.add_parser("theta", parents=[common], help="one theta constant (debugging)")
    s.add_argument("--tau", help="period matrix as JSON text or file")
    s.add_argument("--char", help="characteristic as top/bottom bits, e.g. 10/01")
    sub.add_parser("selftest", parents=[common], help="quick invariant checks")
    return p


COMMANDS = {
    "lambda": cmd_lambda,
    "nonarch": cmd_nonarch,
    "sweep": cmd_sweep,
    "theta": cmd_theta,
    "selftest": cmd_selftest,
}


def _error(exc: BaseException, kind: str) -> str:
    return dumps({"error": {"kind": kind, "message": str(exc)}})


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.format is None:
        args.format = "csv" if args.command == "sweep" else "json"
    try:
        if not 0 < args.eps < 1e-3:
            raise InputError("--eps must lie in (0, 1e-3)")
        return COMMANDS[args.command](args)
    except HypLambdaError as exc:
        sys.stdout.write(_error(exc, exc.kind) + "\n")
        return EXIT_NUMERICAL if exc.numerical else EXIT_INPUT
    except (ValueError, TypeError, KeyError) as exc:
        # malformed input that slipped past the parsers
        sys.stdout.write(_error(exc, "InputError") + "\n")
        return EXIT_INPUT
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        sys.stdout.write(_error(exc, "NumericalError") + "\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
