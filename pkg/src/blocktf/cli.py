"""Command-line front end.

Exit codes: 0 ok, 1 parse/usage error, 2 mathematical error (pole,
degenerate array, divergence, ...), 3 verification failure.  ``--json``
replaces the human-readable output with a report object whose fields are
always ``command, inputs_digest, results, warnings, exit_code`` in that
order, floats rendered with 17 significant digits.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import verification
from .blockdiag import reduce
from .dialysis import (ArmsTrunkParams, blk_diag_rep_at, build_arms_trunk_ode,
                       theorem_checks)
from .dsl import parse, parse_coeffs, parse_ratfunc, parse_signal, print_expr
from .errors import BlockTFError, InputError
from .laplace import exp_order_witness, laplace, lt_exists, numeric_lt
from .odetf import LinODE, transfer_function
from .ratfunc import format_rational
from .simul import (CompartmentModel, Trajectory, simulate_dialysis,
                    time_response)
from .stability import classify

EXIT_OK, EXIT_USAGE, EXIT_MATH, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(InputError):
    pass


class VerificationFailed(BlockTFError):
    def __init__(self, message, results):
        super().__init__(message)
        self.results = results


@dataclass
class RunReport:
    command: str
    inputs_digest: str
    results: object = None
    warnings: list = field(default_factory=list)
    exit_code: int = EXIT_OK

    def to_json(self) -> str:
        return dumps({
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "results": self.results,
            "warnings": list(self.warnings),
            "exit_code": self.exit_code,
        })


def _float_text(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return dumps(str(x))
    return format(x + 0.0, ".17g")  # no "-0"


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with deterministic float rendering (17 significant digits)."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, np.generic):
        obj = obj.item()
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _float_text(obj)
    if isinstance(obj, Fraction):
        return dumps(format_rational(obj))
    if isinstance(obj, str):
        import json
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{dumps(str(k))}: {dumps(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _complex_arg(text: str) -> complex:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise UsageError(f"expected 're,im', got {text!r}") from None
    if len(parts) == 1:
        parts.append(0.0)
    if len(parts) != 2:
        raise UsageError(f"expected 're,im', got {text!r}")
    return complex(*parts)


def _read(path: str, ctx) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except FileNotFoundError:
        raise UsageError(f"file not found: {path}") from None
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    ctx["files"].append(text)
    return text


def _tf_source(args, ctx):
    if args.tf is not None:
        return parse_ratfunc(args.tf)
    if args.file is None:
        raise UsageError("give a .bdg file or --tf 'num;den'")
    return reduce(parse(_read(args.file, ctx)))


def _tf_json(r) -> dict:
    return {"tf": str(r),
            "num": [format_rational(c) for c in r.num.coeffs],
            "den": [format_rational(c) for c in r.den.coeffs]}


def cmd_reduce(args, ctx):
    e = parse(_read(args.file, ctx))
    r = reduce(e)
    return {"expression": print_expr(e), **_tf_json(r)}, str(r)


def cmd_tf(args, ctx):
    ode = LinODE(parse_coeffs(args.out), parse_coeffs(args.inp))
    r = transfer_function(ode)
    return _tf_json(r), str(r)


def _verdict_text(v) -> str:
    lines = [v.classification]
    if v.poles:
        lines.append("poles: " + ", ".join(_pole_text(p) for p in v.poles))
    return "\n".join(lines)


def _pole_text(p: complex) -> str:
    if p.imag == 0:
        return f"{p.real:.12g}"
    return f"{p.real:.12g}{p.imag:+.12g}j"


def cmd_stability(args, ctx):
    v = classify(_tf_source(args, ctx), args.tol)
    if v.degenerate:
        ctx["warnings"].append("degenerate Routh array; verdict from numerical poles")
    return v.to_json(), _verdict_text(v)


def cmd_laplace(args, ctx):
    g = parse_signal(args.signal)
    G = laplace(g)
    w = exp_order_witness(g)
    results = {"signal": str(g), "transform": str(G),
               "witness": {"M": w.M, "a": w.a}}
    lines = [f"L[{g}] = {G}", f"exponential order: M = {w.M:.12g}, a = {w.a:.12g}"]
    if args.at is not None:
        s0 = args.at
        exists = lt_exists(g, s0)
        value = G(s0)
        results["at"] = [s0.real, s0.imag]
        results["lt_exists"] = exists
        results["value"] = [value.real, value.imag]
        lines.append(f"F({s0}) = {value:.12g}")
        if exists:
            approx = numeric_lt(g, s0, steps=args.steps)
            results["numeric"] = [approx.real, approx.imag]
            lines.append(f"quadrature: {approx:.12g}")
        else:
            results["numeric"] = None
            ctx["warnings"].append(f"Re s0 <= {w.a:.12g}: outside the witnessed region "
                                   "of convergence; value is the analytic continuation")
    return results, "\n".join(lines)


def _grid(t_end, dt):
    if not dt > 0 or not t_end > 0:
        raise UsageError("--t-end and --dt must be positive")
    return dt * np.arange(int(round(t_end / dt)) + 1)


def _emit_csv(traj: Trajectory, args, ctx, results):
    if args.output:
        traj.to_csv(args.output)
        results["output"] = args.output
        return f"wrote {len(traj.times)} rows to {args.output}"
    csv = traj.to_csv()
    results["csv"] = csv
    return csv.rstrip("\n")


def cmd_simulate(args, ctx):
    r = _tf_source(args, ctx)
    t = _grid(args.t_end, args.dt)
    y = time_response(r, args.kind, t)
    traj = Trajectory(t, y.reshape(-1, 1), ("y",))
    results = {"tf": str(r), "kind": args.kind, "samples": len(t),
               "y_final": float(y[-1])}
    return results, _emit_csv(traj, args, ctx, results)


def cmd_dialysis(args, ctx):
    p = ArmsTrunkParams(args.kA, args.kTA)
    ode = build_arms_trunk_ode(p)
    r = transfer_function(ode)
    results = {
        "ode": {"out": [format_rational(c) for c in ode.out_coeffs],
                "in": [format_rational(c) for c in ode.in_coeffs]},
        "block_diagram": print_expr(blk_diag_rep_at(p)),
        "transfer_function": str(r),
        "dc_gain": format_rational(r.num(0) / r.den(0)),
    }
    lines = [f"transfer function VA/VT: {r}", f"DC gain: {results['dc_gain']}"]
    failed = False
    if args.check_theorems:
        report = theorem_checks(p)
        results["theorems"] = report.to_json()
        ctx["warnings"].extend(report.notes)
        lines.append(f"block diagram == ODE transfer function: {report.routes_agree}")
        lines.append(f"kTA = 1 gives 1/(s + kA): {report.unit_gain_conclusion}")
        lines.append(f"stable: {report.stable}")
        failed = not report.all_passed
    if args.simulate:
        m = CompartmentModel(float(p.kA), float(args.kL or p.kA), float(p.kTA),
                             float(args.kTL or p.kTA), ufr=args.ufr)
        traj = simulate_dialysis(m, args.v0, args.t_end, args.dt)
        if traj.negative_volume:
            ctx["warnings"].append("a compartment volume went negative")
        sim = {"samples": len(traj.times),
               "final": dict(zip(traj.labels, map(float, traj.states[-1])))}
        results["simulation"] = sim
        lines.append(_emit_csv(traj, args, ctx, sim))
    if failed:
        raise VerificationFailed("theorem checks failed", results)
    return results, "\n".join(lines)


def cmd_verify(args, ctx):
    checks = verification.run_all()
    results = {"checks": [c.to_json() for c in checks],
               "passed": sum(c.passed for c in checks),
               "failed": sum(not c.passed for c in checks)}
    text = "\n".join(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}" for c in checks)
    if results["failed"]:
        raise VerificationFailed(text, results)
    return results, text


def _rational_arg(text):
    try:
        return parse_coeffs(text)[0] if "," not in text else None
    except BlockTFError:
        return None


def _positive_rational(text):
    value = _rational_arg(text)
    if value is None:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")
    return value


def _v0(text):
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected VA,VT,VL, got {text!r}") from None
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected VA,VT,VL, got {text!r}")
    return parts


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON run report")

    parser = _Parser(prog="blocktf", parents=[common],
                     description="Block-diagram transfer functions, Laplace "
                                 "transforms and stability checks.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("reduce", parents=[common], help="reduce a .bdg file")
    p.add_argument("file")
    p.set_defaults(handler=cmd_reduce)

    p = sub.add_parser("tf", aliases=["ode"], parents=[common],
                       help="transfer function of a linear ODE")
    p.add_argument("--out", required=True, help="output-side coefficients, ascending")
    p.add_argument("--in", dest="inp", required=True,
                   help="input-side coefficients, ascending")
    p.set_defaults(handler=cmd_tf)

    def tf_source(p):
        p.add_argument("file", nargs="?")
        p.add_argument("--tf", help="transfer function as 'num;den'")

    p = sub.add_parser("stability", parents=[common], help="stability verdict")
    tf_source(p)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(handler=cmd_stability)

    p = sub.add_parser("laplace", parents=[common], help="Laplace transform of a signal")
    p.add_argument("--signal", required=True)
    p.add_argument("--at", type=_complex_arg, help="evaluate at s0 = 're,im'")
    p.add_argument("--steps", type=int, default=20000)
    p.set_defaults(handler=cmd_laplace)

    p = sub.add_parser("simulate", parents=[common], help="impulse/step response as CSV")
    tf_source(p)
    p.add_argument("--kind", choices=("step", "impulse"), default="step")
    p.add_argument("--t-end", type=float, default=10.0)
    p.add_argument("--dt", type=float, default=1e-2)
    p.add_argument("--output", help="CSV path (default: standard output)")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("dialysis", parents=[common], help="arms/trunk case study")
    p.add_argument("--kA", type=_positive_rational, required=True)
    p.add_argument("--kTA", type=_positive_rational, required=True)
    p.add_argument("--check-theorems", action="store_true")
    p.add_argument("--simulate", action="store_true",
                   help="integrate the three-compartment model")
    p.add_argument("--kL", type=_positive_rational)
    p.add_argument("--kTL", type=_positive_rational)
    p.add_argument("--v0", type=_v0, default=[1.0, 1.0, 1.0])
    p.add_argument("--ufr", type=float, default=0.0)
    p.add_argument("--t-end", type=float, default=10.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--output", help="CSV path (default: standard output)")
    p.set_defaults(handler=cmd_dialysis)

    p = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    p.set_defaults(handler=cmd_verify)
    return parser


def _digest(argv, files) -> str:
    h = hashlib.sha256()
    for part in list(argv) + list(files):
        h.update(part.encode("utf-8"))
        h.update(b"\0")
    return h.hexdigest()


def run(argv=None, out=None, err=None) -> RunReport:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    json_mode = "--json" in argv
    ctx = {"files": [], "warnings": []}
    command = next((a for a in argv if not a.startswith("-")), "")
    report = RunReport(command=command, inputs_digest="")
    text = None
    try:
        args = build_parser().parse_args(argv)
        if not getattr(args, "handler", None):
            raise UsageError("missing command")
        report.command = args.command
        report.results, text = args.handler(args, ctx)
    except SystemExit as exc:  # --help
        report.exit_code = EXIT_OK if not exc.code else EXIT_USAGE
    except VerificationFailed as exc:
        report.results, text = exc.results, str(exc)
        report.exit_code = EXIT_VERIFY
    except (ValueError, OSError) as exc:  # InputError and bad files
        report.results = {"error": str(exc), "kind": type(exc).__name__}
        report.exit_code = EXIT_USAGE
    except ArithmeticError as exc:  # MathError, division by zero, overflow
        report.results = {"error": str(exc), "kind": type(exc).__name__}
        report.exit_code = EXIT_MATH
    report.warnings = list(ctx["warnings"])
    report.inputs_digest = _digest(argv, ctx["files"])
    if json_mode:
        out.write(report.to_json() + "\n")
    else:
        if text:
            out.write(text + "\n")
        for w in report.warnings:
            err.write(f"warning: {w}\n")
        if report.exit_code in (EXIT_USAGE, EXIT_MATH):
            err.write(f"error: {report.results['error']}\n")
    return report


def main(argv=None) -> int:
    return run(argv).exit_code


if __name__ == "__main__":
    sys.exit(main())
