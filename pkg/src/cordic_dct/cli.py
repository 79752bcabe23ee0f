"""Command-line front end: decompose, table, rotate, dct, eval.

Every run prints a final machine-readable ``status:`` line and exits 0
only if no operation failed.  Angle arguments accept plain radians
(``0.3927``), multiples of pi (``pi/16``, ``3pi/8``, ``-pi/4``) and
degrees (``deg:22.5``).
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys

import numpy as np

from . import codec, images, pgm, planner, rotator
from .dct8 import DctEngine, dct2d, dct2d_oracle, dct8_cordic, dct8_oracle
from .fixedpoint import ArithmeticMode, OverflowPolicy
from .planner import IndexPolicy

_PI_RE = re.compile(r"^([+-]?)(\d+(?:\.\d+)?)?\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d+)?))?$")


def parse_angle(text: str) -> float:
    """Parse an angle expression to radians."""
    s = text.strip().lower()
    if s.startswith("deg:"):
        return math.radians(float(s[4:]))
    m = _PI_RE.match(s)
    if m:
        sign = -1.0 if m.group(1) == "-" else 1.0
        num = float(m.group(2)) if m.group(2) else 1.0
        den = float(m.group(3)) if m.group(3) else 1.0
        return sign * num * math.pi / den
    return float(s)


def format_angle(theta: float) -> str:
    """Decimal radians; parse_angle(format_angle(x)) == x."""
    return repr(theta)


def _parse_policy(name: str) -> IndexPolicy:
    return IndexPolicy.NEAREST if name == "nearest" else IndexPolicy.LITERAL


def _parse_mode(args) -> ArithmeticMode:
    if args.mode == "float":
        return ArithmeticMode.exact()
    return ArithmeticMode.fixed(
        total_bits=args.bits, frac_bits=args.frac, overflow=OverflowPolicy.SATURATE
    )


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _add_common(p, bits_default=16, frac_default=12):
    p.add_argument("--policy", choices=["nearest", "literal"], default="nearest")
    p.add_argument("--mode", choices=["float", "fixed"], default="float")
    p.add_argument("--bits", type=int, default=bits_default, help="fixed-point total bits")
    p.add_argument("--frac", type=int, default=frac_default, help="fixed-point fraction bits")
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p.add_argument("--out", default=None, help="write output to this path instead of stdout")


def cmd_decompose(args) -> int:
    theta = parse_angle(args.angle)
    plan = planner.decompose(theta, args.eps, _parse_policy(args.policy))
    row = planner.generate_table([theta], [args.eps], _parse_policy(args.policy))
    if args.format == "csv":
        _emit(planner.table_to_csv(row), args.out)
    elif args.format == "json":
        _emit(planner.table_to_json(row), args.out)
    else:
        lines = []
        if not plan.steps:
            lines.append(f"angle {format_angle(theta)} already within eps={args.eps:g}: empty plan")
        else:
            sigma = " ".join("+" if d > 0 else "-" for d in plan.directions)
            lines.append(f"i: {'/'.join(map(str, plan.indices))}  sigma: {sigma}")
        lines.append(f"residual: {plan.residual!r}")
        lines.append(f"gain: {plan.gain!r}")
        lines.append(f"reconstructed: {planner.reconstruct_angle(plan)!r}")
        _emit("\n".join(lines) + "\n", args.out)
    return 0


PAPER_TABLE_ANGLES = ("pi/4", "3pi/8", "pi/16", "3pi/16")
PAPER_TABLE_EPSILONS = (1e-3, 1e-4)


def cmd_table(args) -> int:
    if args.paper:
        angle_exprs = list(PAPER_TABLE_ANGLES)
        epsilons = list(PAPER_TABLE_EPSILONS)
    else:
        angle_exprs = [a for a in (args.angles.split(",") if args.angles else []) if a]
        epsilons = [float(e) for e in args.eps_list.split(",")] if args.eps_list else [args.eps]
    angles = [parse_angle(a) for a in angle_exprs]
    rows = planner.generate_table(angles, epsilons, _parse_policy(args.policy))
    if args.format == "json":
        _emit(planner.table_to_json(rows), args.out)
    elif args.format == "csv":
        _emit(planner.table_to_csv(rows), args.out)
    else:
        lines = [f"{'angle':>12}  {'eps':>8}  {'i':<16} {'sigma':<10} {'residual':>13}  gain"]
        for k, r in enumerate(rows):
            expr = angle_exprs[k // len(epsilons)]
            lines.append(
                f"{expr:>12}  {r.epsilon:>8g}  {r.indices_str or '-':<16} "
                f"{r.directions_str or '-':<10} {r.residual:>13.3e}  {r.gain:.6f}"
            )
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_rotate(args) -> int:
    theta = parse_angle(args.angle)
    plan = planner.decompose(theta, args.eps, _parse_policy(args.policy))
    mode = _parse_mode(args)
    v = rotator.Vector2(args.x, args.y)
    got = rotator.apply_plan(v, plan, mode, compensate=not args.no_compensate)
    ideal = rotator.ideal_rotation_matrix(theta).apply(v)
    err = math.hypot(got.x - ideal.x, got.y - ideal.y)
    lines = [
        f"rotated: ({got.x!r}, {got.y!r})",
        f"ideal:   ({ideal.x!r}, {ideal.y!r})",
        f"error:   {err:.3e}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _read_numbers(source: str) -> list[float]:
    if source == "-":
        text = sys.stdin.read()
    else:
        with open(source) as fh:
            text = fh.read()
    return [float(tok) for tok in text.replace(",", " ").split()]


def cmd_dct(args) -> int:
    values = _read_numbers(args.input)
    if len(values) not in (8, 64):
        raise ValueError(f"expected 8 or 64 numbers, got {len(values)}")
    engine = DctEngine(epsilon=args.eps, policy=_parse_policy(args.policy), mode=_parse_mode(args))
    if len(values) == 8:
        got = dct8_cordic(np.array(values), engine)
        ref = dct8_oracle(np.array(values))
    else:
        block = np.array(values).reshape(8, 8)
        got = dct2d(block, engine)
        ref = dct2d_oracle(block)
    err = float(np.max(np.abs(got - ref)))
    if args.format == "json":
        _emit(
            json.dumps({"coefficients": got.tolist(), "max_error_vs_oracle": err}, indent=2),
            args.out,
        )
    else:
        flat = got.reshape(-1)
        lines = ["coefficients: " + " ".join(f"{c:.6f}" for c in flat)]
        lines.append(f"max error vs oracle: {err:.3e}")
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_eval(args) -> int:
    img = pgm.read_pgm(args.image) if args.image != "synthetic" else images.photo_proxy()
    qualities = [int(q) for q in args.qualities.split(",")]
    epsilons = [float(e) for e in args.epsilons.split(",")]
    mode = _parse_mode(args)
    report = codec.sweep(
        img, epsilons, qualities, policy=_parse_policy(args.policy),
        mode=None if not mode.is_fixed else mode,
        fold_into_quantizer=args.fold_into_quantizer,
    )
    if args.format == "json":
        _emit(report.to_json(), args.out)
    else:
        _emit(report.to_csv(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cordic-dct")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="micro-rotation plan for one angle")
    p.add_argument("--angle", required=True)
    p.add_argument("--eps", type=float, default=1e-4)
    _add_common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("table", help="decomposition table for angle/eps grids")
    p.add_argument("--paper", action="store_true",
                   help="the four DCT rotation angles at eps 1e-3 and 1e-4")
    p.add_argument("--angles", default="", help="comma-separated angle expressions")
    p.add_argument("--eps", type=float, default=1e-4)
    p.add_argument("--eps-list", dest="eps_list", default="", help="comma-separated tolerances")
    _add_common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("rotate", help="rotate a 2-vector through a plan")
    p.add_argument("--angle", required=True)
    p.add_argument("--eps", type=float, default=1e-4)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--no-compensate", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_rotate)

    p = sub.add_parser("dct", help="8-point or 8x8 DCT of numbers from a file or stdin")
    p.add_argument("--input", default="-", help="path or '-' for stdin")
    p.add_argument("--eps", type=float, default=1e-4)
    _add_common(p, bits_default=24, frac_default=8)
    p.set_defaults(func=cmd_dct)

    p = sub.add_parser("eval", help="PSNR sweep over qualities and precisions")
    p.add_argument("image", help="PGM path, or 'synthetic' for the bundled test image")
    p.add_argument("--qualities", default="95,90,85,80,75")
    p.add_argument("--epsilons", default="1e-3,1e-4")
    p.add_argument("--fold-into-quantizer", dest="fold_into_quantizer", action="store_true",
                   help="skip transform post-scales and divide them into the quantizer")
    _add_common(p, bits_default=24, frac_default=8)
    p.set_defaults(func=cmd_eval)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rc = args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"status: error: {exc}")
        return 1
    print("status: ok")
    return rc


if __name__ == "__main__":
    sys.exit(main())
