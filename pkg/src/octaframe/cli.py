"""Command-line interface.

Exit codes: 0 success, 1 usage or input error, 2 ran out of iterations
without reaching the requested tolerance.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

import jsonschema
import numpy as np

from . import formats, glyph, projection, sampling, verify
from .descent import STATUS_CONVERGED, DescentConfig
from .field import FieldOptConfig, optimize_field
from .semisymmetry import PenaltyWeights

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_CONVERGENCE = 2


class _Parser(argparse.ArgumentParser):
    """argparse reserves exit code 2 for usage errors; remap to 1 so code 2
    can mean non-convergence."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _parse_octupole(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 7:
        raise ValueError(f"expected 7 comma-separated numbers, got {len(parts)}")
    values = np.array([float(p) for p in parts])
    if not np.all(np.isfinite(values)):
        raise ValueError("octupole coefficients must be finite")
    return values


def cmd_symmetrize(args) -> int:
    try:
        weights = PenaltyWeights(args.w1, args.w2)
        if args.initial == "random":
            a0 = sampling.random_unit_octupole(sampling.make_rng(args.seed))
        else:
            a0 = _parse_octupole(args.initial)
        cfg = DescentConfig(max_iters=args.max_iters, tol=args.tol)
    except ValueError as exc:
        return _fail(str(exc))

    trajectory = projection.semisymmetrize(a0, weights, cfg)
    try:
        formats.write_trajectory_csv(args.out, trajectory)
    except OSError as exc:
        return _fail(str(exc))
    final = trajectory.final
    print(
        f"{trajectory.status}: {len(trajectory.points)} iterates, "
        f"sqrt penalty {formats.format_float(final.sqrt_penalty)}, "
        f"distance {formats.format_float(final.distance)} -> {args.out}"
    )
    return EXIT_OK if trajectory.status == STATUS_CONVERGED else EXIT_NO_CONVERGENCE


def cmd_field_opt(args) -> int:
    try:
        with open(args.spec) as handle:
            doc = json.load(handle)
    except OSError as exc:
        return _fail(f"cannot read spec: {exc}")
    except json.JSONDecodeError as exc:
        return _fail(f"spec is not valid JSON: {exc}")

    try:
        field, cfg = formats.read_field_spec(doc)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "(document root)"
        return _fail(f"spec does not match the schema at {path}: {exc.message}")
    except ValueError as exc:
        return _fail(str(exc))

    if args.levels is not None:
        cfg = FieldOptConfig(
            weights=cfg.weights, descent=cfg.descent, levels=args.levels
        )
    result = optimize_field(field, cfg)
    try:
        formats.write_field_json(args.out, result.field, result.histories)
    except OSError as exc:
        return _fail(str(exc))
    final_energy = result.histories[-1][-1]
    print(
        f"{result.status}: {len(result.histories)} level(s), "
        f"final energy {formats.format_float(final_energy)} -> {args.out}"
    )
    return EXIT_OK if result.status == STATUS_CONVERGED else EXIT_NO_CONVERGENCE


def cmd_glyph(args) -> int:
    try:
        if args.subdiv < 1:
            raise ValueError(f"--subdiv must be >= 1, got {args.subdiv}")
        a = _parse_octupole(args.octupole)
        vertices, faces = glyph.glyph_mesh(a, args.subdiv)
        formats.write_obj(args.out, vertices, faces)
    except (ValueError, OSError) as exc:
        return _fail(str(exc))
    print(f"wrote {len(vertices)} vertices, {len(faces)} faces -> {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        results = verify.run_checks(args.samples, args.seed)
    except ValueError as exc:
        return _fail(str(exc))
    sys.stdout.write(verify.report_text(results, args.samples, args.seed))
    return EXIT_OK if all(r.passed for r in results) else EXIT_USAGE


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="octaframe", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("symmetrize", help="descend the penalty from one octupole")
    p.add_argument("--in", dest="initial", default="random",
                   help='7 comma-separated coefficients, or "random"')
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--w1", type=float, default=5.0)
    p.add_argument("--w2", type=float, default=2.5)
    p.add_argument("--max-iters", type=int, default=2000)
    p.add_argument("--tol", type=float, default=1e-6,
                   help="stop when sqrt(penalty) drops below this")
    p.add_argument("--out", required=True, help="trajectory CSV path")
    p.set_defaults(run=cmd_symmetrize)

    p = sub.add_parser("field-opt", help="optimize a frame field from a JSON spec")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--levels", type=int, default=None,
                   help="override the spec's coarse-to-fine level count")
    p.set_defaults(run=cmd_field_opt)

    p = sub.add_parser("glyph", help="export a spherical glyph as Wavefront OBJ")
    p.add_argument("--octupole", required=True, help="7 comma-separated coefficients")
    p.add_argument("--subdiv", type=int, default=3)
    p.add_argument("--out", required=True)
    p.set_defaults(run=cmd_glyph)

    p = sub.add_parser("verify", help="run the library self-checks")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(run=cmd_verify)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits directly for usage errors and --help; surface the
        # code as a return value so embedding callers are not killed
        return int(exc.code or 0)
    return args.run(args)


if __name__ == "__main__":
    sys.exit(main())
