"""Command-line front end: fidelity reports, error-grid sweeps, rotor design.

Exit codes: 0 success, 2 usage error, 3 input-data error, 4 internal
consistency failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

from .design import DesignProblem, ErrorGrid, optimize, sweep_reports
from .fidelity import InternalConsistencyError, report
from .library import LibraryError, builtin_library, load_library, save_library
from .pulses import CompositeSequence, ErrorPoint, TargetRotation, sequence_propagator, target_propagator

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_INTERNAL = 4

CSV_HEADER = ["sequence", "eps_p", "f_off", "f_eq8", "f_quat", "eff_x", "eff_y", "eff_z"]

_NAMED_AXES = {"x": (90.0, 0.0), "y": (90.0, 90.0), "z": (0.0, 0.0)}


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


def _fmt(x: float) -> str:
    # fixed 12-decimal formatting; normalize -0.0 so output is stable
    return f"{0.0 if x == 0.0 else x:.12f}"


def _parse_range(spec: str) -> tuple[float, float, int]:
    parts = spec.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected min:max:count, got {spec!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected min:max:count, got {spec!r}") from None
    if count < 1:
        raise argparse.ArgumentTypeError(f"count must be >= 1, got {count}")
    if lo > hi:
        raise argparse.ArgumentTypeError(f"min {lo} exceeds max {hi}")
    return lo, hi, count


def _parse_target(tokens: list[str]) -> TargetRotation:
    values: dict[str, str] = {}
    for token in tokens:
        key, sep, value = token.partition("=")
        if not sep or key not in ("axis", "angle"):
            raise UsageError(f"bad target token {token!r}; expected axis=... or angle=...")
        if key in values:
            raise UsageError(f"duplicate target key {key!r}")
        values[key] = value
    for key in ("axis", "angle"):
        if key not in values:
            raise UsageError(f"target is missing {key}=...")
    axis = values["axis"]
    if axis in _NAMED_AXES:
        polar_deg, azimuth_deg = _NAMED_AXES[axis]
    else:
        parts = axis.split(",")
        try:
            polar_deg, azimuth_deg = (float(p) for p in parts)
        except ValueError:
            raise UsageError(
                f"axis must be x, y, z, or theta,phi in degrees, got {axis!r}"
            ) from None
    try:
        angle_deg = float(values["angle"])
    except ValueError:
        raise UsageError(f"angle must be a number in degrees, got {values['angle']!r}") from None
    return TargetRotation(
        math.radians(polar_deg), math.radians(azimuth_deg), math.radians(angle_deg)
    )


def _load_sequences(path: Path | None) -> dict[str, CompositeSequence]:
    if path is None:
        return builtin_library()
    return load_library(path)


def _lookup(sequences: dict[str, CompositeSequence], name: str) -> CompositeSequence:
    try:
        return sequences[name]
    except KeyError:
        available = ", ".join(sorted(sequences))
        raise DataError(f"unknown sequence {name!r}; available: {available}") from None


def cmd_fidelity(args: argparse.Namespace) -> int:
    sequences = _load_sequences(args.library)
    seq = _lookup(sequences, args.sequence)
    target = _parse_target(args.target)
    u = target_propagator(target)
    v = sequence_propagator(seq, ErrorPoint(args.eps_p, args.f_off))
    rep = report(
        u,
        v,
        mc_samples=args.mc_samples,
        mc_seed=args.seed if args.mc_samples is not None else None,
    )
    fields: list[tuple[str, object]] = [
        ("sequence", seq.name),
        ("eps_p", args.eps_p),
        ("f_off", args.f_off),
        ("f_eq8", rep.fidelity),
        ("f_quat", rep.quaternion_fidelity),
        ("eff_x", rep.eff_x),
        ("eff_y", rep.eff_y),
        ("eff_z", rep.eff_z),
    ]
    if rep.mc_fidelity is not None:
        fields += [
            ("f_mc", rep.mc_fidelity),
            ("mc_samples", rep.mc_samples),
            ("mc_seed", rep.mc_seed),
        ]
    if args.json:
        print(json.dumps(dict(fields), indent=2))
    else:
        for key, value in fields:
            print(f"{key} = {_fmt(value) if isinstance(value, float) else value}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    sequences = _load_sequences(args.library)
    seq = _lookup(sequences, args.sequence)
    target = _parse_target(args.target)
    grid = ErrorGrid(*args.eps, *args.off)
    rows = sweep_reports(seq, target, grid)
    with open(args.output, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for eps, off, rep in rows:
            writer.writerow(
                [
                    seq.name,
                    _fmt(eps),
                    _fmt(off),
                    _fmt(rep.fidelity),
                    _fmt(rep.quaternion_fidelity),
                    _fmt(rep.eff_x),
                    _fmt(rep.eff_y),
                    _fmt(rep.eff_z),
                ]
            )
    print(f"wrote {len(rows)} rows to {args.output}")
    return EXIT_OK


def _problem_from_document(data) -> tuple[DesignProblem, str]:
    if not isinstance(data, dict):
        raise DataError("problem document must be a JSON object")

    def require(key):
        if key not in data:
            raise DataError(f"problem document is missing {key!r}")
        return data[key]

    target_doc = require("target")
    if not isinstance(target_doc, dict) or "axis" not in target_doc or "angle_deg" not in target_doc:
        raise DataError("target must be an object with 'axis' and 'angle_deg'")
    axis = target_doc["axis"]
    if isinstance(axis, str) and axis in _NAMED_AXES:
        polar_deg, azimuth_deg = _NAMED_AXES[axis]
    elif isinstance(axis, list) and len(axis) == 2:
        polar_deg, azimuth_deg = float(axis[0]), float(axis[1])
    else:
        raise DataError("target.axis must be 'x', 'y', 'z', or [polar_deg, azimuth_deg]")
    target = TargetRotation(
        math.radians(polar_deg),
        math.radians(azimuth_deg),
        math.radians(float(target_doc["angle_deg"])),
    )

    initial_doc = require("initial")
    if not isinstance(initial_doc, list) or not initial_doc:
        raise DataError("initial must be a non-empty list of pulses")
    from .library import _parse_pulse  # same pulse schema as library files

    name = data.get("name", "optimized")
    if not isinstance(name, str) or not name:
        raise DataError("name must be a non-empty string")
    pulses = tuple(_parse_pulse(p, f"initial[{k}]") for k, p in enumerate(initial_doc))
    initial = CompositeSequence(name, pulses)

    free_doc = require("free")
    if not isinstance(free_doc, list) or len(free_doc) != len(pulses):
        raise DataError("free must be a list with one {angle, phase} entry per pulse")
    free_angles = []
    free_phases = []
    for k, entry in enumerate(free_doc):
        if not isinstance(entry, dict):
            raise DataError(f"free[{k}] must be an object with boolean 'angle' and 'phase'")
        free_angles.append(bool(entry.get("angle", False)))
        free_phases.append(bool(entry.get("phase", False)))

    grid_doc = require("grid")
    if not isinstance(grid_doc, dict) or "eps_p" not in grid_doc or "f_off" not in grid_doc:
        raise DataError("grid must be an object with 'eps_p' and 'f_off' ranges")

    def parse_grid_range(key):
        triple = grid_doc[key]
        if not isinstance(triple, list) or len(triple) != 3:
            raise DataError(f"grid.{key} must be [min, max, count]")
        return float(triple[0]), float(triple[1]), int(triple[2])

    eps = parse_grid_range("eps_p")
    off = parse_grid_range("f_off")

    try:
        problem = DesignProblem(
            initial=initial,
            free_angles=tuple(free_angles),
            free_phases=tuple(free_phases),
            target=target,
            grid=ErrorGrid(*eps, *off),
            objective=data.get("objective", "mean"),
            budget=int(data.get("budget", 2000)),
            seed=int(data.get("seed", 0)),
        )
    except ValueError as exc:
        raise DataError(str(exc)) from None
    return problem, name


def cmd_optimize(args: argparse.Namespace) -> int:
    try:
        text = Path(args.problem).read_text()
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(
            f"{args.problem}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None
    problem, name = _problem_from_document(data)
    result = optimize(problem)
    save_library({name: result.sequence}, args.output)
    print(f"objective = {problem.objective}")
    print(f"objective_initial = {_fmt(result.initial_objective)}")
    print(f"objective_final = {_fmt(result.objective)}")
    print(f"evaluations = {result.evaluations}")
    print(f"restarts = {result.restarts}")
    print(f"converged = {'true' if result.converged else 'false'}")
    print(f"sequence_file = {args.output}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rotorfid",
        description="Rotor fidelity of spin-1/2 composite pulses: reports, sweeps, design.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    f = sub.add_parser("fidelity", help="fidelity report for one sequence at one error point")
    f.add_argument("--library", type=Path, default=None, help="pulse library JSON (default: built-in)")
    f.add_argument("--sequence", required=True, help="sequence name in the library")
    f.add_argument(
        "--target",
        nargs="+",
        required=True,
        metavar="KEY=VALUE",
        help="axis=<x|y|z|theta,phi> angle=<degrees> (axis angles in degrees)",
    )
    f.add_argument("--eps-p", type=float, default=0.0, help="pulse-length error fraction")
    f.add_argument("--f-off", type=float, default=0.0, help="off-resonance fraction")
    f.add_argument("--mc-samples", type=int, default=None, help="add a Monte Carlo estimate")
    f.add_argument("--seed", type=int, default=0, help="Monte Carlo seed")
    f.add_argument("--json", action="store_true", help="emit one JSON document instead of key = value lines")
    f.set_defaults(func=cmd_fidelity)

    s = sub.add_parser("sweep", help="fidelity sweep over an error grid, written as CSV")
    s.add_argument("--library", type=Path, default=None, help="pulse library JSON (default: built-in)")
    s.add_argument("--sequence", required=True)
    s.add_argument("--target", nargs="+", required=True, metavar="KEY=VALUE")
    s.add_argument("--eps", type=_parse_range, default=(-0.2, 0.2, 21), metavar="MIN:MAX:COUNT")
    s.add_argument("--off", type=_parse_range, default=(-1.0, 1.0, 21), metavar="MIN:MAX:COUNT")
    s.add_argument("--output", required=True, type=Path, help="CSV output path")
    s.set_defaults(func=cmd_sweep)

    o = sub.add_parser("optimize", help="design a composite rotor from a problem spec file")
    o.add_argument("problem", type=Path, help="JSON problem document")
    o.add_argument("--output", required=True, type=Path, help="optimized sequence library path")
    o.set_defaults(func=cmd_optimize)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, LibraryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except InternalConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
