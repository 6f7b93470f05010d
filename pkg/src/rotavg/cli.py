"""Command-line front end.

Subcommands:
  average   find and classify critical points of a cost over input rotations
  sweep     trace the three-rotation x-axis family over an alpha grid (CSV)
  check     run the randomized invariant suite
  distance  pairwise d1/d2/d3 table for input rotations

Exit codes: 0 ok, 1 check failure, 2 parse error, 3 validation error,
4 no convergence, 5 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import checks as checks_mod
from . import sweep as sweep_mod
from .costs import CostModel
from .geometry import SampleSet, dist_d1, dist_d2, dist_d3, normalize, quat_from_rotation
from .solvers import FlowConfig, multistart

__all__ = ["main", "entry"]

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_NO_CONVERGENCE = 4
EXIT_IO = 5

ORTHO_TOL = 1e-6  # matrix inputs may be off SO(3) by at most this much


class _ParseError(Exception):
    pass


class _ValidationError(Exception):
    pass


class _IOError(Exception):
    pass


def _load_rotations(path) -> SampleSet:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as e:
        raise _IOError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise _ParseError(f"{path} is not valid JSON: {e}") from e
    if not isinstance(doc, dict) or "rotations" not in doc:
        raise _ParseError('input must be an object with a "rotations" array')
    entries = doc["rotations"]
    if not isinstance(entries, list) or not entries:
        raise _ParseError('"rotations" must be a non-empty array')
    quats = []
    for i, ent in enumerate(entries):
        if not isinstance(ent, dict):
            raise _ParseError(f"rotations[{i}] must be an object")
        if "matrix" in ent:
            try:
                R = np.asarray(ent["matrix"], dtype=float)
            except (TypeError, ValueError) as e:
                raise _ParseError(f"rotations[{i}].matrix is not numeric") from e
            if R.shape != (3, 3):
                raise _ParseError(f"rotations[{i}].matrix must be 3x3")
            if float(np.max(np.abs(R.T @ R - np.eye(3)))) > ORTHO_TOL:
                raise _ValidationError(f"rotations[{i}] is not orthogonal within {ORTHO_TOL:g}")
            if np.linalg.det(R) < 0.0:
                raise _ValidationError(f"rotations[{i}] has determinant -1 (not a rotation)")
            quats.append(quat_from_rotation(R))
        elif "quaternion" in ent:
            try:
                q = np.asarray(ent["quaternion"], dtype=float)
            except (TypeError, ValueError) as e:
                raise _ParseError(f"rotations[{i}].quaternion is not numeric") from e
            if q.shape != (4,):
                raise _ParseError(f"rotations[{i}].quaternion must have 4 components")
            n = float(np.linalg.norm(q))
            if abs(n - 1.0) > ORTHO_TOL:
                raise _ValidationError(f"rotations[{i}] quaternion norm {n:.8f} is not 1")
            quats.append(normalize(q))
        else:
            raise _ParseError(f'rotations[{i}] needs a "matrix" or "quaternion" key')
    return SampleSet.from_quaternions(np.asarray(quats))


def _model_from_args(args, samples) -> CostModel:
    if args.cost == "l2":
        return CostModel.l2_chordal(samples)
    if args.cost == "geodesic":
        return CostModel.geodesic(samples)
    if args.cost == "d3":
        return CostModel.trace_sqrt(samples)
    if args.p is None:
        raise _ParseError("--cost lp requires --p")
    if args.p < 1.0:
        raise _ValidationError("--p must be >= 1")
    return CostModel.lp_chordal(samples, args.p)


def _write_text(path, text) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w") as fh:
        fh.write(text)


def cmd_average(args) -> int:
    samples = _load_rotations(args.input)
    model = _model_from_args(args, samples)
    cfg = FlowConfig() if args.tol is None else FlowConfig(grad_tol=args.tol)
    points = multistart(model, n_starts=args.starts, seed=args.seed, cfg=cfg)
    if not points:
        print("error: no start converged", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    best = points[0].cost
    doc = {
        "cost": {"kind": args.cost, "p": args.p if args.cost == "lp" else None},
        "critical_points": [
            {
                "quaternion": [float(x) for x in pt.q],
                "matrix": [[float(x) for x in row] for row in pt.R],
                "cost": pt.cost,
                "control_norm": pt.control_norm,
                "rotation_residual_norm": pt.rotation_residual_norm,
                "class": (pt.classification or "min").lower(),
                "is_global_min": bool(pt.cost <= best + 1e-9),
            }
            for pt in points
        ],
    }
    try:
        _write_text(args.out, json.dumps(doc, indent=2) + "\n")
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _fmt_angle(x, degrees):
    return f"{math.degrees(x):.6f} deg" if degrees else f"{x:.6f} rad"


def cmd_sweep(args) -> int:
    if args.p is None:
        args.p = 2.0
    if int(round(args.p)) not in (2, 4) or args.p != int(round(args.p)):
        print("error: sweep supports only p = 2 or p = 4", file=sys.stderr)
        return EXIT_PARSE
    lo, hi, step = args.alpha_min, args.alpha_max, args.alpha_step
    if not (-math.pi - 1e-12 <= lo < hi <= math.pi + 1e-12) or step <= 0:
        print("error: need -pi <= alpha-min < alpha-max <= pi and a positive step", file=sys.stderr)
        return EXIT_VALIDATION
    grid = np.arange(lo, hi + 0.5 * step, step)
    records = sweep_mod.theta_min_curve(args.p, grid)
    out = args.out or "sweep.csv"
    try:
        sweep_mod.emit_csv(records, out)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    lines = [f"wrote {len(records)} grid points to {out}"]
    trans = sweep_mod.root_count_transitions(args.p, lo, hi, step)
    if trans:
        for a, before, after in trans:
            lines.append(f"root-count transition at alpha = {_fmt_angle(a, args.degrees)}: {before} -> {after}")
    else:
        lines.append("no root-count transitions")
    ties = sweep_mod.tie_locations(args.p, lo, hi, step)
    if ties:
        for a, labels in ties:
            lines.append(f"tied minima at alpha = {_fmt_angle(a, args.degrees)}: {', '.join(labels)}")
    else:
        lines.append("no ties")
    print("\n".join(lines))
    return EXIT_OK


def cmd_check(args) -> int:
    results = checks_mod.run_all(seed=args.seed, trials=args.trials)
    report = checks_mod.format_report(results)
    try:
        _write_text(args.out, report + "\n")
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK


def cmd_distance(args) -> int:
    samples = _load_rotations(args.input)
    if len(samples) < 2:
        raise _ValidationError("distance needs at least 2 rotations")
    lines = ["i j d1 d2 d3"]
    for i in range(len(samples)):
        for j in range(i + 1, len(samples)):
            Ri, Rj = samples.rotations[i], samples.rotations[j]
            try:
                d2 = f"{dist_d2(Ri, Rj):.12g}"
            except ValueError:
                d2 = "undefined"
            lines.append(f"{i} {j} {dist_d1(Ri, Rj):.12g} {d2} {dist_d3(Ri, Rj):.12g}")
    try:
        _write_text(args.out, "\n".join(lines) + "\n")
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rotavg", description="Rotation averaging on the unit-quaternion sphere")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, needs_input):
        p.add_argument("--cost", choices=["l2", "geodesic", "d3", "lp"], default="l2")
        p.add_argument("--p", type=float, default=None, help="exponent for --cost lp (and sweep)")
        if needs_input:
            p.add_argument("--input", required=True, help="JSON file with a rotations array")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--starts", type=int, default=64)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--degrees", action="store_true", help="report angles in degrees")
        p.add_argument("--tol", type=float, default=None, help="override the flow gradient tolerance")

    p_avg = sub.add_parser("average", help="critical points of a cost over input rotations")
    common(p_avg, needs_input=True)

    p_sweep = sub.add_parser("sweep", help="x-axis three-rotation family over an alpha grid")
    common(p_sweep, needs_input=False)
    p_sweep.add_argument("--alpha-min", type=float, default=-math.pi)
    p_sweep.add_argument("--alpha-max", type=float, default=math.pi)
    p_sweep.add_argument("--alpha-step", type=float, default=0.01)

    p_check = sub.add_parser("check", help="run the invariant suite")
    common(p_check, needs_input=False)
    p_check.add_argument("--trials", type=int, default=1000)

    p_dist = sub.add_parser("distance", help="pairwise d1/d2/d3 table")
    common(p_dist, needs_input=True)
    return ap


_COMMANDS = {
    "average": cmd_average,
    "sweep": cmd_sweep,
    "check": cmd_check,
    "distance": cmd_distance,
}


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors, which matches the parse-error code
        return int(e.code) if e.code else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except _ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except _ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except _IOError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
