"""Batch command-line front end.

Subcommands: measure, check-uwdc, classify, slice, kinematic, turn.
Exit codes: 0 success (certified), 1 refuted, 2 scene file error,
3 degenerate contact, 4 inconclusive.  Randomized commands require --seed.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .classify import classify_point, uwdc_verdict
from .curvature import curvature_scene, slicing_identity_check
from .errors import DegenerateContact, SceneFormatError, TouchingHalfplane
from .kinematic import kinematic_verify
from .planar import decompose_one_lipschitz, signed_turn, turn
from .planar import _decompose as _decompose_open
from .sceneio import load_polyline, load_scene
from .scene import union_region

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_SCHEMA = 2
EXIT_DEGENERATE = 3
EXIT_INCONCLUSIVE = 4


def _parse_pair(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'x,y', got {text!r}")
    return np.array([float(parts[0]), float(parts[1])])


def _parse_window(text: str):
    parts = [float(t) for t in text.split(",")]
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("window must be x0,y0,x1,y1")
    return tuple(parts)


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def cmd_measure(args) -> int:
    scene = load_scene(args.scene)
    ks = [0, 1, 2] if args.k == "all" else [int(args.k)]
    window = args.window
    sys.stdout.write("scene,k,window,value\n")
    wtext = "" if window is None else ";".join(repr(t) for t in window)
    try:
        for k in ks:
            value = curvature_scene(scene, k, window)
            sys.stdout.write(f"{args.scene},{k},{wtext},{value!r}\n")
    except DegenerateContact as exc:
        sys.stderr.write(f"degenerate contact: {exc}\n")
        return EXIT_DEGENERATE
    return EXIT_OK


def cmd_check_uwdc(args) -> int:
    scene = load_scene(args.scene)
    verdict = uwdc_verdict(scene)
    _emit_json(verdict.to_json_dict())
    return {
        "certified": EXIT_OK,
        "refuted": EXIT_REFUTED,
        "inconclusive": EXIT_INCONCLUSIVE,
    }[verdict.status]


def cmd_classify(args) -> int:
    scene = load_scene(args.scene)
    v = args.dir / np.hypot(*args.dir)
    result = classify_point(scene, args.point, v, args.r, args.u)
    _emit_json(result.to_json_dict())
    return EXIT_OK if result.conclusive else EXIT_INCONCLUSIVE


def cmd_slice(args) -> int:
    scene = load_scene(args.scene)
    rng = np.random.default_rng(args.seed)
    x0, y0, x1, y1 = scene.window
    diag = float(np.hypot(x1 - x0, y1 - y0))
    cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
    passes = failures = rejected = 0
    records = []
    trials = 0
    while trials < args.n:
        th = rng.uniform(0, 2 * np.pi)
        v = np.array([np.cos(th), np.sin(th)])
        t = float(np.array([cx, cy]) @ v + rng.uniform(-0.75, 0.75) * diag)
        try:
            rep = slicing_identity_check(scene, v, t)
        except TouchingHalfplane:
            rejected += 1
            continue
        trials += 1
        if rep.ok:
            passes += 1
        else:
            failures += 1
            records.append({"v": v.tolist(), "t": t, "chi_union": rep.chi_union, "chi_sum": rep.chi_sum})
    _emit_json(
        {
            "n": args.n,
            "seed": args.seed,
            "passes": passes,
            "failures": failures,
            "rejected_touching": rejected,
            "failed_cases": records,
        }
    )
    return EXIT_OK if failures == 0 else EXIT_REFUTED


def cmd_kinematic(args) -> int:
    M = load_scene(args.scene_a)
    K = load_scene(args.scene_b)
    try:
        report = kinematic_verify(M, K, args.k, args.samples, args.seed, tol=args.tol)
    except DegenerateContact as exc:
        sys.stderr.write(f"degenerate contact: {exc}\n")
        return EXIT_DEGENERATE
    _emit_json(report.to_json_dict())
    return EXIT_OK if report.ok else EXIT_REFUTED


def cmd_turn(args) -> int:
    if args.polyline:
        loops = [load_polyline(args.scene)]
    else:
        region = union_region(load_scene(args.scene))
        from .planar import Polyline

        loops = [Polyline(verts, closed=True) for verts, _ in region.loops()]
        loops += [
            Polyline(np.asarray(g.coords), closed=False)
            for g in region.lower_dim
            if g.geom_type == "LineString"
        ]
    table = []
    for i, loop in enumerate(loops):
        if loop.closed:
            pieces = decompose_one_lipschitz(loop)
        else:
            pieces = _decompose_open(loop.vertices, closed=False)
        table.append(
            {
                "curve": i,
                "closed": loop.closed,
                "turn": turn(loop),
                "signed_turn": signed_turn(loop),
                "pieces": [
                    {
                        "direction": p.direction.tolist(),
                        "n_vertices": len(p.polyline),
                        "turn": turn(p.polyline),
                    }
                    for p in pieces
                ],
            }
        )
    _emit_json({"curves": table})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="plancurv", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="curvature totals of a scene as CSV")
    p.add_argument("scene")
    p.add_argument("--k", choices=["0", "1", "2", "all"], default="all")
    p.add_argument("--window", type=_parse_window, default=None)
    p.set_defaults(fn=cmd_measure)

    p = sub.add_parser("check-uwdc", help="boundary-decomposition certificate")
    p.add_argument("scene")
    p.set_defaults(fn=cmd_check_uwdc)

    p = sub.add_parser("classify", help="cone type at a boundary point")
    p.add_argument("scene")
    p.add_argument("--point", type=_parse_pair, required=True)
    p.add_argument("--dir", type=_parse_pair, required=True)
    p.add_argument("--r", type=float, default=0.1)
    p.add_argument("--u", type=float, default=0.5)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("slice", help="random halfplane slicing identity trials")
    p.add_argument("scene")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(fn=cmd_slice)

    p = sub.add_parser("kinematic", help="Monte Carlo kinematic formula check")
    p.add_argument("scene_a")
    p.add_argument("scene_b")
    p.add_argument("--k", type=int, choices=[0, 1, 2], default=0)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-2)
    p.set_defaults(fn=cmd_kinematic)

    p = sub.add_parser("turn", help="turn table and 1-Lipschitz decomposition")
    p.add_argument("scene")
    p.add_argument("--polyline", action="store_true", help="input is a polyline file")
    p.set_defaults(fn=cmd_turn)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SceneFormatError as exc:
        sys.stderr.write(f"scene file error: {exc}\n")
        return EXIT_SCHEMA
    except FileNotFoundError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_SCHEMA
    except DegenerateContact as exc:
        sys.stderr.write(f"degenerate contact: {exc}\n")
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
