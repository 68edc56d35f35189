"""Scene file format: versioned JSON with explicit numeric payloads.

Floats are emitted with Python's shortest round-trip representation (at most
17 significant digits), keys in a fixed order, so identical scenes serialize
to identical bytes on every platform.
"""

from __future__ import annotations

import json

import numpy as np

from .dcfun import ConvexPL, DCFun
from .errors import SceneFormatError
from .scene import ConvexPolygon, Disk, PointPiece, Scene, Segment, Slab

FORMAT_VERSION = "1"

__all__ = ["load_scene", "loads_scene", "dump_scene", "dumps_scene", "load_polyline"]


def _require(cond, msg):
    if not cond:
        raise SceneFormatError(msg)


def _num(x, msg="number"):
    _require(isinstance(x, (int, float)) and np.isfinite(x), f"{msg} must be a finite number")
    return float(x)


def _pair(x, msg="point"):
    _require(isinstance(x, (list, tuple)) and len(x) == 2, f"{msg} must be a pair")
    return [_num(x[0], msg), _num(x[1], msg)]


def _dcfun_from_dict(d, ctx) -> DCFun:
    _require(isinstance(d, dict) and "g" in d and "h" in d, f"{ctx}: need g and h components")

    def component(c, name):
        _require(
            isinstance(c, dict) and "breakpoints" in c and "values" in c,
            f"{ctx}.{name}: need breakpoints and values",
        )
        bp = [_num(t, f"{ctx}.{name}.breakpoints") for t in c["breakpoints"]]
        vals = [_num(t, f"{ctx}.{name}.values") for t in c["values"]]
        _require(len(bp) == len(vals) >= 2, f"{ctx}.{name}: array lengths")
        try:
            return ConvexPL(bp, vals)
        except ValueError as exc:
            raise SceneFormatError(f"{ctx}.{name}: {exc}") from exc

    return DCFun(component(d["g"], "g"), component(d["h"], "h"))


def _dcfun_to_dict(f: DCFun) -> dict:
    return {
        "g": {"breakpoints": f.g.x.tolist(), "values": f.g.y.tolist()},
        "h": {"breakpoints": f.h.x.tolist(), "values": f.h.y.tolist()},
    }


def _piece_from_dict(d) -> object:
    _require(isinstance(d, dict), "piece must be an object")
    _require("name" in d and isinstance(d["name"], str), "piece needs a string name")
    _require("kind" in d, f"piece {d.get('name')} needs a kind")
    name, kind = d["name"], d["kind"]
    tol = _num(d.get("tol", 1e-4), f"{name}.tol")
    try:
        if kind == "convex_polygon":
            verts = [_pair(p, f"{name}.vertices") for p in d["vertices"]]
            return ConvexPolygon(np.array(verts), name=name, tol=0.0)
        if kind == "disk":
            return Disk(_pair(d["center"], f"{name}.center"), _num(d["radius"]), name=name, tol=tol)
        if kind == "slab":
            v = np.asarray(_pair(d["direction"], f"{name}.direction"))
            v = v / np.hypot(*v)
            return Slab(
                v,
                _dcfun_from_dict(d["lower"], f"{name}.lower"),
                _dcfun_from_dict(d["upper"], f"{name}.upper"),
                name=name,
                tol=tol,
            )
        if kind == "segment":
            eps = d["endpoints"]
            _require(isinstance(eps, list) and len(eps) == 2, f"{name}.endpoints")
            return Segment(_pair(eps[0]), _pair(eps[1]), name=name)
        if kind == "point":
            return PointPiece(_pair(d["location"], f"{name}.location"), name=name)
    except KeyError as exc:
        raise SceneFormatError(f"piece {name}: missing field {exc}") from exc
    except (ValueError,) as exc:
        raise SceneFormatError(f"piece {name}: {exc}") from exc
    raise SceneFormatError(f"piece {name}: unknown kind {kind!r}")


def _piece_to_dict(p) -> dict:
    if isinstance(p, ConvexPolygon):
        return {"name": p.name, "kind": "convex_polygon", "vertices": p.vertices.tolist()}
    if isinstance(p, Disk):
        return {
            "name": p.name,
            "kind": "disk",
            "center": p.center.tolist(),
            "radius": p.radius,
            "tol": p.tol,
        }
    if isinstance(p, Slab):
        return {
            "name": p.name,
            "kind": "slab",
            "direction": p.v.tolist(),
            "lower": _dcfun_to_dict(p.lower),
            "upper": _dcfun_to_dict(p.upper),
            "tol": p.tol,
        }
    if isinstance(p, Segment):
        return {"name": p.name, "kind": "segment", "endpoints": [p.p.tolist(), p.q.tolist()]}
    if isinstance(p, PointPiece):
        return {"name": p.name, "kind": "point", "location": p.location.tolist()}
    raise SceneFormatError(f"cannot serialize piece of type {type(p).__name__}")


def loads_scene(text: str) -> Scene:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneFormatError(f"not valid JSON: {exc}") from exc
    _require(isinstance(data, dict), "top level must be an object")
    _require(str(data.get("version")) == FORMAT_VERSION, f"unsupported version {data.get('version')!r}")
    _require(isinstance(data.get("pieces"), list) and data["pieces"], "need a nonempty pieces array")
    pieces = [_piece_from_dict(d) for d in data["pieces"]]
    names = [p.name for p in pieces]
    _require(len(set(names)) == len(names), "piece names must be unique")
    window = data.get("window")
    if window is not None:
        _require(isinstance(window, list) and len(window) == 4, "window must be [x0, y0, x1, y1]")
        window = tuple(_num(t, "window") for t in window)
    tol = _num(data.get("tolerance", 1e-9), "tolerance")
    try:
        return Scene(pieces, window=window, tol=tol)
    except ValueError as exc:
        raise SceneFormatError(str(exc)) from exc


def load_scene(path) -> Scene:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_scene(fh.read())


def dumps_scene(scene: Scene) -> str:
    payload = {
        "version": FORMAT_VERSION,
        "tolerance": scene.tol,
        "window": list(scene.window),
        "pieces": [_piece_to_dict(p) for p in scene.pieces],
    }
    return json.dumps(payload, indent=2) + "\n"


def dump_scene(scene: Scene, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_scene(scene))


def load_polyline(path):
    """Polyline file: {"vertices": [[x, y], ...], "closed": bool}."""
    from .planar import Polyline

    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    _require(isinstance(data, dict) and "vertices" in data, "polyline file needs vertices")
    verts = [_pair(p, "vertices") for p in data["vertices"]]
    return Polyline(np.array(verts), closed=bool(data.get("closed", False)))
