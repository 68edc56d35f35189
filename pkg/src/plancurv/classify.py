"""Boundary cone-type classification and the UWDC certification pipeline.

A boundary point is examined in the frame that sends the origin to the point
and (1, 0) to the query direction; the boundary inside the doubled cone is
extracted as a family of piecewise-linear graphs through the apex and tested
against the covering, flat-start and gap ("sausage") conditions.  The
scene-level kinds are T1 (cone meets the set only at the apex), T2 (cone
inside the set) and T3 (boundary is a sorted family of flat-starting
graphs); single pieces refine T3 into hypograph / epigraph / between-graphs
kinds T3/T4/T5.  "inconclusive" is a first-class outcome: the conditions are
existentially quantified in the scale, so a fixed-scale failure only means
"retry smaller".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import shapely
from shapely.geometry import LineString, Point as ShPoint, Polygon
from shapely.ops import linemerge, unary_union

from . import dcfun
from .dcfun import DCFun
from .errors import BadBounds, NotBoundaryPoint
from .planar import Isometry, Polyline, angle, dc_certify, decompose_one_lipschitz, turn
from .planar import _decompose as _decompose_open
from .region import PolyRegion
from .scene import Scene, complement_components, polygonize, union_region

__all__ = [
    "ConeType",
    "UWDCVerdict",
    "ExceptionalDirections",
    "classify_point",
    "classify_piece_point",
    "exceptional_directions",
    "uwdc_verdict",
    "aura_eval",
    "weak_regular_check",
]

APEX_TOL_FACTOR = 1e-6


@dataclass
class ConeType:
    """Classification outcome at one boundary point, direction and scale."""

    kind: str                      # "T1".."T5" or "inconclusive"
    r: float
    u: float
    witness: list = field(default_factory=list)  # graph functions (grid, values)
    detail: str = ""

    @property
    def conclusive(self) -> bool:
        return self.kind != "inconclusive"

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "r": self.r,
            "u": self.u,
            "n_graphs": len(self.witness),
            "graphs": [
                {"breakpoints": list(map(float, g)), "values": list(map(float, v))}
                for g, v in self.witness
            ],
            "detail": self.detail,
        }


def _cone_polygon(r: float, u: float, widen: int) -> Polygon:
    a = widen * u * r
    return Polygon([(0.0, 0.0), (r, -a), (r, a)])


def _region_in_frame(region: PolyRegion, x, v) -> PolyRegion:
    frame = Isometry(np.asarray(x, dtype=float), np.asarray(v, dtype=float)).invert()
    return region.transformed(frame)


def _boundary_linework(region: PolyRegion):
    parts = [p.boundary for p in region.polygons]
    parts += [g for g in region.lower_dim if isinstance(g, LineString)]
    return unary_union(parts) if parts else LineString()


def _max_norm(geom) -> float:
    if geom.is_empty:
        return 0.0
    xs, ys = [], []
    for g in _iter_parts(geom):
        if g.geom_type == "Polygon":
            c = np.asarray(g.exterior.coords)
        elif g.geom_type == "LineString":
            c = np.asarray(g.coords)
        else:
            c = np.array([[g.x, g.y]])
        xs.append(np.abs(c[:, 0]).max())
        ys.append(np.abs(c[:, 1]).max())
    return float(max(max(xs), max(ys)))


def _iter_parts(geom):
    if hasattr(geom, "geoms"):
        for g in geom.geoms:
            yield from _iter_parts(g)
    elif not geom.is_empty:
        yield geom


def _extract_graphs(region_f: PolyRegion, r: float, u: float, apex_tol: float):
    """Boundary inside the doubled cone, assembled into full graphs over [0, R].

    Boundary arcs need not individually span the cone (sausage chains join
    partial arcs at touch points); the k-th assembled function takes the
    k-th smallest arc height, clamped to the available count, and the
    assembly is rejected unless every function comes out continuous.
    Returns (functions, reason); functions is None on failure.
    """
    cone2 = _cone_polygon(r, u, widen=2)
    lines = _boundary_linework(region_f)
    w = lines.intersection(cone2)
    chunks = [g for g in _iter_parts(w) if g.geom_type == "LineString" and g.length > apex_tol]
    if not chunks:
        return None, "no boundary inside the cone"
    merged = unary_union(chunks)
    if merged.geom_type != "LineString":
        merged = linemerge(merged)
    chunks = [g for g in _iter_parts(merged) if g.geom_type == "LineString"]
    # two branches leaving the apex may have been merged into one V-shaped
    # chain; split every chunk at an interior apex visit
    split_chunks = []
    for ch in chunks:
        pts = np.asarray(ch.coords)
        near = np.hypot(pts[:, 0], pts[:, 1]) <= apex_tol
        cut = [i for i in range(1, len(pts) - 1) if near[i]]
        if not cut:
            split_chunks.append(ch)
            continue
        prev = 0
        for i in cut + [len(pts) - 1]:
            if i - prev >= 1:
                split_chunks.append(LineString(pts[prev : i + 1]))
            prev = i
    chunks = [ch for ch in split_chunks if ch.length > apex_tol]
    arcs = []
    for ch in chunks:
        pts = np.asarray(ch.coords)
        if np.any(np.abs(pts[:, 1]) > u * pts[:, 0] + apex_tol):
            return None, "boundary leaves the inner cone"
        if pts[0][0] > pts[-1][0]:
            pts = pts[::-1]
        if np.any(np.diff(pts[:, 0]) <= 0):
            return None, "boundary chunk is not a graph over the axis"
        if pts[0][0] <= apex_tol:
            pts = np.vstack([[0.0, 0.0], pts]) if pts[0][0] > 0 else pts
        arcs.append(pts)
    R = max(pts[-1][0] for pts in arcs)
    if R < 0.5 * r:
        return None, "boundary stops inside the cone"
    grid = np.unique(np.concatenate([pts[:, 0] for pts in arcs]))
    grid = grid[grid <= R + apex_tol]
    alive_lo = np.array([pts[0][0] for pts in arcs])
    alive_hi = np.array([pts[-1][0] for pts in arcs])
    cells = list(zip(grid[:-1], grid[1:]))
    cell_arcs = []
    for lo, hi in cells:
        idx = np.flatnonzero((alive_lo <= lo + apex_tol) & (alive_hi >= hi - apex_tol))
        if len(idx) == 0:
            return None, "boundary does not cover the cone axis"
        cell_arcs.append(idx)
    n = max(len(idx) for idx in cell_arcs)
    cont_tol = 10.0 * apex_tol
    funcs = []
    for k in range(n):
        xs, ys = [grid[0]], None
        vals = []
        prev_right = None
        for (lo, hi), idx in zip(cells, cell_arcs):
            hl = np.sort([np.interp(lo, a[:, 0], a[:, 1]) for a in (arcs[i] for i in idx)])
            hr = np.sort([np.interp(hi, a[:, 0], a[:, 1]) for a in (arcs[i] for i in idx)])
            j = min(k, len(idx) - 1)
            vl, vr = hl[j], hr[j]
            if prev_right is None:
                vals.append(vl)
            elif abs(vl - prev_right) > cont_tol:
                return None, "boundary arcs do not assemble into continuous graphs"
            vals.append(vr)
            xs.append(hi)
            prev_right = vr
        funcs.append((np.asarray(xs), np.asarray(vals)))
    for g, v in funcs:
        if abs(v[0]) > apex_tol:
            return None, "assembled graph misses the apex"
    return funcs, ""


def _classify_core(region: PolyRegion, x, v, r: float, u: float, membership=None):
    """Shared T1/T2 test and graph extraction; returns (kind, funcs, detail)."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    rf = _region_in_frame(region, x, v)
    apex_tol = max(1e-9, APEX_TOL_FACTOR * r)
    cone2 = _cone_polygon(r, u, widen=2)
    area = rf.area_geometry()
    inter_parts = [area.intersection(cone2)] + [g.intersection(cone2) for g in rf.lower_dim]
    inter = unary_union([g for g in inter_parts if not g.is_empty])
    if _max_norm(inter) <= 2 * apex_tol:
        return "T1", None, rf, ""
    if cone2.difference(area).area <= apex_tol * r:
        return "T2", None, rf, ""
    funcs, reason = _extract_graphs(rf, r, u, apex_tol)
    return "T3?", funcs, rf, reason


def _flat_start(grid, vals, u: float) -> bool:
    i = 1
    while i < len(grid) and grid[i] - grid[0] < 1e-12:
        i += 1
    slope = (vals[i] - vals[0]) / (grid[i] - grid[0])
    return abs(slope) <= u / 8.0


def _covered(area, x: float, y: float, tol: float) -> bool:
    if area.is_empty:
        return False
    return area.distance(ShPoint(x, y)) <= tol


def classify_point(scene: Scene, x, v, r: float, u: float) -> ConeType:
    """Scene-level cone type at boundary point x in direction v, at scale (r, u)."""
    region = union_region(scene)
    _require_boundary(region, x)
    kind, funcs, rf, reason = _classify_core(region, x, v, r, u)
    if kind in ("T1", "T2"):
        return ConeType(kind, r, u)
    if funcs is None:
        return ConeType("inconclusive", r, u, detail=reason)
    # flat start for every graph
    for g, vals in funcs:
        if not _flat_start(g, vals, u):
            return ConeType("inconclusive", r, u, detail="nonzero slope at the apex")
    dcs = [DCFun.from_points(g, vals) for g, vals in funcs]
    rr = min(f.b for f in dcs)
    dcs = [dcfun.restrict(f, f.a, rr) for f in dcs]
    envs = dcfun.sorted_envelopes(dcs)
    # gap condition: where consecutive envelopes touch at some interior point,
    # the strip between them must lie inside the set
    area = rf.area_geometry()
    apex_tol = max(1e-9, APEX_TOL_FACTOR * r)
    for lo, hi in zip(envs[:-1], envs[1:]):
        grid = dcfun._merge_grids(lo.grid, hi.grid)
        gap = hi(grid) - lo(grid)
        touches_inside = np.any((gap <= apex_tol) & (grid > apex_tol))
        if not touches_inside:
            continue
        mids = 0.5 * (grid[:-1] + grid[1:])
        gv = 0.5 * (hi(mids) + lo(mids))
        wide = (hi(mids) - lo(mids)) > 2 * apex_tol
        for xm, ym in zip(mids[wide], gv[wide]):
            if not _covered(area, xm, ym, apex_tol):
                return ConeType(
                    "inconclusive", r, u,
                    detail="touching graphs with an uncovered strip between them",
                )
    witness = [(f.grid.copy(), f.values().copy()) for f in envs]
    return ConeType("T3", r, u, witness=witness)


def classify_piece_point(piece, x, v, r: float, u: float) -> ConeType:
    """Five-way cone type of a single piece (hypograph/epigraph/slab refinement)."""
    region = polygonize(piece)
    _require_boundary(region, x)
    kind, funcs, rf, reason = _classify_core(region, x, v, r, u)
    if kind in ("T1", "T2"):
        return ConeType(kind, r, u)
    if funcs is None:
        return ConeType("inconclusive", r, u, detail=reason)
    for g, vals in funcs:
        if not _flat_start(g, vals, u):
            return ConeType("inconclusive", r, u, detail="nonzero slope at the apex")
    dcs = [DCFun.from_points(g, vals) for g, vals in funcs]
    rr = min(f.b for f in dcs)
    dcs = [dcfun.restrict(f, f.a, rr) for f in dcs]
    envs = dcfun.sorted_envelopes(dcs)
    area = rf.area_geometry()
    apex_tol = max(1e-9, APEX_TOL_FACTOR * r)
    xm = 0.5 * rr
    lo, hi = envs[0], envs[-1]
    probe = max(4 * apex_tol, 0.1 * u * xm)
    below = _covered(area, xm, lo(xm) - probe, apex_tol)
    above = _covered(area, xm, hi(xm) + probe, apex_tol)
    witness = [(f.grid.copy(), f.values().copy()) for f in envs]
    if len(envs) == 1:
        if below and not above:
            return ConeType("T3", r, u, witness=witness)
        if above and not below:
            return ConeType("T4", r, u, witness=witness)
        if not above and not below:
            # one-dimensional piece: degenerate slab with U = L
            return ConeType("T5", r, u, witness=witness + witness)
        return ConeType("inconclusive", r, u, detail="set on both sides of one graph")
    if len(envs) == 2 and not above and not below:
        mid_ok = _covered(area, xm, 0.5 * (lo(xm) + hi(xm)), apex_tol)
        if mid_ok:
            return ConeType("T5", r, u, witness=witness)
    return ConeType("inconclusive", r, u, detail=f"{len(envs)} graphs in a single piece cone")


def _require_boundary(region: PolyRegion, x, tol: float = 1e-7) -> None:
    x = np.asarray(x, dtype=float)
    bdry = _boundary_linework(region)
    pts = [g for g in region.lower_dim if isinstance(g, ShPoint)]
    d = bdry.distance(ShPoint(x)) if not bdry.is_empty else np.inf
    for p in pts:
        d = min(d, p.distance(ShPoint(x)))
    if d > tol:
        raise NotBoundaryPoint(f"point {x} is {d:.3g} away from the boundary")


@dataclass
class ExceptionalDirections:
    directions: list
    r: float
    u: float
    covering_ok: bool
    separation_ok: bool

    def __iter__(self):
        return iter(self.directions)

    def __len__(self):
        return len(self.directions)


def exceptional_directions(scene: Scene, x, r: float | None = None, u: float = 0.25) -> ExceptionalDirections:
    """Tangent directions of the boundary at x (the candidate T3 directions).

    Verifies that cones around these directions cover the boundary near x
    (condition B) and that the doubled cones meet only at x (condition C).
    """
    region = union_region(scene)
    _require_boundary(region, x)
    x = np.asarray(x, dtype=float)
    tol = 1e-9
    dirs = []
    seg_lengths = []
    for geom in _iter_parts(_boundary_linework(region)):
        coords = np.asarray(geom.coords)
        for a, b in zip(coords[:-1], coords[1:]):
            ab = b - a
            ln = float(np.hypot(*ab))
            if ln < 1e-12:
                continue
            da = np.hypot(*(a - x))
            db = np.hypot(*(b - x))
            if da <= tol:
                dirs.append(ab / ln)
                seg_lengths.append(ln)
            elif db <= tol:
                dirs.append(-ab / ln)
                seg_lengths.append(ln)
            else:
                # x interior to the segment contributes both half-directions
                t = float((x - a) @ ab) / (ln * ln)
                proj = a + t * ab
                if 0 < t < 1 and np.hypot(*(proj - x)) <= tol:
                    dirs.append(ab / ln)
                    dirs.append(-ab / ln)
                    seg_lengths += [ln * (1 - t), ln * t]
    uniq = []
    for d in dirs:
        if not any(angle(d, e) < 1e-9 for e in uniq):
            uniq.append(d)
    if r is None:
        r = 0.5 * min(seg_lengths) if seg_lengths else 0.1
    # (C): doubled cones must be disjoint away from the apex
    separation_ok = True
    need = 2.0 * math.atan(2.0 * u)
    for i in range(len(uniq)):
        for j in range(i + 1, len(uniq)):
            if angle(uniq[i], uniq[j]) <= need + 1e-12:
                separation_ok = False
    retries = 0
    while not separation_ok and retries < 8:
        u /= 2.0
        need = 2.0 * math.atan(2.0 * u)
        separation_ok = all(
            angle(uniq[i], uniq[j]) > need + 1e-12
            for i in range(len(uniq))
            for j in range(i + 1, len(uniq))
        )
        retries += 1
    # (B): boundary near x lies inside the union of single cones
    covering_ok = _covering_holds(region, x, uniq, r, u)
    retries = 0
    while not covering_ok and retries < 8:
        r /= 2.0
        covering_ok = _covering_holds(region, x, uniq, r, u)
        retries += 1
    return ExceptionalDirections(uniq, r, u, covering_ok, separation_ok)


def _covering_holds(region: PolyRegion, x, dirs, r: float, u: float) -> bool:
    if not dirs:
        return True
    ball = ShPoint(x).buffer(r / 2.0, quad_segs=32)
    near = _boundary_linework(region).intersection(ball)
    cones = [
        shapely.transform(_cone_polygon(r, u, widen=1), lambda p: Isometry(x, d).apply(p))
        for d in dirs
    ]
    cover = unary_union(cones).buffer(1e-9)
    return cover.covers(near)


@dataclass
class UWDCVerdict:
    status: str                     # "certified" | "refuted" | "inconclusive"
    complement_count: int
    boundary_graphs: list
    failures: list

    def to_json_dict(self) -> dict:
        return {
            "status": self.status,
            "complement_count": self.complement_count,
            "boundary_graphs": [
                {
                    "direction": [float(c.direction[0]), float(c.direction[1])],
                    "lipschitz_bound": float(c.lipschitz_bound),
                    "turn": float(c.total_turn),
                }
                for c in self.boundary_graphs
            ],
            "failures": list(self.failures),
        }


def uwdc_verdict(scene: Scene, spot_checks: int = 6) -> UWDCVerdict:
    """Certify the boundary-decomposition characterization of the scene.

    Primary check: the complement has finitely many components (reported) and
    every boundary loop decomposes into finitely many certified DC graphs.
    Sampled cone classifications corroborate the pointwise condition.
    """
    region = union_region(scene)
    comp = complement_components(scene)
    certificates = []
    failures = []
    loops = [Polyline(verts, closed=True) for verts, _ in region.loops()]
    arcs = [
        Polyline(np.asarray(g.coords), closed=False)
        for g in region.lower_dim
        if isinstance(g, LineString)
    ]
    for pl in loops:
        try:
            pieces = decompose_one_lipschitz(pl)
        except Exception as exc:  # pragma: no cover - non-simple unions
            failures.append(f"loop decomposition failed: {exc}")
            continue
        for piece in pieces:
            cert = dc_certify(piece.polyline, piece.direction, 1.0, turn(piece.polyline) + 1e-9)
            if cert:
                certificates.append(cert)
            else:
                failures.append(f"boundary piece failed certification: {cert.reason}")
    for pl in arcs:
        for piece in _decompose_open(pl.vertices, closed=False):
            cert = dc_certify(piece.polyline, piece.direction, 1.0, turn(piece.polyline) + 1e-9)
            if cert:
                certificates.append(cert)
            else:
                failures.append(f"bare arc piece failed certification: {cert.reason}")
    # sampled pointwise corroboration
    samples = _sample_boundary_points(region, spot_checks)
    for pt in samples:
        try:
            exc_dirs = exceptional_directions(scene, pt)
        except NotBoundaryPoint:
            continue
        for d in exc_dirs:
            ct = _classify_with_ladder(scene, pt, d, exc_dirs.r, exc_dirs.u)
            if not ct.conclusive:
                failures.append(
                    f"point {np.round(pt, 6).tolist()} dir {np.round(d, 6).tolist()}: {ct.detail}"
                )
    status = "certified" if not failures else "inconclusive"
    return UWDCVerdict(status, comp, certificates, failures)


def _classify_with_ladder(scene, x, v, r0: float, u: float, steps: int = 8) -> ConeType:
    r = r0
    last = None
    for _ in range(steps + 1):
        last = classify_point(scene, x, v, r, u)
        if last.conclusive:
            return last
        r /= 2.0
    return last


def _sample_boundary_points(region: PolyRegion, k: int) -> list:
    pts = []
    for verts, _ in region.loops():
        pts.extend(verts)
    for g in region.lower_dim:
        if isinstance(g, LineString):
            pts.extend(np.asarray(g.coords))
    if not pts:
        return []
    pts = np.asarray(pts)
    step = max(1, len(pts) // k)
    return list(pts[::step][:k])


# -- aura -----------------------------------------------------------------


def _check_bounds(g: DCFun, h: DCFun, L: float) -> None:
    grid = dcfun._merge_grids(g.grid, h.grid)
    if np.any(g(grid) - h(grid) < -1e-12):
        raise BadBounds("upper function dips below the lower one")
    need = max(dcfun.lipschitz_constant(g), dcfun.lipschitz_constant(h))
    if L < need - 1e-12:
        raise BadBounds(f"L = {L} below the Lipschitz constant {need}")


def _extended_eval(f: DCFun, x: float) -> float:
    return float(f(np.clip(x, f.a, f.b)))


def _extended_subdiff(f: DCFun, x: float) -> tuple[float, float]:
    if x < f.a - 1e-12 or x > f.b + 1e-12:
        return 0.0, 0.0
    lo, hi = f.one_sided(np.clip(x, f.a, f.b))
    if abs(x - f.a) <= 1e-12:
        lo, hi = min(0.0, hi), max(0.0, hi)
    elif abs(x - f.b) <= 1e-12:
        lo, hi = min(lo, 0.0), max(lo, 0.0)
    else:
        lo, hi = min(lo, hi), max(lo, hi)
    return lo, hi


def aura_eval(g: DCFun, h: DCFun, L: float, p) -> float:
    """Aura of the slab between h and g: zero exactly on the slab, DC everywhere.

    ``H(x, y) = 2L max(0, x - b, a - x) + max(0, y - g(x), h(x) - y)`` with g
    and h extended by constants outside [a, b].
    """
    _check_bounds(g, h, L)
    x, y = float(p[0]), float(p[1])
    f_term = 2.0 * L * max(0.0, x - g.b, g.a - x)
    g_term = max(0.0, y - _extended_eval(g, x), _extended_eval(h, x) - y)
    return f_term + g_term


@dataclass
class WeakRegularReport:
    min_norm: float
    bound: float
    n_samples: int
    ok: bool

    def __bool__(self):
        return self.ok


def weak_regular_check(
    g: DCFun, h: DCFun, L: float, band: float = 0.1, resolution: int = 60
) -> WeakRegularReport:
    """Sample Clarke subgradients of the aura on the band 0 < H <= band.

    At each sample the active branches of the two max expressions are
    enumerated exactly and the norm minimized over the extreme points of the
    subdifferential sum; weak regularity requires the bound min(1, L).
    """
    _check_bounds(g, h, L)
    a, b = g.a, g.b
    grid = dcfun._merge_grids(g.grid, h.grid)
    ylo = float(np.min(h(grid))) - 2 * band
    yhi = float(np.max(g(grid))) + 2 * band
    xs = np.linspace(a - 2 * band, b + 2 * band, resolution)
    ys = np.linspace(ylo, yhi, resolution)
    tie = 1e-12
    best = np.inf
    n = 0
    for x in xs:
        for y in ys:
            H = aura_eval(g, h, L, (x, y))
            if not (1e-9 < H <= band):
                continue
            n += 1
            f_branches = [0.0, x - b, a - x]
            f_max = max(f_branches)
            f_ext = []
            if f_max - f_branches[0] <= tie:
                f_ext.append((0.0, 0.0))
            if f_max - f_branches[1] <= tie:
                f_ext.append((2.0 * L, 0.0))
            if f_max - f_branches[2] <= tie:
                f_ext.append((-2.0 * L, 0.0))
            gv = _extended_eval(g, x)
            hv = _extended_eval(h, x)
            g_branches = [0.0, y - gv, hv - y]
            g_max = max(g_branches)
            g_ext = []
            if g_max - g_branches[0] <= tie:
                g_ext.append((0.0, 0.0))
            if g_max - g_branches[1] <= tie:
                lo, hi = _extended_subdiff(g, x)
                g_ext.extend([(-lo, 1.0), (-hi, 1.0)])
            if g_max - g_branches[2] <= tie:
                lo, hi = _extended_subdiff(h, x)
                g_ext.extend([(lo, -1.0), (hi, -1.0)])
            for fe in f_ext:
                for ge in g_ext:
                    v = (fe[0] + ge[0], fe[1] + ge[1])
                    best = min(best, math.hypot(*v))
    bound = min(1.0, L)
    return WeakRegularReport(float(best), bound, n, best >= bound - 1e-9)
