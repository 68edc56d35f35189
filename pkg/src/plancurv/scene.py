"""Scenes: named compact pieces whose intersections index an inclusion-
exclusion lattice.

Piece variants are convex polygons, disks, DC slabs (the set between a lower
and an upper DC graph), segments and points.  Curved variants carry a
polygonization tolerance; all boolean work happens on the polygonized model,
so every identity tested downstream holds exactly for that model.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace

import numpy as np
import shapely
from shapely.geometry import LineString, Point as ShPoint, Polygon
from shapely.ops import unary_union

from . import dcfun
from .dcfun import DCFun
from .errors import DegenerateContact, NotConvex
from .planar import Isometry, perp
from .region import PolyRegion, _bounded_complement_count, region_from_geometry

GENERIC_TOL = 1e-9

__all__ = [
    "Piece",
    "ConvexPolygon",
    "Disk",
    "Slab",
    "Segment",
    "PointPiece",
    "Scene",
    "polygonize",
    "intersect_lattice",
    "union_region",
    "complement_components",
    "check_generic",
    "require_generic",
]


class Piece:
    """Base class; concrete pieces implement geometry(), diameter(), transformed()."""

    name: str
    tol: float
    convex = False

    def geometry(self):
        raise NotImplementedError

    def diameter(self) -> float:
        raise NotImplementedError

    def transformed(self, iso: Isometry) -> "Piece":
        raise NotImplementedError


@dataclass
class ConvexPolygon(Piece):
    vertices: np.ndarray
    name: str = "poly"
    tol: float = 0.0
    convex = True

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if len(v) < 3:
            raise NotConvex("need at least three vertices")
        e = np.roll(v, -1, axis=0) - v
        cross = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
        if np.any(cross < -1e-9):
            raise NotConvex("vertices must wind counterclockwise around a convex set")
        self.vertices = v

    def geometry(self):
        return Polygon(self.vertices)

    def diameter(self):
        d = self.vertices[:, None, :] - self.vertices[None, :, :]
        return float(np.hypot(d[..., 0], d[..., 1]).max())

    def transformed(self, iso):
        return replace(self, vertices=iso.apply(self.vertices))


@dataclass
class Disk(Piece):
    center: np.ndarray
    radius: float
    name: str = "disk"
    tol: float = 1e-4
    convex = True

    def __post_init__(self):
        self.center = np.asarray(self.center, dtype=float)
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    def n_sides(self) -> int:
        # inscribed n-gon with sagitta r (1 - cos(pi/n)) <= tol
        frac = min(0.999999, self.tol / self.radius)
        return max(16, int(math.ceil(math.pi / math.acos(1.0 - frac))))

    def boundary_points(self) -> np.ndarray:
        n = self.n_sides()
        th = 2.0 * math.pi * np.arange(n) / n
        return self.center + self.radius * np.c_[np.cos(th), np.sin(th)]

    def geometry(self):
        return Polygon(self.boundary_points())

    def diameter(self):
        return 2.0 * self.radius

    def transformed(self, iso):
        return replace(self, center=iso.apply(self.center))


@dataclass
class Slab(Piece):
    """Points between a lower and an upper DC graph over the v-perp axis."""

    v: np.ndarray
    lower: DCFun
    upper: DCFun
    name: str = "slab"
    tol: float = 1e-6
    convex = False

    def __post_init__(self):
        self.v = np.asarray(self.v, dtype=float)
        if abs(self.lower.a - self.upper.a) > 1e-9 or abs(self.lower.b - self.upper.b) > 1e-9:
            raise ValueError("lower and upper must share the interval")
        grid = dcfun._merge_grids(self.lower.grid, self.upper.grid)
        if np.any(self.upper(grid) - self.lower(grid) < -1e-9):
            raise ValueError("upper must dominate lower")

    def _frame_points(self, ts, ys):
        return np.asarray(ts)[:, None] * perp(self.v)[None, :] + np.asarray(ys)[:, None] * self.v[None, :]

    def geometry(self):
        L, U = self.lower, self.upper
        grid = dcfun._merge_grids(L.grid, U.grid)
        d = U(grid) - L(grid)
        # split at pinch points where the graphs touch
        pinch = np.abs(d) <= 1e-12
        parts = []
        run = [0]
        for i in range(1, len(grid)):
            run.append(i)
            if pinch[i] and i < len(grid) - 1:
                parts.append(run)
                run = [i]
        parts.append(run)
        geoms = []
        for idx in parts:
            t = grid[idx]
            if np.all(np.abs(d[idx]) <= 1e-12):
                geoms.append(LineString(self._frame_points(t, U(t))))
                continue
            bottom = self._frame_points(t, L(t))
            top = self._frame_points(t[::-1], U(t[::-1]))
            ring = np.vstack([bottom, top])
            # drop consecutive duplicates (zero-length walls at pinches)
            keep = np.ones(len(ring), dtype=bool)
            keep[1:] = np.hypot(*(ring[1:] - ring[:-1]).T) > 1e-12
            ring = ring[keep]
            if np.hypot(*(ring[0] - ring[-1])) <= 1e-12:
                ring = ring[:-1]
            if len(ring) >= 3:
                geoms.append(Polygon(ring))
            else:
                geoms.append(LineString(self._frame_points(t, U(t))))
        return unary_union(geoms) if len(geoms) > 1 else geoms[0]

    def diameter(self):
        return float(np.hypot(*(np.array(self.geometry().bounds[2:]) - self.geometry().bounds[:2])))

    def transformed(self, iso):
        from .planar import rotation

        new_v = rotation(iso.v) @ self.v
        shift_t = float(iso.z @ perp(new_v))
        shift_y = float(iso.z @ new_v)

        def move(f: DCFun) -> DCFun:
            return DCFun.from_points(f.grid + shift_t, f.values() + shift_y)

        return replace(self, v=new_v, lower=move(self.lower), upper=move(self.upper))


@dataclass
class Segment(Piece):
    p: np.ndarray
    q: np.ndarray
    name: str = "segment"
    tol: float = 0.0
    convex = True

    def __post_init__(self):
        self.p = np.asarray(self.p, dtype=float)
        self.q = np.asarray(self.q, dtype=float)
        if np.hypot(*(self.q - self.p)) < 1e-12:
            raise ValueError("segment endpoints coincide")

    def geometry(self):
        return LineString([self.p, self.q])

    def diameter(self):
        return float(np.hypot(*(self.q - self.p)))

    def transformed(self, iso):
        return replace(self, p=iso.apply(self.p), q=iso.apply(self.q))


@dataclass
class PointPiece(Piece):
    location: np.ndarray
    name: str = "point"
    tol: float = 0.0
    convex = True

    def __post_init__(self):
        self.location = np.asarray(self.location, dtype=float)

    def geometry(self):
        return ShPoint(self.location)

    def diameter(self):
        return 0.0

    def transformed(self, iso):
        return replace(self, location=iso.apply(self.location))


def polygonize(piece: Piece, tol: float | None = None) -> PolyRegion:
    """Polygonal model of a piece (exact for polygons/segments/points)."""
    if tol is not None and piece.tol != tol:
        piece = replace(piece, tol=tol)
    return region_from_geometry(piece.geometry())


@dataclass
class Scene:
    """Named pieces M1..MN inside a window with at least one diameter of margin."""

    pieces: list[Piece]
    window: tuple[float, float, float, float] | None = None
    tol: float = GENERIC_TOL
    _geoms: list = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not self.pieces:
            raise ValueError("scene needs at least one piece")
        names = [p.name for p in self.pieces]
        if len(set(names)) != len(names):
            raise ValueError("piece names must be unique")
        if self.window is None:
            bounds = np.array([g.bounds for g in self.geometries()])
            margin = max(1.0, max(p.diameter() for p in self.pieces))
            self.window = (
                float(bounds[:, 0].min() - margin),
                float(bounds[:, 1].min() - margin),
                float(bounds[:, 2].max() + margin),
                float(bounds[:, 3].max() + margin),
            )

    def geometries(self):
        if self._geoms is None:
            self._geoms = [p.geometry() for p in self.pieces]
        return self._geoms

    @property
    def n(self) -> int:
        return len(self.pieces)

    def index_sets(self):
        """All nonempty subsets of piece indices, in fixed order."""
        idx = range(self.n)
        for size in range(1, self.n + 1):
            yield from itertools.combinations(idx, size)

    def transformed(self, iso: Isometry) -> "Scene":
        return Scene([p.transformed(iso) for p in self.pieces], tol=self.tol)


def _common_direction_slabs(pieces) -> bool:
    if not all(isinstance(p, Slab) for p in pieces):
        return False
    v0 = pieces[0].v
    return all(np.hypot(*(p.v - v0)) <= 1e-9 for p in pieces[1:])


def intersect_lattice(scene: Scene, I) -> PolyRegion:
    """Region of M_I, the intersection of the pieces indexed by I.

    Lower-dimensional intersection features (shared edges, crossing points)
    are retained explicitly.  Same-direction slab families intersect exactly
    in function space before polygonization.
    """
    I = sorted(set(I))
    if not I or any(i < 0 or i >= scene.n for i in I):
        raise ValueError("index set must be a nonempty subset of the pieces")
    pieces = [scene.pieces[i] for i in I]
    if len(pieces) > 1 and _common_direction_slabs(pieces):
        a = max(p.lower.a for p in pieces)
        b = min(p.lower.b for p in pieces)
        if b - a <= 1e-12:
            return PolyRegion()
        lowers = [dcfun.restrict(p.lower, a, b) for p in pieces]
        uppers = [dcfun.restrict(p.upper, a, b) for p in pieces]
        lo = lowers[0]
        for f in lowers[1:]:
            lo = dcfun.max2(lo, f)
        up = uppers[0]
        for f in uppers[1:]:
            up = dcfun.min2(up, f)
        grid = dcfun._merge_grids(lo.grid, up.grid)
        gap = up(grid) - lo(grid)
        if np.all(gap < -1e-12):
            return PolyRegion()
        # cut at the crossings of the two envelopes, keep runs where up >= lo
        cross = dcfun._crossings(grid, gap)
        cuts = dcfun._merge_grids(grid, np.asarray(cross))
        regions = []
        parts = _positive_runs(cuts, up(cuts) - lo(cuts))
        for (s, e) in parts:
            if e - s <= 1e-12:
                # isolated touch of the two envelopes
                mid = 0.5 * (s + e)
                pt = mid * perp(pieces[0].v) + float(lo(np.clip(mid, lo.a, lo.b))) * pieces[0].v
                regions.append(ShPoint(pt))
                continue
            slab = Slab(
                v=pieces[0].v,
                lower=dcfun.restrict(lo, s, e),
                upper=dcfun.restrict(up, s, e),
                name="tmp",
                tol=min(p.tol for p in pieces),
            )
            regions.append(slab.geometry())
        if not regions:
            return PolyRegion()
        return region_from_geometry(unary_union(regions))
    geom = scene.geometries()[I[0]]
    for i in I[1:]:
        geom = geom.intersection(scene.geometries()[i])
        if geom.is_empty:
            return PolyRegion()
    return region_from_geometry(geom)


def _positive_runs(grid, values, tol=1e-12):
    """Maximal [s, e] subintervals where a PL function is >= -tol."""
    runs = []
    start = None
    for i, val in enumerate(values):
        if val >= -tol and start is None:
            start = grid[i]
        if (val < -tol or i == len(values) - 1) and start is not None:
            end = grid[i] if val >= -tol else grid[i - 1]
            runs.append((float(start), float(end)))
            start = None
    return runs


def union_region(scene: Scene) -> PolyRegion:
    """Boolean union of all polygonized pieces."""
    return region_from_geometry(unary_union(scene.geometries()))


def complement_components(scene: Scene) -> int:
    """Components of window minus M; the margin keeps the outside connected."""
    return 1 + _bounded_complement_count(union_region(scene))


# -- genericity ---------------------------------------------------------


def check_generic(scene: Scene, tol: float | None = None) -> list[str]:
    """Diagnostics for tangential or near-tangential piece contacts."""
    tol = scene.tol if tol is None else tol
    geoms = scene.geometries()
    issues = []
    for i, j in itertools.combinations(range(scene.n), 2):
        gi, gj = geoms[i], geoms[j]
        ni, nj = scene.pieces[i].name, scene.pieces[j].name
        if not gi.intersects(gj):
            if gi.distance(gj) < tol:
                issues.append(f"{ni} and {nj} nearly touch (gap < {tol})")
            continue
        bi = gi.boundary if gi.geom_type == "Polygon" else gi
        bj = gj.boundary if gj.geom_type == "Polygon" else gj
        shared = bi.intersection(bj)
        if getattr(shared, "length", 0.0) > tol:
            issues.append(f"{ni} and {nj} share boundary of length {shared.length:.3g}")
            continue
        for a, b, na in ((gi, bj, ni), (gj, bi, nj)):
            pts = _geometry_vertices(a)
            if len(pts):
                d = shapely.distance(b, shapely.points(pts))
                if np.any((d > 0) & (d < tol)):
                    issues.append(f"vertex of {na} within {tol} of the other boundary")
                    break
    return issues


def _geometry_vertices(geom) -> np.ndarray:
    if geom.geom_type == "Polygon":
        return np.asarray(geom.exterior.coords)[:-1]
    if geom.geom_type == "LineString":
        return np.asarray(geom.coords)
    if geom.geom_type == "Point":
        return np.asarray([[geom.x, geom.y]])
    out = [_geometry_vertices(g) for g in getattr(geom, "geoms", [])]
    return np.vstack(out) if out else np.empty((0, 2))


def require_generic(scene: Scene, tol: float | None = None) -> None:
    issues = check_generic(scene, tol)
    if issues:
        raise DegenerateContact("; ".join(issues))
