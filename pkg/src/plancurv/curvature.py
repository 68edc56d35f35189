"""Curvature measures C0, C1, C2 of regions and scenes.

Normalization is pinned by the planar Steiner formula
``area(A_eps) = C2 + 2 eps C1 + pi eps^2 C0`` together with Gauss-Bonnet
``C0 = chi``: C2 is area, C1 is half the boundary length (full length for
bare segments), C0 is the Euler characteristic.  Scene totals come from
inclusion-exclusion over the intersection lattice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from shapely.geometry import LineString, Point as ShPoint, box

from .errors import InvalidRegion, NotConvex, TouchingHalfplane
from .region import PolyRegion, clip_halfplane, euler_char
from .scene import Scene, intersect_lattice, polygonize, require_generic, union_region

__all__ = [
    "CurvatureTable",
    "curvature_region",
    "curvature_scene",
    "gauss_bonnet_check",
    "slicing_identity_check",
    "steiner_check",
    "c0_var",
]


@dataclass
class CurvatureTable:
    """Totals (c0, c1, c2), optionally localized to a rectangular window."""

    c0: float
    c1: float
    c2: float
    localized_to: tuple[float, float, float, float] | None = None

    def __getitem__(self, k: int) -> float:
        return (self.c0, self.c1, self.c2)[k]

    def __iter__(self):
        return iter((self.c0, self.c1, self.c2))


def _loop_vertex_angles(coords: np.ndarray) -> np.ndarray:
    """Signed exterior (turning) angle at each vertex of a closed loop."""
    prev = coords - np.roll(coords, 1, axis=0)
    nxt = np.roll(coords, -1, axis=0) - coords
    ang = np.arctan2(
        prev[:, 0] * nxt[:, 1] - prev[:, 1] * nxt[:, 0],
        prev[:, 0] * nxt[:, 0] + prev[:, 1] * nxt[:, 1],
    )
    return ang


def _in_window(points: np.ndarray, F) -> np.ndarray:
    if F is None:
        return np.ones(len(points), dtype=bool)
    x0, y0, x1, y1 = F
    return (
        (points[:, 0] >= x0)
        & (points[:, 0] <= x1)
        & (points[:, 1] >= y0)
        & (points[:, 1] <= y1)
    )


def _window_box(F):
    x0, y0, x1, y1 = F
    return box(x0, y0, x1, y1)


def curvature_region(region: PolyRegion, F=None, absolute: bool = False) -> CurvatureTable:
    """Curvature table of a region, optionally localized to a window F.

    With ``absolute=True`` the turning angles enter by absolute value (the
    variational measure of C0).
    """
    if region.is_empty:
        return CurvatureTable(0.0, 0.0, 0.0, F)
    try:
        region.validate()
    except Exception as exc:
        raise InvalidRegion(str(exc)) from exc
    wbox = _window_box(F) if F is not None else None

    c2 = 0.0
    c1 = 0.0
    c0 = 0.0
    for poly in region.polygons:
        if wbox is None:
            c2 += poly.area
            c1 += 0.5 * poly.boundary.length
        else:
            c2 += poly.intersection(wbox).area
            c1 += 0.5 * poly.boundary.intersection(wbox).length
    for verts, _is_hole in region.loops():
        ang = _loop_vertex_angles(verts)
        if absolute:
            ang = np.abs(ang)
        c0 += float(ang[_in_window(verts, F)].sum()) / (2.0 * math.pi)
    # Lower-dimensional features: an isolated arc contributes 1/2 per
    # endpoint, a point 1; every contact with previously placed features
    # (loops or earlier arcs) removes a shared point, contributing -1 there.
    placed = [p for p in region.polygons]
    for g in region.lower_dim:
        if isinstance(g, LineString):
            if wbox is None:
                c1 += g.length
            else:
                c1 += g.intersection(wbox).length
            ends = np.asarray(g.coords)[[0, -1]]
            c0 += 0.5 * int(_in_window(ends, F).sum())
            if absolute:
                pts = np.asarray(g.coords)
                if len(pts) > 2:
                    d = np.diff(pts, axis=0)
                    a = np.arctan2(
                        d[:-1, 0] * d[1:, 1] - d[:-1, 1] * d[1:, 0],
                        d[:-1, 0] * d[1:, 0] + d[:-1, 1] * d[1:, 1],
                    )
                    inside = _in_window(pts[1:-1], F)
                    c0 += float(np.abs(a)[inside].sum()) / math.pi
        elif isinstance(g, ShPoint):
            if _in_window(np.array([[g.x, g.y]]), F)[0]:
                c0 += 1.0
        contacts = _contact_points(g, placed)
        if len(contacts):
            sign = 1.0 if absolute else -1.0
            c0 += sign * float(_in_window(contacts, F).sum())
        placed.append(g)
    return CurvatureTable(c0, c1, c2, F)


def _contact_points(g, placed) -> np.ndarray:
    """Isolated points where a feature meets previously placed features."""
    pts = []
    for other in placed:
        inter = g.intersection(other)
        if inter.is_empty:
            continue
        for part in getattr(inter, "geoms", [inter]):
            if isinstance(part, ShPoint):
                pts.append([part.x, part.y])
    if not pts:
        return np.empty((0, 2))
    # deduplicate contacts shared between multiple placed features
    arr = np.array(pts)
    keep = []
    for p in arr:
        if not any(np.hypot(*(p - q)) < 1e-12 for q in keep):
            keep.append(p)
    return np.asarray(keep)


def curvature_scene(scene: Scene, k: int, F=None) -> float:
    """Inclusion-exclusion total: sum over nonempty I of (-1)^(|I|+1) C_k(M_I, F)."""
    require_generic(scene)
    total = 0.0
    for I in scene.index_sets():
        region = intersect_lattice(scene, I)
        if region.is_empty:
            continue
        sign = -1.0 if len(I) % 2 == 0 else 1.0
        total += sign * curvature_region(region, F)[k]
    return total


def c0_var(region: PolyRegion, F=None) -> float:
    """Variational C0: absolute turning contributions (dominates |C0|)."""
    return curvature_region(region, F, absolute=True).c0


@dataclass
class GaussBonnetReport:
    c0_total: float
    euler: int
    ok: bool

    def __bool__(self):
        return self.ok


def gauss_bonnet_check(scene: Scene, tol: float = 1e-6) -> GaussBonnetReport:
    """Compare the inclusion-exclusion C0 total with chi of the union."""
    c0 = curvature_scene(scene, 0)
    chi = euler_char(union_region(scene))
    return GaussBonnetReport(c0, chi, abs(c0 - chi) <= tol)


@dataclass
class SlicingReport:
    v: np.ndarray
    t: float
    chi_union: int
    chi_sum: int
    ok: bool

    def __bool__(self):
        return self.ok


def _touches_halfplane(scene: Scene, v, t: float, tol: float) -> bool:
    for geom in scene.geometries():
        pts = _all_vertices(geom)
        if np.any(np.abs(pts @ v - t) < tol):
            return True
    return False


def _all_vertices(geom) -> np.ndarray:
    if geom.geom_type == "Polygon":
        rings = [np.asarray(geom.exterior.coords)] + [np.asarray(r.coords) for r in geom.interiors]
        return np.vstack(rings)
    if geom.geom_type == "LineString":
        return np.asarray(geom.coords)
    if geom.geom_type == "Point":
        return np.array([[geom.x, geom.y]])
    parts = [_all_vertices(g) for g in getattr(geom, "geoms", [])]
    return np.vstack(parts) if parts else np.empty((0, 2))


def slicing_identity_check(scene: Scene, v, t: float, tol: float = 1e-7) -> SlicingReport:
    """chi(M cap H) must equal the inclusion-exclusion sum of chi(M_I cap H)."""
    v = np.asarray(v, dtype=float)
    if _touches_halfplane(scene, v, t, tol):
        raise TouchingHalfplane(f"halfplane v={v}, t={t} grazes a piece boundary")
    lhs = euler_char(clip_halfplane(union_region(scene), v, t))
    rhs = 0
    for I in scene.index_sets():
        region = intersect_lattice(scene, I)
        if region.is_empty:
            continue
        clipped = clip_halfplane(region, v, t)
        sign = -1 if len(I) % 2 == 0 else 1
        rhs += sign * euler_char(clipped)
    return SlicingReport(v, t, lhs, rhs, lhs == rhs)


@dataclass
class SteinerReport:
    eps: float
    parallel_area: float
    predicted: float
    ok: bool

    def __bool__(self):
        return self.ok


def steiner_check(piece, eps: float, tol: float | None = None, quad_segs: int = 256) -> SteinerReport:
    """Compare the area of the eps-parallel set with C2 + 2 eps C1 + pi eps^2 C0.

    The parallel set is measured independently with a buffered geometry; the
    default tolerance covers the buffer's arc discretization.
    """
    if not piece.convex:
        raise NotConvex(f"piece {piece.name} is not convex")
    if eps <= 0:
        raise ValueError("eps must be positive")
    geom = piece.geometry()
    measured = geom.buffer(eps, quad_segs=quad_segs).area
    table = curvature_region(polygonize(piece))
    predicted = table.c2 + 2.0 * eps * table.c1 + math.pi * eps * eps * table.c0
    if tol is None:
        # inscribed-arc deficit of the buffer plus a small float cushion
        perim = geom.length if geom.length > 0 else 1.0
        tol = eps * perim * (math.pi / (2 * quad_segs)) ** 2 + math.pi * eps**2 * (
            (math.pi / (2 * quad_segs)) ** 2
        ) + 1e-9
    return SteinerReport(eps, measured, predicted, abs(measured - predicted) <= tol)
