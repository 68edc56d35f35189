"""Polygonal regions with oriented loops and explicit lower-dimensional parts.

A ``PolyRegion`` is the computable stand-in for a compact planar set: a list
of area polygons (outer rings counterclockwise, holes clockwise) plus bare
segments and points that carry no area.  The Euler characteristic is
computed as ``#connected components - #bounded complement components``,
which stays correct when arcs are attached to loops or to each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import shapely
from shapely.geometry import (
    GeometryCollection,
    LineString,
    MultiLineString,
    MultiPoint,
    MultiPolygon,
    Point,
    Polygon,
)
from shapely.geometry.polygon import orient
from shapely.ops import polygonize, unary_union

from .errors import InvalidNesting

__all__ = ["PolyRegion", "region_from_geometry", "euler_char", "clip_halfplane"]


@dataclass
class PolyRegion:
    """Compact region: area polygons plus lower-dimensional features."""

    polygons: list[Polygon] = field(default_factory=list)
    lower_dim: list = field(default_factory=list)  # LineString / Point

    @property
    def is_empty(self) -> bool:
        return not self.polygons and not self.lower_dim

    def area_geometry(self):
        if not self.polygons:
            return Polygon()
        return unary_union(self.polygons)

    def full_geometry(self):
        return unary_union(self.polygons + self.lower_dim)

    def loops(self) -> list[tuple[np.ndarray, bool]]:
        """(vertices, is_hole) pairs; outers CCW, holes CW, no repeated first point."""
        out = []
        for poly in self.polygons:
            poly = orient(poly)  # exterior CCW, interiors CW
            out.append((np.asarray(poly.exterior.coords)[:-1], False))
            for ring in poly.interiors:
                out.append((np.asarray(ring.coords)[:-1], True))
        return out

    def area(self) -> float:
        return float(sum(p.area for p in self.polygons))

    def boundary_length(self) -> float:
        return float(sum(p.boundary.length for p in self.polygons))

    def validate(self) -> None:
        for p in self.polygons:
            if not p.is_valid:
                raise InvalidNesting("invalid polygon loop structure")
        for i, p in enumerate(self.polygons):
            for q in self.polygons[i + 1:]:
                inter = p.intersection(q)
                if getattr(inter, "area", 0.0) > 1e-15:
                    raise InvalidNesting("area loops overlap")

    def transformed(self, iso) -> "PolyRegion":
        def tx(geom):
            return shapely.transform(geom, lambda pts: iso.apply(pts))
        return PolyRegion([tx(p) for p in self.polygons], [tx(g) for g in self.lower_dim])


def _flatten(geom):
    if geom.is_empty:
        return
    if isinstance(geom, (GeometryCollection, MultiPolygon, MultiLineString, MultiPoint)):
        for g in geom.geoms:
            yield from _flatten(g)
    else:
        yield geom


def region_from_geometry(geom) -> PolyRegion:
    """Split any shapely geometry into area polygons and lower-dim leftovers.

    Lines and points covered by the area part are dissolved; everything else
    is kept explicitly (its curvature and Euler contributions are nonzero).
    """
    polys, lines, points = [], [], []
    for g in _flatten(geom):
        if isinstance(g, Polygon):
            if g.area > 0:
                polys.append(g)
        elif isinstance(g, LineString):
            if g.length > 0:
                lines.append(g)
        elif isinstance(g, Point):
            points.append(g)
    area = unary_union(polys) if polys else Polygon()
    kept_lines = []
    for ln in lines:
        if polys:
            residue = ln.difference(area)
            kept_lines.extend(g for g in _flatten(residue) if isinstance(g, LineString) and g.length > 1e-12)
        else:
            kept_lines.append(ln)
    kept_points = []
    occupied = unary_union(polys + kept_lines) if (polys or kept_lines) else None
    for pt in points:
        if occupied is None or not occupied.intersects(pt):
            kept_points.append(pt)
    return PolyRegion(polys, kept_lines + kept_points)


def _component_count(geoms) -> int:
    """Connected components of a family of geometries (touching merges)."""
    n = len(geoms)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if geoms[i].intersects(geoms[j]):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    return len({find(i) for i in range(n)})


def _bounded_complement_count(region: PolyRegion) -> int:
    """Bounded components of the complement of the region's point set.

    Faces of the arrangement of all boundary linework (plus bare arcs) that
    are not covered by the area part are exactly the bounded complement
    components: dangling arcs cannot enclose anything and are dropped by the
    polygonizer.
    """
    arcs = [g for g in region.lower_dim if isinstance(g, LineString)]
    linework = [p.boundary for p in region.polygons] + arcs
    if not linework:
        return 0
    if not arcs:
        # fast path: holes of the merged area
        merged = region.area_geometry()
        polys = [merged] if isinstance(merged, Polygon) else list(merged.geoms)
        return sum(len(p.interiors) for p in polys)
    faces = list(polygonize(unary_union(linework)))
    area = region.area_geometry()
    count = 0
    for f in faces:
        if not area.contains(f.representative_point()):
            count += 1
    return count


def euler_char(region: PolyRegion) -> int:
    """Euler characteristic: components minus bounded complement components."""
    if region.is_empty:
        return 0
    region.validate()
    pieces = list(region.polygons) + list(region.lower_dim)
    return _component_count(pieces) - _bounded_complement_count(region)


def halfplane_polygon(v, t: float, bounds, pad: float = 10.0) -> Polygon:
    """Rectangle realizing {p . v <= t} over the given (minx, miny, maxx, maxy)."""
    v = np.asarray(v, dtype=float)
    minx, miny, maxx, maxy = bounds
    c = np.array([(minx + maxx) / 2.0, (miny + maxy) / 2.0])
    R = float(np.hypot(maxx - minx, maxy - miny)) + abs(t - float(c @ v)) + pad
    vp = np.array([v[1], -v[0]])
    base = v * t  # a point on the boundary line
    corners = [
        base + R * vp,
        base - R * vp,
        base - R * vp - 2 * R * v,
        base + R * vp - 2 * R * v,
    ]
    # recentre sideways so the rectangle straddles the region
    shift = vp * float(c @ vp)
    return Polygon([tuple(p + shift) for p in corners])


def clip_halfplane(region: PolyRegion, v, t: float) -> PolyRegion:
    """Intersection of the region with the halfplane {p . v <= t}."""
    n = float(np.hypot(*np.asarray(v, dtype=float)))
    if abs(n - 1.0) > 1e-9:
        raise ValueError("direction must be unit")
    if region.is_empty:
        return PolyRegion()
    bounds = region.full_geometry().bounds
    hp = halfplane_polygon(v, t, bounds)
    clipped = [hp.intersection(p) for p in region.polygons]
    clipped += [hp.intersection(g) for g in region.lower_dim]
    return region_from_geometry(GeometryCollection([g for g in clipped if not g.is_empty]))
