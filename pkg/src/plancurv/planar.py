"""Planar primitives: rigid motions, cones, polylines, graphs and turn.

Conventions: direction vectors are unit within ``UNIT_TOL``; the frame of an
isometry (z, v) sends the origin to z and (1, 0) to z + v.  A graph in
direction v is parameterized over the axis v-perp (v rotated by -pi/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dcfun import DCFun, lipschitz_constant
from .errors import (
    DegenerateSegment,
    EmptyInput,
    NotClosed,
    NotSimple,
    NotUnit,
)

UNIT_TOL = 1e-9
PAIR_TOL = 1e-9  # slack in the two-point Lipschitz-graph inequality

__all__ = [
    "Isometry",
    "Cone",
    "Polyline",
    "EmbeddedGraph",
    "GraphWitness",
    "LipschitzPiece",
    "DCCertificate",
    "angle",
    "perp",
    "rotation",
    "hausdorff",
    "is_lipschitz_graph",
    "turn",
    "signed_turn",
    "decompose_one_lipschitz",
    "dc_certify",
    "realize",
]


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = math.hypot(v[0], v[1])
    if abs(n - 1.0) > UNIT_TOL:
        raise NotUnit(f"|v| = {n}")
    return v


def perp(v) -> np.ndarray:
    """v rotated by -pi/2 (the parameter axis of a graph in direction v)."""
    return np.array([v[1], -v[0]], dtype=float)


def rotation(v) -> np.ndarray:
    """Rotation matrix sending (1, 0) to v."""
    return np.array([[v[0], -v[1]], [v[1], v[0]]], dtype=float)


def angle(v, w) -> float:
    """Angle between two unit vectors, in [0, pi]."""
    v, w = _unit(v), _unit(w)
    return math.acos(min(1.0, max(-1.0, float(v @ w))))


def _signed_angle(d0, d1) -> float:
    """Oriented angle from d0 to d1 in (-pi, pi]."""
    return math.atan2(d0[0] * d1[1] - d0[1] * d1[0], d0[0] * d1[0] + d0[1] * d1[1])


@dataclass(frozen=True)
class Isometry:
    """Orientation-preserving rigid motion with gamma(0) = z, gamma(e1) = z + v."""

    z: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "z", np.asarray(self.z, dtype=float))
        object.__setattr__(self, "v", _unit(self.v))

    def apply(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        return p @ rotation(self.v).T + self.z

    def invert(self) -> "Isometry":
        rt = rotation(self.v).T
        return Isometry(z=-(rt @ self.z), v=rt @ np.array([1.0, 0.0]))


@dataclass(frozen=True)
class Cone:
    """Cone A_r^u(z, v): image of {0 <= x < r, |y| <= w*u*x} under the frame.

    ``w`` selects the single (1) or doubled (2) aperture.
    """

    z: np.ndarray
    v: np.ndarray
    r: float
    u: float
    w: int = 1

    def __post_init__(self):
        object.__setattr__(self, "z", np.asarray(self.z, dtype=float))
        object.__setattr__(self, "v", _unit(self.v))
        if self.r <= 0 or self.u <= 0 or self.w not in (1, 2):
            raise ValueError("need r > 0, u > 0, w in {1, 2}")

    def frame(self) -> Isometry:
        return Isometry(self.z, self.v)

    def to_frame(self, p) -> np.ndarray:
        return self.frame().invert().apply(p)

    def contains(self, p, tol: float = 0.0):
        q = np.atleast_2d(self.to_frame(p))
        x, y = q[:, 0], q[:, 1]
        ok = (x >= -tol) & (x < self.r + tol) & (np.abs(y) <= self.w * self.u * x + tol)
        return ok if ok.size > 1 else bool(ok[0])

    def corners(self) -> np.ndarray:
        """Apex and the two far corners, in world coordinates."""
        a = self.w * self.u * self.r
        local = np.array([[0.0, 0.0], [self.r, -a], [self.r, a]])
        return self.frame().apply(local)


class Polyline:
    """Ordered vertex chain, open or closed (closure implicit, no repeat)."""

    __slots__ = ("vertices", "closed")

    def __init__(self, vertices, closed: bool = False):
        pts = np.asarray(vertices, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
            raise ValueError("need an (n, 2) array with n >= 2")
        if closed and np.allclose(pts[0], pts[-1]):
            pts = pts[:-1]
        seg = np.diff(pts, axis=0)
        if closed:
            seg = np.vstack([seg, pts[0] - pts[-1]])
        if np.any(np.hypot(seg[:, 0], seg[:, 1]) < 1e-12):
            raise DegenerateSegment("consecutive vertices coincide")
        self.vertices = pts
        self.closed = closed

    def __len__(self):
        return len(self.vertices)

    def segments(self) -> np.ndarray:
        """(m, 2, 2) array of segment endpoints."""
        v = self.vertices
        if self.closed:
            pairs = np.stack([v, np.roll(v, -1, axis=0)], axis=1)
        else:
            pairs = np.stack([v[:-1], v[1:]], axis=1)
        return pairs

    def directions(self) -> np.ndarray:
        seg = self.segments()
        d = seg[:, 1] - seg[:, 0]
        return d / np.hypot(d[:, 0], d[:, 1])[:, None]

    def length(self) -> float:
        seg = self.segments()
        d = seg[:, 1] - seg[:, 0]
        return float(np.hypot(d[:, 0], d[:, 1]).sum())

    def densify(self, resolution: float) -> np.ndarray:
        """Sample points along the polyline at spacing <= resolution."""
        out = []
        for a, b in self.segments():
            n = max(1, int(math.ceil(np.hypot(*(b - a)) / resolution)))
            t = np.linspace(0.0, 1.0, n, endpoint=False)
            out.append(a + t[:, None] * (b - a))
        out.append(self.vertices[-1:] if not self.closed else np.empty((0, 2)))
        return np.vstack(out)

    def transformed(self, iso: Isometry) -> "Polyline":
        return Polyline(iso.apply(self.vertices), self.closed)

    def is_simple(self, tol: float = 1e-12) -> bool:
        """Segment-pair test: no crossings apart from shared endpoints."""
        segs = self.segments()
        m = len(segs)
        for i in range(m):
            for j in range(i + 1, m):
                adjacent = (j == i + 1) or (self.closed and i == 0 and j == m - 1)
                if _segments_cross(segs[i], segs[j], tol, skip_shared=adjacent):
                    return False
        return True

    def __repr__(self):
        kind = "closed" if self.closed else "open"
        return f"Polyline({len(self.vertices)} pts, {kind})"


def _segments_cross(s1, s2, tol, skip_shared):
    (a, b), (c, d) = s1, s2
    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if skip_shared:
        # endpoints touch by construction; only a genuine overlap counts
        if max(abs(o1), abs(o2), abs(o3), abs(o4)) <= tol:
            # collinear adjacent segments: cross iff they back-track
            u = b - a
            w = d - c
            return float(u @ w) < 0
        return False
    if ((o1 > tol) != (o2 > tol)) and ((o3 > tol) != (o4 > tol)):
        return True
    return False


# -- Hausdorff distance ------------------------------------------------


def _as_points(obj, resolution):
    if isinstance(obj, Polyline):
        return obj.densify(resolution), obj
    pts = np.atleast_2d(np.asarray(obj, dtype=float))
    if pts.size == 0:
        raise EmptyInput("empty point set")
    return pts, None


def _dist_to_polyline(pts, poly: Polyline) -> np.ndarray:
    """Exact distances from points to the polyline's segment set."""
    best = np.full(len(pts), np.inf)
    for a, b in poly.segments():
        ab = b - a
        t = np.clip(((pts - a) @ ab) / float(ab @ ab), 0.0, 1.0)
        proj = a + t[:, None] * ab
        d = np.hypot(*(pts - proj).T)
        np.minimum(best, d, out=best)
    return best


def hausdorff(a, b, resolution: float = 1e-3) -> float:
    """Hausdorff distance between point sets and/or polylines.

    Polylines are densified at ``resolution``; distances from the samples to
    the other object are exact (point-to-segment), so the result is correct
    within resolution / 2.
    """
    pa, la = _as_points(a, resolution)
    pb, lb = _as_points(b, resolution)

    def directed(p, other_pts, other_line):
        if other_line is not None:
            return float(_dist_to_polyline(p, other_line).max())
        d2 = ((p[:, None, :] - other_pts[None, :, :]) ** 2).sum(-1)
        return float(np.sqrt(d2.min(axis=1)).max())

    return max(directed(pa, pb, lb), directed(pb, pa, la))


# -- Lipschitz graphs ---------------------------------------------------


@dataclass
class GraphWitness:
    """Outcome of the two-point Lipschitz-graph test."""

    ok: bool
    direction: np.ndarray
    lipschitz_bound: float
    violating_pair: tuple[np.ndarray, np.ndarray] | None = None
    t: np.ndarray | None = None          # parameters along v-perp (on success)
    values: np.ndarray | None = None     # heights along v (on success)

    def __bool__(self):
        return self.ok


def is_lipschitz_graph(p: Polyline, v, L: float, tol: float = PAIR_TOL) -> GraphWitness:
    """Two-point criterion: |(A - B) . v| <= L/sqrt(1+L^2) |A - B| for all vertex pairs."""
    v = _unit(v)
    pts = p.vertices
    c = L / math.sqrt(1.0 + L * L)
    diff = pts[:, None, :] - pts[None, :, :]
    lhs = np.abs(diff @ v)
    rhs = c * np.hypot(diff[..., 0], diff[..., 1]) + tol
    bad = lhs > rhs
    if bad.any():
        i, j = np.unravel_index(np.argmax(lhs - rhs), bad.shape)
        return GraphWitness(False, v, L, violating_pair=(pts[i], pts[j]))
    t = pts @ perp(v)
    h = pts @ v
    order = np.argsort(t, kind="stable")
    return GraphWitness(True, v, L, t=t[order], values=h[order])


# -- turn ----------------------------------------------------------------


def _turn_angles(p: Polyline, signed: bool) -> np.ndarray:
    d = p.directions()
    if len(d) < 2:
        return np.zeros(0)
    if p.closed:
        pairs = zip(d, np.roll(d, -1, axis=0))
    else:
        pairs = zip(d[:-1], d[1:])
    if signed:
        return np.array([_signed_angle(a, b) for a, b in pairs])
    return np.array([angle(a, b) for a, b in pairs])


def turn(p: Polyline) -> float:
    """Total turn: sum of angles between consecutive segment directions."""
    if len(p) < 3:
        return 0.0
    return float(_turn_angles(p, signed=False).sum())


def signed_turn(p: Polyline) -> float:
    if len(p) < 3:
        return 0.0
    return float(_turn_angles(p, signed=True).sum())


# -- one-Lipschitz decomposition -----------------------------------------


@dataclass
class LipschitzPiece:
    polyline: Polyline
    direction: np.ndarray  # graph direction (bisector normal of the span)


def decompose_one_lipschitz(p: Polyline) -> list[LipschitzPiece]:
    """Split a simple closed polyline into 1-Lipschitz graph pieces.

    Edges are grouped greedily while the angular span of their directions
    stays below pi/2; every direction in a group then lies within pi/4 of
    the span bisector, so the group is a graph of slope <= 1 over the
    bisector axis.  The final partial group is kept.
    """
    if not p.closed:
        raise NotClosed("decomposition needs a closed polyline")
    if not p.is_simple():
        raise NotSimple("polyline self-intersects")
    return _decompose(p.vertices, closed=True)


def _decompose(vertices: np.ndarray, closed: bool) -> list[LipschitzPiece]:
    poly = Polyline(vertices, closed=closed)
    d = poly.directions()
    m = len(d)
    theta0 = math.atan2(d[0][1], d[0][0])
    # unwrapped direction angles, accumulated edge to edge
    phis = [theta0]
    for k in range(1, m):
        phis.append(phis[-1] + _signed_angle(d[k - 1], d[k]))
    pieces = []
    start = 0
    lo = hi = phis[0]
    for k in range(1, m):
        nlo, nhi = min(lo, phis[k]), max(hi, phis[k])
        if nhi - nlo >= math.pi / 2 - 1e-12:
            pieces.append(_make_piece(vertices, start, k, 0.5 * (lo + hi), closed))
            start, lo, hi = k, phis[k], phis[k]
        else:
            lo, hi = nlo, nhi
    pieces.append(_make_piece(vertices, start, m, 0.5 * (lo + hi), closed))
    return pieces


def _make_piece(vertices, e_first, e_stop, bisector_angle, closed):
    n = len(vertices)
    idx = [(e_first + i) % n if closed else e_first + i for i in range(e_stop - e_first + 1)]
    pts = vertices[idx]
    tangent = np.array([math.cos(bisector_angle), math.sin(bisector_angle)])
    normal = np.array([-tangent[1], tangent[0]])
    return LipschitzPiece(Polyline(pts, closed=False), normal)


# -- DC certification ------------------------------------------------------


@dataclass
class DCCertificate:
    ok: bool
    direction: np.ndarray | None
    lipschitz_bound: float | None
    total_turn: float
    reason: str = ""

    def __bool__(self):
        return self.ok


def dc_certify(p: Polyline, v, L: float, K: float) -> DCCertificate:
    """Certify that p represents a DC graph: Lipschitz in direction v, turn <= K."""
    t = turn(p)
    w = is_lipschitz_graph(p, v, L)
    if not w:
        return DCCertificate(False, None, None, t, reason="not a Lipschitz graph in v")
    if t > K + 1e-12:
        return DCCertificate(False, None, None, t, reason=f"turn {t:.6g} exceeds budget {K:.6g}")
    return DCCertificate(True, w.direction, L, t)


# -- embedded graphs --------------------------------------------------------


@dataclass
class EmbeddedGraph:
    """Graph {t * v_perp + f(t) * v} of a DC function over the v-perp axis."""

    v: np.ndarray
    f: DCFun
    source: object = field(default=None, repr=False)  # optional exact callable

    def __post_init__(self):
        self.v = _unit(self.v)

    @property
    def interval(self) -> tuple[float, float]:
        return self.f.a, self.f.b

    def points(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        return ts[:, None] * perp(self.v)[None, :] + self.f(ts)[:, None] * self.v[None, :]

    def lipschitz_constant(self) -> float:
        return lipschitz_constant(self.f)


def realize(graph: EmbeddedGraph, tol: float) -> Polyline:
    """Polyline within Hausdorff distance tol of the graph.

    For PL data the breakpoints are exact; if the graph carries an exact
    source callable the grid is refined until the chord sagitta is below tol.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    ts = list(graph.f.grid)
    if graph.source is not None:
        fn = graph.source
        done = False
        while not done:
            done = True
            out = [ts[0]]
            for lo, hi in zip(ts[:-1], ts[1:]):
                mid = 0.5 * (lo + hi)
                if abs(fn(mid) - 0.5 * (fn(lo) + fn(hi))) > tol and hi - lo > 1e-12:
                    out.append(mid)
                    done = False
                out.append(hi)
            ts = out
        pts = np.array([[t, fn(t)] for t in ts])
        world = pts[:, 0:1] * perp(graph.v)[None, :] + pts[:, 1:2] * graph.v[None, :]
        return Polyline(world, closed=False)
    return Polyline(graph.points(np.asarray(ts)), closed=False)
