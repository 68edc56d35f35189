"""Ready-made scenes and randomized generic scene generators for tests/demos."""

from __future__ import annotations

import math

import numpy as np

from .dcfun import DCFun
from .scene import ConvexPolygon, Disk, PointPiece, Scene, Segment, Slab, check_generic

__all__ = [
    "square",
    "rectangle",
    "regular_polygon",
    "comb_scene",
    "two_squares_scene",
    "annulus_scene",
    "random_generic_scene",
    "random_piece",
    "random_slab",
]


def rectangle(x0, y0, x1, y1, name="rect") -> ConvexPolygon:
    return ConvexPolygon(np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]], dtype=float), name=name)


def square(x0=0.0, y0=0.0, side=1.0, name="square") -> ConvexPolygon:
    return rectangle(x0, y0, x0 + side, y0 + side, name=name)


def regular_polygon(n: int, center=(0.0, 0.0), radius=1.0, name="ngon") -> ConvexPolygon:
    th = 2.0 * math.pi * np.arange(n) / n
    pts = np.asarray(center) + radius * np.c_[np.cos(th), np.sin(th)]
    return ConvexPolygon(pts, name=name)


def two_squares_scene(offset=0.5) -> Scene:
    a = square(0, 0, 1, name="A")
    b = square(offset, offset, 1, name="B")
    return Scene([a, b])


def annulus_scene(outer=3.0, thickness=1.0) -> Scene:
    """Square ring built from four overlapping bars (union has one hole).

    The bars overhang slightly so all boundary contacts are transversal
    crossings, keeping the scene generic.
    """
    t, s = thickness, outer
    o = 0.2 * t  # overhang
    return Scene(
        [
            rectangle(-o, 0, s + o, t, "bottom"),
            rectangle(-o, s - t, s + o, s, "top"),
            rectangle(0, -o, t, s + o, "left"),
            rectangle(s - t, -o, s, s + o, "right"),
        ]
    )


def comb_scene(n_teeth: int = 3, cell=1.0, bar=0.4) -> Scene:
    """Union of bars forming a row of n enclosed cells.

    Two horizontal bars joined by n + 1 vertical teeth; the teeth overhang
    the bars slightly so every contact is a transversal crossing.  The
    complement has n bounded cells plus the outside, n + 1 components total.
    """
    n = n_teeth
    o = 0.2 * bar  # overhang
    w = n * cell + (n + 1) * bar
    h = cell + 2 * bar
    pieces = [
        rectangle(-o, 0, w + o, bar, "bottom"),
        rectangle(-o, h - bar, w + o, h, "top"),
    ]
    for i in range(n + 1):
        x0 = i * (cell + bar)
        pieces.append(rectangle(x0, -o, x0 + bar, h + o, f"tooth{i}"))
    return Scene(pieces)


def random_slab(rng: np.random.Generator, name="slab") -> Slab:
    """Slab between two random PL graphs over a random direction."""
    a = rng.uniform(-2.0, 0.0)
    b = a + rng.uniform(1.0, 3.0)
    grid = np.sort(np.concatenate([[a, b], rng.uniform(a, b, rng.integers(1, 4))]))
    grid = np.unique(grid)
    lo = rng.uniform(-1.0, 0.0, len(grid))
    hi = lo + rng.uniform(0.3, 1.5, len(grid))
    th = rng.uniform(0, 2 * math.pi)
    v = np.array([math.cos(th), math.sin(th)])
    return Slab(v, DCFun.from_points(grid, lo), DCFun.from_points(grid, hi), name=name)


def random_piece(rng: np.random.Generator, kinds=("square", "disk", "slab", "segment"), name="p"):
    kind = kinds[rng.integers(0, len(kinds))]
    c = rng.uniform(-2.0, 2.0, 2)
    if kind == "square":
        side = rng.uniform(0.5, 2.0)
        th = rng.uniform(0, 2 * math.pi)
        rot = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
        base = np.array([[0, 0], [side, 0], [side, side], [0, side]]) - side / 2
        return ConvexPolygon(base @ rot.T + c, name=name)
    if kind == "disk":
        return Disk(c, rng.uniform(0.4, 1.2), tol=1e-4, name=name)
    if kind == "slab":
        piece = random_slab(rng, name=name)
        from .planar import Isometry

        return piece.transformed(Isometry(c, np.array([1.0, 0.0])))
    if kind == "segment":
        d = rng.uniform(-1.5, 1.5, 2)
        return Segment(c, c + d + np.array([0.1, 0.1]), name=name)
    return PointPiece(c, name=name)


def random_generic_scene(
    rng: np.random.Generator,
    n_pieces: int | None = None,
    kinds=("square", "disk", "slab", "segment"),
    max_tries: int = 50,
) -> Scene:
    """Random scene that passes the genericity validator (retry on contact)."""
    n = int(n_pieces if n_pieces is not None else rng.integers(2, 6))
    for _ in range(max_tries):
        pieces = [random_piece(rng, kinds, name=f"p{i}") for i in range(n)]
        scene = Scene(pieces)
        if not check_generic(scene, 1e-9):
            return scene
    raise RuntimeError("could not draw a generic scene")
