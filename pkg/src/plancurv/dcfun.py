"""One-variable difference-of-convex calculus on compact intervals.

Every function here is piecewise linear: a DC function is stored as an
ordered pair of convex piecewise-linear components sharing one breakpoint
grid.  All algebraic operations (sum, scaling, max, min, sorted envelopes)
are closed on this representation and exact up to floating point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainMismatch, EmptyInput, OutOfDomain

# Collinear breakpoints are pruned, and convexity violations rejected,
# at this absolute tolerance.
TOL = 1e-9

__all__ = [
    "ConvexPL",
    "DCFun",
    "SubdiffInterval",
    "convexity_defect",
    "add",
    "negate",
    "scale",
    "max2",
    "min2",
    "clarke_subdiff",
    "lipschitz_constant",
    "sorted_envelopes",
    "restrict",
]


@dataclass(frozen=True)
class SubdiffInterval:
    """Closed interval [lo, hi] of slopes: the Clarke subdifferential."""

    lo: float
    hi: float

    def contains(self, s: float, tol: float = TOL) -> bool:
        return self.lo - tol <= s <= self.hi + tol


def convexity_defect(x, y) -> float:
    """Largest amount by which a breakpoint rises above its neighbours' chord.

    Nonpositive (up to noise) exactly when the slopes are nondecreasing; the
    value-space form stays meaningful when refinement creates tiny cells.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) <= 2:
        return 0.0
    w = (x[1:-1] - x[:-2]) / (x[2:] - x[:-2])
    chord = y[:-2] + (y[2:] - y[:-2]) * w
    return float(np.max(y[1:-1] - chord))


class ConvexPL:
    """Convex piecewise-linear function on a compact interval.

    Parameters
    ----------
    breakpoints : strictly increasing abscissae, length >= 2.
    values : ordinates at the breakpoints.
    """

    __slots__ = ("x", "y")

    def __init__(self, breakpoints, values):
        x = np.asarray(breakpoints, dtype=float)
        y = np.asarray(values, dtype=float)
        if x.ndim != 1 or x.shape != y.shape or len(x) < 2:
            raise ValueError("need matching 1-d arrays of length >= 2")
        if not np.all(np.diff(x) > 0):
            raise ValueError("breakpoints must be strictly increasing")
        scale = max(1.0, float(np.abs(y).max()))
        if convexity_defect(x, y) > TOL * scale:
            raise ValueError("slopes must be nondecreasing (convexity)")
        self.x = x
        self.y = y

    @property
    def a(self) -> float:
        return float(self.x[0])

    @property
    def b(self) -> float:
        return float(self.x[-1])

    def slopes(self) -> np.ndarray:
        return np.diff(self.y) / np.diff(self.x)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < self.a - TOL) or np.any(t > self.b + TOL):
            raise OutOfDomain(f"evaluation outside [{self.a}, {self.b}]")
        return np.interp(np.clip(t, self.a, self.b), self.x, self.y)

    def refined(self, grid: np.ndarray) -> "ConvexPL":
        """Return the same function on the union of grids (values interpolated)."""
        xs = _merge_grids(self.x, grid)
        return ConvexPL(xs, np.interp(xs, self.x, self.y))

    def __repr__(self):
        return f"ConvexPL({len(self.x)} pts on [{self.a:g}, {self.b:g}])"


def _merge_grids(*grids) -> np.ndarray:
    xs = np.unique(np.concatenate([np.asarray(g, dtype=float) for g in grids]))
    # collapse points closer than TOL (keep the first of each cluster)
    keep = np.ones(len(xs), dtype=bool)
    keep[1:] = np.diff(xs) > TOL
    return xs[keep]


def _same_interval(f: "DCFun", g: "DCFun") -> None:
    if abs(f.a - g.a) > TOL or abs(f.b - g.b) > TOL:
        raise DomainMismatch(f"[{f.a}, {f.b}] vs [{g.a}, {g.b}]")


class DCFun:
    """Difference g - h of two convex piecewise-linear components.

    The components are canonicalized to share one breakpoint grid, with
    interior breakpoints that are collinear in both components pruned.
    """

    __slots__ = ("g", "h")

    def __init__(self, g: ConvexPL, h: ConvexPL):
        if abs(g.a - h.a) > TOL or abs(g.b - h.b) > TOL:
            raise DomainMismatch("components live on different intervals")
        grid = _merge_grids(g.x, h.x)
        gy = np.interp(grid, g.x, g.y)
        hy = np.interp(grid, h.x, h.y)
        grid, gy, hy = _prune(grid, gy, hy)
        self.g = ConvexPL(grid, gy)
        self.h = ConvexPL(grid, hy)

    # -- constructors -------------------------------------------------

    @classmethod
    def from_points(cls, breakpoints, values) -> "DCFun":
        """Build a DC decomposition of an arbitrary PL function.

        Positive slope jumps go to the convex part, negative jumps to the
        concave part, so ``f = g - h`` with both components convex.
        """
        x = np.asarray(breakpoints, dtype=float)
        y = np.asarray(values, dtype=float)
        if len(x) < 2:
            raise ValueError("need at least two breakpoints")
        s = np.diff(y) / np.diff(x)
        jumps = np.diff(s)
        gy = np.zeros_like(x)
        hy = np.zeros_like(x)
        # affine base follows the first segment; kinks accumulate afterwards
        base = y[0] + s[0] * (x - x[0])
        g_slope_extra = np.concatenate([[0.0], np.cumsum(np.maximum(jumps, 0.0))])
        h_slope_extra = np.concatenate([[0.0], np.cumsum(np.maximum(-jumps, 0.0))])
        for i in range(1, len(x)):
            gy[i] = gy[i - 1] + g_slope_extra[i - 1] * (x[i] - x[i - 1])
            hy[i] = hy[i - 1] + h_slope_extra[i - 1] * (x[i] - x[i - 1])
        return cls(ConvexPL(x, base + gy), ConvexPL(x, hy))

    @classmethod
    def linear(cls, a: float, b: float, slope: float = 0.0, offset: float = 0.0) -> "DCFun":
        x = np.array([a, b])
        return cls.from_points(x, offset + slope * (x - a))

    @classmethod
    def constant(cls, a: float, b: float, c: float) -> "DCFun":
        return cls.linear(a, b, 0.0, c)

    @classmethod
    def from_callable(cls, fn, a: float, b: float, tol: float) -> "DCFun":
        """Discretize a callable at the stated tolerance (chord sagitta <= tol)."""
        xs = list(np.linspace(a, b, 9))
        done = False
        while not done:
            done = True
            out = [xs[0]]
            for lo, hi in zip(xs[:-1], xs[1:]):
                mid = 0.5 * (lo + hi)
                sag = abs(fn(mid) - 0.5 * (fn(lo) + fn(hi)))
                if sag > tol and hi - lo > 1e-12:
                    out.append(mid)
                    done = False
                out.append(hi)
            xs = out
        xs = np.asarray(xs)
        return cls.from_points(xs, np.array([fn(t) for t in xs]))

    # -- basic protocol -----------------------------------------------

    @property
    def a(self) -> float:
        return self.g.a

    @property
    def b(self) -> float:
        return self.g.b

    @property
    def grid(self) -> np.ndarray:
        return self.g.x

    def values(self, t=None):
        if t is None:
            return self.g.y - self.h.y
        return self.g(t) - self.h(t)

    def __call__(self, t):
        return self.values(t)

    def slopes(self) -> np.ndarray:
        return self.g.slopes() - self.h.slopes()

    def one_sided(self, t: float) -> tuple[float, float]:
        """Left and right derivatives at t (equal at smooth points)."""
        if t < self.a - TOL or t > self.b + TOL:
            raise OutOfDomain(f"{t} outside [{self.a}, {self.b}]")
        t = min(max(t, self.a), self.b)
        s = self.slopes()
        x = self.grid
        i = int(np.searchsorted(x, t))
        on_bp = i < len(x) and abs(x[i] - t) <= TOL
        if on_bp:
            left = s[i - 1] if i > 0 else s[0]
            right = s[i] if i < len(s) else s[-1]
        else:
            left = right = s[i - 1]
        return float(left), float(right)

    def __repr__(self):
        return f"DCFun({len(self.grid)} pts on [{self.a:g}, {self.b:g}])"


def _prune(x, gy, hy):
    """Drop interior breakpoints that are collinear in both components.

    Removing a point changes its neighbours' chords, so sweep until stable
    (each sweep removes a non-adjacent set of prunable points).
    """
    mask = np.ones(len(x), dtype=bool)
    changed = True
    while changed and mask.sum() > 2:
        changed = False
        idx = np.flatnonzero(mask)
        xs, gs, hs = x[idx], gy[idx], hy[idx]
        last_removed = -2
        for i in range(1, len(xs) - 1):
            if i - 1 == last_removed:
                continue
            w = (xs[i] - xs[i - 1]) / (xs[i + 1] - xs[i - 1])
            gi = gs[i - 1] + (gs[i + 1] - gs[i - 1]) * w
            hi = hs[i - 1] + (hs[i + 1] - hs[i - 1]) * w
            if abs(gs[i] - gi) <= TOL and abs(hs[i] - hi) <= TOL:
                mask[idx[i]] = False
                last_removed = i
                changed = True
    return x[mask], gy[mask], hy[mask]


# -- algebra ----------------------------------------------------------


def eval(f: DCFun, x):  # noqa: A001 - keep the plain operation name
    return f.values(x)


def add(f1: DCFun, f2: DCFun) -> DCFun:
    _same_interval(f1, f2)
    grid = _merge_grids(f1.grid, f2.grid)
    return DCFun(
        ConvexPL(grid, f1.g(grid) + f2.g(grid)),
        ConvexPL(grid, f1.h(grid) + f2.h(grid)),
    )


def negate(f: DCFun) -> DCFun:
    return DCFun(f.h, f.g)


def scale(f: DCFun, c: float) -> DCFun:
    if c >= 0:
        return DCFun(ConvexPL(f.grid, c * f.g.y), ConvexPL(f.grid, c * f.h.y))
    return DCFun(ConvexPL(f.grid, -c * f.h.y), ConvexPL(f.grid, -c * f.g.y))


def _crossings(grid: np.ndarray, d: np.ndarray) -> list[float]:
    """Abscissae where a PL function d (sampled on grid) changes sign."""
    out = []
    for i in range(len(grid) - 1):
        dl, dr = d[i], d[i + 1]
        if (dl > TOL and dr < -TOL) or (dl < -TOL and dr > TOL):
            out.append(float(grid[i] + dl * (grid[i + 1] - grid[i]) / (dl - dr)))
    return out


def _convex_max(p: ConvexPL, q: ConvexPL) -> ConvexPL:
    """Exact pointwise max of two convex PL functions on one interval."""
    grid = _merge_grids(p.x, q.x)
    d = np.interp(grid, p.x, p.y) - np.interp(grid, q.x, q.y)
    grid = _merge_grids(grid, np.asarray(_crossings(grid, d)))
    return ConvexPL(grid, np.maximum(np.interp(grid, p.x, p.y), np.interp(grid, q.x, q.y)))


def max2(f1: DCFun, f2: DCFun) -> DCFun:
    """max(f1, f2) = max(g1 + h2, g2 + h1) - (h1 + h2)."""
    _same_interval(f1, f2)
    grid = _merge_grids(f1.grid, f2.grid)
    p = ConvexPL(grid, f1.g(grid) + f2.h(grid))
    q = ConvexPL(grid, f2.g(grid) + f1.h(grid))
    hh = ConvexPL(grid, f1.h(grid) + f2.h(grid))
    m = _convex_max(p, q)
    return DCFun(m, hh.refined(m.x))


def min2(f1: DCFun, f2: DCFun) -> DCFun:
    """min(f1, f2) = f1 + f2 - max(f1, f2)."""
    return add(add(f1, f2), negate(max2(f1, f2)))


def clarke_subdiff(f: DCFun, x: float) -> SubdiffInterval:
    """Interval hull of the one-sided derivatives (exact for PL data)."""
    left, right = f.one_sided(x)
    return SubdiffInterval(min(left, right), max(left, right))


def lipschitz_constant(f: DCFun) -> float:
    return float(np.max(np.abs(f.slopes())))


def restrict(f: DCFun, a: float, b: float) -> DCFun:
    """Restriction of f to a subinterval [a, b]."""
    if a < f.a - TOL or b > f.b + TOL or b - a <= TOL:
        raise OutOfDomain(f"[{a}, {b}] not inside [{f.a}, {f.b}]")
    a, b = max(a, f.a), min(b, f.b)
    inner = f.grid[(f.grid > a + TOL) & (f.grid < b - TOL)]
    grid = np.concatenate([[a], inner, [b]])
    return DCFun(ConvexPL(grid, f.g(grid)), ConvexPL(grid, f.h(grid)))


def sorted_envelopes(fs: list[DCFun]) -> list[DCFun]:
    """Pointwise-sorted family with the same union of graphs.

    All breakpoint grids are merged and refined with every pairwise crossing
    abscissa; within each refined cell the input functions keep a fixed
    order, so sorting the values per grid point yields continuous PL
    functions g1 <= ... <= gn whose graphs cover exactly the input graphs.
    """
    if not fs:
        raise EmptyInput("sorted_envelopes of an empty family")
    for f in fs[1:]:
        _same_interval(fs[0], f)
    if len(fs) == 1:
        return [fs[0]]
    grid = _merge_grids(*[f.grid for f in fs])
    vals = np.vstack([f(grid) for f in fs])
    extra = []
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            extra.extend(_crossings(grid, vals[i] - vals[j]))
    if extra:
        grid = _merge_grids(grid, np.asarray(extra))
        vals = np.vstack([f(grid) for f in fs])
    vals = np.sort(vals, axis=0)
    return [DCFun.from_points(grid, row) for row in vals]
