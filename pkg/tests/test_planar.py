import math

import numpy as np
import pytest

from plancurv import planar as pl
from plancurv.dcfun import DCFun
from plancurv.errors import DegenerateSegment, EmptyInput, NotClosed, NotSimple, NotUnit


def ngon(n, radius=1.0, center=(0.0, 0.0)):
    th = np.linspace(0, 2 * math.pi, n, endpoint=False)
    return pl.Polyline(np.asarray(center) + radius * np.c_[np.cos(th), np.sin(th)], closed=True)


def random_isometry(rng):
    th = rng.uniform(0, 2 * math.pi)
    return pl.Isometry(rng.uniform(-3, 3, 2), np.array([math.cos(th), math.sin(th)]))


# -- isometries -----------------------------------------------------------


def test_identity_isometry():
    iso = pl.Isometry([0, 0], [1, 0])
    p = np.array([0.3, -2.0])
    assert np.allclose(iso.apply(p), p)


def test_rotate_translate():
    iso = pl.Isometry([1, 2], [0, 1])
    assert np.allclose(iso.apply([1, 0]), [1, 3])


def test_invert_group_law():
    rng = np.random.default_rng(0)
    for _ in range(100):
        iso = random_isometry(rng)
        p = rng.normal(size=2)
        assert np.abs(iso.invert().apply(iso.apply(p)) - p).max() < 1e-12


# -- angle ------------------------------------------------------------------


@pytest.mark.parametrize(
    "v,w,expected",
    [([1, 0], [1, 0], 0.0), ([1, 0], [0, 1], math.pi / 2), ([1, 0], [-1, 0], math.pi)],
)
def test_angle_values(v, w, expected):
    assert pl.angle(v, w) == pytest.approx(expected)


def test_angle_rejects_non_unit():
    with pytest.raises(NotUnit):
        pl.angle([2, 0], [1, 0])


# -- cones -----------------------------------------------------------------


def test_cone_membership():
    cone = pl.Cone([0, 0], [1, 0], r=1.0, u=0.5, w=2)
    assert cone.contains([0.5, 0.3])
    assert cone.contains([0.5, 0.5])
    assert not cone.contains([0.5, 0.6])
    assert not cone.contains([-0.1, 0.0])
    assert not cone.contains([1.1, 0.0])


def test_cone_frame_consistency():
    cone = pl.Cone([2, 1], [0, 1], r=1.0, u=0.5, w=1)
    inside_local = np.array([0.5, 0.2])
    world = cone.frame().apply(inside_local)
    assert cone.contains(world)


# -- hausdorff ---------------------------------------------------------------


def test_hausdorff_points():
    assert pl.hausdorff(np.array([[0, 0]]), np.array([[3, 4]])) == pytest.approx(5.0)


def test_hausdorff_identity():
    pts = np.random.default_rng(1).normal(size=(20, 2))
    assert pl.hausdorff(pts, pts) == 0.0


def test_hausdorff_shifted_square():
    a = pl.Polyline([[0, 0], [1, 0], [1, 1], [0, 1]], closed=True)
    b = pl.Polyline(np.array([[0, 0], [1, 0], [1, 1], [0, 1]]) + [0.1, 0.0], closed=True)
    d = pl.hausdorff(a, b, resolution=1e-3)
    # brute-force oracle over densified vertex sets
    pa, pb = a.densify(1e-3), b.densify(1e-3)
    dm = np.sqrt(((pa[:, None] - pb[None]) ** 2).sum(-1))
    oracle = max(dm.min(1).max(), dm.min(0).max())
    assert abs(d - oracle) < 2e-3
    assert abs(d - 0.1) < 2e-3


def test_hausdorff_empty():
    with pytest.raises(EmptyInput):
        pl.hausdorff(np.empty((0, 2)), np.array([[0, 0]]))


def test_hausdorff_epsilon_characterization():
    # dist <= eps iff each set lies in the eps-parallel set of the other
    rng = np.random.default_rng(2)
    for _ in range(20):
        a = rng.normal(size=(8, 2))
        b = rng.normal(size=(11, 2))
        d = pl.hausdorff(a, b)
        dm = np.sqrt(((a[:, None] - b[None]) ** 2).sum(-1))
        for eps in (0.99 * d, 1.01 * d):
            within = dm.min(1).max() <= eps and dm.min(0).max() <= eps
            assert within == (d <= eps)


def test_union_limit_bound():
    # Hausdorff distance of unions is at most the max over the families
    rng = np.random.default_rng(3)
    for _ in range(50):
        fams = rng.integers(2, 5)
        aks, ais, dists = [], [], []
        for _i in range(fams):
            ai = rng.normal(size=(rng.integers(2, 7), 2))
            ak = ai + rng.normal(scale=0.05, size=ai.shape)
            ais.append(ai)
            aks.append(ak)
            dists.append(pl.hausdorff(ak, ai))
        d_union = pl.hausdorff(np.vstack(aks), np.vstack(ais))
        assert d_union <= max(dists) + 1e-12


# -- lipschitz graphs ---------------------------------------------------------


def test_horizontal_segment_is_graph():
    p = pl.Polyline([[0, 0], [1, 0]])
    assert pl.is_lipschitz_graph(p, [0, 1], 1.0).ok


def test_vertical_segment_is_not_graph():
    p = pl.Polyline([[0, 0], [0, 1]])
    for L in (0.5, 1.0, 10.0):
        w = pl.is_lipschitz_graph(p, [0, 1], L)
        assert not w.ok
        assert w.violating_pair is not None


def test_threshold_factor_is_one_over_sqrt2():
    # slope-1 segment against direction (0,1) sits exactly at L/sqrt(1+L^2)
    p = pl.Polyline([[0, 0], [1, 1]])
    assert pl.is_lipschitz_graph(p, [0, 1], 1.0).ok
    diff = np.array([1.0, 1.0])
    assert abs(diff @ np.array([0, 1.0])) / np.hypot(*diff) == pytest.approx(1 / math.sqrt(2))


def test_threshold_tight_two_point():
    rng = np.random.default_rng(4)
    v = np.array([0.0, 1.0])
    for _ in range(200):
        L = rng.uniform(0.2, 5.0)
        dx = rng.uniform(0.1, 2.0)
        at = pl.Polyline([[0, 0], [dx, L * dx]])
        beyond = pl.Polyline([[0, 0], [dx, (L + 1e-6) * dx]])
        assert pl.is_lipschitz_graph(at, v, L).ok
        assert not pl.is_lipschitz_graph(beyond, v, L).ok


def test_witness_recovers_function():
    p = pl.Polyline([[0, 0], [1, 0.5], [2, 0.2]])
    w = pl.is_lipschitz_graph(p, [0, 1], 1.0)
    assert w.ok
    assert np.allclose(w.t, [0, 1, 2])
    assert np.allclose(w.values, [0, 0.5, 0.2])


# -- turn ---------------------------------------------------------------------


def test_turn_collinear_zero():
    p = pl.Polyline([[0, 0], [1, 0], [2, 0]])
    assert pl.turn(p) == pytest.approx(0.0)


def test_turn_l_shape():
    p = pl.Polyline([[0, 0], [1, 0], [1, 1]])
    assert pl.turn(p) == pytest.approx(math.pi / 2)


def test_signed_turn_convex_polygon():
    assert pl.signed_turn(ngon(17)) == pytest.approx(2 * math.pi)


def test_turn_degenerate_segment():
    with pytest.raises(DegenerateSegment):
        pl.Polyline([[0, 0], [0, 0], [1, 0]])


def test_turn_additivity():
    rng = np.random.default_rng(5)
    for _ in range(30):
        pts = rng.normal(size=(8, 2)).cumsum(axis=0)
        p = pl.Polyline(pts)
        k = int(rng.integers(2, 6))
        left = pl.Polyline(pts[: k + 1])
        right = pl.Polyline(pts[k:])
        d = p.directions()
        joint = pl.angle(d[k - 1], d[k])
        assert pl.turn(p) == pytest.approx(pl.turn(left) + pl.turn(right) + joint)


def test_turn_isometry_invariance():
    rng = np.random.default_rng(6)
    pts = rng.normal(size=(10, 2)).cumsum(axis=0)
    p = pl.Polyline(pts)
    for _ in range(10):
        iso = random_isometry(rng)
        q = p.transformed(iso)
        assert pl.turn(q) == pytest.approx(pl.turn(p))
        assert pl.hausdorff(p.densify(0.01), q.transformed(iso.invert()).densify(0.01)) < 1e-9


def test_lipschitz_graph_rotated_direction_invariance():
    rng = np.random.default_rng(60)
    grid = np.linspace(0, 2, 7)
    p = pl.Polyline(np.c_[grid, rng.uniform(-0.5, 0.5, 7)])
    v = np.array([0.0, 1.0])
    base = pl.is_lipschitz_graph(p, v, 0.9).ok
    for _ in range(10):
        iso = random_isometry(rng)
        q = p.transformed(iso)
        v_rot = pl.rotation(iso.v) @ v
        assert pl.is_lipschitz_graph(q, v_rot, 0.9).ok == base


# -- decomposition -------------------------------------------------------------


def test_square_four_pieces():
    sq = pl.Polyline([[0, 0], [1, 0], [1, 1], [0, 1]], closed=True)
    pieces = pl.decompose_one_lipschitz(sq)
    assert len(pieces) == 4
    for piece in pieces:
        assert len(piece.polyline) == 2
        assert pl.is_lipschitz_graph(piece.polyline, piece.direction, 1.0).ok


@pytest.mark.parametrize("n", [8, 16, 64, 100, 256])
def test_ngon_five_piece_bound(n):
    pieces = pl.decompose_one_lipschitz(ngon(n))
    assert len(pieces) <= 5
    for piece in pieces:
        assert pl.is_lipschitz_graph(piece.polyline, piece.direction, 1.0).ok


def test_triangle_at_most_three():
    assert len(pl.decompose_one_lipschitz(ngon(3))) <= 3


def test_decompose_covers_curve():
    p = ngon(12)
    pieces = pl.decompose_one_lipschitz(p)
    covered = np.vstack([q.polyline.vertices for q in pieces])
    assert pl.hausdorff(covered, p.vertices) < 1e-12


def test_piece_count_bound_random_convex():
    rng = np.random.default_rng(7)
    for _ in range(20):
        n = int(rng.integers(5, 40))
        p = ngon(n, radius=rng.uniform(0.5, 3.0))
        pieces = pl.decompose_one_lipschitz(p)
        assert len(pieces) <= math.ceil(pl.turn(p) / (math.pi / 2)) + 1


def test_decompose_requires_closed_simple():
    with pytest.raises(NotClosed):
        pl.decompose_one_lipschitz(pl.Polyline([[0, 0], [1, 0], [2, 1]]))
    bow = pl.Polyline([[0, 0], [1, 1], [1, 0], [0, 1]], closed=True)
    with pytest.raises(NotSimple):
        pl.decompose_one_lipschitz(bow)


# -- dc certification -----------------------------------------------------------


def test_certify_segment():
    cert = pl.dc_certify(pl.Polyline([[0, 0], [1, 0]]), [0, 1], 1.0, 1.0)
    assert cert.ok
    assert cert.total_turn == 0.0


def test_certify_semicircle():
    # chord polyline of the upper half circle, 64 segments
    n = 64
    th = np.linspace(0.0, math.pi, n + 1)
    p = pl.Polyline(np.c_[np.cos(th), np.sin(th)])
    expected_turn = math.pi * (n - 1) / n  # analytic turn of the chord polyline
    assert pl.turn(p) == pytest.approx(expected_turn, abs=1e-9)
    # steep chords near the endpoints need a large Lipschitz bound
    slopes = np.abs(np.diff(p.vertices[:, 1]) / np.diff(p.vertices[:, 0]))
    L = slopes.max() + 1.0
    cert = pl.dc_certify(p, [0, 1], L, math.pi)
    assert cert.ok


def test_certify_zigzag_turn_budget():
    teeth = 50
    xs, ys = [0.0], [0.0]
    for i in range(teeth * 2):
        xs.append(xs[-1] + 1.0)
        ys.append(0.0 if ys[-1] else 1.0)
    p = pl.Polyline(np.c_[xs, ys])
    t = pl.turn(p)
    assert pl.dc_certify(p, [0, 1], 1.0, t + 1e-9).ok
    assert not pl.dc_certify(p, [0, 1], 1.0, t - 0.1).ok


# -- embedded graphs -------------------------------------------------------------


def test_realize_abs():
    g = pl.EmbeddedGraph(np.array([0.0, 1.0]), DCFun.from_points([-1, 0, 1], [1, 0, 1]))
    r = pl.realize(g, 1e-9)
    assert len(r) == 3
    assert np.allclose(r.vertices, [[-1, 1], [0, 0], [1, 1]])


def test_realize_flat():
    g = pl.EmbeddedGraph(np.array([0.0, 1.0]), DCFun.constant(0, 2, 0.0))
    r = pl.realize(g, 1e-9)
    assert len(r) == 2


def test_realize_disk_upper_half_within_tol():
    tol = 1e-4
    fn = lambda t: math.sqrt(max(0.0, 1.0 - t * t))
    f = DCFun.from_callable(fn, -0.8, 0.8, tol / 2)
    g = pl.EmbeddedGraph(np.array([0.0, 1.0]), f, source=fn)
    r = pl.realize(g, tol)
    samples = np.linspace(-0.8, 0.8, 2000)
    exact = pl.Polyline(np.c_[samples, np.sqrt(1 - samples**2)])
    assert pl.hausdorff(r, exact, resolution=tol / 4) < tol


def test_graph_roundtrip_lipschitz():
    rng = np.random.default_rng(8)
    for _ in range(25):
        n = rng.integers(2, 7)
        grid = np.unique(np.concatenate([[-1, 1], rng.uniform(-1, 1, n)]))
        f = DCFun.from_points(grid, rng.uniform(-1, 1, len(grid)))
        th = rng.uniform(0, 2 * math.pi)
        v = np.array([math.cos(th), math.sin(th)])
        g = pl.EmbeddedGraph(v, f)
        r = pl.realize(g, 1e-9)
        assert pl.is_lipschitz_graph(r, v, g.lipschitz_constant()).ok
