import math
from dataclasses import replace

import numpy as np
import pytest

from plancurv.curvature import (
    c0_var,
    curvature_region,
    curvature_scene,
    gauss_bonnet_check,
    slicing_identity_check,
    steiner_check,
)
from plancurv.errors import NotConvex, TouchingHalfplane
from plancurv.planar import Isometry
from plancurv.region import euler_char, region_from_geometry
from plancurv.samples import annulus_scene, random_generic_scene, square, two_squares_scene
from plancurv.scene import (
    Disk,
    Scene,
    Segment,
    check_generic,
    intersect_lattice,
    polygonize,
    union_region,
)


def table(piece):
    return curvature_region(polygonize(piece))


# -- region tables -------------------------------------------------------------


def test_unit_square_table():
    t = table(square())
    assert (t.c0, t.c1, t.c2) == (pytest.approx(1.0), pytest.approx(2.0), pytest.approx(1.0))


def test_unit_disk_table():
    t = table(Disk([0, 0], 1.0, tol=1e-4))
    assert t.c0 == pytest.approx(1.0, abs=1e-9)
    assert t.c1 == pytest.approx(math.pi, abs=1e-3)
    assert t.c2 == pytest.approx(math.pi, abs=1e-3)


def test_segment_table_matches_steiner_oracle():
    seg = Segment([0, 0], [3, 0], name="s")
    t = table(seg)
    assert (t.c0, t.c1, t.c2) == (pytest.approx(1.0), pytest.approx(3.0), pytest.approx(0.0))
    # independent oracle: area of the eps-parallel set of a segment is
    # 2 eps L + pi eps^2; matching the Steiner polynomial coefficient-wise
    eps = 0.37
    capsule = seg.geometry().buffer(eps, quad_segs=512).area
    assert capsule == pytest.approx(t.c2 + 2 * eps * t.c1 + math.pi * eps**2 * t.c0, abs=1e-4)


def test_localized_window():
    t = curvature_region(polygonize(square()), F=(-0.5, -0.5, 0.5, 0.5))
    # one corner, half of two edges, a quarter of the area
    assert t.c0 == pytest.approx(0.25)
    assert t.c1 == pytest.approx(0.5)
    assert t.c2 == pytest.approx(0.25)


# -- scene totals ---------------------------------------------------------------


def test_scene_single_piece_equals_region():
    sc = Scene([square()])
    for k in range(3):
        assert curvature_scene(sc, k) == pytest.approx(table(square())[k])


def test_two_squares_overlap():
    sc = two_squares_scene()
    assert curvature_scene(sc, 2) == pytest.approx(1.75)
    assert curvature_scene(sc, 0) == pytest.approx(1.0)


def test_gauss_bonnet_annulus():
    rep = gauss_bonnet_check(annulus_scene())
    assert rep.euler == 0
    assert rep.c0_total == pytest.approx(0.0, abs=1e-9)
    assert rep.ok


def test_gauss_bonnet_disjoint_disks():
    sc = Scene([Disk([0, 0], 1.0, tol=1e-3, name="a"), Disk([5, 0], 1.0, tol=1e-3, name="b")])
    rep = gauss_bonnet_check(sc)
    assert rep.euler == 2 and rep.ok


def test_gauss_bonnet_random_scenes():
    rng = np.random.default_rng(20)
    for _ in range(10):
        sc = random_generic_scene(rng, rng.integers(2, 5))
        rep = gauss_bonnet_check(sc)
        assert rep.ok, f"C0={rep.c0_total} chi={rep.euler}"


# -- slicing ----------------------------------------------------------------------


def test_slicing_missing_halfplane():
    rep = slicing_identity_check(two_squares_scene(), np.array([1.0, 0.0]), -10.0)
    assert rep.chi_union == rep.chi_sum == 0


def test_slicing_containing_halfplane():
    sc = two_squares_scene()
    rep = slicing_identity_check(sc, np.array([1.0, 0.0]), 10.0)
    assert rep.chi_union == euler_char(union_region(sc))
    assert rep.ok


def test_slicing_touching_rejected():
    with pytest.raises(TouchingHalfplane):
        slicing_identity_check(Scene([square()]), np.array([1.0, 0.0]), 1.0)


def test_slicing_random_directions():
    rng = np.random.default_rng(21)
    sc = two_squares_scene()
    x0, y0, x1, y1 = sc.window
    done = 0
    while done < 100:
        th = rng.uniform(0, 2 * math.pi)
        v = np.array([math.cos(th), math.sin(th)])
        t = rng.uniform(-2.5, 2.5)
        try:
            rep = slicing_identity_check(sc, v, t)
        except TouchingHalfplane:
            continue
        assert rep.ok
        done += 1


# -- steiner ---------------------------------------------------------------------


def test_steiner_square():
    rep = steiner_check(square(), 1.0)
    assert rep.ok
    assert rep.parallel_area == pytest.approx(5 + math.pi, abs=1e-3)


def test_steiner_disk():
    rep = steiner_check(Disk([0, 0], 1.0, tol=1e-5), 1.0)
    assert rep.ok
    assert rep.parallel_area == pytest.approx(4 * math.pi, abs=1e-3)


def test_steiner_segment():
    rep = steiner_check(Segment([0, 0], [3, 0], name="s"), 0.5)
    assert rep.ok
    assert rep.parallel_area == pytest.approx(3 + math.pi / 4, abs=1e-3)


def test_steiner_rejects_nonconvex():
    from plancurv.samples import random_slab

    slab = random_slab(np.random.default_rng(5))
    with pytest.raises(NotConvex):
        steiner_check(slab, 0.5)


# -- c0_var ------------------------------------------------------------------------


def test_c0var_convex_polygon():
    assert c0_var(polygonize(square())) == pytest.approx(1.0)


def test_c0var_l_shape():
    import shapely.geometry as sg

    region = region_from_geometry(sg.Polygon([[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]]))
    assert c0_var(region) == pytest.approx(1.5)
    assert curvature_region(region).c0 == pytest.approx(1.0)


def test_c0var_disk():
    region = polygonize(Disk([0, 0], 1.0, tol=1e-4))
    assert c0_var(region) == pytest.approx(1.0, abs=1e-9)


def test_c0var_dominates_c0():
    rng = np.random.default_rng(22)
    for _ in range(10):
        sc = random_generic_scene(rng, rng.integers(2, 4))
        total_var = 0.0
        for I in sc.index_sets():
            region = intersect_lattice(sc, I)
            if not region.is_empty:
                total_var += c0_var(region)
        assert abs(curvature_scene(sc, 0)) <= total_var + 1e-9


# -- properties ---------------------------------------------------------------------


def test_valuation_additivity_piece_pairs():
    rng = np.random.default_rng(23)
    checked = 0
    while checked < 25:
        a = random_generic_scene(rng, 1, kinds=("square", "disk"))
        b = random_generic_scene(rng, 1, kinds=("square", "disk"))
        sc = Scene([replace(a.pieces[0], name="A"), replace(b.pieces[0], name="B")])
        if check_generic(sc, 1e-9):
            continue
        ra, rb = union_region(Scene(sc.pieces[:1])), union_region(Scene(sc.pieces[1:]))
        runion = union_region(sc)
        rinter = intersect_lattice(sc, [0, 1])
        for k in range(3):
            lhs = curvature_region(runion)[k] + curvature_region(rinter)[k]
            rhs = curvature_region(ra)[k] + curvature_region(rb)[k]
            assert lhs == pytest.approx(rhs, abs=1e-9)
        checked += 1


def test_locality_disjoint_windows():
    # two windows tiling a rectangle, the split line clear of scene vertices
    sc = two_squares_scene()
    s = 0.77
    big = (-0.25, -0.25, 2.25, 2.25)
    f1 = (-0.25, -0.25, s, 2.25)
    f2 = (s, -0.25, 2.25, 2.25)
    for k in range(3):
        whole = curvature_scene(sc, k, big)
        split = curvature_scene(sc, k, f1) + curvature_scene(sc, k, f2)
        assert split == pytest.approx(whole, abs=1e-9)


def test_motion_invariance():
    rng = np.random.default_rng(24)
    sc = two_squares_scene()
    base = [curvature_scene(sc, k) for k in range(3)]
    for _ in range(5):
        th = rng.uniform(0, 2 * math.pi)
        iso = Isometry(rng.uniform(-3, 3, 2), np.array([math.cos(th), math.sin(th)]))
        moved = sc.transformed(iso)
        for k in range(3):
            assert curvature_scene(moved, k) == pytest.approx(base[k], abs=1e-9)
