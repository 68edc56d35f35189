import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plancurv import dcfun as dc
from plancurv.errors import DomainMismatch, EmptyInput, OutOfDomain

TOL = 1e-9


def absfun(a=-1.0, b=1.0):
    return dc.DCFun.from_points([a, 0.0, b], [-a, 0.0, b])


def linear(slope, offset=0.0, a=-1.0, b=1.0):
    x = np.array([a, b])
    return dc.DCFun.from_points(x, offset + slope * x)


def random_dcfun(rng, a=-1.0, b=1.0, max_kinks=6):
    n = rng.integers(0, max_kinks)
    grid = np.unique(np.concatenate([[a, b], rng.uniform(a, b, n)]))
    return dc.DCFun.from_points(grid, rng.uniform(-2, 2, len(grid)))


def check_convex(f):
    for comp in (f.g, f.h):
        scale = max(1.0, float(np.abs(comp.y).max()))
        assert dc.convexity_defect(comp.x, comp.y) <= TOL * scale


# -- eval ---------------------------------------------------------------


def test_eval_discretized_square():
    f = dc.DCFun.from_callable(lambda t: t * t, -1, 1, 1e-6)
    assert f(0.0) == pytest.approx(0.0, abs=1e-6)


def test_eval_abs():
    assert absfun()(0.5) == pytest.approx(0.5)


def test_eval_cancellation():
    f = dc.DCFun(linear(1.0).g, linear(1.0).g)
    assert f(0.7) == pytest.approx(0.0)


def test_eval_out_of_domain():
    with pytest.raises(OutOfDomain):
        absfun()(1.5)


# -- algebra ------------------------------------------------------------


def test_add_abs_and_negation_cancel():
    f = dc.add(absfun(), dc.negate(absfun()))
    xs = np.linspace(-1, 1, 33)
    assert np.allclose(f(xs), 0.0)


def test_add_domain_mismatch():
    with pytest.raises(DomainMismatch):
        dc.add(absfun(), linear(1.0, a=0.0, b=2.0))


def test_negate_swaps_components():
    f = linear(1.0)
    n = dc.negate(f)
    assert np.allclose(n(np.array([-1, 0.3, 1])), [1, -0.3, -1])


def test_scale():
    assert dc.scale(absfun(), 2.0)(0.5) == pytest.approx(1.0)
    assert dc.scale(absfun(), -3.0)(0.5) == pytest.approx(-1.5)
    check_convex(dc.scale(absfun(), -3.0))


def test_max2_of_lines_is_abs():
    m = dc.max2(linear(1.0), linear(-1.0))
    xs = np.linspace(-1, 1, 41)
    assert np.allclose(m(xs), np.abs(xs))
    check_convex(m)


def test_min2_of_lines_is_negabs():
    m = dc.min2(linear(1.0), linear(-1.0))
    xs = np.linspace(-1, 1, 41)
    assert np.allclose(m(xs), -np.abs(xs))


def test_max2_idempotent():
    rng = np.random.default_rng(0)
    f = random_dcfun(rng)
    m = dc.max2(f, f)
    xs = np.linspace(-1, 1, 101)
    assert np.allclose(m(xs), f(xs), atol=1e-12)


def test_max2_min2_random_pointwise():
    rng = np.random.default_rng(1)
    for _ in range(50):
        f1, f2 = random_dcfun(rng), random_dcfun(rng)
        m, n = dc.max2(f1, f2), dc.min2(f1, f2)
        # check at breakpoints and midpoints of the refined grid
        grid = dc._merge_grids(m.grid, n.grid)
        xs = np.unique(np.concatenate([grid, 0.5 * (grid[:-1] + grid[1:])]))
        assert np.allclose(m(xs), np.maximum(f1(xs), f2(xs)), atol=1e-9)
        assert np.allclose(n(xs), np.minimum(f1(xs), f2(xs)), atol=1e-9)
        check_convex(m)
        check_convex(n)


def test_max_min_duality():
    rng = np.random.default_rng(2)
    xs = np.linspace(-1, 1, 101)
    for _ in range(25):
        f1, f2 = random_dcfun(rng), random_dcfun(rng)
        lhs = dc.min2(f1, f2)
        rhs = dc.negate(dc.max2(dc.negate(f1), dc.negate(f2)))
        assert np.allclose(lhs(xs), rhs(xs), atol=1e-9)


# -- subdifferential ----------------------------------------------------


def test_subdiff_abs_kink():
    s = dc.clarke_subdiff(absfun(), 0.0)
    assert (s.lo, s.hi) == (-1.0, 1.0)


def test_subdiff_smooth_point():
    s = dc.clarke_subdiff(absfun(), 0.5)
    assert (s.lo, s.hi) == (1.0, 1.0)


def test_subdiff_concave_kink_fills_gap():
    # hull of the limiting derivatives {-1, +1} even though the kink is concave
    s = dc.clarke_subdiff(dc.negate(absfun()), 0.0)
    assert (s.lo, s.hi) == (-1.0, 1.0)


def test_subdiff_endpoint_one_sided():
    s = dc.clarke_subdiff(absfun(), -1.0)
    assert (s.lo, s.hi) == (-1.0, -1.0)


def test_subdiff_bounds_difference_quotients():
    rng = np.random.default_rng(3)
    for _ in range(50):
        f = random_dcfun(rng)
        x = rng.uniform(-0.9, 0.9)
        s = dc.clarke_subdiff(f, x)
        for d in (1e-6, -1e-6):
            q = (f(x + d) - f(x)) / d
            assert s.lo - 1e-6 <= q <= s.hi + 1e-6


# -- lipschitz constant ---------------------------------------------------


def test_lipschitz_examples():
    assert dc.lipschitz_constant(absfun()) == pytest.approx(1.0)
    assert dc.lipschitz_constant(linear(3.0)) == pytest.approx(3.0)
    f = dc.max2(linear(1.0, a=0, b=2), linear(2.0, -1.0, a=0, b=2))
    assert dc.lipschitz_constant(f) == pytest.approx(2.0)


# -- sorted envelopes ------------------------------------------------------


def test_envelopes_linear_pair():
    env = dc.sorted_envelopes([linear(1.0), linear(-1.0)])
    xs = np.linspace(-1, 1, 33)
    assert np.allclose(env[0](xs), -np.abs(xs))
    assert np.allclose(env[1](xs), np.abs(xs))


def test_envelopes_constants():
    fs = [dc.DCFun.constant(-1, 1, c) for c in (1.0, 0.0, 2.0)]
    env = dc.sorted_envelopes(fs)
    assert [e(0.3) for e in env] == [0.0, 1.0, 2.0]


def test_envelopes_single_identity():
    f = absfun()
    env = dc.sorted_envelopes([f])
    assert env[0] is f


def test_envelopes_empty():
    with pytest.raises(EmptyInput):
        dc.sorted_envelopes([])


def test_envelope_union_preserved_randomized():
    rng = np.random.default_rng(4)
    for _ in range(50):
        fs = [random_dcfun(rng) for _ in range(rng.integers(2, 5))]
        env = dc.sorted_envelopes(fs)
        xs = rng.uniform(-1, 1, 1000)
        fv = np.sort(np.vstack([f(xs) for f in fs]), axis=0)
        gv = np.vstack([g(xs) for g in env])
        assert np.max(np.abs(fv - gv)) <= 1e-9
        assert np.all(np.diff(gv, axis=0) >= -1e-12)
        for g in env:
            check_convex(g)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.lists(st.floats(-2, 2, allow_nan=False), min_size=2, max_size=6),
        min_size=2,
        max_size=4,
    ),
    st.integers(0, 2**32 - 1),
)
def test_envelope_property_hypothesis(value_rows, seed):
    rng = np.random.default_rng(seed)
    fs = []
    for row in value_rows:
        grid = np.linspace(-1.0, 1.0, len(row))
        fs.append(dc.DCFun.from_points(grid, row))
    env = dc.sorted_envelopes(fs)
    xs = rng.uniform(-1, 1, 64)
    fv = np.sort(np.vstack([f(xs) for f in fs]), axis=0)
    gv = np.vstack([g(xs) for g in env])
    assert np.max(np.abs(fv - gv)) <= 1e-9


def test_restrict():
    f = absfun()
    r = dc.restrict(f, -0.5, 0.75)
    xs = np.linspace(-0.5, 0.75, 17)
    assert np.allclose(r(xs), np.abs(xs))
    with pytest.raises(OutOfDomain):
        dc.restrict(f, -2.0, 0.5)


def test_canonical_grid_shared():
    f = absfun()
    assert np.array_equal(f.g.x, f.h.x)
