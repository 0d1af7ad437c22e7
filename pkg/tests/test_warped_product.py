import numpy as np
import pytest
from hypothesis import given, strategies as st

from lorentzkit.errors import FlatFiber, NonPositiveRadius, ParseError, PointOffSpace, ShapeError
from lorentzkit.geometry import (
    anti_de_sitter,
    constant_curvature_estimate,
    de_sitter,
    metric_at,
    minkowski,
    sample_rng,
)
from lorentzkit.warped_product import (
    leaf_curvature_ratio,
    minkowski_polar_inverse,
    minkowski_polar_map,
    parse_warp,
    polar_metric_samples,
    polar_pullback_metric,
    scaled_space,
    verify_block_structure,
    verify_polar_pullback,
    warped_from_descriptor,
    warped_metric_samples,
    warped_product,
    wp_metric_at,
)


def test_parse_warp():
    w = parse_warp("r^2")
    assert w(3.0) == 9.0 and w.d1(3.0) == 6.0 and w.d2(3.0) == 2.0
    w = parse_warp("2*l^3 - l + 0.5")
    assert w(2.0) == 14.5 and w.d1(2.0) == 23.0
    assert parse_warp("(t+1)^2")(1.0) == 4.0
    assert parse_warp("3")(10.0) == 3.0


@pytest.mark.parametrize("bad", ["r^", "exp(r)", "r^r", "r^-1", "x*y", "import os", "r/0", ""])
def test_parse_warp_rejects(bad):
    with pytest.raises(ParseError):
        parse_warp(bad)


def test_direct_product_metric():
    ds = de_sitter(2, 1.0)
    wp = warped_product("euclidean", ds, 1.0, k=2)
    u = [0, 1, 0]
    g = wp_metric_at(wp, [0.3, -1], u).matrix
    assert np.allclose(g[:2, :2], np.eye(2))
    assert np.allclose(g[2:, 2:], metric_at(ds, u).matrix)
    assert np.all(g[:2, 2:] == 0)


def test_polar_block_value():
    ds = de_sitter(2, 1.0)
    wp = warped_product("half_line", ds, "r^2")
    u = [0, 1, 0]
    g = wp_metric_at(wp, [2.0], u).matrix
    assert np.allclose(g[1:, 1:], 4 * metric_at(ds, u).matrix)


def test_base_block_independent_of_fiber(rng):
    ds = de_sitter(3, 1.0)
    wp = warped_product("half_line", ds, "r^2 + 1")
    a = wp_metric_at(wp, [1.5], ds.sample_point(rng)).matrix
    b = wp_metric_at(wp, [1.5], ds.sample_point(rng)).matrix
    assert np.array_equal(a[:1, :1], b[:1, :1])


def test_base_checks():
    wp = warped_product("half_line", de_sitter(2), "r")
    with pytest.raises(PointOffSpace):
        wp_metric_at(wp, [-1.0], [0, 1, 0])
    wp = warped_product("euclidean", de_sitter(2), "x - 1")
    with pytest.raises(PointOffSpace):
        wp_metric_at(wp, [0.5], [0, 1, 0])
    with pytest.raises(ShapeError):
        warped_product("circle", de_sitter(2), "1")


def test_polar_map():
    ds = de_sitter(2, 1.0)
    u = ds.sample_point(sample_rng(0, 0))
    assert np.allclose(minkowski_polar_map(2, 1.0, u), u)
    x = minkowski_polar_map(2, 3.0, [0, 1, 0])
    assert np.allclose(x, [0, 3, 0]) and abs(minkowski(2).q(x) - 9) < 1e-12
    with pytest.raises(NonPositiveRadius):
        minkowski_polar_map(2, 0.0, u)
    with pytest.raises(PointOffSpace):
        minkowski_polar_map(2, 1.0, [1, 0, 0])


@given(st.integers(0, 2**16))
def test_polar_round_trip(seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(4)
    q = -x[0] ** 2 + x[1:] @ x[1:]
    if q < 1e-2:
        x[1] += np.sign(x[1] or 1) * (abs(x[0]) + 1)
    r, u = minkowski_polar_inverse(x)
    assert np.max(np.abs(minkowski_polar_map(3, r, u) - x)) <= 1e-12 * max(1, np.linalg.norm(x))
    assert minkowski(3).q(x) > 0


@pytest.mark.parametrize("n", [2, 3])
def test_polar_pullback(n):
    assert verify_polar_pullback(n, 100, 0) <= 1e-6


def test_polar_pullback_wrong_warp():
    assert verify_polar_pullback(2, 10, 0, warp="r", radii=[2.0]) >= 0.1


def test_polar_pullback_metric_structure():
    g = polar_pullback_metric(2, 2.0, [0, 1, 0])
    assert abs(g[0, 0] - 1) < 1e-8 and np.allclose(g[0, 1:], 0, atol=1e-8)


def test_leaf_curvature_examples():
    ds = de_sitter(2, 1.0)
    wp = warped_product("half_line", ds, "r^2")
    k1, k2, err = leaf_curvature_ratio(wp, 1.0, 2.0)
    assert abs(k1 - 1) <= 1e-6 and abs(k2 - 0.25) <= 1e-6 and err <= 1e-6
    wp = warped_product("euclidean", anti_de_sitter(2, 1.0), 2.0)
    k1, k2, _ = leaf_curvature_ratio(wp, 0.0, 5.0)
    assert abs(k1 + 0.5) < 1e-8 and abs(k2 + 0.5) < 1e-8


def test_direct_product_limit():
    ds = de_sitter(3, 1.0)
    k1, k2, _ = leaf_curvature_ratio(warped_product("euclidean", ds, 1.0), 0.0, 1.0)
    assert abs(k1 - 1) < 1e-8 and abs(k2 - 1) < 1e-8


def test_flat_fiber():
    with pytest.raises(FlatFiber):
        leaf_curvature_ratio(warped_product("euclidean", minkowski(2), "1"), 0.0, 1.0)


@pytest.mark.parametrize("c", [0.25, 0.5, 2.0, 4.0])
def test_homothety_law(c):
    for space in (de_sitter(2, 1.0), anti_de_sitter(3, 1.0)):
        k, _ = constant_curvature_estimate(scaled_space(space, c), 20, 0)
        assert abs(k - space.curvature / c) <= 1e-6


def test_block_structure_genuine():
    ds = de_sitter(2, 1.0)
    wp = warped_product("half_line", ds, "r^2 + 1")
    ns = [ds.sample_point(sample_rng(1, i)) for i in range(3)]
    rep = verify_block_structure(warped_metric_samples(wp, [0.5, 1.0, 2.0], ns), (1, 2), 1e-9)
    assert rep["pass"]


def test_block_structure_negative_control():
    ds = de_sitter(2, 1.0)
    ns = [ds.sample_point(sample_rng(2, i)) for i in range(3)]
    samples = []
    for l in (0.5, 1.0):
        for j, n in enumerate(ns):
            g = np.zeros((3, 3))
            g[0, 0] = 1.0 + 0.1 * j  # base block depends on the fiber point
            g[1:, 1:] = metric_at(ds, n).matrix
            samples.append(((np.array([l]), n), g))
    rep = verify_block_structure(samples, (1, 2), 1e-9)
    assert not rep["h_independent_of_n"]["pass"]
    assert rep["off_block_zero"]["pass"]
    assert not rep["pass"]


def test_block_structure_polar():
    ds = de_sitter(2, 1.0)
    us = [ds.sample_point(sample_rng(3, i)) for i in range(3)]
    rep = verify_block_structure(polar_metric_samples(2, [1.0, 2.0, 3.0], us), (1, 2), 1e-6)
    assert rep["pass"]
    for f in rep["factors"]:
        assert abs(f["factor"] - (f["l2"][0] / f["l"][0]) ** 2) < 1e-6


def test_block_structure_shape_error():
    with pytest.raises(ShapeError):
        verify_block_structure([((np.array([1.0]), np.zeros(3)), np.eye(2))], (1, 2))


def test_descriptor_round_trip():
    d = {"base": {"type": "half_line", "k": 1}, "fiber": {"type": "de_sitter", "n": 2, "radius": 1.0},
         "warp": "r^2"}
    wp = warped_from_descriptor(d)
    assert wp.dim == 3 and wp.warp(3.0) == 9.0
    assert warped_from_descriptor(wp.descriptor()).warp(2.0) == 4.0
