import math
import time

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bngeom.bitnet import fisher_metric, metric_jet
from bngeom.curvature import (
    MetricJet,
    bitnet_ricci,
    curvature_report,
    d4_pointwise_ricci,
    fit_collapsing_star_form,
    gaussian_ricci,
    ricci_scalar,
    ricci_scalar_diagonal,
)
from bngeom.errors import ConditioningError, InputError
from bngeom.gaussian import covariance, gaussian_fisher_metric, gaussian_metric_jet

from conftest import BITNET_CATALOG, GAUSSIAN_CATALOG, model_for
from fd import assert_jet_close, fd_metric_jet


def _sphere_jet(x, radius=1.0):
    """Round 2-sphere in (polar, azimuth): g = r^2 diag(1, sin^2 x)."""
    r2 = radius**2
    s, c = math.sin(x), math.cos(x)
    g = r2 * np.diag([1.0, s * s])
    dg = np.zeros((2, 2, 2))
    dg[0, 1, 1] = r2 * 2 * s * c
    ddg = np.zeros((2, 2, 2, 2))
    ddg[0, 0, 1, 1] = r2 * 2 * math.cos(2 * x)
    return MetricJet(g, dg, ddg, diagonal=True)


def _hyperbolic_jet(y):
    """Upper half-plane: g = diag(1, 1) / y^2 in (x, y)."""
    g = np.eye(2) / y**2
    dg = np.zeros((2, 2, 2))
    dg[1] = -2 * np.eye(2) / y**3
    ddg = np.zeros((2, 2, 2, 2))
    ddg[1, 1] = 6 * np.eye(2) / y**4
    return MetricJet(g, dg, ddg, diagonal=True)


@given(st.floats(0.2, 2.9), st.floats(0.3, 5.0))
def test_sign_convention_on_textbook_surfaces(x, radius):
    jet = _sphere_jet(x, radius)
    assert ricci_scalar(jet) == pytest.approx(2 / radius**2, rel=1e-10)
    assert ricci_scalar_diagonal(jet) == pytest.approx(2 / radius**2, rel=1e-10)
    assert ricci_scalar(_hyperbolic_jet(radius)) == pytest.approx(-2.0, rel=1e-10)


def test_flat_metric_is_flat():
    d = 4
    jet = MetricJet(np.eye(d), np.zeros((d,) * 3), np.zeros((d,) * 4), diagonal=True)
    assert ricci_scalar(jet) == 0.0
    assert ricci_scalar_diagonal(jet) == 0.0


def _random_diagonal_jet(rng, d):
    """h_i(x) = exp(a_i . x + x^T B_i x) at x0: exact jets by hand."""
    x0 = rng.uniform(-0.5, 0.5, d)
    a = rng.normal(size=(d, d))
    b = rng.normal(size=(d, d, d)) * 0.5
    b = 0.5 * (b + b.transpose(0, 2, 1))
    g = np.zeros((d, d))
    dg = np.zeros((d, d, d))
    ddg = np.zeros((d, d, d, d))
    for i in range(d):
        h = math.exp(a[i] @ x0 + x0 @ b[i] @ x0)
        grad = a[i] + 2 * b[i] @ x0
        g[i, i] = h
        dg[:, i, i] = h * grad
        ddg[:, :, i, i] = h * (np.outer(grad, grad) + 2 * b[i])
    return MetricJet(g, dg, ddg, diagonal=True)


@given(st.integers(2, 6), st.integers(0, 10_000))
def test_diagonal_fast_path_matches_dense_on_generic_metrics(d, seed):
    jet = _random_diagonal_jet(np.random.default_rng(seed), d)
    dense = ricci_scalar(jet)
    assert ricci_scalar_diagonal(jet) == pytest.approx(dense, rel=1e-8, abs=1e-8)


@given(st.integers(0, 10_000))
def test_permutation_invariance(seed):
    rng = np.random.default_rng(seed)
    model = model_for("C3")
    jet = metric_jet(model, model.random_point(rng))
    perm = rng.permutation(jet.dim)
    assert ricci_scalar(jet.permuted(perm)) == pytest.approx(ricci_scalar(jet), rel=1e-10)


def test_metric_scaling_law_bures(rng):
    model = model_for("K2")
    jet = metric_jet(model, model.random_point(rng))
    assert ricci_scalar(jet.scaled(0.25)) == pytest.approx(6.0, rel=1e-10)
    assert ricci_scalar(jet.scaled(3.0)) == pytest.approx(0.5, rel=1e-10)


@pytest.mark.parametrize("name,value", [("K2", 1.5), ("K3", 10.5), ("L2", 1.5), ("C2", 1.5)])
def test_constant_bitnet_anchors(name, value, rng):
    model = model_for(name)
    for _ in range(20):
        assert bitnet_ricci(model, model.random_point(rng)) == pytest.approx(value, abs=1e-8)


@pytest.mark.parametrize(
    "name,value",
    [("gauss:single", 0.0), ("gauss:chain", -2.0), ("gauss:v", -5.0), ("gauss:l3", -5.0), ("gauss:star3", -9.0)],
)
def test_constant_gaussian_anchors(name, value, rng):
    model = model_for(name)
    for _ in range(20):
        assert gaussian_ricci(model, model.random_point(rng)) == pytest.approx(value, abs=1e-8)


def test_single_node_is_flat():
    assert bitnet_ricci(model_for("K1"), np.array([0.3])) == 0.0


def test_report_invariants(rng):
    model = model_for("L3")
    rep = curvature_report(metric_jet(model, model.random_point(rng)))
    np.testing.assert_allclose(rep.ricci, rep.ricci.T, atol=1e-12)
    np.testing.assert_allclose(rep.christoffel, rep.christoffel.transpose(0, 2, 1), atol=1e-12)


@pytest.mark.parametrize("name", ["K2", "C3", "C4", "L3", "D4"])
def test_fast_path_matches_dense_on_bitnets(name, rng):
    model = model_for(name)
    for _ in range(20):
        th = model.random_point(rng)
        assert bitnet_ricci(model, th) == pytest.approx(bitnet_ricci(model, th, dense=True), rel=1e-8, abs=1e-9)


@pytest.mark.parametrize("name", BITNET_CATALOG)
def test_bitnet_jet_matches_finite_differences(name, rng):
    model = model_for(name)
    th = model.random_point(rng, 0.2, 0.8)
    assert_jet_close(metric_jet(model, th), fd_metric_jet(lambda t: fisher_metric(model, t), th))


@pytest.mark.parametrize("name", GAUSSIAN_CATALOG)
def test_gaussian_jet_matches_finite_differences(name, rng):
    model = model_for(name)
    x = model.random_point(rng)
    assert_jet_close(gaussian_metric_jet(model, x), fd_metric_jet(lambda y: gaussian_fisher_metric(model, y), x))


def test_d4_closed_form_values():
    assert d4_pointwise_ricci(0.5, 0.5) == 12.0
    for a, b in np.random.default_rng(1).uniform(0.05, 0.95, (20, 2)):
        assert d4_pointwise_ricci(a, b) == pytest.approx(d4_pointwise_ricci(b, a), rel=1e-13)
    with pytest.raises(InputError):
        d4_pointwise_ricci(0.0, 0.3)


def test_d4_full_tensor_depends_only_on_root_marginals(rng):
    model = model_for("D4")
    for _ in range(5):
        th = model.random_point(rng)
        th[model.offsets[0]], th[model.offsets[1]] = 0.3, 0.7
        assert ricci_scalar(metric_jet(model, th)) == pytest.approx(d4_pointwise_ricci(0.3, 0.7), rel=1e-9)


def test_gaussian_l4_identity_and_range(rng):
    model = model_for("gauss:l4")
    for _ in range(50):
        x = model.random_point(rng)
        r = gaussian_ricci(model, x)
        # third node of the chain (index 2): its noise share of the variance
        expect = -9 + x[model.v_slot(2)] / covariance(model, x)[2, 2]
        assert r == pytest.approx(expect, rel=1e-6)
        assert -9 < r < -8


def test_gaussian_diamond_is_negative_and_varies(rng):
    model = model_for("gauss:diamond")
    vals = np.array([gaussian_ricci(model, model.random_point(rng)) for _ in range(200)])
    assert vals.max() < 0 and np.ptp(vals) >= 0.1
    assert -12.5 <= vals.min() and vals.max() <= -11.0


@pytest.mark.parametrize("name,constant", [("K2", True), ("K3", True), ("L3", False), ("D4", False)])
def test_constancy_detection_bitnet(name, constant, rng):
    model = model_for(name)
    var = np.var([bitnet_ricci(model, model.random_point(rng)) for _ in range(50)], ddof=1)
    assert (var < 1e-12) if constant else (var > 1e-3)


@pytest.mark.parametrize(
    "name,constant",
    [("gauss:chain", True), ("gauss:v", True), ("gauss:l3", True), ("gauss:star3", True),
     ("gauss:l4", False), ("gauss:diamond", False)],
)
def test_constancy_detection_gaussian(name, constant, rng):
    model = model_for(name)
    var = np.var([gaussian_ricci(model, model.random_point(rng)) for _ in range(50)], ddof=1)
    assert (var < 1e-12) if constant else (var > 1e-3)


def test_ill_conditioned_metric_raises():
    d = 2
    jet = MetricJet(np.diag([1.0, 1e-14]), np.zeros((d,) * 3), np.zeros((d,) * 4), diagonal=True)
    with pytest.raises(ConditioningError) as exc:
        ricci_scalar(jet)
    assert exc.value.condition_number > 1e12
    with pytest.raises(ConditioningError):
        ricci_scalar_diagonal(jet)


@pytest.mark.parametrize("n,b", [(1, 0.0), (2, 0.5), (3, 3.0), (4, 14.0)])
def test_collapsing_star_slopes(n, b):
    fit = fit_collapsing_star_form(n)
    assert fit.b == pytest.approx(b, abs=1e-6)
    assert fit.residual < 1e-6
    assert fit.cpt_sensitivity < 1e-6


def test_collapsing_star_fit_rejects_tiny_sample():
    with pytest.raises(InputError):
        fit_collapsing_star_form(3, samples=4)


def test_c5_pointwise_under_a_second(rng):
    model = model_for("C5")
    th = model.random_point(rng)
    t0 = time.perf_counter()
    bitnet_ricci(model, th)
    assert time.perf_counter() - t0 < 1.0
