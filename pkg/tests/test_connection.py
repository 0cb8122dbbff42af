"""Levi-Civita connection and curvature against independent oracles."""

import numpy as np
import pytest

from weakf.errors import SingularMetric
from weakf.jets import ChartSpec, Const, Coord, Point
from weakf.fields import MetricField, VectorField, lie_bracket, metric_pair
from weakf.connection import (
    christoffel,
    christoffel_with_derivative,
    cov_deriv_vector,
    metric_jets,
    op_norm_tensor,
    orthonormalize,
    riemann_tensor,
)

CHART2 = ChartSpec(2, ("u", "v"), ((-0.8, 0.8), (-0.8, 0.8)))
U, V = CHART2.coords()
ZERO, ONE = Const(0.0), Const(1.0)


def _sphere_metric(radius):
    # Euclidean metric of the radius-r sphere in stereographic coordinates:
    # g = 4 r^4 / (r^2 + |u|^2)^2 * delta; constant curvature 1/r^2
    w = Const(radius * radius) + U * U + V * V
    conf = Const(4.0 * radius**4) / (w * w)
    return MetricField(((conf, ZERO), (ZERO, conf)))


def _generic_metric():
    return MetricField(
        (
            (Const(2.0) + U * U, U * V * Const(0.3)),
            (U * V * Const(0.3), ONE + V * V),
        )
    )


def _pts(n=5, seed=11):
    return CHART2.sample(np.random.default_rng(seed), n)


def test_christoffel_symmetric_lower_indices():
    g = _generic_metric()
    for p in _pts():
        gamma = christoffel(g, p).gamma
        assert np.max(np.abs(gamma - gamma.transpose(0, 2, 1))) < 1e-14


def test_christoffel_koszul_oracle():
    # 2 g(nabla_X Y, Z) = X g(Y,Z) + Y g(X,Z) - Z g(X,Y) + g([X,Y],Z)
    #                     - g([X,Z],Y) - g([Y,Z],X) with coordinate fields
    # (brackets vanish), cross-checked by finite differences of g.
    g = _generic_metric()
    h = 1e-5
    for p in _pts(3):
        gamma = christoffel(g, p).gamma
        g0 = g.matrix(p)
        x = p.coords
        dg = np.empty((2, 2, 2))
        for a in range(2):
            e = np.zeros(2)
            e[a] = h
            dg[a] = (g.matrix(Point(x + e)) - g.matrix(Point(x - e))) / (2 * h)
        for i in range(2):
            for j in range(2):
                for l in range(2):
                    koszul = 0.5 * (dg[i, j, l] + dg[j, i, l] - dg[l, i, j])
                    assert abs(g0[l] @ gamma[:, i, j] - koszul) < 1e-8


def test_metric_compatibility():
    # nabla g = 0: d_a g_bc = Gamma^m_ab g_mc + Gamma^m_ac g_bm
    g = _generic_metric()
    for p in _pts():
        g0, g1, _ = metric_jets(g, p, order=1)
        gamma = christoffel(g, p).gamma
        recon = np.einsum("mab,mc->abc", gamma, g0) + np.einsum(
            "mac,bm->abc", gamma, g0
        )
        assert np.max(np.abs(g1 - recon)) < 1e-13


def test_dgamma_matches_fd():
    g = _generic_metric()
    h = 1e-5
    for p in _pts(3):
        _, dgamma = christoffel_with_derivative(g, p)
        x = p.coords
        for a in range(2):
            e = np.zeros(2)
            e[a] = h
            fd = (
                christoffel(g, Point(x + e)).gamma
                - christoffel(g, Point(x - e)).gamma
            ) / (2 * h)
            assert np.max(np.abs(dgamma[a] - fd)) < 1e-7


@pytest.mark.parametrize("radius", [0.5, 1.0, 2.0])
def test_sphere_sectional_curvature(radius):
    g = _sphere_metric(radius)
    want = 1.0 / radius**2
    for p in _pts(4):
        Rm = riemann_tensor(g, p)
        g0 = g.matrix(p)
        Rlow = np.einsum("lijk,lm->mijk", Rm, g0)
        K = Rlow[0, 0, 1, 1] / (g0[0, 0] * g0[1, 1] - g0[0, 1] ** 2)
        assert abs(K - want) < 1e-9 * max(1.0, want)


def test_flat_metric_has_zero_curvature():
    g = MetricField(((Const(3.0), ONE), (ONE, Const(2.0))))
    for p in _pts():
        assert np.max(np.abs(riemann_tensor(g, p))) < 1e-14


def test_curvature_symmetries_and_first_bianchi():
    g = _generic_metric()
    for p in _pts():
        Rm = riemann_tensor(g, p)
        g0 = g.matrix(p)
        Rlow = np.einsum("lijk,lm->mijk", Rm, g0)  # R_{m i j k}
        # antisymmetry in the curvature pair
        assert np.max(np.abs(Rlow + Rlow.transpose(0, 2, 1, 3))) < 1e-10
        # antisymmetry in the metric pair
        assert np.max(np.abs(Rlow + Rlow.transpose(3, 1, 2, 0))) < 1e-10
        # pair symmetry R(X,Y,Z,W) = R(Z,W,X,Y)
        assert np.max(np.abs(Rlow - Rlow.transpose(2, 3, 0, 1))) < 1e-9
        # first Bianchi: cyclic sum over the three vector slots
        cyc = Rlow + Rlow.transpose(0, 2, 3, 1) + Rlow.transpose(0, 3, 1, 2)
        assert np.max(np.abs(cyc)) < 1e-10


def test_cov_deriv_vector_leibniz():
    # X g(Y,Z) = g(nabla_X Y, Z) + g(Y, nabla_X Z) by finite differences
    g = _generic_metric()
    Y = VectorField((U * V, ONE))
    Z = VectorField((V, U * U))
    X = VectorField((ONE, Const(0.5)))
    h = 1e-5
    for p in _pts(3):
        x = p.coords
        xv = X.values(p)
        fd = (
            metric_pair(g, Y, Z, Point(x + h * xv))
            - metric_pair(g, Y, Z, Point(x - h * xv))
        ) / (2 * h)
        g0 = g.matrix(p)
        nY = cov_deriv_vector(g, X, Y, p)
        nZ = cov_deriv_vector(g, X, Z, p)
        lhs = nY @ g0 @ Z.values(p) + Y.values(p) @ g0 @ nZ
        assert abs(lhs - fd) < 1e-8


def test_singular_metric_raises():
    g = MetricField(((U, ZERO), (ZERO, ONE)))
    with pytest.raises(SingularMetric):
        christoffel(g, Point(np.array([-0.5, 0.0])))


def test_orthonormalize_produces_g_orthonormal_basis():
    g = _generic_metric()
    p = _pts(1)[0]
    g0 = g.matrix(p)
    basis = np.stack(orthonormalize(g0, np.eye(2)), axis=1)
    gram = basis.T @ g0 @ basis
    assert np.max(np.abs(gram - np.eye(2))) < 1e-12


def test_op_norm_tensor_on_identity():
    g = _generic_metric()
    p = _pts(1)[0]
    assert abs(op_norm_tensor(g, np.eye(2), p) - 1.0) < 1e-12
