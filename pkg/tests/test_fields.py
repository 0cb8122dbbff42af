"""Symbolic vector/tensor field algebra on a chart."""

import numpy as np
import pytest

from weakf.jets import ChartSpec, Const, Coord, Point
from weakf.fields import (
    MetricField,
    OneForm,
    Tensor11,
    VectorField,
    d_oneform,
    d_twoform,
    directional_derivative,
    exterior_derivative_oneform,
    lie_bracket,
    lie_bracket_field,
    lie_derivative_tensor11,
    metric_pair,
    metric_pairing_field,
    tensor_apply,
    tensor_compose,
)

CHART = ChartSpec(3, ("x", "y", "z"), (((-1.0, 1.0),) * 3))
X0, X1, X2 = CHART.coords()
ZERO, ONE = Const(0.0), Const(1.0)


def _pts(n=6, seed=3):
    return CHART.sample(np.random.default_rng(seed), n)


def test_coordinate_fields_commute():
    e0 = VectorField((ONE, ZERO, ZERO))
    e1 = VectorField((ZERO, ONE, ZERO))
    for p in _pts():
        assert np.max(np.abs(lie_bracket(e0, e1, p))) == 0.0


def test_lie_bracket_antisymmetric_and_against_symbolic():
    X = VectorField((X1, X0 * X2, ONE))
    Y = VectorField((X2 * X2, ZERO, X0))
    Z = lie_bracket_field(X, Y)
    for p in _pts():
        b = lie_bracket(X, Y, p)
        assert np.max(np.abs(b + lie_bracket(Y, X, p))) < 1e-14
        assert np.max(np.abs(b - Z.values(p))) < 1e-12


def test_jacobi_identity():
    X = VectorField((X1, X0 * X2, ONE))
    Y = VectorField((X2 * X2, ZERO, X0))
    Z = VectorField((X0, X1, X2 * X0))
    for p in _pts(4):
        total = (
            lie_bracket(lie_bracket_field(X, Y), Z, p)
            + lie_bracket(lie_bracket_field(Y, Z), X, p)
            + lie_bracket(lie_bracket_field(Z, X), Y, p)
        )
        assert np.max(np.abs(total)) < 1e-10


def test_d_oneform_convention():
    # d omega(X, Y) = (1/2){X w(Y) - Y w(X) - w([X,Y])}
    w = OneForm((X1 * X2, X0, ZERO))
    X = VectorField((ONE, X2, ZERO))
    Y = VectorField((X0, ZERO, ONE))
    for p in _pts():
        lhs = d_oneform(w, X, Y, p)
        wY = sum(w.components[k] * Y.components[k] for k in range(3))
        wX = sum(w.components[k] * X.components[k] for k in range(3))
        br = lie_bracket(X, Y, p)
        wbr = float(np.array([c(p) for c in w.components]) @ br)
        rhs = 0.5 * (
            directional_derivative(X, wY, p)
            - directional_derivative(Y, wX, p)
            - wbr
        )
        assert abs(lhs - rhs) < 1e-12


def test_exterior_derivative_oneform_matches_pointwise():
    w = OneForm((X1 * X2, X0 * X0, X1))
    F = exterior_derivative_oneform(w)
    X = VectorField((ONE, X2, X0))
    Y = VectorField((X1, ZERO, ONE))
    for p in _pts():
        assert abs(F.pair(X, Y)(p) - d_oneform(w, X, Y, p)) < 1e-12


def test_d_squared_vanishes():
    # d(dw) = 0 for the 6-term coboundary acting on the 2-form dw
    w = OneForm((X1 * X2, X0 * X0 * X2, X1 * X0))
    F = exterior_derivative_oneform(w)
    fields = [
        VectorField((ONE, X2, X0)),
        VectorField((X1, ZERO, ONE)),
        VectorField((X0 * X2, ONE, X1)),
    ]
    for p in _pts(4):
        assert abs(d_twoform(F, *fields, p)) < 1e-10


def test_tensor_compose_and_apply_agree():
    A = Tensor11(((X0, X1, ZERO), (ZERO, ONE, X2), (X1, ZERO, X0)))
    B = Tensor11(((ONE, ZERO, X2), (X0, X1, ZERO), (ZERO, ONE, ONE)))
    X = VectorField((X2, X0, ONE))
    AB = tensor_compose(A, B)
    for p in _pts():
        direct = A.values(p) @ (B.values(p) @ X.values(p))
        assert np.max(np.abs(tensor_apply(AB, X).values(p) - direct)) < 1e-13


def test_metric_pairing_field_matches_pointwise():
    g = MetricField(
        ((ONE + X0 * X0, ZERO, ZERO), (ZERO, ONE, X1), (ZERO, X1, ONE + X1 * X1))
    )
    X = VectorField((X1, ONE, ZERO))
    Y = VectorField((ZERO, X0, ONE))
    s = metric_pairing_field(g, X, Y)
    for p in _pts():
        assert abs(s(p) - metric_pair(g, X, Y, p)) < 1e-13


def test_lie_derivative_of_identity_vanishes():
    V = VectorField((X1 * X2, X0, ONE))
    I = Tensor11.identity(3)
    X = VectorField((ONE, X0, X2))
    for p in _pts(4):
        assert np.max(np.abs(lie_derivative_tensor11(V, I, X, p))) < 1e-12


def test_chart_sampling_respects_box():
    pts = CHART.sample(np.random.default_rng(0), 50, margin=0.1)
    arr = np.array([p.coords for p in pts])
    assert arr.min() >= -0.9 and arr.max() <= 0.9


def test_mismatched_component_count_rejected():
    with pytest.raises(ValueError):
        MetricField(((ONE, ZERO), (ZERO,)))
