"""Tensor fields as component arrays of scalar fields, plus the pointwise
multilinear operations, Lie brackets and exterior derivatives.

Conventions (kept in one place because the fundamental-form identity is
convention-sensitive):

* ``dw(X,Y) = (1/2) { X(w(Y)) - Y(w(X)) - w([X,Y]) }`` for 1-forms,
* the 6-term coboundary with an overall ``1/3`` factor for 2-forms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularMetric
from .jets import Const, Partial, ScalarField, as_field

# Exterior-derivative normalizations used throughout.
D_ONEFORM_FACTOR = 0.5
D_TWOFORM_FACTOR = 1.0 / 3.0


def _grid(components):
    grid = tuple(tuple(as_field(c) for c in row) for row in components)
    if any(len(row) != len(grid) for row in grid):
        raise ValueError("component grid must be square")
    return grid


@dataclass(frozen=True)
class VectorField:
    """Coordinate components of a vector field."""

    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(as_field(c) for c in self.components))

    @property
    def dim(self):
        return len(self.components)

    def values(self, p):
        return np.array([c.jet(p, 0).val for c in self.components])

    def jets(self, p, order=1):
        return [c.jet(p, order) for c in self.components]

    def jacobian(self, p):
        """``J[a, k] = d_a X^k``."""
        return np.stack([j.grad for j in self.jets(p, 1)], axis=1)

    def scaled(self, factor) -> "VectorField":
        """Componentwise product with a scalar field."""
        factor = as_field(factor)
        return VectorField(tuple(factor * c for c in self.components))

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(
            tuple(a + b for a, b in zip(self.components, other.components))
        )

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(
            tuple(a - b for a, b in zip(self.components, other.components))
        )

    @staticmethod
    def constant(vec):
        return VectorField(tuple(Const(v) for v in vec))


@dataclass(frozen=True)
class OneForm:
    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(as_field(c) for c in self.components))

    @property
    def dim(self):
        return len(self.components)

    def values(self, p):
        return np.array([c.jet(p, 0).val for c in self.components])

    def __call__(self, X: VectorField) -> ScalarField:
        """The scalar field ``w(X)``, built symbolically."""
        acc = self.components[0] * X.components[0]
        for wk, xk in zip(self.components[1:], X.components[1:]):
            acc = acc + wk * xk
        return acc


@dataclass(frozen=True)
class Tensor11:
    """Mixed (1,1)-tensor; ``components[k][m]`` is T^k_m."""

    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", _grid(self.components))

    @property
    def dim(self):
        return len(self.components)

    def values(self, p):
        return np.array([[c.jet(p, 0).val for c in row] for row in self.components])

    def __matmul__(self, other):
        if isinstance(other, VectorField):
            return tensor_apply(self, other)
        if isinstance(other, Tensor11):
            return tensor_compose(self, other)
        return NotImplemented

    @staticmethod
    def identity(dim):
        return Tensor11(
            tuple(
                tuple(Const(1.0 if i == j else 0.0) for j in range(dim))
                for i in range(dim)
            )
        )

    @staticmethod
    def from_matrix(mat):
        return Tensor11(tuple(tuple(Const(v) for v in row) for row in mat))


@dataclass(frozen=True)
class MetricField:
    """Symmetric metric components; positive definiteness is checked
    pointwise (Cholesky), never globally."""

    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", _grid(self.components))

    @property
    def dim(self):
        return len(self.components)

    def matrix(self, p):
        return np.array([[c.jet(p, 0).val for c in row] for row in self.components])

    def cholesky(self, p):
        try:
            return np.linalg.cholesky(self.matrix(p))
        except np.linalg.LinAlgError as exc:
            raise SingularMetric(f"metric not positive definite at {p}") from exc


@dataclass(frozen=True)
class TwoForm:
    """Antisymmetric covariant 2-tensor; ``components[a][b]`` is F_ab."""

    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", _grid(self.components))

    @property
    def dim(self):
        return len(self.components)

    def values(self, p):
        return np.array([[c.jet(p, 0).val for c in row] for row in self.components])

    def pair(self, X: VectorField, Y: VectorField) -> ScalarField:
        """The scalar field ``F(X, Y)``."""
        acc = Const(0.0)
        for a, row in enumerate(self.components):
            for b, c in enumerate(row):
                acc = acc + c * X.components[a] * Y.components[b]
        return acc

    @staticmethod
    def from_upper(entries, dim):
        """Build from a dict {(a,b): field, a<b}; the lower triangle is the
        shared negation, so antisymmetry holds by construction."""
        grid = [[Const(0.0)] * dim for _ in range(dim)]
        for (a, b), f in entries.items():
            f = as_field(f)
            grid[a][b] = f
            grid[b][a] = -f
        return TwoForm(tuple(tuple(row) for row in grid))


# -- symbolic composition helpers -----------------------------------------


def tensor_apply(T: Tensor11, X: VectorField) -> VectorField:
    comps = []
    for row in T.components:
        acc = row[0] * X.components[0]
        for tkm, xm in zip(row[1:], X.components[1:]):
            acc = acc + tkm * xm
        comps.append(acc)
    return VectorField(tuple(comps))


def tensor_compose(A: Tensor11, B: Tensor11) -> Tensor11:
    d = A.dim
    grid = []
    for k in range(d):
        row = []
        for m in range(d):
            acc = A.components[k][0] * B.components[0][m]
            for a in range(1, d):
                acc = acc + A.components[k][a] * B.components[a][m]
            row.append(acc)
        grid.append(tuple(row))
    return Tensor11(tuple(grid))


def metric_pairing_field(g: MetricField, X: VectorField, Y: VectorField) -> ScalarField:
    acc = Const(0.0)
    for a, row in enumerate(g.components):
        for b, gab in enumerate(row):
            acc = acc + gab * X.components[a] * Y.components[b]
    return acc


def lie_bracket_field(X: VectorField, Y: VectorField) -> VectorField:
    """[X,Y] as a symbolic vector field (components via Partial nodes)."""
    d = X.dim
    comps = []
    for k in range(d):
        acc = Const(0.0)
        for j in range(d):
            acc = acc + X.components[j] * Partial(Y.components[k], j)
            acc = acc - Y.components[j] * Partial(X.components[k], j)
        comps.append(acc)
    return VectorField(tuple(comps))


def exterior_derivative_oneform(w: OneForm) -> TwoForm:
    """dw as a 2-form in the 1/2 convention: (dw)_ab = (d_a w_b - d_b w_a)/2."""
    d = w.dim
    entries = {}
    for a in range(d):
        for b in range(a + 1, d):
            entries[(a, b)] = (Partial(w.components[b], a) - Partial(w.components[a], b)) * 0.5
    return TwoForm.from_upper(entries, d)


# -- pointwise operations (spec surface) -----------------------------------


def apply11(T: Tensor11, X: VectorField, p):
    return T.values(p) @ X.values(p)


def metric_pair(g: MetricField, X: VectorField, Y: VectorField, p):
    return float(X.values(p) @ g.matrix(p) @ Y.values(p))


def adjoint11(g: MetricField, T: Tensor11, p):
    """Matrix of the g-adjoint T* at p, i.e. g(T*X,Y) = g(X,TY)."""
    G = g.matrix(p)
    Tv = T.values(p) if isinstance(T, Tensor11) else np.asarray(T, dtype=float)
    try:
        return np.linalg.solve(G, Tv.T @ G)
    except np.linalg.LinAlgError as exc:
        raise SingularMetric(f"metric singular at {p}") from exc


def directional_derivative(X: VectorField, s: ScalarField, p):
    """X(s) at p, from the first jet of s."""
    return float(X.values(p) @ s.jet(p, 1).grad)


def lie_bracket(X: VectorField, Y: VectorField, p):
    xj = X.jets(p, 1)
    yj = Y.jets(p, 1)
    xv = np.array([j.val for j in xj])
    yv = np.array([j.val for j in yj])
    dx = np.stack([j.grad for j in xj], axis=1)  # dx[a,k] = d_a X^k
    dy = np.stack([j.grad for j in yj], axis=1)
    return xv @ dy - yv @ dx


def d_oneform(w: OneForm, X: VectorField, Y: VectorField, p):
    """dw(X,Y) in the 1/2 convention."""
    xwy = directional_derivative(X, w(Y), p)
    ywx = directional_derivative(Y, w(X), p)
    wbr = float(w.values(p) @ lie_bracket(X, Y, p))
    return D_ONEFORM_FACTOR * (xwy - ywx - wbr)


def d_twoform(F: TwoForm, X: VectorField, Y: VectorField, Z: VectorField, p):
    """The coboundary value dF(X,Y,Z) with the 1/3 normalization."""
    t = directional_derivative(X, F.pair(Y, Z), p)
    t += directional_derivative(Y, F.pair(Z, X), p)
    t += directional_derivative(Z, F.pair(X, Y), p)
    Fv = F.values(p)
    t -= float(lie_bracket(X, Y, p) @ Fv @ Z.values(p))
    t -= float(lie_bracket(Z, X, p) @ Fv @ Y.values(p))
    t -= float(lie_bracket(Y, Z, p) @ Fv @ X.values(p))
    return D_TWOFORM_FACTOR * t


def lie_derivative_tensor11(V: VectorField, T: Tensor11, X: VectorField, p):
    """(L_V T)X = [V, TX] - T[V, X] at p."""
    TX = tensor_apply(T, X)
    return lie_bracket(V, TX, p) - T.values(p) @ lie_bracket(V, X, p)
