"""Forward-mode jet calculus on a coordinate chart.

Scalar fields are immutable expression DAGs built from coordinates,
constants and arithmetic; evaluating one at a point propagates truncated
Taylor data (value, gradient, Hessian, and when needed third partials)
through the DAG exactly, with no differencing.  Order 2 is the canonical
carrier: curvature needs exactly two metric derivatives.  Order 3 exists
only so that a first derivative of an already-differentiated field
(a ``Partial`` node) can itself be differentiated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

MAX_ORDER = 3


class Jet:
    """Truncated Taylor data of a scalar at a point.

    ``val`` is the value, ``grad[i] = d_i``, ``hess[i,j] = d_i d_j`` and
    (order 3 only) ``third[i,j,k] = d_i d_j d_k``.  All derivative arrays
    are fully symmetric.
    """

    __slots__ = ("order", "dim", "val", "grad", "hess", "third")

    def __init__(self, order, dim, val, grad=None, hess=None, third=None):
        self.order = order
        self.dim = dim
        self.val = float(val)
        self.grad = grad if grad is not None else (np.zeros(dim) if order >= 1 else None)
        self.hess = hess if hess is not None else (np.zeros((dim, dim)) if order >= 2 else None)
        self.third = third if third is not None else (
            np.zeros((dim, dim, dim)) if order >= 3 else None
        )

    # -- arithmetic on jets ------------------------------------------------

    def __add__(self, other):
        o, d = self.order, self.dim
        j = Jet(o, d, self.val + other.val)
        if o >= 1:
            j.grad = self.grad + other.grad
        if o >= 2:
            j.hess = self.hess + other.hess
        if o >= 3:
            j.third = self.third + other.third
        return j

    def __sub__(self, other):
        o, d = self.order, self.dim
        j = Jet(o, d, self.val - other.val)
        if o >= 1:
            j.grad = self.grad - other.grad
        if o >= 2:
            j.hess = self.hess - other.hess
        if o >= 3:
            j.third = self.third - other.third
        return j

    def __neg__(self):
        o, d = self.order, self.dim
        j = Jet(o, d, -self.val)
        if o >= 1:
            j.grad = -self.grad
        if o >= 2:
            j.hess = -self.hess
        if o >= 3:
            j.third = -self.third
        return j

    def scale(self, c):
        c = float(c)
        o, d = self.order, self.dim
        j = Jet(o, d, c * self.val)
        if o >= 1:
            j.grad = c * self.grad
        if o >= 2:
            j.hess = c * self.hess
        if o >= 3:
            j.third = c * self.third
        return j

    def __mul__(self, other):
        a, b = self, other
        o, d = a.order, a.dim
        j = Jet(o, d, a.val * b.val)
        if o >= 1:
            j.grad = a.grad * b.val + a.val * b.grad
        if o >= 2:
            gg = np.outer(a.grad, b.grad)
            j.hess = a.hess * b.val + gg + gg.T + a.val * b.hess
        if o >= 3:
            hg = np.multiply.outer(a.hess, b.grad)
            gh = np.multiply.outer(b.hess, a.grad)
            j.third = (
                a.third * b.val
                + hg + hg.transpose(0, 2, 1) + hg.transpose(2, 0, 1)
                + gh + gh.transpose(0, 2, 1) + gh.transpose(2, 0, 1)
                + a.val * b.third
            )
        return j

    def chain(self, derivs):
        """Compose with a univariate function given its derivative values
        ``derivs = [F(u), F'(u), F''(u), F'''(u)]`` at ``u = self.val``."""
        o, d = self.order, self.dim
        j = Jet(o, d, derivs[0])
        if o >= 1:
            j.grad = derivs[1] * self.grad
        if o >= 2:
            j.hess = derivs[2] * np.outer(self.grad, self.grad) + derivs[1] * self.hess
        if o >= 3:
            g, h = self.grad, self.hess
            ggg = np.multiply.outer(np.outer(g, g), g)
            hg = np.multiply.outer(h, g)
            j.third = (
                derivs[3] * ggg
                + derivs[2] * (hg + hg.transpose(0, 2, 1) + hg.transpose(2, 0, 1))
                + derivs[1] * self.third
            )
        return j

    def reciprocal(self):
        u = self.val
        if u == 0.0:
            raise DomainError("division by zero")
        return self.chain([1.0 / u, -1.0 / u**2, 2.0 / u**3, -6.0 / u**4][: self.order + 1])

    def __truediv__(self, other):
        return self * other.reciprocal()


# Spec alias: a second-order jet is the canonical carrier for geometry.
Jet2 = Jet


# -- scalar fields ---------------------------------------------------------


class ScalarField:
    """A node of an immutable scalar-field expression DAG."""

    __slots__ = ()

    def jet(self, point, order=2):
        """Evaluate value and partial derivatives at ``point``.

        ``point`` may be a :class:`Point` or a plain coordinate array.
        """
        x = np.asarray(getattr(point, "coords", point), dtype=float)
        if order < 0 or order > MAX_ORDER:
            raise ValueError(f"jet order must be in 0..{MAX_ORDER}")
        return self._eval(x, order, {})

    def __call__(self, point):
        return self.jet(point, order=0).val

    def _eval(self, x, order, memo):
        key = (id(self), order)
        hit = memo.get(key)
        if hit is None:
            hit = memo[key] = self._jet(x, order, memo)
        return hit

    def _jet(self, x, order, memo):  # pragma: no cover - abstract
        raise NotImplementedError

    # operator sugar; constants are auto-wrapped
    def __add__(self, other):
        return Sum(self, as_field(other))

    def __radd__(self, other):
        return Sum(as_field(other), self)

    def __sub__(self, other):
        return Diff(self, as_field(other))

    def __rsub__(self, other):
        return Diff(as_field(other), self)

    def __mul__(self, other):
        return Prod(self, as_field(other))

    def __rmul__(self, other):
        return Prod(as_field(other), self)

    def __truediv__(self, other):
        return Quot(self, as_field(other))

    def __rtruediv__(self, other):
        return Quot(as_field(other), self)

    def __pow__(self, exponent):
        return Pow(self, exponent)

    def __neg__(self):
        return Neg(self)


def as_field(obj) -> ScalarField:
    if isinstance(obj, ScalarField):
        return obj
    if isinstance(obj, (int, float, np.floating, np.integer)):
        return Const(float(obj))
    raise TypeError(f"cannot interpret {obj!r} as a scalar field")


class Const(ScalarField):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = float(value)

    def _jet(self, x, order, memo):
        return Jet(order, len(x), self.value)


ZERO = Const(0.0)
ONE = Const(1.0)


class Coord(ScalarField):
    """The k-th coordinate function of the chart."""

    __slots__ = ("index",)

    def __init__(self, index):
        self.index = int(index)

    def _jet(self, x, order, memo):
        j = Jet(order, len(x), x[self.index])
        if order >= 1:
            j.grad[self.index] = 1.0
        return j


class Sum(ScalarField):
    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a, self.b = a, b

    def _jet(self, x, order, memo):
        return self.a._eval(x, order, memo) + self.b._eval(x, order, memo)


class Diff(ScalarField):
    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a, self.b = a, b

    def _jet(self, x, order, memo):
        return self.a._eval(x, order, memo) - self.b._eval(x, order, memo)


class Neg(ScalarField):
    __slots__ = ("a",)

    def __init__(self, a):
        self.a = a

    def _jet(self, x, order, memo):
        return -self.a._eval(x, order, memo)


class Prod(ScalarField):
    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a, self.b = a, b

    def _jet(self, x, order, memo):
        return self.a._eval(x, order, memo) * self.b._eval(x, order, memo)


class Quot(ScalarField):
    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a, self.b = a, b

    def _jet(self, x, order, memo):
        return self.a._eval(x, order, memo) / self.b._eval(x, order, memo)


class Pow(ScalarField):
    """Integer powers work for any base; fractional ones need base > 0."""

    __slots__ = ("a", "exponent")

    def __init__(self, a, exponent):
        self.a = a
        self.exponent = float(exponent)

    def _jet(self, x, order, memo):
        u = self.a._eval(x, order, memo)
        e = self.exponent
        v = u.val
        if e == int(e):
            e = int(e)
            if e >= 0:
                derivs, c = [], 1.0
                for k in range(order + 1):
                    derivs.append(c * v ** (e - k) if e - k >= 0 else 0.0)
                    c *= e - k
                return u.chain(derivs)
            if v == 0.0:
                raise DomainError("zero raised to a negative power")
            derivs, c = [], 1.0
            for k in range(order + 1):
                derivs.append(c * v ** (e - k))
                c *= e - k
            return u.chain(derivs)
        if v <= 0.0:
            raise DomainError("fractional power of a nonpositive base")
        derivs, c = [], 1.0
        for k in range(order + 1):
            derivs.append(c * v ** (self.exponent - k))
            c *= self.exponent - k
        return u.chain(derivs)


class Func(ScalarField):
    """Elementary univariate function applied to a subfield."""

    __slots__ = ("name", "a")

    _TABLE = {
        "sin": lambda v: [math.sin(v), math.cos(v), -math.sin(v), -math.cos(v)],
        "cos": lambda v: [math.cos(v), -math.sin(v), -math.cos(v), math.sin(v)],
        "exp": lambda v: [math.exp(v)] * 4,
    }

    def __init__(self, name, a):
        if name not in ("sin", "cos", "exp", "log", "sqrt"):
            raise ValueError(f"unknown elementary function {name!r}")
        self.name = name
        self.a = as_field(a)

    def _jet(self, x, order, memo):
        u = self.a._eval(x, order, memo)
        v = u.val
        if self.name == "log":
            if v <= 0.0:
                raise DomainError("log of a nonpositive number")
            derivs = [math.log(v), 1.0 / v, -1.0 / v**2, 2.0 / v**3]
        elif self.name == "sqrt":
            if v < 0.0:
                raise DomainError("sqrt of a negative number")
            if v == 0.0:
                raise DomainError("sqrt is not differentiable at zero")
            r = math.sqrt(v)
            derivs = [r, 0.5 / r, -0.25 / (r * v), 0.375 / (r * v * v)]
        else:
            derivs = self._TABLE[self.name](v)
        return u.chain(derivs[: order + 1])


def sin(a):
    return Func("sin", a)


def cos(a):
    return Func("cos", a)


def exp(a):
    return Func("exp", a)


def log(a):
    return Func("log", a)


def sqrt(a):
    return Func("sqrt", a)


class Partial(ScalarField):
    """The k-th partial derivative of another scalar field.

    Evaluating its order-``m`` jet needs the order-``m+1`` jet of the
    inner field, capped by ``MAX_ORDER``.
    """

    __slots__ = ("a", "index")

    def __init__(self, a, index):
        self.a = as_field(a)
        self.index = int(index)

    def _jet(self, x, order, memo):
        if order + 1 > MAX_ORDER:
            raise ValueError("Partial derivative nesting exceeds supported jet order")
        inner = self.a._eval(x, order + 1, memo)
        k = self.index
        j = Jet(order, len(x), inner.grad[k])
        if order >= 1:
            j.grad = inner.hess[k].copy()
        if order >= 2:
            j.hess = inner.third[k].copy()
        return j


# -- charts and points -----------------------------------------------------


@dataclass(frozen=True)
class ChartSpec:
    """A single coordinate chart with a per-coordinate sampling box."""

    dim: int
    coord_names: tuple
    box: tuple  # per coordinate (lo, hi)

    def __post_init__(self):
        if self.dim <= 0:
            raise ValueError("chart dimension must be positive")
        if len(self.coord_names) != self.dim or len(self.box) != self.dim:
            raise ValueError("coord_names and box must match dim")
        for lo, hi in self.box:
            if not (lo < hi):
                raise ValueError("every sampling interval must be nonempty")

    def coords(self):
        return tuple(Coord(k) for k in range(self.dim))

    def contains(self, point):
        x = np.asarray(getattr(point, "coords", point), dtype=float)
        return all(lo <= xi <= hi for xi, (lo, hi) in zip(x, self.box))

    def sample(self, rng, count, margin=0.0):
        """Draw ``count`` uniform points from the (margin-shrunk) box."""
        lows = np.array([lo + margin for lo, _ in self.box])
        highs = np.array([hi - margin for _, hi in self.box])
        pts = rng.uniform(lows, highs, size=(count, self.dim))
        return [Point(p) for p in pts]


@dataclass(frozen=True)
class Point:
    coords: np.ndarray = field()

    def __post_init__(self):
        arr = np.asarray(self.coords, dtype=float)
        if not np.all(np.isfinite(arr)):
            raise ValueError("point coordinates must be finite")
        object.__setattr__(self, "coords", arr)

    def key(self):
        return self.coords.tobytes()


# -- spec surface ----------------------------------------------------------


def eval_jet2(field, point) -> Jet:
    """Value, gradient and Hessian of ``field`` at ``point`` by exact
    dual-arithmetic propagation."""
    return field.jet(point, order=2)


def fd_oracle(field, point, h=1e-4):
    """Central-difference gradient and Hessian; test-only oracle.

    Deliberately uses only order-0 evaluations so it is independent of the
    jet propagation it cross-checks.
    """
    x = np.asarray(getattr(point, "coords", point), dtype=float)
    d = len(x)

    def f(y):
        return field.jet(y, order=0).val

    grad = np.zeros(d)
    hess = np.zeros((d, d))
    f0 = f(x)
    for i in range(d):
        ei = np.zeros(d)
        ei[i] = h
        fp, fm = f(x + ei), f(x - ei)
        grad[i] = (fp - fm) / (2 * h)
        hess[i, i] = (fp - 2 * f0 + fm) / h**2
    for i in range(d):
        for j in range(i + 1, d):
            ei = np.zeros(d)
            ej = np.zeros(d)
            ei[i] = h
            ej[j] = h
            v = (f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)) / (4 * h**2)
            hess[i, j] = hess[j, i] = v
    return grad, hess
