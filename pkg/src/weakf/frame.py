"""Per-point numeric snapshot of a structure and its derived geometry.

Everything downstream (identity checks, curvature conditions, nullity
fits) works on plain numpy arrays extracted here once per point.  Index
conventions, used consistently throughout:

    t0[k, m]        T^k_m           (1,1)-tensor components
    t1[a, k, m]     d_a T^k_m
    t2[a, b, k, m]  d_a d_b T^k_m
    v0[k]           X^k             vector components
    v1[a, k]        d_a X^k
    w0[m]           omega_m         one-form components
    w1[a, m]        d_a omega_m
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .connection import (
    christoffel_with_derivative,
    metric_jets,
    nabla_tensor11,
    nabla_twoform,
    riemann_tensor,
)
from .errors import SingularMetric


def tensor_jets(T, p, order=1):
    d = T.dim
    t0 = np.zeros((d, d))
    t1 = np.zeros((d, d, d)) if order >= 1 else None
    t2 = np.zeros((d, d, d, d)) if order >= 2 else None
    for k in range(d):
        for m in range(d):
            j = T.components[k][m].jet(p, order)
            t0[k, m] = j.val
            if order >= 1:
                t1[:, k, m] = j.grad
            if order >= 2:
                t2[:, :, k, m] = j.hess
    return t0, t1, t2


def vector_jets(X, p, order=1):
    d = X.dim
    v0 = np.zeros(d)
    v1 = np.zeros((d, d)) if order >= 1 else None
    v2 = np.zeros((d, d, d)) if order >= 2 else None
    for k, comp in enumerate(X.components):
        j = comp.jet(p, order)
        v0[k] = j.val
        if order >= 1:
            v1[:, k] = j.grad
        if order >= 2:
            v2[:, :, k] = j.hess
    return v0, v1, v2


def oneform_jets(w, p, order=1):
    d = w.dim
    w0 = np.zeros(d)
    w1 = np.zeros((d, d)) if order >= 1 else None
    w2 = np.zeros((d, d, d)) if order >= 2 else None
    for m, comp in enumerate(w.components):
        j = comp.jet(p, order)
        w0[m] = j.val
        if order >= 1:
            w1[:, m] = j.grad
        if order >= 2:
            w2[:, :, m] = j.hess
    return w0, w1, w2


def lie_derivative_arrays(v0, v1, v2, t0, t1, t2):
    """(L_V T, d(L_V T)) for a (1,1)-tensor T from component jets.

    Returns (L0[k,m], L1[b,k,m]); L1 is None unless second jets are given.
    """
    L0 = (
        np.einsum("a,akm->km", v0, t1)
        - np.einsum("ak,am->km", v1, t0)
        + np.einsum("ka,ma->km", t0, v1)
    )
    if v2 is None or t2 is None:
        return L0, None
    L1 = (
        np.einsum("ba,akm->bkm", v1, t1)
        + np.einsum("a,bakm->bkm", v0, t2)
        - np.einsum("bak,am->bkm", v2, t0)
        - np.einsum("ak,bam->bkm", v1, t1)
        + np.einsum("bka,ma->bkm", t1, v1)
        + np.einsum("ka,bma->bkm", t0, v2)
    )
    return L0, L1


class PointFrame:
    """Lazy cache of jets and derived tensors for one structure at one point.

    The owning structure provides f, Q, Q_inv, xis, etas, g and the
    counts (n, s); each attribute here is computed on first access and
    memoized for the lifetime of the frame.
    """

    def __init__(self, structure, point):
        self.st = structure
        self.p = point
        self.dim = structure.dim

    # -- metric and connection --------------------------------------------

    @cached_property
    def gjets(self):
        return metric_jets(self.st.g, self.p, order=2)

    @property
    def g0(self):
        return self.gjets[0]

    @cached_property
    def ginv(self):
        try:
            np.linalg.cholesky(self.g0)
        except np.linalg.LinAlgError as exc:
            raise SingularMetric(f"metric not positive definite at {self.p}") from exc
        return np.linalg.inv(self.g0)

    @cached_property
    def _conn(self):
        return christoffel_with_derivative(self.st.g, self.p)

    @property
    def gamma(self):
        return self._conn[0]

    @property
    def dgamma(self):
        """dgamma[a,k,i,j] = d_a Gamma^k_ij."""
        return self._conn[1]

    @cached_property
    def Rm(self):
        return riemann_tensor(self.st.g, self.p)

    # -- structure tensor jets --------------------------------------------

    @cached_property
    def fjets(self):
        return tensor_jets(self.st.f, self.p, order=2)

    @property
    def f0(self):
        return self.fjets[0]

    @cached_property
    def Qjets(self):
        return tensor_jets(self.st.Q, self.p, order=1)

    @property
    def Q0(self):
        return self.Qjets[0]

    @cached_property
    def Qi0(self):
        return np.linalg.inv(self.Q0)

    @cached_property
    def xijets(self):
        return [vector_jets(xi, self.p, order=2) for xi in self.st.xis]

    @cached_property
    def etajets(self):
        return [oneform_jets(eta, self.p, order=2) for eta in self.st.etas]

    @cached_property
    def eta0(self):
        return np.stack([w[0] for w in self.etajets])

    @cached_property
    def xi0(self):
        return np.stack([v[0] for v in self.xijets])

    # -- first-order derived tensors --------------------------------------

    @cached_property
    def deta(self):
        """deta[i][a,b] = (d eta^i)(d_a, d_b) with the 1/2 convention."""
        out = []
        for _, w1, _ in self.etajets:
            out.append(0.5 * (w1 - w1.T))
        return out

    @cached_property
    def Phi(self):
        """(Phi0[b,c], Phi1[a,b,c]) for Phi(X,Y) = g(X, fY)."""
        g0, g1, _ = self.gjets
        _, f1, _ = self.fjets
        p0 = np.einsum("bm,mc->bc", g0, self.f0)
        p1 = np.einsum("abm,mc->abc", g1, self.f0) + np.einsum(
            "bm,amc->abc", g0, f1
        )
        return p0, p1

    @cached_property
    def h(self):
        """h_i = (1/2) L_{xi_i} f as [(h0, h1)] per characteristic field."""
        _, f1, f2 = self.fjets
        out = []
        for v0, v1, v2 in self.xijets:
            L0, L1 = lie_derivative_arrays(v0, v1, v2, self.f0, f1, f2)
            out.append((0.5 * L0, 0.5 * L1))
        return out

    @cached_property
    def htilde(self):
        """htilde_i = Q^{-1} h_i, values only."""
        return [self.Qi0 @ h0 for h0, _ in self.h]

    # -- covariant derivatives --------------------------------------------

    @cached_property
    def nabla_f(self):
        _, f1, _ = self.fjets
        return nabla_tensor11(self.gamma, self.f0, f1)

    @cached_property
    def nabla_Q(self):
        Q0, Q1, _ = self.Qjets
        return nabla_tensor11(self.gamma, Q0, Q1)

    @cached_property
    def nabla_h(self):
        return [nabla_tensor11(self.gamma, h0, h1) for h0, h1 in self.h]

    @cached_property
    def nabla_Phi(self):
        p0, p1 = self.Phi
        return nabla_twoform(self.gamma, p0, p1)

    @cached_property
    def nabla_xi(self):
        """nabla_xi[i][a,k] = (nabla_a xi_i)^k."""
        out = []
        for v0, v1, _ in self.xijets:
            out.append(v1 + np.einsum("kab,b->ak", self.gamma, v0))
        return out

    @cached_property
    def nabla_eta(self):
        """nabla_eta[i][a,m] = (nabla_a eta^i)_m."""
        out = []
        for w0, w1, _ in self.etajets:
            out.append(w1 - np.einsum("bam,b->am", self.gamma, w0))
        return out

    # -- conveniences ------------------------------------------------------

    def inner(self, x, y):
        return float(x @ self.g0 @ y)

    def adjoint(self, t0):
        """g-adjoint of a (1,1)-tensor value."""
        return self.ginv @ t0.T @ self.g0

    def curvature(self, x, y, z):
        """R_{x,y} z as a component vector, for numeric arguments."""
        return np.einsum("lijk,i,j,k->l", self.Rm, x, y, z)
