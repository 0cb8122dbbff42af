"""Levi-Civita connection and Riemann curvature from metric jets.

Curvature sign convention: ``R_{X,Y} = nabla_X nabla_Y - nabla_Y nabla_X
- nabla_{[X,Y]}``, so in coordinates the array ``Rm[l,i,j,k]`` below is the
l-th component of ``R_{d_i, d_j} d_k``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularMetric
from .fields import MetricField, Tensor11, TwoForm, VectorField, lie_bracket


@dataclass(frozen=True)
class ChristoffelValue:
    """``gamma[k,i,j] = Gamma^k_ij``, symmetric in (i, j)."""

    gamma: np.ndarray


@dataclass(frozen=True)
class CurvatureValue:
    """``R_{X,Y}Z`` at a point, optionally with the full component array."""

    vector: np.ndarray
    full: np.ndarray | None = None


def metric_jets(g: MetricField, p, order=2):
    """Component jets of g: returns (g0, g1, g2) with
    ``g1[a,b,c] = d_a g_bc`` and ``g2[a,b,c,d] = d_a d_b g_cd``."""
    d = g.dim
    g0 = np.zeros((d, d))
    g1 = np.zeros((d, d, d)) if order >= 1 else None
    g2 = np.zeros((d, d, d, d)) if order >= 2 else None
    for b in range(d):
        for c in range(d):
            j = g.components[b][c].jet(p, order)
            g0[b, c] = j.val
            if order >= 1:
                g1[:, b, c] = j.grad
            if order >= 2:
                g2[:, :, b, c] = j.hess
    return g0, g1, g2


def _inverse(g0, p):
    try:
        np.linalg.cholesky(g0)
        return np.linalg.inv(g0)
    except np.linalg.LinAlgError as exc:
        raise SingularMetric(f"metric not positive definite at {p}") from exc


def christoffel(g: MetricField, p) -> ChristoffelValue:
    g0, g1, _ = metric_jets(g, p, order=1)
    ginv = _inverse(g0, p)
    # Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
    lowered = g1 + g1.transpose(1, 0, 2) - g1.transpose(1, 2, 0)
    gamma = 0.5 * np.einsum("kl,ijl->kij", ginv, lowered)
    return ChristoffelValue(gamma)


def christoffel_with_derivative(g: MetricField, p):
    """(gamma, dgamma) with ``dgamma[a,k,i,j] = d_a Gamma^k_ij``."""
    g0, g1, g2 = metric_jets(g, p, order=2)
    ginv = _inverse(g0, p)
    lowered = g1 + g1.transpose(1, 0, 2) - g1.transpose(1, 2, 0)
    gamma = 0.5 * np.einsum("kl,ijl->kij", ginv, lowered)
    dginv = -np.einsum("km,amn,nl->akl", ginv, g1, ginv)
    dlow = g2 + g2.transpose(0, 2, 1, 3) - g2.transpose(0, 2, 3, 1)
    # dlow[a,i,j,l] = d_a (d_i g_jl + d_j g_il - d_l g_ij)
    dgamma = 0.5 * (
        np.einsum("akl,ijl->akij", dginv, lowered)
        + np.einsum("kl,aijl->akij", ginv, dlow)
    )
    return gamma, dgamma


def riemann_tensor(g: MetricField, p):
    """Full array ``Rm[l,i,j,k]``, the l-component of R_{d_i,d_j} d_k."""
    gamma, dgamma = christoffel_with_derivative(g, p)
    quad = np.einsum("lim,mjk->lijk", gamma, gamma)
    Rm = (
        dgamma.transpose(1, 0, 2, 3)  # d_i Gamma^l_jk -> [l,i,j,k]
        - dgamma.transpose(1, 2, 0, 3)
        + quad
        - quad.transpose(0, 2, 1, 3)
    )
    return Rm


def cov_deriv_vector(g: MetricField, X: VectorField, Y: VectorField, p):
    """(nabla_X Y)^k = X^i (d_i Y^k + Gamma^k_im Y^m)."""
    gamma = christoffel(g, p).gamma
    xv = X.values(p)
    yj = Y.jets(p, 1)
    yv = np.array([j.val for j in yj])
    dy = np.stack([j.grad for j in yj], axis=1)  # dy[i,k] = d_i Y^k
    return xv @ dy + np.einsum("i,kim,m->k", xv, gamma, yv)


def _tensor11_jets(T: Tensor11, p):
    d = T.dim
    t0 = np.zeros((d, d))
    t1 = np.zeros((d, d, d))  # t1[a,k,m] = d_a T^k_m
    for k in range(d):
        for m in range(d):
            j = T.components[k][m].jet(p, 1)
            t0[k, m] = j.val
            t1[:, k, m] = j.grad
    return t0, t1


def nabla_tensor11(gamma, t0, t1):
    """(nabla_a T)^k_m from the connection and component jets."""
    return (
        t1
        + np.einsum("kab,bm->akm", gamma, t0)
        - np.einsum("bam,kb->akm", gamma, t0)
    )


def cov_deriv_tensor11(g: MetricField, T: Tensor11, X: VectorField, Y: VectorField, p):
    """(nabla_X T)Y at p; tensorial in Y by construction."""
    gamma = christoffel(g, p).gamma
    t0, t1 = _tensor11_jets(T, p)
    nab = nabla_tensor11(gamma, t0, t1)
    return np.einsum("a,akm,m->k", X.values(p), nab, Y.values(p))


def _twoform_jets(F: TwoForm, p):
    d = F.dim
    f0 = np.zeros((d, d))
    f1 = np.zeros((d, d, d))
    for b in range(d):
        for c in range(d):
            j = F.components[b][c].jet(p, 1)
            f0[b, c] = j.val
            f1[:, b, c] = j.grad
    return f0, f1


def nabla_twoform(gamma, f0, f1):
    """(nabla_a F)_bc from the connection and component jets."""
    return (
        f1
        - np.einsum("mab,mc->abc", gamma, f0)
        - np.einsum("mac,bm->abc", gamma, f0)
    )


def cov_deriv_twoform(g: MetricField, F: TwoForm, X, Y, Z, p):
    gamma = christoffel(g, p).gamma
    f0, f1 = _twoform_jets(F, p)
    nab = nabla_twoform(gamma, f0, f1)
    return float(np.einsum("a,abc,b,c->", X.values(p), nab, Y.values(p), Z.values(p)))


def riemann(g: MetricField, X, Y, Z, p, full=False) -> CurvatureValue:
    Rm = riemann_tensor(g, p)
    vec = np.einsum("lijk,i,j,k->l", Rm, X.values(p), Y.values(p), Z.values(p))
    return CurvatureValue(vec, Rm if full else None)


# -- operator-norm estimates ----------------------------------------------


def op_norm_tensor(g: MetricField, T, p):
    """Largest singular value of a (1,1)-tensor w.r.t. g at p."""
    G = g.matrix(p)
    Tv = T.values(p) if isinstance(T, Tensor11) else np.asarray(T, dtype=float)
    try:
        L = np.linalg.cholesky(G)
    except np.linalg.LinAlgError as exc:
        raise SingularMetric(f"metric not positive definite at {p}") from exc
    A = L.T @ Tv @ np.linalg.inv(L.T)
    return float(np.linalg.norm(A, 2))


def orthonormalize(G, vectors):
    """Gram-Schmidt w.r.t. the inner product matrix G; drops near-null input."""
    basis = []
    for v in vectors:
        w = np.array(v, dtype=float)
        for b in basis:
            w = w - (b @ G @ w) * b
        n = np.sqrt(w @ G @ w)
        if n > 1e-12:
            basis.append(w / n)
    return basis


def op_norm_curvature(g: MetricField, p, rng=None, samples=20):
    """||R|| estimate at p: the spectral norm of the curvature operator on
    2-forms in a g-orthonormal frame, optionally sharpened by sampled
    orthonormal 4-tuples (the operator norm already dominates every
    sectional value R(X,Y,Y,X) for orthonormal X, Y)."""
    G = g.matrix(p)
    Rm = riemann_tensor(g, p)
    d = g.dim
    frame = np.stack(orthonormalize(G, np.eye(d)), axis=1)
    Rlow = np.einsum("lijk,lm->mijk", Rm, G)
    Ron = np.einsum("mijk,ia,jb,kc,md->dabc", Rlow, frame, frame, frame, frame)
    pairs = [(a, b) for a in range(d) for b in range(a + 1, d)]
    op = np.array([[Ron[w, a, b, z] for (z, w) in pairs] for (a, b) in pairs])
    best = float(np.max(np.abs(np.linalg.eigvalsh(0.5 * (op + op.T)))))
    if rng is not None:
        for _ in range(samples):
            vecs = orthonormalize(G, rng.uniform(-1.0, 1.0, size=(4, d)))
            if len(vecs) < 4:
                continue
            X, Y, Z, W = vecs[:4]
            val = abs(np.einsum("lijk,i,j,k,l->", Rm, X, Y, Z, G @ W))
            best = max(best, float(val))
    return best


def op_norm_estimate(g: MetricField, obj, p, rng=None, samples=20):
    """Dispatch: (1,1)-tensors get an exact g-operator norm; curvature
    (``obj='curvature'``) gets a sampled lower-bound estimate."""
    if isinstance(obj, (Tensor11, np.ndarray)):
        return op_norm_tensor(g, obj, p)
    if obj == "curvature":
        if rng is None:
            rng = np.random.default_rng(0)
        return op_norm_curvature(g, p, rng, samples)
    raise TypeError(f"cannot estimate an operator norm for {obj!r}")
