"""Weak metric f-structures: axioms, structure tensors and classification.

A structure bundles (f, Q, xi_1..xi_s, eta^1..eta^s, g) on a chart of
dimension 2n + s.  The defining relations, checked by :meth:`validate`:

    f^2 = -Q + sum_i eta^i (x) xi_i,   eta^i(xi_j) = delta,   Q xi_i = xi_i,
    g(fX, fY) = g(X, QY) - sum_i eta^i(X) eta^i(Y),

with f skew-adjoint and Q self-adjoint positive definite for g.
Q~ below always means Q - id.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .connection import christoffel, nabla_tensor11
from .errors import DegenerateSpectrum, NotInContactDistribution
from .fields import (
    Const,
    MetricField,
    Tensor11,
    TwoForm,
    VectorField,
    directional_derivative,
    lie_bracket,
    metric_pairing_field,
    tensor_apply,
)
from .frame import PointFrame, lie_derivative_arrays, tensor_jets


@dataclass(frozen=True)
class EigenSplit:
    """Pointwise eigen-splitting of h~ = Q^{-1} h_i into ker-cluster and
    the +/-lam clusters; basis vectors are g-orthonormal columns."""

    lam: float
    zero: np.ndarray
    plus: np.ndarray
    minus: np.ndarray


@dataclass(frozen=True)
class WeakFStructure:
    chart: object
    g: MetricField
    f: Tensor11
    Q: Tensor11
    xis: tuple
    etas: tuple
    Q_inv: Tensor11 | None = None
    name: str = ""
    _frames: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "xis", tuple(self.xis))
        object.__setattr__(self, "etas", tuple(self.etas))
        if len(self.xis) != len(self.etas) or not self.xis:
            raise ValueError("need matching, nonempty xi/eta families")
        if (self.chart.dim - len(self.xis)) % 2:
            raise ValueError("dimension minus s must be even")

    @property
    def dim(self):
        return self.chart.dim

    @property
    def s(self):
        return len(self.xis)

    @property
    def n(self):
        return (self.dim - self.s) // 2

    def frame(self, p) -> PointFrame:
        key = p.key()
        fr = self._frames.get(key)
        if fr is None:
            fr = self._frames[key] = PointFrame(self, p)
        return fr

    @property
    def qtilde(self) -> Tensor11:
        """Q~ = Q - id as a symbolic tensor field."""
        d = self.dim
        comps = tuple(
            tuple(
                self.Q.components[k][m] - Const(1.0 if k == m else 0.0)
                for m in range(d)
            )
            for k in range(d)
        )
        return Tensor11(comps)

    # -- axiom validation ---------------------------------------------------

    def validate(self, points, rank_tol=1e-8):
        """Max residual per defining relation over the given points.

        Returns a dict of named residuals plus 'rank_defect' (integer,
        0 when rank f = 2n everywhere).  Callers compare against their
        own tolerance; nothing is raised here except for a metric that
        fails to be positive definite.
        """
        res = {k: 0.0 for k in (
            "f_squared", "eta_xi_duality", "Q_fixes_xi", "metric_compat",
            "f_skew", "Q_self_adjoint", "Q_positive", "f_kills_xi",
            "eta_annihilates_f", "eta_Q_invariance", "Qf_commute",
            "Q_inv_consistency",
        )}
        rank_defect = 0
        I = np.eye(self.dim)
        for p in points:
            fr = self.frame(p)
            f0, Q0, g0 = fr.f0, fr.Q0, fr.g0
            xi0, eta0 = fr.xi0, fr.eta0
            proj = np.einsum("ik,im->km", xi0, eta0)
            upd = {
                "f_squared": f0 @ f0 + Q0 - proj,
                "eta_xi_duality": eta0 @ xi0.T - np.eye(self.s),
                "Q_fixes_xi": Q0 @ xi0.T - xi0.T,
                "metric_compat": f0.T @ g0 @ f0 - g0 @ Q0 + eta0.T @ eta0,
                "f_skew": g0 @ f0 + (g0 @ f0).T,
                "Q_self_adjoint": g0 @ Q0 - (g0 @ Q0).T,
                "f_kills_xi": f0 @ xi0.T,
                "eta_annihilates_f": eta0 @ f0,
                "eta_Q_invariance": eta0 @ Q0 - eta0,
                "Qf_commute": Q0 @ f0 - f0 @ Q0,
            }
            gQ = 0.5 * (g0 @ Q0 + (g0 @ Q0).T)
            lam_min = np.linalg.eigvalsh(gQ)[0]
            upd["Q_positive"] = np.array(min(lam_min, 0.0))
            if self.Q_inv is not None:
                upd["Q_inv_consistency"] = fr.Q0 @ self.Q_inv.values(p) - I
            for k, v in upd.items():
                res[k] = max(res[k], float(np.max(np.abs(v))))
            sv = np.linalg.svd(f0, compute_uv=False)
            rank_defect = max(rank_defect, abs(int((sv > rank_tol).sum()) - 2 * self.n))
        res["rank_defect"] = float(rank_defect)
        return res

    # -- structure tensors --------------------------------------------------

    def fundamental_form(self) -> TwoForm:
        """Phi(X, Y) = g(X, fY) as a symbolic 2-form."""
        d = self.dim
        grid = []
        for b in range(d):
            row = []
            for c in range(d):
                acc = Const(0.0)
                for m in range(d):
                    acc = acc + self.g.components[b][m] * self.f.components[m][c]
                row.append(acc)
            grid.append(tuple(row))
        return TwoForm(tuple(grid))

    def nijenhuis(self, S: Tensor11, X: VectorField, Y: VectorField, p):
        """[S,S](X,Y) by the bracket formula."""
        SX, SY = tensor_apply(S, X), tensor_apply(S, Y)
        S0 = S.values(p)
        return (
            S0 @ S0 @ lie_bracket(X, Y, p)
            + lie_bracket(SX, SY, p)
            - S0 @ lie_bracket(SX, Y, p)
            - S0 @ lie_bracket(X, SY, p)
        )

    def nijenhuis_nabla(self, S: Tensor11, X: VectorField, Y: VectorField, p):
        """[S,S](X,Y) rewritten through the Levi-Civita connection:
        (S nabla_Y S - nabla_{SY} S)X - (S nabla_X S - nabla_{SX} S)Y.
        Independent evaluation path used as an oracle for :meth:`nijenhuis`.
        """
        gamma = christoffel(self.g, p).gamma
        t0, t1, _ = tensor_jets(S, p, order=1)
        nab = nabla_tensor11(gamma, t0, t1)
        xv, yv = X.values(p), Y.values(p)

        def half(u, v):
            # (S nabla_v S - nabla_{Sv} S) u
            dv = np.einsum("a,akm->km", v, nab)
            dSv = np.einsum("a,akm->km", t0 @ v, nab)
            return t0 @ (dv @ u) - dSv @ u

        return half(xv, yv) - half(yv, xv)

    def n1(self, X, Y, p):
        """[f,f](X,Y) + 2 sum_i d eta^i(X,Y) xi_i (normality tensor)."""
        fr = self.frame(p)
        out = self.nijenhuis(self.f, X, Y, p)
        xv, yv = X.values(p), Y.values(p)
        for i in range(self.s):
            out = out + 2.0 * float(xv @ fr.deta[i] @ yv) * fr.xi0[i]
        return out

    def n1_components(self, p):
        """N^(1) on coordinate fields via the connection rewrite:
        returns N[k, a, b], the k-component of N^(1)(d_a, d_b)."""
        fr = self.frame(p)
        f0, nf = fr.f0, fr.nabla_f
        # T[b,k,m]: (f nabla_{d_b} f - nabla_{f d_b} f)^k_m
        T = np.einsum("kc,bcm->bkm", f0, nf) - np.einsum("cb,ckm->bkm", f0, nf)
        ff = T.transpose(1, 2, 0) - T.transpose(1, 0, 2)  # [k,a,b]
        extra = 2.0 * np.einsum("ik,iab->kab", fr.xi0, np.stack(fr.deta))
        return ff + extra

    def n2(self, i, X, Y, p):
        fr = self.frame(p)
        xv, yv = X.values(p), Y.values(p)
        fx, fy = fr.f0 @ xv, fr.f0 @ yv
        de = fr.deta[i]
        return 2.0 * float(fx @ de @ yv) - 2.0 * float(fy @ de @ xv)

    def n3(self, i, X, p):
        """(L_{xi_i} f) X = 2 h_i X."""
        fr = self.frame(p)
        return 2.0 * (fr.h[i][0] @ X.values(p))

    def n4(self, i, j, X, p):
        fr = self.frame(p)
        return 2.0 * float(fr.xi0[i] @ fr.deta[j] @ X.values(p))

    def n5(self, X, Y, Z, p):
        """The Q~-weighted torsion scalar
        N^(5)(X,Y,Z) = fZ(g(X,Q~Y)) - fY(g(X,Q~Z))
                     + g([X,fZ], Q~Y) - g([X,fY], Q~Z)
                     + g([Y,fZ] - [Z,fY] - f[Y,Z], Q~X)."""
        fr = self.frame(p)
        qt = self.qtilde
        fY, fZ = tensor_apply(self.f, Y), tensor_apply(self.f, Z)
        g0, qt0 = fr.g0, fr.Q0 - np.eye(self.dim)
        xv, yv, zv = X.values(p), Y.values(p), Z.values(p)
        out = directional_derivative(
            fZ, metric_pairing_field(self.g, X, tensor_apply(qt, Y)), p
        ) - directional_derivative(
            fY, metric_pairing_field(self.g, X, tensor_apply(qt, Z)), p
        )
        out += float(lie_bracket(X, fZ, p) @ g0 @ (qt0 @ yv))
        out -= float(lie_bracket(X, fY, p) @ g0 @ (qt0 @ zv))
        mixed = (
            lie_bracket(Y, fZ, p)
            - lie_bracket(Z, fY, p)
            - fr.f0 @ lie_bracket(Y, Z, p)
        )
        out += float(mixed @ g0 @ (qt0 @ xv))
        return out

    def n_tensors(self, which, args, p):
        """Uniform entry point: which in 1..5, args the vector fields
        (plus leading frame indices for 2, 3, 4)."""
        dispatch = {1: self.n1, 2: self.n2, 3: self.n3, 4: self.n4, 5: self.n5}
        return dispatch[which](*args, p)

    def h_tensor(self, i, p):
        """h_i = (1/2) L_{xi_i} f as a component matrix at p."""
        return self.frame(p).h[i][0]

    def h_apply(self, i, X, p):
        return self.h_tensor(i, p) @ X.values(p)

    def splitting_tensor(self, i, X, p, tol=1e-9):
        """C_{xi_i}(X) = -nabla_X xi_i for X in the contact distribution."""
        fr = self.frame(p)
        xv = X.values(p)
        off = float(np.max(np.abs(fr.eta0 @ xv)))
        if off > tol:
            raise NotInContactDistribution(
                f"eta(X) = {off:.3e} > {tol:.1e} at {p}"
            )
        return -np.einsum("a,ak->k", xv, fr.nabla_xi[i])

    def splitting_closed_form(self, i, p):
        """The matrix f + f Q^{-1} h_i^* that C_{xi_i} is expected to equal
        on the contact distribution."""
        fr = self.frame(p)
        hstar = fr.adjoint(fr.h[i][0])
        return fr.f0 + fr.f0 @ fr.Qi0 @ hstar

    # -- condition predicates ----------------------------------------------

    def condition_A(self, points, tol=1e-9):
        """L_{xi_i} Q = 0 for every characteristic field (bool, residual)."""
        worst = 0.0
        for p in points:
            fr = self.frame(p)
            Q0, Q1, _ = fr.Qjets
            for v0, v1, _ in fr.xijets:
                L0, _ = lie_derivative_arrays(v0, v1, None, Q0, Q1, None)
                worst = max(worst, float(np.max(np.abs(L0))))
        return worst <= tol, worst

    def contact_projector(self, p):
        """P with image the contact distribution: P = id - sum xi_i (x) eta^i."""
        fr = self.frame(p)
        return np.eye(self.dim) - np.einsum("ik,im->km", fr.xi0, fr.eta0)

    def condition_B(self, points, tol=1e-8):
        """(nabla_X Q)Y = 0 for X, Y in the contact distribution."""
        worst = 0.0
        for p in points:
            fr = self.frame(p)
            P = self.contact_projector(p)
            res = np.einsum("akm,ab,mc->kbc", fr.nabla_Q, P, P)
            worst = max(worst, float(np.max(np.abs(res))))
        return worst <= tol, worst

    # -- classification -----------------------------------------------------

    def classify(self, points, tol=1e-8):
        """Taxonomy flags with residuals, sampled over the given points.

        flags: d_Phi_closed, eta_closed, Phi_equals_d_eta (weak almost-S),
        normal, and xi_killing per frame index.
        """
        d = self.dim
        r_dphi = r_deta = r_was = r_norm = 0.0
        r_kill = [0.0] * self.s
        for p in points:
            fr = self.frame(p)
            _, p1 = fr.Phi
            dphi = (p1 - p1.transpose(1, 0, 2) + p1.transpose(1, 2, 0)) / 3.0
            r_dphi = max(r_dphi, float(np.max(np.abs(dphi))))
            for i in range(self.s):
                r_deta = max(r_deta, float(np.max(np.abs(fr.deta[i]))))
                r_was = max(r_was, float(np.max(np.abs(fr.Phi[0] - fr.deta[i]))))
            r_norm = max(r_norm, float(np.max(np.abs(self.n1_components(p)))))
            g0, g1, _ = fr.gjets
            for i, (v0, v1, _) in enumerate(fr.xijets):
                lg = (
                    np.einsum("a,abc->bc", v0, g1)
                    + np.einsum("ba,ac->bc", v1, g0)
                    + np.einsum("ca,ba->bc", v1, g0)
                )
                r_kill[i] = max(r_kill[i], float(np.max(np.abs(lg))))
        flags = {
            "weak_almost_K": (r_dphi <= tol, r_dphi),
            "weak_almost_C": (r_dphi <= tol and r_deta <= tol, max(r_dphi, r_deta)),
            "weak_almost_S": (r_was <= tol, r_was),
            "normal": (r_norm <= tol, r_norm),
        }
        for i in range(self.s):
            flags[f"xi{i}_killing"] = (r_kill[i] <= tol, r_kill[i])
        return flags

    # -- eigen splitting ----------------------------------------------------

    def eigen_split(self, i, p, cluster_tol=1e-6) -> EigenSplit:
        """g-orthonormal eigenbasis of h~_i = Q^{-1} h_i, clustered to
        {0, +lam, -lam}.  Raises DegenerateSpectrum when an eigenvalue
        cannot be assigned to a cluster within the tolerance."""
        fr = self.frame(p)
        H = fr.Qi0 @ fr.h[i][0]
        G = fr.g0
        L = np.linalg.cholesky(G)
        Linv = np.linalg.inv(L)
        A = L.T @ H @ Linv.T
        sym_defect = float(np.max(np.abs(A - A.T)))
        w, U = np.linalg.eigh(0.5 * (A + A.T))
        vecs = Linv.T @ U  # columns g-orthonormal
        lam = float(np.max(np.abs(w)))
        scale = max(1.0, lam)
        if sym_defect > 1e-7 * scale:
            raise DegenerateSpectrum(
                f"h~ not g-self-adjoint at {p} (defect {sym_defect:.3e})"
            )
        if lam <= cluster_tol:
            return EigenSplit(0.0, vecs, vecs[:, :0], vecs[:, :0])
        zero, plus, minus = [], [], []
        for val, vec in zip(w, vecs.T):
            dists = {0: abs(val), 1: abs(val - lam), -1: abs(val + lam)}
            tag = min(dists, key=dists.get)
            if dists[tag] > cluster_tol * scale:
                raise DegenerateSpectrum(
                    f"eigenvalue {val:.6e} outside clusters {{0, +-{lam:.6e}}}"
                )
            {0: zero, 1: plus, -1: minus}[tag].append(vec)
        stack = lambda vs: (
            np.stack(vs, axis=1) if vs else np.zeros((self.dim, 0))
        )
        return EigenSplit(lam, stack(zero), stack(plus), stack(minus))
