"""Isometric immersions: induced geometry, frames, second fundamental form and friends.

Everything at a source point ``u0`` is a jet in the source coordinates.  The
immersion is lifted to a third-order jet ``x(u)``; ambient fields are
expanded at ``x(u0)`` and substituted along ``x(u)``.  From there:

* ``E[k, i]``        tangent frame d_i x^k (order 2)
* ``N[k, a]``        orthonormal normal frame by Gram-Schmidt (order 2)
* ``h[a, i, j]``     g(h(d_i, d_j), N_a) (order 1)
* ``A[k, a, i]``     (A_{N_a} d_i)^k in source components (order 1)
* ``S[b, a, i]``     g(nabla-perp_{d_i} N_a, N_b) (order 1)
* ``Rperp[b, a, i, j]``  g(R-perp(d_i, d_j) N_a, N_b) (value)

Probe vectors are coordinate-constant in the source chart; tangent outputs
are source components, normal outputs are normal-frame components unless a
function says it returns an ambient vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from . import jets
from .jets import Jet
from .manifold import (AnalyticField, GeometryError, MetricChart, christoffel_from_metric, evaluate,
                       riemann_from_christoffel)
from .terms import Balance

RANK_TOL = 1e-8
GS_TOL = 1e-10
NORMAL_ORIENTATION = "Gram-Schmidt of ambient coordinate axes ranked at the source centre; g(N_a, e_k) > 0"


class FrameError(GeometryError):
    pass


@dataclass(frozen=True)
class CRSpec:
    """Constant-coefficient spans (rows are source vectors) of D and D-perp."""

    D: np.ndarray
    Dperp: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "D", np.atleast_2d(np.asarray(self.D, dtype=float)))
        object.__setattr__(self, "Dperp", np.atleast_2d(np.asarray(self.Dperp, dtype=float)))


@dataclass(frozen=True)
class Immersion:
    """A map from an m-dimensional source box into ambient coordinates.

    ``map`` receives the source coordinate jet and returns the ambient
    coordinate jet (or a list of jets/floats).
    """

    name: str
    source_dim: int
    ambient_dim: int
    map: AnalyticField
    domain_box: np.ndarray
    declared: frozenset = frozenset()
    cr: Optional[CRSpec] = None
    doc: str = ""

    def __post_init__(self):
        box = np.asarray(self.domain_box, dtype=float)
        if box.shape != (self.source_dim, 2) or np.any(box[:, 0] >= box[:, 1]):
            raise GeometryError("immersion domain_box must be (m, 2) with lo < hi")
        object.__setattr__(self, "domain_box", box)
        object.__setattr__(self, "declared", frozenset(self.declared))

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.source_dim

    def center(self) -> np.ndarray:
        return self.domain_box.mean(axis=1)

    def sampling_box(self) -> np.ndarray:
        lo, hi = self.domain_box[:, 0], self.domain_box[:, 1]
        pad = 0.1 * (hi - lo)
        return np.stack([lo + pad, hi - pad], axis=1)

    def sample_points(self, rng: np.random.Generator, count: int) -> np.ndarray:
        box = self.sampling_box()
        return box[:, 0] + (box[:, 1] - box[:, 0]) * rng.random((count, self.source_dim))

    def x_jet(self, u0, order: int) -> Jet:
        x = evaluate(self.map, jets.variables(np.asarray(u0, dtype=float), order))
        if x.shape != (self.ambient_dim,):
            raise GeometryError(f"immersion {self.name!r} returned shape {x.shape}")
        return x

    def __call__(self, u0) -> np.ndarray:
        return self.x_jet(u0, 0).value


def identity_immersion(dim: int, box, name: str = "identity") -> Immersion:
    return Immersion(name, dim, dim, AnalyticField(lambda u: u, "id"), np.asarray(box, dtype=float),
                     declared=frozenset({"invariant"}), doc="the ambient chart mapped to itself")


# -- the immersed submanifold ---------------------------------------------------------

class ImmersedSubmanifold:
    """An immersion into a chart (optionally a conformal Sasakian space).

    The normal-frame candidates are ranked once, at the source centre, and
    reused at every point so that the frame is a smooth field.
    """

    def __init__(self, ambient, imm: Immersion, rotation: Optional[np.ndarray] = None):
        from .conformal import ConformalSasakianSpace

        if isinstance(ambient, ConformalSasakianSpace):
            self.space = ambient
            self.chart: MetricChart = ambient.chart
        else:
            self.space = None
            self.chart = ambient
        if self.chart.dim != imm.ambient_dim:
            raise GeometryError("immersion and ambient chart dimensions differ")
        self.imm = imm
        p = imm.codim
        if rotation is not None:
            rotation = np.asarray(rotation, dtype=float)
            if rotation.shape != (p, p) or np.max(np.abs(rotation.T @ rotation - np.eye(p))) > 1e-12:
                raise FrameError("normal-frame rotation must be an orthogonal p x p matrix")
        self.rotation = rotation
        self.candidates = self._rank_candidates()

    @property
    def m(self) -> int:
        return self.imm.source_dim

    @property
    def p(self) -> int:
        return self.imm.codim

    def _rank_candidates(self) -> tuple:
        u0 = self.imm.center()
        x = self.imm.x_jet(u0, 1)
        E = x.gradient
        g = self.chart.metric_at(x.value)
        _check_rank(E)
        G = E.T @ g @ E
        proj = np.eye(self.chart.dim) - E @ jets.lu_inverse(G) @ E.T @ g
        resid = np.array([np.sqrt(max(c @ g @ c, 0.0)) for c in proj.T])
        order = sorted(range(self.chart.dim), key=lambda k: (-round(resid[k], 12), k))
        chosen, basis = [], []
        for k in order:
            if len(chosen) == self.p:
                break
            v = proj[:, k].copy()
            for b in basis:
                v -= (b @ g @ v) * b
            nv = np.sqrt(max(v @ g @ v, 0.0))
            if nv > 1e-6:
                chosen.append(k)
                basis.append(v / nv)
        if len(chosen) != self.p:
            raise FrameError("could not select normal candidates at the source centre")
        return tuple(chosen)

    def at(self, u0, order: int = 3) -> "SubmanifoldPoint":
        return SubmanifoldPoint(self, np.asarray(u0, dtype=float), order)


def _check_rank(E: np.ndarray) -> None:
    if E.shape[1] == 0:
        return
    sv = np.linalg.svd(E, compute_uv=False)
    if sv[-1] <= RANK_TOL:
        raise FrameError(f"immersion differential is rank deficient (smallest singular value {sv[-1]:.2e})")


def _gram_schmidt(proj: Jet, g: Jet, candidates, rotation) -> Jet:
    """Modified Gram-Schmidt of the projected candidate axes, returning N[k, a]."""
    cols = []
    for k in candidates:
        v = proj[:, k]
        for b in cols:
            v = v - jets.contract("i,i->", jets.contract("i,ij->j", b, g), v) * b
        nsq = jets.contract("i,i->", jets.contract("i,ij->j", v, g), v)
        if float(nsq.value) < GS_TOL ** 2:
            raise FrameError("Gram-Schmidt breakdown while building the normal frame")
        cols.append(v * jets.reciprocal(jets.sqrt(nsq)))
    N = jets.stack(cols, axis=1)
    if rotation is not None:
        N = jets.matmul(N, rotation)
    return N


class SubmanifoldPoint:
    """All induced objects at one source point."""

    def __init__(self, sub: ImmersedSubmanifold, u0: np.ndarray, order: int = 3):
        self.sub = sub
        self.u0 = u0
        order = min(order, sub.chart.max_order)
        if order < 1:
            raise GeometryError("submanifold geometry needs at least first-order jets")
        self.order = order
        self.x = sub.imm.x_jet(u0, order)
        self.x0 = self.x.value
        self.E = self.x.diff()
        _check_rank(self.E.value)
        g_x = sub.chart.metric_jet(self.x0, order)
        self.g = jets.compose(g_x, self.x)
        self.gamma = jets.compose(christoffel_from_metric(g_x), self.x) if order >= 1 else None

    # -- induced metric and connection ---------------------------------------------
    @cached_property
    def ginduced(self) -> Jet:
        k = self.E.order
        return jets.contract("ki,kj->ij", self.E, jets.contract("kl,lj->kj", self.g.truncate(k), self.E))

    @cached_property
    def ginduced_inv(self) -> Jet:
        return jets.inv(self.ginduced)

    @cached_property
    def gamma_induced(self) -> Jet:
        return christoffel_from_metric(self.ginduced)

    @cached_property
    def riemann_induced(self) -> np.ndarray:
        if self.gamma_induced.order < 1:
            raise GeometryError("induced curvature needs third-order immersion jets")
        return riemann_from_christoffel(self.gamma_induced).value

    @property
    def G(self) -> np.ndarray:
        return self.ginduced.value

    @property
    def Ginv(self) -> np.ndarray:
        return self.ginduced_inv.value

    # -- projections ----------------------------------------------------------------
    @cached_property
    def tangent_projector(self) -> Jet:
        """T[i, k]: source components of the tangential part of an ambient vector."""
        k = self.E.order
        return jets.contract("ij,jk->ik", self.ginduced_inv,
                             jets.contract("lj,lk->jk", self.E, self.g.truncate(k)))

    @cached_property
    def N(self) -> Jet:
        if self.sub.p == 0:
            return Jet.constant(np.zeros((self.sub.chart.dim, 0)), len(self.u0), self.E.order)
        eye = np.eye(self.sub.chart.dim)
        proj = eye - jets.contract("ki,il->kl", self.E, self.tangent_projector)
        return _gram_schmidt(proj, self.g.truncate(self.E.order), self.sub.candidates, self.sub.rotation)

    @cached_property
    def normal_projector(self) -> Jet:
        """Nrm[a, k]: normal-frame components of an ambient vector."""
        k = self.E.order
        return jets.contract("ka,kl->al", self.N, self.g.truncate(k))

    def tan(self, V) -> np.ndarray:
        return self.tangent_projector.value @ V

    def nor(self, V) -> np.ndarray:
        return self.normal_projector.value @ V

    def push(self, X) -> np.ndarray:
        """Ambient vector of a source tangent vector."""
        return self.E.value @ X

    def normal_vector(self, c) -> np.ndarray:
        """Ambient vector with normal-frame components ``c``."""
        return self.N.value @ c

    # -- second fundamental form ----------------------------------------------------
    @cached_property
    def K(self) -> Jet:
        """Ambient nabla_{d_i} d_j along the immersion: K[k, i, j] (order 1)."""
        dE = self.E.diff()  # dE[k, j, i] = d_i E^k_j
        k = dE.order
        gam = self.gamma.truncate(k)
        E = self.E.truncate(k)
        gE = jets.contract("kab,ai->kib", gam, E)
        return dE.transpose(0, 2, 1) + jets.contract("kib,bj->kij", gE, E)

    @cached_property
    def h_jet(self) -> Jet:
        return jets.contract("ak,kij->aij", self.normal_projector.truncate(self.K.order), self.K)

    @property
    def h(self) -> np.ndarray:
        return self.h_jet.value

    def second_fundamental_form(self, X, Y) -> np.ndarray:
        """h(X, Y) as an ambient vector."""
        return self.N.value @ np.einsum("aij,i,j->a", self.h, X, Y)

    def h_normal(self, X, Y) -> np.ndarray:
        return np.einsum("aij,i,j->a", self.h, X, Y)

    @cached_property
    def DN(self) -> Jet:
        """Ambient nabla_{d_i} N_a: DN[k, a, i] (order 1)."""
        dN = self.N.diff()
        k = dN.order
        gam = self.gamma.truncate(k)
        gE = jets.contract("klm,li->kmi", gam, self.E.truncate(k))
        return dN + jets.contract("kmi,ma->kai", gE, self.N.truncate(k))

    @cached_property
    def A_jet(self) -> Jet:
        """A[j, a, i] = (A_{N_a} d_i)^j from the Weingarten formula."""
        dn = self.DN
        return -jets.contract("jk,kai->jai", self.tangent_projector.truncate(dn.order), dn)

    @property
    def A(self) -> np.ndarray:
        return self.A_jet.value

    def shape_operator(self, a: int, X) -> np.ndarray:
        return self.A[:, a, :] @ X

    def shape_operator_dual(self, a: int, X) -> np.ndarray:
        """A_a X from the duality g'(A_a X, Y) = h^a(X, Y)."""
        return self.Ginv @ (self.h[a] @ X)

    def shape_operator_vec(self, n, X) -> np.ndarray:
        """A_N X for a normal vector given by frame components ``n``."""
        return np.einsum("jai,a,i->j", self.A, n, X)

    @cached_property
    def S_jet(self) -> Jet:
        dn = self.DN
        return jets.contract("bk,kai->bai", self.normal_projector.truncate(dn.order), dn)

    @property
    def S(self) -> np.ndarray:
        return self.S_jet.value

    def s_coeffs(self, X) -> np.ndarray:
        """S[b, a] = g(nabla-perp_X N_a, N_b)."""
        return self.S @ X

    def s_coeffs_first_kind(self, X) -> np.ndarray:
        """S through first-kind Christoffel symbols, without projecting with g^-1."""
        from .manifold import christoffel_first_kind

        g_x = self.sub.chart.metric_jet(self.x0, 1)
        gam1 = christoffel_first_kind(g_x)  # [l, i, j]
        N = self.N.value
        dN = self.N.gradient  # [k, a, i]
        ex = self.E.value @ X
        g0 = self.g.value
        lowered = np.einsum("kai,i,kl->la", dN, X, g0) + np.einsum("lij,i,ja->la", gam1, ex, N)
        return N.T @ lowered

    def normal_connection(self, X, a: int) -> np.ndarray:
        """nabla-perp_X N_a as an ambient vector."""
        return self.N.value @ self.s_coeffs(X)[:, a]

    @cached_property
    def Rperp(self) -> np.ndarray:
        """Rperp[b, a, i, j] = g(R-perp(d_i, d_j) N_a, N_b)."""
        S = self.S_jet
        if S.order < 1:
            raise GeometryError("normal curvature needs third-order immersion jets")
        dS = S.gradient  # [b, a, i, k] = d_k S_{ba,i}
        s = S.value
        r = np.einsum("baji->baij", dS) - np.einsum("baij->baij", dS)
        r = r + np.einsum("bci,caj->baij", s, s) - np.einsum("bcj,cai->baij", s, s)
        return r

    def normal_curvature(self, X, Y, n) -> np.ndarray:
        """R-perp(X, Y)N for N with frame components ``n``; frame components out."""
        return np.einsum("baij,a,i,j->b", self.Rperp, n, X, Y)

    def mean_curvature(self) -> np.ndarray:
        """H as normal-frame components: (1/m) trace of h with respect to g'."""
        return np.einsum("ij,aij->a", self.Ginv, self.h) / self.sub.m

    def mean_curvature_vector(self) -> np.ndarray:
        return self.N.value @ self.mean_curvature()

    def orthonormal_frame(self, method: str = "cholesky") -> np.ndarray:
        """Columns: a g'-orthonormal basis of the source tangent space."""
        G = self.G
        if method == "cholesky":
            L = np.linalg.cholesky(G)
            return np.linalg.inv(L).T
        w, V = np.linalg.eigh(G)
        return V / np.sqrt(w)

    # -- covariant derivative of the shape operator ---------------------------------
    @cached_property
    def nabla_A(self) -> np.ndarray:
        """[k, a, j, i] = ((nabla'_{d_i} A_a) d_j)^k."""
        A = self.A_jet
        if A.order < 1:
            raise GeometryError("Codazzi terms need third-order immersion jets")
        gam = self.gamma_induced.value
        dA = A.gradient  # [k, a, j, i]
        a0 = A.value
        return dA + np.einsum("kil,laj->kaji", gam, a0) - np.einsum("lij,kal->kaji", gam, a0)

    def nabla_A_apply(self, a: int, X, Y) -> np.ndarray:
        """(nabla'_X A_a) Y."""
        return np.einsum("kji,j,i->k", self.nabla_A[:, a], Y, X)

    # -- structure data (conformal ambient only) -------------------------------------
    @cached_property
    def ambient(self):
        if self.sub.space is None:
            raise GeometryError("structure data requires a conformal Sasakian ambient")
        return self.sub.space.at(self.x0, 2)

    def _field_along(self, fld) -> Jet:
        k = self.E.order
        return jets.compose(fld.jet(self.x0, k), self.x.truncate(k))

    @cached_property
    def phi_jet(self) -> Jet:
        return self._field_along(self.sub.space.base.phi)

    @cached_property
    def structure(self) -> "StructureParts":
        return StructureParts(self)


class StructureParts:
    """P, F, t, f_nor as jets, plus their covariant derivatives."""

    def __init__(self, sp: SubmanifoldPoint):
        self.sp = sp
        phiE = jets.contract("kl,li->ki", sp.phi_jet, sp.E)
        phiN = jets.contract("kl,la->ka", sp.phi_jet, sp.N)
        T, Nr = sp.tangent_projector, sp.normal_projector
        self.P_jet = jets.contract("jk,ki->ji", T, phiE)
        self.F_jet = jets.contract("bk,ki->bi", Nr, phiE)
        self.t_jet = jets.contract("jk,ka->ja", T, phiN)
        self.f_jet = jets.contract("bk,ka->ba", Nr, phiN)

    @property
    def P(self) -> np.ndarray:
        return self.P_jet.value

    @property
    def F(self) -> np.ndarray:
        return self.F_jet.value

    @property
    def t(self) -> np.ndarray:
        return self.t_jet.value

    @property
    def f_nor(self) -> np.ndarray:
        return self.f_jet.value

    # Each covariant derivative (nabla'_X T)Y is D_X(TY) - T(D_X Y); the two pieces are
    # returned separately so equation residuals can be scaled by their size.

    @cached_property
    def nabla_P_parts(self) -> tuple:
        """[k, j, i] arrays for nabla'_{d_i}(P d_j) and P(nabla'_{d_i} d_j)."""
        gam = self.sp.gamma_induced.value
        P = self.P
        return (self.P_jet.gradient + np.einsum("kil,lj->kji", gam, P), np.einsum("lij,kl->kji", gam, P))

    @cached_property
    def nabla_F_parts(self) -> tuple:
        gam = self.sp.gamma_induced.value
        F = self.F
        return (self.F_jet.gradient + np.einsum("bai,aj->bji", self.sp.S, F), np.einsum("lij,bl->bji", gam, F))

    @cached_property
    def nabla_t_parts(self) -> tuple:
        gam = self.sp.gamma_induced.value
        t = self.t
        return (self.t_jet.gradient + np.einsum("kil,la->kai", gam, t), np.einsum("kb,bai->kai", t, self.sp.S))

    @cached_property
    def nabla_f_parts(self) -> tuple:
        S = self.sp.S
        f = self.f_nor
        return (self.f_jet.gradient + np.einsum("bci,ca->bai", S, f), np.einsum("bc,cai->bai", f, S))

    @property
    def nabla_P(self) -> np.ndarray:
        """[k, j, i] = ((nabla'_{d_i} P) d_j)^k."""
        a, b = self.nabla_P_parts
        return a - b

    @property
    def nabla_F(self) -> np.ndarray:
        """[b, j, i] = normal components of (nabla'_{d_i} F) d_j."""
        a, b = self.nabla_F_parts
        return a - b

    @property
    def nabla_t(self) -> np.ndarray:
        """[k, a, i] = ((nabla'_{d_i} t) N_a)^k."""
        a, b = self.nabla_t_parts
        return a - b

    @property
    def nabla_f(self) -> np.ndarray:
        """[b, a, i] = normal components of (nabla'_{d_i} f_nor) N_a."""
        a, b = self.nabla_f_parts
        return a - b


# -- classification ------------------------------------------------------------------

CLASS_TOL = 1e-9


@dataclass(frozen=True)
class Classification:
    """Worst-case residuals of the class predicates over the sampled points.

    Tangent probes are g'-orthonormal frames, so each residual is an operator
    norm bound rather than a probe-dependent number.
    """

    residuals: dict
    tol: float = CLASS_TOL

    def holds(self, name: str) -> bool:
        return self.residuals.get(name, np.inf) <= self.tol

    @property
    def flags(self) -> dict:
        return {k: self.holds(k) for k in self.residuals}

    def __getattr__(self, name):
        res = self.__dict__.get("residuals", {})
        if name in res:
            return self.holds(name)
        raise AttributeError(name)


def _norm_g(v, G) -> float:
    return float(np.sqrt(max(v @ G @ v, 0.0)))


def classify_point(sp: SubmanifoldPoint) -> dict:
    """Class residuals at one point."""
    st = sp.structure
    O = sp.orthonormal_frame()
    G = sp.G
    cp = sp.ambient
    out = {
        "invariant": float(np.max(np.abs(st.F @ O), initial=0.0)),
        "anti_invariant": max((_norm_g(st.P @ o, G) for o in O.T), default=0.0),
        "xi_tangent": float(np.linalg.norm(sp.nor(cp.xi))),
        "xi_normal": _norm_g(sp.tan(cp.xi), G),
        "lee_tangent": float(np.linalg.norm(sp.nor(cp.omega_sharp))),
        "lee_normal": _norm_g(sp.tan(cp.omega_sharp), G),
    }
    cr = sp.sub.imm.cr
    if cr is not None:
        D, Dp = cr.D, cr.Dperp
        # D-perp is the g'-orthogonal complement of D; project with G.
        proj_perp = Dp.T @ np.linalg.solve(Dp @ G @ Dp.T, Dp @ G)
        inv = max(max(float(np.linalg.norm(st.F @ X)), _norm_g(proj_perp @ (st.P @ X), G)) for X in D)
        anti = max(_norm_g(st.P @ Y, G) for Y in Dp)
        orth = float(np.max(np.abs(D @ G @ Dp.T)))
        xi_s = sp.tan(cp.xi)
        xi_in_D = _norm_g(proj_perp @ xi_s, G) + float(np.linalg.norm(sp.nor(cp.xi)))
        out["cr"] = max(inv, anti, orth, xi_in_D)
    return out


def classify(sub: ImmersedSubmanifold, sample_count: int = 8, seed: int = 0,
             tol: float = CLASS_TOL) -> Classification:
    """Class predicates (invariant, anti-invariant, xi/Lee tangent or normal, CR) with max residuals."""
    rng = np.random.default_rng(seed)
    pts = np.vstack([sub.imm.center()[None, :], sub.imm.sample_points(rng, max(sample_count - 1, 0))])
    worst: dict = {}
    for u in pts:
        for k, v in classify_point(sub.at(u, order=1)).items():
            worst[k] = max(worst.get(k, 0.0), v)
    return Classification(worst, tol)


def verify_declared(sub: ImmersedSubmanifold, sample_count: int = 4, tol: float = CLASS_TOL) -> Classification:
    """Raise when the immersion does not satisfy its declared classes."""
    cls = classify(sub, sample_count, tol=tol)
    bad = sorted(k for k in sub.imm.declared if k in cls.residuals and not cls.holds(k))
    if bad:
        detail = ", ".join(f"{k}={cls.residuals[k]:.2e}" for k in bad)
        raise GeometryError(f"immersion {sub.imm.name!r} fails its declared classes: {detail}")
    return cls


# -- nested immersions ------------------------------------------------------------------

class InducedMetric:
    """The metric g' of an immersion as a field on its source chart (jets up to order 2)."""

    max_order = 2

    def __init__(self, chart: MetricChart, imm: Immersion):
        self.chart = chart
        self.imm = imm

    def jet(self, p, order: int) -> Jet:
        if order > self.max_order:
            raise GeometryError("induced metric jets are limited to order 2 (immersion jets stop at 3)")
        x = self.imm.x_jet(p, order + 1)
        E = x.diff()
        g = jets.compose(self.chart.metric_jet(x.value, order), x.truncate(order))
        return jets.contract("ki,kj->ij", E, jets.contract("kl,lj->kj", g, E))


def induced_chart(sub: ImmersedSubmanifold) -> MetricChart:
    """The submanifold as a Riemannian chart in its own right."""
    return MetricChart(sub.m, InducedMetric(sub.chart, sub.imm), sub.imm.domain_box,
                       name=f"{sub.imm.name}|induced", max_order=InducedMetric.max_order)


def leaf_immersion(imm: Immersion, u0, directions, half_width: float = 0.05) -> Immersion:
    """The affine slice s -> u0 + sum_r s_r directions[r] of the source chart."""
    u0 = np.asarray(u0, dtype=float)
    Dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    k = Dirs.shape[0]

    def fn(s):
        return [u0[i] + sum(Dirs[r, i] * s[r] for r in range(k)) for i in range(len(u0))]

    return Immersion(f"leaf[{imm.name}]", k, len(u0), AnalyticField(fn, "leaf"),
                     np.array([[-half_width, half_width]] * k), doc="affine leaf through u0")
