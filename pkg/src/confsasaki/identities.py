"""Named, runnable checks: one per displayed equation or theorem.

Each equation is built as a pair of :class:`~confsasaki.terms.Balance`
objects.  ``display`` transcribes the classical statement group by group;
``derived`` is what follows from the construction in this package.  When
the two differ, the report lists the groups that differ (``errata``) and the
check passes only if the derived form closes and the display's mismatch is
fully explained by those groups.
"""

from __future__ import annotations

import math
import os
import threading
import zlib
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from . import jets
from .conformal import (ConformalPoint, ConformalSasakianSpace, conformal_space, connection_difference_balance,
                        curvature_relation_balance, dphi_relation_balance, dxi_relation_balance)
from .contact import (DETA_NORMALIZATION, NORMALITY_DETA_SIGN, almost_contact_residuals, deta_palais_at,
                      nijenhuis_normality_defect_at, sasakian_defect_at)
from .manifold import (CURVATURE_SIGN, AnalyticField, MetricChart, bracket, evaluate, exterior_derivative_2form,
                       exterior_derivative_2form_constant)
from .manifold import GeometryError
from .spaces import PHI_CONVENTION, CatalogError, immersion_catalog, immersion_model_n
from .submanifold import NORMAL_ORIENTATION, Classification, ImmersedSubmanifold, SubmanifoldPoint, classify
from .terms import REL_FLOOR, Balance, relative


class ConfigError(ValueError):
    """Bad check id, space id or tolerance."""


# ==================================================================================
# Equation balances on a submanifold point
# ==================================================================================

class Probe:
    """Source tangent probes pushed to the ambient space, with the usual shorthands."""

    def __init__(self, sp: SubmanifoldPoint):
        self.sp = sp
        self.cp: ConformalPoint = sp.ambient
        self.E = sp.E.value
        self.G = sp.G

    def amb(self, X) -> np.ndarray:
        return self.E @ X

    def gs(self, X, Y) -> float:
        """Induced metric on source vectors."""
        return float(X @ self.G @ Y)

    def omega(self, V) -> float:
        return float(self.cp.omega @ V)

    def eta(self, V) -> float:
        return float(self.cp.eta @ V)

    def B(self, U, V) -> float:
        return float(U @ self.cp.B @ V)

    @property
    def c(self) -> float:
        """exp(f/2)."""
        return float(np.exp(0.5 * self.cp.f))


def gauss_balances(sp: SubmanifoldPoint, X, Y, Z, W):
    pr = Probe(sp)
    cp = pr.cp
    aX, aY, aZ, aW = (pr.amb(v) for v in (X, Y, Z, W))
    lhs = np.exp(-cp.f) * cp.tilde_curvature_4(aX, aY, aZ, aW)
    rind = float(np.einsum("abce,a,b,c,e->", sp.riemann_induced, X, Y, Z, pr.G @ W))
    gs, B = pr.gs, pr.B
    bgroup = 0.5 * (B(aX, aZ) * gs(Y, W) - B(aY, aZ) * gs(X, W) + B(aY, aW) * gs(X, Z) - B(aX, aW) * gs(Y, Z))
    lgroup = 0.25 * cp.lee_norm_sq * (gs(X, Z) * gs(Y, W) - gs(Y, Z) * gs(X, W))
    hA = lambda a, U, V: float(V @ pr.G @ sp.shape_operator(a, U))  # noqa: E731
    shape = sum(hA(a, X, Z) * hA(a, Y, W) - hA(a, Y, Z) * hA(a, X, W) for a in range(sp.sub.p))
    display = (Balance().add_lhs("exp(-f) R~", lhs).add("R'", rind).add("B", -bgroup)
               .add("lee_norm", -lgroup).add("shape", -shape))
    derived = (Balance().add_lhs("exp(-f) R~", lhs).add("R'", rind).add("B", bgroup)
               .add("lee_norm", lgroup).add("shape", shape))
    opposite = (Balance().add_lhs("exp(-f) R~", -lhs).add("R'", -rind).add("B", -bgroup)
                .add("lee_norm", -lgroup).add("shape", -shape))
    return display, derived, {"display_with_opposite_curvature_sign": opposite}


def codazzi_balances(sp: SubmanifoldPoint, X, Y, Z):
    pr = Probe(sp)
    cp = pr.cp
    p = sp.sub.p
    aX, aY, aZ = pr.amb(X), pr.amb(Y), pr.amb(Z)
    N = sp.N.value
    lhs = np.exp(-cp.f) * np.einsum("abce,a,b,c,ef,fk->k", cp.tilde.riemann(), aX, aY, aZ, cp.tilde.g, N)
    cod = np.array([Z @ pr.G @ (sp.nabla_A_apply(a, X, Y) - sp.nabla_A_apply(a, Y, X)) for a in range(p)])
    SX, SY = sp.s_coeffs(X), sp.s_coeffs(Y)  # [b, a]
    AY = np.array([Z @ pr.G @ sp.shape_operator(b, Y) for b in range(p)])
    AX = np.array([Z @ pr.G @ sp.shape_operator(b, X) for b in range(p)])
    ncon = SX.T @ AY - SY.T @ AX
    dws = cp.nabla_omega_sharp  # [k, i]
    gN = N.T @ cp.g
    lee = 0.5 * (pr.gs(X, Z) * (gN @ dws @ aY) - pr.gs(Y, Z) * (gN @ dws @ aX))
    quad = -0.25 * (gN @ cp.omega_sharp) * (pr.omega(aY) * pr.gs(X, Z) - pr.omega(aX) * pr.gs(Y, Z))
    display = Balance().add_lhs("exp(-f) R~", lhs).add("codazzi", cod).add("normal_connection", ncon).add("lee", lee)
    derived = (Balance().add_lhs("exp(-f) R~", lhs).add("codazzi", cod).add("normal_connection", -ncon)
               .add("lee", lee).add("lee_quadratic", quad))
    transposed = (Balance().add_lhs("exp(-f) R~", lhs).add("codazzi", cod).add("normal_connection", ncon)
                  .add("lee", lee).add("lee_quadratic", quad))
    return display, derived, {"display_with_S_ab_index_order": transposed}


def ricci_balances(sp: SubmanifoldPoint, X, Y):
    pr = Probe(sp)
    cp = pr.cp
    p = sp.sub.p
    aX, aY = pr.amb(X), pr.amb(Y)
    N = sp.N.value
    lhs = np.exp(-cp.f) * np.einsum("abce,a,b,cx,ef,fy->xy", cp.tilde.riemann(), aX, aY, N, cp.tilde.g, N)
    A = [sp.A[:, a, :] for a in range(p)]
    comm = np.array([[Y @ pr.G @ ((A[b] @ A[a] - A[a] @ A[b]) @ X) for b in range(p)] for a in range(p)])
    rperp = np.einsum("baij,i,j->ab", sp.Rperp, X, Y)
    bal = Balance().add_lhs("exp(-f) R~", lhs).add("shape_commutator", comm).add("normal", rperp)
    return bal, bal.copy(), {}


def structure_balances(sp: SubmanifoldPoint, X, Y, n):
    """Balances for the P, F, t, f_nor derivative laws; ``n`` are normal-frame components of N."""
    pr = Probe(sp)
    cp = pr.cp
    st = sp.structure
    P, F, t, fn = st.P, st.F, st.t, st.f_nor
    aX, aY = pr.amb(X), pr.amb(Y)
    phi, c = cp.phi, pr.c
    N = sp.N.value
    aN = N @ n
    xi_t, xi_n = sp.tan(cp.xi), sp.nor(cp.xi)
    ws = cp.omega_sharp
    pws_t, pws_n = sp.tan(phi @ ws), sp.nor(phi @ ws)
    ws_t, ws_n = sp.tan(ws), sp.nor(ws)
    g = cp.g
    gXY, gXpY, gXpN = pr.gs(X, Y), float(aX @ g @ phi @ aY), float(aX @ g @ phi @ aN)
    hXY = sp.h_normal(X, Y)
    out = {}

    d1, d2 = (np.einsum("kji,i,j->k", part, X, Y) for part in st.nabla_P_parts)
    b = (Balance().add_lhs("nabla'_X P(Y) part", d1).add_lhs("-P(nabla'_X Y) part", -d2)
         .add("sasakian", c * (gXY * xi_t - pr.eta(aY) * X))
         .add("A_FY X", sp.shape_operator_vec(F @ Y, X))
         .add("t h(X,Y)", t @ hXY)
         .add("lee", -0.5 * (pr.omega(phi @ aY) * X - pr.omega(aY) * (P @ X) + gXY * pws_t - gXpY * ws_t)))
    out["eq2.11"] = (b, b.copy())

    d1, d2 = (np.einsum("bji,i,j->b", part, X, Y) for part in st.nabla_F_parts)
    b = (Balance().add_lhs("nabla'_X F(Y) part", d1).add_lhs("-F(nabla'_X Y) part", -d2)
         .add("f h(X,Y)", fn @ hXY)
         .add("h(X,PY)", -sp.h_normal(X, P @ Y))
         .add("lee", 0.5 * (pr.omega(aY) * (F @ X) - gXY * pws_n + gXpY * ws_n)))
    out["eq2.12"] = (b, b.copy().add("xi_normal", c * gXY * xi_n))

    d1, d2 = (np.einsum("kai,a,i->k", part, n, X) for part in st.nabla_t_parts)
    AnX = sp.shape_operator_vec(n, X)
    b = (Balance().add_lhs("nabla'_X t(N) part", d1).add_lhs("-t(nabla'_X N) part", -d2)
         .add("A_fN X", sp.shape_operator_vec(fn @ n, X))
         .add("P A_N X", -P @ AnX)
         .add("lee", -0.5 * (-pr.omega(aN) * (P @ X) + pr.omega(phi @ aN) * X - gXpN * ws_t)))
    out["eq2.13"] = (b, b.copy().add("eta_normal", -c * pr.eta(aN) * X))

    d1, d2 = (np.einsum("bai,a,i->b", part, n, X) for part in st.nabla_f_parts)
    b = (Balance().add_lhs("nabla'_X f(N) part", d1).add_lhs("-f(nabla'_X N) part", -d2)
         .add("h(X,tN)", -sp.h_normal(X, t @ n))
         .add("F A_N X", -F @ AnX)
         .add("lee", 0.5 * (pr.omega(aN) * (F @ X) + gXpN * ws_n)))
    out["eq2.14"] = (b, b.copy())
    return out


# -- invariant submanifolds ----------------------------------------------------------

def invariant_h_balances(sp: SubmanifoldPoint, X, Y) -> dict:
    """h(X, phi Y) law, the h(phi X, phi Y) corollary and h(xi, xi) (invariant, xi tangent)."""
    pr = Probe(sp)
    cp = pr.cp
    st = sp.structure
    P, fn = st.P, st.f_nor
    aX, aY = pr.amb(X), pr.amb(Y)
    ws_n = sp.nor(cp.omega_sharp)
    pws_n = sp.nor(cp.phi @ cp.omega_sharp)
    gXY, gXpY = pr.gs(X, Y), float(aX @ cp.g @ cp.phi @ aY)
    out = {}
    b = (Balance().add_lhs("h(X,phi Y)", sp.h_normal(X, P @ Y))
         .add("phi h(X,Y)", fn @ sp.h_normal(X, Y))
         .add("lee", -0.5 * (gXY * pws_n - gXpY * ws_n)))
    out["eq3.2"] = (b, b.copy())
    b = (Balance().add_lhs("h(phi X,phi Y)", sp.h_normal(P @ X, P @ Y)).add_lhs("h(X,Y)", sp.h_normal(X, Y))
         .add("lee", (gXY - 0.5 * pr.eta(aX) * pr.eta(aY)) * ws_n))
    out["h(phiX,phiY)+h(X,Y)"] = (b, b.copy())
    xs = sp.tan(cp.xi)
    b = Balance().add_lhs("h(xi,xi)", sp.h_normal(xs, xs)).add("lee", 0.5 * ws_n)
    out["h(xi,xi)"] = (b, b.copy())
    return out


def minimality_balance(sp: SubmanifoldPoint, method: str = "cholesky"):
    """m H against (n' + 1/2) omega#-perp, with m = 2n' + 1; the left side is split per frame vector."""
    m = sp.sub.m
    O = sp.orthonormal_frame(method)
    nprime = (m - 1) / 2
    b = Balance()
    for i in range(m):
        b.add_lhs(f"h(e{i},e{i})", sp.h_normal(O[:, i], O[:, i]))
    b.add("(n'+1/2) omega#perp", (nprime + 0.5) * sp.nor(sp.ambient.omega_sharp))
    return b


# -- anti-invariant submanifolds -------------------------------------------------------

class AntiData:
    """Shorthands on an anti-invariant point: Q(X, Y) = A_{phi Y} X and friends."""

    def __init__(self, sp: SubmanifoldPoint):
        self.sp = sp
        self.pr = Probe(sp)
        cp = self.cp = sp.ambient
        st = self.st = sp.structure
        self.c = self.pr.c
        self.xs = sp.tan(cp.xi)                      # xi-top, source components
        self.wn = sp.nor(cp.omega_sharp)             # omega#-perp, frame components
        self.tau = st.t @ self.wn                    # t(omega#-perp) = (phi omega#)-top
        self.tau_amb = sp.push(self.tau)

    def th(self, X, Y):
        return self.st.t @ self.sp.h_normal(X, Y)

    def Phi_h(self, X, U, V) -> float:
        """Phi(X, h(U, V)) = g(X, phi h(U, V))."""
        cp = self.cp
        return float(self.pr.amb(X) @ cp.g @ cp.phi @ self.sp.second_fundamental_form(U, V))

    def om_phi(self, X) -> float:
        return self.pr.omega(self.cp.phi @ self.pr.amb(X))

    def eta(self, X) -> float:
        return self.pr.eta(self.pr.amb(X))

    def Q(self, X, Y):
        """Right side of the A_{phi Y} X law (tangential projection)."""
        gXY = self.pr.gs(X, Y)
        return (-self.th(X, Y) - self.c * (gXY * self.xs - self.eta(Y) * X)
                + 0.5 * (self.om_phi(Y) * X + gXY * self.tau))

    def A_phi(self, Y, X):
        """A_{phi Y} X from the Weingarten operator."""
        return self.sp.shape_operator_vec(self.st.F @ Y, X)


def anti_shape_balance(sp: SubmanifoldPoint, X, Y):
    ad = AntiData(sp)
    pr = ad.pr
    gXY = pr.gs(X, Y)
    b = (Balance().add_lhs("A_phiY X", ad.A_phi(Y, X))
         .add("phi h", -ad.th(X, Y))
         .add("sasakian", -ad.c * (gXY * ad.xs - ad.eta(Y) * X))
         .add("lee", 0.5 * (ad.om_phi(Y) * X + gXY * sp.tan(ad.cp.phi @ sp.normal_vector(ad.wn)))))
    return b, b.copy(), {}


def commutator_balances(sp: SubmanifoldPoint, X, Y, Z, W):
    """g'([A_phiZ, A_phiW] X, Y): the classical display and the expansion derived from Q."""
    ad = AntiData(sp)
    pr = ad.pr
    G = pr.G
    gs, c, ef = pr.gs, ad.c, pr.cp.ef
    lhs = Y @ G @ (ad.A_phi(Z, ad.A_phi(W, X)) - ad.A_phi(W, ad.A_phi(Z, X)))
    h = sp.h_normal
    om_h = lambda U, V: float(ad.wn @ h(U, V))  # noqa: E731  omega(h) = g(h, omega#-perp)
    oZ, oW, oX, oY = (ad.om_phi(v) for v in (Z, W, X, Y))
    eZ, eW, eX, eY = (ad.eta(v) for v in (Z, W, X, Y))
    gXZ, gXW, gYZ, gYW = gs(X, Z), gs(X, W), gs(Y, Z), gs(Y, W)
    Ph = ad.Phi_h

    display = Balance().add_lhs("g'([A_phiZ,A_phiW]X,Y)", lhs)
    display.add("hh", h(X, W) @ h(Y, Z) - h(Y, W) @ h(X, Z))
    display.add("omega_h", -0.5 * (gYZ * om_h(X, W) - gYW * om_h(X, Z) + gXW * om_h(Y, Z) - gXZ * om_h(Y, W)
                                   + oZ * Ph(Y, X, W) - oW * Ph(Y, X, Z) + oW * Ph(X, Y, W) - oZ * Ph(X, Y, W)))
    display.add("omega_omega", -0.25 * (oW * oX * gYZ - oZ * oX * gYW + oZ * oY * gXW - oW * oY * gXZ
                                        + pr.cp.lee_norm_sq * (gXZ * gYW - gXW * gYZ)))
    display.add("exp_half", -0.5 * c * (2 * eZ * Ph(Y, X, W) - 2 * eW * Ph(Y, X, Z) + 2 * eW * Ph(X, Y, Z)
                                        - 2 * eZ * Ph(X, Y, W)
                                        + oZ * eY * gXW - oW * eY * gXZ + oX * eW * gYZ - oX * eZ * gYW
                                        + oW * eX * gYZ - oZ * eX * gYW + oY * eZ * gXW - oY * eW * gXZ))
    display.add("exp", ef * (gYZ * gXW - gXZ * gYW + gXZ * eY * eW - gXW * eY * eZ + gYW * eX * eZ
                             - gYZ * eX * eW))

    def half(Z_, W_):
        """Groups of g'(Q(X, W_), Q(Y, Z_)); the symmetric lambda(W_)lambda(Z_) g'(X, Y) part is dropped
        because it cancels under Z <-> W."""
        HXW, HYZ = ad.th(X, W_), ad.th(Y, Z_)
        xs, tau = ad.xs, ad.tau
        gxw, gyz = gs(X, W_), gs(Y, Z_)
        eZ_, eW_ = ad.eta(Z_), ad.eta(W_)
        oZ_, oW_ = ad.om_phi(Z_), ad.om_phi(W_)
        g_ = lambda a, b: float(a @ G @ b)  # noqa: E731
        return {
            "hh": g_(HXW, HYZ),
            "omega_h": (-0.5 * gxw * g_(HYZ, tau) - 0.5 * gyz * g_(HXW, tau)
                        - 0.5 * oW_ * g_(HYZ, X) - 0.5 * oZ_ * g_(HXW, Y)),
            "omega_omega": (0.25 * gxw * gyz * g_(tau, tau) + 0.25 * gxw * oZ_ * g_(tau, Y)
                            + 0.25 * gyz * oW_ * g_(X, tau)),
            "exp_half": (c * gxw * g_(HYZ, xs) + c * gyz * g_(HXW, xs) - c * eW_ * g_(HYZ, X) - c * eZ_ * g_(HXW, Y)
                         - c * gxw * gyz * g_(xs, tau)
                         + gxw * (0.5 * c * eZ_ * g_(tau, Y) - 0.5 * c * oZ_ * g_(xs, Y))
                         + gyz * (0.5 * c * eW_ * g_(X, tau) - 0.5 * c * oW_ * g_(X, xs))),
            "exp": (c * c * gxw * gyz * g_(xs, xs) - c * c * gxw * eZ_ * g_(xs, Y)
                    - c * c * gyz * eW_ * g_(X, xs)),
        }

    a, b_ = half(Z, W), half(W, Z)
    derived = Balance().add_lhs("g'([A_phiZ,A_phiW]X,Y)", lhs)
    for k in a:
        derived.add(k, a[k] - b_[k])
    qprod = (Balance().add_lhs("g'([A_phiZ,A_phiW]X,Y)", lhs)
             .add("g'(Q(X,W),Q(Y,Z))", ad.Q(X, W) @ G @ ad.Q(Y, Z))
             .add("-g'(Q(X,Z),Q(Y,W))", -(ad.Q(X, Z) @ G @ ad.Q(Y, W))))
    return display, derived, {"product_of_shape_law": qprod}


# -- ambient identities ---------------------------------------------------------------

def tilde_phi_curvature_balance(cp: ConformalPoint, X, Y, Z):
    """R~(X,Y) phi Z for the Sasakian tilde structure."""
    t = cp.tilde
    phi, g = t.phi, t.g
    R = lambda a, b, c_: np.einsum("abce,a,b,c->e", t.riemann(), a, b, c_)  # noqa: E731
    b = (Balance().add_lhs("R~(X,Y)phiZ", R(X, Y, phi @ Z))
         .add("phi R~(X,Y)Z", phi @ R(X, Y, Z))
         .add("-g~(Y,Z)phiX", -(Y @ g @ Z) * (phi @ X))
         .add("g~(X,Z)phiY", (X @ g @ Z) * (phi @ Y))
         .add("-g~(phiY,Z)X", -((phi @ Y) @ g @ Z) * X)
         .add("g~(phiX,Z)Y", ((phi @ X) @ g @ Z) * Y))
    return b, b.copy(), {}


def phi_curvature_balances(cp: ConformalPoint, X, Y, Z):
    """R(X,Y) phi Z for the base structure: display coefficient 1 versus the derived exp(f)."""
    phi, g, gg = cp.phi, cp.g, cp.gg
    Bm = cp.B
    lhs = cp.riemann(X, Y, phi @ Z)
    bgrp = -0.5 * ((X @ Bm @ phi @ Z) * Y - (Y @ Bm @ phi @ Z) * X + (Y @ Bm @ Z) * (phi @ X)
                   - (X @ Bm @ Z) * (phi @ Y) + cp.B_sharp(Y) * gg(X, phi @ Z) - cp.B_sharp(X) * gg(Y, phi @ Z)
                   - (phi @ cp.B_sharp(Y)) * gg(X, Z) + (phi @ cp.B_sharp(X)) * gg(Y, Z))
    k = 0.25 * cp.lee_norm_sq
    display = (Balance().add_lhs("R(X,Y)phiZ", lhs).add("phi R(X,Y)Z", phi @ cp.riemann(X, Y, Z)).add("B", bgrp)
               .add("curvature_term", -(k + 1.0) * (gg(Y, Z) * (phi @ X) - gg(X, Z) * (phi @ Y)
                                                    + gg(X, phi @ Z) * X - gg(Y, phi @ Z) * X)))
    derived = (Balance().add_lhs("R(X,Y)phiZ", lhs).add("phi R(X,Y)Z", phi @ cp.riemann(X, Y, Z)).add("B", bgrp)
               .add("curvature_term", -(k + cp.ef) * (gg(Y, Z) * (phi @ X) - gg(X, Z) * (phi @ Y)
                                                      + gg(X, phi @ Z) * Y - gg(Y, phi @ Z) * X)))
    return display, derived, {}


# -- flat normal connection ---------------------------------------------------------------

def flat_normal_balances(sp: SubmanifoldPoint, X, Y, Z, W) -> dict:
    """Balances of the flat-normal-connection chain on an anti-invariant, xi-tangent point."""
    ad = AntiData(sp)
    pr, cp = ad.pr, ad.cp
    G, gs, c, ef = pr.G, pr.gs, ad.c, cp.ef
    st = ad.st
    aX, aY, aZ, aW = (pr.amb(v) for v in (X, Y, Z, W))
    h = sp.h_normal
    Rb = cp.riemann(aX, aY, aZ)
    Rind = np.einsum("abce,a,b,c->e", sp.riemann_induced, X, Y, Z)
    etaR = float(cp.eta @ Rb)
    Bm = cp.B
    gXZ, gXW, gYZ, gYW = gs(X, Z), gs(X, W), gs(Y, Z), gs(Y, W)
    eX, eY, eW = ad.eta(X), ad.eta(Y), ad.eta(W)
    out = {}

    # (4.6): inner product of the phi-curvature law with phi W.
    rperp_zw = float((st.F @ W) @ sp.normal_curvature(X, Y, st.F @ Z))
    comm = Y @ G @ (ad.A_phi(Z, ad.A_phi(W, X)) - ad.A_phi(W, ad.A_phi(Z, X)))
    bgrp = -0.5 * ((aY @ Bm @ aZ) * gXW - (aX @ Bm @ aZ) * gYW + (aX @ Bm @ aW) * gYZ - (aY @ Bm @ aW) * gXZ
                   + (aX @ Bm @ aZ) * eY * eW - (aY @ Bm @ aZ) * eX * eW
                   + (aY @ Bm @ cp.xi) * gXZ * eW - (aX @ Bm @ cp.xi) * gYZ * eW)
    brace = gYZ * gXW - gXZ * gYW + gXZ * eY * eW - gYZ * eX * eW

    def eq46(coef):
        return (Balance().add_lhs("g(Rperp(X,Y)phiZ,phiW)", rperp_zw).add_lhs("-g'([A_phiZ,A_phiW]X,Y)", -comm)
                .add("g'(R'(X,Y)Z,W)", Rind @ G @ W).add("hh", -(h(X, W) @ h(Y, Z)) + h(Y, W) @ h(X, Z))
                .add("eta R", -etaR * eW).add("B", bgrp)
                .add("curvature_term", -(0.25 * cp.lee_norm_sq + coef) * brace))

    out["eq4.6"] = (eq46(1.0), eq46(ef))

    # (4.7)
    b = (Balance().add_lhs("Phi(Y,h(X,Z))", ad.Phi_h(Y, X, Z))
         .add("Phi(Z,h(X,Y))", ad.Phi_h(Z, X, Y))
         .add("sasakian", -c * (gXZ * ad.eta(Y) - gs(X, Y) * ad.eta(Z)))
         .add("lee", 0.5 * (ad.om_phi(Z) * gs(X, Y) - ad.om_phi(Y) * gXZ)))
    out["eq4.7"] = (b, b.copy())

    # (4.8): -phi Rperp(X,Y) phi Z, tangential part, as source components.
    lhs48 = -st.t @ sp.normal_curvature(X, Y, st.F @ Z)
    display48, derived48 = _eq48_groups(sp, ad, X, Y, Z, Rind, etaR)
    display48.add_lhs("-phi Rperp(X,Y)phiZ", lhs48)
    derived48.add_lhs("-phi Rperp(X,Y)phiZ", lhs48)
    out["eq4.8"] = (display48, derived48)

    # (4.4), (4.5) at the ambient point with the pushed probes.
    out["eq4.4"] = tilde_phi_curvature_balance(cp, aX, aY, aZ)[:2]
    out["eq4.5"] = phi_curvature_balances(cp, aX, aY, aZ)[:2]
    return out


def _eq48_groups(sp, ad, X, Y, Z, Rind, etaR):
    pr, cp = ad.pr, ad.cp
    G, gs, ef = pr.G, pr.gs, cp.ef
    aX, aY, aZ = pr.amb(X), pr.amb(Y), pr.amb(Z)
    xs, Bm = ad.xs, cp.B
    gXZ, gYZ = gs(X, Z), gs(Y, Z)
    eX, eY = ad.eta(X), ad.eta(Y)
    Ginv = sp.Ginv
    E = sp.E.value
    nu_display = ad.wn
    nu_derived = -sp.nor(cp.phi @ ad.tau_amb)

    def Bp(U, V, nu):
        return float(pr.amb(U) @ Bm @ pr.amb(V) + nu @ sp.h_normal(U, V))

    def Bp_sharp(U, nu):
        return Ginv @ (E.T @ Bm @ pr.amb(U)) + sp.shape_operator_vec(nu, U)

    def bgroup(nu):
        return -0.5 * (Bp(Y, Z, nu) * X - Bp(X, Z, nu) * Y + gYZ * Bp_sharp(X, nu) - gXZ * Bp_sharp(Y, nu)
                       + ((aX @ Bm @ aZ) * eY - (aY @ Bm @ aZ) * eX) * xs
                       + ((aY @ Bm @ cp.xi) * gXZ - (aX @ Bm @ cp.xi) * gYZ) * xs)

    tang = gYZ * X - gXZ * Y
    xi_part = (gXZ * eY - gYZ * eX) * xs
    wt = sp.tan(cp.omega_sharp)
    common = {"R'": Rind, "eta R": -etaR * xs}
    display = Balance()
    derived = Balance()
    for k, v in common.items():
        display.add(k, v)
        derived.add(k, v)
    display.add("B", bgroup(nu_display))
    derived.add("B", bgroup(nu_derived))
    display.add("lee_tangent", -0.25 * float(wt @ G @ wt) * tang)
    derived.add("lee_tangent", -0.25 * (cp.lee_norm_sq - float(ad.tau @ G @ ad.tau)) * tang)
    display.add("lee_xi", -0.25 * cp.lee_norm_sq * xi_part)
    derived.add("lee_xi", -0.25 * cp.lee_norm_sq * xi_part)
    display.add("unit", -(tang + xi_part))
    derived.add("unit", -ef * (tang + xi_part))
    display.add("exp_f", ef * tang)
    derived.add("exp_f", ef * tang)
    f2 = ad.st.f_nor @ ad.st.f_nor
    derived.add("f_nor_shape", sp.shape_operator_vec(f2 @ sp.h_normal(Y, Z), X)
                - sp.shape_operator_vec(f2 @ sp.h_normal(X, Z), Y))
    return display, derived


def curvature_condition_balances(sp: SubmanifoldPoint, X, Y, Z):
    """The flat-normal condition: R'(X,Y)Z against the remaining (4.8) groups moved across.

    The defect of the derived form is exactly -phi Rperp(X,Y) phi Z (tangential part).
    """
    ad = AntiData(sp)
    aZ = ad.pr.amb(Z)
    Rind = np.einsum("abce,a,b,c->e", sp.riemann_induced, X, Y, Z)
    etaR = float(ad.cp.eta @ ad.cp.riemann(ad.pr.amb(X), ad.pr.amb(Y), aZ))
    d48, v48 = _eq48_groups(sp, ad, X, Y, Z, Rind, etaR)
    out = []
    for src in (d48, v48):
        b = Balance().add_lhs("R'(X,Y)Z", Rind)
        for k, v in src.rhs.items():
            if k != "R'":
                b.add(k, -v)
        out.append(b)
    return tuple(out)


def _phi_tm_basis(sp: SubmanifoldPoint) -> np.ndarray:
    """Orthonormal columns (normal-frame components) spanning phi(TM)."""
    U, s, _ = np.linalg.svd(sp.structure.F, full_matrices=False)
    return U[:, s > 1e-8 * max(1.0, s.max(initial=0.0))]


def normal_curvature_norms(sp: SubmanifoldPoint) -> tuple:
    """(max |Rperp| over coordinate pairs, the same restricted to phi(TM) -> phi(TM))."""
    R = sp.Rperp
    Q = _phi_tm_basis(sp)
    full = float(np.max(np.abs(R))) if R.size else 0.0
    block = np.einsum("ba,bc,ad,cdij->ij", Q, np.eye(R.shape[0]), Q, R) if Q.size else np.zeros(1)
    return full, float(np.max(np.abs(block)))


# -- recurrent normal curvature ----------------------------------------------------

@dataclass(frozen=True)
class RecurrenceSpec:
    """theta(sp, X, Y) -> float, a 2-form on the submanifold; the zero form by default."""

    theta: Optional[Callable] = None

    def __call__(self, sp, X, Y) -> float:
        return 0.0 if self.theta is None else float(self.theta(sp, X, Y))


def recurrence_balance(sp: SubmanifoldPoint, X, Y, rec: RecurrenceSpec):
    """Rperp(X,Y) = theta(X,Y) Id as matrices on the normal frame."""
    R = np.einsum("baij,i,j->ba", sp.Rperp, X, Y)
    th = rec(sp, X, Y)
    b = Balance().add_lhs("Rperp(X,Y)", R).add("theta(X,Y) Id", th * np.eye(sp.sub.p))
    return b


def recurrent_curvature_balances(sp: SubmanifoldPoint, X, Y, rec: RecurrenceSpec) -> dict:
    """R'(X,Y)Z written through theta plus the flat-normal groups, and its contraction over Z = W.

    The right side is assembled as a matrix M with M e_i = RHS(X, Y, e_i).  Its
    trace is compared with the frame contraction sum_k g'(M o_k, o_k), and with
    m theta(X, Y) (what remains once the skew curvature trace drops out).
    """
    m = sp.sub.m
    ad = AntiData(sp)
    th = rec(sp, X, Y)
    xs = ad.xs
    cols_rhs, cols_lhs = [], []
    for i in range(m):
        Z = np.eye(m)[:, i]
        _, cond = curvature_condition_balances(sp, X, Y, Z)
        rhs = th * Z - th * ad.eta(Z) * xs + sum(cond.rhs.values())
        cols_rhs.append(rhs)
        cols_lhs.append(sum(cond.lhs.values()))
    M = np.stack(cols_rhs, axis=1)
    L = np.stack(cols_lhs, axis=1)
    O = sp.orthonormal_frame()
    G = ad.pr.G
    direct = float(np.trace(M))
    framed = float(sum(O[:, k] @ G @ M @ O[:, k] for k in range(m)))
    theta_part = th * (np.eye(m) - np.outer(xs, ad.pr.E.T @ ad.cp.eta))
    eq = Balance().add_lhs("R'(X,Y)", L).add("theta", theta_part).add("flat_normal_groups", M - theta_part)
    contraction = Balance().add_lhs("trace", direct).add("frame_contraction", framed)
    mtheta = Balance().add_lhs("trace of the right side", direct).add("m theta", m * th).reference(
        "groups", np.abs(M))
    return {"eq4.10": eq, "contraction": contraction, "eq4.11": mtheta}


# -- CR submanifolds ------------------------------------------------------------------

class CRData:
    """Distribution data of a CR point: bases, projectors and polynomial D-perp fields."""

    def __init__(self, sp: SubmanifoldPoint):
        cr = sp.sub.imm.cr
        if cr is None:
            raise ConfigError(f"immersion {sp.sub.imm.name!r} has no CR distribution spec")
        self.sp = sp
        self.pr = Probe(sp)
        self.D = cr.D.T          # columns span D
        self.Dp = cr.Dperp.T     # columns span D-perp
        G = sp.G
        self.proj_D = self.D @ np.linalg.solve(self.D.T @ G @ self.D, self.D.T @ G)
        cp = sp.ambient
        self.xs = sp.tan(cp.xi)
        self.c = self.pr.c

    def D0(self, X):
        """Part of X in D orthogonal to xi."""
        return X - self.pr.eta(self.pr.amb(X)) * self.xs

    def field(self, coeffs: np.ndarray) -> AnalyticField:
        """Y(u) = sum_r (a_r + b_r.u + u.C_r.u) Dperp_r, a polynomial section of D-perp."""
        Dp, m = self.Dp, self.sp.sub.m
        a, b, C = coeffs

        def fn(u):
            out = [0.0] * m
            for r in range(Dp.shape[1]):
                s = a[r] + sum(b[r, i] * u[i] for i in range(m))
                s = s + sum(C[r, i, j] * u[i] * u[j] for i in range(m) for j in range(m))
                for k in range(m):
                    if Dp[k, r] != 0.0:
                        out[k] = out[k] + Dp[k, r] * s
            return out

        return AnalyticField(fn, "Dperp-section")

    def random_field(self, rng: np.random.Generator) -> AnalyticField:
        k, m = self.Dp.shape[1], self.sp.sub.m
        return self.field((rng.normal(size=k), rng.normal(size=(k, m)), 0.5 * rng.normal(size=(k, m, m))))

    def nabla_const(self, Y, Z) -> np.ndarray:
        """nabla'_Y Z for coordinate-constant Y, Z."""
        return np.einsum("kij,i,j->k", self.sp.gamma_induced.value, Y, Z)


def pulled_back_fundamental_form(sp: SubmanifoldPoint):
    """Jet of Phi'_ij = g(E_i, phi E_j) on the source chart."""
    k = sp.E.order
    g = sp.g.truncate(k)
    phi = sp.phi_jet.truncate(k)
    return jets.contract("ki,kj->ij", sp.E, jets.contract("kl,lj->kj", g, jets.contract("lm,mj->lj", phi, sp.E)))


def integrability_balances(sp: SubmanifoldPoint, X, Yf, Zf, amb_probes) -> dict:
    """Bracket projection of D-perp fields onto phi(D) and the d Phi~ chain."""
    crd = CRData(sp)
    pr, cp = crd.pr, sp.ambient
    u0 = sp.u0
    G, P = pr.G, sp.structure.P
    YZ = bracket(Yf, Zf, u0)
    PX = P @ X
    out = {}
    nYZ = float(np.sqrt(max(YZ @ G @ YZ, 0.0)))
    nPX = float(np.sqrt(max(PX @ G @ PX, 0.0)))
    out["bracket_projection"] = (Balance().add_lhs("g'([Y,Z],phi X)", float(YZ @ G @ PX))
                                 .reference("|[Y,Z]| |phi X|", nYZ * nPX))

    U, V, W = amb_probes
    dt = cp.tilde.d_fundamental_form
    terms = [np.einsum("ijk,i,j,k->", dt, a, b, c_) for a, b, c_ in ((V, W, U), (W, U, V), (U, V, W))]
    out["dPhi~"] = Balance().add_lhs("Palais dPhi~", sum(terms)).reference("terms", np.abs(terms))

    db = cp.base.d_fundamental_form
    Phi = cp.base.fundamental_form
    om = cp.omega
    palais_base = exterior_derivative_2form_constant(db, U, V, W)
    wedge = (om @ U) * (V @ Phi @ W) + (om @ V) * (W @ Phi @ U) + (om @ W) * (U @ Phi @ V)
    out["dPhi~ product rule"] = (Balance().add_lhs("Palais dPhi~", sum(terms))
                                 .add("exp(f) Palais dPhi", cp.ef * palais_base)
                                 .add("exp(f) omega^Phi", cp.ef * wedge))

    aX, aY, aZ = pr.amb(X), pr.amb(evaluate(Yf, jets.variables(u0, 0)).value), pr.amb(
        evaluate(Zf, jets.variables(u0, 0)).value)
    wparts = [(om @ aX) * (aY @ Phi @ aZ), (om @ aY) * (aZ @ Phi @ aX), (om @ aZ) * (aX @ Phi @ aY)]
    out["omega^Phi on (D,Dperp,Dperp)"] = (Balance().add_lhs("(omega^Phi)(X,Y,Z)", sum(wparts))
                                           .reference("|omega| |X||Y||Z|", np.sqrt(cp.lee_norm_sq)
                                                      * np.sqrt(abs(cp.gg(aX, aX) * cp.gg(aY, aY) * cp.gg(aZ, aZ)))))

    Phis = pulled_back_fundamental_form(sp)
    pal = exterior_derivative_2form(Phis, u0, X, Yf, Zf)
    out["Palais dPhi'"] = (Balance().add_lhs("Palais dPhi'(X,Y,Z)", pal)
                           .add("-g'([Y,Z],phi X)", -float(YZ @ G @ PX)))
    return out


def mixed_geodesic_balances(sp: SubmanifoldPoint, X, Y, Z):
    """The D-component of nabla'_Y Z against th(X, Y) for X in D, Y, Z in D-perp (constant)."""
    crd = CRData(sp)
    pr, G, c = crd.pr, crd.pr.G, crd.c
    P, t = sp.structure.P, sp.structure.t
    nYZ_D = crd.proj_D @ crd.nabla_const(Y, Z)
    lhs = -float(nYZ_D @ G @ (P @ X))
    th = t @ sp.h_normal(X, Y)
    gYZ = pr.gs(Y, Z)
    omphiX = pr.omega(sp.ambient.phi @ pr.amb(X))
    display = (Balance().add_lhs("-g'((nabla'_Y Z)_D, phi X)", lhs)
               .add("th", float(th @ G @ Z)).add("lee", -0.5 * gYZ * omphiX))
    derived = display.copy().add("xi_component", -c * pr.eta(pr.amb(X)) * gYZ)
    return display, derived, {}


def leaf_second_fundamental_balance(sub: ImmersedSubmanifold, u0, a, b):
    """Nested oracle: h_S(Y, Z) of the D-perp leaf inside the induced chart equals (nabla'_Y Z)_D."""
    from .submanifold import induced_chart, leaf_immersion

    sp = sub.at(u0)
    crd = CRData(sp)
    leaf = ImmersedSubmanifold(induced_chart(sub), leaf_immersion(sub.imm, u0, sub.imm.cr.Dperp))
    lp = leaf.at(np.zeros(leaf.m), order=2)
    hS = lp.second_fundamental_form(a, b)
    Y, Z = crd.Dp @ a, crd.Dp @ b
    b_ = (Balance().add_lhs("h_S(Y,Z)", hS).add("(nabla'_Y Z)_D", crd.proj_D @ crd.nabla_const(Y, Z)))
    return b_


def th_mixed_norm(sp: SubmanifoldPoint) -> float:
    """max |th(X, Y)| over X in a basis of D0 and Y in a basis of D-perp."""
    crd = CRData(sp)
    t = sp.structure.t
    vals = [t @ sp.h_normal(crd.D0(crd.D[:, i]), crd.Dp[:, j])
            for i in range(crd.D.shape[1]) for j in range(crd.Dp.shape[1])]
    return float(max((np.max(np.abs(v)) for v in vals), default=0.0))


def leaf_geodesic_norm(sp: SubmanifoldPoint) -> float:
    """max |g'((nabla'_Y Z)_D, phi X)| over basis X in D0 and Y, Z in D-perp."""
    crd = CRData(sp)
    P, G = sp.structure.P, sp.G
    out = 0.0
    for i in range(crd.D.shape[1]):
        PX = P @ crd.D0(crd.D[:, i])
        for j in range(crd.Dp.shape[1]):
            for k in range(crd.Dp.shape[1]):
                v = crd.proj_D @ crd.nabla_const(crd.Dp[:, j], crd.Dp[:, k])
                out = max(out, abs(float(v @ G @ PX)))
    return out


# ==================================================================================
# Ids, targets and the registry
# ==================================================================================

def parse_id(text: str) -> tuple:
    """``name:k=v,k=v`` -> (name, params).  Values are int, float, or ``[a;b;c]`` lists."""
    name, _, rest = text.strip().partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            k, eq, v = item.partition("=")
            if not eq or not k.strip():
                raise ConfigError(f"malformed parameter {item!r} in id {text!r}")
            params[k.strip()] = _parse_value(v.strip(), text)
    return name.strip(), params


def _parse_value(v: str, text: str):
    try:
        if v.startswith("[") and v.endswith("]"):
            return [float(x) for x in v[1:-1].split(";") if x.strip()]
        return int(v) if v.lstrip("+-").isdigit() else float(v)
    except ValueError as exc:
        raise ConfigError(f"malformed value {v!r} in id {text!r}") from exc


def build_space(space_id: str, factor_id: str, n_override: Optional[int] = None) -> ConformalSasakianSpace:
    name, sp = parse_id(space_id)
    if name != "sasakian":
        raise ConfigError(f"unknown space id {space_id!r}; known: sasakian:n=<1|2|3>")
    unknown = set(sp) - {"n", "phi_scale", "metric_eps"}
    if unknown:
        raise ConfigError(f"unknown space parameters {sorted(unknown)} in {space_id!r}")
    fam, fp = parse_id(factor_id)
    n = int(sp.get("n", 1)) if n_override is None else n_override
    try:
        return conformal_space(n, fam, phi_scale=float(sp.get("phi_scale", 1.0)),
                               metric_eps=float(sp.get("metric_eps", 0.0)), **fp)
    except (CatalogError, GeometryError) as exc:
        raise ConfigError(str(exc)) from exc


def build_immersion(imm_id: str):
    base, params = parse_id(imm_id)
    try:
        return immersion_catalog(base, **params), immersion_model_n(base, **params)
    except (CatalogError, GeometryError) as exc:
        raise ConfigError(str(exc)) from exc


def space_n(space_id: str) -> Optional[int]:
    _, sp = parse_id(space_id)
    return int(sp["n"]) if "n" in sp else None


@dataclass
class Context:
    """Everything one job needs: the space, an optional submanifold, sampling and tolerance."""

    space: ConformalSasakianSpace
    sub: Optional[ImmersedSubmanifold]
    samples: int
    probes: int
    tol: float
    rng: np.random.Generator
    classification: Optional[Classification] = None
    recurrence: RecurrenceSpec = field(default_factory=RecurrenceSpec)

    def points(self) -> np.ndarray:
        if self.sub is None:
            return self.space.chart.sample_points(self.rng, self.samples)
        return self.sub.imm.sample_points(self.rng, self.samples)

    def vectors(self, k: int, dim: Optional[int] = None) -> np.ndarray:
        return self.rng.normal(size=(k, dim if dim is not None else self.sub.m))

    def holds(self, name: str) -> bool:
        return self.classification is not None and self.classification.holds(name)


class Accumulator:
    """Collects per-sample balances, metrics and conditions for one job."""

    def __init__(self, main: str):
        self.main = main
        self.components: dict = {}
        self.required: dict = {}
        self.metrics: dict = {}
        self.conditions: dict = {}
        self.notes: list = []

    def add(self, name: str, display: Optional[Balance], derived: Balance, required: bool = True) -> None:
        self.components.setdefault(name, []).append((display, derived))
        self.required[name] = self.required.get(name, False) or required

    def metric(self, name: str, value: float) -> None:
        self.metrics[name] = max(self.metrics.get(name, 0.0), float(value))

    def condition(self, name: str, ok: bool) -> None:
        self.conditions[name] = self.conditions.get(name, True) and bool(ok)


@dataclass(frozen=True)
class CheckDef:
    check_id: str
    title: str
    run: Callable
    needs_immersion: bool = False
    requires: frozenset = frozenset()
    applicable: Optional[Callable] = None  # ctx -> reason string when not applicable, else None

    def why_not(self, ctx: Context) -> Optional[str]:
        if self.needs_immersion and ctx.sub is None:
            return "needs an immersion"
        missing = sorted(k for k in self.requires if not ctx.holds(k))
        if missing:
            return "hypothesis fails: " + ", ".join(missing)
        return self.applicable(ctx) if self.applicable else None


# -- ambient checks ------------------------------------------------------------------

def _contact_balances(sp, X, Y) -> dict:
    phi, xi, eta, g = sp.phi, sp.xi, sp.eta, sp.g
    n = phi.shape[0]
    return {
        "phi^2": Balance().add_lhs("phi^2", phi @ phi).add("-Id", -np.eye(n)).add("eta(x)xi", np.outer(xi, eta)),
        "eta(xi)": Balance().add_lhs("eta(xi)", eta @ xi).add("1", 1.0),
        "phi xi, eta o phi": (Balance().add_lhs("phi xi", phi @ xi).add_lhs("eta o phi", eta @ phi)
                              .reference("|phi|", phi)),
        "compatibility": (Balance().add_lhs("g(phi X,phi Y)", (phi @ X) @ g @ (phi @ Y))
                          .add("g(X,Y)", X @ g @ Y).add("-eta(X)eta(Y)", -(eta @ X) * (eta @ Y))),
    }


def run_eq2_1(ctx: Context, acc: Accumulator) -> None:
    for p in ctx.points():
        cp = ctx.space.at(p, order=1)
        for X, Y in (ctx.vectors(2, ctx.space.dim) for _ in range(ctx.probes)):
            for which, st in (("tilde", cp.tilde), ("base", cp.base)):
                for k, b in _contact_balances(st, X, Y).items():
                    acc.add(f"{which} {k}", None, b)


def run_eq2_2(ctx: Context, acc: Accumulator) -> None:
    for p in ctx.points():
        t = ctx.space.at(p, order=1).tilde
        for X, Y in (ctx.vectors(2, ctx.space.dim) for _ in range(ctx.probes)):
            b = (Balance().add_lhs("(nabla~_X phi)Y", np.einsum("kji,i,j->k", t.nabla_phi, X, Y))
                 .add("g~(X,Y)xi~", (X @ t.g @ Y) * t.xi).add("-eta~(Y)X", -(t.eta @ Y) * X))
            acc.add("sasakian", None, b)
            nb = (Balance().add_lhs("[phi,phi](X,Y)", nijenhuis_normality_defect_at(t, X, Y, 0.0))
                  .add("-2 deta~(X,Y) xi~", -NORMALITY_DETA_SIGN * deta_palais_at(t, X, Y) * t.xi))
            acc.add("normality", None, nb)


def run_eq2_6(ctx: Context, acc: Accumulator) -> None:
    for p in ctx.points():
        cp = ctx.space.at(p, order=1)
        ef = cp.ef
        acc.add("g~ = exp(f) g", None, Balance().add_lhs("g~", cp.tilde.g).add("exp(f) g", ef * cp.base.g))
        acc.add("eta~ = exp(f/2) eta", None,
                Balance().add_lhs("eta~", cp.tilde.eta).add("exp(f/2) eta", np.sqrt(ef) * cp.base.eta))
        acc.add("xi~ = exp(-f/2) xi", None,
                Balance().add_lhs("xi~", cp.tilde.xi).add("exp(-f/2) xi", cp.base.xi / np.sqrt(ef)))
        acc.add("phi~ = phi", None, Balance().add_lhs("phi~", cp.tilde.phi).add("phi", cp.base.phi))


def _ambient_probe_check(name: str, k: int, make: Callable, order: int = 2):
    def run(ctx: Context, acc: Accumulator) -> None:
        for p in ctx.points():
            cp = ctx.space.at(p, order=order)
            for _ in range(ctx.probes):
                res = make(cp, *ctx.vectors(k, ctx.space.dim))
                if isinstance(res, Balance):
                    acc.add(name, None, res)
                else:
                    acc.add(name, res[0], res[1])
    return run


# -- submanifold checks ----------------------------------------------------------------

def _sub_points(ctx: Context, order: int = 3):
    for u in ctx.points():
        yield ctx.sub.at(u, order=order)


def run_gauss(ctx, acc):
    for sp in _sub_points(ctx):
        for _ in range(ctx.probes):
            d, v, extra = gauss_balances(sp, *ctx.vectors(4))
            acc.add("eq2.15", d, v)
            for k, b in extra.items():
                acc.add(k, None, b, required=False)


def run_codazzi(ctx, acc):
    for sp in _sub_points(ctx):
        for _ in range(ctx.probes):
            d, v, extra = codazzi_balances(sp, *ctx.vectors(3))
            acc.add("eq2.16", d, v)
            for k, b in extra.items():
                acc.add(k, None, b, required=False)


def run_ricci(ctx, acc):
    Q, _ = np.linalg.qr(ctx.rng.normal(size=(ctx.sub.p, ctx.sub.p)))
    rotated = ImmersedSubmanifold(ctx.space, ctx.sub.imm, rotation=Q)
    for u in ctx.points():
        sp, spr = ctx.sub.at(u), rotated.at(u)
        for _ in range(ctx.probes):
            X, Y = ctx.vectors(2)
            d, v, _ = ricci_balances(sp, X, Y)
            _, vr, _ = ricci_balances(spr, X, Y)
            acc.add("eq2.17", d, v)
            acc.add("eq2.17 rotated normal frame", None, vr)
            acc.metric("frame covariance", abs(relative(v.residual, v.scale) - relative(vr.residual, vr.scale)))
    acc.condition("frame covariance <= 1e-8", acc.metrics.get("frame covariance", 0.0) <= 1e-8)


def _structure_runner(eq: str):
    def run(ctx, acc):
        for sp in _sub_points(ctx):
            for _ in range(ctx.probes):
                X, Y = ctx.vectors(2)
                d, v = structure_balances(sp, X, Y, ctx.rng.normal(size=ctx.sub.p))[eq]
                acc.add(eq, d, v)
    return run


def run_eq3_2(ctx, acc):
    for sp in _sub_points(ctx):
        for _ in range(ctx.probes):
            for k, (d, v) in invariant_h_balances(sp, *ctx.vectors(2)).items():
                acc.add(k, d, v)


def run_thm3_1(ctx, acc):
    lee_tangent = ctx.holds("lee_tangent")
    for sp in _sub_points(ctx, order=2):
        b = minimality_balance(sp)
        acc.add("m H = (n'+1/2) omega#perp", b.copy(), b)
        be = minimality_balance(sp, "eigh")
        acc.add("frame independence", None,
                Balance().add_lhs("cholesky frame", sum(b.lhs.values())).add("eigh frame", sum(be.lhs.values())))
        acc.add("trace with g'^-1", None,
                Balance().add_lhs("m H", sp.sub.m * sp.mean_curvature()).add("frame sum", sum(b.lhs.values())))
        H = float(np.linalg.norm(sp.mean_curvature()))
        acc.metric("|H|", H)
        acc.metric("|omega#perp|", float(np.linalg.norm(sp.nor(sp.ambient.omega_sharp))))
        if lee_tangent:
            acc.condition("minimal (|H| <= tol) when omega# is tangent", H <= ctx.tol)


def _odd_dimension(ctx):
    return None if ctx.sub.m % 2 == 1 else "source dimension must be odd"


def run_eq4_1(ctx, acc):
    for sp in _sub_points(ctx, order=2):
        for _ in range(ctx.probes):
            d, v, _ = anti_shape_balance(sp, *ctx.vectors(2))
            acc.add("eq4.1", d, v)


def run_eq4_2(ctx, acc):
    for sp in _sub_points(ctx, order=2):
        for _ in range(ctx.probes):
            d, v, extra = commutator_balances(sp, *ctx.vectors(4))
            acc.add("eq4.2", d, v)
            for k, b in extra.items():
                acc.add(k, None, b)


def run_prop4_2(ctx, acc):
    tol = ctx.tol
    for sp in _sub_points(ctx):
        full, block = normal_curvature_norms(sp)
        acc.metric("|Rperp|", full)
        acc.metric("|Rperp| on phi(TM)", block)
        worst = 0.0
        for _ in range(ctx.probes):
            X, Y, Z, W = ctx.vectors(4)
            for k, (d, v) in flat_normal_balances(sp, X, Y, Z, W).items():
                acc.add(k, d, v)
            d3, v3 = curvature_condition_balances(sp, X, Y, Z)
            acc.add("eq4.3 (condition)", d3, v3, required=False)
            worst = max(worst, relative(v3.residual, v3.scale))
        acc.condition("flat on phi(TM) <=> (4.3) holds, per sample", (block <= tol) == (worst <= tol))


def run_thm4_3(ctx, acc):
    rec = ctx.recurrence
    variant = "xi_normal" if ctx.holds("xi_normal") else "xi_tangent"
    acc.notes.append(f"variant={variant}")
    for sp in _sub_points(ctx):
        R = sp.Rperp
        diag = np.einsum("aaij->ij", R) / max(sp.sub.p, 1)
        acc.metric("theta fitted from Rperp", float(np.max(np.abs(diag), initial=0.0)))
        acc.metric("|Rperp|", float(np.max(np.abs(R), initial=0.0)))
        for _ in range(ctx.probes):
            X, Y = ctx.vectors(2)
            b = recurrence_balance(sp, X, Y, rec)
            acc.add("eq4.9 recurrence", None, b)
            parts = recurrent_curvature_balances(sp, X, Y, rec)
            acc.add(f"eq4.10 ({variant})", None, parts["eq4.10"], required=(variant == "xi_tangent"))
            acc.add("contraction: trace vs frame", None, parts["contraction"])
            acc.add("eq4.11", None, parts["eq4.11"])


def _thm4_3_hypothesis(ctx):
    if not (ctx.holds("xi_normal") or ctx.holds("xi_tangent")):
        return "hypothesis fails: xi neither normal nor tangent"
    rec = ctx.recurrence
    rng = np.random.default_rng(0)
    for u in ctx.sub.imm.sample_points(rng, 2):
        sp = ctx.sub.at(u)
        for _ in range(2):
            X, Y = rng.normal(size=(2, ctx.sub.m))
            b = recurrence_balance(sp, X, Y, rec)
            if relative(b.residual, b.scale) > ctx.tol:
                return "hypothesis fails: normal curvature is not recurrent for the given theta"
    return None


def run_thm5_1(ctx, acc):
    for sp in _sub_points(ctx):
        crd = CRData(sp)
        for _ in range(ctx.probes):
            X = crd.D @ ctx.rng.normal(size=crd.D.shape[1])
            Yf, Zf = crd.random_field(ctx.rng), crd.random_field(ctx.rng)
            for k, b in integrability_balances(sp, X, Yf, Zf, ctx.vectors(3, ctx.space.dim)).items():
                acc.add(k, None, b)


def run_thm5_3(ctx, acc):
    hyp = ctx.holds("lee_normal")
    tol = ctx.tol
    for sp in _sub_points(ctx):
        crd = CRData(sp)
        for _ in range(ctx.probes):
            X = crd.D @ ctx.rng.normal(size=crd.D.shape[1])
            Y, Z = (crd.Dp @ ctx.rng.normal(size=(crd.Dp.shape[1], 2))).T
            d, v, _ = mixed_geodesic_balances(sp, X, Y, Z)
            acc.add("eq5.2", d, v)
            d0, v0, _ = mixed_geodesic_balances(sp, crd.D0(X), Y, Z)
            acc.add("eq5.2 on D0", d0, v0)
            a, b = ctx.rng.normal(size=(2, crd.Dp.shape[1]))
            acc.add("eq5.1 nested leaf", None, leaf_second_fundamental_balance(ctx.sub, sp.u0, a, b))
        th, lg = th_mixed_norm(sp), leaf_geodesic_norm(sp)
        acc.metric("max |th(X,Y)|, X in D0, Y in Dperp", th)
        acc.metric("max |g'((nabla'_Y Z)_D, phi X)|", lg)
        if hyp:
            acc.condition("mixed geodesic <=> leaves totally geodesic, per sample", (th <= tol) == (lg <= tol))


def _thm5_3_hypothesis(ctx):
    return None if ctx.holds("lee_normal") else "hypothesis fails: lee_normal"


def _needs(m_min: int = 1, p_min: int = 0):
    def check(ctx):
        if ctx.sub.m < m_min:
            return f"needs source dimension >= {m_min} (identity vanishes identically)"
        if ctx.sub.p < p_min:
            return f"needs codimension >= {p_min}"
        return None
    return check


def _eq2_10(cp, X):
    return dxi_relation_balance(cp, X, "display"), dxi_relation_balance(cp, X, "derived")


REGISTRY: dict = {c.check_id: c for c in [
    CheckDef("eq2.1", "almost contact metric structure (base and tilde)", run_eq2_1),
    CheckDef("eq2.2", "Sasakian condition and normality of the tilde structure", run_eq2_2),
    CheckDef("eq2.6", "conformal relation between tilde and base structures", run_eq2_6),
    CheckDef("eq2.7", "connection difference", _ambient_probe_check(
        "eq2.7", 2, lambda cp, X, Y: connection_difference_balance(cp, X, Y), order=1)),
    CheckDef("eq2.8", "conformal curvature relation", _ambient_probe_check(
        "eq2.8", 4, curvature_relation_balance)),
    CheckDef("eq2.9", "nabla phi", _ambient_probe_check(
        "eq2.9", 2, lambda cp, X, Y: dphi_relation_balance(cp, X, Y), order=1)),
    CheckDef("eq2.10", "nabla xi", _ambient_probe_check("eq2.10", 1, _eq2_10, order=1)),
    CheckDef("eq2.11", "nabla P", _structure_runner("eq2.11"), True),
    CheckDef("eq2.12", "nabla F", _structure_runner("eq2.12"), True, applicable=_needs(1, 1)),
    CheckDef("eq2.13", "nabla t", _structure_runner("eq2.13"), True, applicable=_needs(1, 1)),
    CheckDef("eq2.14", "nabla f", _structure_runner("eq2.14"), True, applicable=_needs(1, 1)),
    CheckDef("eq2.15", "Gauss equation", run_gauss, True, applicable=_needs(2, 0)),
    CheckDef("eq2.16", "Codazzi equation", run_codazzi, True, applicable=_needs(2, 1)),
    CheckDef("eq2.17", "Ricci equation", run_ricci, True, applicable=_needs(1, 2)),
    CheckDef("eq3.2", "h on invariant submanifolds", run_eq3_2, True, frozenset({"invariant", "xi_tangent"})),
    CheckDef("thm3.1", "minimality of invariant submanifolds", run_thm3_1, True,
             frozenset({"invariant", "xi_tangent"}), _odd_dimension),
    CheckDef("eq4.1", "shape operator of phi Y (anti-invariant)", run_eq4_1, True, frozenset({"anti_invariant"})),
    CheckDef("eq4.2", "commutator of shape operators", run_eq4_2, True, frozenset({"anti_invariant"})),
    CheckDef("eq4.4", "phi-curvature identity of the Sasakian tilde structure", _ambient_probe_check(
        "eq4.4", 3, tilde_phi_curvature_balance)),
    CheckDef("eq4.5", "phi-curvature identity of the base structure", _ambient_probe_check(
        "eq4.5", 3, phi_curvature_balances)),
    CheckDef("prop4.2", "flat normal connection criterion", run_prop4_2, True,
             frozenset({"anti_invariant", "xi_tangent"})),
    CheckDef("thm4.3", "recurrent normal curvature is flat", run_thm4_3, True, frozenset({"anti_invariant"}),
             _thm4_3_hypothesis),
    CheckDef("thm5.1", "integrability of D-perp", run_thm5_1, True, frozenset({"cr"})),
    CheckDef("thm5.3", "mixed totally geodesic vs totally geodesic leaves", run_thm5_3, True, frozenset({"cr"})),
]}

CHECK_IDS = tuple(REGISTRY)
AMBIENT_CHECKS = tuple(k for k, c in REGISTRY.items() if not c.needs_immersion)
# thm5.3 reports eq5.2 and the nested oracle even when its hypothesis fails.
REPORT_WHEN_HYPOTHESIS_FAILS = {"thm5.3": _thm5_3_hypothesis}


def conventions() -> dict:
    return {
        "curvature_sign": CURVATURE_SIGN,
        "deta_norm": DETA_NORMALIZATION,
        "normal_orientation": NORMAL_ORIENTATION,
        "phi": PHI_CONVENTION,
    }


# ==================================================================================
# Aggregation and the suite runner
# ==================================================================================

def _mag(v) -> float:
    a = np.asarray(v, dtype=float)
    return float(np.max(np.abs(a))) if a.size else 0.0


def _summarise_component(name: str, pairs: list, required: bool, tol: float) -> dict:
    abs_res, rel_res, disp_rel = [], [], []
    groups: dict = {}
    for display, derived in pairs:
        abs_res.append(derived.residual)
        rel_res.append(relative(derived.residual, derived.scale))
        if display is not None:
            disp_rel.append(relative(display.residual, display.scale))
        scale = max(derived.scale, display.scale if display is not None else 0.0, REL_FLOOR)
        labels = list(derived.lhs) + list(derived.rhs)
        if display is not None:
            labels += [k for k in list(display.lhs) + list(display.rhs) if k not in labels]
        for lab in labels:
            side = "lhs" if lab in derived.lhs or (display is not None and lab in display.lhs) else "rhs"
            a = derived.lhs.get(lab) if side == "lhs" else derived.rhs.get(lab)
            b = None
            if display is not None:
                b = display.lhs.get(lab) if side == "lhs" else display.rhs.get(lab)
            if display is None:
                dev = 0.0
            elif a is None or b is None:
                dev = _mag(a if b is None else b) / scale
            else:
                dev = _mag(np.asarray(a) - np.asarray(b)) / scale
            g = groups.setdefault(lab, {"label": lab, "side": side, "max_magnitude": 0.0, "max_residual": 0.0,
                                        "in_display": display is not None and b is not None,
                                        "in_derived": a is not None})
            g["max_magnitude"] = max(g["max_magnitude"], _mag(a if a is not None else b))
            g["max_residual"] = max(g["max_residual"], dev)
    errata = [g["label"] for g in groups.values() if g["max_residual"] > tol]
    return {
        "name": name,
        "required": required,
        "samples": len(pairs),
        "max_residual": max(abs_res, default=0.0),
        "mean_residual": float(np.mean(abs_res)) if abs_res else 0.0,
        "relative_residual": max(rel_res, default=0.0),
        "display_relative_residual": max(disp_rel) if disp_rel else None,
        "term_groups": list(groups.values()),
        "errata": errata,
    }


@dataclass(frozen=True)
class Target:
    space: str = "sasakian:n=1"
    factor: str = "const:c=0"
    immersion: Optional[str] = None
    checks: tuple = ("all",)


@dataclass
class RunConfig:
    targets: list = field(default_factory=list)
    samples: int = 8
    probes: int = 4
    seed: int = 0
    tol: float = 1e-7
    threads: Optional[int] = None

    def validate(self) -> None:
        if not self.tol > 0:
            raise ConfigError("tolerance must be positive")
        if self.samples < 1 or self.probes < 1:
            raise ConfigError("samples and probes must be at least 1")
        for t in self.targets:
            for c in t.checks:
                if c != "all" and c not in REGISTRY:
                    raise ConfigError(f"unknown check id {c!r}")

    def echo(self) -> dict:
        return {"targets": [asdict(t) | {"checks": list(t.checks)} for t in self.targets],
                "samples": self.samples, "probes": self.probes, "seed": self.seed, "tol": self.tol}


@dataclass(frozen=True)
class Job:
    check_id: str
    space: str
    factor: str
    immersion: Optional[str]


def expand_jobs(config: RunConfig) -> list:
    """Resolve targets into unique (check, space, factor, immersion) jobs, in a stable order."""
    jobs, seen = [], set()
    for t in config.targets:
        explicit = "all" not in t.checks
        ids = CHECK_IDS if not explicit else tuple(t.checks)
        for cid in ids:
            cdef = REGISTRY[cid]
            if cdef.needs_immersion and t.immersion is None and not explicit:
                continue
            imm = t.immersion if cdef.needs_immersion else None
            space = t.space
            if imm is not None:
                n_imm = build_immersion(imm)[1]
                n_sp = space_n(space)
                if n_sp is not None and n_sp != n_imm:
                    raise ConfigError(f"immersion {imm!r} lives in the n={n_imm} model, space is {space!r}")
            elif t.immersion is not None and space_n(space) is None:
                space = _with_n(space, build_immersion(t.immersion)[1])
            job = Job(cid, space, t.factor, imm)
            if job not in seen:
                seen.add(job)
                jobs.append(job)
    return jobs


def _with_n(space_id: str, n: int) -> str:
    name, params = parse_id(space_id)
    params = {"n": n, **params}
    return name + ":" + ",".join(f"{k}={v}" for k, v in params.items())


def _seed_for(seed: int, job: Job) -> np.random.SeedSequence:
    words = [zlib.crc32(s.encode()) for s in (job.check_id, job.space, job.factor, job.immersion or "")]
    return np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, *words])


class _Cache:
    """Spaces, submanifolds and classifications shared by the jobs of one run."""

    def __init__(self):
        self._lock = threading.Lock()
        self._items: dict = {}

    def get(self, key, make):
        with self._lock:
            if key in self._items:
                return self._items[key]
        value = make()
        with self._lock:
            return self._items.setdefault(key, value)


def run_job(job: Job, config: RunConfig, cache: Optional[_Cache] = None,
            recurrence: Optional[RecurrenceSpec] = None) -> dict:
    cache = cache or _Cache()
    cdef = REGISTRY[job.check_id]
    start = time.perf_counter()
    n_imm = None
    imm = None
    if job.immersion is not None:
        imm, n_imm = cache.get(("imm", job.immersion), lambda: build_immersion(job.immersion))
    space = cache.get(("space", job.space, job.factor, n_imm),
                      lambda: build_space(job.space, job.factor, n_imm))
    sub = cls = None
    if imm is not None:
        sub = cache.get(("sub", job.space, job.factor, job.immersion), lambda: ImmersedSubmanifold(space, imm))
        cls = cache.get(("cls", job.space, job.factor, job.immersion), lambda: classify(sub))
    ctx = Context(space, sub, config.samples, config.probes, config.tol,
                  np.random.default_rng(_seed_for(config.seed, job)), cls, recurrence or RecurrenceSpec())
    record = {
        "id": job.check_id,
        "title": cdef.title,
        "space": f"{job.space}|{job.factor}" if n_imm is None else f"{_with_n(job.space, n_imm)}|{job.factor}",
        "immersion": imm.name if imm is not None else None,
        "classification": ({k: bool(v) for k, v in sorted(cls.flags.items())} if cls is not None else None),
    }
    reason = cdef.why_not(ctx)
    soft = REPORT_WHEN_HYPOTHESIS_FAILS.get(job.check_id)
    soft_reason = soft(ctx) if (soft is not None and reason is None) else None
    if reason is not None:
        record.update(_empty_outcome("not_applicable", reason))
        record["seconds"] = time.perf_counter() - start
        return record
    acc = Accumulator(job.check_id)
    try:
        cdef.run(ctx, acc)
    except (GeometryError, np.linalg.LinAlgError) as exc:
        record.update(_empty_outcome("fail", f"error: {exc}"))
        record["seconds"] = time.perf_counter() - start
        return record
    record.update(_outcome(acc, config.tol, soft_reason))
    record["seconds"] = time.perf_counter() - start
    return record


def _empty_outcome(status: str, reason: str) -> dict:
    return {"applicable": status != "not_applicable", "status": status, "reason": reason,
            "pass": None if status == "not_applicable" else False, "max_residual": None, "mean_residual": None,
            "relative_residual": None, "display_relative_residual": None, "errata": [], "term_groups": [],
            "components": [], "metrics": {}, "conditions": {}, "notes": []}


def _outcome(acc: Accumulator, tol: float, soft_reason: Optional[str]) -> dict:
    comps = [_summarise_component(k, v, acc.required[k], tol) for k, v in acc.components.items()]
    req = [c for c in comps if c["required"]]
    closes = all(c["relative_residual"] <= tol for c in req) and all(acc.conditions.values())
    disp = [c["display_relative_residual"] for c in comps if c["display_relative_residual"] is not None]
    display_ok = all(d <= tol for d in disp)
    errata = [f"{c['name']}:{lab}" for c in comps for lab in c["errata"]]
    main = next((c for c in comps if c["name"] == acc.main), comps[0] if comps else None)
    if soft_reason is not None:
        status, passed = "not_applicable", None
    elif closes:
        status, passed = ("pass" if display_ok else "pass_with_erratum"), True
    else:
        status, passed = "fail", False
    term_groups = [{"label": g["label"] if c is main else f"{c['name']}:{g['label']}",
                    "max_residual": g["max_residual"], "max_magnitude": g["max_magnitude"]}
                   for c in comps for g in c["term_groups"]]
    return {
        "applicable": soft_reason is None,
        "status": status,
        "reason": soft_reason,
        "pass": passed,
        "max_residual": max((c["max_residual"] for c in req), default=0.0),
        "mean_residual": main["mean_residual"] if main else 0.0,
        "relative_residual": max((c["relative_residual"] for c in req), default=0.0),
        "display_relative_residual": max(disp) if disp else None,
        "errata": errata,
        "term_groups": term_groups,
        "components": comps,
        "metrics": dict(acc.metrics),
        "conditions": dict(acc.conditions),
        "notes": list(acc.notes),
    }


def thread_count(requested: Optional[int] = None) -> int:
    if requested is None:
        try:
            requested = int(os.environ.get("VERIFY_THREADS", "0"))
        except ValueError as exc:
            raise ConfigError("VERIFY_THREADS must be an integer") from exc
    if requested < 0:
        raise ConfigError("thread count must be >= 0")
    return requested or min(4, os.cpu_count() or 1)


def run_suite(config: RunConfig, recurrence: Optional[RecurrenceSpec] = None) -> dict:
    """Run every job of ``config``; the report is deterministic apart from the ``seconds`` fields."""
    config.validate()
    jobs = expand_jobs(config)
    cache = _Cache()
    start = time.perf_counter()
    workers = thread_count(config.threads)
    if workers == 1 or len(jobs) <= 1:
        records = [run_job(j, config, cache, recurrence) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda j: run_job(j, config, cache, recurrence), jobs))
    counts = {s: sum(r["status"] == s for r in records)
              for s in ("pass", "pass_with_erratum", "fail", "not_applicable")}
    return {
        "conventions": conventions(),
        "config": config.echo(),
        "seed": config.seed,
        "checks": [_jsonable(r) for r in records],
        "summary": {**counts, "all_passed": counts["fail"] == 0},
        "seconds": time.perf_counter() - start,
    }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def strip_timing(report):
    """The report without its wall-time fields (for determinism comparisons)."""
    if isinstance(report, dict):
        return {k: strip_timing(v) for k, v in report.items() if k != "seconds"}
    if isinstance(report, list):
        return [strip_timing(v) for v in report]
    return report


# -- the default suite -----------------------------------------------------------------

_AMBIENT_FACTORS = ("const:c=0.3", "linear_z:a=0.1", "linear_z:a=0.5", "quad:c=0.05", "quad:c=0.2")
_SUB_FACTORS = ("linear_z:a=0.3", "quad:c=0.2,center=[{c}]")


def _quad_center(n: int) -> str:
    vals = [0.3, -0.2, 0.1, 0.4, -0.1, 0.2, 0.15][: 2 * n + 1]
    return ";".join(f"{v:g}" for v in vals)


def default_targets() -> list:
    out = [Target(f"sasakian:n={n}", f, None, ("all",)) for n in (1, 2) for f in _AMBIENT_FACTORS]
    out += [Target("sasakian:n=3", "linear_z:a=0.3", None, ("eq2.1", "eq2.2", "eq2.6", "eq4.4"))]
    for imm in ("invariant_1_in_2", "invariant_1_in_3:warp=0.2", "anti_xaxis_r3", "anti_y0_plane_r3:warp=0.2",
                "anti_surface_r5:warp=0.3", "cr_r5", "cr_r7"):
        n = build_immersion(imm)[1]
        for f in _SUB_FACTORS:
            out.append(Target(f"sasakian:n={n}", f.format(c=_quad_center(n)), imm, ("all",)))
    out += [
        # Lee vector tangent to the invariant R^3 (f = a x1) and with a normal part (f = a x2).
        Target("sasakian:n=2", "linear:a=0.5,axis=0", "invariant_1_in_2", ("eq3.2", "thm3.1")),
        Target("sasakian:n=2", "linear:a=0.5,axis=1", "invariant_1_in_2", ("eq3.2", "thm3.1")),
        # Lee vector normal to the plane: the commutator display deviates in exactly one group.
        Target("sasakian:n=1", "linear:a=0.5,axis=1", "anti_y0_plane_r3", ("eq4.1", "eq4.2", "prop4.2")),
        Target("sasakian:n=1", "const:c=0.3", "anti_xaxis_r3", ("thm4.3",)),
        # grad f along y3, normal to the CR submanifold.
        Target("sasakian:n=3", "linear:a=0.5,axis=5", "cr_r7", ("thm5.1", "thm5.3")),
    ]
    return out


DEFAULT_TARGETS = tuple(default_targets())
