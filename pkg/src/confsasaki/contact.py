"""Almost contact metric structures and their tensorial diagnostics."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from . import jets
from .manifold import MetricChart, PointGeometry, field_jet, point_geometry

# [phi, phi] + NORMALITY_DETA_SIGN * (Palais d eta) (x) xi vanishes on Sasakian spaces.
# With d eta(X, Y) = 1/2 (X eta(Y) - Y eta(X) - eta([X, Y])) this is [phi, phi] + 2 d eta (x) xi.
NORMALITY_DETA_SIGN = 1.0
DETA_NORMALIZATION = "deta(X,Y)=1/2*(X eta(Y)-Y eta(X)-eta([X,Y]))"


@dataclass(frozen=True)
class AlmostContactStructure:
    """The quadruple (phi, xi, eta, g) as fields on a chart.

    ``phi`` yields ``(dim, dim)`` jets with ``phi[k, j]`` the k-component of
    phi(d_j); ``xi`` and ``eta`` yield ``(dim,)`` jets.
    """

    chart: MetricChart
    phi: object
    xi: object
    eta: object
    name: str = ""

    @property
    def dim(self) -> int:
        return self.chart.dim

    def at(self, p, order: int = 2) -> "StructurePoint":
        return StructurePoint(self, np.asarray(p, dtype=float), order)


class StructurePoint:
    """Structure tensors and their covariant derivatives at one point."""

    def __init__(self, acs: AlmostContactStructure, p: np.ndarray, order: int = 2):
        self.acs = acs
        self.p = p
        self.order = order
        self.geo: PointGeometry = point_geometry(acs.chart, p, order)
        self.phi_j = field_jet(acs.phi, p, order)
        self.xi_j = field_jet(acs.xi, p, order)
        self.eta_j = field_jet(acs.eta, p, order)

    @property
    def g(self) -> np.ndarray:
        return self.geo.g0

    @property
    def phi(self) -> np.ndarray:
        return self.phi_j.value

    @property
    def xi(self) -> np.ndarray:
        return self.xi_j.value

    @property
    def eta(self) -> np.ndarray:
        return self.eta_j.value

    @cached_property
    def nabla_phi(self) -> np.ndarray:
        """nabla_phi[k, j, i] = ((nabla_{d_i} phi) d_j)^k."""
        gam = self.geo.gamma0
        dphi = self.phi_j.gradient
        return (dphi + np.einsum("kil,lj->kji", gam, self.phi)
                - np.einsum("lij,kl->kji", gam, self.phi))

    @cached_property
    def nabla_xi(self) -> np.ndarray:
        """nabla_xi[k, i] = (nabla_{d_i} xi)^k."""
        return self.xi_j.gradient + np.einsum("kij,j->ki", self.geo.gamma0, self.xi)

    @cached_property
    def fundamental_form(self) -> np.ndarray:
        """Phi[i, j] = g(d_i, phi d_j)."""
        return self.g @ self.phi

    @cached_property
    def d_fundamental_form(self) -> np.ndarray:
        """dPhi[i, j, k] = d_k Phi_ij."""
        gj = self.geo.g.truncate(1)
        return jets.contract("ik,kj->ij", gj, self.phi_j.truncate(1)).gradient

    def riemann(self) -> np.ndarray:
        return self.geo.riemann0


class ContactResiduals(NamedTuple):
    phi_square: float
    eta_xi: float
    compatibility: float
    eta_phi: float

    def max(self) -> float:
        return max(self)


def almost_contact_residuals(sp: StructurePoint) -> ContactResiduals:
    phi, xi, eta, g = sp.phi, sp.xi, sp.eta, sp.g
    n = phi.shape[0]
    phi_sq = phi @ phi + np.eye(n) - np.outer(xi, eta)
    compat = phi.T @ g @ phi - g + np.outer(eta, eta)
    return ContactResiduals(
        phi_square=float(np.max(np.abs(phi_sq))),
        eta_xi=float(abs(eta @ xi - 1.0)),
        compatibility=float(np.max(np.abs(compat))),
        # eta o phi = 0 and phi xi = 0 are reported together
        eta_phi=float(max(np.max(np.abs(eta @ phi)), np.max(np.abs(phi @ xi)))),
    )


def verify_almost_contact(acs: AlmostContactStructure, p) -> ContactResiduals:
    """Defects of phi^2 = -Id + eta(x)xi, eta(xi) = 1, metric compatibility, eta o phi = 0."""
    return almost_contact_residuals(acs.at(p, order=1))


def fundamental_two_form(acs: AlmostContactStructure, p, X, Y) -> float:
    sp = acs.at(p, order=1)
    return float(X @ sp.fundamental_form @ Y)


def sasakian_defect_at(sp: StructurePoint, X, Y) -> np.ndarray:
    dphi_xy = np.einsum("kji,i,j->k", sp.nabla_phi, X, Y)
    return dphi_xy - (X @ sp.g @ Y) * sp.xi + (sp.eta @ Y) * X


def sasakian_defect(acs: AlmostContactStructure, p, X, Y) -> np.ndarray:
    """(nabla_X phi)Y - g(X, Y) xi + eta(Y) X; zero iff the structure is Sasakian at p."""
    return sasakian_defect_at(acs.at(p, order=1), np.asarray(X, float), np.asarray(Y, float))


def nijenhuis_at(sp: StructurePoint, X, Y) -> np.ndarray:
    """[phi, phi](X, Y) for coordinate-constant X, Y (their bracket vanishes)."""
    dphi = sp.phi_j.gradient  # dphi[k, j, i] = d_i phi^k_j
    phi = sp.phi

    def dir_deriv(v):
        return np.einsum("kji,i->kj", dphi, v)

    px, py = phi @ X, phi @ Y
    bracket_pxpy = dir_deriv(px) @ Y - dir_deriv(py) @ X
    bracket_pxy = -dir_deriv(Y) @ X
    bracket_xpy = dir_deriv(X) @ Y
    return bracket_pxpy - phi @ bracket_pxy - phi @ bracket_xpy


def deta_palais_at(sp: StructurePoint, X, Y) -> float:
    deta = sp.eta_j.gradient  # deta[j, i] = d_i eta_j
    return float(X @ deta.T @ Y - Y @ deta.T @ X)


def nijenhuis_normality_defect_at(sp: StructurePoint, X, Y, sign: float = NORMALITY_DETA_SIGN) -> np.ndarray:
    return nijenhuis_at(sp, X, Y) + sign * deta_palais_at(sp, X, Y) * sp.xi


def nijenhuis_normality_defect(acs: AlmostContactStructure, p, X, Y) -> np.ndarray:
    """[phi, phi](X, Y) + 2 d eta(X, Y) xi for coordinate-constant probes."""
    return nijenhuis_normality_defect_at(acs.at(p, order=1), np.asarray(X, float), np.asarray(Y, float))


def nijenhuis_by_brackets(acs: AlmostContactStructure, p, X, Y) -> np.ndarray:
    """[phi, phi](X, Y) through explicit Lie brackets of the fields phi X, phi Y.

    Independent of :func:`nijenhuis_at`; X and Y may be arbitrary vector fields.
    """
    from .manifold import AnalyticField, as_field, bracket, evaluate

    p = np.asarray(p, dtype=float)
    Xf, Yf = as_field(X), as_field(Y)
    phi_f = acs.phi
    pX = AnalyticField(lambda x: jets.matmul(evaluate(phi_f, x), evaluate(Xf, x)))
    pY = AnalyticField(lambda x: jets.matmul(evaluate(phi_f, x), evaluate(Yf, x)))
    phi0 = field_jet(phi_f, p, 0).value
    return (phi0 @ phi0 @ bracket(Xf, Yf, p) + bracket(pX, pY, p)
            - phi0 @ bracket(pX, Yf, p) - phi0 @ bracket(Xf, pY, p))
