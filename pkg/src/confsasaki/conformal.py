"""Conformal Sasakian spaces: tilde structure, Lee data, B-tensor, transformation laws.

A space is built tilde-first.  Given a Sasakian structure (phi, xi~, eta~, g~)
and an exponent f, the base structure is

    g = exp(-f) g~,   eta = exp(-f/2) eta~,   xi = exp(f/2) xi~,   phi unchanged,

so that g~ = exp(f) g, eta~ = exp(f/2) eta and xi~ = exp(-f/2) xi hold exactly.
The Lee form is omega = df, always taken from the jet of f.

Every transformation law is exposed as a :class:`~confsasaki.terms.Balance`
in two forms: ``display`` follows the classical statement term by term, and
``derived`` is the form that follows from the construction.  They coincide
except where noted in :data:`ERRATA`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import jets
from .contact import AlmostContactStructure, StructurePoint
from .manifold import AnalyticField, MetricChart, evaluate
from .spaces import Factor, make_factor, sasakian_model
from .terms import Balance

# Term groups present only in the derived form, per law.
ERRATA = {
    "eq2.10": ("erratum:phi_coefficient",),
}


@dataclass(frozen=True)
class ConformalSasakianSpace:
    tilde: AlmostContactStructure
    factor: Factor
    name: str = ""
    base: AlmostContactStructure = field(init=False, compare=False, repr=False)
    f: AnalyticField = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        t = self.tilde
        f = self.factor.field()

        def metric(x):
            return jets.exp(-evaluate(f, x)) * evaluate(t.chart.metric, x)

        def eta(x):
            return jets.exp(-0.5 * evaluate(f, x)) * evaluate(t.eta, x)

        def xi(x):
            return jets.exp(0.5 * evaluate(f, x)) * evaluate(t.xi, x)

        chart = MetricChart(t.dim, AnalyticField(metric, "g"), t.chart.domain_box,
                            name=f"{t.chart.name}|{self.factor.label}")
        base = AlmostContactStructure(chart, t.phi, AnalyticField(xi, "xi"), AnalyticField(eta, "eta"),
                                      name=chart.name)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "f", f)
        if not self.name:
            object.__setattr__(self, "name", chart.name)

    @property
    def dim(self) -> int:
        return self.tilde.dim

    @property
    def chart(self) -> MetricChart:
        return self.base.chart

    def at(self, p, order: int = 2) -> "ConformalPoint":
        return ConformalPoint(self, np.asarray(p, dtype=float), order)


def conformal_space(n: int, family: str = "const", *, phi_scale: float = 1.0, metric_eps: float = 0.0,
                    **params) -> ConformalSasakianSpace:
    """Conformal Sasakian space over the R^{2n+1} model with a named factor family."""
    model = sasakian_model(n, phi_scale=phi_scale, metric_eps=metric_eps)
    return ConformalSasakianSpace(model, make_factor(family, model.dim, **params))


class ConformalPoint:
    """Base and tilde geometry plus Lee data at one point."""

    def __init__(self, space: ConformalSasakianSpace, p: np.ndarray, order: int = 2):
        self.space = space
        self.p = p
        self.order = order
        self.base = StructurePoint(space.base, p, order)
        self.tilde = StructurePoint(space.tilde, p, order)
        self.f_j = evaluate(space.f, jets.variables(p, order))

    # -- Lee data --------------------------------------------------------
    @property
    def f(self) -> float:
        return float(self.f_j.value)

    @property
    def omega(self) -> np.ndarray:
        return self.f_j.gradient

    @cached_property
    def omega_sharp(self) -> np.ndarray:
        return self.base.geo.ginv0 @ self.omega

    @property
    def lee_norm_sq(self) -> float:
        return float(self.omega @ self.omega_sharp)

    @cached_property
    def nabla_omega(self) -> np.ndarray:
        """nabla_omega[i, j] = (nabla_{d_i} omega)(d_j)."""
        return self.f_j.hessian - np.einsum("kij,k->ij", self.base.geo.gamma0, self.omega)

    @cached_property
    def nabla_omega_sharp(self) -> np.ndarray:
        """[k, i] = (nabla_{d_i} omega#)^k."""
        return self.base.geo.ginv0 @ self.nabla_omega.T

    @cached_property
    def B(self) -> np.ndarray:
        return self.nabla_omega - 0.5 * np.outer(self.omega, self.omega)

    def B_sharp(self, X) -> np.ndarray:
        """B(X, .)# with respect to g."""
        return self.base.geo.ginv0 @ (X @ self.B)

    # -- shorthands --------------------------------------------------------
    @property
    def g(self) -> np.ndarray:
        return self.base.g

    @property
    def phi(self) -> np.ndarray:
        return self.base.phi

    @property
    def xi(self) -> np.ndarray:
        return self.base.xi

    @property
    def eta(self) -> np.ndarray:
        return self.base.eta

    @property
    def ef(self) -> float:
        return float(np.exp(self.f))

    def gg(self, X, Y) -> float:
        return float(X @ self.g @ Y)

    def curvature_4(self, X, Y, Z, W) -> float:
        return float(np.einsum("abce,a,b,c,e->", self.base.riemann(), X, Y, Z, self.g @ W))

    def tilde_curvature_4(self, X, Y, Z, W) -> float:
        """g~(R~(X, Y)Z, W)."""
        return float(np.einsum("abce,a,b,c,e->", self.tilde.riemann(), X, Y, Z, self.tilde.g @ W))

    def tilde_riemann(self, X, Y, Z) -> np.ndarray:
        return np.einsum("abce,a,b,c->e", self.tilde.riemann(), X, Y, Z)

    def riemann(self, X, Y, Z) -> np.ndarray:
        return np.einsum("abce,a,b,c->e", self.base.riemann(), X, Y, Z)


# -- transformation laws ----------------------------------------------------------

def connection_difference_balance(cp: ConformalPoint, X, Y) -> Balance:
    lhs = np.einsum("kij,i,j->k", cp.tilde.geo.gamma0, X, Y)
    om = cp.omega
    return (Balance()
            .add_lhs("nabla~_X Y", lhs)
            .add("nabla_X Y", np.einsum("kij,i,j->k", cp.base.geo.gamma0, X, Y))
            .add("lee", 0.5 * ((om @ X) * Y + (om @ Y) * X - cp.gg(X, Y) * cp.omega_sharp)))


def curvature_relation_balance(cp: ConformalPoint, X, Y, Z, W) -> Balance:
    gg, B = cp.gg, cp.B
    bxz, byz, byw, bxw = X @ B @ Z, Y @ B @ Z, Y @ B @ W, X @ B @ W
    return (Balance()
            .add_lhs("exp(-f) R~", np.exp(-cp.f) * cp.tilde_curvature_4(X, Y, Z, W))
            .add("R", cp.curvature_4(X, Y, Z, W))
            .add("B", 0.5 * (bxz * gg(Y, W) - byz * gg(X, W) + byw * gg(X, Z) - bxw * gg(Y, Z)))
            .add("lee_norm", 0.25 * cp.lee_norm_sq * (gg(X, Z) * gg(Y, W) - gg(Y, Z) * gg(X, W))))


def _dphi_lee(cp: ConformalPoint, X, Y) -> np.ndarray:
    om, phi = cp.omega, cp.phi
    return -0.5 * ((om @ phi @ Y) * X - (om @ Y) * (phi @ X)
                   + cp.gg(X, Y) * (phi @ cp.omega_sharp) - cp.gg(X, phi @ Y) * cp.omega_sharp)


def dphi_relation_balance(cp: ConformalPoint, X, Y) -> Balance:
    lhs = np.einsum("kji,i,j->k", cp.base.nabla_phi, X, Y)
    return (Balance()
            .add_lhs("(nabla_X phi)Y", lhs)
            .add("sasakian", np.sqrt(cp.ef) * (cp.gg(X, Y) * cp.xi - (cp.eta @ Y) * X))
            .add("lee", _dphi_lee(cp, X, Y)))


def dxi_relation_balance(cp: ConformalPoint, X, form: str = "derived") -> Balance:
    """nabla_X xi.

    The display carries exp(-f/2) phi X; the construction gives -exp(f/2) phi X
    (for f = 0 this is the Sasakian identity nabla_X xi = -phi X).
    """
    lhs = cp.base.nabla_xi @ X
    bal = (Balance()
           .add_lhs("nabla_X xi", lhs)
           .add("phi", np.exp(-0.5 * cp.f) * (cp.phi @ X))
           .add("lee", 0.5 * ((cp.eta @ X) * cp.omega_sharp - (cp.omega @ cp.xi) * X)))
    if form == "derived":
        bal.add("erratum:phi_coefficient", -(np.exp(-0.5 * cp.f) + np.exp(0.5 * cp.f)) * (cp.phi @ X))
    return bal


# -- defect operations --------------------------------------------------------------

def connection_difference_defect(space: ConformalSasakianSpace, p, X, Y) -> np.ndarray:
    return connection_difference_balance(space.at(p, 1), np.asarray(X, float), np.asarray(Y, float)).defect


def curvature_relation_defect(space: ConformalSasakianSpace, p, X, Y, Z, W) -> float:
    v = [np.asarray(a, float) for a in (X, Y, Z, W)]
    return float(curvature_relation_balance(space.at(p, 2), *v).defect)


def dphi_relation_defect(space: ConformalSasakianSpace, p, X, Y) -> np.ndarray:
    return dphi_relation_balance(space.at(p, 1), np.asarray(X, float), np.asarray(Y, float)).defect


def dxi_relation_defect(space: ConformalSasakianSpace, p, X, form: str = "derived") -> np.ndarray:
    return dxi_relation_balance(space.at(p, 1), np.asarray(X, float), form).defect
