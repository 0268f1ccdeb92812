"""Chart-based Riemannian geometry evaluated through jets.

Index conventions used throughout the package:

* vectors are component arrays ``V[k]`` in the coordinate frame;
* ``christoffel[k, i, j]`` is Gamma^k_ij;
* ``riemann[a, b, c, e]`` is the e-component of R(d_a, d_b) d_c with
  R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z;
* the exterior derivative of a k-form is the unnormalised Palais sum
  (for a 1-form: X eta(Y) - Y eta(X) - eta([X, Y])).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import jets
from .jets import Jet

CURVATURE_SIGN = "R(X,Y)=[nabla_X,nabla_Y]-nabla_[X,Y]"
BOX_SHRINK = 0.1


class GeometryError(ValueError):
    pass


class AnalyticField:
    """A field given by a function that accepts a coordinate jet.

    ``fn`` receives a vector-valued :class:`Jet` ``x`` (index it as ``x[i]``)
    and returns a jet, a nested list of jets/floats, or a constant array.
    """

    def __init__(self, fn: Callable, name: str = ""):
        self.fn = fn
        self.name = name or getattr(fn, "__name__", "field")

    def jet(self, p, order: int) -> Jet:
        return evaluate(self, jets.variables(np.asarray(p, dtype=float), order))

    def __call__(self, p) -> np.ndarray:
        return self.jet(p, 0).value

    def __repr__(self) -> str:
        return f"AnalyticField({self.name})"


def evaluate(fld: AnalyticField, x: Jet) -> Jet:
    """Evaluate an analytic field on a coordinate jet, normalising the result to a Jet."""
    out = fld.fn(x)
    if isinstance(out, Jet):
        return out.truncate(x.order) if out.order > x.order else out
    if isinstance(out, (list, tuple)):
        try:
            return jets.stack(out)
        except jets.JetError:
            pass
    return Jet.constant(np.asarray(out, dtype=float), x.nvars, x.order)


def as_field(obj) -> "AnalyticField":
    if hasattr(obj, "jet"):
        return obj
    if callable(obj):
        return AnalyticField(obj)
    const = np.asarray(obj, dtype=float)
    return AnalyticField(lambda x: const, name="constant")


def field_jet(obj, p, order: int) -> Jet:
    """Jet of a field, a ready-made jet centred at ``p``, or a constant vector/array."""
    if isinstance(obj, Jet):
        return obj.truncate(order) if obj.order > order else obj
    if hasattr(obj, "jet"):
        return obj.jet(p, order)
    return Jet.constant(np.asarray(obj, dtype=float), len(p), order)


@dataclass(frozen=True)
class MetricChart:
    """A coordinate chart carrying a metric field.

    ``metric`` is any object with ``jet(p, order)`` returning a
    ``(dim, dim)`` jet (an :class:`AnalyticField` in the catalog).
    """

    dim: int
    metric: object
    domain_box: np.ndarray
    name: str = ""
    max_order: int = jets.MAX_ORDER

    def __post_init__(self):
        box = np.asarray(self.domain_box, dtype=float)
        if box.shape != (self.dim, 2) or np.any(box[:, 0] >= box[:, 1]):
            raise GeometryError("domain_box must be (dim, 2) with lo < hi")
        object.__setattr__(self, "domain_box", box)

    def metric_jet(self, p, order: int) -> Jet:
        if order > self.max_order:
            raise GeometryError(f"chart {self.name!r} provides metric jets up to order {self.max_order}")
        g = self.metric.jet(np.asarray(p, dtype=float), order)
        if g.shape != (self.dim, self.dim):
            raise GeometryError(f"metric has shape {g.shape}, expected {(self.dim, self.dim)}")
        return g

    def metric_at(self, p) -> np.ndarray:
        return self.metric_jet(p, 0).value

    def sampling_box(self) -> np.ndarray:
        lo, hi = self.domain_box[:, 0], self.domain_box[:, 1]
        pad = BOX_SHRINK * (hi - lo)
        return np.stack([lo + pad, hi - pad], axis=1)

    def sample_points(self, rng: np.random.Generator, count: int) -> np.ndarray:
        box = self.sampling_box()
        return box[:, 0] + (box[:, 1] - box[:, 0]) * rng.random((count, self.dim))

    def contains(self, p) -> bool:
        p = np.asarray(p, dtype=float)
        return bool(np.all(p >= self.domain_box[:, 0]) and np.all(p <= self.domain_box[:, 1]))


def check_metric(g: np.ndarray, sym_tol: float = 1e-12) -> None:
    if np.max(np.abs(g - g.T)) > sym_tol * max(1.0, np.max(np.abs(g))):
        raise GeometryError("metric is not symmetric")
    if np.linalg.eigvalsh(0.5 * (g + g.T))[0] <= 0:
        raise GeometryError("metric is not positive definite")


# -- connection and curvature from metric jets ------------------------------------

def christoffel_from_metric(g: Jet) -> Jet:
    """Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij); one order below ``g``."""
    dg = g.diff()  # dg[a, b, c] = d_c g_ab
    lowered = dg.transpose(1, 2, 0) + dg.transpose(1, 0, 2) - dg.transpose(2, 0, 1)
    ginv = jets.inv(g.truncate(dg.order))
    return 0.5 * jets.contract("kl,lij->kij", ginv, lowered)


def christoffel_first_kind(g: Jet) -> Jet:
    """Gamma_{l,ij} = 1/2 (d_i g_jl + d_j g_il - d_l g_ij), no metric inverse involved."""
    dg = g.diff()
    return 0.5 * (dg.transpose(1, 2, 0) + dg.transpose(1, 0, 2) - dg.transpose(2, 0, 1))


def riemann_from_christoffel(gamma: Jet):
    """riemann[a, b, c, e]; one order below ``gamma`` (a plain array at order 0)."""
    dgam = gamma.diff()  # dgam[e, b, c, a] = d_a Gamma^e_bc
    t1 = dgam.transpose(3, 1, 2, 0)
    quad = jets.contract("dbc,ead->abce", gamma.truncate(dgam.order), gamma.truncate(dgam.order))
    r = t1 - t1.transpose(1, 0, 2, 3) + quad - quad.transpose(1, 0, 2, 3)
    return r


@dataclass
class PointGeometry:
    """Levi-Civita data of a chart at one point, as jets of decreasing order."""

    p: np.ndarray
    g: Jet
    ginv: Jet
    gamma: Jet
    riem: Optional[Jet] = None

    @property
    def g0(self) -> np.ndarray:
        return self.g.value

    @property
    def ginv0(self) -> np.ndarray:
        return self.ginv.value

    @property
    def gamma0(self) -> np.ndarray:
        return self.gamma.value

    @property
    def riemann0(self) -> np.ndarray:
        if self.riem is None:
            raise GeometryError("curvature requires metric jets of order >= 2")
        return self.riem.value


def point_geometry(chart: MetricChart, p, order: int = 2) -> PointGeometry:
    """Metric (order ``order``), Christoffels (order-1), curvature (order-2) at ``p``."""
    if order < 1:
        raise GeometryError("Levi-Civita data needs metric jets of order >= 1")
    p = np.asarray(p, dtype=float)
    g = chart.metric_jet(p, order)
    check_metric(g.value)
    ginv = jets.inv(g)
    gamma = christoffel_from_metric(g)
    riem = riemann_from_christoffel(gamma) if gamma.order >= 1 else None
    return PointGeometry(p, g, ginv, gamma, riem)


def christoffel(chart: MetricChart, p) -> np.ndarray:
    return christoffel_from_metric(chart.metric_jet(p, 1)).value


def covariant_derivative(chart: MetricChart, Y, X, p) -> np.ndarray:
    """(nabla_X Y)^k = X^i d_i Y^k + Gamma^k_ij X^i Y^j at ``p``."""
    p = np.asarray(p, dtype=float)
    yj = field_jet(Y, p, 1)
    gam = christoffel(chart, p)
    X = np.asarray(X, dtype=float)
    return yj.gradient @ X + np.einsum("kij,i,j->k", gam, X, yj.value)


def riemann(chart: MetricChart, p, X, Y, Z) -> np.ndarray:
    rm = point_geometry(chart, p, 2).riemann0
    return np.einsum("abce,a,b,c->e", rm, X, Y, Z)


def curvature_4(chart: MetricChart, p, X, Y, Z, W) -> float:
    geo = point_geometry(chart, p, 2)
    return float(np.einsum("abce,a,b,c,ef,f->", geo.riemann0, X, Y, Z, geo.g0, W))


def sectional_curvature(geo: PointGeometry, X, Y) -> float:
    g = geo.g0
    num = np.einsum("abce,a,b,c,ef,f->", geo.riemann0, X, Y, Y, g, X)
    den = (X @ g @ X) * (Y @ g @ Y) - (X @ g @ Y) ** 2
    return float(num / den)


def gradient(chart: MetricChart, s, p) -> np.ndarray:
    """Metric dual of ds: g(grad s, X) = X(s)."""
    p = np.asarray(p, dtype=float)
    ds = field_jet(s, p, 1).gradient
    return jets.lu_inverse(chart.metric_at(p)) @ ds


def bracket(X, Y, p) -> np.ndarray:
    """Lie bracket [X, Y] at ``p`` of two vector fields (or constant vectors)."""
    xj, yj = field_jet(X, p, 1), field_jet(Y, p, 1)
    return yj.gradient @ xj.value - xj.gradient @ yj.value


def exterior_derivative_1form(eta, p, X, Y) -> float:
    """Palais sum X(eta(Y)) - Y(eta(X)) - eta([X, Y])."""
    p = np.asarray(p, dtype=float)
    ej, xj, yj = field_jet(eta, p, 1), field_jet(X, p, 1), field_jet(Y, p, 1)
    eta_y = jets.contract("i,i->", ej, yj)
    eta_x = jets.contract("i,i->", ej, xj)
    return float(eta_y.gradient @ xj.value - eta_x.gradient @ yj.value - ej.value @ bracket(X, Y, p))


def exterior_derivative_2form(Phi, p, X, Y, Z) -> float:
    """Palais sum for a 2-form; equals 3 dPhi under the alternating-average convention."""
    p = np.asarray(p, dtype=float)
    fj = field_jet(Phi, p, 1)
    vj = {k: field_jet(v, p, 1) for k, v in (("X", X), ("Y", Y), ("Z", Z))}
    vals = {k: v.value for k, v in vj.items()}

    def phi_jet(a, b):
        return jets.contract("j,j->", jets.contract("ij,i->j", fj, vj[a]), vj[b])

    phi0 = fj.value
    total = (phi_jet("Y", "Z").gradient @ vals["X"] + phi_jet("Z", "X").gradient @ vals["Y"]
             + phi_jet("X", "Y").gradient @ vals["Z"])
    total -= bracket(X, Y, p) @ phi0 @ vals["Z"]
    total -= bracket(Z, X, p) @ phi0 @ vals["Y"]
    total -= bracket(Y, Z, p) @ phi0 @ vals["X"]
    return float(total)


def exterior_derivative_2form_constant(dphi: np.ndarray, X, Y, Z) -> float:
    """Palais sum for coordinate-constant probes given dphi[i, j, k] = d_k Phi_ij."""
    return float(np.einsum("ijk,i,j,k->", dphi, Y, Z, X) + np.einsum("ijk,i,j,k->", dphi, Z, X, Y)
                 + np.einsum("ijk,i,j,k->", dphi, X, Y, Z))
