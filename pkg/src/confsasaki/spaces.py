"""Catalog of example spaces and immersions.

Sasakian model on R^{2n+1} with coordinates (x^1..x^n, y^1..y^n, z)::

    eta~ = 1/2 (dz - sum y^i dx^i),   xi~ = 2 d/dz,
    g~   = eta~ (x) eta~ + 1/4 sum ((dx^i)^2 + (dy^i)^2),
    phi d/dx^j = -d/dy^j,   phi d/dy^j = d/dx^j + y^j d/dz,   phi d/dz = 0.

Conformal spaces are built tilde-first: the model above is the Sasakian
structure (phi, xi~, eta~, g~) and the base structure is obtained from
g = exp(-f) g~, eta = exp(-f/2) eta~, xi = exp(f/2) xi~.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from . import jets
from .contact import AlmostContactStructure
from .manifold import AnalyticField, MetricChart, evaluate

SUPPORTED_N = (1, 2, 3)
MODEL_HALF_WIDTH = 1.0

PHI_CONVENTION = "phi(d/dx^j)=-d/dy^j, phi(d/dy^j)=d/dx^j+y^j d/dz, phi(d/dz)=0"


class CatalogError(ValueError):
    pass


def coordinate_names(n: int) -> list[str]:
    return [f"x{i + 1}" for i in range(n)] + [f"y{i + 1}" for i in range(n)] + ["z"]


def _model_fields(n: int, phi_scale: float = 1.0, metric_eps: float = 0.0):
    dim = 2 * n + 1
    zi = 2 * n

    def eta_fn(x):
        comps = [0.0] * dim
        for i in range(n):
            comps[i] = -0.5 * x[n + i]
        comps[zi] = 0.5
        return comps

    def xi_fn(x):
        out = np.zeros(dim)
        out[zi] = 2.0
        return out

    def metric_fn(x):
        eta = jets.stack(eta_fn(x))
        flat = np.zeros((dim, dim))
        flat[: 2 * n, : 2 * n] = 0.25 * np.eye(2 * n)
        flat[0, 0] += metric_eps
        return jets.outer(eta, eta) + flat

    def phi_fn(x):
        rows = [[0.0] * dim for _ in range(dim)]
        for j in range(n):
            rows[n + j][j] = -1.0       # phi d/dx^j = -d/dy^j
            rows[j][n + j] = 1.0        # phi d/dy^j = d/dx^j + y^j d/dz
            rows[zi][n + j] = x[n + j]
        if phi_scale != 1.0:
            rows = [[phi_scale * v for v in row] for row in rows]
        return rows

    return metric_fn, phi_fn, xi_fn, eta_fn


def sasakian_model(n: int, half_width: float = MODEL_HALF_WIDTH, *, phi_scale: float = 1.0,
                   metric_eps: float = 0.0) -> AlmostContactStructure:
    """Standard Sasakian structure on R^{2n+1} (phi-sectional curvature -3).

    ``phi_scale`` and ``metric_eps`` deliberately corrupt the structure (phi
    multiplied by a constant, eps (dx^1)^2 added to g~); they exist so that
    the verification suite can be shown to fail on bad input.
    """
    if n not in SUPPORTED_N:
        raise CatalogError(f"unsupported model dimension n={n}; expected one of {SUPPORTED_N}")
    metric_fn, phi_fn, xi_fn, eta_fn = _model_fields(n, phi_scale, metric_eps)
    dim = 2 * n + 1
    box = np.array([[-half_width, half_width]] * dim)
    name = f"sasakian:n={n}"
    if phi_scale != 1.0:
        name += f",phi_scale={phi_scale:g}"
    if metric_eps:
        name += f",metric_eps={metric_eps:g}"
    chart = MetricChart(dim, AnalyticField(metric_fn, "g~"), box, name=name)
    return AlmostContactStructure(chart, AnalyticField(phi_fn, "phi"), AnalyticField(xi_fn, "xi~"),
                                  AnalyticField(eta_fn, "eta~"), name=name)


# -- conformal factors ---------------------------------------------------------------

@dataclass(frozen=True)
class Factor:
    """A conformal exponent f, selectable by family name and parameters."""

    family: str
    params: dict
    fn: Callable = field(compare=False, repr=False)

    def field(self) -> AnalyticField:
        return AnalyticField(self.fn, f"f[{self.label}]")

    @property
    def label(self) -> str:
        if not self.params:
            return self.family
        return self.family + ":" + ",".join(f"{k}={_fmt(v)}" for k, v in sorted(self.params.items()))

    @property
    def is_constant(self) -> bool:
        return self.family == "const"


def _fmt(v) -> str:
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ";".join(_fmt(x) for x in v) + "]"
    return f"{v:g}" if isinstance(v, float) else str(v)


FACTOR_FAMILIES = {
    "const": "f = c",
    "linear_z": "f = a * z (last coordinate)",
    "linear": "f = a * x^axis (any coordinate index)",
    "quad": "f = c * |x - center|^2 (center defaults to the origin)",
}


def make_factor(family: str, dim: int, **params) -> Factor:
    if family == "const":
        c = float(params.get("c", 0.0))
        return Factor("const", {"c": c}, lambda x: c)
    if family == "linear_z":
        a = float(params.get("a", 0.3))
        return Factor("linear_z", {"a": a}, lambda x: a * x[dim - 1])
    if family == "linear":
        a = float(params.get("a", 0.3))
        axis = int(params.get("axis", dim - 1))
        if not 0 <= axis < dim:
            raise CatalogError(f"factor axis {axis} out of range for dimension {dim}")
        return Factor("linear", {"a": a, "axis": axis}, lambda x: a * x[axis])
    if family == "quad":
        c = float(params.get("c", 0.1))
        center = np.asarray(params.get("center", np.zeros(dim)), dtype=float)
        if center.shape != (dim,):
            raise CatalogError("quad factor center must have one entry per coordinate")

        def quad(x):
            total = 0.0
            for i in range(dim):
                d = x[i] - center[i]
                total = d * d + total
            return c * total

        p = {"c": c}
        if np.any(center != 0):
            p["center"] = tuple(float(v) for v in center)
        return Factor("quad", p, quad)
    raise CatalogError(f"unknown factor family {family!r}; known: {sorted(FACTOR_FAMILIES)}")


# -- immersion catalog ---------------------------------------------------------------

SOURCE_HALF_WIDTH = 0.8
DEFAULT_WARP = 0.0


def _warp(u, m: int, eps: float):
    """Triangular reparametrisation v_i = u_i + eps * u_{i+1}^2 (identity when eps = 0)."""
    if eps == 0.0 or m == 1:
        return [u[i] for i in range(m)]
    return [u[i] + eps * u[i + 1] * u[i + 1] for i in range(m - 1)] + [u[m - 1]]


def _inclusion(slots: list, dim: int, eps: float):
    """Map source coordinate i to ambient coordinate slots[i]; other coordinates are 0."""
    m = len(slots)

    def fn(u):
        v = _warp(u, m, eps)
        out = [0.0] * dim
        for i, k in enumerate(slots):
            out[k] = v[i]
        return out

    return fn


@dataclass(frozen=True)
class _Entry:
    n: int
    slots: tuple
    declared: frozenset
    doc: str
    cr: Optional[tuple] = None  # (D rows, Dperp rows) as source index lists


def _ix(n: int, name: str) -> int:
    kind, i = name[0], int(name[1:]) - 1
    return {"x": i, "y": n + i}[kind] if kind != "z" else 2 * n


def _entries(params) -> dict:
    k = int(params.get("k", 1))
    n_inv = int(params.get("n", 2))
    inv_slots = tuple([_ix(n_inv, f"x{i + 1}") for i in range(k)] + [_ix(n_inv, f"y{i + 1}") for i in range(k)]
                      + [2 * n_inv])
    return {
        "invariant_k_in_n": _Entry(
            n_inv, inv_slots, frozenset({"invariant", "xi_tangent"}),
            f"(x1..x{k}, y1..y{k}, z) into R^{2 * n_inv + 1}, remaining coordinates zero"),
        "anti_xaxis_r3": _Entry(
            1, (_ix(1, "x1"),), frozenset({"anti_invariant", "xi_normal"}),
            "t -> (t, 0, 0); at y = 0 eta(d/dx) = 0, so xi is normal and phi(d/dx) = -d/dy is normal"),
        "anti_y0_plane_r3": _Entry(
            1, (_ix(1, "x1"), 2), frozenset({"anti_invariant", "xi_tangent"}),
            "(x, z) -> (x, 0, z); phi(d/dx) = -d/dy is normal, phi(d/dz) = 0"),
        "anti_surface_r5": _Entry(
            2, (_ix(2, "x1"), 4), frozenset({"anti_invariant", "xi_tangent"}),
            "(x1, z) -> (x1, 0, 0, 0, z) in R^5 ordered (x1, x2, y1, y2, z)"),
        "cr_r5": _Entry(
            2, (_ix(2, "x1"), _ix(2, "y1"), _ix(2, "x2"), 4), frozenset({"cr", "xi_tangent"}),
            "{y2 = 0} in R^5 with source (x1, y1, x2, z); D = span(d/dx1, d/dy1, d/dz), D-perp = span(d/dx2)",
            cr=((0, 1, 3), (2,))),
        "cr_r7": _Entry(
            3, (_ix(3, "x1"), _ix(3, "y1"), _ix(3, "x2"), _ix(3, "x3"), 6), frozenset({"cr", "xi_tangent"}),
            "{y2 = y3 = 0} in R^7 with source (x1, y1, x2, x3, z); D = span(d/dx1, d/dy1, d/dz), "
            "D-perp = span(d/dx2, d/dx3)",
            cr=((0, 1, 4), (2, 3))),
    }


IMMERSION_IDS = ("invariant_k_in_n", "anti_xaxis_r3", "anti_y0_plane_r3", "anti_surface_r5",
                 "cr_r5", "cr_r7", "identity")


def immersion_model_n(imm_id: str, **params) -> int:
    """Dimension parameter n of the ambient model an immersion lives in."""
    if imm_id == "identity":
        return int(params.get("n", 1))
    base, parsed = parse_immersion_id(imm_id, params)
    return _entries(parsed)[base].n


def parse_immersion_id(imm_id: str, params: Optional[dict] = None):
    """Accept ``invariant_1_in_2`` as shorthand for ``invariant_k_in_n`` with k=1, n=2."""
    params = dict(params or {})
    if imm_id.startswith("invariant_") and imm_id != "invariant_k_in_n":
        parts = imm_id.split("_")
        if len(parts) != 4 or parts[2] != "in":
            raise CatalogError(f"malformed invariant immersion id {imm_id!r}")
        params.setdefault("k", int(parts[1]))
        params.setdefault("n", int(parts[3]))
        imm_id = "invariant_k_in_n"
    return imm_id, params


def immersion_catalog(imm_id: str, **params):
    """Catalog immersion by id.  ``warp`` (float) reparametrises non-CR sources nonlinearly.

    The entry is checked against its declared classes (on the model with
    f = 0; the classes other than Lee tangency do not depend on f) before it
    is returned.
    """
    key = (imm_id, tuple(sorted(params.items())))
    return _verified_immersion(key)


@lru_cache(maxsize=None)
def _verified_immersion(key):
    from .conformal import conformal_space
    from .submanifold import ImmersedSubmanifold, verify_declared

    imm_id, items = key
    params = dict(items)
    imm = _build_immersion(imm_id, **params)
    verify_declared(ImmersedSubmanifold(conformal_space(immersion_model_n(imm_id, **params)), imm))
    return imm


def _build_immersion(imm_id: str, **params):
    from .submanifold import CRSpec, Immersion, identity_immersion

    if imm_id == "identity":
        n = int(params.get("n", 1))
        return identity_immersion(2 * n + 1, [[-MODEL_HALF_WIDTH, MODEL_HALF_WIDTH]] * (2 * n + 1),
                                  name=f"identity:n={n}")
    base, parsed = parse_immersion_id(imm_id, params)
    entries = _entries(parsed)
    if base not in entries:
        raise CatalogError(f"unknown immersion id {imm_id!r}; known: {IMMERSION_IDS}")
    e = entries[base]
    if base == "invariant_k_in_n" and not 1 <= int(parsed.get("k", 1)) < e.n:
        raise CatalogError("invariant_k_in_n needs 1 <= k < n")
    if e.n not in SUPPORTED_N:
        raise CatalogError(f"unsupported ambient n={e.n}")
    eps = float(parsed.get("warp", DEFAULT_WARP))
    if e.cr is not None and eps != 0.0:
        raise CatalogError("CR entries are defined with constant distribution spans; warp is not supported")
    m, dim = len(e.slots), 2 * e.n + 1
    cr = None
    if e.cr is not None:
        eye = np.eye(m)
        cr = CRSpec(eye[list(e.cr[0])], eye[list(e.cr[1])])
    label = imm_id if base != "invariant_k_in_n" else f"invariant_{parsed.get('k', 1)}_in_{e.n}"
    if eps:
        label += f":warp={eps:g}"
    return Immersion(label, m, dim, AnalyticField(_inclusion(list(e.slots), dim, eps), label),
                     np.array([[-SOURCE_HALF_WIDTH, SOURCE_HALF_WIDTH]] * m), declared=e.declared, cr=cr,
                     doc=e.doc)
