"""Truncated multivariate Taylor arithmetic ("jets") up to third order.

A :class:`Jet` holds an array-valued field together with its first, second
and third partial derivatives at one base point.  Coefficient block ``k``
has shape ``field_shape + (n,) * k`` and stores plain partial derivatives
(not divided by factorials), so ``c[2][..., i, j]`` is d^2/dx_i dx_j.

Arithmetic follows the Leibniz rule and the Faa di Bruno formula, truncated
at ``min`` of the operand orders.  Plain floats and ndarrays act as
constants of infinite order.
"""

from __future__ import annotations

import string
from typing import Sequence

import numpy as np
import scipy.linalg

MAX_ORDER = 3
COND_LIMIT = 1e12

_DERIV_LETTERS = "PQR"


class JetError(ValueError):
    pass


def _expand(a: np.ndarray, k: int) -> np.ndarray:
    return a.reshape(a.shape + (1,) * k)


def _sym3_21(t: np.ndarray) -> np.ndarray:
    # t[..., p, q, r] = A_pq B_r  ->  A_pq B_r + A_pr B_q + A_qr B_p
    return t + np.swapaxes(t, -1, -2) + np.moveaxis(t, -1, -3)


def _sym3_12(t: np.ndarray) -> np.ndarray:
    # t[..., p, q, r] = A_p B_qr  ->  A_p B_qr + A_q B_pr + A_r B_pq
    return t + np.swapaxes(t, -3, -2) + np.moveaxis(t, -3, -1)


class Jet:
    """Array-valued truncated Taylor expansion at a point.

    Instances are treated as immutable values.
    """

    __slots__ = ("c", "nvars")
    __array_priority__ = 1000

    def __init__(self, coeffs: Sequence[np.ndarray], nvars: int):
        if not 1 <= len(coeffs) <= MAX_ORDER + 1:
            raise JetError(f"jet order must be in 0..{MAX_ORDER}")
        c0 = np.asarray(coeffs[0], dtype=float)
        self.c = (c0,) + tuple(np.asarray(b, dtype=float) for b in coeffs[1:])
        self.nvars = nvars

    # -- construction -----------------------------------------------------
    @classmethod
    def constant(cls, value, nvars: int, order: int) -> "Jet":
        v = np.asarray(value, dtype=float)
        return cls([v] + [np.zeros(v.shape + (nvars,) * k) for k in range(1, order + 1)], nvars)

    @property
    def order(self) -> int:
        return len(self.c) - 1

    @property
    def shape(self) -> tuple:
        return self.c[0].shape

    @property
    def value(self) -> np.ndarray:
        return self.c[0]

    @property
    def gradient(self) -> np.ndarray:
        return self.c[1]

    @property
    def hessian(self) -> np.ndarray:
        return self.c[2]

    @property
    def third(self) -> np.ndarray:
        return self.c[3]

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise JetError(f"cannot raise jet order {self.order} to {order}")
        return Jet(self.c[: order + 1], self.nvars)

    def __repr__(self) -> str:
        return f"Jet(shape={self.shape}, nvars={self.nvars}, order={self.order}, value={self.c[0]!r})"

    # -- array-like structure ----------------------------------------------
    def __len__(self) -> int:
        return self.shape[0]

    def __getitem__(self, idx) -> "Jet":
        if not isinstance(idx, tuple):
            idx = (idx,)
        if any(i is Ellipsis for i in idx):
            raise JetError("Ellipsis indexing is not supported on jets")
        if len(idx) > len(self.shape):
            raise JetError("too many indices for jet field shape")
        return Jet([b[idx] for b in self.c], self.nvars)

    def transpose(self, *axes) -> "Jet":
        nf = len(self.shape)
        if not axes:
            axes = tuple(reversed(range(nf)))
        return Jet([np.transpose(b, tuple(axes) + tuple(range(nf, nf + k))) for k, b in enumerate(self.c)], self.nvars)

    @property
    def T(self) -> "Jet":
        return self.transpose()

    def reshape(self, *shape) -> "Jet":
        if len(shape) == 1 and isinstance(shape[0], tuple):
            shape = shape[0]
        return Jet([b.reshape(tuple(shape) + (self.nvars,) * k) for k, b in enumerate(self.c)], self.nvars)

    def sum(self, axis: int) -> "Jet":
        nf = len(self.shape)
        if axis < 0:
            axis += nf
        return Jet([b.sum(axis=axis) for b in self.c], self.nvars)

    # -- derivative shift --------------------------------------------------
    def diff(self) -> "Jet":
        """Jet of the gradient field, one order lower; derivative index appended last."""
        if self.order == 0:
            raise JetError("cannot differentiate an order-0 jet")
        return Jet(self.c[1:], self.nvars)

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.nvars != self.nvars:
                raise JetError("jets live in different variable sets")
            return other
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            c0 = self.c[0] + np.asarray(other, dtype=float)
            if c0.shape == self.shape:
                return Jet((c0,) + self.c[1:], self.nvars)
            return Jet([c0] + [np.broadcast_to(b, c0.shape + b.shape[b.ndim - k:]).copy()
                               for k, b in enumerate(self.c) if k], self.nvars)
        k = min(self.order, o.order)
        c0 = self.c[0] + o.c[0]
        out = [c0]
        for j in range(1, k + 1):
            out.append(self.c[j] + o.c[j] if self.shape == o.shape else _bcast_add(self.c[j], o.c[j], j))
        return Jet(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Jet([-b for b in self.c], self.nvars)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            a = np.asarray(other, dtype=float)
            return Jet([b * _expand(a, k) for k, b in enumerate(self.c)], self.nvars)
        return contract("...,...->...", self, o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            a = np.asarray(other, dtype=float)
            if np.any(a == 0):
                raise ZeroDivisionError("jet division by zero")
            return self * (1.0 / a)
        return self * reciprocal(o)

    def __rtruediv__(self, other):
        return reciprocal(self) * other

    def __pow__(self, p):
        return power(self, p)

    def __matmul__(self, other):
        return matmul(self, other)

    def __rmatmul__(self, other):
        return matmul(other, self)


def _bcast_add(a: np.ndarray, b: np.ndarray, k: int) -> np.ndarray:
    # field shapes may broadcast; derivative axes are trailing and equal
    sa, sb = a.shape[: a.ndim - k], b.shape[: b.ndim - k]
    s = np.broadcast_shapes(sa, sb)
    return np.broadcast_to(a, s + a.shape[a.ndim - k:]) + np.broadcast_to(b, s + b.shape[b.ndim - k:])


# -- lifting ------------------------------------------------------------------

def lift_coordinate(i: int, point: Sequence[float], order: int) -> Jet:
    """Jet of the coordinate function x_i at ``point``."""
    point = np.asarray(point, dtype=float)
    n = point.shape[0]
    if not 0 <= i < n:
        raise JetError(f"coordinate index {i} out of range for dimension {n}")
    if not 0 <= order <= MAX_ORDER:
        raise JetError(f"order must be in 0..{MAX_ORDER}")
    coeffs = [np.asarray(point[i])]
    if order >= 1:
        e = np.zeros(n)
        e[i] = 1.0
        coeffs.append(e)
    for k in range(2, order + 1):
        coeffs.append(np.zeros((n,) * k))
    return Jet(coeffs, n)


def variables(point: Sequence[float], order: int) -> Jet:
    """All coordinate jets at ``point`` as one vector-valued jet."""
    point = np.asarray(point, dtype=float)
    n = point.shape[0]
    if not 0 <= order <= MAX_ORDER:
        raise JetError(f"order must be in 0..{MAX_ORDER}")
    coeffs = [point.copy()]
    if order >= 1:
        coeffs.append(np.eye(n))
    for k in range(2, order + 1):
        coeffs.append(np.zeros((n,) * (k + 1)))
    return Jet(coeffs, n)


def _find_jet(items):
    for it in items:
        if isinstance(it, Jet):
            return it
        if isinstance(it, (list, tuple)):
            found = _find_jet(it)
            if found is not None:
                return found
    return None


def stack(items, axis: int = 0) -> Jet:
    """Stack (possibly nested) sequences of jets/floats into one jet.

    Plain numbers become constant jets; the result order is the lowest
    order among the jet entries.
    """
    if isinstance(items, Jet):
        return items
    if not isinstance(items, (list, tuple)):
        raise JetError("stack expects a (nested) list of jets")
    ref = _find_jet(items)
    if ref is None:
        raise JetError("stack needs at least one jet entry")
    n = ref.nvars

    def order_of(it):
        if isinstance(it, Jet):
            return it.order
        if isinstance(it, (list, tuple)):
            return min((order_of(x) for x in it), default=MAX_ORDER)
        return MAX_ORDER

    k = order_of(items)

    def build(it):
        if isinstance(it, (list, tuple)):
            parts = [build(x) for x in it]
            shape = np.broadcast_shapes(*[q.shape for q in parts])
            return Jet([np.stack([np.broadcast_to(q.c[o], shape + (n,) * o) for q in parts], axis=axis)
                        for o in range(k + 1)], n)
        if isinstance(it, Jet):
            if it.nvars != n:
                raise JetError("jets live in different variable sets")
            return it.truncate(k)
        return Jet.constant(it, n, k)

    return build(items)


# -- bilinear products ----------------------------------------------------------

def _split(spec: str):
    ins, out = spec.split("->")
    a, b = ins.split(",")
    return a, b, out


def contract(spec: str, a, b):
    """Bilinear einsum of two jets (or a jet and a constant array).

    The field subscripts follow numpy.einsum; derivative axes are handled
    internally through the Leibniz rule.
    """
    sa, sb, so = _split(spec)
    ja, jb = isinstance(a, Jet), isinstance(b, Jet)
    if not ja and not jb:
        return np.einsum(spec, a, b)
    P, Q, R = _DERIV_LETTERS
    if not ja or not jb:
        jet = a if ja else b
        const = np.asarray(b if ja else a, dtype=float)
        out = []
        for k, blk in enumerate(jet.c):
            d = "PQR"[:k]
            if ja:
                out.append(np.einsum(f"{sa}{d},{sb}->{so}{d}", blk, const))
            else:
                out.append(np.einsum(f"{sa},{sb}{d}->{so}{d}", const, blk))
        return Jet(out, jet.nvars)
    if a.nvars != b.nvars:
        raise JetError("jets live in different variable sets")
    k = min(a.order, b.order)
    A, B = a.c, b.c

    def e(x, dx, y, dy, do):
        return np.einsum(f"{sa}{dx},{sb}{dy}->{so}{do}", x, y)

    out = [e(A[0], "", B[0], "", "")]
    if k >= 1:
        out.append(e(A[1], P, B[0], "", P) + e(A[0], "", B[1], P, P))
    if k >= 2:
        t11 = e(A[1], P, B[1], Q, P + Q)
        out.append(e(A[2], P + Q, B[0], "", P + Q) + e(A[0], "", B[2], P + Q, P + Q)
                   + t11 + np.swapaxes(t11, -1, -2))
    if k >= 3:
        out.append(e(A[3], P + Q + R, B[0], "", P + Q + R) + e(A[0], "", B[3], P + Q + R, P + Q + R)
                   + _sym3_21(e(A[2], P + Q, B[1], R, P + Q + R))
                   + _sym3_12(e(A[1], P, B[2], Q + R, P + Q + R)))
    return Jet(out, a.nvars)


def matmul(a, b):
    """Matrix product over the last axis of ``a`` and the first field axis of ``b``."""
    sa = a.shape if isinstance(a, Jet) else np.shape(a)
    sb = b.shape if isinstance(b, Jet) else np.shape(b)
    la = string.ascii_lowercase[: len(sa)]
    lb = string.ascii_lowercase[len(sa) - 1: len(sa) - 1 + len(sb)]
    lo = la[:-1] + lb[1:]
    return contract(f"{la},{lb}->{lo}", a, b)


def outer(a, b):
    sa = a.shape if isinstance(a, Jet) else np.shape(a)
    sb = b.shape if isinstance(b, Jet) else np.shape(b)
    la = string.ascii_lowercase[: len(sa)]
    lb = string.ascii_lowercase[len(sa): len(sa) + len(sb)]
    return contract(f"{la},{lb}->{la}{lb}", a, b)


# -- univariate functions ---------------------------------------------------------

def compose_univariate(a: Jet, derivs: Sequence[np.ndarray]) -> Jet:
    """Apply a scalar function elementwise given its derivatives at ``a.value``.

    ``derivs[k]`` is the k-th derivative of the outer function evaluated at
    ``a.value`` (only the first ``a.order + 1`` are used).
    """
    k = a.order
    d = [np.asarray(x, dtype=float) for x in derivs]
    out = [np.broadcast_to(d[0], a.shape).copy()]
    if k >= 1:
        a1 = a.c[1]
        out.append(_expand(d[1], 1) * a1)
    if k >= 2:
        a11 = np.einsum("...p,...q->...pq", a1, a1)
        out.append(_expand(d[2], 2) * a11 + _expand(d[1], 2) * a.c[2])
    if k >= 3:
        a111 = np.einsum("...pq,...r->...pqr", a11, a1)
        t21 = np.einsum("...pq,...r->...pqr", a.c[2], a1)
        out.append(_expand(d[3], 3) * a111 + _expand(d[2], 3) * _sym3_21(t21) + _expand(d[1], 3) * a.c[3])
    return Jet(out, a.nvars)


def exp(a):
    if not isinstance(a, Jet):
        return np.exp(a)
    e = np.exp(a.value)
    return compose_univariate(a, [e, e, e, e])


def sqrt(a):
    if not isinstance(a, Jet):
        if np.any(np.asarray(a) <= 0):
            raise JetError("sqrt of non-positive value")
        return np.sqrt(a)
    v = a.value
    if np.any(v <= 0):
        raise JetError("sqrt of non-positive value")
    s = np.sqrt(v)
    return compose_univariate(a, [s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v * v)])


def power(a, p: float):
    if not isinstance(a, Jet):
        return np.power(a, p)
    v = a.value
    if float(p) != int(p) and np.any(v <= 0):
        raise JetError("non-integer power of non-positive value")
    if p < 0 and np.any(v == 0):
        raise ZeroDivisionError("negative power of zero")
    if p == 0:
        return Jet.constant(np.ones_like(v), a.nvars, a.order)
    if p == 1:
        return a
    if p == 2:
        return a * a
    ds = [np.power(v, p), p * np.power(v, p - 1), p * (p - 1) * np.power(v, p - 2),
          p * (p - 1) * (p - 2) * np.power(v, p - 3)]
    return compose_univariate(a, ds)


def reciprocal(a):
    if not isinstance(a, Jet):
        return 1.0 / np.asarray(a, dtype=float)
    v = a.value
    if np.any(v == 0):
        raise ZeroDivisionError("jet division by zero value")
    r = 1.0 / v
    return compose_univariate(a, [r, -r * r, 2 * r ** 3, -6 * r ** 4])


# -- linear algebra ----------------------------------------------------------------

def lu_inverse(m: np.ndarray, cond_limit: float = COND_LIMIT) -> np.ndarray:
    """Inverse of a small dense matrix by LU with partial pivoting and a condition guard."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise JetError("lu_inverse expects a square matrix")
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond > cond_limit:
        raise np.linalg.LinAlgError(f"matrix is singular to working precision (condition {cond:.3g})")
    lu, piv = scipy.linalg.lu_factor(m, check_finite=True)
    return scipy.linalg.lu_solve((lu, piv), np.eye(m.shape[0]))


def inv(a, cond_limit: float = COND_LIMIT):
    """Inverse of a square matrix-valued jet.

    Uses the terminating Neumann series A^-1 = sum_k (-A0^-1 D)^k A0^-1 where
    D = A - A0 has zero value, hence is nilpotent to the jet order.
    """
    if not isinstance(a, Jet):
        return lu_inverse(a, cond_limit)
    if len(a.shape) != 2:
        raise JetError("inv expects a matrix-valued jet")
    a0inv = lu_inverse(a.value, cond_limit)
    dpart = Jet([np.zeros_like(a.c[0])] + list(a.c[1:]), a.nvars)
    m = matmul(-a0inv, dpart)
    term = Jet.constant(a0inv, a.nvars, a.order)
    acc = term
    for _ in range(a.order):
        term = matmul(m, term)
        acc = acc + term
    return acc


# -- composition with a multivariate Taylor polynomial --------------------------

def compose(outer_jet: Jet, inner: Jet) -> Jet:
    """Evaluate the Taylor polynomial ``outer_jet`` (in x) at x = ``inner`` (a jet in u).

    ``inner`` must be vector-valued with ``outer_jet.nvars`` entries and its
    value must equal the base point of ``outer_jet`` (the caller guarantees
    this; only the shape is checked).  The result is a jet in u of order
    ``min(outer_jet.order, inner.order)``.
    """
    if inner.shape != (outer_jet.nvars,):
        raise JetError("inner jet must provide one entry per outer variable")
    k = min(outer_jet.order, inner.order)
    delta = Jet([np.zeros_like(inner.c[0])] + list(inner.c[1: k + 1]), inner.nvars)
    fs = outer_jet.shape
    lf = string.ascii_lowercase[: len(fs)]
    res = Jet.constant(outer_jet.c[0], inner.nvars, k)
    if k >= 1:
        res = res + contract(f"{lf}x,x->{lf}", outer_jet.c[1], delta)
    if k >= 2:
        dd = outer(delta, delta)
        res = res + 0.5 * contract(f"{lf}xy,xy->{lf}", outer_jet.c[2], dd)
    if k >= 3:
        ddd = outer(dd, delta)
        res = res + (1.0 / 6.0) * contract(f"{lf}xyz,xyz->{lf}", outer_jet.c[3], ddd)
    return res


def value_of(a) -> np.ndarray:
    return a.value if isinstance(a, Jet) else np.asarray(a, dtype=float)
