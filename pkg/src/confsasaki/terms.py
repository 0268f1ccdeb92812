"""Two-sided equations assembled from named term groups.

An identity ``LHS = sum of RHS groups`` is stored as a :class:`Balance`.
Keeping the groups separate lets a report say which group of a long display
is responsible for a mismatch, and gives a natural scale (the largest
individual term) for relative residuals.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Denominator floor for relative residuals.  Probes are O(1), so every term of
# a nondegenerate identity is far above this; when all terms vanish identically
# the residual is pure roundoff (~1e-16) and a tiny floor would turn it into a
# spurious O(1e-4) relative error.
REL_FLOOR = 1e-4


def _norm(v) -> float:
    a = np.asarray(v, dtype=float)
    return float(np.max(np.abs(a))) if a.size else 0.0


@dataclass
class Balance:
    lhs: dict = field(default_factory=dict)
    rhs: dict = field(default_factory=dict)
    refs: dict = field(default_factory=dict)

    def add_lhs(self, label: str, value) -> "Balance":
        self.lhs[label] = np.asarray(value, dtype=float)
        return self

    def add(self, label: str, value) -> "Balance":
        self.rhs[label] = np.asarray(value, dtype=float)
        return self

    def reference(self, label: str, value) -> "Balance":
        """A magnitude that sets the scale without entering the defect (for "X = 0" statements)."""
        self.refs[label] = np.asarray(value, dtype=float)
        return self

    def without(self, *labels: str) -> "Balance":
        return Balance(dict(self.lhs), {k: v for k, v in self.rhs.items() if k not in labels}, dict(self.refs))

    def copy(self) -> "Balance":
        return Balance(dict(self.lhs), dict(self.rhs), dict(self.refs))

    @property
    def defect(self) -> np.ndarray:
        left = sum(self.lhs.values()) if self.lhs else 0.0
        right = sum(self.rhs.values()) if self.rhs else 0.0
        return np.asarray(left - right, dtype=float)

    @property
    def residual(self) -> float:
        return _norm(self.defect)

    @property
    def scale(self) -> float:
        mags = [_norm(v) for v in list(self.lhs.values()) + list(self.rhs.values()) + list(self.refs.values())]
        return max(mags, default=0.0)

    def group_sizes(self) -> dict:
        out = {f"lhs:{k}": _norm(v) for k, v in self.lhs.items()}
        out.update({k: _norm(v) for k, v in self.rhs.items()})
        return out


def relative(residual: float, scale: float) -> float:
    return residual / max(scale, REL_FLOOR)
