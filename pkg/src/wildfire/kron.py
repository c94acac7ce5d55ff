"""Kronecker-structured 2D operator application and solves.

A coefficient grid ``T`` is stored x-major with shape ``(n_x, n_y)``: row ``i``
is the (contiguous) y-line at x-dof ``i``. The pairing is fixed once here and
used everywhere: the first operator factor always acts along axis 0 (x), the
second along axis 1 (y), i.e.

    out[i, j] = sum_{k, l} A_x[i, k] * A_y[j, l] * T[k, l]

``kron_solve`` inverts that action via independent banded 1D solves: first all
y-lines, then all x-lines (the order is fixed for determinism; both orders
agree up to rounding).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bspline import BsplineSpace
from .errors import ConfigurationError
from .operators1d import Banded1DOperator, BandedLU

__all__ = ["CoefficientGrid", "kron_apply", "kron_solve"]


@dataclass
class CoefficientGrid:
    """B-spline coefficient tensor for a tensor-product space."""

    values: np.ndarray
    space_x: BsplineSpace
    space_y: BsplineSpace

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        expected = (self.space_x.n_dof, self.space_y.n_dof)
        if self.values.shape != expected:
            raise ConfigurationError(
                f"grid shape {self.values.shape} does not match spaces {expected}"
            )

    @property
    def finite(self) -> bool:
        """NaN/Inf detection; the divergence sentinel for the stability study."""
        return bool(np.isfinite(self.values).all())

    def copy(self) -> "CoefficientGrid":
        return CoefficientGrid(self.values.copy(), self.space_x, self.space_y)


def _values(grid) -> np.ndarray:
    return grid.values if isinstance(grid, CoefficientGrid) else np.asarray(grid, dtype=np.float64)


def kron_apply(a_x: Banded1DOperator, a_y: Banded1DOperator, grid) -> np.ndarray:
    """Apply ``(A_x (x) A_y)`` to a coefficient grid."""
    t = _values(grid)
    if t.shape != (a_x.n, a_y.n):
        raise ConfigurationError(f"grid shape {t.shape} does not match operators ({a_x.n}, {a_y.n})")
    w = a_y.matvec_columns(np.ascontiguousarray(t.T)).T
    return a_x.matvec_columns(np.ascontiguousarray(w))


def kron_solve(lu_x: BandedLU, lu_y: BandedLU, rhs) -> np.ndarray:
    """Solve ``(A_x (x) A_y) vec(T) = vec(rhs)`` by 1D line solves (y first)."""
    r = _values(rhs)
    if r.shape != (lu_x.n, lu_y.n):
        raise ConfigurationError(f"rhs shape {r.shape} does not match factors ({lu_x.n}, {lu_y.n})")
    z = lu_y.solve_many(np.ascontiguousarray(r.T)).T
    return lu_x.solve_many(np.ascontiguousarray(z))
