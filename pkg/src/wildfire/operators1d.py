"""One-dimensional operators on a B-spline space: mass M, stiffness K, and
advection G, stored as bands, plus LU factorization with partial pivoting.

Entry conventions (``B_i`` are the basis functions of one space):

* ``M[i, k] = int B_i B_k``
* ``K[i, k] = int B_i' B_k'``
* ``G[i, k] = int B_i' B_k``

``G`` therefore carries the derivative on its *row* index; the weak advection
term ``(dT/dx, v)`` corresponds to ``G`` transposed, which callers obtain via
:meth:`Banded1DOperator.transpose`. Assembly is kept free of physical
constants; scheme-dependent scaling happens in :func:`form_operator`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _accel
from .bspline import BsplineSpace, QuadRule, basis_tables
from .errors import ConfigurationError, FactorizationError

__all__ = [
    "Banded1DOperator",
    "BandedLU",
    "assemble_mass",
    "assemble_stiffness",
    "assemble_advection",
    "form_operator",
    "factor",
]


@dataclass
class Banded1DOperator:
    """Square matrix with half bandwidth ``p``: ``bands[p + o, i] = A[i, i + o]``
    for offsets ``o`` in ``[-p, p]``; slots outside the matrix are zero."""

    n: int
    p: int
    bands: np.ndarray = field(repr=False)

    @classmethod
    def zeros(cls, n: int, p: int) -> "Banded1DOperator":
        return cls(n, p, np.zeros((2 * p + 1, n)))

    @classmethod
    def identity(cls, n: int, p: int = 0) -> "Banded1DOperator":
        op = cls.zeros(n, p)
        op.bands[p, :] = 1.0
        return op

    @classmethod
    def from_dense(cls, a: np.ndarray, p: int) -> "Banded1DOperator":
        n = a.shape[0]
        op = cls.zeros(n, p)
        for o in range(-p, p + 1):
            lo, hi = max(0, -o), min(n, n - o)
            op.bands[p + o, lo:hi] = np.diagonal(a, o)
        return op

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for o in range(-self.p, self.p + 1):
            for i in range(max(0, -o), min(self.n, self.n - o)):
                a[i, i + o] = self.bands[self.p + o, i]
        return a

    def transpose(self) -> "Banded1DOperator":
        out = Banded1DOperator.zeros(self.n, self.p)
        for o in range(-self.p, self.p + 1):
            lo, hi = max(0, -o), min(self.n, self.n - o)
            # A^T[i, i+o] = A[i+o, i]
            out.bands[self.p + o, lo:hi] = self.bands[self.p - o, lo + o : hi + o]
        return out

    def matvec_columns(self, x: np.ndarray) -> np.ndarray:
        """Apply the operator down axis 0 of ``x`` (each column is one vector)."""
        x = np.asarray(x, dtype=np.float64)
        one_d = x.ndim == 1
        if one_d:
            x = x[:, None]
        if x.shape[0] != self.n:
            raise ConfigurationError(f"operand length {x.shape[0]} != matrix dimension {self.n}")
        out = np.zeros_like(x)
        p = self.p
        for o in range(-p, p + 1):
            d = self.bands[p + o]
            if o >= 0:
                out[: self.n - o] += d[: self.n - o, None] * x[o:]
            else:
                out[-o:] += d[-o:, None] * x[: self.n + o]
        return out[:, 0] if one_d else out


def _assemble(space: BsplineSpace, quad: QuadRule, left_deriv: bool, right_deriv: bool) -> Banded1DOperator:
    p = space.degree
    vals, ders = basis_tables(space, quad)
    lt = ders if left_deriv else vals
    rt = ders if right_deriv else vals
    op = Banded1DOperator.zeros(space.n_dof, p)
    for e in range(space.n_elements):
        for q in range(quad.n_points):
            w = quad.weights[q]
            for ai in range(p + 1):
                li = lt[e, q, ai]
                for ak in range(p + 1):
                    op.bands[p + ak - ai, e + ai] += w * li * rt[e, q, ak]
    return op


def assemble_mass(space: BsplineSpace, quad: QuadRule) -> Banded1DOperator:
    """Mass matrix ``int B_i B_k``; symmetric positive definite, entries sum to b - a."""
    return _assemble(space, quad, False, False)


def assemble_stiffness(space: BsplineSpace, quad: QuadRule) -> Banded1DOperator:
    """Stiffness matrix ``int B_i' B_k'``; symmetric PSD with zero row sums."""
    return _assemble(space, quad, True, True)


def assemble_advection(space: BsplineSpace, quad: QuadRule) -> Banded1DOperator:
    """Advection matrix ``int B_i' B_k``; columns sum to zero, row sums equal
    ``B_i(b) - B_i(a)``."""
    return _assemble(space, quad, True, False)


def form_operator(
    m: Banded1DOperator,
    k: Banded1DOperator,
    g: Banded1DOperator,
    gamma: float,
    delta: float,
    rho_c: float = 0.0,
) -> Banded1DOperator:
    """Scheme operator ``M + gamma K + delta G + rho_c M``.

    The reaction term enters as a mass-matrix multiple ``rho_c``; each time
    integrator picks its own sign and half-step weight. Pass ``g`` transposed
    when the weak form puts the derivative on the trial function.
    """
    if not (m.n == k.n == g.n and m.p == k.p == g.p):
        raise ConfigurationError("operator dimensions/bandwidths do not match")
    bands = (1.0 + rho_c) * m.bands + gamma * k.bands + delta * g.bands
    return Banded1DOperator(m.n, m.p, bands)


@dataclass
class BandedLU:
    """Partial-pivoting LU of a banded operator (fill up to ``2p`` superdiagonals)."""

    n: int
    p: int
    ab: np.ndarray = field(repr=False)
    piv: np.ndarray = field(repr=False)

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        rhs = np.asarray(rhs, dtype=np.float64)
        if rhs.shape[0] != self.n:
            raise ConfigurationError(f"rhs length {rhs.shape[0]} != matrix dimension {self.n}")
        if rhs.ndim == 1:
            return _accel.kernels().band_solve_many(self.ab, self.piv, self.p, rhs[:, None].copy())[:, 0]
        return self.solve_many(rhs)

    def solve_many(self, rhs: np.ndarray) -> np.ndarray:
        """Solve one system per column of ``rhs`` (shape ``(n, n_lines)``)."""
        rhs = np.ascontiguousarray(rhs, dtype=np.float64)
        if rhs.shape[0] != self.n:
            raise ConfigurationError(f"rhs rows {rhs.shape[0]} != matrix dimension {self.n}")
        return _accel.kernels().band_solve_many(self.ab, self.piv, self.p, rhs)


def factor(a: Banded1DOperator) -> BandedLU:
    """Factor a banded operator; raises :class:`FactorizationError` on an
    exactly singular pivot (degenerate time-step/coefficient combination)."""
    n, p = a.n, a.p
    ab = np.zeros((3 * p + 1, n))
    for o in range(-p, p + 1):
        lo, hi = max(0, -o), min(n, n - o)
        # ab[2p + i - j, j] = A[i, j] with j = i + o
        ab[2 * p - o, lo + o : hi + o] = a.bands[p + o, lo:hi]
    piv, info = _accel.kernels().band_factor(ab, p)
    if info != 0:
        raise FactorizationError(f"zero pivot in column {info - 1}")
    return BandedLU(n, p, ab, piv)
