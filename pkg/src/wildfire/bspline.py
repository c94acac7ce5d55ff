"""Open-knot B-spline spaces on uniform 1D meshes, with Gauss-Legendre quadrature.

The basis follows the standard Cox-de Boor recurrence. Only open uniform knot
vectors are supported: the first and last knots are repeated ``p + 1`` times and
the interior knots are simple and equally spaced, which is what the
tensor-product (Kronecker) solver machinery relies on. The basis then has
``n_elements + p`` functions with C^{p-1} continuity at interior knots.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError

__all__ = ["BsplineSpace", "QuadRule", "make_space", "make_quadrature", "basis_tables"]


@dataclass(frozen=True)
class BsplineSpace:
    """Degree-``p`` spline space on an open uniform knot vector over [a, b]."""

    degree: int
    n_elements: int
    a: float
    b: float
    knots: np.ndarray = field(repr=False)

    @property
    def n_dof(self) -> int:
        return self.n_elements + self.degree

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.n_elements

    def element_of(self, x: float) -> int:
        """Element index containing ``x``; the right endpoint maps to the last
        element (closed-from-the-left convention)."""
        if x < self.a or x > self.b:
            raise DomainError(f"x = {x} outside [{self.a}, {self.b}]")
        e = int((x - self.a) / self.h)
        return min(e, self.n_elements - 1)

    def eval_nonzero(self, x: float) -> tuple[int, np.ndarray, np.ndarray]:
        """Evaluate the ``p + 1`` basis functions supported at ``x``.

        Returns ``(first_index, values, derivs)`` where ``values[j]`` and
        ``derivs[j]`` belong to basis function ``first_index + j``. On an open
        uniform knot vector the first nonzero basis on element ``e`` is ``e``
        itself. Values sum to 1 and derivatives to 0 (partition of unity).
        """
        e = self.element_of(x)
        span = e + self.degree  # knot-span index: knots[span] <= x < knots[span+1]
        vals, ders = _basis_and_first_derivative(self.knots, self.degree, span, x)
        return e, vals, ders


def make_space(p: int, n_elements: int, a: float, b: float) -> BsplineSpace:
    """Build a degree-``p`` open uniform knot space with ``n_elements`` over [a, b]."""
    if not isinstance(p, (int, np.integer)) or p < 1:
        raise ConfigurationError(f"degree must be an integer >= 1, got {p}")
    if not isinstance(n_elements, (int, np.integer)) or n_elements < 1:
        raise ConfigurationError(f"n_elements must be an integer >= 1, got {n_elements}")
    if not (np.isfinite(a) and np.isfinite(b)) or not a < b:
        raise ConfigurationError(f"invalid interval [{a}, {b}]")
    interior = a + (b - a) * np.arange(1, n_elements) / n_elements
    knots = np.concatenate([np.full(p + 1, float(a)), interior, np.full(p + 1, float(b))])
    return BsplineSpace(int(p), int(n_elements), float(a), float(b), knots)


def _basis_and_first_derivative(knots, p, span, x):
    """Nonzero basis values and first derivatives at ``x`` (Cox-de Boor)."""
    # Triangular table: ndu[r, j] = value of N_{span-j+r, j}(x), j = 0..p.
    ndu = np.zeros((p + 1, p + 1))
    left = np.zeros(p + 1)
    right = np.zeros(p + 1)
    ndu[0, 0] = 1.0
    for j in range(1, p + 1):
        left[j] = x - knots[span + 1 - j]
        right[j] = knots[span + j] - x
        saved = 0.0
        for r in range(j):
            temp = ndu[r, j - 1] / (right[r + 1] + left[j - r])
            ndu[r, j] = saved + right[r + 1] * temp
            saved = left[j - r] * temp
        ndu[j, j] = saved
    vals = ndu[:, p].copy()

    # B'_{i,p} = p * (N_{i,p-1}/(t_{i+p}-t_i) - N_{i+1,p-1}/(t_{i+p+1}-t_{i+1})),
    # with terms dropped where the knot difference vanishes (repeated end knots).
    ders = np.zeros(p + 1)
    for j in range(p + 1):
        i = span - p + j
        d = 0.0
        if j >= 1:  # N_{i, p-1} is ndu[j-1, p-1]
            dt = knots[i + p] - knots[i]
            if dt > 0.0:
                d += ndu[j - 1, p - 1] / dt
        if j <= p - 1:  # N_{i+1, p-1} is ndu[j, p-1]
            dt = knots[i + p + 1] - knots[i + 1]
            if dt > 0.0:
                d -= ndu[j, p - 1] / dt
        ders[j] = p * d
    return vals, ders


@dataclass(frozen=True)
class QuadRule:
    """Gauss-Legendre rule mapped to every element of a uniform mesh.

    ``points[e, q]`` is the q-th node on element ``e``; ``weights[q]`` already
    carries the element Jacobian h/2 (identical for all elements of a uniform
    mesh), so ``sum(weights) == h``.
    """

    n_points: int
    points: np.ndarray
    weights: np.ndarray

    @property
    def n_elements(self) -> int:
        return self.points.shape[0]


def make_quadrature(space: BsplineSpace, n_points: int | None = None) -> QuadRule:
    """Per-element Gauss rule; the default ``p + 1`` points integrate the
    degree-2p mass integrand exactly."""
    q = space.degree + 1 if n_points is None else int(n_points)
    if q < 1:
        raise ConfigurationError(f"quadrature must use at least one point, got {q}")
    ref_x, ref_w = np.polynomial.legendre.leggauss(q)
    h = space.h
    lows = space.a + h * np.arange(space.n_elements)
    points = lows[:, None] + (ref_x[None, :] + 1.0) * (h / 2.0)
    weights = ref_w * (h / 2.0)
    return QuadRule(q, points, weights)


def basis_tables(space: BsplineSpace, quad: QuadRule) -> tuple[np.ndarray, np.ndarray]:
    """Tabulate basis values and first derivatives at all quadrature points.

    Returns ``(vals, ders)`` with shape ``(n_elements, n_points, p + 1)``;
    entry ``[e, q, j]`` belongs to global basis function ``e + j``.
    """
    p = space.degree
    ne, nq = quad.points.shape
    vals = np.zeros((ne, nq, p + 1))
    ders = np.zeros((ne, nq, p + 1))
    for e in range(ne):
        span = e + p
        for q in range(nq):
            v, d = _basis_and_first_derivative(space.knots, p, span, quad.points[e, q])
            vals[e, q] = v
            ders[e, q] = d
    return vals, ders
