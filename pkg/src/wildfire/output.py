"""Field snapshots: uniform-grid sampling, ``.data`` text files, PGM mirrors.

A snapshot samples the spline field on a uniform ``(n_s + 1)^2`` point grid
over the domain and writes one line per sample, ``x y value``, space-delimited
with 17 significant digits, ordered row-major by y then x (all x values of the
first y row, then the next row). Identical runs produce byte-identical files.
"""

from __future__ import annotations

import numpy as np

from .bspline import BsplineSpace
from .errors import FormatError

__all__ = [
    "sample_points",
    "collocation_matrix",
    "sample_field",
    "write_field",
    "read_field",
    "write_pgm",
    "fit_coefficients",
]


def sample_points(space: BsplineSpace, n_samples: int) -> np.ndarray:
    return np.linspace(space.a, space.b, n_samples + 1)


def collocation_matrix(space: BsplineSpace, xs: np.ndarray) -> np.ndarray:
    """Dense (len(xs), n_dof) matrix of basis values at the sample points."""
    c = np.zeros((len(xs), space.n_dof))
    for row, x in enumerate(np.asarray(xs, dtype=np.float64)):
        first, vals, _ = space.eval_nonzero(x)
        c[row, first : first + space.degree + 1] = vals
    return c


def sample_field(space_x: BsplineSpace, space_y: BsplineSpace, coeffs: np.ndarray, n_samples: int):
    """Evaluate the field on the uniform sample grid; returns ``(xs, ys, s)``
    with ``s[i, j]`` the value at ``(xs[i], ys[j])``."""
    xs = sample_points(space_x, n_samples)
    ys = sample_points(space_y, n_samples)
    cx = collocation_matrix(space_x, xs)
    cy = collocation_matrix(space_y, ys)
    return xs, ys, cx @ np.asarray(coeffs) @ cy.T


def write_field(path, xs, ys, values) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        for j, y in enumerate(ys):
            for i, x in enumerate(xs):
                fh.write(f"{x:.17g} {y:.17g} {values[i, j]:.17g}\n")


def read_field(path):
    """Inverse of :func:`write_field`; returns ``(xs, ys, values)``."""
    xs_list, ys_list, vals = [], [], []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 3:
                raise FormatError(f"{path}: expected 'x y value' at line {lineno}")
            try:
                x, y, v = (float(p) for p in parts)
            except ValueError:
                raise FormatError(f"{path}: non-numeric entry at line {lineno}") from None
            xs_list.append(x)
            ys_list.append(y)
            vals.append(v)
    if not vals:
        raise FormatError(f"{path}: empty snapshot")
    xs = np.unique(np.array(xs_list))
    ys = np.unique(np.array(ys_list))
    if len(xs) * len(ys) != len(vals):
        raise FormatError(f"{path}: samples do not form a tensor grid")
    # place each sample by its coordinates (tolerates reordered lines)
    ix = np.searchsorted(xs, np.array(xs_list))
    iy = np.searchsorted(ys, np.array(ys_list))
    grid = np.full((len(xs), len(ys)), np.nan)
    grid[ix, iy] = np.array(vals)
    if np.isnan(grid).any():
        raise FormatError(f"{path}: duplicate or missing grid samples")
    return xs, ys, grid


def write_pgm(path, values) -> None:
    """8-bit grayscale mirror of a sampled field (min->0, max->255); row 0 of
    the image is the maximum-y row."""
    v = np.asarray(values, dtype=np.float64)
    lo, hi = float(np.min(v)), float(np.max(v))
    scale = 255.0 / (hi - lo) if hi > lo else 0.0
    pix = np.round((v - lo) * scale).astype(np.int64)
    img = pix.T[::-1]  # rows = y descending, columns = x
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"P2\n{img.shape[1]} {img.shape[0]}\n255\n")
        for row in img:
            fh.write(" ".join(str(int(p)) for p in row) + "\n")


def fit_coefficients(space_x: BsplineSpace, space_y: BsplineSpace, xs, ys, samples) -> np.ndarray:
    """Least-squares spline coefficients from samples on a tensor grid.

    Recovers a degree-p-representable field exactly when the grid has at least
    ``n_dof`` distinct points per direction (normal equations per axis).
    """
    cx = collocation_matrix(space_x, np.asarray(xs))
    cy = collocation_matrix(space_y, np.asarray(ys))
    s = np.asarray(samples, dtype=np.float64)
    w = np.linalg.solve(cx.T @ cx, cx.T @ s @ cy)
    return np.linalg.solve(cy.T @ cy, w.T).T
