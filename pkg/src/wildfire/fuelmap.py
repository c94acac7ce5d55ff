"""Raster fuel-availability maps: CSV loading and nearest-pixel sampling.

A fuel map is a rows x cols grid of values in [0, 1] draped over a rectangular
domain. Row 0 is the *top* of the image, so sampling flips the y axis. Lookup
truncates ``scale * coordinate`` to an integer pixel index; sampling exactly at
the upper domain edge is an error in strict mode (the historical behaviour)
and clamps to the last pixel by default.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, FormatError

__all__ = ["FuelMap", "load_csv"]

DEFAULT_AVAILABILITY_SCALE = 0.725


@dataclass
class FuelMap:
    grid: np.ndarray = field(repr=False)
    availability_scale: float = DEFAULT_AVAILABILITY_SCALE
    clamped_cells: int = 0  # out-of-range cells clipped at load time

    @property
    def rows(self) -> int:
        return self.grid.shape[0]

    @property
    def cols(self) -> int:
        return self.grid.shape[1]

    def sample(self, x: float, y: float, domain, strict: bool = False) -> float:
        """Nearest-pixel availability at physical point ``(x, y)``.

        ``domain`` is ``(ax, bx, ay, by)``. The value is the raster cell times
        ``availability_scale``. Pixel indices follow integer truncation of
        ``scale * (x - ax)`` and ``scale * (by - y)`` (image row 0 = max y).
        """
        ax, bx, ay, by = domain
        scale_x = self.cols / (bx - ax)
        scale_y = self.rows / (by - ay)
        map_x = int(scale_x * (x - ax))
        map_y = int(scale_y * (by - y))
        if strict:
            if map_x >= self.cols or map_y >= self.rows or map_x < 0 or map_y < 0:
                raise DomainError("Invalid map coordinates")
        else:
            map_x = min(max(map_x, 0), self.cols - 1)
            map_y = min(max(map_y, 0), self.rows - 1)
        return float(self.grid[map_y, map_x]) * self.availability_scale

    def sample_grid(self, xs: np.ndarray, ys: np.ndarray, domain) -> np.ndarray:
        """Vectorized default-mode sampling on the tensor grid ``xs x ys``."""
        ax, bx, ay, by = domain
        ix = (self.cols / (bx - ax) * (np.asarray(xs) - ax)).astype(np.int64)
        iy = (self.rows / (by - ay) * (by - np.asarray(ys))).astype(np.int64)
        ix = np.clip(ix, 0, self.cols - 1)
        iy = np.clip(iy, 0, self.rows - 1)
        return self.grid[np.ix_(iy, ix)].T * self.availability_scale


def load_csv(path, availability_scale: float = DEFAULT_AVAILABILITY_SCALE) -> FuelMap:
    """Load a header-free comma-separated raster; row 0 is the top of the image.

    Values outside [0, 1] are clamped and counted. Ragged rows, non-numeric
    cells, and empty files raise :class:`FormatError` with the location.
    """
    rows: list[list[float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            parsed = []
            for colno, cell in enumerate(cells, start=1):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise FormatError(f"{path}: non-numeric cell at row {lineno}, column {colno}: {cell!r}") from None
            if rows and len(parsed) != len(rows[0]):
                raise FormatError(
                    f"{path}: ragged row at row {lineno}: expected {len(rows[0])} columns, got {len(parsed)}"
                )
            rows.append(parsed)
    if not rows:
        raise FormatError(f"{path}: empty fuel map")
    grid = np.array(rows, dtype=np.float64)
    clamped = int(np.count_nonzero((grid < 0.0) | (grid > 1.0)))
    if clamped:
        grid = np.clip(grid, 0.0, 1.0)
    return FuelMap(grid, availability_scale=availability_scale, clamped_cells=clamped)
