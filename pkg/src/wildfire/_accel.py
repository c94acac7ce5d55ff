"""Kernel backend selection: numba-compiled loops or the pure-numpy twins.

The environment flag ``WILDFIRE_NUMBA=0`` forces the numpy path; anything else
(or unset) uses numba when it imports cleanly. ``set_backend`` switches at
runtime so benchmarks and tests can compare both in one process.
"""

from __future__ import annotations

import os

from . import _kernels_numpy

_numba_kernels = None
_numba_error: Exception | None = None


def _load_numba_kernels():
    global _numba_kernels, _numba_error
    if _numba_kernels is None and _numba_error is None:
        # Prefer the omp layer: the bundled TBB is often too old and numba
        # emits a warning before falling back.
        os.environ.setdefault("NUMBA_THREADING_LAYER", "omp")
        try:
            from . import _kernels_numba

            _numba_kernels = _kernels_numba
        except Exception as exc:  # pragma: no cover - numba missing/broken
            _numba_error = exc
    return _numba_kernels


def _default_backend() -> str:
    if os.environ.get("WILDFIRE_NUMBA", "1") == "0":
        return "numpy"
    return "numba" if _load_numba_kernels() is not None else "numpy"


_backend = _default_backend()


def set_backend(name: str) -> None:
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and _load_numba_kernels() is None:
        raise RuntimeError("numba backend unavailable") from _numba_error
    _backend = name


def get_backend() -> str:
    return _backend


def kernels():
    """Active kernel module (late-bound so set_backend takes effect)."""
    return _numba_kernels if _backend == "numba" else _kernels_numpy


def set_workers(n: int) -> int:
    """Bound the numba thread pool; returns the count actually applied.

    The numpy backend is single-threaded, so the setting only affects numba.
    Results are bitwise independent of this value by construction.
    """
    n = max(1, int(n))
    if _backend != "numba":
        return 1
    import numba

    applied = min(n, numba.config.NUMBA_NUM_THREADS)
    numba.set_num_threads(applied)
    return applied
