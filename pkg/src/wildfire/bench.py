"""Benchmark modes: strong-scaling over worker counts and a numba-vs-numpy
kernel backend comparison. Timings cover full time steps (assembly plus the
directional solves) after a warm-up step that absorbs JIT compilation.
"""

from __future__ import annotations

import io
import statistics
import time
from dataclasses import dataclass

from . import _accel
from .config import ScenarioConfig
from .run import build_problem, initial_state, make_stepper

__all__ = ["BenchRow", "run_bench", "bench_csv", "median_step_time", "bench_backends"]


@dataclass
class BenchRow:
    workers: int
    degree: int
    mesh: str
    steps: int
    seconds: float
    speedup: float
    efficiency: float


def _time_steps(problem, n_steps: int, warmup: int = 1) -> list[float]:
    stepper = make_stepper(problem)
    state = initial_state(problem)
    for _ in range(warmup):
        state = stepper.step(state)
    times = []
    for _ in range(n_steps):
        t0 = time.perf_counter()
        state = stepper.step(state)
        times.append(time.perf_counter() - t0)
        if state.diverged:
            break
    return times


def run_bench(config: ScenarioConfig, worker_counts=None) -> list[BenchRow]:
    """Wall time / speedup / efficiency of ``config.steps`` time steps for each
    worker count (speedup is relative to the first count)."""
    counts = tuple(worker_counts) if worker_counts is not None else config.bench_workers
    problem = build_problem(config)
    rows = []
    base = None
    for w in counts:
        _accel.set_workers(w)
        times = _time_steps(problem, config.steps)
        seconds = float(sum(times))
        if base is None:
            base = seconds
        speedup = base / seconds if seconds > 0 else float("nan")
        rows.append(BenchRow(w, config.degree, f"{config.nx}x{config.ny}",
                             len(times), seconds, speedup, speedup / w))
    return rows


def bench_csv(rows) -> str:
    out = io.StringIO()
    out.write("workers,p,mesh,steps,seconds,speedup,efficiency\n")
    for r in rows:
        out.write(f"{r.workers},{r.degree},{r.mesh},{r.steps},"
                  f"{r.seconds:.6f},{r.speedup:.4f},{r.efficiency:.4f}\n")
    return out.getvalue()


def median_step_time(config: ScenarioConfig, n_steps: int | None = None) -> float:
    """Median wall time of one time step (used by the linear-cost check)."""
    problem = build_problem(config)
    _accel.set_workers(config.workers)
    times = _time_steps(problem, n_steps if n_steps is not None else config.steps)
    return statistics.median(times)


def bench_backends(config: ScenarioConfig, n_steps: int = 20) -> dict[str, float]:
    """Median per-step time of the numba kernels vs the pure-numpy fallback."""
    out = {}
    previous = _accel.get_backend()
    try:
        for backend in ("numba", "numpy"):
            try:
                _accel.set_backend(backend)
            except RuntimeError:
                continue
            problem = build_problem(config)
            _accel.set_workers(config.workers)
            out[backend] = statistics.median(_time_steps(problem, n_steps))
    finally:
        _accel.set_backend(previous)
    return out
