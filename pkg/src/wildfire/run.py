"""Scenario driver: initial state, time loop, periodic snapshots."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import _accel, fuelmap
from .assembly import AssemblyContext, make_context, project
from .bspline import make_quadrature, make_space
from .config import ScenarioConfig
from .errors import ConfigurationError
from .output import sample_field, write_field, write_pgm
from .physics import DerivedCoeffs, ModelParams
from .schemes import OperatorSet, SimState, Stepper, make_operator_set

__all__ = ["falloff", "bump", "Problem", "build_problem", "initial_state", "run_simulation"]


def falloff(r: float, big_r: float, t: float) -> float:
    """Smooth transition: 1 inside ``r``, 0 outside ``big_r``, and
    ``((h - 1)(h + 1))^2`` with ``h = (t - r)/(R - r)`` in between."""
    if t < r:
        return 1.0
    if t > big_r:
        return 0.0
    h = (t - r) / (big_r - r)
    return ((h - 1.0) * (h + 1.0)) ** 2


def bump(r: float, big_r: float, x, y, center=(50.0, 50.0), length: float = 100.0):
    """Radial bump profile of the ignition region (vectorized).

    Distances are normalized by the domain length and the radii by twice the
    length, so the nominal ``r``/``R`` act at half their value in physical
    units (``r = 10`` reaches 5 length units from the center).
    """
    dx = np.asarray(x, dtype=np.float64) - center[0]
    dy = np.asarray(y, dtype=np.float64) - center[1]
    t = np.sqrt(dx * dx + dy * dy) / length
    vec = np.vectorize(falloff, otypes=[np.float64])
    return vec(r / (2.0 * length), big_r / (2.0 * length), t)


@dataclass
class Problem:
    """Everything a run needs, assembled once from a config."""

    config: ScenarioConfig
    params: ModelParams
    coeffs: DerivedCoeffs
    ctx: AssemblyContext
    ops: OperatorSet
    fuel_map: fuelmap.FuelMap | None

    @property
    def spaces(self):
        return self.ctx.space_x, self.ctx.space_y


def build_problem(config: ScenarioConfig) -> Problem:
    config.validate()
    ax, bx, ay, by = config.domain
    space_x = make_space(config.degree, config.nx, ax, bx)
    space_y = make_space(config.degree, config.ny, ay, by)
    quad_x = make_quadrature(space_x)
    quad_y = make_quadrature(space_y)
    fm = None
    if isinstance(config.fuel, str):
        fm = fuelmap.load_csv(config.fuel, availability_scale=config.availability_scale)
    ctx = make_context(space_x, space_y, quad_x, quad_y, fuel_map=fm)
    ops = make_operator_set(space_x, space_y, quad_x, quad_y)
    params = config.model_params()
    return Problem(config, params, DerivedCoeffs.from_params(params), ctx, ops, fm)


def initial_state(problem: Problem) -> SimState:
    """L2 projection of the ignition bump temperature and the fuel source."""
    cfg = problem.config
    ign = cfg.ignition
    ax, bx, _, _ = cfg.domain

    def temp0(x, y):
        return ign.t0 + ign.t_comb * bump(ign.r, ign.big_r, x, y, ign.center, length=bx - ax)

    temp = project(problem.ctx, problem.ops.lu_mass_x, problem.ops.lu_mass_y, temp0)
    if problem.fuel_map is None:
        fuel = np.full(problem.ctx.shape, float(cfg.fuel))
    else:
        # ctx.eta already holds the scaled map samples at the quad points
        fuel = np.clip(
            project(problem.ctx, problem.ops.lu_mass_x, problem.ops.lu_mass_y, problem.ctx.eta),
            0.0, 1.0,
        )
    return SimState(temp, fuel)


def _write_snapshot(problem: Problem, state: SimState) -> list[str]:
    cfg = problem.config
    n_s = cfg.snapshot_samples if cfg.snapshot_samples is not None else cfg.nx
    space_x, space_y = problem.spaces
    paths = []
    os.makedirs(cfg.out_dir, exist_ok=True)
    for name, coeffs in (("out", state.temp), ("fuel", state.fuel)):
        xs, ys, values = sample_field(space_x, space_y, coeffs, n_s)
        path = os.path.join(cfg.out_dir, f"{name}_{state.step}.data")
        write_field(path, xs, ys, values)
        paths.append(path)
        if cfg.snapshot_pgm:
            write_pgm(os.path.join(cfg.out_dir, f"{name}_{state.step}.pgm"), values)
    if cfg.dump_coeffs:
        path = os.path.join(cfg.out_dir, f"coeffs_{state.step}.npz")
        np.savez(path, temp=state.temp, fuel=state.fuel, t=state.t)
        paths.append(path)
    return paths


def make_stepper(problem: Problem) -> Stepper:
    cfg = problem.config
    return Stepper(
        cfg.scheme, problem.ctx, problem.ops, problem.coeffs, problem.params,
        cfg.dt, wind=cfg.wind,
    )


def run_simulation(config: ScenarioConfig, log=None) -> SimState:
    """Run a configured scenario; writes snapshots every ``output_every``
    steps plus the initial and final states. Returns the final state (check
    ``diverged``)."""
    problem = build_problem(config)
    _accel.set_workers(config.workers)
    stepper = make_stepper(problem)
    state = initial_state(problem)
    horizon = config.steps * config.dt
    if not config.wind.covers(0.0, horizon):
        raise ConfigurationError(f"wind schedule does not cover [0, {horizon}]")
    _write_snapshot(problem, state)
    for _ in range(config.steps):
        state = stepper.step(state)
        if state.diverged:
            if log:
                log(f"diverged at step {state.step} (t = {state.t:g})")
            break
        if state.step % config.output_every == 0 or state.step == config.steps:
            _write_snapshot(problem, state)
            if log:
                log(f"step {state.step}  t = {state.t:g}")
    return state
