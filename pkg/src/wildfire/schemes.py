"""Time integrators: explicit baseline, Peaceman-Rachford ADI, and Strang
splitting with Crank-Nicolson substeps.

All three advance a ``(temperature, fuel)`` state by one step ``tau``. The two
splitting schemes treat the directional advection-diffusion(-reaction)
operators implicitly through factored banded matrices; nonlinear sources stay
on the right-hand side, evaluated from the lagged state. The x-direction
operator carries the linear reaction term; the y-direction operator does not.

Matrix form of one Peaceman-Rachford step (w = tau/2)::

    [M_x + w(K_x + G_x - r M_x)] (x) M_y  T*   = M_x (x) [M_y - w(K_y + G_y)] T_n  + w F
    M_x (x) [M_y + w(K_y + G_y)] T_{n+1}      = [M_x - w(K_x + G_x - r M_x)] (x) M_y T* + w F

and of the Strang/Crank-Nicolson step (x half-steps use w = tau/4, the full
y step uses tau/2, with forcing averages (F^{n+1/2}+F^n)/... on the x stages).
Here K, G carry the diffusion/advection coefficients and wind components.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .assembly import AssemblyContext, assemble_forcing, update_fuel
from .bspline import BsplineSpace, QuadRule
from .errors import ConfigurationError
from .kron import kron_apply, kron_solve
from .operators1d import (
    Banded1DOperator,
    BandedLU,
    assemble_advection,
    assemble_mass,
    assemble_stiffness,
    factor,
    form_operator,
)
from .physics import DerivedCoeffs, ModelParams, WindField

__all__ = ["SchemeKind", "OperatorSet", "DirectionOperators", "SimState", "Stepper", "make_operator_set"]


class SchemeKind(enum.Enum):
    EXPLICIT = "explicit"
    PEACEMAN_RACHFORD = "pr"
    STRANG_CN = "strang-cn"

    @classmethod
    def parse(cls, name: str) -> "SchemeKind":
        key = name.strip().lower().replace("_", "-")
        aliases = {
            "explicit": cls.EXPLICIT,
            "euler": cls.EXPLICIT,
            "pr": cls.PEACEMAN_RACHFORD,
            "peaceman-rachford": cls.PEACEMAN_RACHFORD,
            "strang": cls.STRANG_CN,
            "strang-cn": cls.STRANG_CN,
            "cn": cls.STRANG_CN,
        }
        if key not in aliases:
            raise ConfigurationError(f"unknown scheme {name!r} (use explicit, pr, or strang-cn)")
        return aliases[key]


@dataclass
class OperatorSet:
    """Pure 1D operators of one discretization, assembled once per run."""

    mass_x: Banded1DOperator
    stiff_x: Banded1DOperator
    adv_x: Banded1DOperator  # int B_i' B_k, x direction
    mass_y: Banded1DOperator
    stiff_y: Banded1DOperator
    adv_y: Banded1DOperator
    lu_mass_x: BandedLU
    lu_mass_y: BandedLU
    # weak advection (dT/ds, v) puts the derivative on the trial index:
    adv_x_t: Banded1DOperator = field(init=False)
    adv_y_t: Banded1DOperator = field(init=False)

    def __post_init__(self):
        self.adv_x_t = self.adv_x.transpose()
        self.adv_y_t = self.adv_y.transpose()


def make_operator_set(
    space_x: BsplineSpace, space_y: BsplineSpace, quad_x: QuadRule, quad_y: QuadRule
) -> OperatorSet:
    mx = assemble_mass(space_x, quad_x)
    my = assemble_mass(space_y, quad_y)
    return OperatorSet(
        mass_x=mx,
        stiff_x=assemble_stiffness(space_x, quad_x),
        adv_x=assemble_advection(space_x, quad_x),
        mass_y=my,
        stiff_y=assemble_stiffness(space_y, quad_y),
        adv_y=assemble_advection(space_y, quad_y),
        lu_mass_x=factor(mx),
        lu_mass_y=factor(my),
    )


@dataclass
class DirectionOperators:
    """Factored left and banded right operators of the splitting substeps for
    one (scheme, tau, wind segment) combination."""

    tau: float
    wind: tuple[float, float]
    left_x: BandedLU
    right_x: Banded1DOperator
    left_y: BandedLU
    right_y: Banded1DOperator


def build_direction_operators(
    kind: SchemeKind,
    ops: OperatorSet,
    coeffs: DerivedCoeffs,
    wind: tuple[float, float],
    tau: float,
) -> DirectionOperators | None:
    if kind is SchemeKind.EXPLICIT:
        return None
    if tau <= 0:
        raise ConfigurationError(f"time step must be positive, got {tau}")
    bx, by = wind
    w_x = tau / 2.0 if kind is SchemeKind.PEACEMAN_RACHFORD else tau / 4.0
    w_y = tau / 2.0

    def x_op(sign: float) -> Banded1DOperator:
        return form_operator(
            ops.mass_x, ops.stiff_x, ops.adv_x_t,
            gamma=sign * w_x * coeffs.c_diffusion,
            delta=sign * w_x * coeffs.c_advection * bx,
            rho_c=-sign * w_x * coeffs.c_reaction,
        )

    def y_op(sign: float) -> Banded1DOperator:
        return form_operator(
            ops.mass_y, ops.stiff_y, ops.adv_y_t,
            gamma=sign * w_y * coeffs.c_diffusion,
            delta=sign * w_y * coeffs.c_advection * by,
        )

    return DirectionOperators(
        tau=tau,
        wind=(bx, by),
        left_x=factor(x_op(+1.0)),
        right_x=x_op(-1.0),
        left_y=factor(y_op(+1.0)),
        right_y=y_op(-1.0),
    )


@dataclass
class SimState:
    temp: np.ndarray
    fuel: np.ndarray
    t: float = 0.0
    step: int = 0
    diverged: bool = False


class Stepper:
    """Drives one scheme at a fixed time step.

    Direction operators are rebuilt only when the wind segment changes. A
    non-finite temperature field after a step sets ``diverged`` on the state;
    it is recorded, never silently propagated.
    """

    def __init__(
        self,
        kind: SchemeKind,
        ctx: AssemblyContext,
        ops: OperatorSet,
        coeffs: DerivedCoeffs,
        params: ModelParams,
        tau: float,
        wind: WindField | None = None,
        f_ext=None,
        with_nonlinear: bool = True,
        evolve_fuel: bool = True,
    ):
        if tau <= 0:
            raise ConfigurationError(f"time step must be positive, got {tau}")
        self.kind = kind
        self.ctx = ctx
        self.ops = ops
        self.coeffs = coeffs
        self.params = params
        self.tau = float(tau)
        self.wind = wind or WindField.steady(0.0, 0.0)
        self.f_ext = f_ext
        self.with_nonlinear = with_nonlinear
        self.evolve_fuel = evolve_fuel
        self._dirops: DirectionOperators | None = None

    def _direction_operators(self, wind: tuple[float, float]) -> DirectionOperators:
        if self._dirops is None or self._dirops.wind != wind:
            self._dirops = build_direction_operators(self.kind, self.ops, self.coeffs, wind, self.tau)
        return self._dirops

    def _forcing(self, temp, fuel, wind, t, with_linear):
        return assemble_forcing(
            self.ctx, self.coeffs, self.params, temp, fuel, wind, t,
            with_linear=with_linear, with_nonlinear=self.with_nonlinear, f_ext=self.f_ext,
        )

    def step(self, state: SimState) -> SimState:
        if state.diverged:
            return state
        tau, ops = self.tau, self.ops
        t = state.t
        if self.kind is SchemeKind.EXPLICIT:
            wind = self.wind.at(t)
            f_full = self._forcing(state.temp, state.fuel, wind, t, with_linear=True)
            rhs = kron_apply(ops.mass_x, ops.mass_y, state.temp) + tau * f_full
            temp_new = kron_solve(ops.lu_mass_x, ops.lu_mass_y, rhs)
        elif self.kind is SchemeKind.PEACEMAN_RACHFORD:
            wind = self.wind.at(t + tau / 2.0)
            d = self._direction_operators(wind)
            forcing = self._forcing(state.temp, state.fuel, wind, t + tau / 2.0, with_linear=False)
            rhs = kron_apply(ops.mass_x, d.right_y, state.temp) + (tau / 2.0) * forcing
            t_star = kron_solve(d.left_x, ops.lu_mass_y, rhs)
            rhs = kron_apply(d.right_x, ops.mass_y, t_star) + (tau / 2.0) * forcing
            temp_new = kron_solve(ops.lu_mass_x, d.left_y, rhs)
        else:  # Strang splitting with Crank-Nicolson substeps
            wind = self.wind.at(t + tau / 2.0)
            d = self._direction_operators(wind)
            f_n = self._forcing(state.temp, state.fuel, wind, t, with_linear=False)
            if self.f_ext is None:
                f_half = f_n  # forcing depends on time only through f_ext
            else:
                f_half = self._forcing(state.temp, state.fuel, wind, t + tau / 2.0, with_linear=False)
            rhs = kron_apply(d.right_x, ops.mass_y, state.temp) + (tau / 4.0) * (f_half + f_n)
            t_star = kron_solve(d.left_x, ops.lu_mass_y, rhs)
            rhs = kron_apply(ops.mass_x, d.right_y, t_star)
            t_2star = kron_solve(ops.lu_mass_x, d.left_y, rhs)
            f_end = self._forcing(t_2star, state.fuel, wind, t + tau, with_linear=False)
            rhs = kron_apply(d.right_x, ops.mass_y, t_2star) + (tau / 4.0) * (f_end + f_half)
            temp_new = kron_solve(d.left_x, ops.lu_mass_y, rhs)

        if self.evolve_fuel:
            fuel_new = update_fuel(self.ctx, ops.lu_mass_x, ops.lu_mass_y,
                                   state.fuel, state.temp, tau, self.params)
        else:
            fuel_new = state.fuel
        diverged = not (np.isfinite(temp_new).all() and np.isfinite(fuel_new).all())
        return SimState(temp_new, fuel_new, t + tau, state.step + 1, bool(diverged))

    def run(self, state: SimState, n_steps: int, callback=None) -> SimState:
        """Advance ``n_steps`` (or until divergence); ``callback(state)`` runs
        after every step."""
        horizon = state.t + n_steps * self.tau
        if not self.wind.covers(state.t, horizon):
            raise ConfigurationError(
                f"wind schedule does not cover the simulation horizon [{state.t}, {horizon}]"
            )
        for _ in range(n_steps):
            state = self.step(state)
            if callback is not None:
                callback(state)
            if state.diverged:
                break
        return state
