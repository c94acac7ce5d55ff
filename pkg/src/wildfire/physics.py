"""Physical parameters, derived PDE coefficients, and pointwise source terms.

The energy balance for the temperature field ``T`` is

    rho d(c_p T)/dt = R_C + Q_W - div(q_C + q_r) + Q_conv + Q_rz

with combustion heat release ``R_C``, wind transport ``Q_W``, conduction
``q_C = -kappa grad T``, radiative flux ``q_r = -4 sigma eps delta_x T^3 grad T``,
Newton cooling ``Q_conv = chi (T_amb - T)``, and vertical radiative losses
``Q_rz = sigma eps / delta_z (T_amb^4 - T^4)``. The interdiffusion flux is
neglected. Dividing by ``rho c_p`` gives the scalar coefficients in
:class:`DerivedCoeffs` that the time integrators consume.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigurationError

__all__ = ["ModelParams", "DerivedCoeffs", "WindField", "reaction_rate", "source_terms"]


@dataclass(frozen=True)
class ModelParams:
    """Model constants; defaults reproduce the reference simulations."""

    c_p: float = 1.0              # specific heat capacity [J kg^-1 K^-1]
    rho: float = 1.293            # gas density [kg m^-3]
    kappa: float = 0.3            # thermal conductivity [W m^-1 K^-1]
    sigma: float = 5.67e-8        # Stefan-Boltzmann constant [W m^-2 K^-4]
    epsilon: float = 0.05         # emissivity [-]
    c_h: float = 1.0              # enthalpy correction coefficient [-]
    h_c: float = -70.0            # combustion enthalpy [J kg^-1], negative
    c_w: float = 0.5              # wind reduction coefficient [-]
    chi: float = 2e-2             # convective coefficient [W m^-2 K^-1]
    t_ambient: float = 300.0      # ambient temperature [K]
    t_ignition: float = 800.0     # ignition temperature [K]
    arrhenius_a: float = 1.0      # reaction-rate prefactor [s^-1]
    t_activation: float = 300.0   # activation temperature in exp(-T_a/T) [K]
    m_over_m1: float = 1.0        # molar-mass ratio gas/fuel [-]
    combustion_scale: float = 1e4  # effective magnitude of the heat-release term
    fuel_rate: float = 3e2        # fuel depletion rate multiplier [-]
    fuel_threshold: float = 0.2   # minimum availability for ignition [-]

    @property
    def delta_x(self) -> float:
        """Radiative absorption length, 3.5e-2 / epsilon [m]."""
        return 3.5e-2 / self.epsilon

    @property
    def delta_z(self) -> float:
        """Vertical emission length, 1.5 * epsilon [m]."""
        return 1.5 * self.epsilon

    def __post_init__(self):
        if self.h_c >= 0:
            raise ConfigurationError("combustion enthalpy h_c must be negative")
        if not 0.0 < self.epsilon <= 1.0:
            raise ConfigurationError("emissivity must lie in (0, 1]")
        for name in ("c_p", "rho", "kappa", "sigma", "chi", "t_ambient", "t_ignition", "t_activation"):
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"parameter {name} must be positive")
        for name in ("arrhenius_a", "combustion_scale", "fuel_rate", "fuel_threshold", "m_over_m1", "c_h", "c_w"):
            if getattr(self, name) < 0:
                raise ConfigurationError(f"parameter {name} must be nonnegative")

    def with_overrides(self, **kwargs) -> "ModelParams":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class DerivedCoeffs:
    """Coefficients of the temperature equation after division by ``rho c_p``.

    Sign conventions: the linear reaction appears as ``- c_reaction * T`` on
    the left-hand side, so ``c_reaction = -chi / (rho c_p)`` is negative and
    the net contribution is the Newton-cooling decay; the ambient parts of
    convection and vertical radiation live in ``c_forcing``. ``c_ignition``
    is positive (``h_c < 0``) and multiplies the gated Arrhenius factor
    ``T exp(-T_a / T)``.
    """

    c_diffusion: float
    c_advection: float
    c_reaction: float
    c_radiation: float
    c_nonlin_diffusion: float
    c_forcing: float
    c_ignition: float

    @classmethod
    def from_params(cls, par: ModelParams) -> "DerivedCoeffs":
        rcp = par.rho * par.c_p
        return cls(
            c_diffusion=par.kappa / rcp,
            c_advection=par.c_w,
            c_reaction=-par.chi / rcp,
            c_radiation=par.sigma * par.epsilon / (par.delta_z * rcp),
            c_nonlin_diffusion=4.0 * par.sigma * par.epsilon * par.delta_x / rcp,
            c_forcing=(par.chi * par.t_ambient + par.sigma * par.epsilon * par.t_ambient**4 / par.delta_z) / rcp,
            c_ignition=-par.combustion_scale * par.c_h * par.h_c * par.m_over_m1 * par.arrhenius_a / par.c_p,
        )


def reaction_rate(temp, fuel, par: ModelParams):
    """Gated Arrhenius rate ``1[T > T_ig and fuel > threshold] A_r T exp(-T_a/T)``.

    Both comparisons are strict; below either threshold the rate is exactly 0.
    Accepts scalars or arrays (broadcasting).
    """
    temp = np.asarray(temp, dtype=np.float64)
    gate = (temp > par.t_ignition) & (np.asarray(fuel) > par.fuel_threshold)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        rate = np.where(gate, par.arrhenius_a * temp * np.exp(-par.t_activation / temp), 0.0)
    return rate if rate.ndim else float(rate)


def source_terms(temp, grad, fuel_avail, wind, par: ModelParams):
    """Pointwise weak-form integrand pieces in physical units (not yet divided
    by ``rho c_p``).

    Returns ``(volumetric, flux)``: the volumetric coefficient multiplies the
    test function ``v`` and collects ``R_C + Q_W + Q_conv + Q_rz`` with the
    combustion term scaled by the fuel availability; ``flux`` multiplies
    ``-grad v`` after integration by parts and equals
    ``(kappa + 4 sigma eps delta_x T^3) grad T`` (conduction plus radiation).
    """
    temp = np.asarray(temp, dtype=np.float64)
    gx, gy = (np.asarray(g, dtype=np.float64) for g in grad)
    avail = np.asarray(fuel_avail, dtype=np.float64)
    bx, by = wind
    r = reaction_rate(temp, avail, par)
    r_c = -par.combustion_scale * par.rho * par.c_h * par.h_c * par.m_over_m1 * avail * r
    q_w = -par.rho * par.c_w * par.c_p * (bx * gx + by * gy)
    q_conv = par.chi * (par.t_ambient - temp)
    with np.errstate(over="ignore", invalid="ignore"):
        q_rz = par.sigma * par.epsilon / par.delta_z * (par.t_ambient**4 - temp**4)
        diffusivity = par.kappa + 4.0 * par.sigma * par.epsilon * par.delta_x * temp**3
    volumetric = r_c + q_w + q_conv + q_rz
    return volumetric, (diffusivity * gx, diffusivity * gy)


@dataclass(frozen=True)
class WindField:
    """Piecewise-constant-in-time prescribed wind ``b = (b_x, b_y)``.

    Segments are ``(t_start, t_end, b_x, b_y)`` tuples; the last segment is
    closed on the right. The alternating-direction operators require a wind
    that is spatially uniform within each segment.
    """

    segments: tuple = ((0.0, float("inf"), 0.0, 0.0),)

    @classmethod
    def steady(cls, bx: float, by: float) -> "WindField":
        return cls(((0.0, float("inf"), float(bx), float(by)),))

    @classmethod
    def from_segments(cls, segments) -> "WindField":
        segs = tuple((float(t0), float(t1), float(bx), float(by)) for t0, t1, bx, by in segments)
        if not segs:
            raise ConfigurationError("wind schedule must contain at least one segment")
        for t0, t1, _, _ in segs:
            if not t1 > t0:
                raise ConfigurationError(f"empty wind segment [{t0}, {t1})")
        for (_, t1a, _, _), (t0b, _, _, _) in zip(segs, segs[1:]):
            if t0b != t1a:
                raise ConfigurationError("wind segments must be contiguous")
        return cls(segs)

    def at(self, t: float) -> tuple[float, float]:
        for t0, t1, bx, by in self.segments:
            if t0 <= t < t1:
                return bx, by
        t0, t1, bx, by = self.segments[-1]
        if t == t1:
            return bx, by
        raise ConfigurationError(f"wind schedule does not cover t = {t}")

    def covers(self, t0: float, t1: float) -> bool:
        return self.segments[0][0] <= t0 and self.segments[-1][1] >= t1
