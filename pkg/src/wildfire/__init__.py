"""Wildfire spread simulator: tensor-product B-spline finite elements with
quasi-implicit alternating-direction time integration."""

from ._accel import get_backend, set_backend, set_workers
from .physics import DerivedCoeffs, ModelParams, WindField
from .schemes import SchemeKind, SimState

__all__ = [
    "DerivedCoeffs",
    "ModelParams",
    "SchemeKind",
    "SimState",
    "WindField",
    "get_backend",
    "set_backend",
    "set_workers",
]

__version__ = "0.1.0"
