"""Exception types shared across the solver."""


class ConfigurationError(ValueError):
    """Invalid mesh, degree, interval, or scenario parameters."""


class DomainError(ValueError):
    """Evaluation point outside the computational domain or raster."""


class FormatError(ValueError):
    """Malformed input file (fuel CSV, snapshot, config)."""


class FactorizationError(RuntimeError):
    """Exactly singular pivot encountered while factoring a banded operator."""
