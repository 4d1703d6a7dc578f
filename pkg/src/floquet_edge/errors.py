"""Exception hierarchy shared across the package."""


class FloquetEdgeError(Exception):
    """Base class for all package errors."""


class ConfigurationError(FloquetEdgeError):
    """Invalid or inconsistent configuration (grids, windows, missing observers)."""


class ModelError(FloquetEdgeError):
    """Model construction failed (no Dirac point, no defect mode, bad wall)."""


class NumericalError(FloquetEdgeError):
    """A numerical routine failed (eigensolver breakdown, NaN during stepping)."""
