"""Time-series container shared by the Schroedinger and Dirac evolvers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

__all__ = ["EvolutionTrace"]


@dataclass
class EvolutionTrace:
    """Observer samples of a single evolution run.

    times/norms/projection are sampled every `stride` steps (plus t = 0);
    snapshots hold the full solution at a sparse subset of times.
    """

    times: np.ndarray
    norms: np.ndarray
    projection: np.ndarray | None  # complex <mode, psi(t)>
    snapshot_times: np.ndarray
    snapshots: list[np.ndarray]
    dt: float
    stride: int
    meta: dict = field(default_factory=dict)

    def projection_series(self) -> np.ndarray:
        """|<mode, psi(t_m)>| for each recorded sample."""
        if self.projection is None:
            raise ConfigurationError("trace was recorded without a projection observer")
        return np.abs(self.projection)
