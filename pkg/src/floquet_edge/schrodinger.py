"""Long-time Crank-Nicolson integration of the parametrically forced
Schroedinger equation

    i dpsi/dt = [-d^2/dx^2 + U_eps(x) + 2i eps beta cos(eps omega t) d/dx] psi,

with norm/projection observers recorded along the way.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigurationError
from .model import ForcingSpec, GridSpec, PotentialSpec, eval_potential
from .stepping import BandedHamiltonian, cayley_evolve
from .trace import EvolutionTrace

__all__ = ["evolve_schrodinger", "projection_series"]


def evolve_schrodinger(
    spec: PotentialSpec,
    forcing: ForcingSpec,
    grid: GridSpec,
    psi0: np.ndarray,
    t_end: float,
    dt: float = 0.01,
    mode: np.ndarray | None = None,
    stride: int = 10,
    snapshot_times=(),
) -> EvolutionTrace:
    """Evolve psi0 to t_end; the forcing coefficient is sampled at step midpoints.

    The projection observer records <mode, psi(t)> (trapezoid inner product).
    """
    if dt <= 0:
        raise ConfigurationError("dt must be positive")
    if forcing.beta > 0:
        t_forcing = 2.0 * np.pi / (spec.eps * forcing.omega)
        if dt > t_forcing / 64.0 + 1e-12:
            raise ConfigurationError(
                f"dt = {dt} does not resolve the forcing period {t_forcing}"
            )
    x = grid.points()
    dx = grid.dx
    n = len(x)
    u = np.asarray(eval_potential(spec, x), dtype=float)
    diag = (2.0 / dx**2 + u).astype(complex)
    lap_off = -1.0 / dx**2
    periodic = grid.boundary == "periodic"
    ab = np.zeros((3, n), dtype=complex)
    ab[1] = diag

    def h_at(t_mid: float) -> BandedHamiltonian:
        # forcing term 2i eps beta A(eps t) d/dx, centered differences
        c = 2.0 * spec.eps * forcing.beta * np.cos(forcing.omega * spec.eps * t_mid)
        upper = lap_off + 1j * c / (2.0 * dx)
        lower = lap_off - 1j * c / (2.0 * dx)
        ab[0, 1:] = upper
        ab[2, :-1] = lower
        corner = (lower, upper) if periodic else None
        return BandedHamiltonian(ab, half_bandwidth=1, corner=corner)

    return cayley_evolve(
        h_at,
        np.asarray(psi0, dtype=complex),
        t_end,
        dt,
        dx=dx,
        mode=mode,
        stride=stride,
        snapshot_times=snapshot_times,
        meta={
            "model": "schrodinger",
            "beta": forcing.beta,
            "omega": forcing.omega,
            "eps": spec.eps,
            "boundary": grid.boundary,
        },
    )


def projection_series(trace: EvolutionTrace) -> np.ndarray:
    """|<mode, psi(t_m)>| time series."""
    return trace.projection_series()
