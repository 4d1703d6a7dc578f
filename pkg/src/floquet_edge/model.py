"""Potentials, domain walls, forcing, and spatial grids.

The dimensionless model is a 1D Schroedinger operator -d^2/dx^2 + U(x) with

    U(x) = V(x) + eps * kappa(eps * x) * W(x),

where V has period 1/2, W has period 1 with W(x + 1/2) = -W(x), and kappa
is a domain wall interpolating between -kappa_inf and +kappa_inf.  Three
built-in families are provided: a smooth cosine lattice, a dimerized array
of square wells with a staircase wall, and the same wells with a sharp
(sign-function) wall.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from .errors import ConfigurationError

__all__ = [
    "GridSpec",
    "PotentialSpec",
    "ForcingSpec",
    "wall_tanh",
    "wall_piecewise",
    "wall_sign",
    "PIECEWISE_STEP",
    "builtin_potential",
    "eval_potential",
    "forcing_value",
]

# Break point of the staircase wall; arctanh(1/2).
PIECEWISE_STEP = float(np.arctanh(0.5))


@dataclass(frozen=True)
class GridSpec:
    """Uniform spatial grid on [-L, L] with an integer number of points per unit cell."""

    half_length: float
    points_per_period: int = 64
    boundary: Literal["periodic", "vanishing"] = "vanishing"

    def __post_init__(self):
        if self.points_per_period < 8:
            raise ConfigurationError(
                f"points_per_period must be >= 8, got {self.points_per_period}"
            )
        n_total = 2.0 * self.half_length * self.points_per_period
        if n_total <= 0 or abs(n_total - round(n_total)) > 1e-9:
            raise ConfigurationError(
                f"2*L*points_per_period = {n_total} is not a positive integer"
            )
        if self.boundary not in ("periodic", "vanishing"):
            raise ConfigurationError(f"unknown boundary kind {self.boundary!r}")

    @property
    def dx(self) -> float:
        return 1.0 / self.points_per_period

    @property
    def n_points(self) -> int:
        """Number of unknowns: periodic grids drop the duplicate right endpoint,
        vanishing grids drop both (Dirichlet) endpoints."""
        n_cells = round(2.0 * self.half_length * self.points_per_period)
        return n_cells if self.boundary == "periodic" else n_cells - 1

    def points(self) -> np.ndarray:
        if self.boundary == "periodic":
            j = np.arange(self.n_points)
            return -self.half_length + j * self.dx
        j = np.arange(1, self.n_points + 1)
        return -self.half_length + j * self.dx


def wall_tanh(x):
    return np.tanh(x)


def wall_piecewise(y):
    """Odd staircase wall: 0, 1/2, 1 on [0, y0), [y0, 2*y0), [2*y0, inf)."""
    y = np.asarray(y, dtype=float)
    a = np.abs(y)
    out = np.where(a < PIECEWISE_STEP, 0.0, np.where(a < 2 * PIECEWISE_STEP, 0.5, 1.0))
    return np.sign(y) * out


def wall_sign(shift: float = 0.0) -> Callable:
    """Sharp wall sgn(X + shift).  sgn(0) is evaluated as +1 so the wall is
    two-valued on the grid."""

    def kappa(y):
        return np.where(np.asarray(y, dtype=float) + shift >= 0.0, 1.0, -1.0)

    return kappa


def _theta_periodic(x, a: float):
    """Unit-periodized square bump: 1 on |x mod 1| <= a (closed endpoints), else 0."""
    r = np.mod(np.asarray(x, dtype=float) + 0.5, 1.0) - 0.5
    return np.where(np.abs(r) <= a + 1e-12, 1.0, 0.0)


def q_plus(x, a: float = 0.05):
    return _theta_periodic(x, a) + _theta_periodic(x + 0.5, a)


def q_minus(x, a: float = 0.05):
    return _theta_periodic(x, a) - _theta_periodic(x + 0.5, a)


@dataclass(frozen=True)
class PotentialSpec:
    """Bulk potential V, modulation W, wall kappa, and the scale eps."""

    V: Callable
    W: Callable
    kappa: Callable
    eps: float
    kappa_inf: float = 1.0
    family: int | None = None
    smooth: bool = True
    wall_kind: str = "tanh"

    def __post_init__(self):
        if self.kappa_inf <= 0:
            raise ConfigurationError("kappa_inf must be positive")


@dataclass(frozen=True)
class ForcingSpec:
    """Time-periodic forcing amplitude beta and slow frequency omega.

    The Schroedinger evolver assembles the term 2i*eps*beta*cos(omega*eps*t) d/dx;
    the Dirac evolver uses scale*beta*cos(omega*T) sigma_3.
    """

    beta: float
    omega: float = 0.6

    def __post_init__(self):
        if self.beta < 0:
            raise ConfigurationError("beta must be >= 0")
        if self.omega <= 0:
            raise ConfigurationError("omega must be > 0")


def builtin_potential(family: int, eps: float, wall_shift: float = 0.125) -> PotentialSpec:
    """Return one of the three built-in potential families.

    Family 1: V = cos(4 pi x), W = cos(2 pi x), kappa = tanh.
    Family 2: V = -5 Q+(x; 1/20), W = -5 Q-(x; 1/20), kappa = staircase.
    Family 3: same wells as family 2 with kappa = sgn(X + wall_shift); the
    default shift 1/8 keeps the transition away from well centers at eps = 1/2.
    """
    if not (0.0 < eps <= 1.0):
        raise ConfigurationError(f"eps must be in (0, 1], got {eps}")
    if family == 1:
        return PotentialSpec(
            V=lambda x: np.cos(4 * np.pi * np.asarray(x, dtype=float)),
            W=lambda x: np.cos(2 * np.pi * np.asarray(x, dtype=float)),
            kappa=wall_tanh,
            eps=eps,
            family=1,
            smooth=True,
            wall_kind="tanh",
        )
    if family == 2:
        return PotentialSpec(
            V=lambda x: -5.0 * q_plus(x),
            W=lambda x: -5.0 * q_minus(x),
            kappa=wall_piecewise,
            eps=eps,
            family=2,
            smooth=False,
            wall_kind="piecewise",
        )
    if family == 3:
        return PotentialSpec(
            V=lambda x: -5.0 * q_plus(x),
            W=lambda x: -5.0 * q_minus(x),
            kappa=wall_sign(wall_shift),
            eps=eps,
            family=3,
            smooth=False,
            wall_kind="sign",
        )
    raise ConfigurationError(f"unknown potential family {family}; expected 1, 2 or 3")


def eval_potential(spec: PotentialSpec, x):
    """U(x) = V(x) + eps * kappa(eps x) * W(x)."""
    x = np.asarray(x, dtype=float)
    return spec.V(x) + spec.eps * spec.kappa(spec.eps * x) * spec.W(x)


def forcing_value(f: ForcingSpec, eps: float, t):
    """beta * cos(omega * eps * t); the evolvers apply their own prefactors."""
    return f.beta * np.cos(f.omega * eps * np.asarray(t, dtype=float))


def default_grid(family: int, eps: float = 0.5, boundary: str = "vanishing") -> GridSpec:
    """Grid defaults: 64 points per period for the smooth family, 80 for the
    square wells so the well edges +-1/20 land on grid points; L chosen so the
    defect-mode tail is negligible at the boundary."""
    if family == 1:
        return GridSpec(half_length=400.0, points_per_period=64, boundary=boundary)
    return GridSpec(half_length=200.0, points_per_period=80, boundary=boundary)
