"""Crank-Nicolson (Cayley) stepping for banded Hermitian Hamiltonians.

One step solves (I + i dt/2 H(t_mid)) psi_next = (I - i dt/2 H(t_mid)) psi.
The step is exactly unitary in exact arithmetic for conjugate-symmetric H.
Periodic wrap entries are handled by a Sherman-Morrison rank-1 correction on
top of the banded solve.
"""

from __future__ import annotations

from typing import Callable

import numpy as np
from scipy.linalg import solve_banded

from .errors import NumericalError
from .trace import EvolutionTrace

__all__ = ["BandedHamiltonian", "cayley_evolve"]


class BandedHamiltonian:
    """Hermitian banded matrix in solve_banded layout plus optional periodic corners.

    bands[u + i - j, j] = H[i, j]; corner = (H[0, n-1], H[n-1, 0]).
    """

    def __init__(self, bands: np.ndarray, half_bandwidth: int, corner=None):
        self.bands = np.asarray(bands, dtype=complex)
        self.bw = half_bandwidth
        self.corner = corner
        self.n = self.bands.shape[1]

    def matvec(self, psi: np.ndarray) -> np.ndarray:
        bw, n = self.bw, self.n
        out = self.bands[bw] * psi
        for d in range(1, bw + 1):
            out[:-d] += self.bands[bw - d, d:] * psi[d:]
            out[d:] += self.bands[bw + d, :-d] * psi[:-d]
        if self.corner is not None:
            out[0] += self.corner[0] * psi[-1]
            out[-1] += self.corner[1] * psi[0]
        return out


def _cayley_step(h: BandedHamiltonian, psi: np.ndarray, a: complex) -> np.ndarray:
    """Solve (I + a H) psi_next = (I - a H) psi with a = i dt / 2."""
    bw, n = h.bw, h.n
    rhs = psi - a * h.matvec(psi)
    lhs = a * h.bands
    lhs[bw] += 1.0
    if h.corner is None:
        return solve_banded((bw, bw), lhs, rhs)
    # cyclic correction: M = A' + u v^T with u, v supported on the endpoints
    cu = a * h.corner[0]  # M[0, n-1]
    cl = a * h.corner[1]
    gamma = -lhs[bw, 0]
    u = np.zeros(n, dtype=complex)
    v = np.zeros(n, dtype=complex)
    u[0], u[-1] = gamma, cl
    v[0], v[-1] = 1.0, cu / gamma
    lhs2 = lhs.copy()
    lhs2[bw, 0] -= gamma
    lhs2[bw, -1] -= cu * cl / gamma
    y = solve_banded((bw, bw), lhs2, rhs)
    z = solve_banded((bw, bw), lhs2, u)
    return y - z * (v @ y) / (1.0 + v @ z)


def cayley_evolve(
    h_at: Callable[[float], BandedHamiltonian],
    psi0: np.ndarray,
    t_end: float,
    dt: float,
    dx: float,
    mode: np.ndarray | None = None,
    stride: int = 10,
    snapshot_times=(),
    t0: float = 0.0,
    meta: dict | None = None,
) -> EvolutionTrace:
    """Evolve psi0 to t_end recording norm/projection every `stride` steps.

    h_at(t_mid) returns the Hamiltonian evaluated at the step midpoint.
    Inner products use trapezoid quadrature (weight dx on the uniform grid).
    """
    n_steps = int(round((t_end - t0) / dt))
    psi = np.asarray(psi0, dtype=complex).copy()
    snapshot_times = np.asarray(sorted(snapshot_times), dtype=float)
    snap_steps = set(int(round((ts - t0) / dt)) for ts in snapshot_times)

    times, norms, projs, snaps, snap_ts = [], [], [], [], []

    def record(step):
        t = t0 + step * dt
        times.append(t)
        norms.append(float(np.sqrt(dx * np.vdot(psi, psi).real)))
        if mode is not None:
            projs.append(complex(dx * np.vdot(mode, psi)))
        if step in snap_steps:
            snaps.append(psi.copy())
            snap_ts.append(t)

    record(0)
    a = 0.5j * dt
    for m in range(n_steps):
        t_mid = t0 + (m + 0.5) * dt
        try:
            psi = _cayley_step(h_at(t_mid), psi, a)
        except ValueError as exc:  # scipy rejects NaN/Inf in the banded solve
            raise NumericalError(
                f"NaN/Inf in the Hamiltonian or state at step {m + 1} (t = {t_mid})"
            ) from exc
        if (m + 1) % stride == 0 or (m + 1) == n_steps or (m + 1) in snap_steps:
            if not np.isfinite(psi[:8]).all():
                raise NumericalError(f"NaN/Inf detected at step {m + 1} (t = {t0 + (m+1)*dt})")
            record(m + 1)

    return EvolutionTrace(
        times=np.asarray(times),
        norms=np.asarray(norms),
        projection=np.asarray(projs) if mode is not None else None,
        snapshot_times=np.asarray(snap_ts),
        snapshots=snaps,
        dt=dt,
        stride=stride,
        meta=meta or {},
    )
