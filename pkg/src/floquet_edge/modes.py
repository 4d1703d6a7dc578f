"""Defect modes and multiscale wavepacket assembly.

Computes the mid-gap eigenpair of the domain-wall Schroedinger operator, the
Dirac zero mode in closed form and numerically, and the envelope <-> wavepacket
maps linking the slow Dirac description to the fast Schroedinger one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.integrate import cumulative_trapezoid
from scipy.linalg import eigh
from scipy.sparse.linalg import eigsh

from .errors import ConfigurationError, ModelError
from .dirac import DiracOperator
from .model import GridSpec, PotentialSpec, eval_potential

__all__ = [
    "DefectMode",
    "SpinorField",
    "assemble_dw_hamiltonian",
    "midgap_mode",
    "dirac_zero_mode_analytic",
    "dirac_zero_mode_numeric",
    "wavepacket_from_envelope",
    "envelope_from_wavepacket",
]

DENSE_DIAG_LIMIT = 2000


@dataclass
class DefectMode:
    """Normalized mid-gap eigenpair of the domain-wall Hamiltonian."""

    energy: float
    psi: np.ndarray
    x: np.ndarray
    residual: float
    ambiguous: bool = False
    candidates: list = field(default_factory=list)  # all in-gap energies found

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])


@dataclass
class SpinorField:
    """Two-component complex field on the slow grid."""

    X: np.ndarray
    components: np.ndarray  # shape (2, n)

    @property
    def dX(self) -> float:
        return float(self.X[1] - self.X[0])

    def norm(self) -> float:
        return float(np.sqrt(self.dX * np.sum(np.abs(self.components) ** 2)))

    def inner(self, other: "SpinorField") -> complex:
        return complex(self.dX * np.sum(np.conj(self.components) * other.components))


def assemble_dw_hamiltonian(spec: PotentialSpec, grid: GridSpec) -> sp.csr_matrix:
    """Three-point-stencil matrix of -d^2/dx^2 + U_eps on the grid.

    Vanishing BC gives a plain tridiagonal matrix, periodic BC adds wrap corners.
    """
    x = grid.points()
    dx = grid.dx
    u = np.asarray(eval_potential(spec, x), dtype=float)
    n = len(x)
    main = 2.0 / dx**2 + u
    off = np.full(n - 1, -1.0 / dx**2)
    h = sp.diags([off, main, off], offsets=[-1, 0, 1], format="lil")
    if grid.boundary == "periodic":
        h[0, n - 1] = -1.0 / dx**2
        h[n - 1, 0] = -1.0 / dx**2
    return h.tocsr()


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the largest-magnitude entry is real positive."""
    j = int(np.argmax(np.abs(vec)))
    ph = vec[j] / abs(vec[j])
    return vec / ph


def midgap_mode(
    h: sp.spmatrix,
    e_d: float,
    gap_half_width: float,
    grid: GridSpec,
    n_candidates: int = 8,
) -> DefectMode:
    """Eigenpair closest to E_D inside the bulk gap (E_D +- gap_half_width).

    Raises ModelError if no eigenvalue lies in the gap; flags ambiguity when
    several do (multimode walls) while returning the one nearest E_D.
    """
    n = h.shape[0]
    if n <= DENSE_DIAG_LIMIT:
        w, v = eigh(h.toarray())
    else:
        w, v = eigsh(h, k=n_candidates, sigma=e_d, which="LM")
    order = np.argsort(np.abs(w - e_d))
    w, v = w[order], v[:, order]
    in_gap = np.abs(w - e_d) < gap_half_width
    if not in_gap.any():
        raise ModelError(
            f"no defect mode: no eigenvalue within {gap_half_width} of E_D = {e_d}"
        )
    candidates = [float(e) for e in w[in_gap]]
    energy = candidates[0]
    psi = v[:, int(np.flatnonzero(in_gap)[0])].astype(complex)
    dx = grid.dx
    psi = _fix_phase(psi / np.sqrt(dx * np.vdot(psi, psi).real))
    x = grid.points()
    # reject states leaning on the box edge: the outer 10% of the domain must
    # carry almost no mass (a delocalized state carries ~10% there)
    mass_outer = dx * np.sum(np.abs(psi[np.abs(x) > 0.9 * grid.half_length]) ** 2)
    if mass_outer > 0.05:
        raise ModelError(
            f"in-gap state is not localized: {mass_outer:.3f} of its mass lies "
            f"in the outer 10% of the box"
        )
    residual = float(np.linalg.norm(h @ psi - energy * psi) * np.sqrt(dx))
    return DefectMode(
        energy=float(energy),
        psi=psi,
        x=x,
        residual=residual,
        ambiguous=len(candidates) > 1,
        candidates=candidates,
    )


def dirac_zero_mode_analytic(kappa, theta_sharp: float, v_d: float, X: np.ndarray) -> SpinorField:
    """Closed-form zero mode (1, i)^T exp(-(theta/v) int_0^X kappa), unit L2 norm.

    For theta/v < 0 the normalizable branch carries the (1, -i) spinor instead.
    """
    X = np.asarray(X, dtype=float)
    kap = np.asarray(kappa(X), dtype=float)
    if kap[-1] <= 0 or kap[0] >= 0:
        raise ModelError("wall does not change sign from - to +; zero mode not normalizable")
    s = theta_sharp / v_d
    integral = cumulative_trapezoid(kap, X, initial=0.0)
    integral -= np.interp(0.0, X, integral)
    exponent = -abs(s) * integral  # decaying on both sides for either sign of s
    exponent -= exponent.max()
    envelope = np.exp(exponent)
    spinor_sign = 1.0 if s > 0 else -1.0
    comps = np.stack([envelope, spinor_sign * 1j * envelope])
    f = SpinorField(X=X, components=comps)
    f.components /= f.norm()
    boundary = np.abs(f.components[:, [0, -1]]).max()
    if boundary > 0.05 * np.abs(f.components).max():
        raise ModelError("zero mode does not vanish at the slow-grid boundary; enlarge the domain")
    return f


def _smoothest_combination(vectors: np.ndarray) -> np.ndarray:
    """Within a (near-)degenerate span, return the combination with the least
    grid-scale oscillation (largest eigenvalue of the nearest-neighbor smoother).

    Centered differences carry a spurious staggered partner of every smooth
    state (fermion doubling); the physical member is the smooth one.
    """
    k = vectors.shape[1]
    smoothed = np.empty_like(vectors)
    for i in range(k):
        u = vectors[:, i].reshape(-1, 2)  # interleaved sites x spinor
        s = u.copy()
        s[1:-1] = 0.5 * u[1:-1] + 0.25 * (u[:-2] + u[2:])
        smoothed[:, i] = s.reshape(-1)
    gram = vectors.conj().T @ smoothed
    gram = 0.5 * (gram + gram.conj().T)
    ew, ev = eigh(gram)
    return vectors @ ev[:, -1]


def dirac_zero_mode_numeric(op: DiracOperator) -> tuple[SpinorField, float]:
    """Eigenpair of the discretized Dirac operator nearest zero energy.

    The exactly degenerate fermion-doubling partner of the zero mode is
    projected out by selecting the smooth member of the near-zero cluster.
    """
    m = op.matrix()
    w, v = eigsh(m, k=6, sigma=0.0, which="LM")
    order = np.argsort(np.abs(w))
    w, v = w[order], v[:, order]
    edge = op.gap_half_width
    cluster_tol = 1e-6 * edge
    cluster = np.abs(w) <= max(cluster_tol, 2 * abs(w[0]))
    n_cluster = int(cluster.sum())
    if abs(w[0]) > 0.5 * edge:
        raise ModelError(
            f"ambiguous zero mode: nearest eigenvalue {w[0]} is not isolated from "
            f"the gap edge {edge}"
        )
    if n_cluster > 2:
        raise ModelError(
            f"ambiguous zero mode: {n_cluster} eigenvalues clustered at zero: {w[cluster]}"
        )
    vec = _smoothest_combination(v[:, cluster].astype(complex))
    lam = float((np.vdot(vec, m @ vec) / np.vdot(vec, vec)).real)
    if abs(lam) > 1e-6 * edge:
        raise ModelError(f"zero-mode eigenvalue {lam} exceeds tolerance 1e-6 * {edge}")
    vec = _fix_phase(vec)
    f = SpinorField(X=op.X, components=op.deinterleave(vec))
    f.components /= f.norm()
    if np.abs(f.components[:, [0, -1]]).max() > 1e-3:
        raise ModelError("numeric zero mode reaches the boundary; enlarge the slow domain")
    return f, lam


def _extended_bloch(grid: GridSpec, phi_cell: np.ndarray) -> np.ndarray:
    """Quasi-periodic extension of a unit-cell Bloch mode at k = pi to the grid:
    Phi(x + 1) = -Phi(x)."""
    n_cell = len(phi_cell)
    if n_cell != grid.points_per_period:
        raise ConfigurationError(
            f"cell resolution {n_cell} does not match grid points_per_period "
            f"{grid.points_per_period}"
        )
    x = grid.points()
    cell_index = np.round((x - np.floor(x + 1e-9)) * n_cell).astype(int) % n_cell
    parity = np.where(np.floor(x + 1e-9).astype(int) % 2 == 0, 1.0, -1.0)
    return parity * phi_cell[cell_index]


def wavepacket_from_envelope(
    alpha: SpinorField, phi1: np.ndarray, phi2: np.ndarray, eps: float, grid: GridSpec
) -> np.ndarray:
    """psi(x) = sqrt(eps) [alpha_1(eps x) Phi_1(x) + alpha_2(eps x) Phi_2(x)]."""
    x = grid.points()
    ext1 = _extended_bloch(grid, phi1)
    ext2 = _extended_bloch(grid, phi2)
    a1 = _sample_envelope(alpha, eps * x)
    a2 = _sample_envelope(alpha, eps * x, component=1)
    return np.sqrt(eps) * (a1 * ext1 + a2 * ext2)


def _sample_envelope(alpha: SpinorField, X_query: np.ndarray, component: int = 0) -> np.ndarray:
    comp = alpha.components[component]
    re = np.interp(X_query, alpha.X, comp.real, left=0.0, right=0.0)
    im = np.interp(X_query, alpha.X, comp.imag, left=0.0, right=0.0)
    return re + 1j * im


def envelope_from_wavepacket(
    psi: np.ndarray, phi1: np.ndarray, phi2: np.ndarray, eps: float, grid: GridSpec
) -> SpinorField:
    """Per-cell demodulation: alpha_j(eps n) = eps^{-1/2} <Phi_j, psi>_{cell n}.

    Cells are centered at the integers; incomplete boundary cells are dropped.
    """
    x = grid.points()
    ext1 = _extended_bloch(grid, phi1)
    ext2 = _extended_bloch(grid, phi2)
    n_cell = grid.points_per_period
    dx = grid.dx
    centers = np.arange(int(np.ceil(x[0] + 0.5)), int(np.floor(x[-1] - 0.5)) + 1)
    a = np.empty((2, len(centers)), dtype=complex)
    for i, m in enumerate(centers):
        j0 = int(np.searchsorted(x, m - 0.5 - 1e-9))
        sl = slice(j0, j0 + n_cell)
        a[0, i] = dx * np.vdot(ext1[sl], psi[sl])
        a[1, i] = dx * np.vdot(ext2[sl], psi[sl])
    return SpinorField(X=eps * centers.astype(float), components=a / np.sqrt(eps))
