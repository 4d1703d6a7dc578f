"""Fermi-golden-rule quantities and decay fitting.

Gamma_0 and Lambda_0 are evaluated as broadened spectral sums over the
eigenpairs of the discretized Dirac operator: the delta function becomes a
unit-mass Lorentzian of width eta, the principal value becomes
R(e) = e / (e^2 + c^2).  Exponential rates are extracted by log-linear least
squares; power-law exponents by log-log least squares.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eig_banded, solve_banded

from .errors import ConfigurationError, NumericalError
from .dirac import DiracOperator
from .modes import SpinorField

__all__ = [
    "SpectralData",
    "DecayFit",
    "PowerLawFit",
    "spectral_data",
    "box_level_spacing",
    "golden_rule_rates",
    "gamma0",
    "lambda0",
    "eta_A",
    "predicted_g",
    "decay_window",
    "fit_exponential_decay",
    "fit_power_law",
]


@dataclass(frozen=True)
class SpectralData:
    """Eigenvalues of the discretized Dirac operator with coupling weights
    w_n = |<phi_n, sigma_3 alpha_star>|^2, zero mode excluded from sums."""

    eigenvalues: np.ndarray
    weights: np.ndarray
    zero_index: int
    dX: float
    gap_half_width: float

    @property
    def continuum_level_spacing(self) -> float:
        """Empirical level spacing of the discretized continuum near the gap edge.

        Centered differences pair every smooth level with a grid-scale partner
        at (nearly) the same energy, so near-coincident levels are merged
        before measuring the spacing.
        """
        e = self.eigenvalues
        above = np.sort(e[e > self.gap_half_width * 1.05])
        if len(above) < 10:
            above = np.sort(np.abs(e))
        gaps = np.diff(above)
        distinct = gaps[gaps > 1e-6 * max(self.gap_half_width, 1e-12)]
        if len(distinct) == 0:
            return float(gaps.max(initial=0.0))
        return float(np.median(distinct[:20]))


def spectral_data(op: DiracOperator, alpha_star: SpinorField) -> SpectralData:
    """Diagonalize the banded Dirac matrix and precompute sigma_3 coupling weights."""
    ab = op.bands()[:3]  # upper storage for eig_banded
    try:
        w, v = eig_banded(ab, lower=False, select="a")
    except Exception as exc:  # pragma: no cover
        raise NumericalError("banded eigensolver failed on the Dirac operator") from exc
    y = op.interleave(alpha_star.components.copy())
    y[1::2] *= -1.0  # sigma_3
    # eigenvectors are l2-normalized; L2 normalization multiplies by 1/sqrt(dX),
    # so <phi_n, y>_{L2} = sqrt(dX) * (v^H y)_n with y L2-normalized
    overlaps = v.conj().T @ y * op.dX
    weights = np.abs(overlaps) ** 2 / op.dX
    zero_index = int(np.argmin(np.abs(w)))
    return SpectralData(
        eigenvalues=w,
        weights=weights,
        zero_index=zero_index,
        dX=op.dX,
        gap_half_width=op.gap_half_width,
    )


def _continuum_terms(spec: SpectralData):
    mask = np.ones(len(spec.eigenvalues), dtype=bool)
    mask[spec.zero_index] = False
    return spec.eigenvalues[mask], spec.weights[mask]


def gamma0(spec: SpectralData, omega: float, eta: float | None = None) -> float:
    """Golden-rule rate (pi/4) <P_c s3 a, (delta(D+w) + delta(D-w)) P_c s3 a>
    with Lorentzian-broadened deltas of width eta (default: 4x level spacing)."""
    if omega <= 0:
        raise ConfigurationError("omega must be > 0")
    if eta is None:
        eta = 4.0 * spec.continuum_level_spacing
    if eta <= 0:
        raise ConfigurationError("broadening eta must be > 0")
    if eta < spec.continuum_level_spacing:
        warnings.warn(
            f"broadening eta = {eta} is below the local level spacing "
            f"{spec.continuum_level_spacing}; the delta is undersmoothed",
            stacklevel=2,
        )
    e, w = _continuum_terms(spec)
    lorentz = lambda z: (eta / np.pi) / (z**2 + eta**2)
    return float(np.pi / 4.0 * np.sum(w * (lorentz(e + omega) + lorentz(e - omega))))


def lambda0(spec: SpectralData, omega: float, pv_cutoff: float | None = None) -> float:
    """Principal-value shift (1/4) sum of w_n [R(E+w) + R(E-w)], R(e) = e/(e^2+c^2)."""
    if omega <= 0:
        raise ConfigurationError("omega must be > 0")
    if pv_cutoff is None:
        pv_cutoff = 4.0 * spec.continuum_level_spacing
    e, w = _continuum_terms(spec)
    reg = lambda z: z / (z**2 + pv_cutoff**2)
    return float(0.25 * np.sum(w * (reg(e + omega) + reg(e - omega))))


def box_level_spacing(op: DiracOperator, omega: float) -> float:
    """Analytic estimate of the box level spacing near energy omega.

    The continuum dispersion E(k) = sqrt(g^2 + v^2 k^2) with box modes at
    dk = pi/(2 hl) gives dE = v sqrt(E^2 - g^2)/E * dk; energies at or below
    the gap edge use a floor of 0.2 g of headroom so the estimate stays finite.
    """
    hl = 0.5 * float(op.X[-1] - op.X[0])
    g = op.gap_half_width
    e = max(abs(omega), g)
    slope = op.v_D * np.sqrt(max(e**2 - g**2, (0.2 * g) ** 2)) / max(e, 1e-300)
    return float(slope * np.pi / (2.0 * hl))


def golden_rule_rates(
    op: DiracOperator, alpha_star: SpinorField, omega: float, eta: float | None = None
) -> tuple[float, float]:
    """(gamma0, lambda0) evaluated through the resolvent of the Dirac operator.

    The broadened spectral sums equal resolvent inner products,

        sum_n w_n L_eta(E_n -+ omega) = (1/pi) Im <y, (D - (+-omega) - i eta)^{-1} y>,
        sum_n w_n R(E_n -+ omega)     =        Re <y, (D - (+-omega) - i eta)^{-1} y>,

    with y = sigma_3 alpha_star, so one banded solve per frequency replaces a
    full diagonalization.  This makes the large boxes needed for small eta
    affordable; default eta is 4x the estimated box level spacing at omega.
    """
    if omega <= 0:
        raise ConfigurationError("omega must be > 0")
    spacing = box_level_spacing(op, omega)
    if eta is None:
        eta = 4.0 * spacing
    if eta <= 0:
        raise ConfigurationError("broadening eta must be > 0")
    if abs(omega) > op.gap_half_width and eta < spacing:
        warnings.warn(
            f"broadening eta = {eta} is below the estimated level spacing "
            f"{spacing}; the delta is undersmoothed",
            stacklevel=2,
        )
    ab = op.bands()
    y = op.interleave(alpha_star.components.copy())
    y[1::2] *= -1.0  # sigma_3

    def resolvent(z: complex) -> complex:
        lhs = -ab.copy()
        lhs[2] += z
        x = solve_banded((2, 2), lhs, y)  # (z - D) x = y
        return complex(-op.dX * np.vdot(y, x))  # <y, (D - z)^{-1} y>

    g_plus = resolvent(omega + 1j * eta)
    g_minus = resolvent(-omega + 1j * eta)
    gamma = 0.25 * (g_plus.imag + g_minus.imag)
    lam = 0.25 * (g_plus.real + g_minus.real)
    return float(gamma), float(lam)


def eta_A(alpha_star: SpinorField, omega: float, t) -> np.ndarray | float:
    """Phase integral <alpha, sigma_3 alpha> * int_0^T cos(omega s) ds
    = <alpha, sigma_3 alpha> * sin(omega T)/omega."""
    a = alpha_star.components
    coef = float(alpha_star.dX * np.sum((np.abs(a[0]) ** 2 - np.abs(a[1]) ** 2)))
    return coef * np.sin(omega * np.asarray(t, dtype=float)) / omega


def predicted_g(gamma: float, lam: float, eta_a, beta: float, t):
    """Leading-order prediction g(T) = e^{i(beta eta_A(T) + beta^2 Lambda_0 T)}
    e^{-Gamma_0 beta^2 T}; |g| = e^{-Gamma_0 beta^2 T}."""
    t = np.asarray(t, dtype=float)
    eta_vals = np.asarray(eta_a, dtype=float) if not callable(eta_a) else np.asarray(eta_a(t))
    phase = beta * eta_vals + beta**2 * lam * t
    return np.exp(1j * phase) * np.exp(-gamma * beta**2 * t)


@dataclass(frozen=True)
class DecayFit:
    """Exponential fit y ~ amplitude * exp(-rate * t) over [window]."""

    rate: float
    amplitude: float
    residual_rms: float
    window: tuple[float, float]
    phase_drift: float = 0.0
    clamped: bool = False
    window_shrunk: bool = False


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    prefactor: float
    residual_rms: float


def fit_exponential_decay(times, values, window=None) -> DecayFit:
    """Least-squares line fit of log|y| vs t; rate = -slope (clamped at 0).

    Nonpositive samples shrink the window (flagged); complex input also fits
    the unwrapped phase slope.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values)
    mags = np.abs(values)
    if window is None:
        window = (float(times[0]), float(times[-1]))
    mask = (times >= window[0]) & (times <= window[1])
    shrunk = False
    positive = mags > 0
    if not positive.all():
        mask &= positive
        shrunk = True
    if mask.sum() < 10:
        raise ConfigurationError(
            f"degenerate fit window {window}: only {int(mask.sum())} positive samples"
        )
    t, y = times[mask], mags[mask]
    slope, intercept = np.polyfit(t, np.log(y), 1)
    resid = np.log(y) - (slope * t + intercept)
    rate = -slope
    clamped = rate < 0
    phase_drift = 0.0
    if np.iscomplexobj(values):
        ph = np.unwrap(np.angle(values[mask]))
        phase_drift = float(np.polyfit(t, ph, 1)[0])
    return DecayFit(
        rate=max(rate, 0.0),
        amplitude=float(np.exp(intercept)),
        residual_rms=float(np.sqrt(np.mean(resid**2))),
        window=(float(t[0]), float(t[-1])),
        phase_drift=phase_drift,
        clamped=bool(clamped),
        window_shrunk=shrunk,
    )


def decay_window(times, values, start: float, floor: float = 0.3,
                 min_width: float = 100.0) -> tuple[float, float]:
    """Fit window [start, t_stop] ending when |y| first drops below `floor`.

    Once the mode is strongly depleted the projection saturates (the radiated
    background and box-quantization recurrences dominate), so a fixed long
    window biases the fitted rate downward.  The window keeps at least
    `min_width` so the fit stays well conditioned.
    """
    times = np.asarray(times, dtype=float)
    mags = np.abs(np.asarray(values))
    t_stop = float(times[-1])
    below = np.nonzero(mags < floor)[0]
    if len(below):
        t_stop = float(times[below[0]])
    t_stop = min(float(times[-1]), max(t_stop, start + min_width))
    return (float(start), t_stop)


def fit_power_law(betas, gammas) -> PowerLawFit:
    """Slope of log(Gamma) vs log(beta): Gamma ~ prefactor * beta^exponent."""
    betas = np.asarray(betas, dtype=float)
    gammas = np.asarray(gammas, dtype=float)
    if len(betas) < 3:
        raise ConfigurationError("power-law fit needs at least 3 points")
    if (betas <= 0).any() or (gammas <= 0).any():
        raise ConfigurationError("power-law fit requires positive rates and amplitudes")
    slope, intercept = np.polyfit(np.log(betas), np.log(gammas), 1)
    resid = np.log(gammas) - (slope * np.log(betas) + intercept)
    return PowerLawFit(
        exponent=float(slope),
        prefactor=float(np.exp(intercept)),
        residual_rms=float(np.sqrt(np.mean(resid**2))),
    )
