"""Radiative decay of topologically protected edge modes under time-periodic
forcing: Floquet-Bloch band structure, effective Dirac dynamics, long-time
Crank-Nicolson evolution, and Fermi-golden-rule decay analysis."""

__version__ = "0.1.0"

from .errors import ConfigurationError, FloquetEdgeError, ModelError, NumericalError
from .model import ForcingSpec, GridSpec, PotentialSpec, builtin_potential, default_grid
from .bloch import BandStructure, DiracParameters, band_structure, dirac_parameters
from .modes import (
    DefectMode,
    SpinorField,
    assemble_dw_hamiltonian,
    dirac_zero_mode_analytic,
    dirac_zero_mode_numeric,
    envelope_from_wavepacket,
    midgap_mode,
    wavepacket_from_envelope,
)
from .dirac import DiracOperator, assemble_dirac_operator, evolve_dirac, g_series, slow_grid
from .schrodinger import evolve_schrodinger, projection_series
from .analysis import (
    DecayFit,
    PowerLawFit,
    SpectralData,
    eta_A,
    fit_exponential_decay,
    fit_power_law,
    gamma0,
    lambda0,
    predicted_g,
    spectral_data,
)
from .trace import EvolutionTrace
from .config import ExperimentConfig, load_config

__all__ = [
    "__version__",
    "FloquetEdgeError",
    "ConfigurationError",
    "ModelError",
    "NumericalError",
    "ForcingSpec",
    "GridSpec",
    "PotentialSpec",
    "builtin_potential",
    "default_grid",
    "BandStructure",
    "DiracParameters",
    "band_structure",
    "dirac_parameters",
    "DefectMode",
    "SpinorField",
    "assemble_dw_hamiltonian",
    "midgap_mode",
    "dirac_zero_mode_analytic",
    "dirac_zero_mode_numeric",
    "wavepacket_from_envelope",
    "envelope_from_wavepacket",
    "DiracOperator",
    "slow_grid",
    "assemble_dirac_operator",
    "evolve_dirac",
    "g_series",
    "evolve_schrodinger",
    "projection_series",
    "SpectralData",
    "spectral_data",
    "gamma0",
    "lambda0",
    "eta_A",
    "predicted_g",
    "DecayFit",
    "PowerLawFit",
    "fit_exponential_decay",
    "fit_power_law",
    "EvolutionTrace",
    "ExperimentConfig",
    "load_config",
]
