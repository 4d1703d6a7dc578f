"""Experiment drivers: build the operators described by an ExperimentConfig,
run them, and export the standard CSV/JSON artifacts into an output directory.

Each driver returns a small result dict that is also embedded in the run
manifest.  The CLI is a thin argparse layer over these functions.
"""

from __future__ import annotations

import time
from pathlib import Path

import numpy as np

from .analysis import (
    box_level_spacing,
    decay_window,
    fit_exponential_decay,
    fit_power_law,
    golden_rule_rates,
)
from .bloch import band_structure, dirac_eigenbasis, dirac_parameters
from .config import ExperimentConfig, config_hash
from .dirac import assemble_dirac_operator, evolve_dirac, slow_grid
from .errors import ConfigurationError
from .io import (
    write_bands_csv,
    write_dirac_params_json,
    write_envelope_csv,
    write_fgr_csv,
    write_manifest,
    write_mode_csv,
    write_powerlaw_csv,
    write_snapshots_csv,
    write_sweep_csv,
    write_trace_csv,
)
from .model import ForcingSpec, GridSpec, builtin_potential, default_grid
from .modes import (
    assemble_dw_hamiltonian,
    dirac_zero_mode_analytic,
    envelope_from_wavepacket,
    midgap_mode,
)
from .trace import EvolutionTrace

__all__ = ["run_bands", "run_evolve", "run_sweep", "run_fgr", "synthetic_trace"]

SWEEP_BETAS = tuple(np.round(np.geomspace(0.008, 0.02, 6), 6))


def _spec_and_grid(config: ExperimentConfig):
    spec = builtin_potential(config.family, config.eps, wall_shift=config.wall_shift)
    grid = default_grid(config.family)
    if config.half_length or config.points_per_period:
        grid = GridSpec(
            half_length=config.half_length or grid.half_length,
            points_per_period=config.points_per_period or grid.points_per_period,
            boundary=grid.boundary,
        )
    return spec, grid


def _dirac_params(config: ExperimentConfig, spec):
    kwargs = {"n_cell": config.n_cell} if config.n_cell else {}
    return dirac_parameters(spec, **kwargs)


def run_bands(config: ExperimentConfig, outdir, n_bands: int = 8, n_k: int = 101) -> dict:
    """Export bands.csv over one Brillouin zone plus dirac_params.json."""
    t0 = time.time()
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    chash = config_hash(config)
    spec, _ = _spec_and_grid(config)
    params = _dirac_params(config, spec)
    ks = np.linspace(0.0, 2.0 * np.pi, n_k)
    n_cell = config.n_cell or (64 if spec.smooth else 640)
    x_cell = np.arange(n_cell) / n_cell
    bs = band_structure(np.asarray(spec.V(x_cell), dtype=float), ks, n_bands=n_bands)
    write_bands_csv(outdir / "bands.csv", ks, bs.energies, chash)
    write_dirac_params_json(outdir / "dirac_params.json", params,
                            params.schrodinger_gap_half_width, chash)
    results = {"v_D": params.v_D, "theta_sharp": params.theta_sharp, "E_D": params.E_D}
    write_manifest(outdir, config, time.time() - t0, results)
    return results


def synthetic_trace(config: ExperimentConfig) -> EvolutionTrace:
    """Exact exponential generator p(t) = exp(-beta^2 t): a self-test hook for
    the sweep/fit pipeline (fitted power-law exponent is exactly 2)."""
    n = max(int(config.t_end / (config.dt * config.stride)), 50)
    t = np.linspace(0.0, config.t_end, n + 1)
    p = np.exp(-config.beta**2 * t).astype(complex)
    return EvolutionTrace(
        times=t,
        norms=np.ones_like(t),
        projection=p,
        snapshot_times=np.array([]),
        snapshots=[],
        dt=config.dt,
        stride=config.stride,
        meta={"model": "synthetic", "beta": config.beta},
    )


def _evolve_trace(config: ExperimentConfig):
    """Run one evolution; returns (trace, grid_points, extras, dirac_flag)."""
    forcing = ForcingSpec(beta=config.beta, omega=config.omega)
    if config.model == "synthetic":
        return synthetic_trace(config), None, {}, False
    if config.model == "schrodinger":
        spec, grid = _spec_and_grid(config)
        params = _dirac_params(config, spec)
        h = assemble_dw_hamiltonian(spec, grid)
        mode = midgap_mode(h, params.E_D, params.schrodinger_gap_half_width, grid)
        trace = evolve_schrodinger_with(config, spec, grid, forcing, mode)
        extras = {"mode_energy": mode.energy, "E_D": params.E_D,
                  "mode": mode, "spec": spec, "grid": grid, "params": params}
        return trace, grid.points(), extras, False
    # dirac
    spec, _ = _spec_and_grid(config)
    params = _dirac_params(config, spec)
    X = slow_grid(config.slow_half_length, config.slow_dX)
    op = assemble_dirac_operator(params, spec.kappa, X, max_dX=config.slow_dX)
    alpha = dirac_zero_mode_analytic(spec.kappa, params.theta_sharp, params.v_D, X)
    scale = 1.0 if config.preset == "normalized" else params.v_D
    trace = evolve_dirac(
        op, forcing, alpha.components, config.t_end, config.dt,
        mode=alpha.components, stride=config.stride,
        snapshot_times=config.snapshot_times, forcing_scale=scale,
    )
    extras = {"op": op, "alpha": alpha, "params": params, "forcing_scale": scale}
    return trace, X, extras, True


def evolve_schrodinger_with(config, spec, grid, forcing, mode):
    from .schrodinger import evolve_schrodinger

    return evolve_schrodinger(
        spec, forcing, grid, mode.psi, config.t_end, dt=config.dt,
        mode=mode.psi, stride=config.stride, snapshot_times=config.snapshot_times,
    )


def run_evolve(config: ExperimentConfig, outdir) -> dict:
    """Evolve the defect mode and export trace.csv (+ snapshots, mode files)."""
    t0 = time.time()
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    chash = config_hash(config)
    trace, x, extras, dirac = _evolve_trace(config)
    write_trace_csv(outdir / "trace.csv", trace, chash, dirac=dirac)
    if config.snapshot_times and x is not None:
        write_snapshots_csv(outdir / "snapshots.csv", trace, x, chash, dirac=dirac)
    if config.model == "schrodinger":
        mode, spec, grid = extras["mode"], extras["spec"], extras["grid"]
        write_mode_csv(outdir / "mode.csv", x, mode.psi, chash)
        # envelope extraction needs the cell basis at the grid's own resolution
        n_cell = grid.points_per_period
        x_cell = np.arange(n_cell) / n_cell
        phi1, phi2, _ = dirac_eigenbasis(np.asarray(spec.V(x_cell), dtype=float))
        env = envelope_from_wavepacket(mode.psi, phi1, phi2, config.eps, grid)
        write_envelope_csv(outdir / "mode_envelope.csv", env.X, env.components, chash)
    if dirac:
        alpha = extras["alpha"]
        write_envelope_csv(outdir / "mode_envelope.csv", alpha.X, alpha.components, chash)
    p = trace.projection
    results = {
        "final_abs_projection": float(np.abs(p[-1])),
        "final_norm": float(trace.norms[-1]),
    }
    for key in ("mode_energy", "E_D", "forcing_scale"):
        if key in extras:
            results[key] = float(extras[key]) if not isinstance(extras[key], dict) else extras[key]
    write_manifest(outdir, config, time.time() - t0, results)
    return results


def run_sweep(config: ExperimentConfig, betas, outdir) -> dict:
    """Decay-rate sweep over forcing amplitudes; exports sweep.csv + powerlaw.csv."""
    t0 = time.time()
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    chash = config_hash(config)
    betas = [float(b) for b in betas]
    if any(b <= 0 for b in betas):
        raise ConfigurationError("sweep amplitudes must be positive")
    rows = []
    for beta in betas:
        cfg = config.replace(beta=beta)
        trace, _, _, _ = _evolve_trace(cfg)
        # stop each fit where the projection is depleted: the saturated tail
        # would bias the rate downward for the larger amplitudes
        fit = fit_exponential_decay(
            trace.times, trace.projection,
            window=decay_window(trace.times, trace.projection,
                                start=config.fit_window_start),
        )
        rows.append((config.family, config.omega, beta, fit.rate, fit.residual_rms))
        write_trace_csv(outdir / f"trace_beta{beta:g}.csv", trace, chash,
                        dirac=config.model == "dirac")
    write_sweep_csv(outdir / "sweep.csv", rows, chash)
    rates = [r[3] for r in rows]
    results: dict = {"betas": betas, "rates": rates}
    fitted = [(b, r) for b, r in zip(betas, rates) if r > 0]
    if len(fitted) >= 3:
        pl = fit_power_law([b for b, _ in fitted], [r for _, r in fitted])
        write_powerlaw_csv(outdir / "powerlaw.csv",
                           [(config.family, config.omega, pl.exponent, pl.prefactor)], chash)
        results.update(exponent=pl.exponent, prefactor=pl.prefactor,
                       powerlaw_residual=pl.residual_rms)
    write_manifest(outdir, config, time.time() - t0, results)
    return results


def run_fgr(config: ExperimentConfig, omegas, outdir) -> dict:
    """Golden-rule rate/shift table over forcing frequencies; exports fgr.csv.

    Rates are normalized to unit forcing amplitude: a run forced with
    coefficient s*beta*cos(omega T) decays at gamma0 * (s*beta)^2.
    """
    t0 = time.time()
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    chash = config_hash(config)
    spec, _ = _spec_and_grid(config)
    params = _dirac_params(config, spec)
    X = slow_grid(config.slow_half_length, config.slow_dX)
    op = assemble_dirac_operator(params, spec.kappa, X, max_dX=config.slow_dX)
    alpha = dirac_zero_mode_analytic(spec.kappa, params.theta_sharp, params.v_D, X)
    rows = []
    for omega in omegas:
        omega = float(omega)
        eta = config.eta if config.eta > 0 else 4.0 * box_level_spacing(op, omega)
        g, lam = golden_rule_rates(op, alpha, omega, eta=eta)
        rows.append((omega, g, lam, eta))
    write_fgr_csv(outdir / "fgr.csv", rows, chash)
    results = {
        "gap_half_width": op.gap_half_width,
        "gamma0": {f"{r[0]:g}": r[1] for r in rows},
    }
    write_manifest(outdir, config, time.time() - t0, results)
    return results
