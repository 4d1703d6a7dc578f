"""Deterministic CSV/JSON export.

All CSV files are written with 17-significant-digit C-locale floats and plain
LF line endings so identical configurations produce byte-identical output.
Each file opens with a comment line embedding the config hash; each output
directory receives a manifest.json describing the run.
"""

from __future__ import annotations

import json
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import ExperimentConfig, config_hash

__all__ = [
    "write_csv",
    "write_manifest",
    "write_trace_csv",
    "write_snapshots_csv",
    "write_bands_csv",
    "write_dirac_params_json",
    "write_mode_csv",
    "write_envelope_csv",
    "write_fgr_csv",
    "write_sweep_csv",
    "write_powerlaw_csv",
]


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return format(float(v), ".17g")


def write_csv(path, header: list, columns: list, cfg_hash: str | None = None) -> None:
    """Write equal-length columns under a header row (and a hash comment line)."""
    columns = [np.asarray(c) for c in columns]
    lines = []
    if cfg_hash is not None:
        lines.append(f"# config_hash: {cfg_hash}")
    lines.append(",".join(header))
    for row in zip(*columns):
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def write_manifest(outdir, config: ExperimentConfig, duration_s: float, extra: dict | None = None) -> None:
    manifest = {
        "config": config.to_dict(),
        "config_hash": config_hash(config),
        "version": __version__,
        "duration_seconds": duration_s,
        "created_unix": time.time(),
    }
    if extra:
        manifest["results"] = extra
    path = Path(outdir) / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", newline="\n")


def write_trace_csv(path, trace, cfg_hash: str, dirac: bool = False) -> None:
    """trace.csv: t,norm,re_proj,im_proj,abs_proj (T,...,re_g,im_g,abs_g for Dirac)."""
    p = trace.projection
    if p is None:
        p = np.full(len(trace.times), np.nan, dtype=complex)
    header = (["T", "norm", "re_g", "im_g", "abs_g"] if dirac
              else ["t", "norm", "re_proj", "im_proj", "abs_proj"])
    write_csv(path, header, [trace.times, trace.norms, p.real, p.imag, np.abs(p)], cfg_hash)


def write_snapshots_csv(path, trace, x: np.ndarray, cfg_hash: str, dirac: bool = False) -> None:
    """snapshots.csv in long format: one row per (time, grid point)."""
    ts, xs, vals = [], [], []
    for t, snap in zip(trace.snapshot_times, trace.snapshots):
        a = np.abs(snap[0::2]) ** 2 + np.abs(snap[1::2]) ** 2 if dirac else np.abs(snap) ** 2
        a = np.sqrt(a)
        ts.append(np.full(len(x), t))
        xs.append(x)
        vals.append(a)
    header = ["T", "X", "abs_alpha"] if dirac else ["t", "x", "abs_psi"]
    if ts:
        write_csv(path, header, [np.concatenate(ts), np.concatenate(xs), np.concatenate(vals)], cfg_hash)
    else:
        write_csv(path, header, [[], [], []], cfg_hash)


def write_bands_csv(path, k: np.ndarray, energies: np.ndarray, cfg_hash: str) -> None:
    """bands.csv: k,E_1,...,E_n with one row per quasi-momentum sample."""
    n_bands = energies.shape[1]
    header = ["k"] + [f"E_{j + 1}" for j in range(n_bands)]
    write_csv(path, header, [k] + [energies[:, j] for j in range(n_bands)], cfg_hash)


def write_dirac_params_json(path, params, gap_estimate: float, cfg_hash: str) -> None:
    data = {
        "v_D": params.v_D,
        "theta_sharp": params.theta_sharp,
        "E_D": params.E_D,
        "kappa_inf": params.kappa_inf,
        "gap_half_width": params.gap_half_width,
        "schrodinger_gap_half_width": gap_estimate,
        "config_hash": cfg_hash,
    }
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", newline="\n")


def write_mode_csv(path, x: np.ndarray, psi: np.ndarray, cfg_hash: str) -> None:
    """mode.csv: x,re_psi,im_psi,abs_psi on the fast grid."""
    write_csv(path, ["x", "re_psi", "im_psi", "abs_psi"],
              [x, psi.real, psi.imag, np.abs(psi)], cfg_hash)


def write_envelope_csv(path, X: np.ndarray, alpha: np.ndarray, cfg_hash: str) -> None:
    """mode_envelope.csv: X,abs_alpha1,abs_alpha2 on the slow grid."""
    write_csv(path, ["X", "abs_alpha1", "abs_alpha2"],
              [X, np.abs(alpha[0]), np.abs(alpha[1])], cfg_hash)


def write_fgr_csv(path, rows: list, cfg_hash: str) -> None:
    """fgr.csv: omega,gamma0,lambda0,eta_broadening."""
    cols = list(zip(*rows)) if rows else [[], [], [], []]
    write_csv(path, ["omega", "gamma0", "lambda0", "eta_broadening"], cols, cfg_hash)


def write_sweep_csv(path, rows: list, cfg_hash: str) -> None:
    """sweep.csv: family,omega,beta,gamma_fit,residual."""
    cols = list(zip(*rows)) if rows else [[], [], [], [], []]
    write_csv(path, ["family", "omega", "beta", "gamma_fit", "residual"], cols, cfg_hash)


def write_powerlaw_csv(path, rows: list, cfg_hash: str) -> None:
    """powerlaw.csv: family,omega,exponent,prefactor."""
    cols = list(zip(*rows)) if rows else [[], [], [], []]
    write_csv(path, ["family", "omega", "exponent", "prefactor"], cols, cfg_hash)
