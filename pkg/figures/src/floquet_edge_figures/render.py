"""Render one FigureRecipe into a PNG/SVG file.

Each figure kind declares the CSV columns it needs; a mismatch raises
SchemaError listing the missing and the available columns.  Rendering never
mutates the inputs and is deterministic: fixed figure size, dpi, colormap,
and no timestamps in the output metadata.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib
import numpy as np
import pandas as pd

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .recipe import FigureRecipe  # noqa: E402

__all__ = ["FigureError", "SchemaError", "render"]

# one trace.csv naming for fast (Schroedinger) runs, one for slow (Dirac) runs
_TIME_COLUMNS = ("t", "T")
_AMPLITUDE_COLUMNS = ("abs_proj", "abs_g")
_HEATMAP_SCHEMAS = (("t", "x", "abs_psi"), ("T", "X", "abs_alpha"))

_RC = {
    "figure.figsize": (6.4, 4.4),
    "figure.dpi": 100,
    "savefig.dpi": 150,
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.hashsalt": "floquet-edge-figures",
}


class FigureError(ValueError):
    """Unreadable input or unrenderable data."""


class SchemaError(FigureError):
    """Input CSV columns do not match the figure kind."""


def _read_csv(path: str) -> pd.DataFrame:
    try:
        df = pd.read_csv(path, comment="#")
    except FileNotFoundError as exc:
        raise FigureError(f"input CSV not found: {path}") from exc
    except pd.errors.EmptyDataError as exc:
        raise SchemaError(f"{path}: empty CSV (no header, no rows)") from exc
    if len(df) == 0:
        raise SchemaError(f"{path}: CSV has a header but no data rows")
    return df


def _require(df: pd.DataFrame, path: str, required: tuple) -> None:
    missing = [c for c in required if c not in df.columns]
    if missing:
        raise SchemaError(
            f"{path}: missing columns {missing}; found {list(df.columns)}"
        )


def _pick(df: pd.DataFrame, path: str, alternatives: tuple) -> str:
    for c in alternatives:
        if c in df.columns:
            return c
    raise SchemaError(
        f"{path}: needs one of {list(alternatives)}; found {list(df.columns)}"
    )


def _labels(recipe: FigureRecipe) -> list:
    if recipe.labels:
        return list(recipe.labels)
    return [Path(p).parent.name or Path(p).stem for p in recipe.inputs]


def _finish(fig, ax, recipe: FigureRecipe, default_x: str, default_y: str) -> None:
    ax.set_xlabel(recipe.xlabel or default_x)
    ax.set_ylabel(recipe.ylabel or default_y)
    if recipe.title:
        ax.set_title(recipe.title)
    out = Path(recipe.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    suffix = out.suffix.lower()
    if suffix not in (".png", ".svg"):
        raise FigureError(f"unsupported output format {suffix!r}; use .png or .svg")
    # strip version/date stamps so re-rendering is byte-identical
    metadata = {"Software": None} if suffix == ".png" else {"Date": None}
    fig.savefig(out, metadata=metadata)
    plt.close(fig)


def _render_decay(recipe: FigureRecipe):
    fig, ax = plt.subplots()
    for path, label in zip(recipe.inputs, _labels(recipe)):
        df = _read_csv(path)
        tcol = _pick(df, path, _TIME_COLUMNS)
        acol = _pick(df, path, _AMPLITUDE_COLUMNS)
        t = df[tcol].to_numpy(float)
        a = df[acol].to_numpy(float)
        plot = ax.semilogy if recipe.logy else ax.plot
        (line,) = plot(t, a, lw=1.2, label=label)
        if recipe.fit_window:
            lo, hi = recipe.fit_window
            m = (t >= lo) & (t <= hi) & (a > 0)
            if m.sum() >= 2:
                slope, icpt = np.polyfit(t[m], np.log(a[m]), 1)
                plot(t[m], np.exp(icpt + slope * t[m]), "--", lw=1.0,
                     color=line.get_color(),
                     label=f"fit: rate {-slope:.3g}")
    ax.legend()
    _finish(fig, ax, recipe, "t", "|projection|")


def _render_powerlaw(recipe: FigureRecipe):
    fig, ax = plt.subplots()
    for path, label in zip(recipe.inputs, _labels(recipe)):
        df = _read_csv(path)
        _require(df, path, ("beta", "gamma_fit"))
        beta = df["beta"].to_numpy(float)
        rate = df["gamma_fit"].to_numpy(float)
        pos = (beta > 0) & (rate > 0)
        if pos.sum() < 2:
            raise FigureError(f"{path}: fewer than 2 positive (beta, rate) points")
        (pts,) = ax.loglog(beta[pos], rate[pos], "^", ms=6, label=label)
        slope, icpt = np.polyfit(np.log(beta[pos]), np.log(rate[pos]), 1)
        bline = np.array([beta[pos].min(), beta[pos].max()])
        ax.loglog(bline, np.exp(icpt) * bline**slope, "--", lw=1.0,
                  color=pts.get_color(), label=f"slope {slope:.2f}")
    ax.legend()
    _finish(fig, ax, recipe, "beta", "Gamma")


def _render_heatmap(recipe: FigureRecipe):
    if len(recipe.inputs) != 1:
        raise FigureError("heatmap takes exactly one snapshots CSV")
    path = recipe.inputs[0]
    df = _read_csv(path)
    for cols in _HEATMAP_SCHEMAS:
        if all(c in df.columns for c in cols):
            tcol, xcol, vcol = cols
            break
    else:
        raise SchemaError(
            f"{path}: needs columns {list(_HEATMAP_SCHEMAS[0])} or "
            f"{list(_HEATMAP_SCHEMAS[1])}; found {list(df.columns)}"
        )
    grid = df.pivot_table(index=tcol, columns=xcol, values=vcol, sort=True)
    fig, ax = plt.subplots()
    ax.grid(False)
    mesh = ax.pcolormesh(grid.columns.to_numpy(float), grid.index.to_numpy(float),
                         grid.to_numpy(float), cmap="viridis", shading="nearest")
    fig.colorbar(mesh, ax=ax, label=vcol)
    _finish(fig, ax, recipe, xcol, tcol)


def _render_bands(recipe: FigureRecipe):
    fig, ax = plt.subplots()
    for path in recipe.inputs:
        df = _read_csv(path)
        _require(df, path, ("k",))
        bands = [c for c in df.columns if c.startswith("E_")]
        if not bands:
            raise SchemaError(
                f"{path}: no band columns E_1, E_2, ...; found {list(df.columns)}"
            )
        k = df["k"].to_numpy(float)
        for c in bands:
            ax.plot(k, df[c].to_numpy(float), lw=1.2, color="C0")
    _finish(fig, ax, recipe, "k", "E")


def _render_threshold(recipe: FigureRecipe):
    fig, ax = plt.subplots()
    for path, label in zip(recipe.inputs, _labels(recipe)):
        df = _read_csv(path)
        _require(df, path, ("omega", "gamma0"))
        ax.plot(df["omega"].to_numpy(float), df["gamma0"].to_numpy(float),
                "o-", ms=4, lw=1.2, label=label)
    ax.legend()
    _finish(fig, ax, recipe, "omega", "gamma0")


_RENDERERS = {
    "decay": _render_decay,
    "powerlaw": _render_powerlaw,
    "heatmap": _render_heatmap,
    "bands": _render_bands,
    "threshold": _render_threshold,
}


def render(recipe: FigureRecipe) -> Path:
    """Render the recipe and return the output path."""
    with matplotlib.rc_context(_RC):
        _RENDERERS[recipe.kind](recipe)
    return Path(recipe.output)
