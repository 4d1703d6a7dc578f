"""Figure recipes: a small TOML document naming inputs, kind, and output.

Example recipe file::

    kind = "decay"
    inputs = ["out/fig6a/trace.csv"]
    output = "figures/fig6a.png"
    title = "Projection decay"
    xlabel = "t"
    ylabel = "|p(t)|"
    fit_window = [50.0, 1000.0]
"""

from __future__ import annotations

from dataclasses import dataclass, field

try:  # Python >= 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

KINDS = ("heatmap", "decay", "powerlaw", "bands", "threshold")


class RecipeError(ValueError):
    """Malformed or unreadable recipe file."""


@dataclass(frozen=True)
class FigureRecipe:
    """One figure: which CSV files feed it, what kind of plot, where it goes."""

    kind: str
    inputs: tuple
    output: str
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    labels: tuple = ()            # per-input legend labels (default: file stems)
    fit_window: tuple = ()        # (t_min, t_max) for the decay overlay line
    logy: bool = True             # decay kind: semilog vertical axis

    def __post_init__(self):
        if self.kind not in KINDS:
            raise RecipeError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")
        if not self.inputs:
            raise RecipeError("recipe needs at least one input CSV")
        if not self.output:
            raise RecipeError("recipe needs an output path")
        if self.labels and len(self.labels) != len(self.inputs):
            raise RecipeError(
                f"{len(self.labels)} labels given for {len(self.inputs)} inputs"
            )
        if self.fit_window and len(self.fit_window) != 2:
            raise RecipeError("fit_window must be [t_min, t_max]")
        object.__setattr__(self, "inputs", tuple(str(p) for p in self.inputs))
        object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        object.__setattr__(self, "fit_window", tuple(float(t) for t in self.fit_window))


def load_recipe(path: str) -> FigureRecipe:
    """Read a recipe TOML file."""
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise RecipeError(f"recipe file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise RecipeError(f"malformed recipe file {path}: {exc}") from exc
    known = {f for f in FigureRecipe.__dataclass_fields__}
    unknown = set(data) - known
    if unknown:
        raise RecipeError(f"unknown recipe keys: {sorted(unknown)}")
    try:
        return FigureRecipe(**data)
    except TypeError as exc:
        raise RecipeError(f"incomplete recipe {path}: {exc}") from exc
