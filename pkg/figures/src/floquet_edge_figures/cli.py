"""Command-line entry point: render figures from recipe files.

Usage::

    floquet-edge-render --recipe fig6a.toml [--recipe fig7.toml ...]

Exit codes: 0 on success, 1 on unreadable inputs or render failures,
2 on CSV schema mismatches and malformed recipes.
"""

from __future__ import annotations

import argparse
import sys

from .recipe import RecipeError, load_recipe
from .render import FigureError, SchemaError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="floquet-edge-render",
        description="Render publication-style figures from exported CSV datasets.",
    )
    parser.add_argument(
        "--recipe", action="append", required=True, metavar="FILE",
        help="recipe TOML file (repeatable)",
    )
    args = parser.parse_args(argv)
    status = 0
    for path in args.recipe:
        try:
            out = render(load_recipe(path))
        except (RecipeError, SchemaError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            status = max(status, 2)
        except FigureError as exc:
            print(f"error: {exc}", file=sys.stderr)
            status = max(status, 1)
        else:
            print(f"{path} -> {out}")
    return status


if __name__ == "__main__":
    sys.exit(main())
