"""Command-line interface.

Subcommands: bands, evolve, sweep, fgr, recipe.  Exit codes: 0 success,
1 configuration error, 2 model-construction error, 3 numerical failure.
FLOQUET_THREADS bounds the BLAS/LAPACK thread pool.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import ConfigurationError, ModelError, NumericalError

__all__ = ["main"]


def _apply_thread_limit() -> None:
    threads = os.environ.get("FLOQUET_THREADS")
    if threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, threads)


def _parse_floats(text: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigurationError(f"cannot parse float list {text!r}") from exc


def _base_config(args) -> "ExperimentConfig":
    from .config import ExperimentConfig, load_config

    if getattr(args, "config", None):
        cfg = load_config(args.config)
    else:
        cfg = ExperimentConfig()
    overrides = {}
    for attr in ("model", "family", "eps", "beta", "omega", "t_end", "dt",
                 "stride", "preset"):
        val = getattr(args, attr, None)
        if val is not None:
            overrides[attr] = val
    if getattr(args, "snapshots", None):
        overrides["snapshot_times"] = tuple(_parse_floats(args.snapshots))
    return cfg.replace(**overrides) if overrides else cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="floquet-edge",
        description="Edge-mode radiative-decay experiments: band structure, "
                    "long-time evolution, decay-rate sweeps, golden-rule rates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_model=False):
        p.add_argument("--config", help="TOML config file (flags override it)")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--family", type=int, choices=(1, 2, 3))
        p.add_argument("--eps", type=float)
        if with_model:
            p.add_argument("--model", choices=("schrodinger", "dirac", "synthetic"))
            p.add_argument("--beta", type=float)
            p.add_argument("--omega", type=float)
            p.add_argument("--t-end", dest="t_end", type=float)
            p.add_argument("--dt", type=float)
            p.add_argument("--stride", type=int)
            p.add_argument("--preset", choices=("physical", "normalized"))

    p_bands = sub.add_parser("bands", help="band diagram + Dirac parameters")
    add_common(p_bands)
    p_bands.add_argument("--n-bands", type=int, default=8)
    p_bands.add_argument("--n-k", type=int, default=101)

    p_evolve = sub.add_parser("evolve", help="evolve the defect mode, export trace.csv")
    add_common(p_evolve, with_model=True)
    p_evolve.add_argument("--snapshots", help="comma-separated snapshot times")

    p_sweep = sub.add_parser("sweep", help="decay-rate sweep over forcing amplitudes")
    add_common(p_sweep, with_model=True)
    p_sweep.add_argument("--betas", required=True, help="comma-separated amplitudes")

    p_fgr = sub.add_parser("fgr", help="golden-rule rates/shifts over frequencies")
    add_common(p_fgr)
    p_fgr.add_argument("--omegas", required=True, help="comma-separated frequencies")
    p_fgr.add_argument("--eta", type=float, help="Lorentzian broadening override")

    p_recipe = sub.add_parser("recipe", help="run a named dataset recipe")
    p_recipe.add_argument("name", help="recipe name (use 'list' to show all)")
    p_recipe.add_argument("--out", help="output directory")

    return parser


def _run(args) -> int:
    from .recipes import RECIPES, run_recipe
    from .runs import run_bands, run_evolve, run_fgr, run_sweep

    if args.command == "recipe":
        if args.name == "list":
            for name in sorted(RECIPES):
                print(f"{name:10s} {RECIPES[name].description}")
            return 0
        if not args.out:
            raise ConfigurationError("recipe requires --out")
        results = run_recipe(args.name, args.out)
        print(f"recipe {args.name} -> {args.out}: {results}")
        return 0

    cfg = _base_config(args)
    if args.command == "bands":
        results = run_bands(cfg, args.out, n_bands=args.n_bands, n_k=args.n_k)
    elif args.command == "evolve":
        results = run_evolve(cfg, args.out)
    elif args.command == "sweep":
        results = run_sweep(cfg, _parse_floats(args.betas), args.out)
    elif args.command == "fgr":
        if args.eta is not None:
            cfg = cfg.replace(eta=args.eta)
        results = run_fgr(cfg, _parse_floats(args.omegas), args.out)
    else:  # pragma: no cover - argparse enforces choices
        raise ConfigurationError(f"unknown command {args.command}")
    print(f"{args.command} -> {args.out}: {results}")
    return 0


def main(argv=None) -> int:
    _apply_thread_limit()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except ModelError as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
