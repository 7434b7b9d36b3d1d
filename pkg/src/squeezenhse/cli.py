"""Command-line entry point: run, reproduce, validate.

Exit codes: 0 success, 2 configuration error, 3 numeric failure.
``--threads`` caps BLAS/OpenMP parallelism via the standard environment
variables (set before the first dense solve of the process).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .config import ConfigError, emit_config, load_config
from .io import write_json
from .lattice import LatticeError
from .presets import FIGURE_PRESETS, PRESET_NAMES, preset_config

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

_THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS")


def _apply_threads(threads: int | None) -> None:
    if threads is None:
        return
    if threads < 1:
        raise ConfigError(f"--threads must be >= 1, got {threads}")
    for var in _THREAD_VARS:
        os.environ[var] = str(threads)


def _numeric_errors():
    import numpy as np
    from .greens import SingularEnergyError
    from .nonbloch import RootCollisionError
    from .spectral import EigensolverError
    return (EigensolverError, SingularEnergyError, RootCollisionError,
            np.linalg.LinAlgError, FloatingPointError)


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    from .runner import run_experiment
    manifest = run_experiment(cfg, out_dir=args.out)
    out = Path(args.out if args.out is not None else cfg.out_dir)
    print(f"wrote {len(manifest['artifacts'])} artifact(s) to {out}")
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    if args.figure not in FIGURE_PRESETS and args.figure not in PRESET_NAMES:
        raise ConfigError(
            f"unknown figure {args.figure!r}; choose from "
            f"{sorted(FIGURE_PRESETS)} or a panel preset {PRESET_NAMES}")
    names = FIGURE_PRESETS.get(args.figure, (args.figure,))
    out_root = Path(args.out if args.out is not None else args.figure)
    from .runner import run_experiment
    panels = {}
    for name in names:
        cfg = preset_config(name, args.scale)
        manifest = run_experiment(cfg, out_dir=out_root / name)
        panels[name] = {
            "dir": name,
            "manifest": f"{name}/manifest.json",
            "kinds": manifest["kinds"],
        }
        print(f"{name}: {len(manifest['artifacts'])} artifact(s)")
    top = {
        "tool": "squeezenhse",
        "figure": args.figure,
        "scale": args.scale,
        "panels": panels,
    }
    write_json(out_root / "manifest.json", top)
    print(f"wrote figure manifest to {out_root / 'manifest.json'}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    cfg = load_config(args.config)
    cfg.build_lattice()          # semantic checks beyond parsing
    if any(k in cfg.kinds for k in ("greens", "nonbloch")):
        cfg.solvable_params()
    sys.stdout.write(emit_config(cfg))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="squeezenhse",
        description="Squeezed-boson BdG lattice experiments: spectra, "
                    "localization diagnostics, impurity sensitivity.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment from a TOML config")
    run.add_argument("--config", required=True, help="path to TOML config")
    run.add_argument("--out", default=None, help="override output directory")
    run.add_argument("--threads", type=int, default=None,
                     help="cap BLAS/OpenMP threads")
    run.set_defaults(func=_cmd_run)

    rep = sub.add_parser("reproduce",
                         help="run the preset(s) of one figure")
    rep.add_argument("--figure", required=True,
                     help="fig2|fig3|fig4|fig5 or a panel preset like fig3h")
    rep.add_argument("--scale", choices=("desk", "full"), default="desk")
    rep.add_argument("--out", default=None, help="output root directory")
    rep.add_argument("--threads", type=int, default=None)
    rep.set_defaults(func=_cmd_reproduce)

    val = sub.add_parser("validate",
                         help="validate a config and print its canonical form")
    val.add_argument("--config", required=True)
    val.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_threads(getattr(args, "threads", None))
        return args.func(args)
    except (ConfigError, LatticeError, FileNotFoundError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _numeric_errors() as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
