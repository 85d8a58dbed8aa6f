"""
CLI entrypoint.
"""

from __future__ import annotations

import argparse
import logging
from pathlib import Path

from .pipeline import commands, run


def _alpha_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers (got {text!r})") from e


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzybound",
        description="Numerical checks for fuzzy strong φ-b-normed spaces and fuzzy bounded operators.",
    )
    parser.add_argument("command", choices=commands(), help="Suite to run, or verify-all.")
    parser.add_argument("--config", type=Path, default=None, help="Run config YAML/JSON, merged over the packaged defaults.")
    parser.add_argument("--seed", type=int, default=None, help="Override the config seed.")
    parser.add_argument("--out", type=Path, default=None, help="Report path (default: output/<command>.jsonl).")
    parser.add_argument("--alpha-grid", type=_alpha_list, default=None, help="Comma-separated α values in (0, 1).")
    parser.add_argument("--tol", type=float, default=None, help="Override the config tolerance.")
    parser.add_argument("--samples", type=int, default=None, help="Sphere directions per certificate.")
    parser.add_argument("--plot-dir", type=Path, default=None, help="Write two-column .dat plot data here.")
    parser.add_argument("--verbose", action="store_true", help="Verbose logging.")
    return parser


def main(argv: list[str] | None = None) -> None:
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    code = run(
        name=args.command,
        config_path=args.config,
        out_path=args.out or Path("output") / f"{args.command}.jsonl",
        plot_dir=args.plot_dir,
        seed=args.seed,
        tolerance=args.tol,
        alpha_grid=args.alpha_grid,
        sphere_samples=args.samples,
    )
    raise SystemExit(code)


if __name__ == "__main__":
    main()
