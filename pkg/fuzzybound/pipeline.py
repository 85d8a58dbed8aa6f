"""
Pipeline orchestrator: load config → apply overrides → run suites in order → emit records.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Sequence, TextIO

from . import __version__
from .config import RunConfig, load_config
from .exceptions import ConfigError, PreconditionError
from .ops import SUITE_REGISTRY, SuiteContext, suite_names
from .reports import SUITE_ANCHOR, ReportRecord, emit_report, header, missing_anchors

logger = logging.getLogger(__name__)

VERIFY_ALL = "verify-all"

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


def commands() -> list[str]:
    return [*suite_names(), VERIFY_ALL]


def run_suites(name: str, config: RunConfig) -> tuple[list[ReportRecord], SuiteContext]:
    """
    Run one suite (or every suite for verify-all) and collect records in order.

    A PreconditionError escaping a suite becomes a precondition-unmet record; any other
    exception is logged with its traceback and becomes a fail record.
    """
    if name == VERIFY_ALL:
        names = suite_names()
    elif name in SUITE_REGISTRY:
        names = [name]
    else:
        raise ValueError(f"Unknown subcommand '{name}'. Available: {commands()}")

    ctx = SuiteContext(config)
    records: list[ReportRecord] = []
    for idx, suite in enumerate(names, start=1):
        logger.info("Suite %d/%d: %s", idx, len(names), suite)
        try:
            produced = SUITE_REGISTRY[suite](ctx)
        except PreconditionError as e:
            produced = [ctx.record(suite, SUITE_ANCHOR, "precondition-unmet", values={"reason": str(e)})]
        except Exception as e:
            logger.exception("Suite '%s' failed: %s", suite, e)
            produced = [ctx.record(suite, SUITE_ANCHOR, "fail", values={"error": f"{type(e).__name__}: {e}"})]
        for r in produced:
            if r.verdict == "precondition-unmet":
                logger.warning("%s: precondition unmet (%s)", r.check_name, r.anchor)
            elif r.verdict == "fail":
                logger.error("%s: FAILED (%s)", r.check_name, r.anchor)
        records.extend(produced)
    if name == VERIFY_ALL:
        missing = missing_anchors(records)
        if missing:
            logger.warning("verify-all left %d anchors uncovered: %s", len(missing), ", ".join(missing))
    return records, ctx


def run_subcommand(
    name: str,
    config: RunConfig,
    out_path: Path | None = None,
    plot_dir: Path | None = None,
    stream: TextIO | None = None,
) -> int:
    """Returns 0 when no record fails, 1 otherwise (including write failures)."""
    logger.info("fuzzybound %s | command=%s | seed=%d | config=%s", __version__, name, config.seed, config.source)
    records, ctx = run_suites(name, config)
    try:
        emit_report(records, header(config.seed, name), out_path, stream, plot_dir, ctx.plots)
    except OSError as e:
        logger.error("Failed to write report: %s", e)
        return EXIT_FAILED
    failed = sum(1 for r in records if r.failed)
    logger.info("Completed %d records, %d failed", len(records), failed)
    return EXIT_FAILED if failed else EXIT_OK


def run(
    name: str,
    config_path: Path | None,
    out_path: Path | None,
    plot_dir: Path | None = None,
    seed: int | None = None,
    tolerance: float | None = None,
    alpha_grid: Sequence[float] | None = None,
    sphere_samples: int | None = None,
    stream: TextIO | None = None,
) -> int:
    try:
        config = load_config(config_path).with_overrides(seed, tolerance, alpha_grid, sphere_samples)
    except ConfigError as e:
        logger.error("Invalid configuration: %s", e)
        return EXIT_CONFIG
    return run_subcommand(name, config, out_path, plot_dir, stream)
