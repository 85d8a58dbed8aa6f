"""
Report records: line-delimited JSON, a summary table, and optional plot-data dumps.
"""

from __future__ import annotations

import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence, TextIO

import numpy as np

from . import __version__

logger = logging.getLogger(__name__)

TOOL = "fuzzybound"
VERDICTS = ("pass", "fail", "inconclusive", "precondition-unmet")

# Every statement a full run must cover, in the order verify-all reaches them.
ANCHORS = (
    "t-norm-axioms",
    "t-norm-diagonal",
    "phi-axioms",
    "b-norm-axioms",
    "level-infimum",
    "fuzzy-convergence",
    "independence-constant",
    "fuzzy-boundedness",
    "boundedness-equivalence",
    "bounded-subspace",
    "finite-dimensional-boundedness",
    "fuzzy-continuity",
    "bounded-implies-continuous",
    "continuous-not-bounded",
    "operator-fuzzy-norm",
    "limit-uniqueness",
    "bounded-operators-complete",
)
# anchor of records produced by the pipeline itself when a suite crashes
SUITE_ANCHOR = "suite"


def plain(value: Any) -> Any:
    """Convert numpy values and non-finite floats into JSON-safe plain values."""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return plain(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        f = float(value)
        if math.isnan(f):
            return "nan"
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        return f
    return value


@dataclass
class ReportRecord:
    check_name: str
    anchor: str
    verdict: str
    parameters: dict[str, Any] = field(default_factory=dict)
    values: dict[str, Any] = field(default_factory=dict)
    witness: Any = None
    tolerance: float | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.verdict not in VERDICTS:
            raise ValueError(f"Unknown verdict '{self.verdict}'. Available: {list(VERDICTS)}")
        if self.anchor not in ANCHORS and self.anchor != SUITE_ANCHOR:
            raise ValueError(f"Unknown anchor '{self.anchor}'. Available: {list(ANCHORS)}")

    @property
    def failed(self) -> bool:
        return self.verdict == "fail"

    def as_dict(self) -> dict[str, Any]:
        return plain(
            {
                "record": "check",
                "check_name": self.check_name,
                "anchor": self.anchor,
                "verdict": self.verdict,
                "parameters": self.parameters,
                "values": self.values,
                "witness": self.witness,
                "tolerance": self.tolerance,
                "seed": self.seed,
            }
        )


def verdict_of(passed: bool) -> str:
    return "pass" if passed else "fail"


def missing_anchors(records: Iterable[ReportRecord]) -> list[str]:
    """Anchors in ANCHORS that no record covers, in ANCHORS order."""
    seen = {r.anchor for r in records}
    return [a for a in ANCHORS if a not in seen]


def header(seed: int, command: str) -> dict[str, Any]:
    return {"record": "header", "tool": TOOL, "version": __version__, "seed": seed, "command": command}


def render_records(records: Iterable[ReportRecord], head: dict[str, Any]) -> str:
    """One JSON object per line, header first, keys sorted."""
    lines = [json.dumps(plain(head), sort_keys=True, allow_nan=False)]
    lines.extend(json.dumps(r.as_dict(), sort_keys=True, allow_nan=False) for r in records)
    return "\n".join(lines) + "\n"


def summary_table(records: Sequence[ReportRecord]) -> str:
    counts = {v: sum(1 for r in records if r.verdict == v) for v in VERDICTS}
    width = max([len(r.check_name) for r in records] + [10])
    out = ["=" * 80, f"{'check_name'.ljust(width)}  {'anchor':<34}  verdict", "-" * 80]
    for r in records:
        out.append(f"{r.check_name.ljust(width)}  {r.anchor:<34}  {r.verdict}")
    out.append("-" * 80)
    out.append("  ".join(f"{v}={counts[v]}" for v in VERDICTS))
    out.append("=" * 80)
    return "\n".join(out) + "\n"


def write_plot_data(plot_dir: Path, plots: dict[str, list[tuple[float, float]]]) -> list[Path]:
    """Each plot becomes `<name>.dat` with two whitespace-separated columns."""
    plot_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, rows in sorted(plots.items()):
        path = plot_dir / f"{name}.dat"
        data = np.array(rows, dtype=float).reshape(-1, 2)
        np.savetxt(path, data, fmt="%.12g")
        written.append(path)
        logger.debug("Wrote plot data: %s (%d rows)", path, len(rows))
    return written


def emit_report(
    records: Sequence[ReportRecord],
    head: dict[str, Any],
    out_path: Path | None = None,
    stream: TextIO | None = None,
    plot_dir: Path | None = None,
    plots: dict[str, list[tuple[float, float]]] | None = None,
) -> str:
    """
    Write the record stream (to `out_path` when given) and the summary table to `stream`.

    Returns the rendered record text. OSError from the writes propagates.
    """
    text = render_records(records, head)
    if out_path is not None:
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text(text, encoding="utf-8")
        logger.info("Report written: %s (%d records)", out_path, len(records))
    stream = stream or sys.stdout
    stream.write(summary_table(records))
    if plot_dir is not None and plots:
        write_plot_data(plot_dir, plots)
    return text
