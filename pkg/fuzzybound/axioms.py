"""
Axiom report containers used by every sampled checker.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np


@dataclass(frozen=True)
class AxiomResult:
    axiom: str
    passed: bool
    worst_violation: float
    witness: tuple[float, ...] | None = None
    informational: bool = False
    note: str = ""

    def as_dict(self) -> dict[str, Any]:
        return {
            "axiom": self.axiom,
            "passed": self.passed,
            "worst_violation": self.worst_violation,
            "witness": list(self.witness) if self.witness is not None else None,
            "informational": self.informational,
            "note": self.note,
        }


@dataclass
class AxiomReport:
    """Per-axiom outcome of a sampled check; informational entries never gate `passed`."""

    subject: str
    results: list[AxiomResult] = field(default_factory=list)
    flags: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results if not r.informational)

    def result(self, axiom: str) -> AxiomResult:
        for r in self.results:
            if r.axiom == axiom:
                return r
        raise KeyError(f"No result recorded for axiom '{axiom}' on {self.subject}")

    def failures(self) -> list[AxiomResult]:
        return [r for r in self.results if not r.passed]

    def add_sampled(
        self,
        axiom: str,
        violations: np.ndarray,
        witnesses: np.ndarray,
        tol: float,
        informational: bool = False,
        note: str = "",
    ) -> AxiomResult:
        """
        Record the worst entry of `violations` (one per sample, 0 when satisfied).
        `witnesses` has one row per sample; the row of the first sample beyond `tol`
        is kept, so fixed grid points placed ahead of random samples win.
        """
        violations = np.asarray(violations, dtype=float).ravel()
        if violations.size == 0:
            res = AxiomResult(axiom, True, 0.0, None, informational, note or "no applicable samples")
        else:
            violations = np.where(np.isnan(violations), np.inf, violations)
            idx = int(np.argmax(violations))
            worst = float(violations[idx])
            row = np.atleast_2d(np.asarray(witnesses, dtype=float))
            if row.shape[0] != violations.size:
                row = row.T
            first = int(np.argmax(violations > tol))
            witness = tuple(float(v) for v in row[first]) if worst > tol else None
            res = AxiomResult(axiom, worst <= tol, worst, witness, informational, note)
        self.results.append(res)
        return res

    def add(self, result: AxiomResult) -> AxiomResult:
        self.results.append(result)
        return result

    def as_dict(self) -> dict[str, Any]:
        return {
            "subject": self.subject,
            "passed": self.passed,
            "results": [r.as_dict() for r in self.results],
            "flags": dict(self.flags),
        }
