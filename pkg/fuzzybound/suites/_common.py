"""
Helpers shared by the suite modules.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

from ..axioms import AxiomReport
from ..reports import ReportRecord, verdict_of

if TYPE_CHECKING:
    from ..ops import SuiteContext


def axiom_record(
    ctx: SuiteContext,
    check_name: str,
    anchor: str,
    report: AxiomReport,
    tol: float,
    parameters: dict[str, Any] | None = None,
) -> ReportRecord:
    """One record per axiom report: worst violation per axiom, first gating failure as witness."""
    failures = [r for r in report.failures() if not r.informational]
    values: dict[str, Any] = {r.axiom: r.worst_violation for r in report.results}
    values.update({f"flag:{k}": v for k, v in report.flags.items()})
    informational = [r.axiom for r in report.results if r.informational and not r.passed]
    if informational:
        values["informational_failures"] = informational
    witness = {"axiom": failures[0].axiom, "sample": failures[0].witness} if failures else None
    return ctx.record(
        check_name,
        anchor,
        verdict_of(report.passed),
        parameters={"subject": report.subject, **(parameters or {})},
        values=values,
        witness=witness,
        tolerance=tol,
    )


def control_record(
    ctx: SuiteContext,
    check_name: str,
    anchor: str,
    detected: bool,
    values: dict[str, Any],
    witness: Any,
    tol: float,
    parameters: dict[str, Any] | None = None,
) -> ReportRecord:
    """Negative control: passes when the checker detects the planted violation."""
    return ctx.record(
        check_name,
        anchor,
        verdict_of(detected),
        parameters={"control": "negative", **(parameters or {})},
        values={"detected": detected, **values},
        witness=witness,
        tolerance=tol,
    )
