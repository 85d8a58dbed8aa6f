"""
bN1–bN5 on configured spaces. Exponent controls (p > 1) record that the asymmetric
b-triangle is refuted while every other condition, the symmetric form included, holds.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from ..fuzzy_space import axiom_check_bN
from ..reports import ReportRecord
from ._common import axiom_record, control_record

if TYPE_CHECKING:
    from ..ops import SuiteContext

NAME = "space-check"


def space_check_suite(ctx: SuiteContext) -> list[ReportRecord]:
    params = ctx.params(NAME)
    samples = ctx.config.samples.axioms
    tol = ctx.config.tolerance
    records = []

    for name in params.get("spaces", []):
        report = axiom_check_bN(ctx.config.space(name), samples, ctx.seed, tol)
        records.append(axiom_record(ctx, f"space-axioms[{name}]", "b-norm-axioms", report, tol, {"space": name, "samples": samples}))

    for name in params.get("exponent_controls", []):
        sp = ctx.config.space(name)
        report = axiom_check_bN(sp, samples, ctx.seed, tol)
        asym = report.result("bN4")
        others = [r for r in report.results if r.axiom != "bN4" and not r.informational]
        detected = not asym.passed and all(r.passed for r in others)
        records.append(
            control_record(
                ctx,
                f"asymmetric-b-triangle[{name}]",
                "b-norm-axioms",
                detected,
                {
                    "exponent": sp.exponent,
                    "K": sp.K,
                    "asymmetric_violation": asym.worst_violation,
                    "symmetric_violation": report.result("bN4-symmetric").worst_violation,
                    "other_failures": [r.axiom for r in others if not r.passed],
                },
                asym.witness,
                tol,
                {"space": name, "samples": samples},
            )
        )
    return records
