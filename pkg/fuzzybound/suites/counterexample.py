"""
A continuous operator that is not fuzzy bounded, with its reciprocal-domain and zero-operator variants.
"""

from __future__ import annotations

import math
from typing import TYPE_CHECKING

from ..exceptions import TheoremContradiction
from ..operator_analysis import COUNTEREXAMPLE_VARIANTS, counterexample_suite as run_counterexample
from ..reports import ReportRecord

if TYPE_CHECKING:
    from ..ops import SuiteContext

NAME = "counterexample"
M_TOL = 1e-6


def counterexample_suite(ctx: SuiteContext) -> list[ReportRecord]:
    params = ctx.params(NAME)
    dimension = int(params.get("dimension", 2))
    n_max = int(params.get("n_max", 10_000))
    records = []

    for variant in params.get("variants", list(COUNTEREXAMPLE_VARIANTS)):
        parameters = {"variant": variant, "dimension": dimension, "n_max": n_max}
        try:
            result = run_counterexample(variant, dimension, ctx.alpha_grid, ctx.sphere_samples, ctx.seed, n_max, M_tol=M_TOL)
        except TheoremContradiction as e:
            records.append(ctx.record(f"counterexample[{variant}]", "continuous-not-bounded", "fail", parameters, {"error": str(e)}, tolerance=M_TOL))
            continue
        finite = [(a, result.certificate.M(a)) for a in ctx.alpha_grid if math.isfinite(result.certificate.M(a))]
        ctx.plot(f"M_alpha_counterexample_{variant}", [a for a, _ in finite], [m for _, m in finite])
        records.append(
            ctx.record(
                f"counterexample[{variant}]",
                "continuous-not-bounded",
                "pass",
                parameters=parameters,
                values=result.as_dict(),
                witness=[e.as_dict() for e in result.certificate.entries if e.unbounded] or None,
                tolerance=M_TOL,
            )
        )
    return records
