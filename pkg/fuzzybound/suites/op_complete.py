"""
Completeness of the bounded operators on closed-form families, and uniqueness of fuzzy limits.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from ..completeness_lab import OperatorSequence, limit_uniqueness_probe, operator_seq_cauchy, operator_seq_limit
from ..exceptions import PreconditionError
from ..reports import ReportRecord, verdict_of

if TYPE_CHECKING:
    from ..ops import SuiteContext

NAME = "op-complete"
ANCHOR = "bounded-operators-complete"


def op_complete_suite(ctx: SuiteContext) -> list[ReportRecord]:
    params = ctx.params(NAME)
    tol = float(params.get("tol", 1e-2))
    residual_tol = float(params.get("residual_tol", 1e-2))
    sphere = ctx.sphere_samples
    records = []

    for name, cfg in ctx.config.operator_sequences.items():
        seq = OperatorSequence(
            ctx.config.operator(cfg.base),
            cfg.perturbation,
            cfg.decay,
            cfg.rate,
            cfg.ratio,
            cfg.n_max or ctx.config.horizon.n_max,
            name,
        )
        parameters = {"sequence": name, "base": cfg.base, "decay": cfg.decay, "n_max": seq.n_max, "expect_cauchy": cfg.expect_cauchy}
        if not cfg.expect_cauchy:
            cauchy = operator_seq_cauchy(seq, ctx.alpha_grid, tol, sphere_samples=sphere, seed=ctx.seed)
            records.append(
                ctx.record(
                    f"operator-cauchy[{name}]",
                    ANCHOR,
                    verdict_of(not cauchy.cauchy),
                    parameters=parameters,
                    values=cauchy.as_dict(),
                    witness=cauchy.witness,
                    tolerance=tol,
                )
            )
            continue
        result = operator_seq_limit(seq, ctx.alpha_grid, tol, sphere_samples=sphere, seed=ctx.seed, residual_tol=residual_tol)
        records.append(
            ctx.record(
                f"operator-limit[{name}]",
                ANCHOR,
                result.verdict,
                parameters=parameters,
                values=result.as_dict(),
                witness=result.cauchy.witness,
                tolerance=residual_tol,
            )
        )

    for item in params.get("uniqueness", []):
        seq_cfg = ctx.config.sequences[item["sequence"]]
        sp = ctx.config.space(seq_cfg.space)
        alpha = float(item.get("alpha", 0.5))
        parameters = {"sequence": item["sequence"], "alpha": alpha, "decoys": item.get("decoys", [])}
        try:
            verdict = limit_uniqueness_probe(sp, seq_cfg.spec, item.get("decoys", []), alpha, tol, ctx.config.horizon.n_max)
        except PreconditionError as e:
            records.append(ctx.record(f"limit-uniqueness[{item['sequence']}]", "limit-uniqueness", "precondition-unmet", parameters, {"reason": str(e)}))
            continue
        records.append(
            ctx.record(
                f"limit-uniqueness[{item['sequence']}]",
                "limit-uniqueness",
                verdict_of(verdict.passed),
                parameters=parameters,
                values=verdict.as_dict(),
                witness=next((d for d in verdict.decoys if d["status"] == "fail"), None),
                tolerance=tol,
            )
        )
    return records
