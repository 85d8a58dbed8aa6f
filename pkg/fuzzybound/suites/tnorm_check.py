"""
t-norm axioms on sampled triples, closed-form values, and an averaging control.
"""

from __future__ import annotations

import math
from typing import TYPE_CHECKING

from ..reports import ReportRecord, verdict_of
from ..scalar_algebra import TNORM_KINDS, TNorm, diagonal_threshold, tnorm_axiom_check, tnorm_eval, tnorm_power
from ._common import axiom_record, control_record

if TYPE_CHECKING:
    from ..ops import SuiteContext

NAME = "tnorm-check"
AXIOM_TOL = 1e-12

# (a, b) = (0.6, 0.7)
CLOSED_FORMS = {
    "standard-intersection": 0.6,
    "algebraic-product": 0.42,
    "bounded-difference": 0.3,
    "drastic": 0.0,
}


def tnorm_check_suite(ctx: SuiteContext) -> list[ReportRecord]:
    params = ctx.params(NAME)
    kinds = params.get("tnorms", list(TNORM_KINDS))
    samples = ctx.config.samples.axioms
    records = []

    for kind in kinds:
        report = tnorm_axiom_check(TNorm.standard(kind), samples, ctx.seed, AXIOM_TOL)
        records.append(axiom_record(ctx, f"tnorm-axioms[{kind}]", "t-norm-axioms", report, AXIOM_TOL, {"samples": samples}))

    errors = {kind: abs(tnorm_eval(TNorm.standard(kind), 0.6, 0.7) - want) for kind, want in CLOSED_FORMS.items()}
    records.append(
        ctx.record(
            "tnorm-closed-forms",
            "t-norm-axioms",
            verdict_of(max(errors.values()) <= AXIOM_TOL),
            parameters={"a": 0.6, "b": 0.7},
            values={"errors": errors},
            tolerance=AXIOM_TOL,
        )
    )

    product = TNorm.standard("algebraic-product")
    minimum = TNorm.standard("standard-intersection")
    power = tnorm_power(product, 0.5, 3)
    beta_min = diagonal_threshold(minimum, 0.25)
    beta_prod = diagonal_threshold(product, 0.25)
    ok = abs(power - 0.125) <= AXIOM_TOL and abs(beta_min - 0.25) <= 1e-9 and abs(beta_prod - 0.5) <= 1e-9
    records.append(
        ctx.record(
            "tnorm-diagonal",
            "t-norm-diagonal",
            verdict_of(ok),
            parameters={"alpha": 0.25, "step": 1e-3},
            values={"product_cube_of_half": power, "beta_min": beta_min, "beta_product": beta_prod},
            tolerance=AXIOM_TOL,
        )
    )

    averaging = TNorm.from_function(lambda a, b: 0.5 * (a + b), label="averaging")
    report = tnorm_axiom_check(averaging, samples, ctx.seed, AXIOM_TOL)
    identity = report.result("identity")
    records.append(
        control_record(
            ctx,
            "tnorm-averaging-control",
            "t-norm-axioms",
            not identity.passed,
            {"identity_violation": identity.worst_violation if math.isfinite(identity.worst_violation) else math.inf},
            identity.witness,
            AXIOM_TOL,
        )
    )
    return records
