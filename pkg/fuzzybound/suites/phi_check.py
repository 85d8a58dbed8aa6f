"""
φ-function conditions for the built-in families, inverse round trips, and a constant-1 control.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from ..reports import ReportRecord, verdict_of
from ..scalar_algebra import PhiFunction, phi_axiom_check, phi_eval, phi_inverse
from ._common import axiom_record, control_record

if TYPE_CHECKING:
    from ..ops import SuiteContext

NAME = "phi-check"
AXIOM_TOL = 1e-12
INVERSE_TOL = 1e-9


def _families(params: dict) -> list[PhiFunction]:
    out = [PhiFunction.abs_power(float(p)) for p in params.get("exponents", [1.0, 2.0])]
    out += [PhiFunction(kind="rational-example", n=int(n)) for n in params.get("rational_n", [1])]
    return out


def phi_check_suite(ctx: SuiteContext) -> list[ReportRecord]:
    params = ctx.params(NAME)
    grid_size = int(params.get("grid_size", 1000))
    records = []
    families = _families(params)

    for f in families:
        report = phi_axiom_check(f, grid_size, AXIOM_TOL)
        records.append(axiom_record(ctx, f"phi-axioms[{f.name}]", "phi-axioms", report, AXIOM_TOL, {"grid_size": grid_size}))

    worst, witness = 0.0, None
    for f in families:
        for c in (0.25, 1.0, 3.0, 10.0):
            y = phi_eval(f, c)
            back = phi_inverse(f, y)
            err = abs(back - c) / max(1.0, c)
            if err > worst:
                worst, witness = err, {"phi": f.name, "c": c, "phi(c)": y, "inverse": back}
    records.append(
        ctx.record(
            "phi-inverse",
            "phi-axioms",
            verdict_of(worst <= INVERSE_TOL),
            parameters={"points": [0.25, 1.0, 3.0, 10.0]},
            values={"worst_relative_error": worst},
            witness=witness if worst > INVERSE_TOL else None,
            tolerance=INVERSE_TOL,
        )
    )

    constant = PhiFunction(kind="user", function=lambda c: np.ones_like(c), label="constant-1")
    report = phi_axiom_check(constant, grid_size, AXIOM_TOL)
    increasing = report.result("strictly-increasing")
    records.append(
        control_record(
            ctx,
            "phi-constant-control",
            "phi-axioms",
            not increasing.passed and not report.result("limits").passed,
            {"strictly_increasing_violation": increasing.worst_violation},
            increasing.witness,
            AXIOM_TOL,
        )
    )
    return records
