"""
Level infima d_α against ρ(x)·q(α), at θ, on worked examples, and under scaling.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from ..fuzzy_space import FuzzySpace, ReciprocalProfile, StepProfile, level_infima
from ..reports import ReportRecord, verdict_of

if TYPE_CHECKING:
    from ..ops import SuiteContext

NAME = "d-alpha"
ANCHOR = "level-infimum"
ORACLE_TOL = 1e-9


def _relative(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.abs(a - b) / np.maximum(1.0, np.abs(b))


def _oracle(sp: FuzzySpace, xs: np.ndarray, alphas: np.ndarray) -> tuple[float, dict | None]:
    rows = np.repeat(xs, alphas.size, axis=0)
    levels = np.tile(alphas, xs.shape[0])
    worst, witness = 0.0, None
    for strict in (False, True):
        got = level_infima(sp, rows, levels, strict=strict)
        want = sp.closed_form_level(rows, levels, strict=strict)
        err = _relative(got, want)
        i = int(np.argmax(err))
        if err[i] > worst:
            worst = float(err[i])
            witness = {"x": rows[i].tolist(), "alpha": float(levels[i]), "strict": strict, "got": float(got[i]), "want": float(want[i])}
    return worst, witness


def d_alpha_suite(ctx: SuiteContext) -> list[ReportRecord]:
    params = ctx.params(NAME)
    count = int(params.get("vectors", 100))
    alphas = np.asarray(ctx.alpha_grid)
    rng = np.random.default_rng(ctx.seed)
    records = []

    for name in params.get("spaces", []):
        sp = ctx.config.space(name)
        xs = rng.standard_normal((count, sp.dimension)) * np.exp(rng.uniform(-2.0, 2.0, (count, 1)))
        worst, witness = _oracle(sp, xs, alphas)
        records.append(
            ctx.record(
                f"level-infimum-oracle[{name}]",
                ANCHOR,
                verdict_of(worst <= ORACLE_TOL),
                parameters={"space": name, "vectors": count, "profile": sp.profile.describe()},
                values={"worst_relative_error": worst},
                witness=witness if worst > ORACLE_TOL else None,
                tolerance=ORACLE_TOL,
            )
        )

        theta = level_infima(sp, np.zeros((alphas.size, sp.dimension)), alphas)
        records.append(
            ctx.record(
                f"level-infimum-theta[{name}]",
                ANCHOR,
                verdict_of(not np.any(theta)),
                parameters={"space": name},
                values={"max_value": float(theta.max())},
                tolerance=0.0,
            )
        )

        c = rng.choice([-1.0, 1.0], count) * np.exp(rng.uniform(-3.0, 3.0, count))
        a = rng.choice(alphas, count)
        lhs = level_infima(sp, c[:, None] * xs, a)
        rhs = sp.phi(c) * level_infima(sp, xs, a)  # type: ignore[misc]
        err = _relative(lhs, rhs)
        i = int(np.argmax(err))
        records.append(
            ctx.record(
                f"level-infimum-scaling[{name}]",
                ANCHOR,
                verdict_of(err[i] <= ORACLE_TOL),
                parameters={"space": name, "samples": count},
                values={"worst_relative_error": float(err[i])},
                witness=None if err[i] <= ORACLE_TOL else {"c": float(c[i]), "alpha": float(a[i]), "x": xs[i].tolist()},
                tolerance=ORACLE_TOL,
            )
        )

        fine = np.round(np.linspace(0.05, 0.95, 19), 2)
        unit = np.eye(sp.dimension)[:1].repeat(fine.size, axis=0)
        ctx.plot(f"d_alpha_{name}", fine, level_infima(sp, unit, fine))

    reciprocal = FuzzySpace.build(2, ReciprocalProfile(), name="reciprocal")
    step = FuzzySpace.build(2, StepProfile(0.5), name="step")
    examples = [
        ("reciprocal", reciprocal, [0.6, 0.8], 0.5, 2.0),
        ("step", step, [3.0, 0.0], 0.75, 3.0),
        ("step", step, [3.0, 0.0], 0.25, 0.0),
    ]
    rows = []
    worst = 0.0
    for label, sp, x, alpha, want in examples:
        got = float(level_infima(sp, np.array(x), alpha)[0])
        worst = max(worst, abs(got - want))
        rows.append({"space": label, "x": x, "alpha": alpha, "value": got, "expected": want})
    records.append(
        ctx.record(
            "level-infimum-examples",
            ANCHOR,
            verdict_of(worst <= ORACLE_TOL),
            values={"examples": rows, "worst_error": worst},
            tolerance=ORACLE_TOL,
        )
    )
    return records
