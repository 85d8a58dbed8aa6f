"""
Sequential fuzzy continuity along power sequences, and the bounded ⇒ continuous implication.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from ..operator_analysis import bounded_certificate, continuity_probe
from ..reports import ReportRecord, verdict_of

if TYPE_CHECKING:
    from ..ops import SuiteContext

NAME = "op-continuity"


def _probe_points(dimension: int, seed: int) -> tuple[list[np.ndarray], list[np.ndarray]]:
    rng = np.random.default_rng(seed)
    eye = np.eye(dimension)
    bases = [np.zeros(dimension), eye[0], rng.standard_normal(dimension)]
    directions = [eye[-1], np.ones(dimension) / np.sqrt(dimension)]
    return bases, directions


def op_continuity_suite(ctx: SuiteContext) -> list[ReportRecord]:
    params = ctx.params(NAME)
    n_max = int(params.get("n_max", 10_000))
    tol = float(params.get("tol", 1e-2))
    rate = ctx.config.horizon.rate
    records = []

    for name in params.get("operators", []):
        T = ctx.config.operator(name)
        bases, directions = _probe_points(T.domain.dimension, ctx.seed)
        verdict = continuity_probe(T, bases, directions, rate, n_max, tol)
        params_out = {"operator": name, "n_max": n_max, "rate": rate, "probes": len(verdict.probes)}
        records.append(
            ctx.record(
                f"fuzzy-continuity[{name}]",
                "fuzzy-continuity",
                verdict_of(verdict.continuous and verdict.consistent_across_points),
                parameters=params_out,
                values={"verdict": verdict.verdict, "consistent_across_points": verdict.consistent_across_points, "worst_image_last": max(p["image_last"] for p in verdict.probes)},
                witness=verdict.witness,
                tolerance=tol,
            )
        )

        cert = bounded_certificate(T, ctx.alpha_grid, ctx.sphere_samples, ctx.seed)
        if cert.bounded:
            records.append(
                ctx.record(
                    f"bounded-implies-continuous[{name}]",
                    "bounded-implies-continuous",
                    verdict_of(verdict.continuous),
                    parameters=params_out,
                    values={"bounded": True, "continuity": verdict.verdict},
                    witness=verdict.witness,
                    tolerance=tol,
                )
            )
    return records
