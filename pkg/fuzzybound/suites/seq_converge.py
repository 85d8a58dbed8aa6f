"""
Finite-horizon convergence and Cauchy verdicts for configured sequences, per mode.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from ..fuzzy_space import ConvergenceMode, seq_cauchy, seq_convergence
from ..reports import ReportRecord, verdict_of

if TYPE_CHECKING:
    from ..ops import SuiteContext

NAME = "seq-converge"
ANCHOR = "fuzzy-convergence"


def _mode(kind: str, ctx: SuiteContext, alpha: float) -> ConvergenceMode:
    if kind == "classical":
        return ConvergenceMode.classical()
    if kind == "alpha-fuzzy":
        return ConvergenceMode.alpha_fuzzy(alpha)
    if kind == "l-fuzzy":
        return ConvergenceMode.l_fuzzy(ctx.alpha_grid)
    raise ValueError(f"Unknown convergence mode '{kind}'. Available: ['classical', 'alpha-fuzzy', 'l-fuzzy']")


def seq_converge_suite(ctx: SuiteContext) -> list[ReportRecord]:
    params = ctx.params(NAME)
    modes = params.get("modes", ["classical", "l-fuzzy"])
    alpha = float(params.get("alpha", 0.5))
    tol = float(params.get("tol", 1e-2))
    n_max = ctx.config.horizon.n_max
    records = []

    for name, cfg in ctx.config.sequences.items():
        sp = ctx.config.space(cfg.space)
        for kind in modes:
            mode = _mode(kind, ctx, alpha)
            conv = seq_convergence(sp, cfg.spec, mode, n_max, tol)
            cauchy = seq_cauchy(sp, cfg.spec, mode, n_max, tol)
            # a sequence expected to converge must be Cauchy; a stalled one must not be
            expected_cauchy = {"converges": "converges", "diverges-witness": "diverges-witness"}.get(cfg.expect)
            ok = conv.verdict == cfg.expect and (expected_cauchy is None or cauchy.verdict == expected_cauchy)
            records.append(
                ctx.record(
                    f"sequence[{name}:{mode.label()}]",
                    ANCHOR,
                    verdict_of(ok),
                    parameters={"sequence": name, "space": cfg.space, "family": cfg.spec.family, "mode": mode.label(), "n_max": n_max, "expect": cfg.expect},
                    values={"convergence": conv.verdict, "cauchy": cauchy.verdict, "last": conv.last, "cauchy_last_window": cauchy.last},
                    witness=conv.witness or cauchy.witness,
                    tolerance=tol,
                )
            )
    return records
