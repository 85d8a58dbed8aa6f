"""
Suite registry: every `*_suite` callable in `fuzzybound.suites.*` becomes a subcommand
named after its module (underscores become dashes).
"""

from __future__ import annotations

import importlib
import logging
import pkgutil
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .config import RunConfig
from .reports import ReportRecord

logger = logging.getLogger(__name__)

# verify-all order: scalars, spaces, sequences, boundedness, continuity, norm, completeness
SUITE_ORDER = (
    "tnorm-check",
    "phi-check",
    "space-check",
    "d-alpha",
    "seq-converge",
    "op-bound",
    "op-continuity",
    "counterexample",
    "op-norm",
    "op-complete",
)


@dataclass
class SuiteContext:
    config: RunConfig
    plots: dict[str, list[tuple[float, float]]] = field(default_factory=dict)

    @property
    def seed(self) -> int:
        return self.config.seed

    @property
    def alpha_grid(self) -> tuple[float, ...]:
        return self.config.alpha_grid

    @property
    def sphere_samples(self) -> int | None:
        return self.config.samples.sphere

    def params(self, suite: str) -> dict[str, Any]:
        return self.config.suite(suite)

    def record(
        self,
        check_name: str,
        anchor: str,
        verdict: str,
        parameters: dict[str, Any] | None = None,
        values: dict[str, Any] | None = None,
        witness: Any = None,
        tolerance: float | None = None,
    ) -> ReportRecord:
        return ReportRecord(
            check_name=check_name,
            anchor=anchor,
            verdict=verdict,
            parameters=parameters or {},
            values=values or {},
            witness=witness,
            tolerance=self.config.tolerance if tolerance is None else tolerance,
            seed=self.seed,
        )

    def plot(self, name: str, xs: Sequence[float], ys: Sequence[float]) -> None:
        self.plots[name] = [(float(x), float(y)) for x, y in zip(xs, ys)]


Suite = Callable[[SuiteContext], list[ReportRecord]]


def discover_suites() -> dict[str, Suite]:
    from . import suites as suites_pkg

    registry: dict[str, Suite] = {}
    for _, mod_name, _ in pkgutil.iter_modules(suites_pkg.__path__):
        if mod_name.startswith("_"):
            continue
        try:
            module = importlib.import_module(f"{suites_pkg.__name__}.{mod_name}")
        except Exception as e:
            logger.warning("Failed to import suite %s: %s", mod_name, e)
            continue
        for attr_name in dir(module):
            fn = getattr(module, attr_name)
            if attr_name.endswith("_suite") and callable(fn):
                registry[mod_name.replace("_", "-")] = fn
                logger.debug("Registered suite: %s", mod_name)
    return registry


SUITE_REGISTRY = discover_suites()


def suite_names() -> list[str]:
    known = [n for n in SUITE_ORDER if n in SUITE_REGISTRY]
    return known + sorted(set(SUITE_REGISTRY) - set(known))
