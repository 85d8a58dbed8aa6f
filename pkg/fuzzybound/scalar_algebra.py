"""
t-norms and φ-functions.

Closed forms for the four classical t-norms and the three φ examples, user-supplied
variants (callable or table), and sampled axiom checks that report the worst violation
together with the witness that produced it.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np
from scipy import optimize
from scipy.interpolate import RegularGridInterpolator

from .axioms import AxiomReport, AxiomResult

logger = logging.getLogger(__name__)

TNORM_KINDS = ("standard-intersection", "algebraic-product", "bounded-difference", "drastic")
CONTINUITY_CLASSES = ("continuous", "lower-semicontinuous", "none")
PHI_KINDS = ("abs", "abs-power", "rational-example", "user")

# Grid values placed ahead of the random samples; the first, 0.5, gives readable witnesses.
GRID_POINTS = (0.5, 0.25, 0.75, 0.0, 1.0)

# Jumps smaller than JUMP_SLACK * delta are attributed to Lipschitz variation, not discontinuity.
SEMICONTINUITY_DELTA = 1e-9
JUMP_SLACK = 1e3

ArrayFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class TNorm:
    kind: str
    continuity_class: str = "continuous"
    function: ArrayFn | None = field(default=None, compare=False, repr=False)
    label: str = ""

    def __post_init__(self) -> None:
        if self.kind not in TNORM_KINDS and self.kind != "user":
            raise ValueError(f"Unknown t-norm kind '{self.kind}'. Available: {list(TNORM_KINDS) + ['user']}")
        if self.continuity_class not in CONTINUITY_CLASSES:
            raise ValueError(f"continuity_class must be one of {CONTINUITY_CLASSES}")
        if self.kind == "user" and not callable(self.function):
            raise ValueError("A user t-norm requires a callable 'function'.")

    @classmethod
    def standard(cls, kind: str) -> TNorm:
        """Built-in t-norm; the drastic one is declared without any continuity."""
        return cls(kind=kind, continuity_class="none" if kind == "drastic" else "continuous")

    @classmethod
    def from_function(cls, fn: ArrayFn, continuity_class: str = "none", label: str = "user") -> TNorm:
        return cls(kind="user", continuity_class=continuity_class, function=fn, label=label)

    @classmethod
    def from_table(cls, values: Any, continuity_class: str = "continuous", label: str = "table") -> TNorm:
        """
        Build a t-norm from its values on a uniform square grid of [0,1]², row index = first
        argument. Off-grid arguments are interpolated bilinearly.
        """
        table = np.asarray(values, dtype=float)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] < 2:
            raise ValueError("A t-norm table must be a square matrix with at least 2 rows.")
        grid = np.linspace(0.0, 1.0, table.shape[0])
        interp = RegularGridInterpolator((grid, grid), table, method="linear")

        def lookup(a: np.ndarray, b: np.ndarray) -> np.ndarray:
            a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
            pts = np.stack([a.ravel(), b.ravel()], axis=-1)
            return interp(pts).reshape(a.shape)

        return cls(kind="user", continuity_class=continuity_class, function=lookup, label=label)

    @property
    def name(self) -> str:
        return self.label or self.kind

    @property
    def lower_semicontinuous(self) -> bool:
        return self.continuity_class in ("continuous", "lower-semicontinuous")

    def __call__(self, a: Any, b: Any) -> np.ndarray:
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if self.kind == "standard-intersection":
            return np.minimum(a, b)
        if self.kind == "algebraic-product":
            return a * b
        if self.kind == "bounded-difference":
            return np.maximum(0.0, a + b - 1.0)
        if self.kind == "drastic":
            return np.where(b == 1.0, a, np.where(a == 1.0, b, 0.0))
        return np.asarray(self.function(a, b), dtype=float)  # type: ignore[misc]


@dataclass(frozen=True)
class PhiFunction:
    kind: str = "abs"
    p: float = 1.0
    n: int = 1
    function: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False, repr=False)
    label: str = ""

    def __post_init__(self) -> None:
        if self.kind not in PHI_KINDS:
            raise ValueError(f"Unknown φ kind '{self.kind}'. Available: {list(PHI_KINDS)}")
        if self.kind == "abs-power" and not self.p > 0:
            raise ValueError("abs-power φ requires p > 0.")
        if self.kind == "rational-example" and (int(self.n) != self.n or self.n < 1):
            raise ValueError("rational-example φ requires a natural number n ≥ 1.")
        if self.kind == "user" and not callable(self.function):
            raise ValueError("A user φ requires a callable 'function'.")

    @classmethod
    def abs_power(cls, p: float) -> PhiFunction:
        return cls(kind="abs") if p == 1 else cls(kind="abs-power", p=float(p))

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        if self.kind == "abs-power":
            return f"abs-power(p={self.p:g})"
        if self.kind == "rational-example":
            return f"rational-example(n={self.n})"
        return self.kind

    def __call__(self, c: Any) -> np.ndarray:
        c = np.asarray(c, dtype=float)
        if self.kind == "abs":
            return np.abs(c)
        if self.kind == "abs-power":
            return np.abs(c) ** self.p
        if self.kind == "rational-example":
            return 2.0 * c ** (2 * self.n) / (np.abs(c) + 1.0)
        return np.asarray(self.function(c), dtype=float)  # type: ignore[misc]


def _check_unit(name: str, value: float) -> None:
    if not (math.isfinite(value) and 0.0 <= value <= 1.0):
        raise ValueError(f"{name} must lie in [0, 1] (got {value!r})")


def tnorm_eval(t: TNorm, a: float, b: float) -> float:
    """Evaluate a t-norm at a single pair of unit-interval arguments."""
    _check_unit("a", a)
    _check_unit("b", b)
    return float(t(a, b))


def _unit_samples(rng: np.random.Generator, count: int, rows: int) -> np.ndarray:
    probes = np.array(np.meshgrid(*([GRID_POINTS] * rows), indexing="ij")).reshape(rows, -1)
    return np.concatenate([probes, rng.random((rows, count))], axis=1)


def tnorm_axiom_check(t: TNorm, sample_count: int, seed: int, tol: float = 1e-12) -> AxiomReport:
    """
    Check the t-norm axioms on the probe grid plus `sample_count` random quadruples.

    Also reports the positivity condition α*α > 0 for α > 0 and, unless the declared
    continuity class is 'none', a sampled semicontinuity probe. Both are informational.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be at least 1")
    rng = np.random.default_rng(seed)
    a, b, c, d = _unit_samples(rng, sample_count, 4)
    report = AxiomReport(subject=f"t-norm {t.name}", flags={"continuity_class": t.continuity_class})

    ab = t(a, b)
    report.add_sampled("range", np.maximum(0.0, np.maximum(-ab, ab - 1.0)), np.column_stack([a, b]), tol)
    report.add_sampled("identity", np.abs(t(a, 1.0) - a), np.column_stack([a, t(a, 1.0)]), tol)
    report.add_sampled("commutativity", np.abs(ab - t(b, a)), np.column_stack([a, b]), tol)
    report.add_sampled(
        "associativity",
        np.abs(t(ab, c) - t(a, t(b, c))),
        np.column_stack([a, b, c]),
        tol,
    )
    lo1, hi1 = np.minimum(a, b), np.maximum(a, b)
    lo2, hi2 = np.minimum(c, d), np.maximum(c, d)
    report.add_sampled(
        "monotonicity",
        np.maximum(0.0, t(lo1, lo2) - t(hi1, hi2)),
        np.column_stack([lo1, hi1, lo2, hi2]),
        tol,
    )

    positive = a > 0
    squares = t(a, a)
    report.add_sampled(
        "positivity",
        np.where(positive & (squares <= 0.0), 1.0, 0.0),
        np.column_stack([a, squares]),
        tol,
        informational=True,
        note="α*α > 0 for α > 0; violations are counted, not measured",
    )

    if t.continuity_class != "none":
        delta = SEMICONTINUITY_DELTA
        below = t(np.maximum(a - delta, 0.0), np.maximum(b - delta, 0.0))
        report.add_sampled(
            "lower-semicontinuity",
            np.maximum(0.0, (ab - below) - JUMP_SLACK * delta),
            np.column_stack([a, b, ab, below]),
            tol,
            informational=True,
            note=f"approach from below with step {delta:g}",
        )
        if t.continuity_class == "continuous":
            above = t(np.minimum(a + delta, 1.0), np.minimum(b + delta, 1.0))
            report.add_sampled(
                "continuity",
                np.maximum(0.0, np.abs(above - ab) - JUMP_SLACK * delta),
                np.column_stack([a, b, ab, above]),
                tol,
                informational=True,
                note=f"two-sided probe with step {delta:g}",
            )

    logger.debug("t-norm %s axiom check: passed=%s", t.name, report.passed)
    return report


def tnorm_power(t: TNorm, a: float, n: int) -> float:
    """Left fold a*a*…*a with n factors."""
    _check_unit("a", a)
    if n < 1:
        raise ValueError("n must be a positive integer")
    value = np.asarray(a, dtype=float)
    for _ in range(n - 1):
        value = t(value, a)
    return float(value)


def diagonal_threshold(t: TNorm, alpha: float, step: float = 1e-3) -> float:
    """Smallest β on the grid {step, 2·step, …, 1} with β*β ≥ α."""
    _check_unit("alpha", alpha)
    count = int(round(1.0 / step))
    grid = np.round(np.arange(1, count + 1) * step, 12)
    hits = np.nonzero(t(grid, grid) >= alpha)[0]
    return float(grid[hits[0]]) if hits.size else 1.0


def phi_eval(f: PhiFunction, c: float) -> float:
    return float(f(c))


def phi_axiom_check(
    f: PhiFunction,
    grid_size: int = 1000,
    tol: float = 1e-12,
    small_threshold: float = 1e-3,
    large_threshold: float = 1e3,
    span: tuple[float, float] = (1e-6, 1e6),
) -> AxiomReport:
    """
    Check the four φ conditions on a log-spaced grid over `span`.

    Evenness is compared relative to max(1, φ(t)); the two limits are checked as
    φ(span[0]) ≤ small_threshold and φ(span[1]) ≥ large_threshold on top of the
    strict increase along the grid.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    grid = np.logspace(math.log10(span[0]), math.log10(span[1]), grid_size)
    values = f(grid)
    mirrored = f(-grid)
    report = AxiomReport(subject=f"φ {f.name}")

    report.add_sampled(
        "evenness",
        np.abs(mirrored - values) / np.maximum(1.0, np.abs(values)),
        np.column_stack([grid, values, mirrored]),
        tol,
    )
    at_one = float(f(1.0))
    report.add(AxiomResult("unit", abs(at_one - 1.0) <= tol, abs(at_one - 1.0), (1.0, at_one) if abs(at_one - 1.0) > tol else None))

    diffs = np.diff(values)
    not_finite = ~np.isfinite(values[1:]) | ~np.isfinite(values[:-1])
    step_violation = np.where(diffs < 0, -diffs, np.where(diffs == 0, 1.0, 0.0))
    step_violation = np.where(not_finite, np.inf, step_violation)
    report.add_sampled(
        "strictly-increasing",
        step_violation,
        np.column_stack([grid[:-1], grid[1:], values[:-1], values[1:]]),
        tol,
    )

    low, high = float(values[0]), float(values[-1])
    low_excess = max(0.0, low - small_threshold * (1.0 + 1e-9))
    high_deficit = max(0.0, large_threshold * (1.0 - 1e-9) - high)
    worst = low_excess + high_deficit
    report.add(
        AxiomResult(
            "limits",
            worst <= tol,
            worst,
            (span[0], low, span[1], high) if worst > tol else None,
            note=f"φ({span[0]:g}) ≤ {small_threshold:g} and φ({span[1]:g}) ≥ {large_threshold:g}",
        )
    )
    logger.debug("φ %s axiom check: passed=%s", f.name, report.passed)
    return report


def phi_inverse(f: PhiFunction, y: float, tol: float = 1e-10) -> float:
    """Return c > 0 with |φ(c) − y| ≤ tol, by bisection on the strictly increasing branch."""
    if not y > 0:
        raise ValueError("phi_inverse requires y > 0")
    lo, hi = 0.0, 1.0
    if float(f(lo)) >= y:
        raise ValueError(f"y={y!r} is not above φ near 0; outside the achievable range")
    while float(f(hi)) < y:
        hi *= 2.0
        if hi > 2.0**60:
            raise ValueError(f"y={y!r} exceeds φ on the bracket [0, 2^60]; outside the achievable range")
    c = optimize.bisect(lambda u: float(f(u)) - y, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=2000)
    if abs(float(f(c)) - y) > tol:
        raise ValueError(f"bisection for φ⁻¹({y!r}) stalled at c={c!r} with residual {float(f(c)) - y:g}")
    return float(c)
