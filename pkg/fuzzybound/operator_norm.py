"""
Operator fuzzy norm N(T,s) = sup{α ∈ (0,1) : g(α) ≤ s}, with

    g(α) = sup_{x ≠ θ} d^Y_α(Tx) / d^X_{1−α}(x),

non-decreasing in α, so N(T,s) is found by bisection on α.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .axioms import AxiomReport
from .exceptions import PreconditionError
from .fuzzy_space import DEFAULT_LEVEL_TOL, level_infima
from .operator_analysis import DEFAULT_ALPHA_GRID, LinearOperator, default_sphere_samples, probe_directions

logger = logging.getLogger(__name__)

DEFAULT_ALPHA_TOL = 1e-6

OPNORM_AXIOMS = ("NI", "NII", "NIII", "NIV", "NIV-symmetric", "NV", "g-monotone")


def check_norm_preconditions(T: LinearOperator) -> None:
    """Raise PreconditionError unless the domain has NVI and the codomain t-norm is lower semicontinuous."""
    if not T.domain.satisfies_nvi:
        raise PreconditionError(
            f"domain '{T.domain.name}' does not satisfy NVI; d_(1-α)(x) may vanish for x ≠ θ"
        )
    if not T.codomain.tnorm.lower_semicontinuous:
        raise PreconditionError(
            f"codomain t-norm '{T.codomain.tnorm.name}' is not lower semicontinuous"
        )


class NormEvaluator:
    """
    g and N(T,·) for one operator on a fixed direction set.

    Every call evaluates a batch: g over an array of α, N over an array of s.
    """

    def __init__(self, T: LinearOperator, sphere_samples: int | None = None, seed: int = 0, tol: float = DEFAULT_LEVEL_TOL) -> None:
        check_norm_preconditions(T)
        self.operator = T
        self.sphere_samples = sphere_samples or default_sphere_samples(T.domain.dimension)
        self.seed = seed
        self.tol = tol
        self.directions = probe_directions(T, self.sphere_samples, seed)
        self.images = T(self.directions)

    def g(self, alphas: Any) -> np.ndarray:
        alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
        count = self.directions.shape[0]
        levels = np.repeat(alphas, count)
        num = level_infima(self.operator.codomain, np.tile(self.images, (alphas.size, 1)), levels, tol=self.tol)
        den = level_infima(self.operator.domain, np.tile(self.directions, (alphas.size, 1)), 1.0 - levels, tol=self.tol)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(den > 0, num / np.where(den > 0, den, 1.0), np.where(num > 0, np.inf, 0.0))
        return ratio.reshape(alphas.size, count).max(axis=1)

    def norm(self, s: Any, alpha_tol: float = DEFAULT_ALPHA_TOL) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        out = np.zeros(s.shape)
        positive = s > 0
        if not positive.any():
            return out
        top = float(self.g(1.0 - alpha_tol)[0])
        full = positive & (top <= s)
        out[full] = 1.0
        rest = np.nonzero(positive & ~full)[0]
        if rest.size:
            target = s[rest]
            lo = np.zeros(rest.size)
            hi = np.full(rest.size, 1.0 - alpha_tol)
            while np.max(hi - lo) > alpha_tol:
                mid = 0.5 * (lo + hi)
                ok = self.g(mid) <= target
                lo = np.where(ok, mid, lo)
                hi = np.where(ok, hi, mid)
            out[rest] = 0.5 * (lo + hi)
        return out


def g_alpha(T: LinearOperator, alpha: float, sphere_samples: int | None = None, seed: int = 0) -> float:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1) (got {alpha!r})")
    return float(NormEvaluator(T, sphere_samples, seed).g(alpha)[0])


def g_alpha_closed_form(T: LinearOperator, alpha: Any) -> np.ndarray:
    """crisp gain × q_Y(α)/q_X(1−α); exact under the profile representation."""
    alpha = np.asarray(alpha, dtype=float)
    return T.crisp_gain() * T.codomain.profile.quantile(alpha) / T.domain.profile.quantile(1.0 - alpha)


@dataclass(frozen=True)
class OperatorNormValue:
    operator: str
    s: float
    value: float
    alpha_tol: float

    def as_dict(self) -> dict[str, Any]:
        return {"operator": self.operator, "s": self.s, "value": self.value, "alpha_tol": self.alpha_tol}


def op_fuzzy_norm(
    T: LinearOperator,
    s: float,
    alpha_tol: float = DEFAULT_ALPHA_TOL,
    sphere_samples: int | None = None,
    seed: int = 0,
) -> OperatorNormValue:
    """N(T,s): 0 for s ≤ 0, 1 when g stays ≤ s up to 1−alpha_tol, else the bisection midpoint."""
    value = float(NormEvaluator(T, sphere_samples, seed).norm(s, alpha_tol)[0])
    return OperatorNormValue(T.name, float(s), value, alpha_tol)


def norm_level_infimum(
    T: LinearOperator,
    level: float,
    strict: bool = False,
    alpha_tol: float = DEFAULT_ALPHA_TOL,
    sphere_samples: int | None = None,
    seed: int = 0,
    evaluator: NormEvaluator | None = None,
) -> float:
    """
    ⋀{s : N(T,s) ≥ level} (or > level), read off g one α-tolerance below (or above) the level.
    """
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie in (0, 1) (got {level!r})")
    ev = evaluator or NormEvaluator(T, sphere_samples, seed)
    probe = level + alpha_tol if strict else level - alpha_tol
    probe = min(max(probe, alpha_tol), 1.0 - alpha_tol)
    return float(ev.g(probe)[0])


@dataclass
class OperatorNormProfile:
    operator: str
    alphas: tuple[float, ...]
    g: np.ndarray
    closed_form: np.ndarray
    sphere_samples: int
    seed: int

    @property
    def monotone(self) -> bool:
        return bool(np.all(np.diff(self.g) >= -1e-12 * np.maximum(1.0, self.g[1:])))

    @property
    def closed_form_error(self) -> float:
        return float(np.max(np.abs(self.g - self.closed_form) / np.maximum(1.0, np.abs(self.closed_form))))

    def as_dict(self) -> dict[str, Any]:
        return {
            "operator": self.operator,
            "alphas": list(self.alphas),
            "g": [float(v) for v in self.g],
            "closed_form": [float(v) for v in self.closed_form],
            "monotone": self.monotone,
            "closed_form_error": self.closed_form_error,
            "sphere_samples": self.sphere_samples,
            "seed": self.seed,
        }


def operator_norm_profile(
    T: LinearOperator,
    alpha_grid: Sequence[float] = DEFAULT_ALPHA_GRID,
    sphere_samples: int | None = None,
    seed: int = 0,
) -> OperatorNormProfile:
    ev = NormEvaluator(T, sphere_samples, seed)
    alphas = tuple(float(a) for a in alpha_grid)
    return OperatorNormProfile(T.name, alphas, ev.g(alphas), g_alpha_closed_form(T, alphas), ev.sphere_samples, seed)


def opnorm_axiom_check(
    fleet: Sequence[LinearOperator],
    scalars: Sequence[float],
    s_grid: Sequence[float],
    seed: int,
    alpha_tol: float = DEFAULT_ALPHA_TOL,
    sphere_samples: int = 32,
    tol: float = 1e-9,
    pair_count: int | None = None,
    axioms: Sequence[str] = OPNORM_AXIOMS,
    alpha_grid: Sequence[float] = DEFAULT_ALPHA_GRID,
) -> AxiomReport:
    """
    Sampled norm axioms of N(T,·) over a fleet sharing one domain and codomain.

    The triangle is checked in the K-weighted form N(T₁+T₂, s+Kt) and, separately,
    in the symmetric form N(T₁+T₂, K(s+t)). Comparisons between two bisection results
    allow alpha_tol on top of tol.
    """
    unknown = set(axioms) - set(OPNORM_AXIOMS)
    if unknown:
        raise ValueError(f"Unknown operator-norm axioms {sorted(unknown)}. Available: {list(OPNORM_AXIOMS)}")
    if not fleet:
        raise ValueError("fleet must contain at least one operator")
    first = fleet[0]
    K = first.K
    tnorm = first.codomain.tnorm
    phi = first.domain.phi
    s_arr = np.asarray(s_grid, dtype=float)
    report = AxiomReport(subject=f"operator fuzzy norm on {first.domain.name}→{first.codomain.name}")
    evs = [NormEvaluator(T, sphere_samples, seed) for T in fleet]
    base = [ev.norm(s_arr, alpha_tol) for ev in evs]
    slack = tol + alpha_tol

    if "NI" in axioms:
        nonpos = np.array([-1.0, -0.5, 0.0])
        vals = np.concatenate([ev.norm(nonpos, alpha_tol) for ev in evs])
        report.add_sampled("NI", vals, np.tile(nonpos, len(evs)), tol)

    if "NII" in axioms:
        viol, wit = [], []
        pos = s_arr > 0
        for i, (T, ev, vals) in enumerate(zip(fleet, evs, base)):
            if T.is_zero:
                viol.extend(1.0 - vals[pos])
                wit.extend((i, s) for s in s_arr[pos])
            else:
                probe = 0.5 * float(ev.g(0.5)[0])
                viol.append(1.0 if ev.norm(probe, alpha_tol)[0] >= 1.0 else 0.0)
                wit.append((i, probe))
        report.add_sampled("NII", np.array(viol), np.array(wit), tol, note="N(T,s) = 1 for all s > 0 only for T = 0")

    if "NIII" in axioms:
        viol, wit = [], []
        for i, (T, vals) in enumerate(zip(fleet, base)):
            for lam in scalars:
                scaled = NormEvaluator(T.scaled(lam), sphere_samples, seed).norm(s_arr, alpha_tol)
                shifted = evs[i].norm(s_arr / float(phi(lam)), alpha_tol)  # type: ignore[misc]
                viol.extend(np.maximum(0.0, np.abs(scaled - shifted) - 2.0 * alpha_tol))
                wit.extend((i, lam, s, a, b) for s, a, b in zip(s_arr, scaled, shifted))
        report.add_sampled("NIII", np.array(viol), np.array(wit), tol, note="N(λT,s) = N(T,s/φ(λ)) within 2·alpha_tol")

    if "NIV" in axioms or "NIV-symmetric" in axioms:
        rng = np.random.default_rng(seed)
        pairs = list(itertools.combinations(range(len(fleet)), 2)) or [(0, 0)]
        if pair_count is not None and pair_count < len(pairs):
            pick = rng.choice(len(pairs), size=pair_count, replace=False)
            pairs = [pairs[k] for k in sorted(pick)]
        ss, tt = (g.ravel() for g in np.meshgrid(s_arr, s_arr, indexing="ij"))
        forms = [(name, fn) for name, fn in (("NIV", lambda s, t: s + K * t), ("NIV-symmetric", lambda s, t: K * (s + t))) if name in axioms]
        for name, combine in forms:
            viol, wit = [], []
            for i, j in pairs:
                total = NormEvaluator(fleet[i].combine(1.0, fleet[j], 1.0), sphere_samples, seed)
                lhs = total.norm(combine(ss, tt), alpha_tol)
                left = evs[i].norm(ss, alpha_tol)
                right = evs[j].norm(tt, alpha_tol)
                rhs = tnorm(left, right)
                viol.extend(np.maximum(0.0, rhs - lhs - alpha_tol))
                wit.extend((i, j, s, t, a, b) for s, t, a, b in zip(ss, tt, lhs, rhs))
            report.add_sampled(name, np.array(viol), np.array(wit), tol)

    if "NV" in axioms:
        viol, wit = [], []
        order = np.argsort(s_arr)
        for i, (ev, vals) in enumerate(zip(evs, base)):
            v = vals[order]
            drops = np.maximum(0.0, v[:-1] - v[1:] - alpha_tol)
            viol.extend(drops)
            wit.extend((i, a, b) for a, b in zip(s_arr[order][:-1], s_arr[order][1:]))
            far = 10.0 * float(ev.g(1.0 - alpha_tol)[0]) + 1.0
            viol.append(1.0 - float(ev.norm(far, alpha_tol)[0]))
            wit.append((i, far, far))
        report.add_sampled("NV", np.array(viol), np.array(wit), slack, note="non-decreasing in s, reaching 1 for large s")

    if "g-monotone" in axioms:
        grid = np.asarray(alpha_grid, dtype=float)
        viol, wit = [], []
        for i, ev in enumerate(evs):
            g = ev.g(grid)
            viol.extend(np.maximum(0.0, g[:-1] - g[1:]) / np.maximum(1.0, g[1:]))
            wit.extend((i, a, b) for a, b in zip(grid[:-1], grid[1:]))
        report.add_sampled("g-monotone", np.array(viol), np.array(wit), tol)

    logger.debug("operator-norm axioms on %d operators: passed=%s", len(fleet), report.passed)
    return report
