"""
Completeness of the space of fuzzy bounded operators, witnessed on closed-form families
T_k = T + a_k·S, and uniqueness of l-fuzzy limits in a single space.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .exceptions import PreconditionError
from .fuzzy_space import (
    CONVERGES,
    DIVERGES,
    INCONCLUSIVE,
    ConvergenceMode,
    FuzzySpace,
    SequenceSpec,
    SequenceVerdict,
    level_infimum,
    sample_indices,
    seq_convergence,
)
from .operator_analysis import DEFAULT_ALPHA_GRID, LinearOperator, bounded_certificate
from .operator_norm import DEFAULT_ALPHA_TOL, NormEvaluator, norm_level_infimum

logger = logging.getLogger(__name__)

DECAY_KINDS = ("power", "geometric", "growth", "alternating", "constant")

# relative agreement between the scaled λ and a direct evaluation on T_n − T_m
_SPOT_CHECK_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class OperatorSequence:
    base: LinearOperator
    perturbation: np.ndarray
    decay: str = "power"
    rate: float = 1.0
    ratio: float = 0.5
    n_max: int = 1000
    name: str = ""

    def __post_init__(self) -> None:
        if self.decay not in DECAY_KINDS:
            raise ValueError(f"Unknown decay '{self.decay}'. Available: {list(DECAY_KINDS)}")
        s = np.array(self.perturbation, dtype=float, ndmin=2)
        if s.shape != self.base.matrix.shape:
            raise ValueError(f"perturbation shape {s.shape} differs from base shape {self.base.matrix.shape}")
        if self.decay == "geometric" and not abs(self.ratio) < 1:
            raise ValueError("geometric decay needs |ratio| < 1")
        if self.decay == "power" and not self.rate > 0:
            raise ValueError("power decay needs rate > 0")
        if self.n_max < 2:
            raise ValueError("n_max must be at least 2")
        s.setflags(write=False)
        object.__setattr__(self, "perturbation", s)

    @property
    def S(self) -> LinearOperator:
        return LinearOperator(self.perturbation, self.base.domain, self.base.codomain, "S")

    def coefficients(self, ks: Any) -> np.ndarray:
        k = np.asarray(ks, dtype=float)
        if self.decay == "power":
            return k ** (-self.rate)
        if self.decay == "geometric":
            return self.ratio**k
        if self.decay == "growth":
            return k
        if self.decay == "alternating":
            return np.asarray(ks) % 2 * 1.0
        return np.zeros(k.shape)

    def term(self, k: int) -> LinearOperator:
        a = float(self.coefficients(k))
        return LinearOperator(self.base.matrix + a * self.perturbation, self.base.domain, self.base.codomain, f"T_{k}")

    def difference(self, n: int, m: int) -> LinearOperator:
        """T_n − T_m, formed from the two terms rather than from the coefficient gap."""
        return LinearOperator(self.term(n).matrix - self.term(m).matrix, self.base.domain, self.base.codomain, f"T_{n}-T_{m}")

    def column_sequence(self, j: int, limit: Any | None = None) -> SequenceSpec:
        """The codomain sequence T_k e_j as a SequenceSpec of the matching family."""
        base = tuple(self.base.matrix[:, j])
        direction = tuple(self.perturbation[:, j])
        lim = None if limit is None else tuple(np.asarray(limit, dtype=float))
        if self.decay in ("power", "geometric"):
            return SequenceSpec(self.decay, base, direction, rate=self.rate, ratio=self.ratio, limit=lim, name=f"column {j}")
        if self.decay == "constant":
            return SequenceSpec("constant", base, limit=lim, name=f"column {j}")
        rows = tuple(tuple(self.term(k).matrix[:, j]) for k in range(1, self.n_max + 1))
        return SequenceSpec("table", base, rows=rows, limit=lim, name=f"column {j}")


@dataclass
class OperatorSequenceVerdict:
    verdict: str
    indices: np.ndarray
    values: np.ndarray
    per_alpha: dict[float, float] = field(default_factory=dict)
    witness: tuple[float, ...] | None = None
    spot_check_error: float = 0.0

    @property
    def cauchy(self) -> bool:
        return self.verdict == CONVERGES

    def as_dict(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict,
            "late_window": float(self.values[np.searchsorted(self.indices, self.indices[-1] // 2)]),
            "per_alpha": {f"{a:g}": v for a, v in self.per_alpha.items()},
            "witness": list(self.witness) if self.witness is not None else None,
            "spot_check_error": self.spot_check_error,
        }


def operator_seq_cauchy(
    seq: OperatorSequence,
    alpha_grid: Sequence[float] = DEFAULT_ALPHA_GRID,
    tol: float = 1e-2,
    alpha_tol: float = DEFAULT_ALPHA_TOL,
    sphere_samples: int | None = None,
    seed: int = 0,
) -> OperatorSequenceVerdict:
    """
    λ_{n,m}(α) = ⋀{s : N(T_n − T_m, s) > 1−α} over sampled pairs up to the horizon.

    T_n − T_m = (a_n − a_m)·S, so λ is φ(a_n − a_m) times the level infimum of S; the
    worst pair is re-evaluated directly on T_n − T_m as a cross-check.
    """
    ev = NormEvaluator(seq.S, sphere_samples, seed)
    phi = seq.base.domain.phi
    idx = sample_indices(seq.n_max)
    ii, jj = np.triu_indices(idx.size, k=1)
    coeff = seq.coefficients(idx)
    gaps = np.asarray(phi(coeff[ii] - coeff[jj]), dtype=float)  # type: ignore[misc]

    levels = np.array([min(1.0 - a + alpha_tol, 1.0 - alpha_tol) for a in alpha_grid])
    g_s = ev.g(levels)
    lam = gaps[:, None] * g_s[None, :]
    values = lam.max(axis=1)

    per_start = np.zeros(idx.size)
    np.maximum.at(per_start, ii, values)
    window = np.maximum.accumulate(per_start[::-1])[::-1]
    half, quarter = np.searchsorted(idx, seq.n_max // 2), np.searchsorted(idx, max(1, seq.n_max // 4))
    late, early = float(window[half]), float(window[quarter])

    in_late = idx[ii] >= seq.n_max // 2
    k = int(np.argmax(np.where(in_late, values, -np.inf)))
    n, m = int(idx[ii[k]]), int(idx[jj[k]])
    spot = 0.0
    if values[k] > 0:
        direct = NormEvaluator(seq.difference(n, m), sphere_samples, seed)
        worst_alpha = int(np.argmax(lam[k]))
        exact = norm_level_infimum(seq.difference(n, m), 1.0 - alpha_grid[worst_alpha], True, alpha_tol, evaluator=direct)
        spot = abs(exact - float(lam[k, worst_alpha])) / max(1.0, exact)
        if spot > _SPOT_CHECK_TOL:
            logger.warning("operator sequence %s: scaled λ disagrees with direct evaluation by %g", seq.name, spot)

    witness = None
    if late <= tol:
        verdict = CONVERGES
    elif late >= 0.99 * early:
        verdict = DIVERGES
        witness = (float(n), float(m), float(values[k]))
    else:
        verdict = INCONCLUSIVE
    per_alpha = {float(a): float(lam[in_late, c].max(initial=0.0)) for c, a in enumerate(alpha_grid)}
    logger.debug("operator sequence %s Cauchy: %s (late window %g)", seq.name or seq.decay, verdict, late)
    return OperatorSequenceVerdict(verdict, idx, window, per_alpha, witness, spot)


@dataclass
class OperatorLimitResult:
    verdict: str
    limit: np.ndarray | None
    cauchy: OperatorSequenceVerdict
    columns: list[str] = field(default_factory=list)
    bounded: bool = False
    residuals: dict[float, float] = field(default_factory=dict)
    entry_error: float = math.nan
    note: str = ""

    def as_dict(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict,
            "limit": None if self.limit is None else self.limit.tolist(),
            "cauchy": self.cauchy.verdict,
            "columns": self.columns,
            "bounded": self.bounded,
            "residuals": {f"{a:g}": r for a, r in self.residuals.items()},
            "entry_error": self.entry_error,
            "note": self.note,
        }


def extrapolated_limit(seq: OperatorSequence) -> tuple[np.ndarray, tuple[int, int]]:
    """
    Limit estimate from the column images T_n e_j and T_m e_j at n = n_max, m = n_max // 2.

    With T_k = L + a_k·S the two terms determine L = (a_m·T_n − a_n·T_m)/(a_m − a_n).
    When the two coefficients coincide (constant decay, or both underflowed) the
    horizon term itself is the estimate.
    """
    n, m = seq.n_max, max(1, seq.n_max // 2)
    eye = np.eye(seq.base.domain.dimension)
    t_n = np.column_stack([seq.term(n)(eye[j]) for j in range(eye.shape[0])])
    t_m = np.column_stack([seq.term(m)(eye[j]) for j in range(eye.shape[0])])
    a_n, a_m = (float(v) for v in seq.coefficients([n, m]))
    if a_m == a_n:
        return t_n, (n, m)
    return (a_m * t_n - a_n * t_m) / (a_m - a_n), (n, m)


def operator_seq_limit(
    seq: OperatorSequence,
    alpha_grid: Sequence[float] = DEFAULT_ALPHA_GRID,
    tol: float = 1e-2,
    alpha_tol: float = DEFAULT_ALPHA_TOL,
    sphere_samples: int | None = None,
    seed: int = 0,
    residual_tol: float = 1e-2,
    entry_tol: float = 1e-9,
) -> OperatorLimitResult:
    """
    Recover the limit of a Cauchy family and check it belongs to the bounded operators.

    The limit is extrapolated from the horizon terms (see extrapolated_limit) and compared
    entrywise with the base operator. Each column is confirmed as an l-fuzzy limit in the
    codomain, the limit gets a boundedness certificate, and the residual
    ⋀{s : N(T_{n_max} − L, s) ≥ α} must be within residual_tol on every grid α.
    """
    cauchy = operator_seq_cauchy(seq, alpha_grid, tol, alpha_tol, sphere_samples, seed)
    if not cauchy.cauchy:
        return OperatorLimitResult("precondition-unmet", None, cauchy, note=f"sequence is not Cauchy ({cauchy.verdict})")

    limit, (n, m) = extrapolated_limit(seq)
    horizon = seq.term(n)
    L = LinearOperator(limit, seq.base.domain, seq.base.codomain, "limit")
    entry_error = float(np.max(np.abs(limit - seq.base.matrix)))

    mode = ConvergenceMode.l_fuzzy(alpha_grid)
    columns = [
        seq_convergence(seq.base.codomain, seq.column_sequence(j, limit[:, j]), mode, n, tol).verdict
        for j in range(limit.shape[1])
    ]
    cert = bounded_certificate(L, alpha_grid, sphere_samples, seed)
    residual_op = LinearOperator(horizon.matrix - limit, seq.base.domain, seq.base.codomain, "T_n - limit")
    ev = NormEvaluator(residual_op, sphere_samples, seed)
    residuals = {float(a): norm_level_infimum(residual_op, a, False, alpha_tol, evaluator=ev) for a in alpha_grid}

    ok = (
        all(c == CONVERGES for c in columns)
        and cert.bounded
        and max(residuals.values()) <= residual_tol
        and entry_error <= entry_tol
    )
    note = f"limit extrapolated from T_{n} and T_{m}"
    if max(residuals.values()) > residual_tol:
        note += f"; horizon term still {max(residuals.values()):g} from the limit"
    return OperatorLimitResult("pass" if ok else "fail", limit, cauchy, columns, cert.bounded, residuals, entry_error, note)


@dataclass
class UniquenessVerdict:
    passed: bool
    limit_verdict: str
    decoys: list[dict[str, Any]] = field(default_factory=list)

    def as_dict(self) -> dict[str, Any]:
        return {"passed": self.passed, "limit_verdict": self.limit_verdict, "decoys": self.decoys}


def limit_uniqueness_probe(
    sp: FuzzySpace,
    seq: SequenceSpec,
    decoys: Sequence[Any],
    alpha: float,
    tol: float = 1e-2,
    n_max: int = 1000,
    floor_tol: float = 1e-6,
) -> UniquenessVerdict:
    """
    The true limit must be reached while every decoy y keeps λ_n(y) above a positive floor.

    Two floors are reported: the smallest λ_n(y) seen on the second half of the horizon,
    and the strict level infimum of (limit − y) the trace tends to. The latter is checked
    against q_strict(1−α)·ρ(limit − y).
    """
    if not sp.tnorm.lower_semicontinuous:
        raise PreconditionError(f"t-norm '{sp.tnorm.name}' is not lower semicontinuous")
    mode = ConvergenceMode.alpha_fuzzy(alpha)
    true = seq_convergence(sp, seq, mode, n_max, tol)
    limit = np.asarray(seq.limit)
    rows: list[dict[str, Any]] = []
    passed = true.converges
    for y in decoys:
        y = np.asarray(y, dtype=float)
        if np.allclose(y, limit, rtol=0.0, atol=1e-12):
            rows.append({"decoy": y.tolist(), "status": "rejected", "note": "decoy equals the limit"})
            continue
        trace: SequenceVerdict = seq_convergence(sp, seq.with_limit(y), mode, n_max, tol)
        tail = trace.values[trace.indices >= n_max // 2]
        observed = float(tail.min())
        limit_floor = level_infimum(sp, limit - y, 1.0 - alpha, strict=True).value
        predicted = float(sp.closed_form_level(limit - y, 1.0 - alpha, strict=True))
        ok = (
            not trace.converges
            and observed > 0
            and abs(limit_floor - predicted) <= floor_tol
            and observed >= predicted - tol
        )
        passed = passed and ok
        rows.append(
            {
                "decoy": y.tolist(),
                "status": "pass" if ok else "fail",
                "verdict": trace.verdict,
                "observed_floor": observed,
                "limit_floor": limit_floor,
                "predicted_floor": predicted,
            }
        )
    return UniquenessVerdict(bool(passed), true.verdict, rows)
