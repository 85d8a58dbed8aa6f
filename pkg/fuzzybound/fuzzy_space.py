"""
Profile-based fuzzy strong φ-b-norms on ℝⁿ.

A space is N(x,t) = s(t/ρ(x)) for a non-decreasing profile s and a crisp
b-functional ρ. Level infima d_α(x) = ⋀{t > 0 : N(x,t) ≥ α} are found by
monotone bisection and cross-checked against the closed form ρ(x)·q(α).
"""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace
from typing import Any, Sequence

import numpy as np

from .axioms import AxiomReport
from .exceptions import LevelBracketError
from .scalar_algebra import PhiFunction, TNorm

logger = logging.getLogger(__name__)

PROFILE_KINDS = ("step", "reciprocal", "piecewise-linear")
SEQUENCE_FAMILIES = ("power", "geometric", "alternating", "constant", "table")

CONVERGES = "converges"
INCONCLUSIVE = "inconclusive"
DIVERGES = "diverges-witness"

DEFAULT_LEVEL_TOL = 1e-10
DEFAULT_T_GRID = (0.1, 1.0, 10.0)

# Below ρ·2^-60 a profile is treated as already at its value near 0.
_TINY = 2.0**-60
_MAX_BRACKET = 2.0**60
_MAX_BISECTIONS = 400

# A tail whose minimum keeps this share of its starting value shows no decay.
_STALL_SHARE = 0.99


# --- Profiles -----------------------------------------------------------------


class Profile(ABC):
    """Non-decreasing s: (0,∞) → [0,1] with s(u) → 1 as u → ∞."""

    kind: str = ""

    @abstractmethod
    def __call__(self, u: Any) -> np.ndarray:
        """Evaluate s(u) elementwise for u > 0."""

    @abstractmethod
    def quantile(self, alpha: Any, strict: bool = False) -> np.ndarray:
        """q(α) = inf{u > 0 : s(u) ≥ α}, or > α when strict."""

    @property
    @abstractmethod
    def satisfies_nvi(self) -> bool:
        """True iff s vanishes somewhere on (0,∞), i.e. q(α) > 0 for every α ∈ (0,1)."""

    @property
    def cutoff(self) -> float:
        """A u beyond which s is 1 up to fp; used for the limit check."""
        return 1e12

    def describe(self) -> dict[str, Any]:
        return {"kind": self.kind}


@dataclass(frozen=True)
class StepProfile(Profile):
    """s(u) = h on (0,1], 1 beyond. The value at u = 1 is the left value h."""

    h: float = 0.5
    kind: str = field(default="step", init=False)

    def __post_init__(self) -> None:
        if not (0.0 <= self.h < 1.0):
            raise ValueError(f"step profile requires h in [0, 1) (got {self.h!r})")

    def __call__(self, u: Any) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        return np.where(u > 1.0, 1.0, self.h)

    def quantile(self, alpha: Any, strict: bool = False) -> np.ndarray:
        alpha = np.asarray(alpha, dtype=float)
        below = alpha < self.h if strict else alpha <= self.h
        return np.where(below, 0.0, 1.0)

    @property
    def satisfies_nvi(self) -> bool:
        return self.h == 0.0

    @property
    def cutoff(self) -> float:
        return 2.0

    def describe(self) -> dict[str, Any]:
        return {"kind": self.kind, "h": self.h}


@dataclass(frozen=True)
class ReciprocalProfile(Profile):
    """s(u) = max(0, 1 − 1/u)."""

    kind: str = field(default="reciprocal", init=False)

    def __call__(self, u: Any) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        with np.errstate(divide="ignore"):
            return np.maximum(0.0, 1.0 - 1.0 / u)

    def quantile(self, alpha: Any, strict: bool = False) -> np.ndarray:
        alpha = np.asarray(alpha, dtype=float)
        return np.where(alpha <= 0.0, 0.0, 1.0 / (1.0 - alpha))

    @property
    def satisfies_nvi(self) -> bool:
        return True


@dataclass(frozen=True)
class PiecewiseLinearProfile(Profile):
    """
    Linear interpolation through knots (u_i, s_i). Left of the first knot s equals s_0,
    right of the last it equals 1, which must also be the last knot value.
    """

    knots: tuple[tuple[float, float], ...] = ((0.0, 0.0), (1.0, 1.0))
    kind: str = field(default="piecewise-linear", init=False)

    def __post_init__(self) -> None:
        pts = np.asarray(self.knots, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
            raise ValueError("piecewise-linear profile needs at least two (u, s) knots")
        u, s = pts[:, 0], pts[:, 1]
        if u[0] < 0 or np.any(np.diff(u) <= 0):
            raise ValueError("knot abscissae must be non-negative and strictly increasing")
        if np.any(np.diff(s) < 0) or s[0] < 0 or s[-1] != 1.0:
            raise ValueError("knot values must be non-decreasing in [0, 1] and end at 1")
        if s[0] >= 1.0:
            raise ValueError("knot values must start below 1")
        object.__setattr__(self, "knots", tuple((float(a), float(b)) for a, b in pts))

    @property
    def _arrays(self) -> tuple[np.ndarray, np.ndarray]:
        pts = np.asarray(self.knots, dtype=float)
        return pts[:, 0], pts[:, 1]

    def __call__(self, u: Any) -> np.ndarray:
        ku, ks = self._arrays
        return np.interp(np.asarray(u, dtype=float), ku, ks, left=ks[0], right=1.0)

    def quantile(self, alpha: Any, strict: bool = False) -> np.ndarray:
        ku, ks = self._arrays
        alpha = np.asarray(alpha, dtype=float)
        idx = np.searchsorted(ks, alpha, side="right" if strict else "left")
        seg = np.clip(idx, 1, len(ks) - 1)
        u0, u1 = ku[seg - 1], ku[seg]
        s0, s1 = ks[seg - 1], ks[seg]
        with np.errstate(divide="ignore", invalid="ignore"):
            inner = u0 + (alpha - s0) / (s1 - s0) * (u1 - u0)
        return np.where(idx == 0, 0.0, np.where(idx >= len(ks), np.inf, inner))

    @property
    def satisfies_nvi(self) -> bool:
        return self.knots[0][1] == 0.0

    @property
    def cutoff(self) -> float:
        return 2.0 * self.knots[-1][0] + 1.0

    def describe(self) -> dict[str, Any]:
        return {"kind": self.kind, "knots": [list(k) for k in self.knots]}


def pick_profile(kind: str, h: float = 0.5, knots: Sequence[Sequence[float]] | None = None) -> Profile:
    """Build a profile from its configuration name."""
    if kind == "step":
        return StepProfile(h=float(h))
    if kind == "reciprocal":
        return ReciprocalProfile()
    if kind == "piecewise-linear":
        if not knots:
            raise ValueError("piecewise-linear profile requires 'knots'")
        return PiecewiseLinearProfile(knots=tuple(tuple(k) for k in knots))  # type: ignore[arg-type]
    raise ValueError(f"Unknown profile kind '{kind}'. Available: {list(PROFILE_KINDS)}")


# --- Crisp functional and space -----------------------------------------------


@dataclass(frozen=True)
class CrispFunctional:
    """ρ(x) = (Σ wᵢxᵢ²)^{p/2}: φ-homogeneous with φ = |·|^p and b-constant 2^{p−1}."""

    dimension: int
    exponent: float = 1.0
    weights: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValueError("dimension must be at least 1")
        if not self.exponent >= 1.0:
            raise ValueError(f"exponent must be ≥ 1 (got {self.exponent!r})")
        if self.weights is not None:
            w = tuple(float(v) for v in self.weights)
            if len(w) != self.dimension or min(w) <= 0:
                raise ValueError("weights must be positive, one per coordinate")
            object.__setattr__(self, "weights", w)

    @property
    def weight_vector(self) -> np.ndarray:
        return np.ones(self.dimension) if self.weights is None else np.asarray(self.weights)

    @property
    def K(self) -> float:
        return 2.0 ** (self.exponent - 1.0)

    @property
    def phi(self) -> PhiFunction:
        return PhiFunction.abs_power(self.exponent)

    def base_norm(self, x: Any) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.sqrt(np.sum(self.weight_vector * x * x, axis=-1))

    def __call__(self, x: Any) -> np.ndarray:
        return self.base_norm(x) ** self.exponent


@dataclass(frozen=True)
class FuzzySpace:
    dimension: int
    rho: CrispFunctional
    profile: Profile
    tnorm: TNorm
    K: float | None = None
    phi: PhiFunction | None = None
    name: str = ""
    tolerance: float | None = None

    def __post_init__(self) -> None:
        if self.rho.dimension != self.dimension:
            raise ValueError(f"crisp functional has dimension {self.rho.dimension}, space has {self.dimension}")
        if self.K is None:
            object.__setattr__(self, "K", self.rho.K)
        if self.phi is None:
            object.__setattr__(self, "phi", self.rho.phi)
        if not self.K >= 1.0:  # type: ignore[operator]
            raise ValueError(f"K must be ≥ 1 (got {self.K!r})")

    @classmethod
    def build(
        cls,
        dimension: int,
        profile: Profile,
        tnorm: TNorm | str = "standard-intersection",
        exponent: float = 1.0,
        weights: Sequence[float] | None = None,
        K: float | None = None,
        name: str = "",
    ) -> FuzzySpace:
        t = TNorm.standard(tnorm) if isinstance(tnorm, str) else tnorm
        rho = CrispFunctional(dimension, float(exponent), tuple(weights) if weights is not None else None)
        return cls(dimension=dimension, rho=rho, profile=profile, tnorm=t, K=K, name=name)

    @property
    def satisfies_nvi(self) -> bool:
        return self.profile.satisfies_nvi

    @property
    def exponent(self) -> float:
        return self.rho.exponent

    def check_vectors(self, x: Any) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1:] != (self.dimension,):
            raise ValueError(f"expected vectors of dimension {self.dimension}, got shape {x.shape}")
        return x

    def norm(self, x: Any, t: Any) -> np.ndarray:
        """Vectorized N(x,t); x has trailing dimension n, t broadcasts against ρ(x)."""
        r = self.rho(self.check_vectors(x))
        t = np.asarray(t, dtype=float)
        r, t = np.broadcast_arrays(r, t)
        with np.errstate(divide="ignore", invalid="ignore"):
            inner = self.profile(t / np.where(r > 0, r, 1.0))
        return np.where(t <= 0, 0.0, np.where(r > 0, inner, 1.0))

    def closed_form_level(self, x: Any, alpha: Any, strict: bool = False) -> np.ndarray:
        """ρ(x)·q(α); zero for θ."""
        r = self.rho(self.check_vectors(x))
        q = self.profile.quantile(alpha, strict)
        return np.where(r > 0, r * q, 0.0)

    def describe(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "dimension": self.dimension,
            "profile": self.profile.describe(),
            "exponent": self.exponent,
            "K": self.K,
            "phi": self.phi.name,  # type: ignore[union-attr]
            "tnorm": self.tnorm.name,
            "satisfies_NVI": self.satisfies_nvi,
        }


def norm_eval(sp: FuzzySpace, x: Any, t: float) -> float:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("norm_eval takes a single vector")
    return float(sp.norm(x, t))


# --- Level infima ---------------------------------------------------------------


@dataclass(frozen=True)
class LevelValue:
    x: tuple[float, ...]
    alpha: float
    strict: bool
    value: float

    def as_dict(self) -> dict[str, Any]:
        return {"x": list(self.x), "alpha": self.alpha, "strict": self.strict, "value": self.value}


def _check_level(alpha: Any) -> None:
    a = np.asarray(alpha, dtype=float)
    if not np.all((a > 0.0) & (a < 1.0)):
        raise ValueError(f"alpha must lie in (0, 1) (got {alpha!r})")


def level_infima(
    sp: FuzzySpace,
    xs: Any,
    alpha: Any,
    strict: bool = False,
    tol: float = DEFAULT_LEVEL_TOL,
) -> np.ndarray:
    """
    Batch d_α over the rows of `xs` by bisection on t. `alpha` is a scalar or one level per row.

    The bracket [0, ρ·U] grows by doubling U until the level is reached; past
    U = 2^60 the profile cannot be reaching 1 and LevelBracketError is raised.
    """
    _check_level(alpha)
    if not tol > 0:
        raise ValueError("tol must be positive")
    xs = np.atleast_2d(sp.check_vectors(xs))
    r = sp.rho(xs)
    out = np.zeros(r.shape)
    levels = np.broadcast_to(np.asarray(alpha, dtype=float), r.shape)

    def meets(t: np.ndarray, rows: np.ndarray) -> np.ndarray:
        n = sp.norm(xs[rows], t)
        return n > levels[rows] if strict else n >= levels[rows]

    rows = np.nonzero(r > 0)[0]
    if rows.size:
        rows = rows[~meets(r[rows] * _TINY, rows)]
    if rows.size == 0:
        return out

    scale = np.ones(rows.size)
    reached = meets(r[rows] * scale, rows)
    while not reached.all():
        scale = np.where(reached, scale, 2.0 * scale)
        if scale.max() > _MAX_BRACKET:
            bad = rows[int(np.argmax(scale))]
            raise LevelBracketError(
                f"level {levels[bad]:g} not reached below 2^60·ρ(x) for x={xs[bad].tolist()} on space '{sp.name}'"
            )
        reached = meets(r[rows] * scale, rows)

    lo = np.zeros(rows.size)
    hi = r[rows] * scale
    for _ in range(_MAX_BISECTIONS):
        width = hi - lo
        if np.all(width <= np.maximum(tol, 8.0 * np.finfo(float).eps * hi)):
            break
        mid = 0.5 * (lo + hi)
        ok = meets(mid, rows)
        hi = np.where(ok, mid, hi)
        lo = np.where(ok, lo, mid)
    out[rows] = 0.5 * (lo + hi)
    return out


def level_infimum(
    sp: FuzzySpace,
    x: Any,
    alpha: float,
    strict: bool = False,
    tol: float = DEFAULT_LEVEL_TOL,
) -> LevelValue:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("level_infimum takes a single vector; use level_infima for batches")
    value = float(level_infima(sp, x, alpha, strict, tol)[0])
    return LevelValue(tuple(float(v) for v in x), float(alpha), bool(strict), value)


# --- Axiom checker --------------------------------------------------------------


def _sample_vectors(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    raw = rng.standard_normal((count, dim))
    return raw * np.exp(rng.uniform(-2.0, 2.0, (count, 1)))


def axiom_check_bN(sp: FuzzySpace, sample_count: int, seed: int, tol: float = 1e-9) -> AxiomReport:
    """
    Sampled check of bN1–bN5 plus the crisp functional.

    The b-triangle is reported twice: in the asymmetric form N(x+y, s+Kt) and in the
    symmetric form N(x+y, K(s+t)). A quarter of the pairs are collinear (y = εx),
    where the asymmetric form is most fragile.
    """
    if sample_count < 4:
        raise ValueError("sample_count must be at least 4")
    rng = np.random.default_rng(seed)
    n = sp.dimension
    m = sample_count
    x = _sample_vectors(rng, m, n)
    y = _sample_vectors(rng, m, n)
    collinear = m // 4
    eps = np.exp(rng.uniform(math.log(1e-3), math.log(0.5), (collinear, 1)))
    y[:collinear] = eps * x[:collinear]
    c = rng.choice([-1.0, 1.0], m) * np.exp(rng.uniform(-2.0, 2.0, m))
    rx, ry = sp.rho(x), sp.rho(y)
    s = rx * np.exp(rng.uniform(-1.0, 3.0, m))
    t = ry * np.exp(rng.uniform(-1.0, 3.0, m))
    # collinear pairs use a t that keeps N(y,t) just under 1 while Kt stays small against s
    t[:collinear] = s[:collinear] * eps[:, 0] / 2.0
    K = float(sp.K)  # type: ignore[arg-type]

    report = AxiomReport(
        subject=f"space {sp.name or sp.profile.kind}",
        flags={"satisfies_NVI": sp.satisfies_nvi, "K": K, "exponent": sp.exponent},
    )

    t_nonpos = -np.exp(rng.uniform(-3.0, 3.0, m))
    t_nonpos[0] = 0.0
    report.add_sampled("bN1", sp.norm(x, t_nonpos), np.column_stack([t_nonpos, rx]), tol)

    zeros = np.zeros((m, n))
    theta_gap = 1.0 - sp.norm(zeros, s)
    # a nonzero vector must fall below 1 somewhere; probe just above t = 0
    nonzero_top = np.where(sp.norm(x, rx * _TINY**0.5) >= 1.0, 1.0, 0.0)
    report.add_sampled(
        "bN2",
        np.concatenate([theta_gap, nonzero_top]),
        np.concatenate([np.column_stack([np.zeros(m), s]), np.column_stack([rx, rx * _TINY**0.5])]),
        tol,
    )

    phic = sp.phi(c)  # type: ignore[misc]
    lhs = sp.norm(c[:, None] * x, s)
    rhs = sp.norm(x, s / phic)
    report.add_sampled("bN3", np.abs(lhs - rhs), np.column_stack([c, s, lhs, rhs]), tol)

    tn = sp.tnorm(sp.norm(x, s), sp.norm(y, t))
    asym = sp.norm(x + y, s + K * t)
    report.add_sampled(
        "bN4",
        np.maximum(0.0, tn - asym),
        np.column_stack([rx, ry, s, t, asym, tn]),
        tol,
        note="N(x+y, s+Kt) ≥ N(x,s)*N(y,t)",
    )
    sym = sp.norm(x + y, K * (s + t))
    report.add_sampled(
        "bN4-symmetric",
        np.maximum(0.0, tn - sym),
        np.column_stack([rx, ry, s, t, sym, tn]),
        tol,
        note="N(x+y, K(s+t)) ≥ N(x,s)*N(y,t)",
    )

    t1 = np.minimum(s, t)
    t2 = np.maximum(s, t)
    n1, n2 = sp.norm(x, t1), sp.norm(x, t2)
    report.add_sampled("bN5", np.maximum(0.0, n1 - n2), np.column_stack([t1, t2, n1, n2]), tol)
    far = sp.norm(x, rx * sp.profile.cutoff)
    report.add_sampled(
        "bN5-limit",
        1.0 - far,
        np.column_stack([rx, far]),
        tol,
        note=f"N(x, ρ(x)·{sp.profile.cutoff:g}) ≈ 1",
    )

    scaled = sp.rho(c[:, None] * x)
    report.add_sampled(
        "rho-homogeneity",
        np.abs(scaled - phic * rx) / np.maximum(1.0, phic * rx),
        np.column_stack([c, scaled, phic * rx]),
        tol,
    )
    rsum = sp.rho(x + y)
    report.add_sampled(
        "rho-b-triangle",
        np.maximum(0.0, rsum - K * (rx + ry)) / np.maximum(1.0, rsum),
        np.column_stack([rsum, rx, ry]),
        tol,
    )
    logger.debug("axiom check on %s: passed=%s NVI=%s", report.subject, report.passed, sp.satisfies_nvi)
    return report


# --- Sequences --------------------------------------------------------------------


@dataclass(frozen=True)
class SequenceSpec:
    """
    Deterministic x_k, k ≥ 1. Affine families are base + a_k·direction with
    a_k = k^{−rate} (power), ratio^k (geometric) or (−1)^k (alternating).
    """

    family: str
    base: tuple[float, ...]
    direction: tuple[float, ...] | None = None
    rate: float = 1.0
    ratio: float = 0.5
    rows: tuple[tuple[float, ...], ...] = ()
    limit: tuple[float, ...] | None = None
    name: str = ""

    def __post_init__(self) -> None:
        if self.family not in SEQUENCE_FAMILIES:
            raise ValueError(f"Unknown sequence family '{self.family}'. Available: {list(SEQUENCE_FAMILIES)}")
        object.__setattr__(self, "base", tuple(float(v) for v in self.base))
        if self.family in ("power", "geometric", "alternating"):
            if self.direction is None or len(self.direction) != len(self.base):
                raise ValueError(f"{self.family} sequence needs a direction of the base's dimension")
            object.__setattr__(self, "direction", tuple(float(v) for v in self.direction))
        if self.family == "power" and not self.rate > 0:
            raise ValueError("power sequence needs rate > 0")
        if self.family == "table":
            if not self.rows:
                raise ValueError("table sequence needs at least one row")
            object.__setattr__(self, "rows", tuple(tuple(float(v) for v in r) for r in self.rows))
        if self.limit is None:
            object.__setattr__(self, "limit", self.base)
        else:
            object.__setattr__(self, "limit", tuple(float(v) for v in self.limit))

    @property
    def dimension(self) -> int:
        return len(self.base)

    def coefficients(self, ks: Any) -> np.ndarray:
        k = np.asarray(ks, dtype=float)
        if self.family == "power":
            return k ** (-self.rate)
        if self.family == "geometric":
            return self.ratio**k
        if self.family == "alternating":
            return np.where(np.asarray(ks) % 2 == 0, 1.0, -1.0)
        return np.zeros(k.shape)

    def terms(self, ks: Any) -> np.ndarray:
        ks = np.asarray(ks, dtype=int)
        if np.any(ks < 1):
            raise ValueError("sequence indices start at 1")
        if self.family == "table":
            if ks.max(initial=1) > len(self.rows):
                raise ValueError(f"table sequence has {len(self.rows)} rows; index {ks.max()} requested")
            return np.asarray(self.rows, dtype=float)[ks - 1]
        base = np.asarray(self.base)
        if self.family == "constant":
            return np.broadcast_to(base, ks.shape + base.shape).copy()
        return base + self.coefficients(ks)[..., None] * np.asarray(self.direction)

    def term(self, k: int) -> np.ndarray:
        return self.terms(np.array([k]))[0]

    def image(self, matrix: Any) -> SequenceSpec:
        """The sequence (A x_k); affine families stay in their family."""
        a = np.asarray(matrix, dtype=float)

        def push(v: tuple[float, ...] | None) -> tuple[float, ...] | None:
            return None if v is None else tuple(float(u) for u in a @ np.asarray(v))

        return replace(
            self,
            base=push(self.base),  # type: ignore[arg-type]
            direction=push(self.direction),
            rows=tuple(push(r) for r in self.rows),  # type: ignore[misc]
            limit=push(self.limit),
        )

    def with_limit(self, limit: Any) -> SequenceSpec:
        return replace(self, limit=tuple(float(v) for v in np.asarray(limit, dtype=float)))


@dataclass(frozen=True)
class ConvergenceMode:
    """classical: N(x_n − x, t) → 1 on a t-grid; alpha-fuzzy: one α; l-fuzzy: every α of a grid."""

    kind: str = "alpha-fuzzy"
    alphas: tuple[float, ...] = (0.5,)
    t_grid: tuple[float, ...] = DEFAULT_T_GRID

    def __post_init__(self) -> None:
        if self.kind not in ("classical", "alpha-fuzzy", "l-fuzzy"):
            raise ValueError(f"Unknown convergence mode '{self.kind}'")
        if self.kind != "classical":
            if not self.alphas or (self.kind == "alpha-fuzzy" and len(self.alphas) != 1):
                raise ValueError(f"{self.kind} mode needs {'one α' if self.kind == 'alpha-fuzzy' else 'an α-grid'}")
            for a in self.alphas:
                _check_level(a)
        elif not self.t_grid or min(self.t_grid) <= 0:
            raise ValueError("classical mode needs a grid of positive t")

    @classmethod
    def classical(cls, t_grid: Sequence[float] = DEFAULT_T_GRID) -> ConvergenceMode:
        return cls(kind="classical", alphas=(), t_grid=tuple(float(t) for t in t_grid))

    @classmethod
    def alpha_fuzzy(cls, alpha: float) -> ConvergenceMode:
        return cls(kind="alpha-fuzzy", alphas=(float(alpha),))

    @classmethod
    def l_fuzzy(cls, alpha_grid: Sequence[float]) -> ConvergenceMode:
        return cls(kind="l-fuzzy", alphas=tuple(float(a) for a in alpha_grid))

    def label(self) -> str:
        if self.kind == "alpha-fuzzy":
            return f"alpha-fuzzy({self.alphas[0]:g})"
        return self.kind


@dataclass
class SequenceVerdict:
    verdict: str
    mode: str
    indices: np.ndarray
    values: np.ndarray
    witness: tuple[float, ...] | None = None
    per_level: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def converges(self) -> bool:
        return self.verdict == CONVERGES

    @property
    def last(self) -> float:
        return float(self.values[-1])

    def as_dict(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict,
            "mode": self.mode,
            "indices": [int(i) for i in self.indices],
            "values": [float(v) for v in self.values],
            "witness": list(self.witness) if self.witness is not None else None,
        }


def sample_indices(n_max: int) -> np.ndarray:
    """Log-spaced indices up to n_max, dense on the last three quarters, always ending in n_max−1, n_max."""
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    picks = np.concatenate(
        [
            np.geomspace(1, n_max, 48),
            np.linspace(max(1, n_max // 4), n_max, 48),
            [n_max - 1, n_max],
        ]
    )
    return np.unique(np.clip(np.rint(picks).astype(int), 1, n_max))


def _deficiency(sp: FuzzySpace, diffs: np.ndarray, mode: ConvergenceMode, tol: float) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    levels: dict[str, np.ndarray] = {}
    if mode.kind == "classical":
        for t in mode.t_grid:
            levels[f"t={t:g}"] = 1.0 - sp.norm(diffs, t)
    else:
        for a in mode.alphas:
            levels[f"alpha={a:g}"] = level_infima(sp, diffs, 1.0 - a, strict=True, tol=tol)
    return np.max(np.vstack(list(levels.values())), axis=0), levels


def _stalled(tail: np.ndarray, threshold: float) -> bool:
    return bool(tail.size and tail.min() > threshold and tail.min() >= _STALL_SHARE * tail[0])


def seq_convergence(
    sp: FuzzySpace,
    seq: SequenceSpec,
    mode: ConvergenceMode,
    n_max: int,
    tol: float = 1e-2,
    level_tol: float = DEFAULT_LEVEL_TOL,
) -> SequenceVerdict:
    """
    Finite-horizon verdict on x_n → limit.

    Converges when the deficiency at n_max is ≤ tol; diverges when the second half of
    the horizon shows no decay; otherwise inconclusive.
    """
    if seq.dimension != sp.dimension:
        raise ValueError(f"sequence dimension {seq.dimension} does not match space dimension {sp.dimension}")
    idx = sample_indices(n_max)
    diffs = seq.terms(idx) - np.asarray(seq.limit)
    values, levels = _deficiency(sp, diffs, mode, level_tol)

    witness = None
    if values[-1] <= tol:
        verdict = CONVERGES
    elif _stalled(values[idx >= n_max // 2], tol):
        verdict = DIVERGES
        witness = (float(idx[-1]), float(values[-1]))
    else:
        verdict = INCONCLUSIVE
    logger.debug("seq %s (%s): %s at n=%d, last=%g", seq.name or seq.family, mode.label(), verdict, n_max, values[-1])
    return SequenceVerdict(verdict, mode.label(), idx, values, witness, levels)


def seq_cauchy(
    sp: FuzzySpace,
    seq: SequenceSpec,
    mode: ConvergenceMode,
    n_max: int,
    tol: float = 1e-2,
    level_tol: float = DEFAULT_LEVEL_TOL,
) -> SequenceVerdict:
    """
    Finite-horizon Cauchy verdict over sampled index pairs n < m ≤ n_max.

    The trace holds, per window start a, the worst pair value with a ≤ n < m.
    Cauchy when the window from n_max/2 is within tol; not Cauchy when that window
    still holds the worst value of the window from n_max/4.
    """
    if seq.dimension != sp.dimension:
        raise ValueError(f"sequence dimension {seq.dimension} does not match space dimension {sp.dimension}")
    idx = sample_indices(n_max)
    ii, jj = np.triu_indices(idx.size, k=1)
    terms = seq.terms(idx)
    values, levels = _deficiency(sp, terms[ii] - terms[jj], mode, level_tol)

    # worst pair per smaller index, then suffix maximum over window starts
    per_start = np.zeros(idx.size)
    np.maximum.at(per_start, ii, values)
    window = np.maximum.accumulate(per_start[::-1])[::-1]

    def window_at(a: int) -> float:
        return float(window[np.searchsorted(idx, a)])

    late, early = window_at(n_max // 2), window_at(max(1, n_max // 4))
    witness = None
    if late <= tol:
        verdict = CONVERGES
    elif late >= _STALL_SHARE * early:
        verdict = DIVERGES
        in_late = idx[ii] >= n_max // 2
        k = int(np.argmax(np.where(in_late, values, -np.inf)))
        witness = (float(idx[ii[k]]), float(idx[jj[k]]), float(values[k]))
    else:
        verdict = INCONCLUSIVE
    logger.debug("seq %s Cauchy (%s): %s, late window=%g", seq.name or seq.family, mode.label(), verdict, late)
    return SequenceVerdict(verdict, mode.label(), idx, window, witness, levels)
