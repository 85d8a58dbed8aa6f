"""
Fuzzy boundedness of linear maps between profile spaces.

The supremum defining M_α runs over x ≠ θ; the boundedness ratio is invariant under
x ↦ cx, so it is sampled on the unit-ρ sphere with scrambled Sobol directions plus
the principal singular direction of the weighted matrix.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
from scipy import optimize, stats
from scipy.stats import qmc

from .exceptions import TheoremContradiction
from .fuzzy_space import (
    DEFAULT_LEVEL_TOL,
    DEFAULT_T_GRID,
    ConvergenceMode,
    FuzzySpace,
    ReciprocalProfile,
    SequenceSpec,
    SequenceVerdict,
    StepProfile,
    level_infima,
    seq_convergence,
)
from .scalar_algebra import diagonal_threshold

logger = logging.getLogger(__name__)

DEFAULT_CEILING = 1e12
DEFAULT_ALPHA_GRID = tuple(round(0.1 * k, 1) for k in range(1, 10))

# stand-in for a non-positive M in the premise N(x, t/M)
_MIN_BOUND = 1e-12


# --- Operators -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LinearOperator:
    matrix: np.ndarray
    domain: FuzzySpace
    codomain: FuzzySpace
    name: str = ""

    def __post_init__(self) -> None:
        a = np.array(self.matrix, dtype=float, ndmin=2)
        if a.shape != (self.codomain.dimension, self.domain.dimension):
            raise ValueError(
                f"matrix shape {a.shape} does not map ℝ^{self.domain.dimension} to ℝ^{self.codomain.dimension}"
            )
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix entries must be finite")
        if self.domain.K != self.codomain.K or self.domain.exponent != self.codomain.exponent:
            raise ValueError("domain and codomain must share K and the φ exponent")
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)

    @classmethod
    def identity(cls, space: FuzzySpace, scale: float = 1.0, codomain: FuzzySpace | None = None, name: str = "") -> LinearOperator:
        target = codomain or space
        return cls(scale * np.eye(target.dimension, space.dimension), space, target, name or f"{scale:g}I")

    @classmethod
    def zero(cls, domain: FuzzySpace, codomain: FuzzySpace | None = None) -> LinearOperator:
        target = codomain or domain
        return cls(np.zeros((target.dimension, domain.dimension)), domain, target, "0")

    @property
    def K(self) -> float:
        return float(self.domain.K)  # type: ignore[arg-type]

    @property
    def is_zero(self) -> bool:
        return not np.any(self.matrix)

    def __call__(self, x: Any) -> np.ndarray:
        return np.asarray(x, dtype=float) @ self.matrix.T

    def combine(self, k1: float, other: LinearOperator, k2: float) -> LinearOperator:
        """k1·self + k2·other."""
        if other.domain != self.domain or other.codomain != self.codomain:
            raise ValueError("operators must act between the same spaces")
        return LinearOperator(
            k1 * self.matrix + k2 * other.matrix,
            self.domain,
            self.codomain,
            f"{k1:g}·{self.name or 'T1'} + {k2:g}·{other.name or 'T2'}",
        )

    def scaled(self, c: float) -> LinearOperator:
        return LinearOperator(c * self.matrix, self.domain, self.codomain, f"{c:g}·{self.name or 'T'}")

    def _weighted(self) -> np.ndarray:
        wy = np.sqrt(self.codomain.rho.weight_vector)
        wx = np.sqrt(self.domain.rho.weight_vector)
        return (wy[:, None] * self.matrix) / wx[None, :]

    def crisp_gain(self) -> float:
        """sup ρ_Y(Tx)/ρ_X(x), exact for weighted-Euclidean carriers."""
        return float(np.linalg.norm(self._weighted(), 2) ** self.domain.exponent)

    def principal_direction(self) -> np.ndarray:
        """A unit-ρ domain vector attaining crisp_gain."""
        _, _, vt = np.linalg.svd(self._weighted())
        x = vt[0] / np.sqrt(self.domain.rho.weight_vector)
        return x / self.domain.rho.base_norm(x)

    def describe(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "matrix": self.matrix.tolist(),
            "domain": self.domain.name,
            "codomain": self.codomain.name,
        }


def default_sphere_samples(dimension: int) -> int:
    if dimension == 1:
        return 1
    return 512 if dimension <= 3 else 4096


def sphere_directions(space: FuzzySpace, count: int, seed: int) -> np.ndarray:
    """`count` unit-ρ directions from a scrambled Sobol sequence mapped through the normal quantile."""
    if count < 1:
        raise ValueError("count must be at least 1")
    sampler = qmc.Sobol(d=space.dimension, scramble=True, seed=seed)
    u = sampler.random_base2(m=max(0, math.ceil(math.log2(count))))[:count]
    z = stats.norm.ppf(np.clip(u, 1e-12, 1.0 - 1e-12))
    lengths = space.rho.base_norm(z)
    z = np.where(lengths[:, None] > 0, z, 1.0)
    return z / space.rho.base_norm(z)[:, None]


def probe_directions(T: LinearOperator, count: int, seed: int) -> np.ndarray:
    """The principal direction followed by `count` sphere directions."""
    return np.vstack([T.principal_direction()[None, :], sphere_directions(T.domain, count, seed)])


# --- Boundedness ratio and certificate -----------------------------------------


def boundedness_ratios(T: LinearOperator, xs: Any, alpha: float, tol: float = DEFAULT_LEVEL_TOL) -> np.ndarray:
    """Vectorized B(x,α) = (d^Y_α(Tx)/K) / d^X_{1−α}(x) with 0/0 → 0 and positive/0 → ∞."""
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    num = level_infima(T.codomain, T(xs), alpha, tol=tol) / T.K
    den = level_infima(T.domain, xs, 1.0 - alpha, tol=tol)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(den > 0, num / np.where(den > 0, den, 1.0), np.where(num > 0, np.inf, 0.0))


def boundedness_ratio(T: LinearOperator, x: Any, alpha: float, tol: float = DEFAULT_LEVEL_TOL) -> float:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or not np.any(x):
        raise ValueError("boundedness_ratio needs a single nonzero vector")
    return float(boundedness_ratios(T, x, alpha, tol)[0])


@dataclass(frozen=True)
class CertificateEntry:
    alpha: float
    M: float
    unbounded: bool
    witness: tuple[float, ...] | None = None

    def as_dict(self) -> dict[str, Any]:
        return {
            "alpha": self.alpha,
            "M": "UNBOUNDED" if self.unbounded else self.M,
            "witness": list(self.witness) if self.witness is not None else None,
        }


@dataclass
class BoundednessCertificate:
    operator: str
    entries: list[CertificateEntry]
    sphere_samples: int
    seed: int

    @property
    def alphas(self) -> tuple[float, ...]:
        return tuple(e.alpha for e in self.entries)

    @property
    def bounded(self) -> bool:
        return not any(e.unbounded for e in self.entries)

    @property
    def unbounded_alphas(self) -> list[float]:
        return [e.alpha for e in self.entries if e.unbounded]

    def entry(self, alpha: float) -> CertificateEntry:
        for e in self.entries:
            if math.isclose(e.alpha, alpha, rel_tol=0.0, abs_tol=1e-12):
                return e
        raise KeyError(f"α={alpha!r} is not on the certificate grid {self.alphas}")

    def M(self, alpha: float) -> float:
        e = self.entry(alpha)
        return math.inf if e.unbounded else e.M

    def as_dict(self) -> dict[str, Any]:
        return {
            "operator": self.operator,
            "bounded": self.bounded,
            "sphere_samples": self.sphere_samples,
            "seed": self.seed,
            "entries": [e.as_dict() for e in self.entries],
        }


def bounded_certificate(
    T: LinearOperator,
    alpha_grid: Sequence[float] = DEFAULT_ALPHA_GRID,
    sphere_samples: int | None = None,
    seed: int = 0,
    ceiling: float = DEFAULT_CEILING,
    tol: float = DEFAULT_LEVEL_TOL,
) -> BoundednessCertificate:
    """
    Sampled M_α on the grid.

    An α is UNBOUNDED when some direction has a zero denominator with positive numerator,
    or when the sampled sup exceeds `ceiling` and still does at four times the resolution.
    """
    count = sphere_samples or default_sphere_samples(T.domain.dimension)
    dirs = probe_directions(T, count, seed)
    entries: list[CertificateEntry] = []
    for alpha in alpha_grid:
        ratios = boundedness_ratios(T, dirs, alpha, tol)
        worst = int(np.argmax(ratios))
        value = float(ratios[worst])
        witness = dirs[worst]
        if math.isfinite(value) and value > ceiling:
            finer = probe_directions(T, 4 * count, seed + 1)
            fine_ratios = boundedness_ratios(T, finer, alpha, 0.1 * tol)
            worst = int(np.argmax(fine_ratios))
            value, witness = float(fine_ratios[worst]), finer[worst]
            logger.debug("α=%g: ratio above ceiling, recheck gives %g", alpha, value)
        unbounded = not math.isfinite(value) or value > ceiling
        entries.append(
            CertificateEntry(
                float(alpha),
                math.inf if unbounded else value,
                unbounded,
                tuple(float(v) for v in witness) if (unbounded or value > 0) else None,
            )
        )
        logger.debug("certificate %s α=%g: %s", T.name, alpha, "UNBOUNDED" if unbounded else f"M={value:.12g}")
    return BoundednessCertificate(T.name, entries, count, seed)


# --- Definition equivalence ----------------------------------------------------


@dataclass
class EquivalenceVerdict:
    """Implication form (premise ⇒ conclusion) and level-infimum form, on one shared sample set."""

    passed: bool
    consistent: bool
    per_alpha: list[dict[str, Any]] = field(default_factory=list)

    def as_dict(self) -> dict[str, Any]:
        return {"passed": self.passed, "consistent": self.consistent, "per_alpha": self.per_alpha}


def defn_equivalence_check(
    T: LinearOperator,
    certificate: BoundednessCertificate,
    sample_count: int,
    seed: int,
    tol: float = 1e-9,
    bounds: dict[float, float] | None = None,
) -> EquivalenceVerdict:
    """
    Sample (x, t, s > t) and test both formulations of boundedness with the certified M_α.

    `bounds` replaces certificate values (used to test a deliberately wrong M).
    Unbounded grid points are skipped.
    """
    rng = np.random.default_rng(seed)
    n = T.domain.dimension
    X, Y, K = T.domain, T.codomain, T.K
    per_alpha: list[dict[str, Any]] = []
    for entry in certificate.entries:
        alpha = entry.alpha
        M = (bounds or {}).get(alpha, entry.M)
        if not math.isfinite(M):
            continue
        m_eff = M if M > 0 else _MIN_BOUND
        x = rng.standard_normal((sample_count, n)) * np.exp(rng.uniform(-2.0, 2.0, (sample_count, 1)))
        rx = X.rho(x)
        t = m_eff * rx * np.exp(rng.uniform(-3.0, 3.0, sample_count))
        s = t * (1.0 + np.exp(rng.uniform(math.log(1e-6), math.log(2.0), sample_count)))
        tx = T(x)

        premise = X.norm(x, t / m_eff) >= 1.0 - alpha
        conclusion = Y.norm(tx, K * s)
        fwd = np.where(premise, np.maximum(0.0, alpha - conclusion), 0.0)

        lhs = level_infima(Y, tx, alpha) / K
        rhs = M * level_infima(X, x, 1.0 - alpha)
        rev = np.maximum(0.0, lhs - rhs) / np.maximum(1.0, rhs)

        fi, ri = int(np.argmax(fwd)), int(np.argmax(rev))
        fwd_ok, rev_ok = bool(fwd[fi] <= tol), bool(rev[ri] <= tol)
        per_alpha.append(
            {
                "alpha": alpha,
                "M": M,
                "premise_hits": int(premise.sum()),
                "forward_violation": float(fwd[fi]),
                "reverse_violation": float(rev[ri]),
                "forward_passed": fwd_ok,
                "reverse_passed": rev_ok,
                "forward_witness": None if fwd_ok else [*x[fi].tolist(), float(t[fi]), float(s[fi])],
                "reverse_witness": None if rev_ok else [*x[ri].tolist(), float(lhs[ri]), float(rhs[ri])],
            }
        )
    passed = all(p["forward_passed"] and p["reverse_passed"] for p in per_alpha)
    consistent = all(p["forward_passed"] == p["reverse_passed"] for p in per_alpha)
    return EquivalenceVerdict(passed, consistent, per_alpha)


# --- Continuity ------------------------------------------------------------------


@dataclass
class ContinuityVerdict:
    verdict: str
    consistent_across_points: bool
    probes: list[dict[str, Any]] = field(default_factory=list)
    witness: tuple[float, ...] | None = None

    @property
    def continuous(self) -> bool:
        return self.verdict == "continuous"

    def as_dict(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict,
            "consistent_across_points": self.consistent_across_points,
            "probes": self.probes,
            "witness": list(self.witness) if self.witness is not None else None,
        }


def continuity_probe(
    T: LinearOperator,
    base_points: Sequence[Any],
    directions: Sequence[Any],
    rate: float = 1.0,
    n_max: int = 10_000,
    tol: float = 1e-2,
    t_grid: Sequence[float] = DEFAULT_T_GRID,
) -> ContinuityVerdict:
    """
    Push x_k = x + k^{−rate}·v through T and compare classical convergence in X and Y.

    A probe is uninformative when x_k itself is not seen to converge.
    """
    mode = ConvergenceMode.classical(t_grid)
    probes: list[dict[str, Any]] = []
    point_verdicts: dict[int, set[str]] = {}
    witness = None
    for i, x in enumerate(base_points):
        for v in directions:
            seq = SequenceSpec("power", base=tuple(np.asarray(x, float)), direction=tuple(np.asarray(v, float)), rate=rate)
            dom: SequenceVerdict = seq_convergence(T.domain, seq, mode, n_max, tol)
            img: SequenceVerdict = seq_convergence(T.codomain, seq.image(T.matrix), mode, n_max, tol)
            if not dom.converges:
                outcome = "uninformative"
            elif img.converges:
                outcome = "continuous"
            else:
                outcome = "discontinuous"
                witness = witness or (*seq.base, *seq.direction)  # type: ignore[misc]
            point_verdicts.setdefault(i, set()).add(outcome)
            probes.append(
                {
                    "base": list(seq.base),
                    "direction": list(seq.direction),  # type: ignore[arg-type]
                    "domain": dom.verdict,
                    "image": img.verdict,
                    "image_last": img.last,
                    "outcome": outcome,
                }
            )
    outcomes = {p["outcome"] for p in probes}
    if "discontinuous" in outcomes:
        verdict = "discontinuous"
    elif "continuous" in outcomes:
        verdict = "continuous"
    else:
        verdict = "inconclusive"
    informative = [frozenset(v - {"uninformative"}) for v in point_verdicts.values() if v - {"uninformative"}]
    consistent = len(set(informative)) <= 1
    logger.debug("continuity probe %s: %s over %d probes", T.name, verdict, len(probes))
    return ContinuityVerdict(verdict, consistent, probes, witness)


# --- Counterexample ---------------------------------------------------------------

COUNTEREXAMPLE_VARIANTS = ("step-domain", "reciprocal-domain", "zero-operator")


@dataclass
class CounterexampleResult:
    variant: str
    continuous: bool
    bounded: bool
    unbounded_alphas: list[float]
    certificate: BoundednessCertificate
    continuity: ContinuityVerdict
    expected_M: dict[float, float]
    max_M_error: float

    def as_dict(self) -> dict[str, Any]:
        return {
            "variant": self.variant,
            "continuous": self.continuous,
            "bounded": self.bounded,
            "unbounded_alphas": self.unbounded_alphas,
            "expected_M": {f"{a:g}": m for a, m in self.expected_M.items()},
            "max_M_error": self.max_M_error,
        }


def counterexample_suite(
    variant: str = "step-domain",
    dimension: int = 2,
    alpha_grid: Sequence[float] = DEFAULT_ALPHA_GRID,
    sphere_samples: int | None = None,
    seed: int = 0,
    n_max: int = 10_000,
    tol: float = 1e-2,
    M_tol: float = 1e-6,
) -> CounterexampleResult:
    """
    T = 2I from a step(1/2) space into a reciprocal space, both over (ℝⁿ, ‖·‖, K = 1, min).

    The map is continuous but unbounded exactly where 1−α ≤ 1/2. Raises
    TheoremContradiction if either leg disagrees with the closed forms.
    """
    if variant not in COUNTEREXAMPLE_VARIANTS:
        raise ValueError(f"Unknown counterexample variant '{variant}'. Available: {list(COUNTEREXAMPLE_VARIANTS)}")
    domain_profile = ReciprocalProfile() if variant == "reciprocal-domain" else StepProfile(0.5)
    X = FuzzySpace.build(dimension, domain_profile, name=f"X[{domain_profile.kind}]")
    Y = FuzzySpace.build(dimension, ReciprocalProfile(), name="Y[reciprocal]")
    T = LinearOperator.zero(X, Y) if variant == "zero-operator" else LinearOperator.identity(X, 2.0, Y, "2I")

    eye = np.eye(dimension)
    bases = [np.zeros(dimension), eye[0], -2.0 * eye[-1]]
    diagonal = np.ones(dimension) / math.sqrt(dimension)
    continuity = continuity_probe(T, bases, [eye[0], diagonal], 1.0, n_max, tol)
    cert = bounded_certificate(T, alpha_grid, sphere_samples, seed)

    expected: dict[float, float] = {}
    for a in alpha_grid:
        if variant == "zero-operator":
            expected[a] = 0.0
        elif variant == "reciprocal-domain":
            expected[a] = 2.0 * a / (1.0 - a)
        else:
            expected[a] = 2.0 / (1.0 - a) if a < 0.5 else math.inf

    finite = [a for a in alpha_grid if math.isfinite(expected[a])]
    max_err = max((abs(cert.M(a) - expected[a]) for a in finite), default=0.0)
    expected_unbounded = [a for a in alpha_grid if not math.isfinite(expected[a])]

    if not continuity.continuous:
        raise TheoremContradiction(f"counterexample ({variant}): continuity leg returned {continuity.verdict}")
    if cert.unbounded_alphas != expected_unbounded:
        raise TheoremContradiction(
            f"counterexample ({variant}): unbounded at {cert.unbounded_alphas}, expected {expected_unbounded}"
        )
    if not max_err <= M_tol:
        raise TheoremContradiction(f"counterexample ({variant}): M_α off the closed form by {max_err:g}")

    return CounterexampleResult(
        variant, continuity.continuous, cert.bounded, cert.unbounded_alphas, cert, continuity, expected, max_err
    )


# --- Independence constant --------------------------------------------------------


@dataclass(frozen=True)
class IndependenceConstant:
    space: FuzzySpace
    basis: tuple[tuple[float, ...], ...]
    alpha: float
    value: float
    minimizer: tuple[float, ...]
    grid_resolution: int
    grid_points: int

    def as_dict(self) -> dict[str, Any]:
        return {
            "basis": [list(b) for b in self.basis],
            "alpha": self.alpha,
            "value": self.value,
            "minimizer": list(self.minimizer),
            "grid_resolution": self.grid_resolution,
            "grid_points": self.grid_points,
        }


def unit_l1_grid(k: int, resolution: int) -> np.ndarray:
    """All β with Σ|βᵢ| = 1 and |βᵢ| on the lattice 1/resolution; ±β counted once."""
    parts = [c for c in itertools.product(range(resolution + 1), repeat=k - 1) if sum(c) <= resolution]
    mags = np.array([[*c, resolution - sum(c)] for c in parts], dtype=float) / resolution
    signs = np.array([(1.0, *s) for s in itertools.product((1.0, -1.0), repeat=k - 1)])
    grid = (mags[None, :, :] * signs[:, None, :]).reshape(-1, k)
    return np.unique(grid, axis=0)


def _polish_face(basis: np.ndarray, sp: FuzzySpace, start: np.ndarray) -> np.ndarray:
    """Minimize ρ(Σβᵢxᵢ) over the ℓ¹-sphere face (orthant) containing `start`."""
    sign = np.where(start >= 0, 1.0, -1.0)
    bounds = [(0.0, None) if s > 0 else (None, 0.0) for s in sign]
    res = optimize.minimize(
        lambda b: float(sp.rho.base_norm(b @ basis)),
        start,
        method="SLSQP",
        bounds=bounds,
        constraints=[{"type": "eq", "fun": lambda b: float(sign @ b) - 1.0}],
        options={"ftol": 1e-14, "maxiter": 200},
    )
    beta = np.where(sign * res.x < 0, 0.0, res.x)
    total = np.abs(beta).sum()
    return beta / total if total > 0 else start


def independence_constant(
    sp: FuzzySpace,
    basis: Sequence[Any],
    alpha: float,
    grid_resolution: int = 64,
    polish: bool = True,
) -> IndependenceConstant:
    """
    c_α = min over unit-ℓ¹ coefficients of ⋀{t : N(Σβᵢxᵢ, Kt) ≥ 1−α}.

    The lattice minimum on each face is refined with SLSQP. Raises TheoremContradiction
    when the space satisfies NVI and the minimum is not positive.
    """
    B = np.atleast_2d(np.asarray(basis, dtype=float))
    if B.shape[1] != sp.dimension:
        raise ValueError(f"basis vectors must have dimension {sp.dimension}")
    if np.linalg.matrix_rank(B) < B.shape[0]:
        raise ValueError("basis vectors are linearly dependent")
    if grid_resolution < 1:
        raise ValueError("grid_resolution must be positive")
    K = float(sp.K)  # type: ignore[arg-type]
    grid = unit_l1_grid(B.shape[0], grid_resolution)
    values = level_infima(sp, grid @ B, 1.0 - alpha) / K
    best = int(np.argmin(values))
    c, beta = float(values[best]), grid[best]

    if polish and B.shape[0] > 1 and c > 0:
        faces = np.where(grid >= 0, 1, -1) @ (2 ** np.arange(B.shape[0]))
        for face in np.unique(faces):
            members = np.nonzero(faces == face)[0]
            start = grid[members[np.argmin(values[members])]]
            refined = _polish_face(B, sp, start)
            v = float(level_infima(sp, refined @ B, 1.0 - alpha)[0]) / K
            if v < c:
                c, beta = v, refined

    if sp.satisfies_nvi and not c > 0:
        raise TheoremContradiction(f"independence constant {c!r} ≤ 0 at α={alpha} on an NVI space")
    logger.debug("c_α at α=%g on %s: %.12g", alpha, sp.name, c)
    return IndependenceConstant(
        sp,
        tuple(tuple(float(v) for v in row) for row in B),
        float(alpha),
        c,
        tuple(float(v) for v in beta),
        grid_resolution,
        int(grid.shape[0]),
    )


@dataclass
class InequalityVerdict:
    passed: bool
    worst_violation: float
    samples: int
    witness: tuple[float, ...] | None = None

    def as_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "worst_violation": self.worst_violation,
            "samples": self.samples,
            "witness": list(self.witness) if self.witness is not None else None,
        }


def independence_inequality_check(
    ic: IndependenceConstant,
    sample_count: int,
    seed: int,
    tol: float = 1e-9,
    constant: float | None = None,
) -> InequalityVerdict:
    """
    ⋀{t : N(Σβᵢxᵢ, Kt) ≥ 1−α} ≥ c_α/φ(1/Σ|βᵢ|) on random β of arbitrary scale.

    The minimizer and a rescaled copy are always among the samples. `constant`
    overrides c_α.
    """
    sp = ic.space
    B = np.asarray(ic.basis)
    rng = np.random.default_rng(seed)
    k = B.shape[0]
    betas = rng.standard_normal((sample_count, k)) * np.exp(rng.uniform(-3.0, 3.0, (sample_count, 1)))
    m = np.asarray(ic.minimizer)
    betas = np.vstack([m, 3.0 * m, betas])
    l1 = np.abs(betas).sum(axis=1)
    keep = l1 > 0
    betas, l1 = betas[keep], l1[keep]

    c = ic.value if constant is None else constant
    lhs = level_infima(sp, betas @ B, 1.0 - ic.alpha) / float(sp.K)  # type: ignore[arg-type]
    rhs = c / sp.phi(1.0 / l1)  # type: ignore[misc]
    violation = np.maximum(0.0, rhs - lhs) / np.maximum(1.0, rhs)
    worst = int(np.argmax(violation))
    passed = bool(violation[worst] <= tol)
    witness = None if passed else (*betas[worst].tolist(), float(lhs[worst]), float(rhs[worst]))
    return InequalityVerdict(passed, float(violation[worst]), int(betas.shape[0]), witness)


# --- Subspace property ------------------------------------------------------------


@dataclass
class SubspaceVerdict:
    passed: bool
    entries: list[dict[str, Any]]
    sum_violation: float
    sum_witness: tuple[float, ...] | None = None

    def as_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "entries": self.entries,
            "sum_violation": self.sum_violation,
            "sum_witness": list(self.sum_witness) if self.sum_witness is not None else None,
        }


def subspace_check(
    T1: LinearOperator,
    T2: LinearOperator,
    k1: float,
    k2: float,
    alpha_grid: Sequence[float] = DEFAULT_ALPHA_GRID,
    sphere_samples: int | None = None,
    seed: int = 0,
    pair_samples: int = 10_000,
    tol: float = 1e-8,
    beta_step: float = 1e-3,
) -> SubspaceVerdict:
    """
    Certify k1·T1 + k2·T2 and compare its M_α with K(φ(k1)M¹_β + φ(k2)M²_β), where β is
    the smallest grid value with β*β ≥ α in the codomain t-norm. Also samples the
    sum inequality d_α(y1+y2)/K ≤ d_β(y1) + d_β(y2) in the codomain.
    """
    if k1 == 0 or k2 == 0:
        raise ValueError("k1 and k2 must be nonzero")
    C = T1.combine(k1, T2, k2)
    Y, K, phi = T1.codomain, T1.K, T1.domain.phi
    cert_c = bounded_certificate(C, alpha_grid, sphere_samples, seed)
    betas = {a: diagonal_threshold(Y.tnorm, a, beta_step) for a in alpha_grid}
    inner = sorted({b for b in betas.values() if b < 1.0})
    cert1 = bounded_certificate(T1, inner, sphere_samples, seed) if inner else None
    cert2 = bounded_certificate(T2, inner, sphere_samples, seed) if inner else None

    entries: list[dict[str, Any]] = []
    for a in alpha_grid:
        b = betas[a]
        row: dict[str, Any] = {"alpha": a, "beta": b, "M": cert_c.M(a)}
        if b >= 1.0 or cert1 is None or cert2 is None or cert1.entry(b).unbounded or cert2.entry(b).unbounded:
            row["status"] = "precondition-unmet"
        else:
            bound = K * (float(phi(k1)) * cert1.M(b) + float(phi(k2)) * cert2.M(b))  # type: ignore[misc]
            row.update(M1=cert1.M(b), M2=cert2.M(b), bound=bound)
            row["status"] = "pass" if cert_c.M(a) <= bound * (1.0 + tol) + tol else "fail"
        entries.append(row)

    rng = np.random.default_rng(seed)
    n = Y.dimension
    y1 = rng.standard_normal((pair_samples, n)) * np.exp(rng.uniform(-2.0, 2.0, (pair_samples, 1)))
    y2 = rng.standard_normal((pair_samples, n)) * np.exp(rng.uniform(-2.0, 2.0, (pair_samples, 1)))
    worst, witness = 0.0, None
    for a in alpha_grid:
        b = betas[a]
        if b >= 1.0:
            continue
        lhs = level_infima(Y, y1 + y2, a) / K
        rhs = level_infima(Y, y1, b) + level_infima(Y, y2, b)
        viol = np.maximum(0.0, lhs - rhs) / np.maximum(1.0, rhs)
        i = int(np.argmax(viol))
        if viol[i] > worst:
            worst = float(viol[i])
            witness = (a, b, *y1[i].tolist(), *y2[i].tolist())

    passed = all(r["status"] != "fail" for r in entries) and worst <= tol
    return SubspaceVerdict(passed, entries, worst, witness if worst > tol else None)


# --- Finite-dimensional sweep -------------------------------------------------------


@dataclass
class SweepReport:
    status: str
    operators: int
    unbounded: list[int] = field(default_factory=list)
    max_M: dict[float, float] = field(default_factory=dict)
    independence: dict[float, float] = field(default_factory=dict)
    note: str = ""

    def as_dict(self) -> dict[str, Any]:
        return {
            "status": self.status,
            "operators": self.operators,
            "unbounded": self.unbounded,
            "max_M": {f"{a:g}": m for a, m in self.max_M.items()},
            "independence": {f"{a:g}": c for a, c in self.independence.items()},
            "note": self.note,
        }


def finite_dim_boundedness_sweep(
    domain: FuzzySpace,
    codomain: FuzzySpace,
    operator_count: int,
    seed: int,
    alpha_grid: Sequence[float] = DEFAULT_ALPHA_GRID,
    sphere_samples: int | None = None,
) -> SweepReport:
    """
    Random matrices (the zero matrix first) certified on every grid α.

    Refuses to assert anything when the domain lacks NVI, since the positive
    independence constant the argument rests on is then unavailable.
    """
    if not domain.satisfies_nvi:
        logger.warning("sweep: domain '%s' does not satisfy NVI; precondition unmet", domain.name)
        return SweepReport("precondition-unmet", 0, note="domain does not satisfy NVI; c_α may be 0")

    rng = np.random.default_rng(seed)
    eye = np.eye(domain.dimension)
    independence = {a: independence_constant(domain, eye, a).value for a in alpha_grid}

    shape = (codomain.dimension, domain.dimension)
    unbounded: list[int] = []
    max_M = {a: 0.0 for a in alpha_grid}
    for i in range(operator_count):
        matrix = np.zeros(shape) if i == 0 else rng.standard_normal(shape)
        cert = bounded_certificate(LinearOperator(matrix, domain, codomain, f"sweep[{i}]"), alpha_grid, sphere_samples, seed + i)
        if not cert.bounded:
            logger.error("sweep operator %d certified UNBOUNDED at %s on a finite-dimensional NVI domain", i, cert.unbounded_alphas)
            unbounded.append(i)
            continue
        for a in alpha_grid:
            max_M[a] = max(max_M[a], cert.M(a))
    return SweepReport("fail" if unbounded else "pass", operator_count, unbounded, max_M, independence)
