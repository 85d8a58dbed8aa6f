"""
Run configuration schema + loader.

Configs are YAML or JSON, deep-merged over the packaged defaults
(config/defaults.yaml), so a file only needs the keys it changes. Every
validation error names the offending key path and, for YAML, its line.
"""

from __future__ import annotations

import copy
import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Sequence

import numpy as np
import yaml

from .completeness_lab import DECAY_KINDS
from .exceptions import ConfigError
from .fuzzy_space import PROFILE_KINDS, SEQUENCE_FAMILIES, FuzzySpace, SequenceSpec, pick_profile
from .operator_analysis import LinearOperator
from .scalar_algebra import CONTINUITY_CLASSES, TNORM_KINDS, TNorm

logger = logging.getLogger(__name__)

DEFAULTS_PATH = Path(__file__).parent / "config" / "defaults.yaml"

TOP_LEVEL_KEYS = {
    "seed",
    "tolerance",
    "alpha_grid",
    "samples",
    "horizon",
    "spaces",
    "operators",
    "sequences",
    "operator_sequences",
    "suites",
}


# --- small validators ----------------------------------------------------------


def _mapping(raw: Any, key: str) -> dict[str, Any]:
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ConfigError(key, "must be a mapping")
    return raw


def _known(raw: dict[str, Any], key: str, known: set[str]) -> dict[str, Any]:
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"{key}.{unknown[0]}", f"unknown key (known: {sorted(known)})")
    return raw


def _int(raw: Any, key: str, minimum: int | None = None) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise ConfigError(key, f"must be an integer (got {raw!r})")
    if minimum is not None and raw < minimum:
        raise ConfigError(key, f"must be ≥ {minimum} (got {raw})")
    return raw


def _float(raw: Any, key: str, positive: bool = False) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ConfigError(key, f"must be a number (got {raw!r})")
    if positive and not raw > 0:
        raise ConfigError(key, f"must be positive (got {raw})")
    return float(raw)


def _choice(raw: Any, key: str, options: Sequence[str]) -> str:
    if raw not in options:
        raise ConfigError(key, f"must be one of {list(options)} (got {raw!r})")
    return str(raw)


def _vector(raw: Any, key: str, length: int | None = None) -> tuple[float, ...]:
    if not isinstance(raw, (list, tuple)) or not raw:
        raise ConfigError(key, "must be a non-empty list of numbers")
    values = tuple(_float(v, f"{key}.{i}") for i, v in enumerate(raw))
    if length is not None and len(values) != length:
        raise ConfigError(key, f"must have {length} entries (got {len(values)})")
    return values


def _matrix(raw: Any, key: str) -> np.ndarray:
    if not isinstance(raw, list) or not raw:
        raise ConfigError(key, "must be a non-empty list of rows")
    rows = [_vector(r, f"{key}.{i}") for i, r in enumerate(raw)]
    if len({len(r) for r in rows}) != 1:
        raise ConfigError(key, "rows must all have the same length")
    return np.array(rows, dtype=float)


def alpha_grid_from(raw: Any, key: str = "alpha_grid") -> tuple[float, ...]:
    grid = _vector(raw, key)
    for i, a in enumerate(grid):
        if not 0.0 < a < 1.0:
            raise ConfigError(f"{key}.{i}", f"must lie in (0, 1) (got {a})")
    if list(grid) != sorted(set(grid)):
        raise ConfigError(key, "must be strictly increasing")
    return grid


# --- schema -------------------------------------------------------------------

SAMPLE_KEYS = {"sphere", "axioms", "pairs", "lemma", "fleet"}
HORIZON_KEYS = {"n_max", "rate"}
SPACE_KEYS = {"dimension", "profile", "exponent", "weights", "tnorm", "continuity_class", "K", "tolerance"}
PROFILE_KEYS = {"kind", "h", "knots"}
OPERATOR_KEYS = {"domain", "codomain", "matrix", "matrix_file"}
SEQUENCE_KEYS = {"space", "family", "base", "direction", "rate", "ratio", "rows", "limit", "expect"}
OPERATOR_SEQUENCE_KEYS = {"base", "perturbation", "decay", "rate", "ratio", "n_max", "expect_cauchy"}



@dataclass(frozen=True)
class Samples:
    sphere: int | None = None
    axioms: int = 10_000
    pairs: int = 10_000
    lemma: int = 1000
    fleet: int = 50


@dataclass(frozen=True)
class Horizon:
    n_max: int = 1000
    rate: float = 1.0


@dataclass(frozen=True)
class SpaceConfig:
    name: str
    dimension: int
    profile: dict[str, Any]
    exponent: float = 1.0
    weights: tuple[float, ...] | None = None
    tnorm: str = "standard-intersection"
    continuity_class: str | None = None
    K: float | None = None
    tolerance: float | None = None

    def build(self) -> FuzzySpace:
        t = TNorm.standard(self.tnorm)
        if self.continuity_class is not None:
            t = replace(t, continuity_class=self.continuity_class)
        profile = pick_profile(self.profile["kind"], h=self.profile.get("h", 0.5), knots=self.profile.get("knots"))
        sp = FuzzySpace.build(self.dimension, profile, t, self.exponent, self.weights, self.K, self.name)
        return replace(sp, tolerance=self.tolerance) if self.tolerance is not None else sp


@dataclass(frozen=True, eq=False)
class OperatorConfig:
    name: str
    domain: str
    codomain: str
    matrix: np.ndarray


@dataclass(frozen=True)
class SequenceConfig:
    name: str
    space: str
    spec: SequenceSpec
    expect: str = "converges"


@dataclass(frozen=True, eq=False)
class OperatorSequenceConfig:
    name: str
    base: str
    perturbation: np.ndarray
    decay: str = "power"
    rate: float = 1.0
    ratio: float = 0.5
    n_max: int | None = None
    expect_cauchy: bool = True


@dataclass
class RunConfig:
    seed: int = 0
    tolerance: float = 1e-9
    alpha_grid: tuple[float, ...] = tuple(round(0.1 * k, 1) for k in range(1, 10))
    samples: Samples = field(default_factory=Samples)
    horizon: Horizon = field(default_factory=Horizon)
    spaces: dict[str, SpaceConfig] = field(default_factory=dict)
    operators: dict[str, OperatorConfig] = field(default_factory=dict)
    sequences: dict[str, SequenceConfig] = field(default_factory=dict)
    operator_sequences: dict[str, OperatorSequenceConfig] = field(default_factory=dict)
    suites: dict[str, dict[str, Any]] = field(default_factory=dict)
    source: str = "<defaults>"
    _space_cache: dict[str, FuzzySpace] = field(default_factory=dict, repr=False)

    @classmethod
    def from_dict(cls, raw: dict[str, Any], base_dir: Path | None = None) -> RunConfig:
        """Validate a raw (already merged) mapping."""
        if not isinstance(raw, dict):
            raise ConfigError("<root>", "top-level configuration must be a mapping")
        unknown = sorted(set(raw) - TOP_LEVEL_KEYS)
        if unknown:
            raise ConfigError(unknown[0], f"unknown top-level key (known: {sorted(TOP_LEVEL_KEYS)})")
        base_dir = base_dir or Path.cwd()

        samples_raw = _known(_mapping(raw.get("samples"), "samples"), "samples", SAMPLE_KEYS)
        sphere = samples_raw.get("sphere")
        samples = Samples(
            sphere=None if sphere is None else _int(sphere, "samples.sphere", 1),
            axioms=_int(samples_raw.get("axioms", 10_000), "samples.axioms", 4),
            pairs=_int(samples_raw.get("pairs", 10_000), "samples.pairs", 1),
            lemma=_int(samples_raw.get("lemma", 1000), "samples.lemma", 1),
            fleet=_int(samples_raw.get("fleet", 50), "samples.fleet", 1),
        )
        horizon_raw = _known(_mapping(raw.get("horizon"), "horizon"), "horizon", HORIZON_KEYS)
        horizon = Horizon(
            n_max=_int(horizon_raw.get("n_max", 1000), "horizon.n_max", 2),
            rate=_float(horizon_raw.get("rate", 1.0), "horizon.rate", positive=True),
        )

        spaces = {
            name: _space_config(name, spec, f"spaces.{name}")
            for name, spec in _mapping(raw.get("spaces"), "spaces").items()
        }
        operators = {
            name: _operator_config(name, spec, f"operators.{name}", spaces, base_dir)
            for name, spec in _mapping(raw.get("operators"), "operators").items()
        }
        sequences = {
            name: _sequence_config(name, spec, f"sequences.{name}", spaces)
            for name, spec in _mapping(raw.get("sequences"), "sequences").items()
        }
        op_sequences = {
            name: _operator_sequence_config(name, spec, f"operator_sequences.{name}", operators)
            for name, spec in _mapping(raw.get("operator_sequences"), "operator_sequences").items()
        }
        suites = {
            name: _mapping(block, f"suites.{name}") for name, block in _mapping(raw.get("suites"), "suites").items()
        }

        cfg = cls(
            seed=_int(raw.get("seed", 0), "seed", 0),
            tolerance=_float(raw.get("tolerance", 1e-9), "tolerance", positive=True),
            alpha_grid=alpha_grid_from(raw.get("alpha_grid", [0.1 * k for k in range(1, 10)])),
            samples=samples,
            horizon=horizon,
            spaces=spaces,
            operators=operators,
            sequences=sequences,
            operator_sequences=op_sequences,
            suites=suites,
        )
        logger.info(
            "Loaded config: %d spaces, %d operators, %d sequences, %d operator sequences",
            len(spaces),
            len(operators),
            len(sequences),
            len(op_sequences),
        )
        return cfg

    def with_overrides(
        self,
        seed: int | None = None,
        tolerance: float | None = None,
        alpha_grid: Sequence[float] | None = None,
        sphere_samples: int | None = None,
    ) -> RunConfig:
        """Apply command-line overrides."""
        out = replace(self, _space_cache={})
        if seed is not None:
            out.seed = _int(seed, "--seed", 0)
        if tolerance is not None:
            if not tolerance > 0:
                raise ConfigError("--tol", "must be positive")
            out.tolerance = tolerance
        if alpha_grid is not None:
            out.alpha_grid = alpha_grid_from(list(alpha_grid), "--alpha-grid")
        if sphere_samples is not None:
            if sphere_samples < 1:
                raise ConfigError("--samples", "must be at least 1")
            out.samples = replace(out.samples, sphere=sphere_samples)
        return out

    def space(self, name: str) -> FuzzySpace:
        if name not in self.spaces:
            raise ConfigError(f"spaces.{name}", "is not defined", self.source)
        if name not in self._space_cache:
            self._space_cache[name] = self.spaces[name].build()
        return self._space_cache[name]

    def operator(self, name: str) -> LinearOperator:
        if name not in self.operators:
            raise ConfigError(f"operators.{name}", "is not defined", self.source)
        op = self.operators[name]
        return LinearOperator(op.matrix, self.space(op.domain), self.space(op.codomain), name)

    def suite(self, name: str) -> dict[str, Any]:
        return dict(self.suites.get(name, {}))


def _space_config(name: str, raw: Any, key: str) -> SpaceConfig:
    raw = _known(_mapping(raw, key), key, SPACE_KEYS)
    profile = _known(_mapping(raw.get("profile"), f"{key}.profile"), f"{key}.profile", PROFILE_KEYS)
    kind = _choice(profile.get("kind"), f"{key}.profile.kind", PROFILE_KINDS)
    if kind == "step":
        h = _float(profile.get("h", 0.5), f"{key}.profile.h")
        if not 0.0 <= h < 1.0:
            raise ConfigError(f"{key}.profile.h", f"must lie in [0, 1) (got {h})")
    if kind == "piecewise-linear":
        knots = profile.get("knots")
        if not isinstance(knots, list) or len(knots) < 2:
            raise ConfigError(f"{key}.profile.knots", "needs at least two [u, s] pairs")
        for i, k in enumerate(knots):
            _vector(k, f"{key}.profile.knots.{i}", 2)
    dimension = _int(raw.get("dimension"), f"{key}.dimension", 1)
    exponent = _float(raw.get("exponent", 1.0), f"{key}.exponent")
    if exponent < 1.0:
        raise ConfigError(f"{key}.exponent", f"must be ≥ 1 (got {exponent})")
    weights = raw.get("weights")
    tnorm = _choice(raw.get("tnorm", "standard-intersection"), f"{key}.tnorm", TNORM_KINDS)
    continuity = raw.get("continuity_class")
    K = raw.get("K")
    tolerance = raw.get("tolerance")
    cfg = SpaceConfig(
        name=name,
        dimension=dimension,
        profile=dict(profile),
        exponent=exponent,
        weights=None if weights is None else _vector(weights, f"{key}.weights", dimension),
        tnorm=tnorm,
        continuity_class=None if continuity is None else _choice(continuity, f"{key}.continuity_class", CONTINUITY_CLASSES),
        K=None if K is None else _float(K, f"{key}.K"),
        tolerance=None if tolerance is None else _float(tolerance, f"{key}.tolerance", positive=True),
    )
    try:
        cfg.build()
    except ValueError as e:
        raise ConfigError(key, str(e)) from e
    return cfg


def _operator_config(name: str, raw: Any, key: str, spaces: dict[str, SpaceConfig], base_dir: Path) -> OperatorConfig:
    raw = _known(_mapping(raw, key), key, OPERATOR_KEYS)
    domain = raw.get("domain")
    codomain = raw.get("codomain", domain)
    for part, value in (("domain", domain), ("codomain", codomain)):
        if value not in spaces:
            raise ConfigError(f"{key}.{part}", f"unknown space {value!r}")
    if ("matrix" in raw) == ("matrix_file" in raw):
        raise ConfigError(key, "needs exactly one of 'matrix' or 'matrix_file'")
    if "matrix" in raw:
        matrix = _matrix(raw["matrix"], f"{key}.matrix")
    else:
        path = base_dir / str(raw["matrix_file"])
        try:
            matrix = np.loadtxt(path, ndmin=2)
        except (OSError, ValueError) as e:
            raise ConfigError(f"{key}.matrix_file", f"cannot read {path}: {e}") from e
    expected = (spaces[codomain].dimension, spaces[domain].dimension)
    if matrix.shape != expected:
        raise ConfigError(key, f"matrix shape {matrix.shape} does not match {codomain}←{domain} {expected}")
    d, c = spaces[domain], spaces[codomain]
    if d.exponent != c.exponent or (d.K or 2 ** (d.exponent - 1)) != (c.K or 2 ** (c.exponent - 1)):
        raise ConfigError(key, "domain and codomain must share the exponent and K")
    return OperatorConfig(name, domain, codomain, matrix)


def _sequence_config(name: str, raw: Any, key: str, spaces: dict[str, SpaceConfig]) -> SequenceConfig:
    raw = _known(_mapping(raw, key), key, SEQUENCE_KEYS)
    space = raw.get("space")
    if space not in spaces:
        raise ConfigError(f"{key}.space", f"unknown space {space!r}")
    n = spaces[space].dimension
    family = _choice(raw.get("family"), f"{key}.family", SEQUENCE_FAMILIES)
    base = _vector(raw.get("base", [0.0] * n), f"{key}.base", n)
    direction = raw.get("direction")
    rows = raw.get("rows") or []
    limit = raw.get("limit")
    try:
        spec = SequenceSpec(
            family=family,
            base=base,
            direction=None if direction is None else _vector(direction, f"{key}.direction", n),
            rate=_float(raw.get("rate", 1.0), f"{key}.rate"),
            ratio=_float(raw.get("ratio", 0.5), f"{key}.ratio"),
            rows=tuple(_vector(r, f"{key}.rows.{i}", n) for i, r in enumerate(rows)),
            limit=None if limit is None else _vector(limit, f"{key}.limit", n),
            name=name,
        )
    except ValueError as e:
        raise ConfigError(key, str(e)) from e
    expect = _choice(raw.get("expect", "converges"), f"{key}.expect", ("converges", "inconclusive", "diverges-witness"))
    return SequenceConfig(name, space, spec, expect)


def _operator_sequence_config(name: str, raw: Any, key: str, operators: dict[str, OperatorConfig]) -> OperatorSequenceConfig:
    raw = _known(_mapping(raw, key), key, OPERATOR_SEQUENCE_KEYS)
    base = raw.get("base")
    if base not in operators:
        raise ConfigError(f"{key}.base", f"unknown operator {base!r}")
    perturbation = _matrix(raw.get("perturbation"), f"{key}.perturbation")
    if perturbation.shape != operators[base].matrix.shape:
        raise ConfigError(f"{key}.perturbation", f"shape {perturbation.shape} differs from base {operators[base].matrix.shape}")
    n_max = raw.get("n_max")
    return OperatorSequenceConfig(
        name=name,
        base=base,
        perturbation=perturbation,
        decay=_choice(raw.get("decay", "power"), f"{key}.decay", DECAY_KINDS),
        rate=_float(raw.get("rate", 1.0), f"{key}.rate", positive=True),
        ratio=_float(raw.get("ratio", 0.5), f"{key}.ratio"),
        n_max=None if n_max is None else _int(n_max, f"{key}.n_max", 2),
        expect_cauchy=bool(raw.get("expect_cauchy", True)),
    )


# --- loading --------------------------------------------------------------------


def merge_dicts(base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
    """Recursive merge; mappings merge key by key, everything else is replaced."""
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = merge_dicts(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def yaml_line_index(text: str) -> dict[str, int]:
    """Map dotted key paths to 1-based line numbers in a YAML document."""
    lines: dict[str, int] = {}

    def walk(node: yaml.Node, path: str) -> None:
        if isinstance(node, yaml.MappingNode):
            for key_node, value_node in node.value:
                child = f"{path}.{key_node.value}" if path else str(key_node.value)
                lines[child] = key_node.start_mark.line + 1
                walk(value_node, child)
        elif isinstance(node, yaml.SequenceNode):
            for i, item in enumerate(node.value):
                child = f"{path}.{i}"
                lines[child] = item.start_mark.line + 1
                walk(item, child)

    root = yaml.compose(text, Loader=yaml.SafeLoader)
    if root is not None:
        walk(root, "")
    return lines


def _read(path: Path) -> tuple[Any, dict[str, int]]:
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() in {".yml", ".yaml"}:
        return yaml.safe_load(text), yaml_line_index(text)
    if path.suffix.lower() == ".json":
        return json.loads(text), {}
    raise ConfigError("<file>", "config file must be .yaml/.yml or .json", str(path))


def _line_for(key: str, lines: dict[str, int]) -> int | None:
    parts = key.split(".")
    while parts:
        found = lines.get(".".join(parts))
        if found is not None:
            return found
        parts.pop()
    return None


def load_config(path: str | Path | None = None) -> RunConfig:
    """Load the packaged defaults, merge an optional user file over them, and validate."""
    defaults, default_lines = _read(DEFAULTS_PATH)
    raw, lines, source, base_dir = defaults, default_lines, str(DEFAULTS_PATH), DEFAULTS_PATH.parent
    if path is not None:
        p = Path(path)
        if not p.exists():
            raise ConfigError("<file>", "config file not found", str(p))
        try:
            user, lines = _read(p)
        except ConfigError:
            raise
        except (yaml.YAMLError, json.JSONDecodeError, OSError) as e:
            raise ConfigError("<file>", f"failed to parse: {e}", str(p)) from e
        if user is None:
            user = {}
        if not isinstance(user, dict):
            raise ConfigError("<root>", "top-level configuration must be a mapping", str(p))
        raw = merge_dicts(defaults, user)
        source, base_dir = str(p), p.parent
    try:
        cfg = RunConfig.from_dict(raw, base_dir)
    except ConfigError as e:
        in_user = path is not None and _line_for(e.key, lines) is not None
        where, index = (source, lines) if in_user or path is None else (str(DEFAULTS_PATH), default_lines)
        raise e.located(where, _line_for(e.key, index)) from e
    cfg.source = source
    return cfg
