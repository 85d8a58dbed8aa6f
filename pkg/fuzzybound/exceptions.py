"""
Exception types shared by the numeric modules, the config loader and the suites.
"""

from __future__ import annotations


class ConfigError(ValueError):
    """Malformed run configuration; carries the offending key path and line."""

    def __init__(self, key: str, problem: str, source: str | None = None, line: int | None = None) -> None:
        self.key = key
        self.problem = problem
        self.source = source
        self.line = line
        super().__init__(self._format())

    def _format(self) -> str:
        where = self.source or "<config>"
        if self.line is not None:
            where = f"{where}:{self.line}"
        return f"{where}: {self.key}: {self.problem}"

    def located(self, source: str, line: int | None) -> ConfigError:
        return ConfigError(self.key, self.problem, source=source, line=line)


class PreconditionError(ValueError):
    """A hypothesis required by the check (NVI positivity, semicontinuity) is not met."""


class LevelBracketError(RuntimeError):
    """Bracket growth for a level infimum never reached the requested level."""


class TheoremContradiction(RuntimeError):
    """A computed value contradicts a statement that is proved to hold."""
