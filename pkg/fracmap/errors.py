from __future__ import annotations

from typing import Iterable, List


class ConfigError(ValueError):
    """Invalid configuration; .errors holds one message per offending field."""

    def __init__(self, errors: Iterable[str]):
        self.errors: List[str] = [str(e) for e in errors]
        super().__init__("; ".join(self.errors) or "invalid configuration")


class AnalysisError(ValueError):
    """Analysis request the data cannot satisfy (window too long, grid mismatch)."""


class NoBifurcationFound(LookupError):
    """No bifurcation point inside the swept grid."""


class DatasetError(OSError):
    """A dataset file that exists but cannot be read back (wrong columns, bad JSON)."""
