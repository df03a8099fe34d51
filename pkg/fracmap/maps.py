"""
maps.py

The 1-D nonlinearities f(x) driven through the fractional iteration.

- logistic: f(x) = p*x*(1-x)
- puu:      f(x) = a*x - (a+1)*x^3
- custom:   any pure real -> real callable

Pure value objects, no state and no I/O.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

MapFn = Callable[[float], float]


class MapFamily(str, Enum):
    LOGISTIC = "logistic"
    PUU = "puu"
    CUSTOM = "custom"


@dataclass(frozen=True)
class MapSpec:
    """
    A map family with its parameter.

    param is p for logistic and a for Puu; custom maps carry their own
    callable in fn and ignore param unless the callable closes over it.
    """

    family: MapFamily
    param: float = 0.0
    fn: Optional[MapFn] = field(default=None, compare=False, repr=False)
    name: str = ""

    @classmethod
    def logistic(cls, p: float) -> "MapSpec":
        return cls(MapFamily.LOGISTIC, float(p))

    @classmethod
    def puu(cls, a: float) -> "MapSpec":
        return cls(MapFamily.PUU, float(a))

    @classmethod
    def custom(cls, fn: MapFn, name: str = "custom", param: float = 0.0) -> "MapSpec":
        if not callable(fn):
            raise TypeError("custom map needs a callable")
        return cls(MapFamily.CUSTOM, float(param), fn=fn, name=name)

    @classmethod
    def from_name(cls, family: str, param: float) -> "MapSpec":
        fam = MapFamily(str(family).strip().lower())
        if fam is MapFamily.CUSTOM:
            raise ValueError("custom maps cannot be built from a name")
        return cls(fam, float(param))

    def with_param(self, param: float) -> "MapSpec":
        return MapSpec(self.family, float(param), fn=self.fn, name=self.name)

    @property
    def label(self) -> str:
        return self.name or self.family.value

    def as_callable(self) -> MapFn:
        """Plain float -> float closure for the solver's inner loop."""
        if self.family is MapFamily.LOGISTIC:
            p = self.param

            def logistic(x: float) -> float:
                return p * x * (1.0 - x)

            return logistic

        if self.family is MapFamily.PUU:
            a = self.param
            b = a + 1.0

            def puu(x: float) -> float:
                # x*x*x keeps f(-x) == -f(x) bit for bit
                return a * x - b * (x * x * x)

            return puu

        if self.fn is None:
            raise ValueError("custom map has no callable")
        return self.fn


def eval_map(spec: MapSpec, x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"map argument must be finite, got {x!r}")
    return float(spec.as_callable()(x))
