"""
Outward-rounded interval arithmetic on double-precision endpoints.

Every operation widens its result by four units in the last place instead
of switching the FPU rounding mode.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import InputError

WIDEN_ULPS = 4

Number = Union[int, float]


def _down(value: float) -> float:
    return float(value - WIDEN_ULPS * abs(np.spacing(value)))


def _up(value: float) -> float:
    return float(value + WIDEN_ULPS * abs(np.spacing(value)))


@dataclass(frozen=True, slots=True)
class Interval:
    """Closed interval [lo, hi]."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.lo <= self.hi:
            raise InputError(f"Invalid interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, value: Number) -> Interval:
        return cls(float(value), float(value))

    @classmethod
    def widened(cls, lo: float, hi: float) -> Interval:
        return cls(_down(lo), _up(hi))

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, value: float) -> bool:
        return self.lo <= value <= self.hi

    def encloses(self, other: Interval) -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def hull(self, other: Interval) -> Interval:
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def bisect(self) -> tuple[Interval, Interval]:
        mid = self.midpoint
        return Interval(self.lo, mid), Interval(mid, self.hi)

    def __add__(self, other: Union[Interval, Number]) -> Interval:
        other = _coerce(other)
        return Interval.widened(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self) -> Interval:
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other: Union[Interval, Number]) -> Interval:
        other = _coerce(other)
        return Interval.widened(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other: Number) -> Interval:
        return _coerce(other) - self

    def __mul__(self, other: Union[Interval, Number]) -> Interval:
        other = _coerce(other)
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval.widened(min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other: Union[Interval, Number]) -> Interval:
        other = _coerce(other)
        if other.lo <= 0.0 <= other.hi:
            raise InputError(f"Interval division by {other} containing zero")
        quotients = (
            self.lo / other.lo,
            self.lo / other.hi,
            self.hi / other.lo,
            self.hi / other.hi,
        )
        return Interval.widened(min(quotients), max(quotients))

    def __rtruediv__(self, other: Number) -> Interval:
        return _coerce(other) / self

    def sqr(self) -> Interval:
        """Tight enclosure of {t^2 : t in self}."""
        if self.lo >= 0.0:
            return Interval.widened(self.lo * self.lo, self.hi * self.hi)
        if self.hi <= 0.0:
            return Interval.widened(self.hi * self.hi, self.lo * self.lo)
        return Interval(0.0, _up(max(self.lo * self.lo, self.hi * self.hi)))

    def __repr__(self) -> str:
        return f"[{self.lo!r}, {self.hi!r}]"


def _coerce(value: Union[Interval, Number]) -> Interval:
    if isinstance(value, Interval):
        return value
    return Interval.point(value)
