"""
Truncated complex power series.

A ``TruncatedSeries`` of order N holds the Taylor coefficients of z^0..z^N.
All coefficient extraction in the toolkit (Schwarz functions, class-U
functions, the class-U defect) runs on this ring.
"""
from __future__ import annotations

from typing import Iterable, Union

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import linalg

from .errors import SeriesOrderError, SingularSeriesError

# Default truncation order of every constructed series.
DEFAULT_ORDER = 64

# |a_0| below this is treated as a vanishing constant term.
SINGULAR_TOLERANCE = 1e-12

Scalar = Union[int, float, complex]


class TruncatedSeries:
    """Immutable complex power series truncated at a fixed order."""

    __slots__ = ("_coeffs",)

    # numpy scalars defer to the reflected operators below
    __array_ufunc__ = None

    def __init__(self, coeffs: Iterable[Scalar]):
        """
        Initialize series from its coefficient sequence.

        Args:
            coeffs: Coefficients of z^0, z^1, ..., z^N (N + 1 entries)
        """
        array = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                         dtype=np.complex128)
        if array.ndim != 1 or array.size == 0:
            raise SeriesOrderError(
                f"Series needs a non-empty 1-D coefficient vector, got shape {array.shape}"
            )
        array.setflags(write=False)
        self._coeffs = array

    @classmethod
    def zeros(cls, order: int = DEFAULT_ORDER) -> TruncatedSeries:
        return cls(np.zeros(order + 1, dtype=np.complex128))

    @classmethod
    def constant(cls, value: Scalar, order: int = DEFAULT_ORDER) -> TruncatedSeries:
        coeffs = np.zeros(order + 1, dtype=np.complex128)
        coeffs[0] = value
        return cls(coeffs)

    @classmethod
    def monomial(cls, power: int, order: int = DEFAULT_ORDER, value: Scalar = 1.0) -> TruncatedSeries:
        """Return value * z^power (zero if power exceeds the order)."""
        coeffs = np.zeros(order + 1, dtype=np.complex128)
        if 0 <= power <= order:
            coeffs[power] = value
        return cls(coeffs)

    @classmethod
    def from_coefficients(cls, values: Iterable[Scalar], order: int = DEFAULT_ORDER) -> TruncatedSeries:
        """Build a series from a leading coefficient list, zero-padded or truncated to ``order``."""
        values = np.asarray(list(values), dtype=np.complex128)
        coeffs = np.zeros(order + 1, dtype=np.complex128)
        count = min(values.size, order + 1)
        coeffs[:count] = values[:count]
        return cls(coeffs)

    @property
    def coeffs(self) -> np.ndarray:
        """Read-only coefficient vector."""
        return self._coeffs

    @property
    def order(self) -> int:
        return self._coeffs.size - 1

    def __getitem__(self, k: int) -> complex:
        return complex(self._coeffs[k])

    def __len__(self) -> int:
        return self._coeffs.size

    def __repr__(self) -> str:
        head = ", ".join(f"{c:.6g}" for c in self._coeffs[:6])
        tail = ", ..." if self.order >= 6 else ""
        return f"TruncatedSeries(order={self.order}, [{head}{tail}])"

    def _check_order(self, other: TruncatedSeries) -> None:
        if other.order != self.order:
            raise SeriesOrderError(
                f"Series order mismatch: {self.order} vs {other.order}"
            )

    def __add__(self, other: Union[TruncatedSeries, Scalar]) -> TruncatedSeries:
        if isinstance(other, TruncatedSeries):
            self._check_order(other)
            return TruncatedSeries(self._coeffs + other._coeffs)
        coeffs = self._coeffs.copy()
        coeffs[0] += other
        return TruncatedSeries(coeffs)

    __radd__ = __add__

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries(-self._coeffs)

    def __sub__(self, other: Union[TruncatedSeries, Scalar]) -> TruncatedSeries:
        return self + (-other)

    def __rsub__(self, other: Scalar) -> TruncatedSeries:
        return (-self) + other

    def __mul__(self, other: Union[TruncatedSeries, Scalar]) -> TruncatedSeries:
        if isinstance(other, TruncatedSeries):
            return mul(self, other)
        return TruncatedSeries(self._coeffs * other)

    __rmul__ = __mul__

    def shift(self, places: int = 1) -> TruncatedSeries:
        """Multiply by z^places, discarding terms beyond the order."""
        coeffs = np.zeros_like(self._coeffs)
        if places <= self.order:
            coeffs[places:] = self._coeffs[: self.order + 1 - places]
        return TruncatedSeries(coeffs)

    def unshift(self, places: int = 1) -> TruncatedSeries:
        """Divide by z^places, dropping the lowest terms and zero-padding the top."""
        coeffs = np.zeros_like(self._coeffs)
        if places <= self.order:
            coeffs[: self.order + 1 - places] = self._coeffs[places:]
        return TruncatedSeries(coeffs)

    def recip(self) -> TruncatedSeries:
        return recip(self)

    def deriv(self) -> TruncatedSeries:
        return deriv(self)

    def evaluate(self, z0: Union[complex, np.ndarray]) -> Union[complex, np.ndarray]:
        return evaluate(self, z0)

    def max_abs_difference(self, other: TruncatedSeries, upto: int | None = None) -> float:
        """Largest coefficientwise |difference| through index ``upto`` (default: order)."""
        self._check_order(other)
        stop = self.order if upto is None else upto
        diff = self._coeffs[: stop + 1] - other._coeffs[: stop + 1]
        return float(np.max(np.abs(diff))) if diff.size else 0.0


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """
    Cauchy product truncated at the common order.

    Raises:
        SeriesOrderError: If the orders differ
    """
    a._check_order(b)
    product = np.convolve(a.coeffs, b.coeffs)[: a.order + 1]
    return TruncatedSeries(product)


def recip(a: TruncatedSeries) -> TruncatedSeries:
    """
    Multiplicative inverse through the series order.

    Forward substitution on the lower-triangular Toeplitz system of the
    product ``a * b = 1``, i.e. b_0 = 1/a_0 and
    b_k = -(1/a_0) * sum_{j=1..k} a_j b_{k-j}.

    Raises:
        SingularSeriesError: If |a_0| < 1e-12
    """
    a0 = a.coeffs[0]
    if abs(a0) < SINGULAR_TOLERANCE:
        raise SingularSeriesError(
            f"Cannot invert series with constant term {a0!r} (|a0| < {SINGULAR_TOLERANCE})"
        )
    first_row = np.zeros_like(a.coeffs)
    first_row[0] = a0
    system = linalg.toeplitz(a.coeffs, first_row)
    rhs = np.zeros_like(a.coeffs)
    rhs[0] = 1.0
    return TruncatedSeries(linalg.solve_triangular(system, rhs, lower=True))


def deriv(a: TruncatedSeries) -> TruncatedSeries:
    """Termwise derivative; same order, top coefficient set to zero."""
    coeffs = np.zeros_like(a.coeffs)
    k = np.arange(1, a.order + 1)
    coeffs[:-1] = k * a.coeffs[1:]
    return TruncatedSeries(coeffs)


def evaluate(a: TruncatedSeries, z0: Union[complex, np.ndarray]) -> Union[complex, np.ndarray]:
    """Horner evaluation of the truncated polynomial at ``z0`` (scalar or array)."""
    value = npoly.polyval(z0, a.coeffs)
    if np.ndim(value) == 0:
        return complex(value)
    return value
