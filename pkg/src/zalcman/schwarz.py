"""
Schwarz functions omega_1(z) = z * psi(z) parameterized by Schur parameters.

psi is generated by the Schur recursion

    psi_d = 0,    psi_k(z) = (gamma_k + z psi_{k+1}(z)) / (1 + conj(gamma_k) z psi_{k+1}(z)),

so |gamma_k| < 1 makes psi a rational self-map of the closed disk and
omega_1 a Schwarz function. The same recursion is run pointwise (with a
forward-mode derivative), in truncated-series arithmetic (coefficients
c_k of omega_1), and on polynomials (exact numerator/denominator of psi).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as npoly
from pydantic import BaseModel

from .errors import InputError, NumericDegeneracyError, SeriesOrderError
from .series import DEFAULT_ORDER, TruncatedSeries

# Schur parameters must stay this far inside the unit disk.
GAMMA_MARGIN = 1e-9

# Recursion denominators below this magnitude are degenerate.
DEGENERACY_TOLERANCE = 1e-14

DEFAULT_GRID_SIZE = 8192
MIN_GRID_SIZE = 64

# Coarse grid used to reject clearly infeasible parameters cheaply.
PRESCREEN_GRID_SIZE = 512

ArrayOrScalar = Union[complex, np.ndarray]


@dataclass(frozen=True)
class SchurParams:
    """
    Schur parameters gamma_0..gamma_{d-1} of psi.

    ``extremal`` admits the single unimodular parameter of the Koebe limit
    (psi constant of modulus one); every other parameter set must satisfy
    |gamma_k| <= 1 - 1e-9.
    """

    gamma: Tuple[complex, ...] = ()
    extremal: bool = False

    def __post_init__(self) -> None:
        gamma = tuple(complex(g) for g in self.gamma)
        object.__setattr__(self, 'gamma', gamma)
        if self.extremal:
            if len(gamma) != 1 or abs(abs(gamma[0]) - 1.0) > 1e-12:
                raise InputError(
                    f"Extremal Schur parameters must be one unimodular value, got {gamma}"
                )
            return
        for k, g in enumerate(gamma):
            if not np.isfinite(g) or abs(g) > 1.0 - GAMMA_MARGIN:
                raise InputError(
                    f"Schur parameter gamma_{k} = {g} outside |gamma| <= 1 - {GAMMA_MARGIN}"
                )

    @classmethod
    def koebe(cls, theta: float = 0.0) -> SchurParams:
        """Parameters of omega_1(z) = -e^{2i theta} z, the rotated Koebe case."""
        return cls((-np.exp(2j * theta),), extremal=True)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[float]]) -> SchurParams:
        """Build from [re, im] pairs (the persisted form)."""
        return cls(tuple(complex(re, im) for re, im in pairs))

    @property
    def degree(self) -> int:
        return len(self.gamma)

    def as_pairs(self) -> list[list[float]]:
        return [[g.real, g.imag] for g in self.gamma]

    def rotated(self, theta: float) -> SchurParams:
        """
        Parameters of omega_theta(z) = e^{i theta} omega_1(e^{i theta} z).

        This is the Schwarz function of the rotation e^{-i theta} f(e^{i theta} z);
        gamma_k picks up the phase e^{i (k + 2) theta}.
        """
        gamma = tuple(
            g * np.exp(1j * (k + 2) * theta) for k, g in enumerate(self.gamma)
        )
        return SchurParams(gamma, extremal=self.extremal)


def _run_recursion(
    params: SchurParams,
    z: np.ndarray,
    with_derivative: bool
) -> Tuple[np.ndarray, np.ndarray]:
    psi = np.zeros_like(z)
    dpsi = np.zeros_like(z)
    for g in reversed(params.gamma):
        t = z * psi
        den = 1.0 + np.conj(g) * t
        if np.any(np.abs(den) < DEGENERACY_TOLERANCE):
            raise NumericDegeneracyError(
                f"Schur recursion denominator below {DEGENERACY_TOLERANCE} for gamma={g}"
            )
        if with_derivative:
            dt = psi + z * dpsi
            dpsi = dt * (1.0 - abs(g) ** 2) / den ** 2
        psi = (g + t) / den
    return psi, dpsi


def _as_disk_points(z: ArrayOrScalar) -> np.ndarray:
    points = np.asarray(z, dtype=np.complex128)
    if points.size and np.max(np.abs(points)) > 1.0 + 1e-12:
        raise InputError("Schur functions are evaluated on the closed unit disk only")
    return points


def schur_eval(params: SchurParams, z: ArrayOrScalar) -> ArrayOrScalar:
    """
    Evaluate psi(z) by the backward Schur recursion.

    Args:
        params: Schur parameters
        z: Point(s) with |z| <= 1

    Returns:
        psi(z), same shape as ``z``; |psi(z)| <= 1

    Raises:
        NumericDegeneracyError: If a recursion denominator collapses
    """
    points = _as_disk_points(z)
    psi, _ = _run_recursion(params, points, with_derivative=False)
    return complex(psi) if psi.ndim == 0 else psi


def omega_eval(params: SchurParams, z: ArrayOrScalar) -> ArrayOrScalar:
    """omega_1(z) = z psi(z)."""
    points = _as_disk_points(z)
    psi, _ = _run_recursion(params, points, with_derivative=False)
    value = points * psi
    return complex(value) if value.ndim == 0 else value


def omega_derivative(params: SchurParams, z: ArrayOrScalar) -> ArrayOrScalar:
    """omega_1'(z) = psi(z) + z psi'(z), exact (no truncation)."""
    points = _as_disk_points(z)
    psi, dpsi = _run_recursion(params, points, with_derivative=True)
    value = psi + points * dpsi
    return complex(value) if value.ndim == 0 else value


def omega_series(params: SchurParams, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """
    Taylor series of omega_1 through z^order; coefficient k is c_k.

    The Schur recursion is run in series arithmetic. Every denominator has
    constant term 1, so the reciprocal never fails.
    """
    if order < 1:
        raise SeriesOrderError(f"omega series needs order >= 1, got {order}")
    psi = TruncatedSeries.zeros(order)
    for g in reversed(params.gamma):
        t = psi.shift(1)
        psi = (g + t) * (1.0 + g.conjugate() * t).recip()
    return psi.shift(1)


def schur_rational(params: SchurParams) -> Tuple[np.ndarray, np.ndarray]:
    """
    Exact numerator and denominator polynomials of psi = P / Q.

    Coefficients are in ascending powers (numpy.polynomial convention).
    """
    numerator = np.array([0.0], dtype=np.complex128)
    denominator = np.array([1.0], dtype=np.complex128)
    for g in reversed(params.gamma):
        z_numerator = npoly.polymulx(numerator)
        numerator, denominator = (
            npoly.polyadd(g * denominator, z_numerator),
            npoly.polyadd(denominator, np.conj(g) * z_numerator),
        )
    return numerator, denominator


def boundary_peak(params: SchurParams, grid_size: int) -> Tuple[float, np.ndarray]:
    """Max of |omega_1'| over ``grid_size`` equispaced points of |z| = 1, plus the samples."""
    theta = 2.0 * np.pi * np.arange(grid_size) / grid_size
    values = np.abs(omega_derivative(params, np.exp(1j * theta)))
    return float(np.max(values)) if values.size else 0.0, values


def deriv_boundary_sup(params: SchurParams, grid_size: int = DEFAULT_GRID_SIZE) -> float:
    """
    Estimate sup_{|z|=1} |omega_1'(z)|.

    The grid maximum is inflated by the largest finite-difference slope of
    |omega_1'| in theta times the half grid spacing, scaled by
    (1 + 10 pi / grid_size).

    Raises:
        InputError: If grid_size < 64
    """
    if grid_size < MIN_GRID_SIZE:
        raise InputError(f"Boundary grid needs at least {MIN_GRID_SIZE} points, got {grid_size}")
    if params.degree == 0:
        return 0.0
    if params.extremal:
        # omega_1' is the unimodular constant gamma_0
        return 1.0
    peak, values = boundary_peak(params, grid_size)
    step = 2.0 * np.pi / grid_size
    slope = float(np.max(np.abs(np.diff(np.append(values, values[0]))))) / step
    correction = slope * (step / 2.0) * (1.0 + 10.0 * np.pi / grid_size)
    return peak + correction


class SchwarzFunction:
    """omega_1 with its Taylor series and boundary derivative bound."""

    def __init__(
        self,
        params: SchurParams,
        order: int = DEFAULT_ORDER,
        grid_size: int = DEFAULT_GRID_SIZE
    ):
        """
        Initialize Schwarz function.

        Args:
            params: Schur parameters of psi
            order: Truncation order of the omega_1 series
            grid_size: Boundary grid of the |omega_1'| supremum
        """
        self.params = params
        self.grid_size = grid_size
        self.series = omega_series(params, order)
        self.deriv_sup = deriv_boundary_sup(params, grid_size)

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> SchwarzFunction:
        return cls(SchurParams(()), order)

    @property
    def order(self) -> int:
        return self.series.order

    def coefficient(self, k: int) -> complex:
        """c_k, the z^k coefficient of omega_1."""
        return self.series[k]

    @property
    def c1(self) -> complex:
        return self.series[1]

    @property
    def c2(self) -> complex:
        return self.series[2]

    @property
    def c3(self) -> complex:
        return self.series[3]

    def __call__(self, z: ArrayOrScalar) -> ArrayOrScalar:
        return omega_eval(self.params, z)

    def derivative(self, z: ArrayOrScalar) -> ArrayOrScalar:
        return omega_derivative(self.params, z)

    def with_order(self, order: int) -> SchwarzFunction:
        if order == self.order:
            return self
        return SchwarzFunction(self.params, order, self.grid_size)

    def rotated(self, theta: float) -> SchwarzFunction:
        return SchwarzFunction(self.params.rotated(theta), self.order, self.grid_size)


class Lemma1Report(BaseModel):
    """Slacks of the three coefficient bounds for omega_1."""

    passed: bool
    slacks: Tuple[float, float, float]


def lemma1_check(c1: complex, c2: complex, c3: complex, tol: float = 1e-9) -> Lemma1Report:
    """
    Check |c1| <= 1, |c2| <= (1 - |c1|^2)/2 and
    |c3| <= (1 - |c1|^2 - 4|c2|^2 / (1 + |c1|)) / 3.

    Returns:
        Lemma1Report with the three slacks; passed iff every slack >= -tol
    """
    x, y, w = abs(c1), abs(c2), abs(c3)
    slacks = (
        1.0 - x,
        0.5 * (1.0 - x * x) - y,
        (1.0 - x * x - 4.0 * y * y / (1.0 + x)) / 3.0 - w,
    )
    return Lemma1Report(passed=all(s >= -tol for s in slacks), slacks=slacks)
