"""
Class-U functions built from (a_2, omega_1) through

    z / f(z) = 1 - a_2 z - z omega_1(z).

Coefficients come from series arithmetic; pointwise values of f, f' and
the class-U defect (z/f)^2 f' - 1 come from the rational Schur recursion.
"""
from __future__ import annotations

from typing import Optional, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import NotAnalyticError, SeriesOrderError
from .schwarz import (
    DEFAULT_GRID_SIZE,
    PRESCREEN_GRID_SIZE,
    SchurParams,
    SchwarzFunction,
    boundary_peak,
    deriv_boundary_sup,
    omega_derivative,
    omega_eval,
    schur_rational,
)
from .series import DEFAULT_ORDER, TruncatedSeries, mul

WINDING_POINTS = 4096
WINDING_RADIUS = 0.999

ArrayOrScalar = Union[complex, np.ndarray]


class ClassUFunction:
    """f(z) = z + a_2 z^2 + ... with its representing Schwarz function."""

    def __init__(
        self,
        a2: complex,
        omega: SchwarzFunction,
        coeffs: TruncatedSeries,
        denominator: TruncatedSeries,
        membership_margin: float,
        pole_free: bool
    ):
        """
        Initialize class-U function container.

        Args:
            a2: Second coefficient
            omega: Representing Schwarz function
            coeffs: Series of f (index n holds a_n)
            denominator: Series of z/f = 1 - a_2 z - z omega_1(z)
            membership_margin: 1 - sup|omega_1'| on the boundary
            pole_free: Denominator has no zero inside the winding contour
        """
        self.a2 = complex(a2)
        self.omega = omega
        self.coeffs = coeffs
        self.denominator = denominator
        self.membership_margin = float(membership_margin)
        self.pole_free = bool(pole_free)

    @property
    def order(self) -> int:
        return self.coeffs.order

    @property
    def params(self) -> SchurParams:
        return self.omega.params

    @property
    def is_member(self) -> bool:
        return self.membership_margin > 0.0 and self.pole_free

    def coefficient(self, n: int) -> complex:
        """a_n."""
        if n > self.order:
            raise SeriesOrderError(f"a_{n} beyond series order {self.order}")
        return self.coeffs[n]

    def _denominator_values(self, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        omega = omega_eval(self.params, z)
        domega = omega_derivative(self.params, z)
        d = 1.0 - self.a2 * z - z * omega
        dd = -self.a2 - omega - z * domega
        return d, dd

    def evaluate(self, z: ArrayOrScalar) -> ArrayOrScalar:
        """f(z) = z / D(z), exact rational evaluation."""
        points = np.asarray(z, dtype=np.complex128)
        d, _ = self._denominator_values(points)
        value = points / d
        return complex(value) if value.ndim == 0 else value

    def derivative(self, z: ArrayOrScalar) -> ArrayOrScalar:
        """f'(z) = (D - z D') / D^2."""
        points = np.asarray(z, dtype=np.complex128)
        d, dd = self._denominator_values(points)
        value = (d - points * dd) / d ** 2
        return complex(value) if value.ndim == 0 else value

    def defect_at(self, z: ArrayOrScalar) -> ArrayOrScalar:
        """(z/f(z))^2 f'(z) - 1 from pointwise values of f and f'."""
        points = np.asarray(z, dtype=np.complex128)
        d, dd = self._denominator_values(points)
        f = points / d
        fprime = (d - points * dd) / d ** 2
        value = (points / f) ** 2 * fprime - 1.0
        return complex(value) if value.ndim == 0 else value

    def __repr__(self) -> str:
        return (
            f"ClassUFunction(a2={self.a2:.6g}, degree={self.params.degree}, "
            f"margin={self.membership_margin:.3g}, pole_free={self.pole_free})"
        )


def denominator_series(a2: complex, omega: SchwarzFunction) -> TruncatedSeries:
    """Series of 1 - a_2 z - z omega_1(z)."""
    order = omega.order
    return (
        TruncatedSeries.constant(1.0, order)
        - TruncatedSeries.monomial(1, order, a2)
        - omega.series.shift(1)
    )


def winding_number(
    a2: complex,
    params: SchurParams,
    points: int = WINDING_POINTS,
    radius: float = WINDING_RADIUS
) -> int:
    """
    Winding number of D(z) = 1 - a_2 z - z omega_1(z) around 0 along |z| = radius.

    By the argument principle this counts the zeros of D inside the contour.
    """
    theta = 2.0 * np.pi * np.arange(points) / points
    z = radius * np.exp(1j * theta)
    values = 1.0 - a2 * z - z * omega_eval(params, z)
    if np.any(values == 0):
        return -1
    steps = np.angle(np.roll(values, -1) / values)
    return int(round(float(np.sum(steps)) / (2.0 * np.pi)))


def denominator_roots(a2: complex, params: SchurParams) -> np.ndarray:
    """
    Zeros of D(z) from its exact rational form.

    With psi = P / Q, D = (Q - a_2 z Q - z^2 P) / Q, and Q has no zeros in
    the closed disk, so the zeros of D there are the zeros of the numerator.
    """
    numerator, denominator = schur_rational(params)
    z_q = npoly.polymulx(denominator)
    polynomial = npoly.polysub(
        npoly.polysub(denominator, a2 * z_q),
        npoly.polymulx(npoly.polymulx(numerator))
    )
    polynomial = npoly.polytrim(polynomial, tol=0.0)
    if polynomial.size <= 1:
        return np.array([], dtype=np.complex128)
    return npoly.polyroots(polynomial)


def min_root_modulus(a2: complex, params: SchurParams) -> float:
    roots = denominator_roots(a2, params)
    return float(np.min(np.abs(roots))) if roots.size else float('inf')


def _passes_prescreen(a2: complex, params: SchurParams, margin: float) -> bool:
    """Coarse margin check and exact root test; both are necessary conditions."""
    if params.degree > 0:
        peak, _ = boundary_peak(params, PRESCREEN_GRID_SIZE)
        if 1.0 - peak < margin:
            return False
    return min_root_modulus(a2, params) >= 1.0


def is_admissible(
    a2: complex,
    params: SchurParams,
    margin: float = 1e-6,
    grid_size: int = DEFAULT_GRID_SIZE,
    winding_points: int = WINDING_POINTS,
    winding_radius: float = WINDING_RADIUS
) -> bool:
    """
    Strict class-U test.

    Requires membership margin >= ``margin``, every zero of D on or outside
    the unit circle, and winding number 0 along the contour. Cheap
    necessary checks run first.
    """
    if not _passes_prescreen(a2, params, margin):
        return False
    if 1.0 - deriv_boundary_sup(params, grid_size) < margin:
        return False
    return winding_number(a2, params, winding_points, winding_radius) == 0


def build_admissible(
    a2: complex,
    params: SchurParams,
    margin: float = 1e-6,
    order: int = DEFAULT_ORDER,
    grid_size: int = DEFAULT_GRID_SIZE
) -> Optional[ClassUFunction]:
    """
    The class-U function of (a2, params) if it is strictly admissible, else None.

    Same acceptance rule as ``is_admissible``, but the boundary sweep runs
    once and its result is kept in the built function. Every zero of D lies
    on or outside the unit circle once the root test passes, so the winding
    sweep is skipped.
    """
    if not _passes_prescreen(a2, params, margin):
        return None
    omega = SchwarzFunction(params, order, grid_size)
    if 1.0 - omega.deriv_sup < margin:
        return None
    return build(a2, omega, pole_free=True)


def build(
    a2: complex,
    omega: SchwarzFunction,
    order: Optional[int] = None,
    lenient: bool = False,
    winding_points: int = WINDING_POINTS,
    winding_radius: float = WINDING_RADIUS,
    pole_free: Optional[bool] = None
) -> ClassUFunction:
    """
    Construct f from a_2 and omega_1.

    Args:
        a2: Second coefficient
        omega: Schwarz function omega_1
        order: Series order (defaults to omega's order)
        lenient: Return a function flagged pole_free=False instead of raising
        winding_points: Samples of the analyticity contour
        winding_radius: Radius of the analyticity contour
        pole_free: Analyticity verdict already established by the caller
            (skips the winding sweep)

    Returns:
        ClassUFunction with coefficients a_0..a_N

    Raises:
        NotAnalyticError: If D vanishes inside the contour and not lenient
    """
    if order is not None:
        omega = omega.with_order(order)
    denominator = denominator_series(a2, omega)
    coeffs = denominator.recip().shift(1)
    if pole_free is None:
        pole_free = winding_number(a2, omega.params, winding_points, winding_radius) == 0
    if not pole_free and not lenient:
        raise NotAnalyticError(
            f"z/f(z) = 1 - a2 z - z omega(z) vanishes inside |z| < {winding_radius} (a2={a2})"
        )
    return ClassUFunction(
        a2=a2,
        omega=omega,
        coeffs=coeffs,
        denominator=denominator,
        membership_margin=1.0 - omega.deriv_sup,
        pole_free=pole_free,
    )


def build_from_params(
    a2: complex,
    params: SchurParams,
    order: int = DEFAULT_ORDER,
    grid_size: int = DEFAULT_GRID_SIZE,
    lenient: bool = False
) -> ClassUFunction:
    """Convenience wrapper: Schur parameters to class-U function."""
    return build(a2, SchwarzFunction(params, order, grid_size), lenient=lenient)


def identity(order: int = DEFAULT_ORDER) -> ClassUFunction:
    """f(z) = z."""
    return build(0.0, SchwarzFunction.zero(order))


def closed_form_a345(f: ClassUFunction) -> Tuple[complex, complex, complex]:
    """
    a_3, a_4, a_5 from a_2 and c_1, c_2, c_3:

        a_3 = c_1 + a_2^2
        a_4 = c_2 + 2 a_2 c_1 + a_2^3
        a_5 = c_3 + 2 a_2 c_2 + c_1^2 + 3 a_2^2 c_1 + a_2^4
    """
    if f.omega.order < 3:
        raise SeriesOrderError("Closed forms need omega coefficients through c_3")
    a2 = f.a2
    c1, c2, c3 = f.omega.c1, f.omega.c2, f.omega.c3
    a3 = c1 + a2 ** 2
    a4 = c2 + 2 * a2 * c1 + a2 ** 3
    a5 = c3 + 2 * a2 * c2 + c1 ** 2 + 3 * a2 ** 2 * c1 + a2 ** 4
    return a3, a4, a5


def defect_series(f: ClassUFunction) -> TruncatedSeries:
    """Series of (z/f)^2 f' - 1, computed as D^2 f' - 1 in series arithmetic."""
    fprime = f.coeffs.deriv()
    return mul(mul(f.denominator, f.denominator), fprime) - 1.0


def defect_identity_series(f: ClassUFunction) -> TruncatedSeries:
    """z^2 omega_1'(z); equals defect_series(f) through order N-2."""
    return f.omega.series.deriv().shift(2)


def koebe(theta: float = 0.0, order: int = DEFAULT_ORDER) -> ClassUFunction:
    """
    Rotated Koebe function e^{-i theta} k(e^{i theta} z), k(z) = z/(1-z)^2.

    a_2 = 2 e^{i theta}, omega_1(z) = -e^{2 i theta} z, a_n = n e^{i(n-1) theta}.
    """
    omega = SchwarzFunction(SchurParams.koebe(theta), order)
    return build(2.0 * np.exp(1j * theta), omega)


def rotate(f: ClassUFunction, theta: float) -> ClassUFunction:
    """
    e^{-i theta} f(e^{i theta} z): a_n -> e^{i (n-1) theta} a_n.

    Rebuilt from a_2 e^{i theta} and the rotated Schwarz function; zeros of
    the denominator keep their moduli, so the analyticity verdict carries over.
    """
    rotated = build(f.a2 * np.exp(1j * theta), f.omega.rotated(theta), lenient=True)
    return rotated
