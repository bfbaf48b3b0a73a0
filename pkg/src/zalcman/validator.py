"""
Consistency validation of constructed class-U functions.

Cross-checks the series coefficients against the defining relation
z/f = 1 - a_2 z - z omega_1, the closed forms for a_3..a_5, and the defect
identity (z/f)^2 f' - 1 = z^2 omega_1', then checks membership, the
Schwarz-coefficient bounds and the Bieberbach bounds.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Type

import numpy as np

from .classu import (
    ClassUFunction,
    closed_form_a345,
    defect_identity_series,
    defect_series,
)
from .errors import (
    IdentityResidualError,
    MembershipError,
    NormalizationError,
    ValidationError,
)
from .schwarz import lemma1_check
from .series import TruncatedSeries, mul

# Raised first when several kinds of failure are recorded
_ERROR_PRIORITY: Tuple[Type[ValidationError], ...] = (
    NormalizationError,
    IdentityResidualError,
    MembershipError,
)


@dataclass
class ValidationReport:
    """Outcome of the checks run on one function."""

    checks_passed: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    failures: List[Tuple[Type[ValidationError], str]] = field(default_factory=list)

    @property
    def errors(self) -> List[str]:
        return [message for _, message in self.failures]

    def add_pass(self, check_name: str) -> None:
        self.checks_passed.append(check_name)

    def add_warning(self, message: str) -> None:
        self.warnings.append(message)

    def add_error(self, message: str, kind: Type[ValidationError] = ValidationError) -> None:
        """Record a failed check and the exception type it maps to."""
        self.failures.append((kind, message))

    def is_valid(self) -> bool:
        return not self.failures

    def get_summary(self) -> str:
        sections = [
            "Validation Summary:\n"
            f"  Checks passed: {len(self.checks_passed)}\n"
            f"  Warnings: {len(self.warnings)}\n"
            f"  Errors: {len(self.failures)}"
        ]
        for title, items in (("Warnings", self.warnings), ("Errors", self.errors)):
            if items:
                sections.append(f"{title}:\n" + "\n".join(f"  - {item}" for item in items))
        return "\n\n".join(sections)


RESIDUAL_TOLERANCE = 1e-10
CLOSED_FORM_TOLERANCE = 1e-11
LEMMA1_TOLERANCE = 1e-9
BIEBERBACH_TOLERANCE = 1e-9
BIEBERBACH_MAX_INDEX = 8

# Identity residuals are compared through this index; beyond it the
# coefficients of non-members grow geometrically and absolute roundoff
# swamps any fixed tolerance.
IDENTITY_CHECK_ORDER = 20


def _validate_normalization(f: ClassUFunction, report: ValidationReport) -> None:
    a0, a1 = f.coeffs[0], f.coeffs[1]
    if a0 != 0 or a1 != 1:
        report.add_error(f"Normalization violated: a_0 = {a0}, a_1 = {a1}", NormalizationError)
    else:
        report.add_pass("Normalization a_0 = 0, a_1 = 1")


def _validate_identities(f: ClassUFunction, report: ValidationReport, tol: float) -> None:
    order = f.order
    upto = min(order, IDENTITY_CHECK_ORDER)
    z = TruncatedSeries.monomial(1, order)
    residual = mul(f.denominator, f.coeffs).max_abs_difference(z, upto)
    if residual > tol:
        report.add_error(
            f"Defining relation residual {residual:.3e} exceeds {tol:.1e} through order {upto}",
            IdentityResidualError,
        )
    else:
        report.add_pass(f"Defining relation residual {residual:.2e}")

    if order >= 5:
        closed = closed_form_a345(f)
        gap = max(abs(c - f.coeffs[n]) for n, c in zip((3, 4, 5), closed))
        if gap > CLOSED_FORM_TOLERANCE:
            report.add_error(
                f"Closed-form residual for a_3..a_5 is {gap:.3e} "
                f"(threshold {CLOSED_FORM_TOLERANCE:.1e})",
                IdentityResidualError,
            )
        else:
            report.add_pass(f"Closed forms for a_3..a_5 agree ({gap:.2e})")
    else:
        report.add_warning(f"Order {order} too small for the a_3..a_5 closed forms")

    upto = min(order - 2, IDENTITY_CHECK_ORDER)
    defect_gap = defect_series(f).max_abs_difference(defect_identity_series(f), upto)
    if defect_gap > tol:
        report.add_error(
            f"Defect identity residual {defect_gap:.3e} exceeds {tol:.1e} through order {upto}",
            IdentityResidualError,
        )
    else:
        report.add_pass(f"Defect identity residual {defect_gap:.2e}")


def _validate_membership(f: ClassUFunction, report: ValidationReport) -> bool:
    member = True
    if not f.pole_free:
        report.add_error("Denominator vanishes inside the disk (pole)", MembershipError)
        member = False
    else:
        report.add_pass("Denominator pole-free")

    margin = f.membership_margin
    if margin > 0.0:
        report.add_pass(f"Membership margin {margin:.3e}")
    elif margin == 0.0:
        report.add_warning("Membership margin is 0 (boundary limit point such as Koebe)")
    else:
        report.add_error(f"Membership margin {margin:.3e} is negative", MembershipError)
        member = False
    return member


def _validate_coefficient_bounds(f: ClassUFunction, report: ValidationReport) -> None:
    lemma = lemma1_check(f.omega.c1, f.omega.c2, f.omega.c3, LEMMA1_TOLERANCE)
    if lemma.passed:
        report.add_pass(f"Lemma 1 slacks {min(lemma.slacks):.2e}")
    else:
        report.add_error(f"Lemma 1 bound violated, slacks {lemma.slacks}", MembershipError)

    top = min(BIEBERBACH_MAX_INDEX, f.order)
    moduli = np.abs(f.coeffs.coeffs[2:top + 1])
    indices = np.arange(2, top + 1)
    breaches = indices[moduli > indices + BIEBERBACH_TOLERANCE]
    if breaches.size:
        n = int(breaches[0])
        report.add_error(
            f"Bieberbach bound violated: |a_{n}| = {abs(f.coeffs[n]):.6f} > {n}", MembershipError
        )
    else:
        report.add_pass(f"Bieberbach |a_n| <= n for n <= {top}")


def validate_class_u_function(
    f: ClassUFunction,
    residual_tolerance: float = RESIDUAL_TOLERANCE
) -> ValidationReport:
    """
    Run every consistency and membership check on ``f``.

    Coefficient bounds are only checked for functions that passed the
    membership checks, since they are consequences of membership.

    Args:
        f: Function to validate
        residual_tolerance: Per-coefficient tolerance of the identities

    Returns:
        ValidationReport with results of all checks
    """
    report = ValidationReport()
    _validate_normalization(f, report)
    _validate_identities(f, report, residual_tolerance)
    if _validate_membership(f, report):
        _validate_coefficient_bounds(f, report)
    else:
        report.add_warning("Coefficient bounds skipped for a non-member")
    return report


def validate_or_raise(f: ClassUFunction, report: Optional[ValidationReport] = None) -> None:
    """
    Validate ``f`` and raise a typed exception on failure.

    Raises:
        NormalizationError: If a_0 or a_1 is wrong
        IdentityResidualError: If a series identity does not hold
        MembershipError: If f is not (provably) in class U
        ValidationError: For other validation failures
    """
    report = report or validate_class_u_function(f)
    if report.is_valid():
        return

    kinds = {kind for kind, _ in report.failures}
    raised = next((kind for kind in _ERROR_PRIORITY if kind in kinds), ValidationError)
    raise raised(f"Class-U validation failed\n{report.get_summary()}")
