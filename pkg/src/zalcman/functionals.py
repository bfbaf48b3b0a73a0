"""
Coefficient functionals and their conjectured sharp bounds.

    Zalcman        Z:n     |a_n^2 - a_{2n-1}|           <= (n-1)^2
    generalized    GZ:m,n  |a_m a_n - a_{m+n-1}|         <= (m-1)(n-1)
    Krushkal       K:n,p   |a_n^p - a_2^{p(n-1)}|        <= 2^{p(n-1)} - n^p
"""
from __future__ import annotations

import re
from typing import TYPE_CHECKING, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .errors import SeriesOrderError, SpecSyntaxError

if TYPE_CHECKING:
    from .classu import ClassUFunction

_SPEC_PATTERN = re.compile(r'^(Z|GZ|K):(\d+)(?:,(\d+))?$')


class FunctionalSpec(BaseModel):
    """Which functional to evaluate: Z (n), GZ (m, n) or K (n, p)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal['Z', 'GZ', 'K']
    n: int = Field(ge=2)
    m: Optional[int] = Field(default=None, ge=2)
    p: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode='after')
    def check_parameters(self) -> 'FunctionalSpec':
        """Each family carries exactly its own parameters."""
        if self.kind == 'Z' and (self.m is not None or self.p is not None):
            raise ValueError("Z:n takes only n")
        if self.kind == 'GZ' and (self.m is None or self.p is not None):
            raise ValueError("GZ:m,n needs m and n")
        if self.kind == 'K' and (self.p is None or self.m is not None):
            raise ValueError("K:n,p needs n and p")
        return self

    @classmethod
    def parse(cls, text: str) -> FunctionalSpec:
        """
        Parse "Z:n", "GZ:m,n" or "K:n,p" (ASCII, no spaces).

        Raises:
            SpecSyntaxError: On malformed strings or out-of-range parameters
        """
        match = _SPEC_PATTERN.match(text)
        if match is None:
            raise SpecSyntaxError(
                f"Cannot parse functional spec {text!r}; expected Z:n, GZ:m,n or K:n,p"
            )
        kind, first, second = match.groups()
        try:
            if kind == 'Z':
                if second is not None:
                    raise SpecSyntaxError(f"Z:n takes one parameter, got {text!r}")
                return cls(kind='Z', n=int(first))
            if second is None:
                raise SpecSyntaxError(f"{kind} takes two parameters, got {text!r}")
            if kind == 'GZ':
                return cls(kind='GZ', m=int(first), n=int(second))
            return cls(kind='K', n=int(first), p=int(second))
        except ValidationError as e:
            raise SpecSyntaxError(f"Invalid functional spec {text!r}: {e}") from e

    @property
    def label(self) -> str:
        if self.kind == 'Z':
            return f"Z:{self.n}"
        if self.kind == 'GZ':
            return f"GZ:{self.m},{self.n}"
        return f"K:{self.n},{self.p}"

    def __str__(self) -> str:
        return self.label

    @property
    def required_index(self) -> int:
        """Largest coefficient index the functional reads."""
        if self.kind == 'Z':
            return 2 * self.n - 1
        if self.kind == 'GZ':
            return self.m + self.n - 1
        return max(self.n, 2)

    @property
    def is_proven(self) -> bool:
        """True for the six cases with a proof over class U."""
        return self.label in PROVEN_LABELS


PROVEN_LABELS = ('Z:2', 'Z:3', 'GZ:2,3', 'GZ:2,4', 'K:4,1', 'K:5,1')


def proven_specs() -> tuple[FunctionalSpec, ...]:
    return tuple(FunctionalSpec.parse(label) for label in PROVEN_LABELS)


def evaluate(spec: FunctionalSpec, f: 'ClassUFunction') -> float:
    """
    Value of the functional at f.

    Raises:
        SeriesOrderError: If f's series order is below the required index
    """
    if f.order < spec.required_index:
        raise SeriesOrderError(
            f"{spec.label} needs coefficients through a_{spec.required_index}, "
            f"function has order {f.order}"
        )
    a = f.coeffs.coeffs
    if spec.kind == 'Z':
        value = a[spec.n] ** 2 - a[2 * spec.n - 1]
    elif spec.kind == 'GZ':
        value = a[spec.m] * a[spec.n] - a[spec.m + spec.n - 1]
    else:
        value = a[spec.n] ** spec.p - a[2] ** (spec.p * (spec.n - 1))
    return float(abs(value))


def bound(spec: FunctionalSpec) -> float:
    """The conjectured (or proven) sharp constant."""
    if spec.kind == 'Z':
        return float((spec.n - 1) ** 2)
    if spec.kind == 'GZ':
        return float((spec.m - 1) * (spec.n - 1))
    return float(2 ** (spec.p * (spec.n - 1)) - spec.n ** spec.p)


def excess(spec: FunctionalSpec, f: 'ClassUFunction') -> float:
    """evaluate - bound; non-positive on class U for the proven cases."""
    return evaluate(spec, f) - bound(spec)


def bound_status(spec: FunctionalSpec) -> str:
    return 'proven' if spec.is_proven else 'conjectural'
