"""Unit and property tests for outward-rounded interval arithmetic."""
import pytest
from hypothesis import given, settings, strategies as st

from src.zalcman.interval import Interval
from src.zalcman.errors import InputError


def test_invalid_interval_rejected() -> None:
    """Test lo > hi is rejected."""
    with pytest.raises(InputError):
        Interval(1.0, 0.0)


def test_arithmetic_widens_outward() -> None:
    """Test results strictly contain the exact endpoints."""
    total = Interval(0.1, 0.2) + Interval(0.3, 0.4)

    assert total.lo < 0.4 < 0.6 < total.hi
    assert total.width < 1e-14 + 0.2


def test_division_by_interval_containing_zero() -> None:
    """Test division by an interval straddling 0 is rejected."""
    with pytest.raises(InputError):
        Interval(1.0, 2.0) / Interval(-1.0, 1.0)


def test_mixed_scalar_operations() -> None:
    """Test scalars coerce to point intervals on either side."""
    x = Interval(1.0, 2.0)

    assert (2 * x).contains(3.0)
    assert (1 - x).contains(-0.5)
    assert (1 / x).contains(0.75)
    assert (x / 3).contains(0.5)


def test_sqr_is_tight_across_zero() -> None:
    """Test t^2 over [-1, 2] has lower end 0."""
    square = Interval(-1.0, 2.0).sqr()

    assert square.lo == 0.0
    assert square.contains(4.0)


def test_bisect_and_hull() -> None:
    """Test bisection halves cover the parent."""
    left, right = Interval(0.0, 1.0).bisect()

    assert left.hi == right.lo == 0.5
    assert left.hull(right) == Interval(0.0, 1.0)


_endpoint = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)


@st.composite
def _interval_with_point(draw):
    a, b = draw(_endpoint), draw(_endpoint)
    lo, hi = min(a, b), max(a, b)
    t = draw(st.floats(min_value=0.0, max_value=1.0))
    return Interval(lo, hi), min(max(lo + t * (hi - lo), lo), hi)


@settings(max_examples=200, deadline=None)
@given(_interval_with_point(), _interval_with_point())
def test_operations_enclose_point_results(first, second) -> None:
    """Test x op y lies in X op Y for x in X, y in Y."""
    (xi, x), (yi, y) = first, second

    assert (xi + yi).contains(x + y)
    assert (xi - yi).contains(x - y)
    assert (xi * yi).contains(x * y)
    assert xi.sqr().contains(x * x)
    if not yi.contains(0.0):
        assert (xi / yi).contains(x / y)
