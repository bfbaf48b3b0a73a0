"""Unit tests for Schur-parameterized Schwarz functions."""
import pytest
import numpy as np

from src.zalcman.schwarz import (
    SchurParams,
    SchwarzFunction,
    deriv_boundary_sup,
    lemma1_check,
    omega_derivative,
    omega_eval,
    omega_series,
    schur_eval,
    schur_rational,
)
from src.zalcman.errors import InputError


def random_params(rng, degree: int, radius: float = 0.99) -> SchurParams:
    r = radius * np.sqrt(rng.random(degree))
    angle = 2 * np.pi * rng.random(degree)
    return SchurParams(tuple(r * np.exp(1j * angle)))


# SchurParams

def test_params_reject_unimodular_gamma() -> None:
    """Test |gamma| > 1 - 1e-9 is rejected outside the extremal case."""
    with pytest.raises(InputError):
        SchurParams((1.0,))

    with pytest.raises(InputError):
        SchurParams((0.5, 1.0 - 1e-10))


def test_extremal_params_need_one_unimodular_value() -> None:
    """Test the Koebe-limit constructor constraints."""
    assert SchurParams.koebe(0.3).degree == 1

    with pytest.raises(InputError):
        SchurParams((0.5,), extremal=True)

    with pytest.raises(InputError):
        SchurParams((-1.0, 0.0), extremal=True)


def test_params_pairs_round_trip() -> None:
    """Test the persisted [re, im] form."""
    params = SchurParams((0.5 + 0.25j, -0.1j))

    assert SchurParams.from_pairs(params.as_pairs()) == params


# schur_eval

def test_schur_eval_degree_zero_is_zero() -> None:
    """Test psi = 0 for empty parameters."""
    assert schur_eval(SchurParams(()), 0.7j) == 0


def test_schur_eval_at_origin_is_gamma0() -> None:
    """Test psi(0) = gamma_0."""
    assert schur_eval(SchurParams((0.5,)), 0.0) == pytest.approx(0.5)
    assert schur_eval(SchurParams((0.3j, 0.8)), 0.0) == pytest.approx(0.3j)


def test_schur_eval_koebe_limit() -> None:
    """Test psi = -1 for the Koebe parameters, so omega_1(z) = -z."""
    params = SchurParams.koebe(0.0)

    assert schur_eval(params, 0.4 + 0.2j) == pytest.approx(-1.0)
    assert omega_eval(params, 0.4 + 0.2j) == pytest.approx(-(0.4 + 0.2j))


def test_schur_eval_rejects_points_outside_disk() -> None:
    """Test evaluation outside the closed disk is rejected."""
    with pytest.raises(InputError):
        schur_eval(SchurParams((0.5,)), 1.1)


def test_schur_eval_bounded_on_boundary(rng) -> None:
    """Test |psi| <= 1 + 1e-12 on |z| = 1 for |gamma_k| <= 0.99."""
    z = np.exp(2j * np.pi * np.arange(1024) / 1024)
    for degree in range(1, 7):
        for _ in range(20):
            values = schur_eval(random_params(rng, degree), z)
            assert np.max(np.abs(values)) <= 1.0 + 1e-12


def test_schur_rational_matches_recursion(rng) -> None:
    """Test P/Q reproduces the pointwise recursion."""
    from numpy.polynomial import polynomial as npoly

    params = random_params(rng, 4)
    numerator, denominator = schur_rational(params)
    z = 0.3 - 0.6j

    assert npoly.polyval(z, numerator) / npoly.polyval(z, denominator) == pytest.approx(
        schur_eval(params, z), abs=1e-12
    )


# omega_series

def test_omega_series_empty_is_zero() -> None:
    """Test omega_1 = 0 for empty parameters."""
    assert np.all(omega_series(SchurParams(()), 8).coeffs == 0)


def test_omega_series_koebe() -> None:
    """Test c_1 = -1 and c_k = 0 for k >= 2 in the Koebe case."""
    coeffs = omega_series(SchurParams.koebe(0.0), 10).coeffs

    assert coeffs[1] == pytest.approx(-1.0)
    np.testing.assert_allclose(np.abs(coeffs[2:]), 0.0, atol=1e-15)


def test_omega_series_first_schur_coefficients() -> None:
    """Test c_1 = gamma_0 and c_2 = gamma_1 (1 - |gamma_0|^2)."""
    omega = SchwarzFunction(SchurParams((0.5, 0.5)), order=8)

    assert omega.c1 == pytest.approx(0.5)
    assert omega.c2 == pytest.approx(0.375)
    assert omega.coefficient(0) == 0


def test_omega_series_matches_pointwise(rng) -> None:
    """Test the series agrees with the rational recursion inside the disk."""
    params = random_params(rng, 5)
    series = omega_series(params, 64)
    z = np.array([0.3, -0.2 + 0.25j, 0.4j])

    np.testing.assert_allclose(series.evaluate(z), omega_eval(params, z), atol=1e-12)


def test_omega_first_coefficient_bounded(rng) -> None:
    """Test c_0 = 0 exactly and |c_1| <= 1."""
    for degree in range(7):
        series = omega_series(random_params(rng, degree), 16)
        assert series[0] == 0
        assert abs(series[1]) <= 1.0 + 1e-12


def test_omega_derivative_matches_finite_difference(rng) -> None:
    """Test the forward-mode derivative of the recursion."""
    params = random_params(rng, 4)
    z, h = 0.2 + 0.1j, 1e-6

    numeric = (omega_eval(params, z + h) - omega_eval(params, z - h)) / (2 * h)

    assert omega_derivative(params, z) == pytest.approx(numeric, abs=1e-8)


def test_rotated_params_rotate_omega(rng) -> None:
    """Test rotated parameters give e^{it} omega(e^{it} z)."""
    params = random_params(rng, 3)
    theta, z = 0.8, 0.35 + 0.2j

    expected = np.exp(1j * theta) * omega_eval(params, np.exp(1j * theta) * z)

    assert omega_eval(params.rotated(theta), z) == pytest.approx(expected, abs=1e-13)


# deriv_boundary_sup

def test_deriv_boundary_sup_examples() -> None:
    """Test omega = 0 -> 0, omega = -z -> 1, omega = z/2 -> 1/2."""
    assert deriv_boundary_sup(SchurParams(())) == 0.0
    assert deriv_boundary_sup(SchurParams.koebe(0.0)) == pytest.approx(1.0, abs=1e-15)
    assert deriv_boundary_sup(SchurParams((0.5,))) == pytest.approx(0.5, abs=1e-15)


def test_deriv_boundary_sup_dominates_grid_maximum(rng) -> None:
    """Test the inflated estimate is at least the sampled maximum on a finer grid."""
    params = random_params(rng, 4, radius=0.9)
    z = np.exp(2j * np.pi * np.arange(65536) / 65536)
    fine = float(np.max(np.abs(omega_derivative(params, z))))

    assert deriv_boundary_sup(params, 8192) >= fine - 1e-12


def test_deriv_boundary_sup_rejects_small_grid() -> None:
    """Test grid_size < 64 is rejected."""
    with pytest.raises(InputError):
        deriv_boundary_sup(SchurParams((0.5,)), 32)


# lemma1_check

def test_lemma1_koebe_saturates_all_bounds() -> None:
    """Test (c1, c2, c3) = (-1, 0, 0) passes with zero slacks."""
    report = lemma1_check(-1.0, 0.0, 0.0)

    assert report.passed
    np.testing.assert_allclose(report.slacks, (0.0, 0.0, 0.0), atol=1e-15)


def test_lemma1_second_bound_saturated() -> None:
    """Test (0, 1/2, 0) passes with zero second slack."""
    report = lemma1_check(0.0, 0.5, 0.0)

    assert report.passed
    assert report.slacks[1] == 0.0


def test_lemma1_third_bound_saturated() -> None:
    """Test (0, 0, 1/3) passes with zero third slack."""
    report = lemma1_check(0.0, 0.0, 1.0 / 3.0)

    assert report.passed
    assert report.slacks[2] == pytest.approx(0.0, abs=1e-16)


def test_lemma1_detects_violation() -> None:
    """Test |c2| above (1 - |c1|^2)/2 fails."""
    report = lemma1_check(0.5, 0.5, 0.0)

    assert not report.passed
    assert report.slacks[1] < 0


def test_lemma1_holds_for_members(sample_batch) -> None:
    """Test the bounds hold for every sampled representing omega_1."""
    for f in sample_batch:
        report = lemma1_check(f.omega.c1, f.omega.c2, f.omega.c3, 1e-9)
        assert report.passed, f"{f!r}: {report.slacks}"
