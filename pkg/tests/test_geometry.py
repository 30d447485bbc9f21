import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from hyperloc.errors import DomainError, GridError
from hyperloc.geometry import (
    RadialGrid,
    Space,
    dr_drho,
    fd_derivatives,
    geodesic_distance,
    r_to_rho,
    radial_schrodinger_residual,
    rho_to_r,
    spectral_shift,
    volume_weight,
)


def test_chart_examples():
    assert rho_to_r(Space(3, 1.0), 0.0) == 0.0
    assert rho_to_r(Space(3, 0.0), 1.7) == 1.7
    assert_allclose(rho_to_r(Space(3, 1.0), 2.0), math.sinh(2.0), rtol=1e-15)


@given(kappa=st.floats(1e-3, 5.0), x=st.floats(0.0, 30.0))
def test_chart_round_trip(kappa, x):
    space = Space(3, kappa)
    rho = x / kappa
    assert_allclose(r_to_rho(space, rho_to_r(space, rho)), rho, rtol=1e-12, atol=1e-300)


def test_chart_derivative_and_volume():
    space = Space(4, 0.7)
    rho = np.linspace(0.0, 3.0, 7)
    assert_allclose(dr_drho(space, rho), np.cosh(0.7 * rho), rtol=1e-15)
    assert_allclose(volume_weight(space, rho), (np.sinh(0.7 * rho) / 0.7) ** 3, rtol=1e-14)
    assert_allclose(volume_weight(Space(3), rho), rho**2)
    assert spectral_shift(space) == pytest.approx((3 * 0.7 / 2) ** 2, rel=1e-15)


def test_space_validation():
    with pytest.raises(DomainError):
        Space(1, 1.0)
    with pytest.raises(DomainError):
        Space(3, -1.0)
    with pytest.raises(DomainError):
        rho_to_r(Space(3, 1.0), -1.0)


def test_spherical_wave_residual():
    grid = RadialGrid.uniform(0.1, 10.0, 2000)
    prof = radial_schrodinger_residual(Space(3), 0, None, 1.0, lambda r: np.sin(r) / r, grid)
    assert prof.max_relative <= 1e-8


def test_zero_function_has_zero_residual():
    grid = RadialGrid.uniform(0.1, 5.0, 50)
    prof = radial_schrodinger_residual(Space(3, 0.5), 2, lambda r: r * r, 1.3, lambda r: np.zeros_like(r), grid)
    assert np.all(prof.residual == 0.0)
    assert prof.max_relative == 0.0


def test_fd_refinement_is_fourth_order():
    errs = []
    for n in (101, 201, 401):
        x = np.linspace(0.0, 2.0, n)
        d1, d2 = fd_derivatives(np.sin(3 * x), x[1] - x[0])
        errs.append(max(np.max(np.abs(d1 - 3 * np.cos(3 * x))), np.max(np.abs(d2 + 9 * np.sin(3 * x)))))
    for a, b in zip(errs, errs[1:]):
        assert 12.0 <= a / b <= 20.0


def test_grid_errors():
    with pytest.raises(GridError):
        fd_derivatives(np.ones(5), 0.1)
    with pytest.raises(GridError):
        RadialGrid(np.array([0.0, 1.0]))
    with pytest.raises(GridError):
        RadialGrid(np.array([1.0, 0.5]))
    with pytest.raises(GridError):
        radial_schrodinger_residual(Space(3), 0, None, 1.0, np.sin, RadialGrid.chebyshev(0.0, 1.0, 20))
    with pytest.raises(GridError):
        radial_schrodinger_residual(Space(3), 0, None, 1.0, np.sin, RadialGrid.uniform(0.1, 1.0, 20, "rho"))


@given(
    r1=st.floats(0.0, 5.0),
    r2=st.floats(0.0, 5.0),
    c=st.floats(-1.0, 1.0),
    kappa=st.floats(0.1, 2.0),
)
def test_geodesic_distance_matches_law_of_cosines(r1, r2, c, kappa):
    space = Space(3, kappa)
    naive = np.arccosh(max(1.0, math.cosh(kappa * r1) * math.cosh(kappa * r2) - math.sinh(kappa * r1) * math.sinh(kappa * r2) * c)) / kappa
    got = geodesic_distance(space, r1, r2, c)
    # the naive form loses sqrt(eps) accuracy near zero distance
    assert abs(got - naive) <= 1e-6 * max(1.0, naive)
    assert got >= 0.0


def test_geodesic_distance_euclidean_and_collinear():
    assert_allclose(geodesic_distance(Space(3), 3.0, 4.0, 0.0), 5.0)
    assert_allclose(geodesic_distance(Space(3, 1.3), 2.0, 0.5, 1.0), 1.5, rtol=1e-14)
    assert_allclose(geodesic_distance(Space(3, 1.3), 2.0, 0.5, -1.0), 2.5, rtol=1e-14)
