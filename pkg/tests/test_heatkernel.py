import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy import integrate

from hyperloc.errors import DomainError, ValidationError
from hyperloc.geometry import Space
from hyperloc.heatkernel import (
    HeatKernelQuery,
    bound_check,
    bump,
    descent_check,
    euclidean_kernel,
    heat_residual,
    kernel,
    kernel_bound,
    propagate_radial,
    recurrence_up_check,
    semigroup_defect,
    total_mass,
)


def test_negative_time_is_zero_and_zero_time_rejected():
    assert kernel(3, 1.0, -0.5, 1.0) == 0.0
    assert_allclose(kernel(4, 1.0, np.array([-1.0, -0.1]), 0.5), 0.0)
    with pytest.raises(DomainError):
        kernel(3, 1.0, 0.0, 1.0)


def test_unsupported_dimension():
    with pytest.raises(ValidationError):
        kernel(6, 1.0, 1.0, 1.0)
    with pytest.raises(ValidationError):
        kernel(3, -1.0, 1.0, 1.0)


def test_d3_closed_form():
    t, rho = 0.7, np.linspace(0.0, 6.0, 13)
    x = np.where(rho > 0, rho, 1.0)
    shape = np.where(rho > 0, rho / np.sinh(x), 1.0)
    assert_allclose(kernel(3, 1.0, t, rho), (4 * math.pi * t) ** -1.5 * shape * np.exp(-t - rho**2 / (4 * t)), rtol=1e-13)


@given(t=st.floats(0.05, 5.0), rho=st.floats(0.0, 8.0), kappa=st.floats(0.2, 3.0), d=st.sampled_from([3, 5]))
def test_curvature_scaling(t, rho, kappa, d):
    lhs = kernel(d, kappa, t, rho)
    rhs = kappa**d * kernel(d, 1.0, kappa**2 * t, kappa * rho)
    assert abs(lhs - rhs) <= 1e-10 * abs(rhs) + 1e-300


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_unit_mass(d):
    for t in (0.1, 1.0):
        assert abs(total_mass(d, 1.0, t) - 1.0) <= 1e-6


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_flat_limit(d):
    rho = np.linspace(0.0, 3.0, 7)
    assert_allclose(kernel(d, 1e-3, 1.0, rho), euclidean_kernel(d, 1.0, rho), rtol=1e-4)


def test_recurrences_across_dimensions():
    ts = [0.2, 1.0]
    assert recurrence_up_check(2, 1.0, ts, np.linspace(0.2, 6.0, 5)) <= 1e-4
    assert descent_check(4, 1.0, ts, np.linspace(0.0, 6.0, 4)) <= 1e-4
    assert descent_check(3, 1.0, ts, np.linspace(0.0, 6.0, 4)) <= 1e-4


@pytest.mark.parametrize("d", [2, 5])
def test_bound_holds(d):
    bc = bound_check(d, 1.0)
    assert bc.passed
    assert np.all(kernel_bound(d, 1.0, 1.0, np.linspace(0, 5, 6)) > 0)


def test_query_object():
    q = HeatKernelQuery(3, 1.0, 0.5, 1.0)
    assert q.evaluate() == kernel(3, 1.0, 0.5, 1.0)


def _d3_reduced(v0, t, r):
    """Radial propagator in d=3, kappa=1 with the angular integral done in closed form."""
    c = (4 * math.pi * t) ** -1.5 * math.exp(-t)

    def f(rp):
        a, b = abs(r - rp), r + rp
        gap = math.exp(-a * a / (4 * t)) - math.exp(-b * b / (4 * t))
        return float(v0(rp)) * math.sinh(rp) / math.sinh(r) * 2 * t * gap

    return 2 * math.pi * c * integrate.quad(f, 0.0, v0.support, points=[r], epsabs=1e-14, epsrel=1e-12, limit=200)[0]


@pytest.mark.parametrize("t", [0.05, 0.5, 2.0])
def test_propagator_matches_reduced_integral(t):
    space, v0 = Space(3, 1.0), bump(1.5)
    sol = propagate_radial(space, v0, t)
    for r in (0.3, 1.0, 2.5):
        assert_allclose(sol(r), _d3_reduced(v0, t, r), rtol=1e-8, atol=1e-14)


def test_zero_initial_data():
    sol = propagate_radial(Space(3, 1.0), bump(1.5, height=0.0), 0.5)
    assert np.all(sol(np.linspace(0.0, 3.0, 7)) == 0.0)


def test_positivity_and_maximum_principle():
    space, v0 = Space(3, 1.0), bump(1.5)
    w = propagate_radial(space, v0, 1.0)(np.linspace(0.0, 6.0, 31))
    assert np.all(w >= -1e-12)
    assert np.max(w) <= np.max(v0(np.linspace(0.0, 1.5, 31))) + 1e-12


def test_heat_equation_and_semigroup():
    space, v0 = Space(3, 1.0), bump(1.5)
    assert np.max(heat_residual(space, v0, 0.5, np.array([0.5, 1.5]))) <= 1e-3
    assert semigroup_defect(space, v0, 0.3, 0.4, np.array([0.0, 1.0, 2.5])) <= 1e-3


def test_initial_condition_recovery():
    space, v0 = Space(3, 1.0), bump(1.5)
    rho = np.linspace(0.0, 2.0, 21)
    errs = [np.max(np.abs(propagate_radial(space, v0, t)(rho) - v0(rho))) for t in (1e-1, 1e-2, 1e-3)]
    assert errs[0] > errs[1] > errs[2]
