import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy import special

from hyperloc.errors import DomainError, InadmissibleError, ValidationError
from hyperloc.geometry import RadialGrid, radial_schrodinger_residual
from hyperloc.specfun import build_sphere_quadrature
from hyperloc.spectra import (
    OperatorKind,
    admissible,
    amplitude_constant,
    amplitude_estimate,
    eigenfunction,
    eigenvalue,
    multiplicity,
    potential,
    radial_eigenfunction,
    tabulated_eigenvalue,
)
from hyperloc.verify import euclidean_limit_ratios


def test_potential_identity():
    r = np.array([0.5, 1.0, 2.0])
    VH = potential(OperatorKind.hyperbolic("harmonic", 1.0, 3, 0.3))(r)
    VC = potential(OperatorKind.hyperbolic("coulomb", 1.0, 3, 0.3))(r)
    assert_allclose(VH, VC**-2, rtol=1e-14)


def test_potential_flat_limits():
    r = np.linspace(0.2, 4.0, 9)
    assert_allclose(potential(OperatorKind.hyperbolic("harmonic", 1.0, 3, 1e-8))(r), r * r, rtol=1e-14)
    assert_allclose(potential(OperatorKind.hyperbolic("coulomb", 1.0, 3, 1e-8))(r), -1.0 / r, rtol=1e-14)
    with pytest.raises(DomainError):
        potential(OperatorKind.hyperbolic("coulomb", 1.0, 3, 0.1))(0.0)


def test_eigenvalue_examples():
    assert eigenvalue(OperatorKind.euclidean("harmonic", 1.0, 3), 0, 0) == 3.0
    hyp = OperatorKind.hyperbolic("harmonic", 1.0, 3, 0.1)
    assert eigenvalue(hyp, 1, 0) == eigenvalue(hyp, 0, 2)
    coul = OperatorKind.hyperbolic("coulomb", 1.0, 3, 0.01)
    assert_allclose(tabulated_eigenvalue(coul, 0, 0), -0.2501, rtol=1e-14)
    assert_allclose(eigenvalue(coul, 0, 0), -0.2501 + 0.01**2, rtol=1e-14)


def test_admissibility_examples():
    assert not admissible(OperatorKind.hyperbolic("harmonic", 1.0, 3, 1.0), 0, 0)
    coul = OperatorKind.hyperbolic("coulomb", 2.0, 3, 0.005)
    assert admissible(coul, 13, 0)
    assert not admissible(coul, 14, 0)
    assert admissible(OperatorKind.hyperbolic("harmonic", 1.0, 3, 1e-4), 50, 20)
    with pytest.raises(InadmissibleError):
        eigenvalue(coul, 14, 0)


def test_operator_validation():
    with pytest.raises(ValidationError):
        OperatorKind.hyperbolic("quartic", 1.0, 3, 0.1)
    with pytest.raises(ValidationError):
        OperatorKind.hyperbolic("harmonic", -1.0, 3, 0.1)
    with pytest.raises(ValidationError):
        OperatorKind.hyperbolic("harmonic", 1.0, 3, 0.0)


def test_degree_zero_radial_part():
    op = OperatorKind.hyperbolic("harmonic", 1.0, 3, 0.2)
    r = np.linspace(0.0, 4.0, 21)
    expected = r**2 * (1 + 0.04 * r * r) ** (-op.beta / (2 * 0.04))
    assert_allclose(radial_eigenfunction(op, 0, 2)(r), expected, rtol=1e-13)


@pytest.mark.parametrize("family", ["harmonic", "coulomb"])
@pytest.mark.parametrize("d", [2, 3, 4])
def test_radial_residual(family, d):
    op = OperatorKind.hyperbolic(family, 1.0, d, 0.05)
    grid = RadialGrid.uniform(0.05, 10.0, 300)
    for n, l in [(0, 0), (2, 1), (3, 2)]:
        if admissible(op, n, l):
            prof = radial_schrodinger_residual(op.space, l, potential(op), eigenvalue(op, n, l), radial_eigenfunction(op, n, l), grid)
            assert prof.max_relative <= 1e-6


def test_euclidean_radial_parts():
    r = np.linspace(0.0, 3.0, 31)
    op = OperatorKind.euclidean("harmonic", 1.0, 3)
    assert_allclose(radial_eigenfunction(op, 2, 1)(r), r * np.exp(-r * r / 2) * special.eval_genlaguerre(2, 1.5, r * r), atol=1e-14)


def test_harmonic_euclidean_limit_is_second_order():
    ratios = euclidean_limit_ratios("harmonic")
    assert np.all((ratios >= 3.0) & (ratios <= 5.0))


def test_coulomb_euclidean_limit_observed_second_order():
    """Observed behaviour of the Coulomb family (the first-order expectation is in test_acceptance)."""
    ratios = euclidean_limit_ratios("coulomb")
    assert np.all((ratios >= 3.0) & (ratios <= 5.0))


def test_amplitude_examples():
    op = OperatorKind.euclidean("harmonic", 1.0, 3)
    assert_allclose(amplitude_constant(op, 0, 0), math.sqrt(math.pi / 2), rtol=1e-15)


@pytest.mark.parametrize("family,l", [("harmonic", 0), ("harmonic", 2), ("coulomb", 0), ("coulomb", 1)])
def test_amplitude_estimate_ratio_tends_to_one(family, l):
    op = OperatorKind.euclidean(family, 1.0, 3)
    dev = [abs(amplitude_constant(op, n, l) / amplitude_estimate(op, n, l) - 1.0) for n in (50, 100, 200)]
    assert dev[0] > dev[1] > dev[2]
    assert dev[2] < 0.05


def test_multiplicity_examples():
    assert multiplicity(OperatorKind.euclidean("harmonic", 1.0, 3), 2) == 6
    assert multiplicity(OperatorKind.euclidean("coulomb", 1.0, 3), 1) == 4
    for fam in ("harmonic", "coulomb"):
        assert multiplicity(OperatorKind.euclidean(fam, 1.0, 3), 0) == 1


def test_constant_harmonic_for_l0():
    psi = eigenfunction(OperatorKind.hyperbolic("harmonic", 1.0, 3, 0.1), 1, 0, 1)
    X = np.array([[0.5, 0.0, 0.0], [0.0, -0.5, 0.0], [0.0, 0.3, 0.4]])
    v = psi(X)
    assert_allclose(v, v[0], rtol=1e-14)


@given(x=st.lists(st.floats(-2.0, 2.0), min_size=3, max_size=3), l=st.integers(0, 3))
def test_parity(x, l):
    X = np.array(x)
    if np.linalg.norm(X) < 1e-3:
        return
    psi = eigenfunction(OperatorKind.hyperbolic("harmonic", 1.0, 3, 0.1), 1, l, 1)
    # harmonics that vanish at X only do so up to rounding of their trig factors
    scale = abs(psi.radial(np.linalg.norm(X)))
    assert_allclose(psi(-X), (-1) ** l * psi(X), rtol=1e-12, atol=1e-14 * scale)


def test_orthogonality_over_ball():
    op = OperatorKind.hyperbolic("harmonic", 1.0, 3, 0.2)
    quad = build_sphere_quadrature(3, 12)
    g, wg = special.roots_legendre(60)
    R = 8.0
    rho = R * (g + 1) / 2
    wr = wg * R / 2 * (np.sinh(0.2 * rho) / 0.2) ** 2
    X = rho[:, None, None] * quad.nodes[None]
    W = wr[:, None] * quad.weights[None]
    states = [eigenfunction(op, 1, 0, 1), eigenfunction(op, 0, 2, 2), eigenfunction(op, 0, 2, 4), eigenfunction(op, 0, 1, 2)]
    vals = [s(X) for s in states]
    for i in range(len(states)):
        for j in range(i + 1, len(states)):
            ip = np.sum(W * vals[i] * vals[j])
            norm = math.sqrt(np.sum(W * vals[i] ** 2) * np.sum(W * vals[j] ** 2))
            assert abs(ip) / norm <= 1e-8
