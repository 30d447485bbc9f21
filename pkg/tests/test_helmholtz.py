import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from sklearn.base import clone

from hyperloc.errors import IllConditionedFit, ValidationError
from hyperloc.fields import BallGrid
from hyperloc.geometry import RadialGrid, Space, radial_schrodinger_residual
from hyperloc.helmholtz import (
    BesselModeRegressor,
    HelmholtzExpansion,
    Mode,
    agmon_hormander_quotient,
    bessel_mode,
    bessel_profile,
    evaluate_expansion,
    expand,
    fit_modes,
    hyperbolic_radial_helmholtz,
    truncation_error,
)
from hyperloc.specfun import build_sphere_quadrature, harmonic_indices, spherical_harmonic

RADII = np.linspace(0.5, 3.0, 12)
E = np.array([0.0, 0.0, 1.0])


def _cos_wave(X):
    return np.cos(np.asarray(X) @ E)


def _sin_wave(X):
    return np.sin(np.asarray(X) @ E)


@pytest.mark.parametrize("d,l", [(2, 0), (2, 3), (3, 0), (3, 2), (4, 1)])
def test_helmholtz_mode_residual(d, l):
    grid = RadialGrid.uniform(0.01, 30.0, 500)
    prof = bessel_profile(d, "helmholtz", l)
    assert radial_schrodinger_residual(Space(d), l, None, 1.0, prof, grid).max_relative <= 1e-10


@pytest.mark.parametrize("alpha", [1.0, 2.5])
def test_coulomb_mode_residual(alpha):
    grid = RadialGrid.uniform(0.01, 20.0, 500)
    prof = bessel_profile(3, "coulomb", 1, alpha)
    assert radial_schrodinger_residual(Space(3), 1, prof.potential(), 0.0, prof, grid).max_relative <= 1e-10


def test_profile_series_matches_direct_near_origin():
    prof = bessel_profile(3, "helmholtz", 2)
    r = np.array([0.99e-4, 1.01e-4])
    f, f1, f2 = prof.derivatives(r)
    assert_allclose(f[0] / r[0] ** 2, f[1] / r[1] ** 2, rtol=1e-7)


def test_single_mode_recovery():
    target = bessel_mode(3, "helmholtz", 2, 3)
    fits = fit_modes(target, 3, "helmholtz", 4, build_sphere_quadrature(3, 28), RADII)
    for f in fits:
        if (f.l, f.m) == (2, 3):
            assert abs(f.c - 1.0) <= 1e-8
        else:
            assert abs(f.c) <= 1e-10


def test_plane_wave_coefficients_match_closed_form():
    exp = expand(_cos_wave, 3, "helmholtz", 8, build_sphere_quadrature(3, 32), RADII)
    for l in range(9):
        for idx in harmonic_indices(3, l):
            want = (2 * math.pi) ** 1.5 * (-1) ** (l // 2) * spherical_harmonic(idx, E) if l % 2 == 0 else 0.0
            assert abs(exp.coefficient(l, idx.m) - want) <= 1e-8 * max(1.0, abs(want))
    assert exp.parity == "even"


def test_plane_wave_reconstruction():
    exp = expand(_cos_wave, 3, "helmholtz", 14, build_sphere_quadrature(3, 38), RADII)
    err = truncation_error(_cos_wave, exp, BallGrid(3, 1.0, 0.0, 12, 16))
    assert err <= 1e-6


def test_odd_target_has_no_even_modes():
    fits = fit_modes(_sin_wave, 3, "helmholtz", 8, build_sphere_quadrature(3, 32), RADII)
    assert max(abs(f.c) for f in fits if f.l % 2 == 0) <= 1e-10
    exp = expand(_sin_wave, 3, "helmholtz", 8, build_sphere_quadrature(3, 32), RADII)
    assert exp.parity == "odd"


def test_truncation_error_decreases():
    grid = BallGrid(3, 2.0, 0.0, 24, 24)
    errs = [truncation_error(_cos_wave, expand(_cos_wave, 3, "helmholtz", l0, build_sphere_quadrature(3, 36), RADII), grid) for l0 in (4, 8, 12)]
    assert errs[0] > errs[1] > errs[2]


def test_empty_expansion_is_zero():
    exp = HelmholtzExpansion(3, "helmholtz")
    assert np.all(evaluate_expansion(exp)(np.random.default_rng(0).normal(size=(10, 3))) == 0.0)


def test_projection_is_idempotent():
    exp = HelmholtzExpansion(3, "helmholtz", (Mode(0, 1, 1.0), Mode(2, 2, -0.3), Mode(3, 4, 0.7)), parity="mixed")
    again = expand(exp, 3, "helmholtz", 4, build_sphere_quadrature(3, 28), RADII)
    assert [(m.l, m.m) for m in again.modes] == [(m.l, m.m) for m in exp.modes]
    assert_allclose([m.c for m in again.modes], [m.c for m in exp.modes], rtol=1e-10)


def test_expansion_json_round_trip():
    exp = HelmholtzExpansion(3, "coulomb", (Mode(1, 2, 1 / 3), Mode(0, 1, math.pi)), alpha=1.7)
    back = HelmholtzExpansion.from_json(exp.to_json())
    assert back == exp
    assert [m.c for m in back.modes] == [m.c for m in exp.modes]


def test_expansion_validation():
    with pytest.raises(ValidationError):
        HelmholtzExpansion(3, "helmholtz", (Mode(0, 1, 1.0), Mode(0, 1, 2.0)))
    with pytest.raises(ValidationError):
        HelmholtzExpansion(3, "helmholtz", (Mode(1, 1, 1.0),), parity="even")
    with pytest.raises(ValidationError):
        HelmholtzExpansion(3, "yukawa")
    with pytest.raises(ValidationError):
        HelmholtzExpansion.from_dict({"d": 3})


def test_fit_at_bessel_zero_is_ill_conditioned():
    j01 = 2.404825557695773
    with pytest.raises(IllConditionedFit):
        fit_modes(lambda X: np.cos(X[:, 0]), 2, "helmholtz", 0, build_sphere_quadrature(2, 4), [j01])


def test_flat_limit_of_radial_solution():
    sol = hyperbolic_radial_helmholtz(Space(3, 1e-4), 1.0, 0, 20.0, n_samples=4001)
    rho = sol.rho[1:]
    assert_allclose(sol.w[1:], np.sin(rho) / rho, atol=1e-6)


@pytest.mark.parametrize("d,l", [(3, 0), (2, 1), (3, 2)])
def test_decay_rate_and_residual(d, l):
    sol = hyperbolic_radial_helmholtz(Space(d, 1.0), 2.0, l, 25.0, window=(5.0, 25.0))
    assert sol.decay.relative_rate_error <= 0.05
    assert sol.decay.quotient.bounded
    assert np.max(np.abs(sol.residual())) <= 1e-8


def test_oscillation_count_per_window():
    lam = 2.0
    sol = hyperbolic_radial_helmholtz(Space(3, 1.0), lam, 0, 25.0, window=(5.0, 25.0))
    inside = (sol.rho >= 5.0) & (sol.rho <= 25.0)
    changes = np.count_nonzero(np.diff(np.sign(sol.w[inside])) != 0)
    expected = 20.0 * math.sqrt(lam - 1.0) / math.pi
    assert abs(changes - expected) <= 1.0


def test_threshold_is_rejected():
    with pytest.raises(ValidationError, match="threshold"):
        hyperbolic_radial_helmholtz(Space(3, 1.0), 1.0, 0, 10.0)


def test_quotient_controls():
    space = Space(3, 1.0)
    rho = np.linspace(0.0, 20.0, 801)
    R = np.linspace(2.0, 20.0, 10)
    zero = agmon_hormander_quotient(np.zeros_like(rho), rho, space, R)
    assert np.all(zero.quotient == 0.0) and zero.bounded
    assert not agmon_hormander_quotient(np.ones_like(rho), rho, space, R).bounded
    with pytest.raises(ValidationError):
        agmon_hormander_quotient(np.ones_like(rho), rho, space, [30.0])


def test_regressor_recovers_coefficients():
    exp = HelmholtzExpansion(3, "helmholtz", (Mode(0, 1, 1.0), Mode(1, 3, -0.5), Mode(2, 1, 0.25)), parity="mixed")
    rng = np.random.default_rng(1)
    X = rng.normal(size=(400, 3))
    X *= (rng.uniform(0.3, 2.5, 400) / np.linalg.norm(X, axis=1))[:, None]
    reg = BesselModeRegressor(d=3, family="helmholtz", l0=3).fit(X, exp(X))
    assert_allclose(reg.predict(X), exp(X), atol=1e-10)
    for md in exp.modes:
        assert abs(reg.expansion_.coefficient(md.l, md.m) - md.c) <= 1e-9
    assert clone(reg).get_params() == reg.get_params()
    assert reg.score(X, exp(X)) == pytest.approx(1.0)
