"""Acceptance criteria, one or more tests per criterion.

Run ``pytest tests/test_acceptance.py -v``; the session summary prints one
PASS/FAIL line per criterion.
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest

from hyperloc.geometry import Space
from hyperloc.heatkernel import (
    bound_check,
    bump,
    decay_rate,
    descent_check,
    heat_residual,
    kernel,
    propagate_radial,
    recurrence_up_check,
    semigroup_defect,
    total_mass,
)
from hyperloc.helmholtz import HelmholtzExpansion, Mode, agmon_hormander_quotient, hyperbolic_radial_helmholtz
from hyperloc.io import load_config
from hyperloc.localization import convergence_study, localization_error, plan, synthesize
from hyperloc.runner import run
from hyperloc.verify import _suite_degeneracy, eigen_residuals, euclidean_limit_ratios

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


@pytest.mark.criterion(1, "eigenfunction certification")
def test_criterion_1_eigenfunction_residuals():
    t0 = time.perf_counter()
    worst, count = eigen_residuals(d_values=(2, 3), kappas=(0.1, 0.02), n_max=8, l_max=4, alpha=1.0)
    assert count > 0
    assert worst <= 1e-6
    assert time.perf_counter() - t0 <= 60.0


@pytest.mark.criterion(2, "degeneracy across l at fixed level")
def test_criterion_2_degeneracy_is_exact():
    (check,) = _suite_degeneracy()
    assert check.value == 0.0


@pytest.mark.criterion(3, "Euclidean-limit rates")
def test_criterion_3_harmonic_rate_is_second_order():
    t0 = time.perf_counter()
    ratios = euclidean_limit_ratios("harmonic", kappas=(0.08, 0.04, 0.02, 0.01), n_max=6, l_max=3, d=3, r_max=5.0)
    assert ratios.size > 0
    assert np.all((ratios >= 3.0) & (ratios <= 5.0)), ratios
    assert time.perf_counter() - t0 <= 120.0


@pytest.mark.criterion(3, "Euclidean-limit rates")
def test_criterion_3_coulomb_rate_is_first_order():
    ratios = euclidean_limit_ratios("coulomb", kappas=(0.08, 0.04, 0.02, 0.01), n_max=6, l_max=3, d=3, r_max=5.0)
    assert ratios.size > 0
    assert np.all((ratios >= 1.7) & (ratios <= 2.3)), ratios


@pytest.mark.criterion(4, "localization rate for a single l=0 mode")
def test_criterion_4_rate():
    t0 = time.perf_counter()
    exp = HelmholtzExpansion(3, "helmholtz", (Mode(0, 1, 1.0),))
    st = convergence_study("harmonic", exp, [40, 80, 160, 320], 1.0, k=0)
    assert -2.0 <= st.slope <= -0.5
    assert st.violations <= 1
    assert time.perf_counter() - t0 <= 300.0


@pytest.mark.criterion(5, "harmonic end-to-end on the unit ball")
def test_criterion_5_harmonic_end_to_end():
    t0 = time.perf_counter()
    exp = HelmholtzExpansion(3, "helmholtz", (Mode(0, 1, 1.0), Mode(2, 1, 0.5)))
    p = plan("harmonic", exp, 160)
    psi = synthesize(p)
    rep = localization_error(psi, exp, 1.0, k=1)
    assert rep.c0_error <= 0.05
    assert rep.c1_error <= 0.2
    # every mode satisfies the radial equation at the single plan eigenvalue
    assert max(psi.certify()) <= 1e-6
    assert time.perf_counter() - t0 <= 300.0


@pytest.mark.criterion(6, "Coulomb end-to-end on an annulus")
def test_criterion_6_coulomb_end_to_end():
    t0 = time.perf_counter()
    exp = HelmholtzExpansion(3, "coulomb", (Mode(0, 1, 1.0), Mode(1, 1, 1.0)))
    p = plan("coulomb", exp, 160)
    assert p.scale == 1.0
    rep = localization_error(synthesize(p), exp, 1.5, r_min=0.3, k=1)
    assert rep.c0_error <= 0.05
    assert time.perf_counter() - t0 <= 300.0


@pytest.mark.criterion(7, "radial Helmholtz decay")
def test_criterion_7_decay():
    t0 = time.perf_counter()
    space = Space(3, 1.0)
    sol = hyperbolic_radial_helmholtz(space, 2.0, 0, 25.0, window=(5.0, 25.0))
    assert sol.decay.target_rate == -1.0
    assert sol.decay.relative_rate_error <= 0.05
    assert sol.decay.quotient.bounded
    rho = np.linspace(0.0, 25.0, 2001)
    control = agmon_hormander_quotient(np.ones_like(rho), rho, space, np.linspace(5.0, 25.0, 21))
    assert not control.bounded
    assert time.perf_counter() - t0 <= 60.0


@pytest.mark.criterion(8, "heat kernel in d=3")
def test_criterion_8_heat_kernel():
    t0 = time.perf_counter()
    k, t, rho, h = 1.0, 0.5, 1.0, 1e-3
    g = lambda r: math.exp(-k * k * t - r * r / (4.0 * t))
    dg = (g(rho - 2 * h) - 8 * g(rho - h) + 8 * g(rho + h) - g(rho + 2 * h)) / (12 * h)
    display = -1.0 / (2.0 * math.pi * math.sqrt(4.0 * math.pi * t)) * (k / math.sinh(k * rho)) * dg
    assert abs(kernel(3, k, t, rho) - display) / display <= 1e-8
    for tt in (0.1, 1.0, 5.0):
        assert abs(total_mass(3, k, tt) - 1.0) <= 1e-6
    ts = [0.2, 1.0, 5.0]
    assert recurrence_up_check(3, k, ts, np.linspace(0.2, 10.0, 25)) <= 1e-6
    assert descent_check(2, k, ts, np.linspace(0.0, 10.0, 11)) <= 1e-5
    bc = bound_check(3, k)
    assert bc.positive and bc.bounded
    assert decay_rate(3, k).relative_error <= 0.05
    assert time.perf_counter() - t0 <= 180.0


@pytest.mark.criterion(9, "radial propagator")
def test_criterion_9_propagator():
    t0 = time.perf_counter()
    space, v0 = Space(3, 1.0), bump(1.5)
    rho = np.linspace(0.0, 2.0, 21)
    e2 = np.max(np.abs(propagate_radial(space, v0, 1e-2)(rho) - v0(rho)))
    e3 = np.max(np.abs(propagate_radial(space, v0, 1e-3)(rho) - v0(rho)))
    assert e3 < e2
    assert np.max(heat_residual(space, v0, 0.5, np.array([0.5, 1.0, 1.5]))) <= 1e-3
    assert semigroup_defect(space, v0, 0.5, 0.5, np.array([0.0, 0.5, 1.0, 2.0, 3.0])) <= 1e-3
    assert time.perf_counter() - t0 <= 300.0


@pytest.mark.criterion(10, "determinism of CSV outputs")
@pytest.mark.parametrize(
    "cfg",
    [
        {"schema_version": 1, "command": "verify", "suite": "degeneracy"},
        {"schema_version": 1, "command": "verify", "suite": "heat-propagator"},
        load_config(CONFIGS / "theorem_harmonic_d3.json"),
        load_config(CONFIGS / "theorem_coulomb_annulus.json"),
    ],
    ids=["verify-degeneracy", "verify-heat-propagator", "localize-harmonic", "localize-coulomb"],
)
def test_criterion_10_byte_identical(cfg):
    first = run(cfg)
    second = run(cfg)
    assert first.keys() == second.keys()
    for name in first:
        if name.endswith(".csv"):
            assert first[name].encode() == second[name].encode(), name
