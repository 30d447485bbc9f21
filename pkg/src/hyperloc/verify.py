"""Named verification suites with declared tolerances.

Each suite returns a list of :class:`Check` records.  A check passes when
its measured value lies inside ``[lower, upper]``.  The suites back the
``verify`` subcommand and mirror the acceptance criteria of the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ValidationError
from .geometry import RadialGrid, Space
from .heatkernel import (
    bound_check,
    bump,
    decay_rate,
    descent_check,
    euclidean_kernel,
    heat_residual,
    kernel,
    propagate_radial,
    recurrence_up_check,
    semigroup_defect,
    total_mass,
)
from .helmholtz import HelmholtzExpansion, Mode, agmon_hormander_quotient, hyperbolic_radial_helmholtz
from .localization import convergence_study, localization_error, plan, synthesize
from .spectra import (
    OperatorKind,
    admissible,
    eigenvalue,
    level_eigenvalue,
    potential,
    radial_eigenfunction,
)
from .geometry import radial_schrodinger_residual

__all__ = ["Check", "SUITES", "run_suite", "eigen_residuals", "euclidean_limit_ratios"]


@dataclass(frozen=True)
class Check:
    """One measured quantity against its acceptance interval."""

    suite: str
    name: str
    value: float
    lower: float = -math.inf
    upper: float = math.inf

    @property
    def passed(self) -> bool:
        return bool(self.lower <= self.value <= self.upper)

    def row(self) -> dict:
        return {
            "suite": self.suite,
            "check": self.name,
            "value": float(self.value),
            "lower": None if self.lower == -math.inf else float(self.lower),
            "upper": None if self.upper == math.inf else float(self.upper),
            "passed": self.passed,
        }


def eigen_residuals(d_values=(2, 3), kappas=(0.1, 0.02), n_max: int = 8, l_max: int = 4, alpha: float = 1.0) -> tuple[float, int]:
    """Worst relative radial residual over all admissible states, and their count."""
    grid = RadialGrid.uniform(0.05, 10.0, 400)
    worst, count = 0.0, 0
    for family in ("harmonic", "coulomb"):
        for d in d_values:
            for k in kappas:
                op = OperatorKind.hyperbolic(family, alpha, d, k)
                V = potential(op)
                for n in range(n_max + 1):
                    for l in range(l_max + 1):
                        if not admissible(op, n, l):
                            continue
                        prof = radial_schrodinger_residual(op.space, l, V, eigenvalue(op, n, l), radial_eigenfunction(op, n, l), grid)
                        worst = max(worst, prof.max_relative)
                        count += 1
    return worst, count


def _suite_eigen_residuals() -> list[Check]:
    worst, count = eigen_residuals()
    return [Check("eigen-residuals", f"max relative residual over {count} states", worst, upper=1e-6)]


def _suite_degeneracy() -> list[Check]:
    mismatches, total = 0, 0
    for family in ("harmonic", "coulomb"):
        for d in (2, 3):
            for k in (0.1, 0.02):
                op = OperatorKind.hyperbolic(family, 1.0, d, k)
                for N in range(21):
                    ref = level_eigenvalue(op, N)
                    for l in range(N + 1):
                        if family == "harmonic":
                            if (N - l) % 2:
                                continue
                            n = (N - l) // 2
                        else:
                            n = N - l
                        if not admissible(op, n, l):
                            continue
                        total += 1
                        mismatches += eigenvalue(op, n, l) != ref
    return [Check("degeneracy", f"eigenvalue mismatches within a level ({total} states)", float(mismatches), upper=0.0)]


def euclidean_limit_ratios(
    family: str, kappas=(0.08, 0.04, 0.02, 0.01), n_max: int = 6, l_max: int = 3, d: int = 3, r_max: float = 5.0
) -> np.ndarray:
    """Ratios of successive sup-errors ``|f^kappa - f^0|`` as ``kappa`` halves.

    States inadmissible at some ``kappa`` of the sweep are skipped.
    Returns an array of shape ``(n_states, len(kappas) - 1)``.
    """
    r = np.linspace(0.0, r_max, 2001)[1:]
    flat = OperatorKind.euclidean(family, 1.0, d)
    rows = []
    for n in range(n_max + 1):
        for l in range(l_max + 1):
            ops = [OperatorKind.hyperbolic(family, 1.0, d, k) for k in kappas]
            if not all(admissible(op, n, l) for op in ops):
                continue
            ref = radial_eigenfunction(flat, n, l)(r)
            err = [np.max(np.abs(radial_eigenfunction(op, n, l)(r) - ref)) for op in ops]
            rows.append([err[i] / err[i + 1] for i in range(len(err) - 1)])
    return np.array(rows)


def _suite_euclid_limit() -> list[Check]:
    h = euclidean_limit_ratios("harmonic")
    c = euclidean_limit_ratios("coulomb")
    return [
        Check("euclid-limit", "harmonic min halving ratio", float(h.min()), 3.0, 5.0),
        Check("euclid-limit", "harmonic max halving ratio", float(h.max()), 3.0, 5.0),
        Check("euclid-limit", "coulomb min halving ratio", float(c.min()), 1.7, 2.3),
        Check("euclid-limit", "coulomb max halving ratio", float(c.max()), 1.7, 2.3),
    ]


def _suite_lemma_rate() -> list[Check]:
    exp = HelmholtzExpansion(3, "helmholtz", (Mode(0, 1, 1.0),))
    st = convergence_study("harmonic", exp, [40, 80, 160, 320], 1.0, k=0)
    return [
        Check("lemma-rate", "log-log slope", st.slope, -2.0, -0.5),
        Check("lemma-rate", "non-decreasing steps", float(st.violations), upper=1.0),
    ]


def _suite_theorem_harmonic() -> list[Check]:
    exp = HelmholtzExpansion(3, "helmholtz", (Mode(0, 1, 1.0), Mode(2, 1, 0.5)))
    psi = synthesize(plan("harmonic", exp, 160))
    rep = localization_error(psi, exp, 1.0, k=1)
    return [
        Check("theorem-harmonic", "C0 error", rep.c0_error, upper=0.05),
        Check("theorem-harmonic", "C1 error", rep.c1_error, upper=0.2),
        Check("theorem-harmonic", "mode-wise residual at the plan eigenvalue", max(psi.certify()), upper=1e-6),
    ]


def _suite_theorem_coulomb() -> list[Check]:
    exp = HelmholtzExpansion(3, "coulomb", (Mode(0, 1, 1.0), Mode(1, 1, 1.0)))
    psi = synthesize(plan("coulomb", exp, 160))
    rep = localization_error(psi, exp, 1.5, r_min=0.3, k=1)
    return [
        Check("theorem-coulomb", "C0 error on the annulus", rep.c0_error, upper=0.05),
        Check("theorem-coulomb", "mode-wise residual at the plan eigenvalue", max(psi.certify()), upper=1e-6),
    ]


def _suite_helmholtz_decay() -> list[Check]:
    space = Space(3, 1.0)
    sol = hyperbolic_radial_helmholtz(space, 2.0, 0, 25.0, window=(5.0, 25.0))
    rho = np.linspace(0.0, 25.0, 2001)
    control = agmon_hormander_quotient(np.ones_like(rho), rho, space, np.linspace(5.0, 25.0, 21))
    return [
        Check("helmholtz-decay", "relative envelope-rate error", sol.decay.relative_rate_error, upper=0.05),
        Check("helmholtz-decay", "averaged quotient bounded", float(sol.decay.quotient.bounded), 1.0, 1.0),
        Check("helmholtz-decay", "constant control bounded", float(control.bounded), 0.0, 0.0),
        Check("helmholtz-decay", "max ODE residual", float(np.max(np.abs(sol.residual()))), upper=1e-8),
    ]


def _suite_heat_kernel() -> list[Check]:
    k, t, rho, h = 1.0, 0.5, 1.0, 1e-3
    g = lambda r: math.exp(-k * k * t - r * r / (4.0 * t))
    dg = (g(rho - 2 * h) - 8 * g(rho - h) + 8 * g(rho + h) - g(rho + 2 * h)) / (12 * h)
    display = -1.0 / (2.0 * math.pi * math.sqrt(4.0 * math.pi * t)) * (k / math.sinh(k * rho)) * dg
    closed = kernel(3, k, t, rho)
    r = np.linspace(0.0, 3.0, 13)
    flat = max(float(np.max(np.abs(kernel(d, 1e-3, 1.0, r) / euclidean_kernel(d, 1.0, r) - 1.0))) for d in (2, 3, 4, 5))
    masses = [total_mass(3, k, tt) for tt in (0.1, 1.0, 5.0)]
    bc = bound_check(3, k)
    return [
        Check("heat-kernel", "closed form vs differentiated display", abs(closed - display) / closed, upper=1e-8),
        Check("heat-kernel", "mass defect", max(abs(m - 1.0) for m in masses), upper=1e-6),
        Check("heat-kernel", "mass spread over t", max(masses) - min(masses), upper=1e-6),
        Check("heat-kernel", "minimum kernel value", bc.min_kernel, lower=0.0),
        Check("heat-kernel", "max kernel/bound ratio", bc.max_ratio, upper=1.0),
        Check("heat-kernel", "relative decay-rate error", decay_rate(3, k).relative_error, upper=0.05),
        Check("heat-kernel", "Euclidean limit at kappa=1e-3", flat, upper=1e-4),
    ]


def _suite_heat_recurrence() -> list[Check]:
    k = 1.0
    ts = [0.2, 1.0, 5.0]
    return [
        Check("heat-recurrence", "up 3->5", recurrence_up_check(3, k, ts, np.linspace(0.2, 10.0, 25)), upper=1e-6),
        Check("heat-recurrence", "up 2->4", recurrence_up_check(2, k, ts, np.linspace(0.2, 10.0, 9)), upper=1e-4),
        Check("heat-recurrence", "descent 2<-3", descent_check(2, k, ts, np.linspace(0.0, 10.0, 11)), upper=1e-5),
        Check("heat-recurrence", "descent 4<-5", descent_check(4, k, ts, np.linspace(0.0, 10.0, 6)), upper=1e-4),
    ]


def _suite_heat_propagator() -> list[Check]:
    space, v0 = Space(3, 1.0), bump(1.5)
    rho = np.linspace(0.0, 2.0, 21)
    e2 = float(np.max(np.abs(propagate_radial(space, v0, 1e-2)(rho) - v0(rho))))
    e3 = float(np.max(np.abs(propagate_radial(space, v0, 1e-3)(rho) - v0(rho))))
    w = propagate_radial(space, v0, 0.5)(rho)
    return [
        Check("heat-propagator", "initial-condition error ratio t=1e-3 / t=1e-2", e3 / e2, upper=1.0 - 1e-12),
        Check("heat-propagator", "heat-equation residual", float(np.max(heat_residual(space, v0, 0.5, np.array([0.5, 1.0, 1.5])))), upper=1e-3),
        Check("heat-propagator", "semigroup defect", semigroup_defect(space, v0, 0.5, 0.5, np.array([0.0, 0.5, 1.0, 2.0, 3.0])), upper=1e-3),
        Check("heat-propagator", "minimum of propagated bump", float(w.min()), lower=-1e-8),
    ]


SUITES: dict[str, Callable[[], list[Check]]] = {
    "eigen-residuals": _suite_eigen_residuals,
    "degeneracy": _suite_degeneracy,
    "euclid-limit": _suite_euclid_limit,
    "lemma-rate": _suite_lemma_rate,
    "theorem-harmonic": _suite_theorem_harmonic,
    "theorem-coulomb": _suite_theorem_coulomb,
    "helmholtz-decay": _suite_helmholtz_decay,
    "heat-kernel": _suite_heat_kernel,
    "heat-recurrence": _suite_heat_recurrence,
    "heat-propagator": _suite_heat_propagator,
}


def run_suite(name: str) -> list[Check]:
    """Run one suite, or every suite for ``"all"``."""
    if name == "all":
        return [c for fn in SUITES.values() for c in fn()]
    if name not in SUITES:
        raise ValidationError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    return SUITES[name]()
