"""Inverse localization: exact eigenfunctions that mimic Bessel-mode targets.

Given a Bessel-mode expansion ``v = sum c_lm profile_l(r) Y_lm`` of a
Euclidean solution, a :class:`LocalizationPlan` picks for every mode a
radial quantum number ``n_l`` so that all ``(n_l, l)`` lie on one energy
level of the hyperbolic operator.  The synthesized field

    psi = sum_lm c_lm A_{n_l l}^{-1} psi_{n_l l m}

is then an exact eigenfunction, and after the change of scale
``x -> exp(x / sqrt(lam))`` (harmonic) or ``x -> exp(x)`` (Coulomb) it is
uniformly close to ``v`` on a ball (respectively an annulus avoiding the
origin) once ``nhat`` is large and ``kappa`` small.

Energy levels: harmonic even ``N = 2 nhat`` with ``n_l = nhat - l/2``;
harmonic odd ``N = 2 nhat - 1`` with ``n_l = nhat - (l+1)/2``; Coulomb
``N = nhat`` with ``n_l = nhat - l``.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import stats
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .errors import PlanError, ValidationError
from .fields import BallGrid, ModeField, ModeTerm, fd_gradient
from .geometry import RadialGrid, Space, radial_schrodinger_residual, rho_to_r
from .helmholtz import BesselModeRegressor, HelmholtzExpansion, Mode, bessel_profile
from .spectra import (
    Eigenstate,
    OperatorKind,
    admissible,
    amplitude_constant,
    level_eigenvalue,
    potential,
    radial_eigenfunction,
)
from .specfun import SphericalHarmonicIndex

__all__ = [
    "KINDS",
    "kappa_bound",
    "auto_kappa",
    "PlanMode",
    "LocalizationPlan",
    "plan",
    "LocalizedEigenfunction",
    "synthesize",
    "ErrorReport",
    "localization_error",
    "StudyResult",
    "convergence_study",
    "InverseLocalizer",
]

KINDS = ("harmonic", "coulomb")
_FAMILY = {"harmonic": "helmholtz", "coulomb": "coulomb"}


def _check_kind(kind: str) -> None:
    if kind not in KINDS:
        raise ValidationError(f"kind must be one of {KINDS}, got {kind!r}")


def kappa_bound(kind: str, d: int, alpha: float, nhat: int, l0: int) -> float:
    """Supremum of admissible ``kappa`` for a plan.

    Harmonic: ``kappa^2 < beta(kappa) / (2 nhat + l0 + (d-1)/2)``, which solves
    to ``kappa^4 < alpha / (D (D + 1))`` with ``D = 2 nhat + l0 + (d-1)/2``.
    Coulomb: ``kappa < (alpha/2) (nhat + (d-1)/2)^{-2}``.
    """
    _check_kind(kind)
    if kind == "harmonic":
        D = 2 * nhat + l0 + (d - 1) / 2.0
        return (alpha / (D * (D + 1.0))) ** 0.25
    return alpha / 2.0 * (nhat + (d - 1) / 2.0) ** -2


def auto_kappa(kind: str, d: int, alpha: float, nhat: int, l0: int) -> float:
    """Curvature schedule keeping the curvature error below the asymptotic one.

    Harmonic: ``kappa^2 = min(bound^2 / 2, nhat^{-(d+1)/4} / 10)``.
    Coulomb: ``kappa = min(bound / 2, nhat^{-5/4} / 10)``.
    """
    bound = kappa_bound(kind, d, alpha, nhat, l0)
    if kind == "harmonic":
        return math.sqrt(min(bound**2 / 2.0, nhat ** (-(d + 1) / 4.0) / 10.0))
    return min(bound / 2.0, nhat**-1.25 / 10.0)


@dataclass(frozen=True)
class PlanMode:
    """One synthesized mode: target coefficient, radial number, normalizer."""

    l: int
    m: int
    c: float
    n: int
    amplitude: float


@dataclass(frozen=True)
class LocalizationPlan:
    """Validated parameters of an inverse-localization synthesis.

    Build with :func:`plan`; the constructor does not validate.
    """

    kind: str
    d: int
    alpha: float
    parity: str
    l0: int
    nhat: int
    kappa: float
    lam: float
    modes: tuple
    expansion: HelmholtzExpansion = field(repr=False)

    @property
    def operator(self) -> OperatorKind:
        return OperatorKind.hyperbolic(self.kind, self.alpha, self.d, self.kappa)

    @property
    def scale(self) -> float:
        """Factor ``sigma`` in ``rho = sigma |x|``: ``lam^{-1/2}`` or ``1``."""
        return 1.0 / math.sqrt(self.lam) if self.kind == "harmonic" else 1.0

    @property
    def scaling(self) -> str:
        return "x/sqrt(lambda)" if self.kind == "harmonic" else "identity"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "d": self.d,
            "alpha": self.alpha,
            "parity": self.parity,
            "l0": self.l0,
            "nhat": self.nhat,
            "kappa": self.kappa,
            "lambda": self.lam,
            "modes": [{"l": p.l, "m": p.m, "c": p.c, "n": p.n, "amplitude": p.amplitude} for p in self.modes],
            "expansion": self.expansion.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LocalizationPlan":
        """Rebuild and re-validate; stored derived values must agree."""
        try:
            exp = HelmholtzExpansion.from_dict(data["expansion"])
            built = plan(data["kind"], exp, int(data["nhat"]), float(data["kappa"]), l0=int(data["l0"]), parity=data["parity"])
        except KeyError as exc:
            raise ValidationError(f"malformed plan record: missing {exc}") from exc
        if built.lam != float(data["lambda"]):
            raise ValidationError("stored eigenvalue does not match the rebuilt plan")
        return built

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "LocalizationPlan":
        return cls.from_dict(json.loads(text))


def _radial_number(kind: str, parity: str, nhat: int, l: int) -> int:
    if kind == "coulomb":
        return nhat - l
    if parity == "even":
        return nhat - l // 2
    return nhat - (l + 1) // 2


def plan(
    kind: str,
    expansion: HelmholtzExpansion,
    nhat: int,
    kappa: float | str = "auto",
    l0: int | None = None,
    parity: str | None = None,
) -> LocalizationPlan:
    """Validate and assemble a localization plan.

    Parameters
    ----------
    kind : {"harmonic", "coulomb"}
    expansion : HelmholtzExpansion
        Helmholtz family for ``harmonic``, Coulomb family for ``coulomb``.
    nhat : int
        Base radial quantum number; must be at least ``l0``.
    kappa : float or "auto"
        Curvature parameter; ``"auto"`` applies :func:`auto_kappa`.
    l0 : int, optional
        Maximal harmonic degree; defaults to the expansion's.
    parity : {"even", "odd"}, optional
        Requested parity for harmonic plans; must agree with the expansion.

    Raises
    ------
    PlanError
        On mixed parity (harmonic), parity mismatch, ``nhat < l0``,
        an inadmissible mode or a curvature above its bound.
    """
    _check_kind(kind)
    if expansion.family != _FAMILY[kind]:
        raise PlanError(f"{kind} plans need a {_FAMILY[kind]} expansion, got {expansion.family}")
    if int(nhat) != nhat or nhat < 0:
        raise PlanError(f"nhat must be a nonnegative integer, got {nhat!r}")
    nhat = int(nhat)
    d, alpha = expansion.d, expansion.alpha if kind == "coulomb" else 1.0
    l0 = expansion.l_max if l0 is None else int(l0)
    if any(md.l > l0 for md in expansion.modes):
        raise PlanError(f"expansion has modes above l0={l0}")
    if nhat < l0:
        raise PlanError(f"nhat={nhat} must be at least l0={l0}")
    if nhat < 4 * l0:
        warnings.warn(f"nhat={nhat} is below 4*l0={4 * l0}; the asymptotic regime may not be reached", stacklevel=2)

    if kind == "harmonic":
        if expansion.parity == "mixed":
            raise PlanError("harmonic plans need an even or odd target; split mixed targets by parity")
        eff = parity or expansion.parity
        if eff not in ("even", "odd"):
            raise PlanError(f"parity must be 'even' or 'odd', got {eff!r}")
        wrong = [md for md in expansion.modes if md.c != 0.0 and md.l % 2 != (0 if eff == "even" else 1)]
        if wrong:
            raise PlanError(f"{eff}-parity plan received a nonzero coefficient at l={wrong[0].l}")
        if eff == "odd" and nhat < 1:
            raise PlanError("odd plans need nhat >= 1")
    else:
        eff = parity or expansion.parity
        if parity is not None and parity != expansion.parity and parity != "mixed":
            raise PlanError(f"requested parity {parity} disagrees with the expansion ({expansion.parity})")

    bound = kappa_bound(kind, d, alpha, nhat, l0)
    if kappa == "auto":
        kappa = auto_kappa(kind, d, alpha, nhat, l0)
    else:
        try:
            kappa = float(kappa)
        except (TypeError, ValueError):
            raise PlanError(f"kappa must be a positive number or 'auto', got {kappa!r}") from None
        if not 0.0 < kappa < bound:
            raise PlanError(f"kappa={kappa} violates the plan bound 0 < kappa < {bound:.6g}")
    op = OperatorKind.hyperbolic(kind, alpha, d, kappa)

    ls = [l for l in range(l0 + 1) if kind == "coulomb" or l % 2 == (0 if eff == "even" else 1)]
    for l in ls:
        n = _radial_number(kind, eff, nhat, l)
        if n < 0 or not admissible(op, n, l):
            raise PlanError(f"mode (n={n}, l={l}) is not admissible at kappa={kappa}")
    if kind == "coulomb":
        level = nhat
    else:
        level = 2 * nhat if eff == "even" else 2 * nhat - 1
    lam = level_eigenvalue(op, level)
    pm = []
    for md in expansion.modes:
        n = _radial_number(kind, eff, nhat, md.l)
        amp = amplitude_constant(op, n, md.l, lam if kind == "harmonic" else None)
        pm.append(PlanMode(md.l, md.m, md.c, n, amp))
    return LocalizationPlan(kind, d, alpha, eff, l0, nhat, kappa, lam, tuple(pm), expansion)


class _ScaledRadial:
    """``s -> f(r(sigma s))`` with chain-rule derivatives, ``r = sinh(k rho)/k``."""

    def __init__(self, radial, space: Space, sigma: float):
        self.radial, self.space, self.sigma = radial, space, sigma

    def derivatives(self, s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        k, sig = self.space.kappa, self.sigma
        rho = sig * s
        r = np.asarray(rho_to_r(self.space, rho))
        r1 = np.cosh(k * rho) * sig
        r2 = k * np.sinh(k * rho) * sig * sig
        f, f1, f2 = self.radial.derivatives(r)
        return f, f1 * r1, f2 * r1 * r1 + f1 * r2


class LocalizedEigenfunction:
    """Eigenfunction synthesized from a plan.

    Calling the object evaluates ``psi o exp`` at geodesic normal
    coordinates.  :meth:`rescaled` returns the field compared with the
    target, ``x -> psi(exp(sigma x))``.
    """

    def __init__(self, plan_: LocalizationPlan):
        self.plan = plan_
        op = plan_.operator
        self.states = tuple(Eigenstate(op, p.n, p.l, p.m, plan_.lam) for p in plan_.modes)
        self.weights = tuple(p.c / p.amplitude for p in plan_.modes)

    @property
    def lam(self) -> float:
        return self.plan.lam

    def _field(self, sigma: float) -> ModeField:
        space = self.plan.operator.space
        terms = [
            ModeTerm(w, st.index, _ScaledRadial(st.radial, space, sigma)) for w, st in zip(self.weights, self.states)
        ]
        return ModeField(self.plan.d, terms)

    def __call__(self, X) -> np.ndarray:
        return self._field(1.0)(X)

    def rescaled(self) -> ModeField:
        return self._field(self.plan.scale)

    def mode_fields(self) -> list[tuple[ModeField, ModeField]]:
        """Per-mode pairs ``(rescaled eigenfunction term, target Bessel term)``."""
        space = self.plan.operator.space
        fam = _FAMILY[self.plan.kind]
        out = []
        for w, st, p in zip(self.weights, self.states, self.plan.modes):
            psi = ModeField(self.plan.d, [ModeTerm(w, st.index, _ScaledRadial(st.radial, space, self.plan.scale))])
            tgt = ModeField(self.plan.d, [ModeTerm(p.c, st.index, bessel_profile(self.plan.d, fam, p.l, self.plan.alpha))])
            out.append((psi, tgt))
        return out

    def certify(self, grid: RadialGrid | None = None) -> list[float]:
        """Mode-wise relative residuals, all against the single plan eigenvalue."""
        op = self.plan.operator
        grid = grid or RadialGrid.uniform(0.05, 10.0, 400)
        V = potential(op)
        return [
            radial_schrodinger_residual(op.space, st.l, V, self.plan.lam, radial_eigenfunction(op, st.n, st.l), grid).max_relative
            for st in self.states
        ]


def synthesize(plan_: LocalizationPlan) -> LocalizedEigenfunction:
    """Eigenfunction ``sum c_lm A^{-1} psi_{n_l l m}`` of a validated plan."""
    return LocalizedEigenfunction(plan_)


@dataclass(frozen=True)
class ErrorReport:
    """Discrete ``C^0`` / ``C^1`` sup-norm errors on a ball or annulus grid."""

    kind: str
    nhat: int
    kappa: float
    lam: float
    scaling: str
    grid: dict
    c0_error: float
    c1_error: float | None
    per_mode: tuple = ()

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "nhat": self.nhat,
            "kappa": self.kappa,
            "lambda": self.lam,
            "scaling": self.scaling,
            "grid": dict(self.grid),
            "c0_error": self.c0_error,
            "c1_error": self.c1_error,
            "per_mode": [dict(p) for p in self.per_mode],
        }

    def csv_row(self, slope: float | None = None) -> dict:
        return {
            "nhat": self.nhat,
            "kappa": self.kappa,
            "lambda": self.lam,
            "c0_error": self.c0_error,
            "c1_error": self.c1_error,
            "slope": slope,
        }


def _target_on_grid(target, grid: BallGrid, gradient: bool):
    if isinstance(target, HelmholtzExpansion):
        target = target.to_field()
    if isinstance(target, ModeField):
        return target.on_grid(grid, gradient)
    pts = grid.points
    val = np.asarray(target(pts), dtype=float).reshape(grid.shape)
    grad = fd_gradient(target, pts).reshape(grid.shape + (grid.d,)) if gradient else None
    return val, grad


def localization_error(
    psi: LocalizedEigenfunction,
    target,
    R: float,
    r_min: float = 0.0,
    n_radial: int = 64,
    sphere_degree: int | None = None,
    k: int = 1,
) -> ErrorReport:
    """Compare the rescaled eigenfunction with a target on a ball grid.

    Parameters
    ----------
    psi : LocalizedEigenfunction
    target : HelmholtzExpansion, ModeField or callable
        Callables are differentiated by central differences.
    R : float
        Outer radius.
    r_min : float
        Inner radius; must be positive for Coulomb plans.
    n_radial : int
        Chebyshev radial nodes (at least 64 recommended).
    sphere_degree : int, optional
        Angular quadrature degree; defaults to ``max(16, 4 l0)``.
    k : {0, 1}
        Highest derivative order measured.
    """
    p = psi.plan
    if k not in (0, 1):
        raise ValidationError("only k in {0, 1} is supported")
    if p.kind == "coulomb" and r_min <= 0.0:
        raise PlanError("Coulomb comparisons need an annulus with r_min > 0 (the origin is excluded)")
    grid = BallGrid(p.d, R, r_min, n_radial, sphere_degree if sphere_degree is not None else max(16, 4 * p.l0))
    want_grad = k == 1
    pv, pg = psi.rescaled().on_grid(grid, want_grad)
    tv, tg = _target_on_grid(target, grid, want_grad)
    c0 = float(np.max(np.abs(pv - tv))) if pv.size else 0.0
    c1 = float(max(c0, np.max(np.abs(pg - tg)))) if want_grad else None
    per_mode = []
    for (mf, tf), pm in zip(psi.mode_fields(), p.modes):
        a, _ = mf.on_grid(grid, False)
        b, _ = tf.on_grid(grid, False)
        per_mode.append({"l": pm.l, "m": pm.m, "c0": float(np.max(np.abs(a - b)))})
    return ErrorReport(p.kind, p.nhat, p.kappa, p.lam, p.scaling, grid.describe(), c0, c1, tuple(per_mode))


@dataclass(frozen=True)
class StudyResult:
    """Errors along an ``nhat`` sweep with a fitted log-log slope."""

    reports: tuple
    slope: float
    half_width: float
    violations: int
    order: int

    @property
    def errors(self) -> np.ndarray:
        return np.array([r.c1_error if self.order == 1 else r.c0_error for r in self.reports])

    @property
    def nhats(self) -> np.ndarray:
        return np.array([r.nhat for r in self.reports])


def convergence_study(
    kind: str,
    expansion: HelmholtzExpansion,
    nhats: Sequence[int],
    R: float,
    r_min: float = 0.0,
    k: int = 0,
    target=None,
    n_radial: int = 64,
    sphere_degree: int | None = None,
) -> StudyResult:
    """Localization errors over increasing ``nhat`` with automatic curvature.

    The slope of ``log error`` against ``log nhat`` is a least-squares fit;
    ``half_width`` is its 95% confidence half-width (Student t).  A
    violation is a step along the sweep where the error does not decrease.
    """
    nhats = [int(n) for n in nhats]
    if len(nhats) < 3:
        raise ValidationError("a convergence study needs at least 3 nhat values")
    if any(b <= a for a, b in zip(nhats, nhats[1:])):
        raise ValidationError("nhat values must be strictly increasing")
    target = expansion if target is None else target
    reports = []
    for n in nhats:
        psi = synthesize(plan(kind, expansion, n, "auto"))
        reports.append(localization_error(psi, target, R, r_min, n_radial, sphere_degree, k))
    err = np.array([r.c1_error if k == 1 else r.c0_error for r in reports])
    x, y = np.log(nhats), np.log(err)
    fit = stats.linregress(x, y)
    dof = len(x) - 2
    half = float(stats.t.ppf(0.975, dof) * fit.stderr) if dof > 0 else float("inf")
    viol = int(np.sum(np.diff(err) >= 0))
    return StudyResult(tuple(reports), float(fit.slope), half, viol, k)


class InverseLocalizer(RegressorMixin, BaseEstimator):
    """Estimator wrapping expansion fitting and eigenfunction synthesis.

    ``fit(X, y)`` fits Bessel-mode coefficients to samples of a target
    solution, then builds and synthesizes a localization plan.
    ``predict(X)`` evaluates the rescaled eigenfunction at ``X``, i.e. the
    field that approximates the target.

    Parameters
    ----------
    kind : {"harmonic", "coulomb"}
    d : int
    nhat : int
    kappa : float or "auto"
    l0 : int
    alpha : float
        Coulomb coupling.
    parity : {"even", "odd"} or None
    coef_floor : float

    Attributes
    ----------
    expansion_ : HelmholtzExpansion
    plan_ : LocalizationPlan
    eigenfunction_ : LocalizedEigenfunction
    eigenvalue_ : float
    kappa_ : float
    """

    def __init__(
        self,
        kind: str = "harmonic",
        d: int = 3,
        nhat: int = 40,
        kappa="auto",
        l0: int = 2,
        alpha: float = 1.0,
        parity: str | None = None,
        coef_floor: float = 1e-10,
    ):
        self.kind = kind
        self.d = d
        self.nhat = nhat
        self.kappa = kappa
        self.l0 = l0
        self.alpha = alpha
        self.parity = parity
        self.coef_floor = coef_floor

    def fit(self, X, y, sample_weight=None):
        _check_kind(self.kind)
        reg = BesselModeRegressor(self.d, _FAMILY[self.kind], self.l0, self.alpha, self.coef_floor)
        reg.fit(X, y, sample_weight)
        exp = reg.expansion_
        if self.kind == "harmonic" and self.parity is not None and exp.parity == "mixed":
            keep = 0 if self.parity == "even" else 1
            exp = HelmholtzExpansion(exp.d, exp.family, tuple(m for m in exp.modes if m.l % 2 == keep), exp.alpha)
        self.expansion_ = exp
        self.plan_ = plan(self.kind, exp, self.nhat, self.kappa, self.l0, self.parity)
        self.eigenfunction_ = synthesize(self.plan_)
        self.eigenvalue_ = self.plan_.lam
        self.kappa_ = self.plan_.kappa
        self.n_features_in_ = self.d
        return self

    def predict(self, X):
        check_is_fitted(self, "plan_")
        X = check_array(X)
        return self.eigenfunction_.rescaled()(X)
