"""Bessel-mode expansions and hyperbolic radial Helmholtz solutions.

Euclidean targets
-----------------
Every solution of ``Delta v + v = 0`` regular at the origin expands as

    v(r, omega) = sum_{l,m} c_lm J_{l+d/2-1}(r) r^{1-d/2} Y_lm(omega),

and every regular solution of ``Delta v + (alpha/|x|) v = 0`` as

    v(r, omega) = sum_{l,m} c_lm J_{2l+d-2}(sqrt(4 alpha r)) r^{1-d/2} Y_lm(omega).

:func:`expand` recovers the ``c_lm`` of a point-evaluable target by projecting
onto each harmonic with a sphere quadrature at several probe radii and fitting
the Bessel profile by least squares across the radii.

Hyperbolic radial solutions
---------------------------
:func:`hyperbolic_radial_helmholtz` integrates

    w'' + (d-1) k coth(k rho) w' - k^2 l(l+d-2)/sinh^2(k rho) w + lam w = 0

from Frobenius data at the origin and fits the decay of its envelope.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import cumulative_simpson, solve_ivp
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .errors import IllConditionedFit, NumericalError, ValidationError
from .fields import BallGrid, ModeField, ModeTerm, split_points
from .geometry import Space, fd_derivatives, spectral_shift, volume_weight
from .spectra import RadialFunction, _power, _product
from .specfun import (
    SphereQuadrature,
    SphericalHarmonicIndex,
    bessel_j,
    bessel_j_derivative,
    harmonic_indices,
    spherical_harmonic,
)

__all__ = [
    "FAMILIES",
    "BesselProfile",
    "bessel_profile",
    "bessel_mode",
    "Mode",
    "ModeFit",
    "HelmholtzExpansion",
    "fit_modes",
    "expand",
    "evaluate_expansion",
    "truncation_error",
    "DecayReport",
    "AgmonHormanderQuotient",
    "RadialHelmholtzSolution",
    "hyperbolic_radial_helmholtz",
    "radial_helmholtz_residual",
    "agmon_hormander_quotient",
    "BesselModeRegressor",
]

FAMILIES = ("helmholtz", "coulomb")
_PARITIES = ("even", "odd", "mixed")


def _check_family(family: str) -> None:
    if family not in FAMILIES:
        raise ValidationError(f"family must be one of {FAMILIES}, got {family!r}")


class BesselProfile(RadialFunction):
    """Radial profile of a Bessel mode with analytic derivatives.

    ``helmholtz``: ``J_{l+d/2-1}(r) r^{1-d/2}``.
    ``coulomb``: ``J_{2l+d-2}(sqrt(4 alpha r)) r^{1-d/2}``.
    Near the origin, where the Bessel factor and the power cancel, a short
    power series is used instead.
    """

    def __init__(self, d: int, family: str, l: int, alpha: float = 1.0):
        _check_family(family)
        if family == "coulomb" and not alpha > 0:
            raise ValidationError("the Coulomb family needs alpha > 0")
        self.d, self.family, self.l, self.alpha = d, family, l, alpha
        self.p = 1.0 - d / 2.0
        self.order = l + d / 2.0 - 1.0 if family == "helmholtz" else 2.0 * l + d - 2.0

    def _series(self, r: np.ndarray):
        nu, l = self.order, self.l
        if self.family == "helmholtz":
            # J_nu(r) r^{-nu} = 2^{-nu}/Gamma(nu+1) (1 - r^2/(4(nu+1)) + r^4/(32(nu+1)(nu+2)))
            c0 = 2.0**-nu / math.gamma(nu + 1.0)
            a1 = -1.0 / (4.0 * (nu + 1.0))
            a2 = 1.0 / (32.0 * (nu + 1.0) * (nu + 2.0))
            q = (c0 * (1 + a1 * r**2 + a2 * r**4), c0 * (2 * a1 * r + 4 * a2 * r**3), c0 * (2 * a1 + 12 * a2 * r**2))
        else:
            al = self.alpha
            c0 = al ** (nu / 2.0) / math.gamma(nu + 1.0)
            a1 = -al / (nu + 1.0)
            a2 = al * al / (2.0 * (nu + 1.0) * (nu + 2.0))
            q = (c0 * (1 + a1 * r + a2 * r**2), c0 * (a1 + 2 * a2 * r), c0 * 2 * a2 * np.ones_like(r))
        return _product(_power(r, l), q)

    def _direct(self, r: np.ndarray):
        nu, p = self.order, self.p
        if self.family == "helmholtz":
            y, y1, y2 = r, np.ones_like(r), np.zeros_like(r)
        else:
            y = 2.0 * np.sqrt(self.alpha * r)
            y1 = np.sqrt(self.alpha / r)
            y2 = -0.5 * y1 / r
        J = bessel_j(nu, y)
        J1 = bessel_j_derivative(nu, y, 1)
        J2 = bessel_j_derivative(nu, y, 2)
        h = (J, J1 * y1, J2 * y1 * y1 + J1 * y2)
        power = (r**p, p * r ** (p - 1), p * (p - 1) * r ** (p - 2))
        return _product(h, power)

    def derivatives(self, r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        small = r < (1e-4 if self.family == "helmholtz" else 1e-6 / self.alpha)
        out = [np.empty_like(r) for _ in range(3)]
        if np.any(small):
            for o, v in zip(out, self._series(r[small])):
                o[small] = v
        if np.any(~small):
            for o, v in zip(out, self._direct(r[~small])):
                o[~small] = v
        return tuple(out)

    def potential(self) -> Callable[[np.ndarray], np.ndarray] | None:
        """Potential ``alpha V`` for the residual oracle (``None`` means 0)."""
        if self.family == "helmholtz":
            return None
        return lambda r: -self.alpha / np.asarray(r, dtype=float)

    @property
    def eigenvalue(self) -> float:
        """``1`` for Helmholtz modes, ``0`` for zero-energy Coulomb modes."""
        return 1.0 if self.family == "helmholtz" else 0.0


def bessel_profile(d: int, family: str, l: int, alpha: float = 1.0) -> BesselProfile:
    """Radial profile of the degree-``l`` Bessel mode."""
    return BesselProfile(d, family, l, alpha)


def bessel_mode(d: int, family: str, l: int, m: int, alpha: float = 1.0, coefficient: float = 1.0) -> ModeField:
    """Single Bessel mode ``profile(|x|) Y_lm(x/|x|)`` as a point-evaluable field."""
    idx = SphericalHarmonicIndex(l, m, d)
    return ModeField(d, [ModeTerm(coefficient, idx, bessel_profile(d, family, l, alpha))])


@dataclass(frozen=True, order=True)
class Mode:
    """Coefficient ``c`` of the ``(l, m)`` Bessel mode."""

    l: int
    m: int
    c: float = field(compare=False)


@dataclass(frozen=True)
class ModeFit:
    """Least-squares fit record for one mode.

    Attributes
    ----------
    l, m : int
    c : float
        Fitted coefficient.
    residual : float
        Root-mean-square misfit of the projected samples.
    n_radii : int
        Number of probe radii used.
    kept : bool
        False when ``|c|`` fell below the coefficient floor.
    """

    l: int
    m: int
    c: float
    residual: float
    n_radii: int
    kept: bool


def _infer_parity(modes: Sequence[Mode]) -> str:
    ls = {md.l % 2 for md in modes if md.c != 0.0}
    if ls == {1}:
        return "odd"
    if ls <= {0}:
        return "even"
    return "mixed"


@dataclass(frozen=True)
class HelmholtzExpansion:
    """Finite Bessel-mode expansion of a target solution.

    Parameters
    ----------
    d : int
    family : {"helmholtz", "coulomb"}
    modes : sequence of Mode
        Sorted by ``(l, m)`` on construction; duplicates are rejected.
    alpha : float
        Coupling of the Coulomb family (ignored for Helmholtz).
    parity : {"even", "odd", "mixed"} or None
        Inferred from the modes when omitted; a stated parity must agree.
    """

    d: int
    family: str
    modes: tuple = ()
    alpha: float = 1.0
    parity: str | None = None

    def __post_init__(self):
        _check_family(self.family)
        modes = tuple(sorted(Mode(int(md.l), int(md.m), float(md.c)) for md in self.modes))
        keys = [(md.l, md.m) for md in modes]
        if len(set(keys)) != len(keys):
            raise ValidationError("duplicate (l, m) entries in expansion")
        for md in modes:
            SphericalHarmonicIndex(md.l, md.m, self.d)
        inferred = _infer_parity(modes)
        parity = self.parity or inferred
        if parity not in _PARITIES:
            raise ValidationError(f"parity must be one of {_PARITIES}, got {parity!r}")
        if parity != "mixed" and inferred not in (parity,) and modes and any(md.c for md in modes):
            raise ValidationError(f"expansion declared {parity} but has nonzero coefficients of the other parity")
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "parity", parity)

    @property
    def l_max(self) -> int:
        return max((md.l for md in self.modes), default=0)

    def coefficient(self, l: int, m: int) -> float:
        for md in self.modes:
            if (md.l, md.m) == (l, m):
                return md.c
        return 0.0

    def to_field(self) -> ModeField:
        terms = [
            ModeTerm(md.c, SphericalHarmonicIndex(md.l, md.m, self.d), bessel_profile(self.d, self.family, md.l, self.alpha))
            for md in self.modes
        ]
        return ModeField(self.d, terms)

    def __call__(self, X) -> np.ndarray:
        return self.to_field()(X)

    def to_dict(self) -> dict:
        out = {"d": self.d, "family": self.family}
        if self.family == "coulomb":
            out["alpha"] = self.alpha
        out["parity"] = self.parity
        out["modes"] = [{"l": md.l, "m": md.m, "c": md.c} for md in self.modes]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "HelmholtzExpansion":
        try:
            modes = [Mode(int(md["l"]), int(md["m"]), float(md["c"])) for md in data["modes"]]
            return cls(int(data["d"]), data["family"], tuple(modes), float(data.get("alpha", 1.0)), data.get("parity"))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed expansion record: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "HelmholtzExpansion":
        return cls.from_dict(json.loads(text))


def _mode_indices(d: int, l0: int) -> list[SphericalHarmonicIndex]:
    return [idx for l in range(l0 + 1) for idx in harmonic_indices(d, l)]


def fit_modes(
    target: Callable[[np.ndarray], np.ndarray],
    d: int,
    family: str,
    l0: int,
    quad: SphereQuadrature,
    radii: Sequence[float],
    alpha: float = 1.0,
    coef_floor: float = 1e-10,
    usable_tol: float = 1e-6,
) -> list[ModeFit]:
    """Per-mode least-squares fits behind :func:`expand`.

    For every ``(l, m)`` with ``l <= l0`` the target is projected onto
    ``Y_lm`` at each probe radius, and the Bessel profile is fitted to those
    projections using the radii where the profile is not near a zero
    (``|b(r_i)| >= usable_tol * max_{r <= r_max} |b|``).

    Raises
    ------
    IllConditionedFit
        If a mode has no usable probe radius.
    """
    _check_family(family)
    if quad.d != d:
        raise ValidationError("quadrature dimension does not match d")
    if l0 > quad.degree:
        raise ValidationError(f"l0={l0} exceeds the quadrature exactness degree {quad.degree}")
    radii = np.asarray(radii, dtype=float)
    if radii.ndim != 1 or radii.size == 0 or np.any(radii <= 0):
        raise ValidationError("probe radii must be a nonempty list of positive numbers")
    pts = radii[:, None, None] * quad.nodes[None, :, :]
    values = np.asarray(target(pts.reshape(-1, d)), dtype=float).reshape(radii.size, -1)
    fine = np.linspace(0.0, radii.max(), 512)
    fits = []
    for idx in _mode_indices(d, l0):
        prof = bessel_profile(d, family, idx.l, alpha)
        proj = values @ (quad.weights * spherical_harmonic(idx, quad.nodes))
        b = prof(radii)
        ref = np.max(np.abs(prof(fine)))
        usable = np.abs(b) >= usable_tol * ref
        if not np.any(usable):
            raise IllConditionedFit(f"mode (l={idx.l}, m={idx.m}) has no usable probe radius; all sit at Bessel zeros")
        bu, pu = b[usable], proj[usable]
        c = float(bu @ pu / (bu @ bu))
        resid = float(np.sqrt(np.mean((pu - c * bu) ** 2)))
        fits.append(ModeFit(idx.l, idx.m, c, resid, int(usable.sum()), abs(c) >= coef_floor))
    return fits


def expand(
    target: Callable[[np.ndarray], np.ndarray],
    d: int,
    family: str,
    l0: int,
    quad: SphereQuadrature,
    radii: Sequence[float],
    alpha: float = 1.0,
    coef_floor: float = 1e-10,
) -> HelmholtzExpansion:
    """Bessel-mode expansion of a solution up to harmonic degree ``l0``.

    Parameters
    ----------
    target : callable
        Maps points of shape ``(N, d)`` to values of shape ``(N,)``.
    d : int
    family : {"helmholtz", "coulomb"}
    l0 : int
        Maximal harmonic degree, at most ``quad.degree``.
    quad : SphereQuadrature
    radii : sequence of float
        Probe radii inside the region where ``target`` is a solution.
    alpha : float
        Coulomb coupling.
    coef_floor : float
        Coefficients with smaller magnitude are dropped.

    Returns
    -------
    HelmholtzExpansion
    """
    fits = fit_modes(target, d, family, l0, quad, radii, alpha, coef_floor)
    modes = tuple(Mode(f.l, f.m, f.c) for f in fits if f.kept)
    return HelmholtzExpansion(d, family, modes, alpha)


def evaluate_expansion(expansion: HelmholtzExpansion) -> ModeField:
    """Point-evaluable synthesis ``sum c_lm profile_l(r) Y_lm(omega)``."""
    return expansion.to_field()


def truncation_error(target: Callable[[np.ndarray], np.ndarray], expansion: HelmholtzExpansion, grid: BallGrid) -> float:
    """Discrete sup-norm of ``target - expansion`` over the grid points."""
    pts = grid.points
    diff = np.asarray(target(pts), dtype=float) - expansion.to_field()(pts)
    return float(np.max(np.abs(diff))) if diff.size else 0.0


@dataclass(frozen=True)
class AgmonHormanderQuotient:
    """Values of ``(1/R) int_{B_R} |v|^2 dVol`` on nested balls.

    ``bounded`` holds when the maximum over all radii is within a factor 2
    of the median over the upper half of the radius range.
    """

    R: np.ndarray = field(repr=False)
    quotient: np.ndarray = field(repr=False)

    @property
    def bounded(self) -> bool:
        q = self.quotient
        upper = q[self.R >= (self.R.min() + self.R.max()) / 2.0]
        med = float(np.median(upper))
        return bool(np.max(q) <= 2.0 * med) if med > 0 else bool(np.max(q) == 0.0)

    @property
    def sup(self) -> float:
        return float(np.max(self.quotient))


def agmon_hormander_quotient(samples, rho, space: Space, R_list) -> AgmonHormanderQuotient:
    """Averaged decay functional of a field sampled along the radius.

    Parameters
    ----------
    samples : array_like
        ``S(rho) = int_{S^{d-1}} |v(rho, omega)|^2 dsigma`` on the nodes
        ``rho``; for a single orthonormal harmonic mode ``w(rho) Y_lm`` this
        is ``|w(rho)|**2``.
    rho : array_like
        Increasing nodes starting at 0 and covering ``max(R_list)``.
    space : Space
    R_list : array_like
        Ball radii.
    """
    S = np.asarray(samples, dtype=float)
    rho = np.asarray(rho, dtype=float)
    R = np.asarray(R_list, dtype=float)
    if rho[0] != 0.0 or rho[-1] < R.max():
        raise ValidationError("samples must start at rho = 0 and cover the largest radius")
    if np.any(R <= 0):
        raise ValidationError("ball radii must be positive")
    cum = cumulative_simpson(S * volume_weight(space, rho), x=rho, initial=0.0)
    inside = np.interp(R, rho, cum)
    return AgmonHormanderQuotient(R, inside / R)


@dataclass(frozen=True)
class DecayReport:
    """Envelope decay diagnostics of a radial Helmholtz solution.

    Attributes
    ----------
    rate : float
        Least-squares slope of ``log |w|`` at its local maxima in the window.
    target_rate : float
        ``-(d-1) kappa / 2``.
    window : tuple of float
    compensated_spread : float
        Max/min ratio of the peak envelope times ``exp(-target_rate rho)``.
    quotient : AgmonHormanderQuotient
    """

    rate: float
    target_rate: float
    window: tuple
    compensated_spread: float
    quotient: AgmonHormanderQuotient = field(repr=False)

    @property
    def relative_rate_error(self) -> float:
        if self.target_rate == 0.0:
            return abs(self.rate)
        return abs(self.rate - self.target_rate) / abs(self.target_rate)

    @property
    def bounded(self) -> bool:
        return self.compensated_spread <= 2.0 and self.quotient.bounded


@dataclass(frozen=True)
class RadialHelmholtzSolution:
    """Regular radial solution sampled on a uniform grid in ``rho``."""

    space: Space
    lam: float
    l: int
    rho: np.ndarray = field(repr=False)
    w: np.ndarray = field(repr=False)
    dw: np.ndarray = field(repr=False)
    decay: DecayReport

    def residual(self) -> np.ndarray:
        """Relative ODE residual of the samples at the nodes ``rho > 0``."""
        return radial_helmholtz_residual(self.space, self.lam, self.l, self.rho, self.w, self.dw)


def _coth_terms(space: Space, rho: np.ndarray, l: int):
    k, d = space.kappa, space.d
    mu = l * (l + d - 2)
    if k == 0.0:
        return (d - 1) / rho, mu / rho**2
    x = k * rho
    return (d - 1) * k / np.tanh(x), mu * (k / np.sinh(x)) ** 2


def radial_helmholtz_residual(space: Space, lam: float, l: int, rho, w, dw=None) -> np.ndarray:
    """Relative residual of the radial ODE for samples on a uniform grid.

    When ``dw`` (the integrator's own derivative) is given, ``w''`` is one
    finite difference of it; otherwise both derivatives are differenced from
    ``w``.  Values are returned for the nodes with ``rho > 0`` only.
    """
    rho = np.asarray(rho, dtype=float)
    w = np.asarray(w, dtype=float)
    h = rho[1] - rho[0]
    if dw is None:
        w1, w2 = fd_derivatives(w, h)
    else:
        w1 = np.asarray(dw, dtype=float)
        w2 = fd_derivatives(w1, h)[0]
    pos = rho > 0
    rho, w, w1, w2 = rho[pos], w[pos], w1[pos], w2[pos]
    drift, barrier = _coth_terms(space, rho, l)
    res = w2 + drift * w1 - barrier * w + lam * w
    scale = np.maximum(np.maximum(np.abs(w), np.abs(w1)), np.abs(w2))
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(scale > 0, np.abs(res) / scale, 0.0)


def _envelope_rate(rho: np.ndarray, w: np.ndarray, window: tuple) -> tuple[float, np.ndarray, np.ndarray]:
    a = np.abs(w)
    inner = (a[1:-1] >= a[:-2]) & (a[1:-1] >= a[2:]) & (a[1:-1] > 0)
    idx = np.nonzero(inner)[0] + 1
    idx = idx[(rho[idx] >= window[0]) & (rho[idx] <= window[1])]
    if idx.size < 3:
        raise NumericalError("too few envelope maxima in the decay window")
    # parabolic refinement of each sampled maximum
    y0, y1, y2 = np.log(a[idx - 1]), np.log(a[idx]), np.log(a[idx + 1])
    denom = y0 - 2 * y1 + y2
    shift = np.where(denom != 0, 0.5 * (y0 - y2) / denom, 0.0)
    h = rho[1] - rho[0]
    px = rho[idx] + shift * h
    py = y1 - 0.25 * (y0 - y2) * shift
    slope = np.polyfit(px, py, 1)[0]
    return float(slope), px, np.exp(py)


def hyperbolic_radial_helmholtz(
    space: Space,
    lam: float,
    l: int,
    rho_max: float,
    n_samples: int = 8001,
    window: tuple | None = None,
    R_list: Sequence[float] | None = None,
) -> RadialHelmholtzSolution:
    """Regular solution of the radial hyperbolic Helmholtz equation.

    Integrated with an 8th-order Dormand-Prince scheme from
    ``rho_0 = 1e-4 / max(kappa, sqrt(lam))`` using the two-term Frobenius
    series ``rho^l (1 + a rho^2)``.

    Parameters
    ----------
    space : Space
    lam : float
        Spectral parameter, strictly above ``((d-1) kappa / 2)**2``.
    l : int
        Harmonic degree.
    rho_max : float
        Integration range; ``kappa * rho_max <= 50``.
    n_samples : int
        Uniform output samples on ``[0, rho_max]``.
    window : tuple of float, optional
        Envelope-fit window; defaults to ``(rho_max / 5, rho_max)``.
    R_list : sequence of float, optional
        Ball radii for the averaged decay functional.
    """
    threshold = spectral_shift(space)
    if not lam > threshold:
        raise ValidationError(
            f"lam={lam} is not above the continuous-spectrum threshold ((d-1) kappa/2)^2 = {threshold}; "
            "no oscillatory regular solution exists there"
        )
    if space.kappa * rho_max > 50.0:
        raise ValidationError("kappa * rho_max must not exceed 50")
    if l < 0:
        raise ValidationError("harmonic degree must be nonnegative")
    d, k = space.d, space.kappa
    mu = l * (l + d - 2)
    rho0 = 1e-4 / max(k, math.sqrt(lam))
    coef = -(lam + k * k * ((d - 1) * l + mu) / 3.0) / (4 * l + 2 * d)
    y0 = [rho0**l * (1 + coef * rho0**2), (l * rho0 ** (l - 1) if l else 0.0) + coef * (l + 2) * rho0 ** (l + 1)]

    def rhs(r, y):
        drift, barrier = _coth_terms(space, np.asarray(r), l)
        return [y[1], -drift * y[1] + (barrier - lam) * y[0]]

    rho = np.linspace(0.0, rho_max, n_samples)
    sol = solve_ivp(rhs, (rho0, rho_max), y0, method="DOP853", rtol=1e-12, atol=1e-300, dense_output=True)
    if not sol.success:
        raise NumericalError(f"radial integration failed: {sol.message}")
    inside = rho >= rho0
    w = np.empty_like(rho)
    dw = np.empty_like(rho)
    w[inside], dw[inside] = sol.sol(rho[inside])
    r_in = rho[~inside]
    w[~inside] = r_in**l * (1 + coef * r_in**2)
    dw[~inside] = (l * r_in ** (l - 1) if l else 0.0) + coef * (l + 2) * r_in ** (l + 1)
    window = window or (rho_max / 5.0, rho_max)
    target = -(d - 1) * k / 2.0
    rate, px, py = _envelope_rate(rho, w, window)
    comp = py * np.exp(-target * px)
    R = np.asarray(R_list if R_list is not None else np.linspace(rho_max / 50.0, rho_max, 50), dtype=float)
    quotient = agmon_hormander_quotient(w * w, rho, space, R)
    report = DecayReport(rate, target, tuple(window), float(comp.max() / comp.min()), quotient)
    return RadialHelmholtzSolution(space, lam, l, rho, w, dw, report)


class BesselModeRegressor(RegressorMixin, BaseEstimator):
    """Fit Bessel-mode coefficients to scattered samples of a solution.

    The design matrix has one column ``profile_l(|x|) Y_lm(x/|x|)`` per mode
    with ``l <= l0``; coefficients solve a (weighted) linear least-squares
    problem.  With product-grid samples and quadrature weights this reduces
    to the projection used by :func:`expand`.

    Parameters
    ----------
    d : int
    family : {"helmholtz", "coulomb"}
    l0 : int
    alpha : float
    coef_floor : float
        Coefficients below this magnitude are dropped from ``expansion_``.

    Attributes
    ----------
    coef_ : ndarray
        All fitted coefficients, ordered like ``modes_``.
    modes_ : list of tuple
        ``(l, m)`` of each column.
    expansion_ : HelmholtzExpansion
    """

    def __init__(self, d: int = 3, family: str = "helmholtz", l0: int = 4, alpha: float = 1.0, coef_floor: float = 1e-10):
        self.d = d
        self.family = family
        self.l0 = l0
        self.alpha = alpha
        self.coef_floor = coef_floor

    def _design(self, X: np.ndarray) -> np.ndarray:
        s, omega = split_points(X)
        cols = []
        for idx in _mode_indices(self.d, self.l0):
            cols.append(bessel_profile(self.d, self.family, idx.l, self.alpha)(s) * spherical_harmonic(idx, omega))
        return np.column_stack(cols)

    def fit(self, X, y, sample_weight=None):
        _check_family(self.family)
        if self.l0 < 0:
            raise ValidationError("l0 must be nonnegative")
        X, y = check_X_y(X, y, y_numeric=True)
        if X.shape[1] != self.d:
            raise ValidationError(f"X has {X.shape[1]} columns, expected d={self.d}")
        A = self._design(X)
        if sample_weight is not None:
            sw = np.sqrt(np.asarray(sample_weight, dtype=float))
            A, y = A * sw[:, None], y * sw
        coef, *_ = np.linalg.lstsq(A, y, rcond=None)
        self.modes_ = [(idx.l, idx.m) for idx in _mode_indices(self.d, self.l0)]
        self.coef_ = coef
        kept = tuple(Mode(l, m, float(c)) for (l, m), c in zip(self.modes_, coef) if abs(c) >= self.coef_floor)
        self.expansion_ = HelmholtzExpansion(self.d, self.family, kept, self.alpha)
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X)
        return self._design(X) @ self.coef_
