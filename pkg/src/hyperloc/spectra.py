"""Closed-form bound states of the Coulomb and harmonic-oscillator operators.

Four operators ``-Delta + alpha V`` are covered: Coulomb and harmonic
oscillator, each on hyperbolic space (``kappa > 0``) or Euclidean space
(``kappa = 0``).  With ``r = sinh(kappa rho)/kappa`` the potentials are

    V_C(r) = -sqrt(kappa^2 + r^-2),     V_H(r) = r^2 / (1 + kappa^2 r^2).

Radial eigenfunctions are Jacobi (hyperbolic) or Laguerre (Euclidean)
polynomials times elementary factors; each exposes analytic first and second
derivatives so the residual oracle in :mod:`hyperloc.geometry` certifies it.

Eigenvalue convention
---------------------
:func:`eigenvalue` returns ``lambda`` with ``Delta psi + (lambda - alpha V) psi
= 0`` exactly.  In curved space this differs from the commonly tabulated
expressions ``beta (4n+2l+d) - kappa^2 (2n+l+(d-1)/2)^2`` and
``-alpha^2/(4N'^2) - kappa^2 N'^2``: the true value is larger by the
constant :func:`~hyperloc.geometry.spectral_shift` ``((d-1) kappa / 2)^2``.
The customary values are available from :func:`tabulated_eigenvalue`.  The shift is common to all
states, so degeneracies are unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InadmissibleError, ValidationError
from .geometry import Space, rho_to_r, spectral_shift
from .specfun import (
    SphericalHarmonicIndex,
    harmonic_dimension,
    jacobi,
    jacobi_derivative,
    laguerre,
    laguerre_derivative,
    spherical_harmonic,
)

__all__ = [
    "OperatorKind",
    "RadialFunction",
    "Eigenstate",
    "potential",
    "eigenvalue",
    "tabulated_eigenvalue",
    "level_eigenvalue",
    "admissible",
    "radial_eigenfunction",
    "eigenfunction",
    "amplitude_constant",
    "log_amplitude_constant",
    "amplitude_estimate",
    "multiplicity",
]

_FAMILIES = ("coulomb", "harmonic")


@dataclass(frozen=True)
class OperatorKind:
    """Operator ``-Delta_kappa + alpha V`` on ``H^d(kappa)``.

    Parameters
    ----------
    family : {"coulomb", "harmonic"}
    alpha : float
        Positive coupling constant.
    space : Space
        ``space.kappa == 0`` selects the Euclidean operator.
    """

    family: str
    alpha: float
    space: Space

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValidationError(f"family must be one of {_FAMILIES}, got {self.family!r}")
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ValidationError(f"alpha must be positive and finite, got {self.alpha!r}")

    @classmethod
    def hyperbolic(cls, family: str, alpha: float, d: int, kappa: float) -> "OperatorKind":
        if not kappa > 0:
            raise ValidationError("hyperbolic operators need kappa > 0")
        return cls(family, alpha, Space(d, kappa))

    @classmethod
    def euclidean(cls, family: str, alpha: float, d: int) -> "OperatorKind":
        return cls(family, alpha, Space(d, 0.0))

    @property
    def d(self) -> int:
        return self.space.d

    @property
    def kappa(self) -> float:
        return self.space.kappa

    @property
    def is_hyperbolic(self) -> bool:
        return self.space.kappa > 0

    @property
    def beta(self) -> float:
        """``(sqrt(kappa^4 + 4 alpha) - kappa^2)/2``; ``sqrt(alpha)`` when flat."""
        k2 = self.kappa**2
        # rationalized form avoids cancellation for small kappa
        return 2.0 * self.alpha / (math.sqrt(k2 * k2 + 4.0 * self.alpha) + k2)

    def level(self, n: int, l: int) -> int:
        """Energy level ``N``: ``n + l`` (Coulomb) or ``2n + l`` (harmonic)."""
        return n + l if self.family == "coulomb" else 2 * n + l


def potential(kind: OperatorKind):
    """Return ``r -> alpha V(r)`` for the operator.

    Coulomb potentials are singular at ``r = 0`` and reject it.
    """
    k2 = kind.kappa**2
    alpha = kind.alpha

    if kind.family == "coulomb":

        def V(r):
            r = np.asarray(r, dtype=float)
            if np.any(r <= 0):
                raise DomainError("the Coulomb potential is singular at r = 0")
            return -alpha * np.sqrt(k2 + 1.0 / (r * r))

    else:

        def V(r):
            r = np.asarray(r, dtype=float)
            return alpha * r * r / (1.0 + k2 * r * r)

    return V


def admissible(kind: OperatorKind, n: int, l: int) -> bool:
    """Whether ``(n, l)`` lies in the bound-state window of ``kind``."""
    if n < 0 or l < 0:
        return False
    if not kind.is_hyperbolic:
        return True
    d, k = kind.d, kind.kappa
    if kind.family == "coulomb":
        return n + l < math.sqrt(kind.alpha / (2.0 * k)) - (d - 1) / 2.0
    return 2 * n + l < kind.beta / k**2 - (d - 1) / 2.0


def _require(kind: OperatorKind, n: int, l: int) -> None:
    if int(n) != n or int(l) != l:
        raise ValidationError("quantum numbers must be integers")
    if not admissible(kind, n, l):
        raise InadmissibleError(f"(n, l) = ({n}, {l}) is outside the bound-state window of {kind.family} at kappa={kind.kappa}")


def level_eigenvalue(kind: OperatorKind, N: int) -> float:
    """Eigenvalue of energy level ``N``; a function of ``N`` alone."""
    d, k2, alpha = kind.d, kind.kappa**2, kind.alpha
    shift = spectral_shift(kind.space)
    if kind.family == "coulomb":
        Np = N + (d - 1) / 2.0
        return -(alpha**2) / (4.0 * Np * Np) - k2 * Np * Np + shift
    beta = kind.beta
    return beta * (2 * N + d) - k2 * (N + (d - 1) / 2.0) ** 2 + shift


def eigenvalue(kind: OperatorKind, n: int, l: int) -> float:
    """Eigenvalue ``lambda`` with ``Delta psi + (lambda - alpha V) psi = 0``.

    Computed from the energy level so that all ``(n, l)`` sharing a level
    return bit-identical values.
    """
    _require(kind, n, l)
    return level_eigenvalue(kind, kind.level(n, l))


def tabulated_eigenvalue(kind: OperatorKind, n: int, l: int) -> float:
    """The customary closed form, equal to ``eigenvalue - spectral_shift``."""
    return eigenvalue(kind, n, l) - spectral_shift(kind.space)


class RadialFunction:
    """Radial profile with analytic derivatives.

    Subclasses implement :meth:`derivatives`; calling the object returns the
    value only.
    """

    def derivatives(self, r) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        raise NotImplementedError

    def __call__(self, r):
        f = self.derivatives(np.atleast_1d(np.asarray(r, dtype=float)))[0]
        return float(f[0]) if np.ndim(r) == 0 else f.reshape(np.shape(r))


def _power(r: np.ndarray, l: int):
    if l == 0:
        one = np.ones_like(r)
        return one, np.zeros_like(r), np.zeros_like(r)
    return r**l, l * r ** (l - 1), l * (l - 1) * r ** (l - 2) if l > 1 else np.zeros_like(r)


def _product(*factors):
    """Leibniz rule for value, first and second derivative of a product."""
    v, d1, d2 = factors[0]
    for g, g1, g2 in factors[1:]:
        v, d1, d2 = v * g, d1 * g + v * g1, d2 * g + 2 * d1 * g1 + v * g2
    return v, d1, d2


class _HarmonicHyperbolic(RadialFunction):
    def __init__(self, kind: OperatorKind, n: int, l: int):
        d, k2 = kind.d, kind.kappa**2
        self.n, self.l, self.k2 = n, l, k2
        self.c = -kind.beta / k2
        self.a = l + (d - 2) / 2.0
        self.b = -kind.beta / k2 - 0.5

    def derivatives(self, r):
        r = np.asarray(r, dtype=float)
        n, l, k2, c, a, b = self.n, self.l, self.k2, self.c, self.a, self.b
        s2 = 1.0 + k2 * r * r
        g = s2 ** (c / 2.0)
        g1 = c * k2 * r * g / s2
        g2 = c * k2 * g / s2 + c * (c - 2.0) * k2 * k2 * r * r * g / (s2 * s2)
        z = 1.0 + 2.0 * k2 * r * r
        z1, z2 = 4.0 * k2 * r, 4.0 * k2
        P = jacobi(n, a, b, z)
        P1 = jacobi_derivative(n, a, b, z, 1)
        P2 = jacobi_derivative(n, a, b, z, 2)
        return _product(_power(r, l), (g, g1, g2), (P, P1 * z1, P2 * z1 * z1 + P1 * z2))


class _CoulombHyperbolic(RadialFunction):
    def __init__(self, kind: OperatorKind, n: int, l: int):
        d, k = kind.d, kind.kappa
        Np = n + l + (d - 1) / 2.0
        self.n, self.l, self.k = n, l, k
        self.c = -n - kind.alpha / (2.0 * k * Np)
        self.a = 2.0 * l + d - 2.0
        self.b = -n - l - (d - 1) / 2.0 - kind.alpha / (2.0 * k * Np)

    def derivatives(self, r):
        r = np.asarray(r, dtype=float)
        n, l, k, c, a, b = self.n, self.l, self.k, self.c, self.a, self.b
        s = np.sqrt(1.0 + k * k * r * r)
        u = s + k * r
        # u' = k u / s
        g = u**c
        g1 = c * k * g / s
        g2 = c * k * k * g * (c / (s * s) - r * k / s**3)
        z = 2.0 * u * u - 1.0
        z1 = 4.0 * k * u * u / s
        z2 = 4.0 * k * k * u * u * (2.0 / (s * s) - k * r / s**3)
        P = jacobi(n, a, b, z)
        P1 = jacobi_derivative(n, a, b, z, 1)
        P2 = jacobi_derivative(n, a, b, z, 2)
        return _product(_power(r, l), (g, g1, g2), (P, P1 * z1, P2 * z1 * z1 + P1 * z2))


class _HarmonicEuclidean(RadialFunction):
    def __init__(self, kind: OperatorKind, n: int, l: int):
        self.n, self.l = n, l
        self.sa = math.sqrt(kind.alpha)
        self.theta = l + kind.d / 2.0 - 1.0

    def derivatives(self, r):
        r = np.asarray(r, dtype=float)
        n, l, sa, th = self.n, self.l, self.sa, self.theta
        g = np.exp(-sa * r * r / 2.0)
        g1 = -sa * r * g
        g2 = (sa * sa * r * r - sa) * g
        z, z1, z2 = sa * r * r, 2.0 * sa * r, 2.0 * sa
        L = laguerre(n, th, z)
        L1 = laguerre_derivative(n, th, z, 1)
        L2 = laguerre_derivative(n, th, z, 2)
        return _product(_power(r, l), (g, g1, g2), (L, L1 * z1, L2 * z1 * z1 + L1 * z2))


class _CoulombEuclidean(RadialFunction):
    def __init__(self, kind: OperatorKind, n: int, l: int):
        self.n, self.l = n, l
        Np = n + l + (kind.d - 1) / 2.0
        self.q = kind.alpha / Np
        self.theta = 2.0 * l + kind.d - 2.0

    def derivatives(self, r):
        r = np.asarray(r, dtype=float)
        n, l, q, th = self.n, self.l, self.q, self.theta
        g = np.exp(-q * r / 2.0)
        g1 = -q / 2.0 * g
        g2 = q * q / 4.0 * g
        L = laguerre(n, th, q * r)
        L1 = laguerre_derivative(n, th, q * r, 1) * q
        L2 = laguerre_derivative(n, th, q * r, 2) * q * q
        return _product(_power(r, l), (g, g1, g2), (L, L1, L2))


def radial_eigenfunction(kind: OperatorKind, n: int, l: int) -> RadialFunction:
    """Radial part ``f_nl(r)`` of the bound state, in the ``r`` chart.

    Hyperbolic harmonic: ``r^l (1+k^2 r^2)^{c/2} P_n^{(a,b)}(1 + 2 k^2 r^2)`` with
    ``c = -beta/k^2``, ``a = l + (d-2)/2``, ``b = c - 1/2``.

    Hyperbolic Coulomb: ``r^l u^c P_n^{(a,b)}(2u^2 - 1)`` with
    ``u = sqrt(1+k^2 r^2) + k r``, ``N' = n + l + (d-1)/2``,
    ``c = -n - alpha/(2 k N')``, ``a = 2l + d - 2``,
    ``b = -n - l - (d-1)/2 - alpha/(2 k N')``.

    Euclidean: ``r^l exp(-sqrt(alpha) r^2/2) L_n^{(l+d/2-1)}(sqrt(alpha) r^2)``
    and ``r^l exp(-alpha r/(2N')) L_n^{(2l+d-2)}(alpha r/N')``.
    """
    _require(kind, n, l)
    if kind.family == "harmonic":
        cls = _HarmonicHyperbolic if kind.is_hyperbolic else _HarmonicEuclidean
    else:
        cls = _CoulombHyperbolic if kind.is_hyperbolic else _CoulombEuclidean
    return cls(kind, n, l)


@dataclass(frozen=True)
class Eigenstate:
    """Bound state ``psi_nlm = f_nl(r) Y_lm(omega)``.

    Calling the object on Cartesian points ``X`` of shape ``(..., d)``
    interprets them as geodesic normal coordinates at the base point
    (``rho = |X|``), so it evaluates ``psi o exp``.
    """

    kind: OperatorKind
    n: int
    l: int
    m: int
    lam: float

    def __post_init__(self):
        _require(self.kind, self.n, self.l)
        SphericalHarmonicIndex(self.l, self.m, self.kind.d)

    @property
    def beta(self) -> float:
        return self.kind.beta

    @property
    def index(self) -> SphericalHarmonicIndex:
        return SphericalHarmonicIndex(self.l, self.m, self.kind.d)

    @property
    def radial(self) -> RadialFunction:
        return radial_eigenfunction(self.kind, self.n, self.l)

    def evaluate(self, r, omega) -> np.ndarray:
        """Evaluate at chart radius ``r`` and direction ``omega``."""
        return self.radial(np.asarray(r, dtype=float)) * spherical_harmonic(self.index, omega)

    def __call__(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        rho = np.linalg.norm(X, axis=-1)
        safe = np.where(rho > 0, rho, 1.0)
        omega = np.where((rho > 0)[..., None], X / safe[..., None], np.eye(self.kind.d)[-1])
        r = rho_to_r(self.kind.space, rho)
        return self.evaluate(r, omega)


def eigenfunction(kind: OperatorKind, n: int, l: int, m: int) -> Eigenstate:
    """Bound state ``psi_nlm`` with its eigenvalue attached."""
    return Eigenstate(kind, n, l, m, eigenvalue(kind, n, l))


def log_amplitude_constant(kind: OperatorKind, n: int, l: int, lam: float | None = None) -> float:
    """Natural log of :func:`amplitude_constant`."""
    d, alpha = kind.d, kind.alpha
    if kind.family == "harmonic":
        if lam is None:
            lam = math.sqrt(alpha) * (4 * n + 2 * l + d)
        if not lam > 0:
            raise DomainError("the harmonic amplitude needs a positive eigenvalue")
        return -l * math.log(math.sqrt(lam) / 2.0) + math.lgamma(n + l + d / 2.0) + (d / 2.0 - 1.0) * math.log(2.0) - math.lgamma(n + 1.0)
    return math.lgamma(n + 2 * l + d - 1.0) - math.lgamma(n + 1.0) - (l - 1.0 + d / 2.0) * math.log(alpha)


def amplitude_constant(kind: OperatorKind, n: int, l: int, lam: float | None = None) -> float:
    """Normalizer ``A_nl`` matching a bound state to its Bessel profile.

    Harmonic: ``A = (sqrt(lam)/2)^{-l} Gamma(n + l + d/2) 2^{d/2-1} / n!`` where
    ``lam`` defaults to the Euclidean eigenvalue ``sqrt(alpha)(4n + 2l + d)``.
    With ``lam`` equal to the eigenvalue used for rescaling, ``A`` is exactly
    the ratio of the two profiles' leading coefficients at the origin.

    Coulomb: ``A = (n + 2l + d - 2)! / (n! alpha^{l - 1 + d/2})``.

    Both are evaluated in the log domain.
    """
    return math.exp(log_amplitude_constant(kind, n, l, lam))


def amplitude_estimate(kind: OperatorKind, n: int, l: int) -> float:
    """Leading large-``n`` behaviour of :func:`amplitude_constant`.

    Harmonic: ``alpha^{-l/4} 2^{d/2-1} n^{l/2+d/2-1}``.
    Coulomb: ``n^{2l+d-2} / alpha^{l+d/2-1}``.
    """
    if n < 1:
        raise DomainError("the large-n estimate needs n >= 1")
    d, alpha = kind.d, kind.alpha
    if kind.family == "harmonic":
        return alpha ** (-l / 4.0) * 2.0 ** (d / 2.0 - 1.0) * n ** (l / 2.0 + d / 2.0 - 1.0)
    return n ** (2.0 * l + d - 2.0) / alpha ** (l + d / 2.0 - 1.0)


def multiplicity(kind: OperatorKind, N: int) -> int:
    """Number of independent bound states at energy level ``N``."""
    if N < 0:
        raise DomainError("energy level must be nonnegative")
    d = kind.d
    if kind.family == "coulomb":
        return sum(harmonic_dimension(d, j) for j in range(N + 1))
    return sum(harmonic_dimension(d, N - 2 * k) for k in range(N // 2 + 1))
