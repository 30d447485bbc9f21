"""Special-function kernels: Jacobi, Laguerre, Bessel, Gamma and sphere harmonics.

Jacobi and Laguerre polynomials are summed from their terminating
hypergeometric representations

    P_n^{(a,b)}(x) = C(n+a, n) 2F1(-n, n+a+b+1; a+1; (1-x)/2)
    L_n^{(t)}(x)   = C(n+t, n) 1F1(-n; t+1; x)

with extended-precision compensated accumulation.  Near x = 1 this is the
accurate route when the second Jacobi parameter is a large negative number
(the regime of the hyperbolic eigenfunctions).  On the oscillatory part of
the axis the alternating sum cancels catastrophically; points whose
cancellation factor ``sum|t_k| / |sum t_k|`` exceeds ``1e6`` are recomputed
with the forward three-term recurrence in degree, which is stable there.

Real spherical harmonics are orthonormal with respect to the unnormalized
surface measure.  Full bases are provided for ``d in {2, 3}``; for ``d >= 4``
only the zonal harmonic of each degree (index ``m = 1``) is available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import DomainError, EvaluationOverflow, UnsupportedError

__all__ = [
    "JACOBI_MAX_DEGREE",
    "JACOBI_MAX_NB",
    "jacobi",
    "jacobi_derivative",
    "laguerre",
    "laguerre_derivative",
    "bessel_j",
    "bessel_j_derivative",
    "log_gamma",
    "pochhammer",
    "log_binomial",
    "sphere_area",
    "harmonic_dimension",
    "SphericalHarmonicIndex",
    "harmonic_indices",
    "spherical_harmonic",
    "spherical_harmonic_gradient",
    "SphereQuadrature",
    "build_sphere_quadrature",
]

JACOBI_MAX_DEGREE = 1000
# Jacobi evaluations are rejected beyond this value of n*|b|; inside it the
# relative error stays below 1e-8 on the arguments x >= 1 used by the
# eigenfunctions (measured against 60-digit references).
JACOBI_MAX_NB = 1.0e8
# Sums whose cancellation factor exceeds this are redone by recurrence.
_CANCELLATION_LIMIT = 1.0e6

_LD = np.longdouble


def log_gamma(x):
    """Natural log of the Gamma function for positive arguments.

    Parameters
    ----------
    x : float or array_like
        Positive argument(s).

    Returns
    -------
    float or ndarray
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0):
        bad = arr[arr <= 0].flat[0]
        if bad == np.round(bad):
            raise DomainError(f"log_gamma has a pole at {bad:g}")
        raise DomainError(f"log_gamma requires x > 0, got {bad:g}")
    out = special.gammaln(arr)
    return float(out) if out.ndim == 0 else out


def pochhammer(q: float, n: int) -> float:
    """Rising factorial ``(q)_n = q (q+1) ... (q+n-1)``."""
    if n < 0 or int(n) != n:
        raise DomainError(f"pochhammer needs a nonnegative integer n, got {n!r}")
    return math.prod(q + k for k in range(int(n))) if n else 1.0


def log_binomial(top: float, n: int) -> float:
    """``log C(top, n)`` for ``top - n > -1``."""
    return math.lgamma(top + 1.0) - math.lgamma(top - n + 1.0) - math.lgamma(n + 1.0)


def _check_degree(n) -> int:
    if int(n) != n or n < 0:
        raise DomainError(f"polynomial degree must be a nonnegative integer, got {n!r}")
    if n > JACOBI_MAX_DEGREE:
        raise DomainError(f"polynomial degree {n} exceeds the supported maximum {JACOBI_MAX_DEGREE}")
    return int(n)


def _series(n: int, upper, lower: float, z: np.ndarray, name: str):
    """Sum ``sum_k (-n)_k (upper)_k / ((lower)_k k!) z^k`` in long double.

    ``upper=None`` drops the second rising factorial (confluent case).
    Returns the sum and the sum of absolute values of the terms.
    """
    z = z.astype(_LD)
    term = np.ones_like(z)
    total = np.ones_like(z)
    comp = np.zeros_like(z)
    absum = np.ones_like(z)
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(n):
            factor = _LD(-n + k) / (_LD(lower + k) * _LD(k + 1))
            if upper is not None:
                factor = factor * _LD(upper + k)
            term = term * factor * z
            if not np.all(np.isfinite(term)):
                raise EvaluationOverflow(f"{name} series term overflowed", k + 1)
            # Neumaier compensated summation
            new = total + term
            big = np.abs(total) >= np.abs(term)
            comp = comp + np.where(big, (total - new) + term, (term - new) + total)
            total = new
            absum = absum + np.abs(term)
    return total + comp, absum


def _scaled(prefactor_log: float, total, name: str) -> np.ndarray:
    if prefactor_log > 700.0:
        raise EvaluationOverflow(f"{name} prefactor overflowed", 0)
    with np.errstate(over="ignore"):
        out = np.asarray(total * _LD(math.exp(prefactor_log)), dtype=float)
    if not np.all(np.isfinite(out)):
        raise EvaluationOverflow(f"{name} value overflowed double precision", 0)
    return out


def _return(out: np.ndarray, scalar: bool):
    return float(out) if scalar else out


def jacobi(n: int, a: float, b: float, x):
    """Jacobi polynomial ``P_n^{(a,b)}(x)`` from its terminating 2F1 sum.

    Parameters
    ----------
    n : int
        Degree, ``0 <= n <= 1000``.
    a : float
        First parameter, ``a > -1``.
    b : float
        Second parameter; any real value, including large negative ones.
    x : float or array_like
        Evaluation point(s).

    Returns
    -------
    float or ndarray

    Raises
    ------
    DomainError
        If ``a <= -1``, the degree is out of range or ``n*|b|`` exceeds
        :data:`JACOBI_MAX_NB`.
    EvaluationOverflow
        If a series term overflows; the offending term index is attached.
    """
    n = _check_degree(n)
    if not a > -1.0:
        raise DomainError(f"jacobi requires a > -1, got a={a}")
    if n * abs(b) > JACOBI_MAX_NB:
        raise DomainError(f"jacobi: n*|b| = {n * abs(b):.3g} exceeds the certified limit {JACOBI_MAX_NB:.0e}")
    xa = np.asarray(x, dtype=float)
    flat = np.atleast_1d(xa).astype(float)
    total, absum = _series(n, n + a + b + 1.0, a + 1.0, (1.0 - flat) / 2.0, "jacobi")
    with np.errstate(divide="ignore", invalid="ignore"):
        cancel = np.asarray(absum / np.abs(total), dtype=float)
    bad = ~(cancel <= _CANCELLATION_LIMIT)
    if np.any(bad):
        total = total.copy()
        total[bad] = _jacobi_recurrence(n, a, b, flat[bad]) / _LD(math.exp(log_binomial(n + a, n)))
    out = _scaled(log_binomial(n + a, n), total, "jacobi").reshape(xa.shape)
    return _return(out, xa.ndim == 0)


def _jacobi_recurrence(n: int, a: float, b: float, x: np.ndarray) -> np.ndarray:
    """Forward three-term recurrence in the degree, in long double."""
    x = x.astype(_LD)
    a, b = _LD(a), _LD(b)
    prev = np.ones_like(x)
    if n == 0:
        return prev
    cur = (a + 1) + (a + b + 2) * (x - 1) / 2
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(2, n + 1):
            c = 2 * k + a + b
            lead = 2 * k * (k + a + b) * (c - 2)
            if lead == 0:
                raise EvaluationOverflow("jacobi recurrence hit a vanishing leading coefficient", k)
            prev, cur = cur, ((c - 1) * (c * (c - 2) * x + a * a - b * b) * cur - 2 * (k + a - 1) * (k + b - 1) * c * prev) / lead
            if not np.all(np.isfinite(cur)):
                raise EvaluationOverflow("jacobi recurrence overflowed", k)
    return cur


def jacobi_derivative(n: int, a: float, b: float, x, order: int = 1):
    """``d^k/dx^k P_n^{(a,b)}(x) = (n+a+b+1)_k / 2^k  P_{n-k}^{(a+k,b+k)}(x)``."""
    n = _check_degree(n)
    if order < 0:
        raise DomainError("derivative order must be nonnegative")
    xa = np.asarray(x, dtype=float)
    if order > n:
        out = np.zeros(xa.shape)
        return _return(out, xa.ndim == 0)
    scale = pochhammer(n + a + b + 1.0, order) / 2.0**order
    return scale * jacobi(n - order, a + order, b + order, x)


def _laguerre_recurrence(n: int, theta: float, x: np.ndarray) -> np.ndarray:
    x = x.astype(_LD)
    prev = np.ones_like(x)
    if n == 0:
        return prev
    cur = 1.0 + theta - x
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, n):
            prev, cur = cur, ((2 * k + 1 + theta - x) * cur - (k + theta) * prev) / (k + 1)
            if not np.all(np.isfinite(cur)):
                raise EvaluationOverflow("laguerre recurrence overflowed", k + 1)
    return cur


def laguerre(n: int, theta: float, x):
    """Generalized Laguerre polynomial ``L_n^{(theta)}(x)``.

    Summed from ``C(n+theta, n) M(-n, theta+1, x)``.  Where that sum cancels
    badly (large ``n x`` on the oscillatory part of the axis) the forward
    three-term recurrence, which is stable there, is used instead.
    """
    n = _check_degree(n)
    if not theta > -1.0:
        raise DomainError(f"laguerre requires theta > -1, got {theta}")
    xa = np.asarray(x, dtype=float)
    flat = np.atleast_1d(xa).astype(float)
    total, absum = _series(n, None, theta + 1.0, flat, "laguerre")
    out = _scaled(log_binomial(n + theta, n), total, "laguerre")
    with np.errstate(divide="ignore", invalid="ignore"):
        cancel = np.asarray(absum / np.abs(total), dtype=float)
    bad = ~(cancel <= _CANCELLATION_LIMIT)
    if np.any(bad):
        out = out.copy()
        out[bad] = np.asarray(_laguerre_recurrence(n, theta, flat[bad]), dtype=float)
    return _return(out.reshape(xa.shape), xa.ndim == 0)


def laguerre_derivative(n: int, theta: float, x, order: int = 1):
    """``d^k/dx^k L_n^{(theta)}(x) = (-1)^k L_{n-k}^{(theta+k)}(x)``."""
    n = _check_degree(n)
    xa = np.asarray(x, dtype=float)
    if order > n:
        return _return(np.zeros(xa.shape), xa.ndim == 0)
    return (-1.0) ** order * laguerre(n - order, theta + order, x)


def _check_bessel(nu: float, x) -> np.ndarray:
    if not 0.0 <= nu <= 200.0:
        raise DomainError(f"bessel_j order must lie in [0, 200], got {nu}")
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0) or np.any(xa > 1e4):
        raise DomainError("bessel_j argument must lie in [0, 1e4]")
    return xa


def bessel_j(nu: float, x):
    """Bessel function of the first kind ``J_nu(x)`` for real order.

    Backed by ``scipy.special.jv`` (AMOS/Cephes: power series for small
    arguments, recurrences and Hankel asymptotics elsewhere).
    """
    xa = _check_bessel(nu, x)
    out = special.jv(nu, xa)
    return float(out) if np.ndim(out) == 0 else out


def bessel_j_derivative(nu: float, x, order: int = 1):
    """``d^k/dx^k J_nu(x)`` via the standard difference formula."""
    xa = _check_bessel(nu, x)
    out = special.jvp(nu, xa, order)
    return float(out) if np.ndim(out) == 0 else out


def sphere_area(d: int) -> float:
    """Surface measure of the unit sphere ``S^{d-1}`` in ``R^d``."""
    if d < 1:
        raise DomainError("dimension must be positive")
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def harmonic_dimension(d: int, l: int) -> int:
    """Dimension ``d_l`` of the degree-``l`` spherical harmonics on ``S^{d-1}``."""
    if d < 2:
        raise DomainError("dimension must be at least 2")
    if l < 0:
        raise DomainError("degree must be nonnegative")
    if l == 0:
        return 1
    if d == 2:
        return 2
    return math.comb(l + d - 2, l) * (2 * l + d - 2) // (l + d - 2)


@dataclass(frozen=True, order=True)
class SphericalHarmonicIndex:
    """Label ``(l, m)`` of a real spherical harmonic on ``S^{d-1}``.

    ``m`` runs over ``1..d_l``.  For ``d = 2`` and ``l >= 1``, ``m = 1`` is the
    cosine and ``m = 2`` the sine mode.  For ``d = 3``, ``m`` maps to the
    azimuthal order ``mu = m - l - 1`` in ``[-l, l]`` (negative orders are
    sines).  For ``d >= 4`` only ``m = 1`` (zonal) is implemented.
    """

    l: int
    m: int
    d: int = field(default=3, compare=True)

    def __post_init__(self):
        if self.d < 2:
            raise DomainError(f"dimension must be >= 2, got {self.d}")
        if self.l < 0 or int(self.l) != self.l:
            raise DomainError(f"degree must be a nonnegative integer, got {self.l}")
        dl = harmonic_dimension(self.d, self.l)
        if not 1 <= self.m <= dl:
            raise DomainError(f"index m={self.m} outside [1, {dl}] for l={self.l}, d={self.d}")
        if self.d >= 4 and self.m != 1:
            raise UnsupportedError(f"only zonal harmonics (m=1) are available for d={self.d}")

    @property
    def eigenvalue(self) -> int:
        """``l (l + d - 2)``, minus the spherical Laplacian eigenvalue."""
        return self.l * (self.l + self.d - 2)


def harmonic_indices(d: int, l: int) -> list[SphericalHarmonicIndex]:
    """All implemented harmonic indices of degree ``l`` in dimension ``d``."""
    count = harmonic_dimension(d, l) if d <= 3 else 1
    return [SphericalHarmonicIndex(l, m, d) for m in range(1, count + 1)]


def _normalized_legendre(l: int, mu: int, x: np.ndarray) -> np.ndarray:
    """Associated Legendre function scaled so ``2 pi int P^2 dx = 1``."""
    s = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    p = np.full_like(x, 1.0 / math.sqrt(4.0 * math.pi))
    for k in range(1, mu + 1):
        p = math.sqrt((2 * k + 1) / (2 * k)) * s * p
    if l == mu:
        return p
    prev, cur = p, math.sqrt(2 * mu + 3) * x * p
    for ll in range(mu + 2, l + 1):
        a = math.sqrt((4 * ll * ll - 1) / (ll * ll - mu * mu))
        b = math.sqrt(((ll - 1) ** 2 - mu * mu) / (4 * (ll - 1) ** 2 - 1))
        prev, cur = cur, a * (x * cur - b * prev)
    return cur


def _zonal_norm(d: int, l: int) -> float:
    lam = d / 2.0 - 1.0
    log_h = (
        math.log(math.pi)
        + (1.0 - 2.0 * lam) * math.log(2.0)
        + math.lgamma(l + 2.0 * lam)
        - math.lgamma(l + 1.0)
        - math.log(l + lam)
        - 2.0 * math.lgamma(lam)
    )
    return math.exp(-0.5 * (log_h + math.log(sphere_area(d - 1))))


def spherical_harmonic(idx: SphericalHarmonicIndex, omega) -> np.ndarray:
    """Evaluate the real orthonormal harmonic ``Y_lm`` at unit vectors.

    Parameters
    ----------
    idx : SphericalHarmonicIndex
    omega : array_like, shape (..., d)
        Unit vectors.  They are not renormalized.

    Returns
    -------
    ndarray, shape (...)
    """
    w = np.asarray(omega, dtype=float)
    if w.shape[-1] != idx.d:
        raise DomainError(f"points have dimension {w.shape[-1]}, harmonic expects {idx.d}")
    l, m, d = idx.l, idx.m, idx.d
    if d == 2:
        theta = np.arctan2(w[..., 1], w[..., 0])
        if l == 0:
            return np.full(theta.shape, 1.0 / math.sqrt(2.0 * math.pi))
        trig = np.cos if m == 1 else np.sin
        return trig(l * theta) / math.sqrt(math.pi)
    if d == 3:
        mu = m - l - 1
        x = np.clip(w[..., 2], -1.0, 1.0)
        p = _normalized_legendre(l, abs(mu), x)
        if mu == 0:
            return p
        phi = np.arctan2(w[..., 1], w[..., 0])
        trig = np.cos if mu > 0 else np.sin
        return math.sqrt(2.0) * p * trig(abs(mu) * phi)
    lam = d / 2.0 - 1.0
    x = np.clip(w[..., -1], -1.0, 1.0)
    return _zonal_norm(d, l) * special.eval_gegenbauer(l, lam, x)


def spherical_harmonic_gradient(idx: SphericalHarmonicIndex, omega, step: float = 1e-5) -> np.ndarray:
    """Tangential gradient of ``Y_lm`` on the unit sphere.

    Computed by central finite differences of the degree-0 homogeneous
    extension ``Y(x/|x|)`` along the Cartesian axes.
    """
    w = np.asarray(omega, dtype=float)
    grad = np.empty(w.shape)
    for j in range(idx.d):
        e = np.zeros(idx.d)
        e[j] = step
        plus = w + e
        minus = w - e
        plus /= np.linalg.norm(plus, axis=-1, keepdims=True)
        minus /= np.linalg.norm(minus, axis=-1, keepdims=True)
        grad[..., j] = (spherical_harmonic(idx, plus) - spherical_harmonic(idx, minus)) / (2 * step)
    return grad


@dataclass(frozen=True)
class SphereQuadrature:
    """Quadrature rule on ``S^{d-1}``.

    Attributes
    ----------
    d : int
    degree : int
        Harmonics up to this degree integrate exactly.
    nodes : ndarray, shape (N, d)
    weights : ndarray, shape (N,)
        Positive, summing to the sphere's surface area.
    zonal_only : bool
        True when the rule only integrates functions of the last coordinate.
    """

    d: int
    degree: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    zonal_only: bool = False

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def integrate(self, values) -> np.ndarray:
        """Apply the rule along the last axis of ``values``."""
        return np.asarray(values) @ self.weights


def build_sphere_quadrature(d: int, L_max: int) -> SphereQuadrature:
    """Product quadrature on ``S^{d-1}`` exact for harmonics up to ``L_max``.

    * ``d = 2``: trapezoid rule with ``2 L_max + 2`` equispaced nodes.
    * ``d = 3``: Gauss-Legendre in ``cos(theta)`` times an equispaced
      azimuthal rule (``L_max + 1`` by ``2 L_max + 2`` nodes).
    * ``d >= 4``: Gauss-Gegenbauer in the last coordinate; exact for zonal
      functions only.
    """
    if L_max < 0:
        raise DomainError("L_max must be nonnegative")
    if d < 2:
        raise DomainError("dimension must be at least 2")
    n_phi = 2 * L_max + 2
    if d == 2:
        phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
        nodes = np.column_stack([np.cos(phi), np.sin(phi)])
        weights = np.full(n_phi, 2.0 * math.pi / n_phi)
        return SphereQuadrature(2, L_max, nodes, weights)
    if d == 3:
        x, wx = special.roots_legendre(L_max + 1)
        phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
        X, P = np.meshgrid(x, phi, indexing="ij")
        s = np.sqrt(1.0 - X * X)
        nodes = np.stack([s * np.cos(P), s * np.sin(P), X], axis=-1).reshape(-1, 3)
        weights = np.outer(wx, np.full(n_phi, 2.0 * math.pi / n_phi)).ravel()
        return SphereQuadrature(3, L_max, nodes, weights)
    t, wt = special.roots_gegenbauer(L_max + 1, d / 2.0 - 1.0)
    nodes = np.zeros((t.size, d))
    nodes[:, 0] = np.sqrt(1.0 - t * t)
    nodes[:, -1] = t
    weights = wt * sphere_area(d - 1)
    return SphereQuadrature(d, L_max, nodes, weights, zonal_only=True)
