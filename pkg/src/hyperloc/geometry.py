"""Hyperbolic space ``H^d(kappa)`` in geodesic polar and ``r`` coordinates.

Two radial charts are used and conversions are always explicit:

* ``rho``: geodesic distance from the base point.
* ``r = sinh(kappa rho) / kappa``: the chart in which the Coulomb and
  harmonic eigenfunctions are polynomial-like.

In the ``r`` chart the Laplace-Beltrami operator reads

    (1 + k^2 r^2) f'' + ((d - 1 + d k^2 r^2) / r) f' + r^{-2} Delta_S f.

``kappa = 0`` is Euclidean space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, GridError

__all__ = [
    "Space",
    "rho_to_r",
    "r_to_rho",
    "dr_drho",
    "volume_weight",
    "spectral_shift",
    "geodesic_distance",
    "RadialGrid",
    "ResidualProfile",
    "radial_schrodinger_residual",
    "fd_derivatives",
]

_SERIES_CUTOFF = 1e-6


@dataclass(frozen=True)
class Space:
    """Hyperbolic space of dimension ``d`` and sectional curvature ``-kappa**2``.

    Parameters
    ----------
    d : int
        Dimension, at least 2.
    kappa : float
        Nonnegative curvature parameter; ``0`` gives Euclidean space.
    """

    d: int
    kappa: float = 0.0

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise DomainError(f"dimension must be an integer >= 2, got {self.d!r}")
        if not (self.kappa >= 0.0 and math.isfinite(self.kappa)):
            raise DomainError(f"kappa must be finite and >= 0, got {self.kappa!r}")

    @property
    def is_euclidean(self) -> bool:
        return self.kappa == 0.0


def _check_nonneg(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        raise DomainError(f"{name} must be nonnegative")
    return arr


def _out(arr: np.ndarray, like):
    return float(arr) if np.ndim(like) == 0 else arr


def rho_to_r(space: Space, rho):
    """Map geodesic distance to ``r = sinh(kappa rho) / kappa``."""
    rho_a = _check_nonneg(rho, "rho")
    k = space.kappa
    if k == 0.0:
        return _out(rho_a.copy(), rho)
    x = k * rho_a
    small = x < _SERIES_CUTOFF
    with np.errstate(over="ignore"):
        out = np.where(small, rho_a * (1.0 + x * x / 6.0), np.sinh(x) / k)
    return _out(out, rho)


def r_to_rho(space: Space, r):
    """Inverse of :func:`rho_to_r`: ``rho = asinh(kappa r) / kappa``."""
    r_a = _check_nonneg(r, "r")
    k = space.kappa
    if k == 0.0:
        return _out(r_a.copy(), r)
    x = k * r_a
    small = x < _SERIES_CUTOFF
    out = np.where(small, r_a * (1.0 - x * x / 6.0), np.arcsinh(x) / k)
    return _out(out, r)


def dr_drho(space: Space, rho):
    """Jacobian ``dr/drho = cosh(kappa rho)``."""
    rho_a = np.asarray(rho, dtype=float)
    return _out(np.cosh(space.kappa * rho_a), rho)


def volume_weight(space: Space, rho):
    """Radial density of the volume form: ``dVol = weight(rho) drho dsigma``.

    Equal to ``(sinh(kappa rho) / kappa)**(d - 1)``.
    """
    r = np.asarray(rho_to_r(space, rho), dtype=float)
    return _out(r ** (space.d - 1), rho)


def spectral_shift(space: Space) -> float:
    """Bottom ``((d - 1) kappa / 2)**2`` of the continuous spectrum of ``-Delta``."""
    return ((space.d - 1) * space.kappa / 2.0) ** 2


def geodesic_distance(space: Space, rho1, rho2, cos_gamma):
    """Distance between points at radii ``rho1``, ``rho2`` with angle ``gamma``.

    Uses the hyperbolic law of cosines
    ``cosh(k D) = cosh(k r1) cosh(k r2) - sinh(k r1) sinh(k r2) cos(gamma)``,
    rewritten in a cancellation-free form for small separations.
    """
    r1 = np.asarray(rho1, dtype=float)
    r2 = np.asarray(rho2, dtype=float)
    c = np.asarray(cos_gamma, dtype=float)
    k = space.kappa
    if k == 0.0:
        return np.sqrt(np.maximum((r1 - r2) ** 2 + 2.0 * r1 * r2 * (1.0 - c), 0.0))
    # cosh(kD) - 1 = cosh(k(r1-r2)) - 1 + sinh(kr1) sinh(kr2) (1 - cos gamma)
    half = np.sinh(k * (r1 - r2) / 2.0)
    excess = 2.0 * half * half + np.sinh(k * r1) * np.sinh(k * r2) * (1.0 - c)
    excess = np.maximum(excess, 0.0)
    # acosh(1 + e) = 2 asinh(sqrt(e / 2))
    return 2.0 * np.arcsinh(np.sqrt(excess / 2.0)) / k


@dataclass(frozen=True)
class RadialGrid:
    """Strictly increasing positive radial nodes in a named chart.

    Parameters
    ----------
    nodes : array_like
        Radial nodes, all positive.
    coordinate : {"r", "rho"}
        Chart in which the nodes are expressed.
    """

    nodes: np.ndarray = field(repr=False)
    coordinate: str = "r"

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if self.coordinate not in ("r", "rho"):
            raise GridError(f"unknown radial coordinate {self.coordinate!r}")
        if nodes.ndim != 1 or nodes.size < 1:
            raise GridError("grid nodes must be a nonempty 1-D array")
        if nodes[0] <= 0:
            raise GridError("first grid node must be positive; the origin is handled by limits")
        if np.any(np.diff(nodes) <= 0):
            raise GridError("grid nodes must be strictly increasing")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)

    @classmethod
    def uniform(cls, start: float, stop: float, num: int, coordinate: str = "r") -> "RadialGrid":
        return cls(np.linspace(start, stop, num), coordinate)

    @classmethod
    def chebyshev(cls, start: float, stop: float, num: int, coordinate: str = "r") -> "RadialGrid":
        """Chebyshev-Lobatto nodes on ``[start, stop]``; a zero endpoint is dropped."""
        theta = np.linspace(math.pi, 0.0, num)
        nodes = start + (stop - start) * (1.0 + np.cos(theta)) / 2.0
        return cls(nodes[nodes > 0], coordinate)

    @property
    def spacing(self) -> float | None:
        """Common spacing when the grid is uniform, else ``None``."""
        if self.nodes.size < 2:
            return None
        h = np.diff(self.nodes)
        if np.allclose(h, h[0], rtol=1e-9, atol=0.0):
            return float(h[0])
        return None

    def __len__(self) -> int:
        return self.nodes.size


# 4th-order stencils: central, and one-sided for the two nodes at each end.
_D1_CENTRAL = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D2_CENTRAL = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
_D1_FORWARD = {
    0: np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0,
    1: np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0,
}
_D2_FORWARD = {
    0: np.array([45.0, -154.0, 214.0, -156.0, 61.0, -10.0]) / 12.0,
    1: np.array([10.0, -15.0, -4.0, 14.0, -6.0, 1.0]) / 12.0,
}


def fd_derivatives(values, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Fourth-order finite-difference first and second derivatives.

    Central stencils in the interior, one-sided stencils on the two nodes at
    each boundary.

    Parameters
    ----------
    values : array_like
        Samples on a uniform grid with at least 6 nodes.
    h : float
        Grid spacing.
    """
    f = np.asarray(values, dtype=float)
    n = f.size
    if n < 6:
        raise GridError("grid too coarse for 4th-order differences: need at least 6 nodes")
    d1 = np.empty(n)
    d2 = np.empty(n)
    d1[2:-2] = np.convolve(f, _D1_CENTRAL[::-1], mode="valid") / h
    d2[2:-2] = np.convolve(f, _D2_CENTRAL[::-1], mode="valid") / h**2
    for i in (0, 1):
        d1[i] = _D1_FORWARD[i] @ f[:5] / h
        d2[i] = _D2_FORWARD[i] @ f[:6] / h**2
        d1[n - 1 - i] = -(_D1_FORWARD[i] @ f[::-1][:5]) / h
        d2[n - 1 - i] = _D2_FORWARD[i] @ f[::-1][:6] / h**2
    return d1, d2


@dataclass(frozen=True)
class ResidualProfile:
    """Pointwise residual of the radial Schrodinger equation.

    Attributes
    ----------
    nodes : ndarray
        Grid nodes in the ``r`` chart.
    residual : ndarray
        Raw residual values.
    scale : ndarray
        Local magnitude ``max(|f|, |f'|, |f''|)``.
    """

    nodes: np.ndarray = field(repr=False)
    residual: np.ndarray = field(repr=False)
    scale: np.ndarray = field(repr=False)

    @property
    def relative(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(self.scale > 0, np.abs(self.residual) / self.scale, 0.0)

    @property
    def max_relative(self) -> float:
        return float(np.max(self.relative)) if self.relative.size else 0.0


def radial_schrodinger_residual(
    space: Space,
    l: int,
    V: Callable[[np.ndarray], np.ndarray] | None,
    lam: float,
    f,
    grid: RadialGrid,
) -> ResidualProfile:
    """Residual of ``Delta f + (lam - V) f = 0`` on a single harmonic sector.

    Parameters
    ----------
    space : Space
    l : int
        Harmonic degree; the angular Laplacian is replaced by ``-l(l+d-2)``.
    V : callable or None
        Potential ``r -> alpha V(r)`` (``None`` means ``V = 0``).
    lam : float
        Eigenvalue.
    f : object or callable
        Either an object with a ``derivatives(r)`` method returning
        ``(f, f', f'')``, or a plain callable ``f(r)``.  In the second case
        derivatives come from 4th-order differences on ``grid``, which must
        then be uniform.
    grid : RadialGrid
        Nodes in the ``r`` chart.

    Returns
    -------
    ResidualProfile
    """
    if grid.coordinate != "r":
        raise GridError("the radial Schrodinger residual is evaluated in the r chart")
    r = grid.nodes
    if hasattr(f, "derivatives"):
        f0, f1, f2 = (np.asarray(v, dtype=float) for v in f.derivatives(r))
    else:
        h = grid.spacing
        if h is None:
            raise GridError("finite-difference residuals need a uniform grid")
        f0 = np.asarray(f(r), dtype=float)
        f1, f2 = fd_derivatives(f0, h)
    k2 = space.kappa**2
    d = space.d
    pot = np.zeros_like(r) if V is None else np.asarray(V(r), dtype=float)
    res = (1.0 + k2 * r * r) * f2 + ((d - 1 + d * k2 * r * r) / r) * f1 - (l * (l + d - 2) / (r * r)) * f0 + (lam - pot) * f0
    scale = np.maximum(np.maximum(np.abs(f0), np.abs(f1)), np.abs(f2))
    return ResidualProfile(r, res, scale)
