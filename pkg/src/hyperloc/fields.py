"""Separable fields ``sum_j c_j g_j(|x|) Y_j(x/|x|)`` and ball grids.

Both the Bessel-mode expansions and the synthesized eigenfunctions are sums of
radial profiles times spherical harmonics.  :class:`ModeField` evaluates such
sums and their gradients, exploiting separability on :class:`BallGrid`
product grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import GridError
from .geometry import RadialGrid
from .specfun import (
    SphereQuadrature,
    SphericalHarmonicIndex,
    build_sphere_quadrature,
    spherical_harmonic,
    spherical_harmonic_gradient,
)

__all__ = ["ModeTerm", "ModeField", "BallGrid", "split_points", "fd_gradient"]


@dataclass(frozen=True)
class ModeTerm:
    """One summand ``coefficient * radial(|x|) * Y_index(x/|x|)``.

    ``radial`` must provide ``derivatives(s) -> (g, g', g'')`` in the
    Euclidean radius ``s`` of the evaluation point.
    """

    coefficient: float
    index: SphericalHarmonicIndex
    radial: object


def split_points(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split Cartesian points into radii and unit directions.

    The origin is assigned the last coordinate axis as its direction.
    """
    X = np.asarray(X, dtype=float)
    s = np.linalg.norm(X, axis=-1)
    safe = np.where(s > 0, s, 1.0)
    omega = X / safe[..., None]
    if np.any(s == 0):
        axis = np.zeros(X.shape[-1])
        axis[-1] = 1.0
        omega = np.where((s > 0)[..., None], omega, axis)
    return s, omega


def fd_gradient(func, X: np.ndarray, step: float = 1e-4) -> np.ndarray:
    """Fourth-order central-difference gradient of a point-evaluable function."""
    X = np.asarray(X, dtype=float)
    grad = np.empty(X.shape)
    for j in range(X.shape[-1]):
        e = np.zeros(X.shape[-1])
        e[j] = step
        grad[..., j] = (8.0 * (func(X + e) - func(X - e)) - (func(X + 2 * e) - func(X - 2 * e))) / (12.0 * step)
    return grad


class ModeField:
    """Finite sum of separable modes in ``R^d``.

    Parameters
    ----------
    d : int
    terms : sequence of ModeTerm
    """

    def __init__(self, d: int, terms: Sequence[ModeTerm] = ()):
        self.d = int(d)
        self.terms = tuple(terms)
        for t in self.terms:
            if t.index.d != self.d:
                raise GridError("mode dimension does not match the field")

    def __len__(self) -> int:
        return len(self.terms)

    def _radial(self, term: ModeTerm, s: np.ndarray):
        g, g1, _ = term.radial.derivatives(s)
        return np.asarray(g, dtype=float), np.asarray(g1, dtype=float)

    def value(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        s, omega = split_points(X)
        out = np.zeros(s.shape)
        for t in self.terms:
            g, _ = self._radial(t, s.ravel())
            out += t.coefficient * g.reshape(s.shape) * spherical_harmonic(t.index, omega)
        return out

    __call__ = value

    def gradient(self, X) -> np.ndarray:
        """Cartesian gradient: ``g' Y omega + (g / s) grad_S Y``."""
        X = np.asarray(X, dtype=float)
        s, omega = split_points(X)
        out = np.zeros(X.shape)
        safe = np.where(s > 0, s, 1.0)
        for t in self.terms:
            g, g1 = (v.reshape(s.shape) for v in self._radial(t, s.ravel()))
            Y = spherical_harmonic(t.index, omega)
            gY = spherical_harmonic_gradient(t.index, omega)
            out += t.coefficient * ((g1 * Y)[..., None] * omega + (g / safe)[..., None] * gY)
        return out

    def term_on_grid(self, term: ModeTerm, grid: "BallGrid", gradient: bool = True):
        """Values (and gradients) of one term on a product grid."""
        s = grid.radii
        g, g1 = self._radial(term, s)
        Y = grid.harmonic(term.index)
        val = term.coefficient * np.outer(g, Y)
        if not gradient:
            return val, None
        gY = grid.harmonic_gradient(term.index)
        omega = grid.directions
        grad = term.coefficient * (
            (g1[:, None] * Y[None, :])[..., None] * omega[None, :, :] + (g / s)[:, None, None] * gY[None, :, :]
        )
        return val, grad

    def on_grid(self, grid: "BallGrid", gradient: bool = True):
        """Values of shape ``(n_r, n_omega)`` and gradients ``(n_r, n_omega, d)``."""
        val = np.zeros((grid.radii.size, grid.directions.shape[0]))
        grad = np.zeros(val.shape + (self.d,)) if gradient else None
        for t in self.terms:
            v, g = self.term_on_grid(t, grid, gradient)
            val += v
            if gradient:
                grad += g
        return val, grad


@dataclass(frozen=True)
class BallGrid:
    """Product grid: Chebyshev radial nodes times sphere quadrature nodes.

    Parameters
    ----------
    d : int
    r_max : float
        Outer radius of the ball (or annulus).
    r_min : float
        Inner radius; zero for a full ball (the origin itself is omitted).
    n_radial : int
        Number of Chebyshev-Lobatto radial nodes.
    sphere_degree : int
        Exactness degree of the angular quadrature.
    """

    d: int
    r_max: float
    r_min: float = 0.0
    n_radial: int = 64
    sphere_degree: int = 16
    quadrature: SphereQuadrature = field(init=False, repr=False, compare=False)
    radii: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0.0 <= self.r_min < self.r_max:
            raise GridError(f"need 0 <= r_min < r_max, got r_min={self.r_min}, r_max={self.r_max}")
        if self.n_radial < 2:
            raise GridError("need at least two radial nodes")
        quad = build_sphere_quadrature(self.d, self.sphere_degree)
        radii = RadialGrid.chebyshev(self.r_min, self.r_max, self.n_radial).nodes
        object.__setattr__(self, "quadrature", quad)
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "_cache", {})

    @property
    def directions(self) -> np.ndarray:
        return self.quadrature.nodes

    @property
    def points(self) -> np.ndarray:
        """All grid points, shape ``(n_r * n_omega, d)``, radius-major."""
        return (self.radii[:, None, None] * self.directions[None, :, :]).reshape(-1, self.d)

    @property
    def shape(self) -> tuple[int, int]:
        return self.radii.size, self.directions.shape[0]

    def harmonic(self, idx: SphericalHarmonicIndex) -> np.ndarray:
        key = ("Y", idx)
        if key not in self._cache:
            self._cache[key] = spherical_harmonic(idx, self.directions)
        return self._cache[key]

    def harmonic_gradient(self, idx: SphericalHarmonicIndex) -> np.ndarray:
        key = ("dY", idx)
        if key not in self._cache:
            self._cache[key] = spherical_harmonic_gradient(idx, self.directions)
        return self._cache[key]

    def describe(self) -> dict:
        return {
            "d": self.d,
            "r_min": self.r_min,
            "r_max": self.r_max,
            "n_radial": self.n_radial,
            "sphere_degree": self.sphere_degree,
            "n_points": int(math.prod(self.shape)),
        }
