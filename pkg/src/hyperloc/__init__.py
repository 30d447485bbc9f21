"""Inverse localization on hyperbolic space: exact Coulomb and harmonic
oscillator eigenfunctions, Bessel-mode expansions and hyperbolic heat kernels."""

__version__ = "0.1.0"
