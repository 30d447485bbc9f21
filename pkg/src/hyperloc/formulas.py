"""Formula ledger: every implemented formula, its function and its oracle.

:data:`OPERATIONS` lists the computational operations of the package
(plumbing such as CLI, I/O and fixtures is excluded).  :data:`FORMULAS`
must cover all of them; the test suite checks completeness and that
``docs/formulas.md`` matches :func:`render_markdown`.
"""

from __future__ import annotations

import importlib
from dataclasses import dataclass

__all__ = ["Formula", "FORMULAS", "OPERATIONS", "resolve", "missing_operations", "render_markdown"]


@dataclass(frozen=True)
class Formula:
    key: str
    operation: str
    formula: str
    oracle: str


OPERATIONS = (
    "hyperloc.specfun.jacobi",
    "hyperloc.specfun.jacobi_derivative",
    "hyperloc.specfun.laguerre",
    "hyperloc.specfun.laguerre_derivative",
    "hyperloc.specfun.bessel_j",
    "hyperloc.specfun.spherical_harmonic",
    "hyperloc.specfun.build_sphere_quadrature",
    "hyperloc.geometry.rho_to_r",
    "hyperloc.geometry.volume_weight",
    "hyperloc.geometry.spectral_shift",
    "hyperloc.geometry.geodesic_distance",
    "hyperloc.geometry.radial_schrodinger_residual",
    "hyperloc.spectra.potential",
    "hyperloc.spectra.admissible",
    "hyperloc.spectra.level_eigenvalue",
    "hyperloc.spectra.eigenvalue",
    "hyperloc.spectra.radial_eigenfunction",
    "hyperloc.spectra.amplitude_constant",
    "hyperloc.spectra.amplitude_estimate",
    "hyperloc.spectra.multiplicity",
    "hyperloc.helmholtz.bessel_profile",
    "hyperloc.helmholtz.expand",
    "hyperloc.helmholtz.hyperbolic_radial_helmholtz",
    "hyperloc.helmholtz.agmon_hormander_quotient",
    "hyperloc.localization.kappa_bound",
    "hyperloc.localization.auto_kappa",
    "hyperloc.localization.plan",
    "hyperloc.localization.synthesize",
    "hyperloc.localization.localization_error",
    "hyperloc.localization.convergence_study",
    "hyperloc.heatkernel.kernel",
    "hyperloc.heatkernel.kernel_bound",
    "hyperloc.heatkernel.recurrence_up_check",
    "hyperloc.heatkernel.descent_check",
    "hyperloc.heatkernel.total_mass",
    "hyperloc.heatkernel.decay_rate",
    "hyperloc.heatkernel.propagate_radial",
)

FORMULAS = (
    Formula("jacobi", "hyperloc.specfun.jacobi",
            "P_n^(a,b)(x) = C(n+a, n) 2F1(-n, n+a+b+1; a+1; (1-x)/2); three-term recurrence where the sum cancels",
            "mpmath jacobi; exact rational recurrence"),
    Formula("jacobi-derivative", "hyperloc.specfun.jacobi_derivative",
            "d^k/dx^k P_n^(a,b) = (n+a+b+1)_k / 2^k P_{n-k}^(a+k,b+k)", "central differences"),
    Formula("laguerre", "hyperloc.specfun.laguerre",
            "L_n^(t)(x) = sum_j (-1)^j C(n+t, n-j) x^j / j!; recurrence where the sum cancels", "mpmath laguerre"),
    Formula("laguerre-derivative", "hyperloc.specfun.laguerre_derivative",
            "d^k/dx^k L_n^(t) = (-1)^k L_{n-k}^(t+k)", "central differences"),
    Formula("bessel", "hyperloc.specfun.bessel_j", "J_nu(x) (scipy)", "integral representation by quadrature"),
    Formula("harmonics", "hyperloc.specfun.spherical_harmonic",
            "real orthonormal Y_lm on S^{d-1}; zonal Gegenbauer harmonics for d >= 4", "Gram matrix under sphere quadrature"),
    Formula("sphere-quadrature", "hyperloc.specfun.build_sphere_quadrature",
            "trapezoid (d=2), Gauss-Legendre x trapezoid (d=3), Gauss-Gegenbauer in the polar angle (d>=4)",
            "exact integration of harmonic products"),
    Formula("chart", "hyperloc.geometry.rho_to_r", "r = sinh(k rho)/k", "round trip with asinh"),
    Formula("volume", "hyperloc.geometry.volume_weight", "dVol = (sinh(k rho)/k)^{d-1} drho dsigma", "Euclidean limit; heat-kernel mass"),
    Formula("shift", "hyperloc.geometry.spectral_shift", "((d-1) k / 2)^2", "radial residual of bound states"),
    Formula("distance", "hyperloc.geometry.geodesic_distance",
            "cosh(k D) = cosh(k r1) cosh(k r2) - sinh(k r1) sinh(k r2) cos(gamma)", "direct law of cosines"),
    Formula("laplacian", "hyperloc.geometry.radial_schrodinger_residual",
            "(1+k^2 r^2) f'' + ((d-1+d k^2 r^2)/r) f' - l(l+d-2) f/r^2 + (lam - V) f", "sin(r)/r in R^3; bound states"),
    Formula("potentials", "hyperloc.spectra.potential",
            "V_C = -alpha sqrt(k^2 + r^{-2}); V_H = alpha r^2/(1 + k^2 r^2)", "Euclidean limit"),
    Formula("admissible", "hyperloc.spectra.admissible",
            "Coulomb n+l < sqrt(alpha/(2k)) - (d-1)/2; harmonic 2n+l < beta/k^2 - (d-1)/2", "decay of the closed forms"),
    Formula("level-eigenvalue", "hyperloc.spectra.level_eigenvalue",
            "harmonic beta(2N+d) - k^2 (N+(d-1)/2)^2 + shift; Coulomb -alpha^2/(4N'^2) - k^2 N'^2 + shift, N' = N+(d-1)/2",
            "radial residual; degeneracy"),
    Formula("eigenvalue", "hyperloc.spectra.eigenvalue", "level_eigenvalue(N(n, l))", "bit-identical within a level"),
    Formula("eigenfunctions", "hyperloc.spectra.radial_eigenfunction",
            "harmonic r^l (1+k^2r^2)^{c/2} P_n^(a,b)(1+2k^2r^2); Coulomb r^l u^c P_n^(a,b)(2u^2-1), u = sqrt(1+k^2r^2)+kr",
            "radial residual; Euclidean limit"),
    Formula("amplitude", "hyperloc.spectra.amplitude_constant",
            "harmonic (sqrt(lam)/2)^{-l} Gamma(n+l+d/2) 2^{d/2-1}/n!; Coulomb (n+2l+d-2)!/(n! alpha^{l-1+d/2})",
            "leading coefficient at the origin"),
    Formula("amplitude-estimate", "hyperloc.spectra.amplitude_estimate",
            "harmonic alpha^{-l/4} 2^{d/2-1} n^{l/2+d/2-1}; Coulomb n^{2l+d-2}/alpha^{l+d/2-1}", "ratio to the exact constant tends to 1"),
    Formula("multiplicity", "hyperloc.spectra.multiplicity",
            "sum of harmonic dimensions over the (n, l) of a level", "enumeration"),
    Formula("bessel-profile", "hyperloc.helmholtz.bessel_profile",
            "J_{l+d/2-1}(r) r^{1-d/2}; J_{2l+d-2}(sqrt(4 alpha r)) r^{1-d/2}", "radial residual"),
    Formula("expansion", "hyperloc.helmholtz.expand",
            "c_lm = least-squares fit of the sphere projections across probe radii",
            "plane wave c_lm = (2 pi)^{d/2} i^l Y_lm(e)"),
    Formula("radial-helmholtz", "hyperloc.helmholtz.hyperbolic_radial_helmholtz",
            "w'' + (d-1) k coth(k rho) w' - k^2 l(l+d-2) w/sinh^2(k rho) + lam w = 0", "ODE residual; envelope exp(-(d-1) k rho/2)"),
    Formula("averaged-decay", "hyperloc.helmholtz.agmon_hormander_quotient",
            "(1/R) int_{B_R} |v|^2 dVol", "constant field diverges"),
    Formula("kappa-bound", "hyperloc.localization.kappa_bound",
            "harmonic k^2 < beta/(2 nhat + l0 + (d-1)/2); Coulomb k < (alpha/2)(nhat + (d-1)/2)^{-2}", "admissibility of all modes"),
    Formula("auto-kappa", "hyperloc.localization.auto_kappa",
            "harmonic k^2 = min(bound/2, nhat^{-(d+1)/4}/10); Coulomb k = min(bound/2, nhat^{-5/4}/10)", "bound respected"),
    Formula("plan", "hyperloc.localization.plan",
            "n_l = nhat - l/2 (even), nhat - (l+1)/2 (odd), nhat - l (Coulomb); common lam", "shared eigenvalue"),
    Formula("synthesis", "hyperloc.localization.synthesize", "psi = sum c_lm A^{-1} psi_{n_l l m}", "mode-wise residual"),
    Formula("localization-error", "hyperloc.localization.localization_error",
            "sup |psi(exp(x/sqrt(lam))) - v(x)| (harmonic); sup |psi(exp(x)) - v(x)| (Coulomb)", "triangle inequality"),
    Formula("rate", "hyperloc.localization.convergence_study", "slope of log error vs log nhat", "O(nhat^{-(d+1)/4})"),
    Formula("heat-kernel", "hyperloc.heatkernel.kernel",
            "odd d: ((-1)^m/(2^m pi^m sqrt(4 pi t))) ((k/sinh k rho) d/drho)^m e^{-k^2 m^2 t - rho^2/4t}; "
            "even d: integral over s > rho of s e^{-s^2/4t}/sqrt(cosh ks - cosh k rho)",
            "unit mass; Euclidean limit; recurrences"),
    Formula("heat-bound", "hyperloc.heatkernel.kernel_bound",
            "c e^{-k^2(d-1)^2 t/4 - (d-1) k rho/2 - rho^2/4t} (1+k rho+k^2 t)^{(d-3)/2} (1+k rho)/(4 pi t)^{d/2}", "grid sweep"),
    Formula("heat-up", "hyperloc.heatkernel.recurrence_up_check",
            "H_{d+2} = -(e^{-d k^2 t} k/(2 pi sinh k rho)) dH_d/drho", "independent closed forms"),
    Formula("heat-descent", "hyperloc.heatkernel.descent_check",
            "H_d = int_rho^inf e^{(2d-1) t k^2/4} H_{d+1} sinh(k mu) sqrt(2) dmu / sqrt(cosh k mu - cosh k rho)", "independent closed forms"),
    Formula("heat-mass", "hyperloc.heatkernel.total_mass", "int_0^inf H |S^{d-1}| (sinh k rho/k)^{d-1} drho = 1", "t-independence"),
    Formula("heat-decay", "hyperloc.heatkernel.decay_rate", "t^{3/2} H(t, rho) ~ e^{-k^2 (d-1)^2 t/4}", "fitted slope"),
    Formula("propagator", "hyperloc.heatkernel.propagate_radial",
            "w(t, x) = C_d int H(t, dist(x, y)) v0(y) dVol(y)", "reduced d=3 integral; semigroup; heat residual"),
)


def resolve(dotted: str):
    module, _, name = dotted.rpartition(".")
    return getattr(importlib.import_module(module), name)


def missing_operations() -> list[str]:
    covered = {f.operation for f in FORMULAS}
    return [op for op in OPERATIONS if op not in covered]


def render_markdown() -> str:
    lines = [
        "# Formula ledger",
        "",
        "Generated from `hyperloc.formulas`; regenerate with",
        "`python3 -c \"from hyperloc.formulas import render_markdown; print(render_markdown(), end='')\" > docs/formulas.md`.",
        "",
        "| Key | Function | Formula | Oracle |",
        "| --- | --- | --- | --- |",
    ]
    for f in FORMULAS:
        cells = [f.key, f"`{f.operation}`", f.formula.replace("|", "\\|"), f.oracle.replace("|", "\\|")]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"
