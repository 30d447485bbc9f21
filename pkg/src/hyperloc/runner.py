"""Config-driven commands returning their output files as text.

Every command takes a validated JSON config (see :mod:`hyperloc.io`) and
returns ``{name: text}`` for the files it produces, so the CLI only writes
them and the golden-file regression only compares them.

Target presets
--------------
``{"preset": "plane_wave_cos", "direction": [...]}``
    ``cos(x . e)`` with ``|e| = 1`` (even; Helmholtz family only).
``{"preset": "plane_wave_sin", "direction": [...]}``
    ``sin(x . e)`` (odd; Helmholtz family only).
``{"preset": "modes", "modes": [{"l": .., "m": .., "c": ..}, ...]}``
    A finite Bessel-mode sum of either family.
"""

from __future__ import annotations

import json
import math
from typing import Any, Callable

import numpy as np

from .errors import ValidationError
from .geometry import Space
from .heatkernel import SUPPORTED_DIMENSIONS, bump, descent_check, kernel, kernel_bound, propagate_radial, recurrence_up_check
from .helmholtz import HelmholtzExpansion, Mode, fit_modes
from .io import ConfigError, config_hash, csv_text
from .localization import KINDS, convergence_study, localization_error, plan, synthesize
from .specfun import build_sphere_quadrature
from .verify import run_suite

__all__ = ["COMMANDS", "run", "build_target", "REPORT_COLUMNS"]

REPORT_COLUMNS = ["nhat", "kappa", "lambda", "c0_error", "c1_error", "slope"]
_FAMILY = {"harmonic": "helmholtz", "coulomb": "coulomb"}


class _Cfg:
    """Typed access to a config object with path-qualified errors."""

    def __init__(self, data: dict, path: str = ""):
        if not isinstance(data, dict):
            raise ConfigError(path or "<root>", "expected an object")
        self.data, self.path, self.used = data, path, set()

    def _p(self, key: str) -> str:
        return f"{self.path}.{key}" if self.path else key

    def get(self, key: str, kind: type | tuple, default: Any = ..., check: Callable[[Any], bool] | None = None, why: str = ""):
        self.used.add(key)
        if key not in self.data:
            if default is ...:
                raise ConfigError(self._p(key), "missing required field")
            return default
        v = self.data[key]
        if kind is float and isinstance(v, int) and not isinstance(v, bool):
            v = float(v)
        if isinstance(v, bool) and kind is not bool:
            raise ConfigError(self._p(key), f"expected {getattr(kind, '__name__', kind)}, got a boolean")
        if not isinstance(v, kind):
            raise ConfigError(self._p(key), f"expected {getattr(kind, '__name__', kind)}, got {type(v).__name__}")
        if check is not None and not check(v):
            raise ConfigError(self._p(key), why or f"invalid value {v!r}")
        return v

    def sub(self, key: str, required: bool = True) -> "_Cfg":
        self.used.add(key)
        if key not in self.data:
            if required:
                raise ConfigError(self._p(key), "missing required field")
            return _Cfg({}, self._p(key))
        return _Cfg(self.data[key], self._p(key))

    def finish(self) -> None:
        extra = sorted(set(self.data) - self.used)
        if extra:
            raise ConfigError(self._p(extra[0]), "unknown field")


def _pos(v) -> bool:
    return v > 0 and math.isfinite(v)


def _float_list(cfg: _Cfg, key: str, check=_pos, why="entries must be positive") -> list[float]:
    raw = cfg.get(key, list, check=lambda v: len(v) > 0, why="must be a nonempty list")
    out = []
    for i, v in enumerate(raw):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{cfg._p(key)}[{i}]", "expected a number")
        if not check(float(v)):
            raise ConfigError(f"{cfg._p(key)}[{i}]", why)
        out.append(float(v))
    return out


def _range(cfg: _Cfg, key: str) -> np.ndarray:
    """A list of numbers or ``{"start", "stop", "num"}``."""
    v = cfg.data.get(key)
    if isinstance(v, dict):
        sub = cfg.sub(key)
        start = sub.get("start", float, check=lambda x: x >= 0, why="must be >= 0")
        stop = sub.get("stop", float, check=lambda x: x >= start, why="must be >= start")
        num = sub.get("num", int, check=lambda x: x >= 1, why="must be >= 1")
        sub.finish()
        return np.linspace(start, stop, num)
    return np.array(_float_list(cfg, key, lambda x: x >= 0, "entries must be >= 0"))


def _modes(cfg: _Cfg, d: int) -> tuple:
    raw = cfg.get("modes", list)
    out = []
    for i, md in enumerate(raw):
        sub = _Cfg(md, f"{cfg._p('modes')}[{i}]")
        out.append(
            Mode(
                sub.get("l", int, check=lambda x: x >= 0, why="must be >= 0"),
                sub.get("m", int, check=lambda x: x >= 1, why="must be >= 1"),
                sub.get("c", float, check=math.isfinite, why="must be finite"),
            )
        )
        sub.finish()
    return tuple(out)


def _direction(cfg: _Cfg, d: int) -> np.ndarray:
    raw = _float_list(cfg, "direction", math.isfinite, "entries must be finite")
    e = np.array(raw)
    if e.size != d:
        raise ConfigError(cfg._p("direction"), f"expected {d} components")
    norm = np.linalg.norm(e)
    if not norm > 0:
        raise ConfigError(cfg._p("direction"), "must be nonzero")
    return e / norm


def build_target(cfg: _Cfg, d: int, family: str, alpha: float):
    """Return ``(callable target, known expansion or None, preset name)``."""
    preset = cfg.get("preset", str, check=lambda s: s in ("plane_wave_cos", "plane_wave_sin", "modes"), why="unknown preset")
    if preset == "modes":
        exp = HelmholtzExpansion(d, family, _modes(cfg, d), alpha)
        cfg.finish()
        return exp, exp, preset
    if family != "helmholtz":
        raise ConfigError(cfg._p("preset"), "plane-wave presets solve the Helmholtz equation; use 'modes' for Coulomb")
    e = _direction(cfg, d)
    cfg.finish()
    if preset == "plane_wave_cos":
        return (lambda X: np.cos(np.asarray(X) @ e)), None, preset
    return (lambda X: np.sin(np.asarray(X) @ e)), None, preset


def _fit(target, cfg: _Cfg, d: int, family: str, l0: int, alpha: float):
    fit = cfg.sub("fit", required=False)
    degree = fit.get("sphere_degree", int, l0 + 24, lambda x: x >= l0, "must be >= l0")
    radii = _float_list(fit, "radii") if "radii" in fit.data else list(np.linspace(0.5, 3.0, 12))
    floor = fit.get("coef_floor", float, 1e-10, lambda x: x >= 0, "must be >= 0")
    fit.finish()
    fits = fit_modes(target, d, family, l0, build_sphere_quadrature(d, degree), radii, alpha, floor)
    exp = HelmholtzExpansion(d, family, tuple(Mode(f.l, f.m, f.c) for f in fits if f.kept), alpha)
    return exp, fits


def _meta(config: dict) -> dict:
    return {"command": config.get("command"), "config_sha256": config_hash(config)}


def _common(cfg: _Cfg) -> None:
    cfg.get("schema_version", int)
    cfg.get("command", str)
    cfg.get("seed", int, 0)


def cmd_expand(config: dict) -> dict[str, str]:
    """Fit a Bessel-mode expansion; outputs ``expansion.json`` and ``fits.csv``."""
    cfg = _Cfg(config)
    _common(cfg)
    d = cfg.get("d", int, check=lambda x: x >= 2, why="must be >= 2")
    family = cfg.get("family", str, "helmholtz", lambda s: s in ("helmholtz", "coulomb"), "must be helmholtz or coulomb")
    alpha = cfg.get("alpha", float, 1.0, _pos, "must be positive")
    l0 = cfg.get("l0", int, check=lambda x: x >= 0, why="must be >= 0")
    target, _, _ = build_target(cfg.sub("target"), d, family, alpha)
    exp, fits = _fit(target, cfg, d, family, l0, alpha)
    cfg.finish()
    rows = [{"l": f.l, "m": f.m, "c": f.c, "residual": f.residual, "n_radii": f.n_radii, "kept": f.kept} for f in fits]
    return {
        "expansion.json": exp.to_json() + "\n",
        "fits.csv": csv_text(rows, ["l", "m", "c", "residual", "n_radii", "kept"], _meta(config)),
    }


def _localize_setup(cfg: _Cfg):
    kind = cfg.get("kind", str, check=lambda s: s in KINDS, why=f"must be one of {KINDS}")
    d = cfg.get("d", int, check=lambda x: x >= 2, why="must be >= 2")
    alpha = cfg.get("alpha", float, 1.0, _pos, "must be positive")
    family = _FAMILY[kind]
    target, exp, preset = build_target(cfg.sub("target"), d, family, alpha)
    l0 = cfg.get("l0", int, exp.l_max if exp is not None else ..., lambda x: x >= 0, "must be >= 0")
    if exp is None:
        exp, _ = _fit(target, cfg, d, family, l0, alpha)
    kappa = cfg.get("kappa", (str, float, int), "auto", lambda v: v == "auto" or (not isinstance(v, str) and _pos(v)), "must be 'auto' or positive")
    parity = cfg.get("parity", (str, type(None)), None, lambda v: v in (None, "even", "odd"), "must be 'even', 'odd' or null")
    compare = cfg.get("compare", str, "target", lambda v: v in ("target", "expansion"), "must be 'target' or 'expansion'")
    grid = cfg.sub("grid")
    R = grid.get("R", float, check=_pos, why="must be positive")
    r_min = grid.get("r_min", float, 0.0, lambda x: 0 <= x < R, "must satisfy 0 <= r_min < R")
    n_radial = grid.get("n_radial", int, 64, lambda x: x >= 2, "must be >= 2")
    sdeg = grid.get("sphere_degree", (int, type(None)), None, lambda x: x is None or x >= 0, "must be >= 0")
    grid.finish()
    k = cfg.get("k", int, 1, lambda x: x in (0, 1), "must be 0 or 1")
    if kind == "harmonic" and exp.parity == "mixed":
        raise ConfigError("target", "harmonic localization needs an even or odd target")
    if parity is not None and kind == "harmonic" and exp.parity != parity:
        raise ConfigError("parity", f"requested {parity} parity but the target is {exp.parity}")
    cmp_target = target if compare == "target" else exp
    return kind, exp, l0, kappa, parity, cmp_target, (R, r_min, n_radial, sdeg, k)


def cmd_localize(config: dict) -> dict[str, str]:
    """Plan, synthesize and measure; outputs ``report.csv`` and ``report.json``."""
    cfg = _Cfg(config)
    _common(cfg)
    nhats = cfg.get("nhat", list, check=lambda v: len(v) > 0 and all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in v), why="must be a nonempty list of nonnegative integers")
    kind, exp, l0, kappa, parity, target, (R, r_min, n_radial, sdeg, k) = _localize_setup(cfg)
    cfg.finish()
    rows, records = [], []
    for n in nhats:
        p = plan(kind, exp, n, kappa, l0, parity)
        rep = localization_error(synthesize(p), target, R, r_min, n_radial, sdeg, k)
        rows.append(rep.csv_row())
        records.append({"plan": p.to_dict(), "report": rep.to_dict()})
    return {
        "report.csv": csv_text(rows, REPORT_COLUMNS, _meta(config)),
        "report.json": json.dumps({"runs": records}, indent=2, sort_keys=True) + "\n",
    }


def cmd_study(config: dict) -> dict[str, str]:
    """Convergence sweep with a fitted slope; outputs ``study.csv`` and ``study.json``."""
    cfg = _Cfg(config)
    _common(cfg)
    nhats = cfg.get("nhat", list, check=lambda v: len(v) >= 3, why="a study needs at least 3 nhat values")
    kind, exp, l0, kappa, parity, target, (R, r_min, n_radial, sdeg, k) = _localize_setup(cfg)
    cfg.finish()
    if kappa != "auto":
        raise ConfigError("kappa", "studies use the automatic curvature schedule")
    st = convergence_study(kind, exp, nhats, R, r_min, k, target, n_radial, sdeg)
    rows = [r.csv_row(st.slope) for r in st.reports]
    meta = _meta(config)
    meta.update({"slope_half_width": st.half_width, "violations": st.violations})
    summary = {"slope": st.slope, "half_width": st.half_width, "violations": st.violations, "reports": [r.to_dict() for r in st.reports]}
    return {"study.csv": csv_text(rows, REPORT_COLUMNS, meta), "study.json": json.dumps(summary, indent=2, sort_keys=True) + "\n"}


def _heat_common(cfg: _Cfg):
    d = cfg.get("d", int, check=lambda x: x in SUPPORTED_DIMENSIONS, why=f"must be one of {SUPPORTED_DIMENSIONS}")
    kappa = cfg.get("kappa", float, check=_pos, why="must be positive")
    t = _float_list(cfg, "t")
    rho = _range(cfg, "rho")
    return d, kappa, t, rho


def cmd_heat_kernel(config: dict) -> dict[str, str]:
    """Kernel table with bound and recurrence defects; outputs ``kernel.csv``."""
    cfg = _Cfg(config)
    _common(cfg)
    d, kappa, ts, rho = _heat_common(cfg)
    defects = cfg.get("defects", bool, True)
    cfg.finish()
    rows = []
    for t in ts:
        for r in rho:
            row = {"t": t, "rho": float(r), "H": float(kernel(d, kappa, t, r)), "B": float(kernel_bound(d, kappa, t, r))}
            if defects and d + 2 in SUPPORTED_DIMENSIONS and r > 0:
                row["up_defect"] = recurrence_up_check(d, kappa, [t], [r])
            if defects and d + 1 in SUPPORTED_DIMENSIONS:
                row["descent_defect"] = descent_check(d, kappa, [t], [r])
            rows.append(row)
    return {"kernel.csv": csv_text(rows, ["t", "rho", "H", "B", "up_defect", "descent_defect"], _meta(config))}


def cmd_heat_solve(config: dict) -> dict[str, str]:
    """Propagate a radial bump; outputs ``solution.csv`` in long format."""
    cfg = _Cfg(config)
    _common(cfg)
    d, kappa, ts, rho = _heat_common(cfg)
    init = cfg.sub("initial", required=False)
    init.get("preset", str, "bump", lambda s: s == "bump", "only the 'bump' preset is available")
    radius = init.get("radius", float, 1.5, _pos, "must be positive")
    height = init.get("height", float, 1.0, math.isfinite, "must be finite")
    init.finish()
    cfg.finish()
    space, v0 = Space(d, kappa), bump(radius, height)
    rows = [{"t": 0.0, "rho": float(r), "w": float(v0(r))} for r in rho]
    for t in ts:
        w = propagate_radial(space, v0, t)(rho)
        rows += [{"t": t, "rho": float(r), "w": float(x)} for r, x in zip(rho, w)]
    return {"solution.csv": csv_text(rows, ["t", "rho", "w"], _meta(config))}


def cmd_verify(config: dict) -> dict[str, str]:
    """Run a named suite; outputs ``verify.csv``."""
    cfg = _Cfg(config)
    _common(cfg)
    suite = cfg.get("suite", str)
    cfg.finish()
    checks = run_suite(suite)
    return {"verify.csv": csv_text([c.row() for c in checks], ["suite", "check", "value", "lower", "upper", "passed"], _meta(config))}


COMMANDS: dict[str, Callable[[dict], dict[str, str]]] = {
    "expand": cmd_expand,
    "localize": cmd_localize,
    "study": cmd_study,
    "heat-kernel": cmd_heat_kernel,
    "heat-solve": cmd_heat_solve,
    "verify": cmd_verify,
}


def run(config: dict) -> dict[str, str]:
    """Dispatch on ``config["command"]``."""
    cmd = config.get("command")
    if cmd not in COMMANDS:
        raise ConfigError("command", f"unknown command {cmd!r}; choose from {sorted(COMMANDS)}")
    return COMMANDS[cmd](config)
