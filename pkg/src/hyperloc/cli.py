"""Command-line interface.

Subcommands: ``expand``, ``localize``, ``study``, ``heat kernel``,
``heat solve``, ``verify <suite>`` and ``regress``.  Flags build a JSON
config; ``--config`` loads one and its fields override the flags.

Exit codes: 0 success, 1 verification failure, 2 validation error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .io import SCHEMA_VERSION, load_config, read_csv, write_text
from .runner import run
from .verify import SUITES

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_VERIFY, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2, 3


def _mode(text: str) -> dict:
    try:
        l, m, c = text.split(",")
        return {"l": int(l), "m": int(m), "c": float(c)}
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected l,m,c, got {text!r}") from None


def _target_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", choices=["plane_wave_cos", "plane_wave_sin", "modes"], help="target preset")
    p.add_argument("--direction", type=float, nargs="+", help="plane-wave direction")
    p.add_argument("--mode", type=_mode, action="append", dest="modes", metavar="L,M,C", help="Bessel mode (repeatable)")


def _common_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON config; its fields override flags")
    p.add_argument("--out-dir", type=Path, default=Path("."), help="directory for output files")


def _localize_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kind", choices=["harmonic", "coulomb"])
    p.add_argument("--d", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--l0", type=int)
    p.add_argument("--nhat", type=int, nargs="+")
    p.add_argument("--kappa", help="positive number or 'auto'")
    p.add_argument("--parity", choices=["even", "odd"])
    p.add_argument("--R", type=float, help="outer radius of the comparison ball")
    p.add_argument("--r-min", type=float, help="inner radius (Coulomb annulus)")
    p.add_argument("--n-radial", type=int)
    p.add_argument("--sphere-degree", type=int)
    p.add_argument("--k", type=int, choices=[0, 1])
    _target_args(p)


def _heat_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--d", type=int)
    p.add_argument("--kappa", type=float)
    p.add_argument("--t", type=float, nargs="+")
    p.add_argument("--rho", type=float, nargs=3, metavar=("START", "STOP", "NUM"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperloc", description="Inverse localization and heat kernels on hyperbolic space.")
    parser.add_argument("--version", action="version", version=f"hyperloc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="fit a Bessel-mode expansion of a target")
    _common_args(p)
    p.add_argument("--d", type=int)
    p.add_argument("--family", choices=["helmholtz", "coulomb"])
    p.add_argument("--alpha", type=float)
    p.add_argument("--l0", type=int)
    _target_args(p)

    for name, help_ in (("localize", "synthesize eigenfunctions and measure errors"), ("study", "convergence sweep over nhat")):
        p = sub.add_parser(name, help=help_)
        _common_args(p)
        _localize_args(p)

    heat = sub.add_parser("heat", help="heat kernels and the radial propagator")
    hsub = heat.add_subparsers(dest="heat_command", required=True)
    p = hsub.add_parser("kernel", help="tabulate H, its bound and recurrence defects")
    _common_args(p)
    _heat_args(p)
    p.add_argument("--no-defects", action="store_true", help="skip the recurrence defect columns")
    p = hsub.add_parser("solve", help="propagate a radial bump")
    _common_args(p)
    _heat_args(p)
    p.add_argument("--radius", type=float, help="bump radius")

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", help=f"one of {', '.join(sorted(SUITES))} or 'all'")
    p.add_argument("--out-dir", type=Path, default=Path("."))

    p = sub.add_parser("regress", help="compare outputs with golden fixtures")
    p.add_argument("fixtures", type=Path, nargs="?", default=None, help="fixture directory")
    p.add_argument("--regenerate", action="store_true", help="rewrite the expected outputs")
    return parser


def _set(cfg: dict, key: str, value) -> None:
    if value is not None:
        cfg[key] = value


def _target_from_flags(args) -> dict | None:
    if args.preset is None and not args.modes:
        return None
    preset = args.preset or "modes"
    t = {"preset": preset}
    if preset == "modes":
        t["modes"] = args.modes or []
    else:
        _set(t, "direction", args.direction)
    return t


def _config_from_flags(args) -> dict:
    cmd = args.command if args.command != "heat" else f"heat-{args.heat_command}"
    cfg: dict = {"schema_version": SCHEMA_VERSION, "command": cmd}
    if cmd == "expand":
        for key in ("d", "family", "alpha", "l0"):
            _set(cfg, key, getattr(args, key))
        _set(cfg, "target", _target_from_flags(args))
    elif cmd in ("localize", "study"):
        for key in ("kind", "d", "alpha", "l0", "nhat", "parity", "k"):
            _set(cfg, key, getattr(args, key))
        if args.kappa is not None:
            cfg["kappa"] = args.kappa if args.kappa == "auto" else float(args.kappa)
        _set(cfg, "target", _target_from_flags(args))
        grid = {}
        _set(grid, "R", args.R)
        _set(grid, "r_min", args.r_min)
        _set(grid, "n_radial", args.n_radial)
        _set(grid, "sphere_degree", args.sphere_degree)
        if grid:
            cfg["grid"] = grid
    else:
        for key in ("d", "kappa", "t"):
            _set(cfg, key, getattr(args, key))
        if args.rho is not None:
            cfg["rho"] = {"start": args.rho[0], "stop": args.rho[1], "num": int(args.rho[2])}
        if cmd == "heat-kernel" and args.no_defects:
            cfg["defects"] = False
        if cmd == "heat-solve" and args.radius is not None:
            cfg["initial"] = {"preset": "bump", "radius": args.radius}
    return cfg


def _write_outputs(outputs: dict[str, str], out_dir: Path) -> None:
    for name, text in outputs.items():
        write_text(out_dir / name, text)
        print(f"wrote {out_dir / name}")


def _cmd_verify(args) -> int:
    from .verify import run_suite

    if args.suite != "all" and args.suite not in SUITES:
        print(f"error: unknown suite {args.suite!r}; choose from {', '.join(sorted(SUITES))} or 'all'", file=sys.stderr)
        return EXIT_INVALID
    outputs = run({"schema_version": SCHEMA_VERSION, "command": "verify", "suite": args.suite})
    _write_outputs(outputs, args.out_dir)
    _, rows = read_csv(outputs["verify.csv"])
    failed = [r for r in rows if r["passed"] != "true"]
    for r in rows:
        bounds = f"[{r['lower'] or '-inf'}, {r['upper'] or 'inf'}]"
        print(f"{'PASS' if r['passed'] == 'true' else 'FAIL'}  {r['suite']}: {r['check']} = {r['value']}  {bounds}")
    if failed:
        print(f"{len(failed)} of {len(rows)} checks failed", file=sys.stderr)
        return EXIT_VERIFY
    print(f"all {len(rows)} checks passed")
    return EXIT_OK


def _cmd_regress(args) -> int:
    from .golden import default_fixture_dir, regenerate, regress

    root = args.fixtures or default_fixture_dir()
    if args.regenerate:
        for line in regenerate(root):
            print(line)
        return EXIT_OK
    report = regress(root)
    for line in report.lines():
        print(line)
    return EXIT_OK if report.passed else EXIT_VERIFY


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "regress":
            return _cmd_regress(args)
        cfg = _config_from_flags(args)
        if args.config is not None:
            loaded = load_config(args.config)
            cfg.update(loaded)
            cfg["command"] = _config_from_flags(args)["command"]
            if loaded.get("command", cfg["command"]) != cfg["command"]:
                print(f"error: command: config is for {loaded['command']!r}, not {cfg['command']!r}", file=sys.stderr)
                return EXIT_INVALID
        _write_outputs(run(cfg), args.out_dir)
        return EXIT_OK
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
