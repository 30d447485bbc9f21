"""Golden-file regression fixtures.

Layout: ``<root>/<name>/config.json``, ``expected.csv`` and
``tolerances.json``.  The tolerance file names the compared output and
per-column ``rtol``/``atol``; columns without an entry must match exactly
as text.  Metadata comment lines are not compared.

Tolerances are set per column at about ten times the accuracy to which
that quantity is computed (quadrature or ODE tolerance, FD truncation),
so cross-platform floating-point differences are absorbed without hiding
regressions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .io import load_config, read_csv, write_text
from .runner import run

__all__ = ["FixtureResult", "RegressReport", "default_fixture_dir", "compare_tables", "regress", "regenerate"]

_FILES = ("config.json", "expected.csv", "tolerances.json")


def default_fixture_dir() -> Path:
    return Path(__file__).resolve().parents[2] / "tests" / "golden"


@dataclass(frozen=True)
class FixtureResult:
    name: str
    messages: tuple = ()

    @property
    def passed(self) -> bool:
        return not self.messages


@dataclass(frozen=True)
class RegressReport:
    results: tuple = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return bool(self.results) and all(r.passed for r in self.results)

    def lines(self) -> list[str]:
        out = []
        for r in self.results:
            out.append(f"{'PASS' if r.passed else 'FAIL'}  {r.name}")
            out += [f"      {m}" for m in r.messages]
        if not self.results:
            out.append("FAIL  no fixtures found")
        return out


def _close(a: str, b: str, tol: dict) -> bool:
    try:
        x, y = float(a), float(b)
    except ValueError:
        return a == b
    if math.isnan(x) or math.isnan(y):
        return math.isnan(x) and math.isnan(y)
    return abs(x - y) <= tol.get("atol", 0.0) + tol.get("rtol", 0.0) * abs(y)


def compare_tables(actual: str, expected: str, columns: dict) -> list[str]:
    """Cell-wise comparison; returns messages naming each mismatching row/column."""
    _, got = read_csv(actual)
    _, want = read_csv(expected)
    msgs = []
    if len(got) != len(want):
        return [f"row count {len(got)} != expected {len(want)}"]
    if got and want and list(got[0]) != list(want[0]):
        return [f"columns {list(got[0])} != expected {list(want[0])}"]
    for i, (g, w) in enumerate(zip(got, want)):
        for col in w:
            tol = columns.get(col)
            ok = g[col] == w[col] if tol is None or w[col] == "" or g[col] == "" else _close(g[col], w[col], tol)
            if not ok:
                msgs.append(f"row {i + 1}, column {col}: got {g[col]}, expected {w[col]}")
    return msgs


def _fixture_dirs(root: Path) -> list[Path]:
    if not root.is_dir():
        return []
    return sorted(p for p in root.iterdir() if p.is_dir())


def _run_fixture(path: Path) -> tuple[str, str]:
    tol = json.loads((path / "tolerances.json").read_text(encoding="utf-8"))
    outputs = run(load_config(path / "config.json"))
    name = tol["output"]
    if name not in outputs:
        raise KeyError(f"command produced no {name}")
    return name, outputs[name]


def regress(root: str | Path) -> RegressReport:
    """Compare every fixture under ``root`` with its expected table."""
    results = []
    for path in _fixture_dirs(Path(root)):
        missing = [f for f in _FILES if not (path / f).is_file()]
        if missing:
            results.append(FixtureResult(path.name, tuple(f"missing fixture file {f}" for f in missing)))
            continue
        tol = json.loads((path / "tolerances.json").read_text(encoding="utf-8"))
        try:
            _, actual = _run_fixture(path)
        except (ValueError, ArithmeticError, KeyError) as exc:
            results.append(FixtureResult(path.name, (f"run failed: {exc}",)))
            continue
        expected = (path / "expected.csv").read_text(encoding="utf-8")
        results.append(FixtureResult(path.name, tuple(compare_tables(actual, expected, tol.get("columns", {})))))
    return RegressReport(tuple(results))


def regenerate(root: str | Path) -> list[str]:
    """Rewrite every ``expected.csv`` from current outputs; returns a diff summary."""
    lines = []
    for path in _fixture_dirs(Path(root)):
        _, actual = _run_fixture(path)
        target = path / "expected.csv"
        old = target.read_text(encoding="utf-8") if target.is_file() else None
        if old is None:
            lines.append(f"{path.name}: created")
        elif old == actual:
            lines.append(f"{path.name}: unchanged")
        else:
            _, a = read_csv(actual)
            _, b = read_csv(old)
            changed = sum(1 for x, y in zip(a, b) for c in x if x.get(c) != y.get(c)) + abs(len(a) - len(b))
            lines.append(f"{path.name}: {changed} cells changed")
        write_text(target, actual)
    return lines
