import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperloc.formulas import FORMULAS, OPERATIONS, missing_operations, render_markdown, resolve
from hyperloc.io import ConfigError, config_hash, csv_text, format_value, load_config, parse_config, read_csv

ROOT = Path(__file__).resolve().parents[1]


def test_every_operation_has_a_formula():
    assert missing_operations() == []
    assert len({f.key for f in FORMULAS}) == len(FORMULAS)


@pytest.mark.parametrize("dotted", OPERATIONS)
def test_operations_resolve_to_callables(dotted):
    assert callable(resolve(dotted))


def test_formula_entries_name_an_oracle():
    for f in FORMULAS:
        assert f.formula.strip() and f.oracle.strip()
        assert f.operation in OPERATIONS


def test_rendered_docs_are_current():
    assert (ROOT / "docs" / "formulas.md").read_text(encoding="utf-8") == render_markdown()


@given(
    st.lists(
        st.tuples(st.floats(allow_nan=False, allow_infinity=False), st.integers(-10**6, 10**6), st.booleans()),
        min_size=1,
        max_size=8,
    )
)
def test_csv_round_trip(rows):
    text = csv_text([{"x": a, "n": b, "ok": c} for a, b, c in rows], ["x", "n", "ok"], {"note": "demo"})
    meta, back = read_csv(text)
    assert meta["note"] == "demo" and meta["tool"].startswith("hyperloc")
    for (a, b, c), r in zip(rows, back):
        assert float(r["x"]) == a
        assert int(r["n"]) == b
        assert r["ok"] == ("true" if c else "false")


def test_format_value():
    assert format_value(None) == ""
    assert format_value(0.1) == "0.1"
    assert format_value(np.float64(1 / 3)) == repr(1 / 3)
    assert format_value(math.nan) == "nan"
    assert format_value(np.int64(7)) == "7"


def test_config_hash_is_key_order_independent():
    a = {"schema_version": 1, "command": "verify", "suite": "all"}
    b = {"suite": "all", "command": "verify", "schema_version": 1}
    assert config_hash(a) == config_hash(b)
    assert config_hash(a) != config_hash({**a, "suite": "degeneracy"})


def test_config_envelope_errors(tmp_path):
    with pytest.raises(ConfigError, match="schema_version"):
        parse_config('{"command": "verify"}')
    with pytest.raises(ConfigError, match="unsupported"):
        parse_config('{"schema_version": 2}')
    with pytest.raises(ConfigError, match="invalid JSON"):
        parse_config("{")
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.json")


@pytest.mark.parametrize("path", sorted((ROOT / "configs").glob("*.json")), ids=lambda p: p.stem)
def test_shipped_configs_load(path):
    cfg = load_config(path)
    assert cfg["schema_version"] == 1 and "command" in cfg
