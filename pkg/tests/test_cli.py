import json
import shutil
from pathlib import Path

import pytest

from hyperloc.cli import main
from hyperloc.golden import compare_tables, default_fixture_dir, regress
from hyperloc.io import read_csv

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def _run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_expand_plane_wave_has_even_modes_only(tmp_path, capsys):
    code, _, _ = _run(["expand", "--d", 3, "--family", "helmholtz", "--l0", 6, "--preset", "plane_wave_cos",
                       "--direction", 0, 0, 1, "--out-dir", tmp_path], capsys)
    assert code == 0
    exp = json.loads((tmp_path / "expansion.json").read_text())
    assert exp["parity"] == "even"
    assert exp["modes"] and all(m["l"] % 2 == 0 for m in exp["modes"])
    _, rows = read_csv((tmp_path / "fits.csv").read_text())
    assert {"l", "m", "c", "residual", "n_radii", "kept"} <= set(rows[0])


def test_expand_single_mode(tmp_path, capsys):
    code, _, _ = _run(["expand", "--d", 3, "--family", "helmholtz", "--l0", 3, "--mode", "2,1,1.5", "--out-dir", tmp_path], capsys)
    assert code == 0
    modes = json.loads((tmp_path / "expansion.json").read_text())["modes"]
    assert len(modes) == 1 and (modes[0]["l"], modes[0]["m"]) == (2, 1)
    assert abs(modes[0]["c"] - 1.5) <= 1e-8


def test_malformed_config_names_field(tmp_path, capsys):
    cfg = json.loads((CONFIGS / "plane_wave_expand.json").read_text())
    cfg["l0"] = "eight"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(cfg))
    code, _, err = _run(["expand", "--config", path, "--out-dir", tmp_path], capsys)
    assert code == 2
    assert "l0" in err


def test_unknown_config_field_is_rejected(tmp_path, capsys):
    cfg = json.loads((CONFIGS / "plane_wave_expand.json").read_text())
    cfg["target"]["colour"] = "red"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(cfg))
    code, _, err = _run(["expand", "--config", path, "--out-dir", tmp_path], capsys)
    assert code == 2
    assert "target.colour" in err


def test_odd_target_with_even_parity_is_invalid(tmp_path, capsys):
    code, _, err = _run(["localize", "--kind", "harmonic", "--d", 3, "--l0", 3, "--nhat", 40, "--R", 1.0, "--parity", "even",
                         "--preset", "plane_wave_sin", "--direction", 1, 0, 0, "--out-dir", tmp_path], capsys)
    assert code == 2
    assert "parity" in err or "coefficient" in err


def test_config_for_other_command_is_invalid(tmp_path, capsys):
    code, _, err = _run(["study", "--config", CONFIGS / "theorem_harmonic_d3.json", "--out-dir", tmp_path], capsys)
    assert code == 2
    assert "command" in err


def test_localize_from_config(tmp_path, capsys):
    code, out, _ = _run(["localize", "--config", CONFIGS / "theorem_harmonic_d3.json", "--out-dir", tmp_path], capsys)
    assert code == 0
    meta, rows = read_csv((tmp_path / "report.csv").read_text())
    assert list(rows[0]) == ["nhat", "kappa", "lambda", "c0_error", "c1_error", "slope"]
    assert float(rows[0]["c0_error"]) <= 0.05
    assert len(meta["config_sha256"]) == 64


def test_unknown_suite(capsys, tmp_path):
    code, _, err = _run(["verify", "no-such-suite", "--out-dir", tmp_path], capsys)
    assert code == 2
    assert "unknown suite" in err


def test_verify_passing_suite(capsys, tmp_path):
    code, out, _ = _run(["verify", "degeneracy", "--out-dir", tmp_path], capsys)
    assert code == 0
    assert out.count("PASS") == 1 and "FAIL" not in out
    assert (tmp_path / "verify.csv").is_file()


def test_verify_failing_suite_exits_one(capsys, tmp_path):
    code, out, _ = _run(["verify", "euclid-limit", "--out-dir", tmp_path], capsys)
    assert code == 1
    assert "FAIL  euclid-limit: coulomb" in out


def test_heat_commands(tmp_path, capsys):
    code, _, _ = _run(["heat", "kernel", "--d", 3, "--kappa", 1.0, "--t", 0.5, "--rho", 0, 4, 5, "--out-dir", tmp_path], capsys)
    assert code == 0
    _, rows = read_csv((tmp_path / "kernel.csv").read_text())
    assert len(rows) == 5 and all(float(r["H"]) <= float(r["B"]) for r in rows)
    code, _, _ = _run(["heat", "solve", "--config", CONFIGS / "heat_solve_d3.json", "--out-dir", tmp_path], capsys)
    assert code == 0
    _, rows = read_csv((tmp_path / "solution.csv").read_text())
    assert all(float(r["w"]) >= -1e-12 for r in rows)


def test_heat_kernel_zero_time_is_invalid(tmp_path, capsys):
    code, _, err = _run(["heat", "kernel", "--d", 3, "--kappa", 1.0, "--t", 0.0, "--out-dir", tmp_path], capsys)
    assert code == 2
    assert "t" in err


def test_regress_default_fixtures_pass(capsys):
    code, out, _ = _run(["regress"], capsys)
    assert code == 0, out
    assert "FAIL" not in out


@pytest.fixture
def fixture_copy(tmp_path):
    root = tmp_path / "golden"
    shutil.copytree(default_fixture_dir() / "heat_kernel_d3", root / "heat_kernel_d3")
    return root


def test_regress_reports_perturbed_cell(fixture_copy, capsys):
    path = fixture_copy / "heat_kernel_d3" / "expected.csv"
    lines = path.read_bytes().decode().split("\n")
    header = next(i for i, ln in enumerate(lines) if ln.startswith("t,"))
    cols = lines[header].rstrip("\r").split(",")
    cells = lines[header + 3].rstrip("\r").split(",")
    h = cols.index("H")
    cells[h] = repr(float(cells[h]) * 1.01)
    lines[header + 3] = ",".join(cells) + "\r"
    path.write_bytes("\n".join(lines).encode())
    code, out, _ = _run(["regress", fixture_copy], capsys)
    assert code == 1
    assert "row 3, column H" in out


def test_regenerate_then_pass(fixture_copy, capsys):
    (fixture_copy / "heat_kernel_d3" / "expected.csv").unlink()
    report = regress(fixture_copy)
    assert not report.passed and "missing fixture file expected.csv" in "\n".join(report.lines())
    code, out, _ = _run(["regress", fixture_copy, "--regenerate"], capsys)
    assert code == 0 and "created" in out
    assert regress(fixture_copy).passed


def test_compare_tables_column_mismatch():
    a = "x,y\r\n1,2\r\n"
    b = "x,z\r\n1,2\r\n"
    assert "columns" in compare_tables(a, b, {})[0]
    assert compare_tables(a, "x,y\r\n1,2\r\n3,4\r\n", {})[0].startswith("row count")
