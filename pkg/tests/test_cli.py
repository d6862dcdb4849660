import csv
import io
import json
import math
import subprocess
import sys

import pytest

from qschwarz.cli import ConfigError, RunConfig, run
from qschwarz.report import format_value, render


def run_ok(*argv):
    code, out, err = run(list(argv))
    assert err == "", err
    return code, out


def csv_rows(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def csv_summary(text):
    return dict(line[2:].split(": ", 1) for line in text.splitlines() if line.startswith("# "))


# ---------------------------------------------------------------- residuals


def test_residuals_default_passes():
    code, out = run_ok("residuals")
    assert code == 0
    summary = csv_summary(out)
    assert summary["passed"] == "true"
    assert "printed mixed equation" in summary["discrepancy_note"]
    assert float(summary["max_abs_residual_12_printed"]) > 0.01


def test_residuals_unit_exponent_fails():
    code, out = run_ok("residuals", "--exponent", "1")
    assert code == 1
    assert csv_summary(out)["passed"] == "false"


@pytest.mark.parametrize("flag, value, kind", [("--profile-F", "(", "SyntaxError"), ("--profile-G", "q", "UnknownIdentifier")])
def test_bad_expression_exit_2(flag, value, kind):
    code, out, err = run(["residuals", flag, value])
    assert code == 2
    assert out == ""
    assert err.startswith(f"error: {kind}")


def test_residual_columns_and_order():
    _, out = run_ok("residuals", "--r-range", "1:2:2", "--tau-range", "1:3:3")
    rows = csv_rows(out)
    assert list(rows[0]) == [
        "r", "tau", "residual_11", "residual_12_printed", "G01_generic",
        "residual_13", "residual_14", "residual_14_printed", "rho", "error",
    ]
    assert [(float(r["r"]), float(r["tau"])) for r in rows] == [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)]
    first = rows[0]
    assert float(first["residual_12_printed"]) == pytest.approx(1 / 9, abs=1e-10)
    assert float(first["rho"]) == pytest.approx(1 / (6 * math.pi), rel=1e-15)


def test_singular_rows_fail_with_message():
    code, out = run_ok("residuals", "--profile-F", "r-2", "--r-range", "2:3:2", "--tau-range", "1:1:1")
    assert code == 1
    rows = csv_rows(out)
    assert rows[0]["error"].startswith("Singular")
    assert rows[0]["residual_11"] == ""
    assert rows[1]["error"] == ""


# ------------------------------------------------------------------ quantum


def test_quantum_default_passes():
    code, out = run_ok("quantum")
    assert code == 0
    summary = csv_summary(out)
    assert float(summary["four_velocity_norm"]) == float(summary["c_squared"]) == 1.0


def test_quantum_explicit_units():
    code, out = run_ok("quantum", "--units", "explicit", "--c", "2", "--m", "3")
    assert code == 0
    assert float(csv_summary(out)["four_velocity_norm"]) == 4.0


@pytest.mark.parametrize("rng", ["0:5:5", "-1:5:5"])
def test_quantum_rejects_nonpositive_tau(rng):
    # "=" keeps argparse from reading a leading minus as a flag
    code, out, err = run(["quantum", f"--tau-range={rng}"])
    assert code == 2
    assert "tau_min" in err


def test_quantum_json_document():
    code, out = run_ok("quantum", "--output", "json")
    doc = json.loads(out)
    assert set(doc) == {"rows", "summary"}
    assert isinstance(doc["rows"], list) and len(doc["rows"]) == 25
    assert doc["summary"]["passed"] is True
    assert list(doc["rows"][0]) == [
        "r", "tau", "R", "box_R", "hj_residual", "psi_P_re", "psi_P_im", "psi_A_re", "psi_A_im", "error",
    ]
    row = doc["rows"][0]
    assert row["psi_A_im"] == -row["psi_P_im"]


# ---------------------------------------------------------------------- frw


def test_frw_default():
    code, out = run_ok("frw")
    assert code == 0
    rows = csv_rows(out)
    assert all(abs(float(r["transform_residual"])) < 1e-10 for r in rows)
    assert all(abs(float(r["spatial_curvature"])) < 1e-10 for r in rows)
    row = next(r for r in rows if float(r["tau"]) == 3.0)
    assert float(row["hubble_scale_factor"]) == pytest.approx(2 / 9, rel=1e-15)
    assert float(row["hubble_paper_R"]) == pytest.approx(4 / 9, rel=1e-15)
    assert float(row["hubble_paper_claim"]) == pytest.approx(1 / 3, rel=1e-15)


def test_frw_rejects_nonzero_G():
    code, _, err = run(["frw", "--profile-G", "1"])
    assert code == 2
    assert "G(r) = 0" in err


# --------------------------------------------------------------------- bohr


def test_bohr_levels():
    code, out = run_ok("bohr", "--n-max", "4")
    assert code == 0
    energies = [float(r["energy"]) for r in csv_rows(out)]
    assert energies[0] == -0.5
    assert energies[3] == -0.03125
    assert csv_summary(out)["spacing_decreasing"] == "true"


def test_bohr_needs_a_level():
    code, _, err = run(["bohr", "--n-max", "0"])
    assert code == 2
    assert "n_max" in err


# ----------------------------------------------------------------- gedanken


def test_corrected_atwood():
    code, out = run_ok("gedanken", "atwood-corrected")
    assert code == 0
    assert csv_summary(out)["outcome"] == "perpetual"


def test_original_atwood_halts_without_error():
    code, out = run_ok("gedanken", "atwood-original")
    assert code == 0
    assert csv_summary(out)["outcome"] == "halted(1)"
    final = {r["account"]: float(r["final"]) for r in csv_rows(out)}
    assert final["storage_cell"] == pytest.approx(0.01, rel=1e-15)


def test_pair_kinetic_row():
    code, out = run_ok("gedanken", "pair", "--mass", "1", "--accel", "0.001", "--height", "1")
    assert code == 0
    final = {r["account"]: float(r["change"]) for r in csv_rows(out)}
    assert final["kinetic"] == pytest.approx(0.002, rel=1e-14)


def test_gedanken_history():
    _, out = run_ok("gedanken", "atwood-corrected", "--cycles", "2", "--history")
    rows = csv_rows(out)
    assert len(rows) == 8
    assert [r["step"] for r in rows] == [str(i) for i in range(1, 9)]


def test_gedanken_level_shift_miscalibration():
    _, out = run_ok("gedanken", "atwood-corrected", "--level-shift", "0.01", "--height", "1.01")
    assert csv_summary(out)["outcome"] == "halted(1)"


def test_gedanken_bad_parameters():
    code, _, err = run(["gedanken", "pair", "--accel", "0.6", "--height", "1"])
    assert code == 2
    assert err.startswith("error:")


# ------------------------------------------------------------ configuration


def test_natural_units_reject_constants():
    code, _, err = run(["residuals", "--c", "2"])
    assert code == 2
    assert "--units explicit" in err


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"profile-F": "2*r^3", "r_range": "1:2:2", "tau-range": "1:2:2", "output": "json"}))
    code, out = run_ok("residuals", "--config", str(cfg), "--tau-range", "1:1:1")
    doc = json.loads(out)
    assert code == 0
    assert [(r["r"], r["tau"]) for r in doc["rows"]] == [(1.0, 1.0), (2.0, 1.0)]


@pytest.mark.parametrize(
    "content", ['{"bogus": 1}', "[1, 2]", "{not json", '{"exponent": "steep"}']
)
def test_bad_config_files(tmp_path, content):
    cfg = tmp_path / "bad.json"
    cfg.write_text(content)
    code, _, err = run(["residuals", "--config", str(cfg)])
    assert code == 2
    assert err.startswith("error:")


def test_missing_config_file(tmp_path):
    code, _, _ = run(["residuals", "--config", str(tmp_path / "nope.json")])
    assert code == 2


@pytest.mark.parametrize("flag, value", [("--r-range", "1:5"), ("--r-range", "a:b:3"), ("--tau-range", "1:2:0"), ("--tol", "0")])
def test_bad_ranges(flag, value):
    code, _, _ = run(["residuals", flag, value])
    assert code == 2


def test_usage_errors_exit_2():
    assert run([])[0] == 2
    assert run(["nonsense"])[0] == 2
    assert run(["gedanken", "teleport"])[0] == 2


def test_runconfig_validation():
    with pytest.raises(ConfigError):
        RunConfig(output="xml")
    with pytest.raises(ConfigError):
        RunConfig(c=-1.0)


# ------------------------------------------------------------------ formats

COMMANDS = [
    ["residuals"],
    ["quantum"],
    ["frw"],
    ["bohr", "--n-max", "5"],
    ["gedanken", "atwood-corrected", "--cycles", "3"],
    ["gedanken", "atwood-original"],
    ["gedanken", "pair", "--history"],
]


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: "-".join(a))
def test_csv_and_json_agree(argv):
    _, as_csv = run_ok(*argv)
    _, as_json = run_ok(*argv, "--output", "json")
    doc = json.loads(as_json)
    rows = csv_rows(as_csv)
    assert len(rows) == len(doc["rows"])
    for crow, jrow in zip(rows, doc["rows"]):
        assert list(crow) == list(jrow)
        for key, text in crow.items():
            assert text == format_value(jrow[key])
    assert csv_summary(as_csv) == {k: format_value(v) for k, v in doc["summary"].items()}


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: "-".join(a))
def test_output_is_deterministic(argv):
    assert run(argv) == run(argv)


def test_floats_round_trip():
    for x in (0.1, 1 / 3, 2.0**-1074, 1e300, -0.0):
        assert float(format_value(x)) == x
    assert format_value(math.nan) == ""
    assert format_value(True) == "true"
    assert format_value(None) == ""


def test_json_rejects_nothing_nonfinite():
    text = render("json", ["x"], [{"x": math.inf}], {"s": math.nan})
    assert json.loads(text) == {"rows": [{"x": None}], "summary": {"s": None}}


def test_unknown_format():
    with pytest.raises(ValueError):
        render("xml", [], [], {})


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qschwarz", "bohr", "--n-max", "2"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[:3] == ["n,energy,energy_times_n2", "1,-0.5,-0.5", "2,-0.125,-0.5"]


def test_module_entry_point_error():
    proc = subprocess.run([sys.executable, "-m", "qschwarz", "residuals", "--profile-F", "("], capture_output=True, text=True)
    assert proc.returncode == 2
    assert proc.stderr.startswith("error: SyntaxError")
