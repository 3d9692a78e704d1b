import csv
import io
import json

import pytest
from fractions import Fraction

from fourbody.cli import EXIT_COMPUTE, EXIT_CONFIG, EXIT_OK, main


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


def write(tmp_path, data, name="c.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def test_verify_default_all_pass_and_deterministic(tmp_path, capsys):
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert main(["verify", "--seed", "3", "--out", str(out1)]) == EXIT_OK
    assert main(["verify", "--seed", "3", "--out", str(out2)]) == EXIT_OK
    assert out1.read_bytes() == out2.read_bytes()
    report = json.loads(out1.read_text())
    statuses = {c["status"] for c in report["checks"]}
    assert "fail" not in statuses
    ids = {c["check_id"] for c in report["checks"]}
    for rid in ("geometry.veff-reading", "symmetry.S1-S4-transcription", "reduction.PS-completeness",
                "jacobi.moment-of-inertia"):
        assert rid in ids


def test_verify_single_suite(capsys):
    code, cap = run(["verify", "--suite", "geometry"], capsys)
    assert code == EXIT_OK
    ids = [c["check_id"] for c in json.loads(cap.out)["checks"]]
    assert ids and all(i.startswith("geometry.") for i in ids)


def test_generic_with_infinite_masses_is_config_error(tmp_path, capsys):
    cfg = write(tmp_path, {"masses": ["inf", "inf", 1, 1]})
    code, cap = run(["verify", "--config", cfg], capsys)
    assert code == EXIT_CONFIG and "config error" in cap.err


def test_spectrum_equal_masses(capsys):
    code, cap = run(["spectrum", "--N", "1", "--format", "csv"], capsys)
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(cap.out)))
    eights = [r for r in rows if r["energy_numerator"] == "8"]
    assert len(eights) == 6 and all(r["energy_denominator"] == "1" for r in eights)
    assert all(r["multiplicity"] == "6" for r in eights)


def test_spectrum_three_center(tmp_path, capsys):
    cfg = write(tmp_path, {"variant": "three-center", "masses": ["inf", "inf", "inf", 2],
                           "gauge": {"a": 0, "b": 0, "e": 0, "c": 1, "f": 2, "g": 3}, "classical": [1, 2, 3]})
    code, cap = run(["spectrum", "--config", cfg, "--N", "1"], capsys)
    assert code == EXIT_OK
    data = json.loads(cap.out)
    cols = data["columns"]
    ground = next(r for r in data["rows"] if r[:3] == [0, 0, 0])
    # omega d (c+f+g) + 2 m omega^2 (cf r12 + cg r13 + fg r23) with m=2
    expected = 3 * 6 + 2 * 2 * (2 * 1 + 3 * 2 + 6 * 3)
    total = ground[cols.index("total")] if "total" in cols else \
        ground[cols.index("total_numerator")] / ground[cols.index("total_denominator")]
    assert abs(float(total) - expected) < 1e-9


def test_spectrum_three_center_bad_gauge(tmp_path, capsys):
    cfg = write(tmp_path, {"variant": "three-center", "masses": ["inf", "inf", "inf", 1]})
    code, _ = run(["spectrum", "--config", cfg], capsys)
    assert code == EXIT_CONFIG


def test_spectrum_P_representation(capsys):
    code, cap = run(["spectrum", "--representation", "P", "--N", "10", "--format", "csv"], capsys)
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(cap.out)))
    assert [int(r["energy_numerator"]) for r in rows] == [9 + 4 * n for n in range(11)]
    assert all(r["laguerre_residual_zero"] == "True" for r in rows)


def test_springs_forward(capsys):
    code, cap = run(["springs", "forward"], capsys)
    assert code == EXIT_OK
    assert set(json.loads(cap.out)["nu"].values()) == {"1/1"}


def test_springs_inverse(tmp_path, capsys):
    cfg = write(tmp_path, {"nu": [1, 1, 1, 1, 1, 1], "gauge": [1.1, 0.9, 1, 1, 1.05, 1]})
    code, cap = run(["springs", "inverse", "--config", cfg], capsys)
    assert code == EXIT_OK
    out = json.loads(cap.out)
    assert out["verdict"] == "converged"
    assert all(abs(v - 1) < 1e-10 for v in out["gauge"].values())


def test_springs_inverse_negative_root(tmp_path, capsys):
    # springs of the gauge (1,1,1,1,1,-1/2) at unit masses, seeded next to that root
    from fourbody.geometry import MassConfig
    from fourbody.oscillator import GaugeParams, forward_spring_map
    nu = forward_spring_map(MassConfig.equal(1), GaugeParams(1, 1, 1, 1, 1, Fraction(-1, 2))).values
    cfg = write(tmp_path, {"nu": [str(v) for v in nu], "gauge": [1, 1, 1, 1, 1, -0.4]})
    code, cap = run(["springs", "inverse", "--config", cfg], capsys)
    assert code == EXIT_OK
    assert json.loads(cap.out)["verdict"] == "NegativeRoot"


def test_springs_inverse_needs_nu(capsys):
    code, _ = run(["springs", "inverse"], capsys)
    assert code == EXIT_CONFIG


def test_geometry_command(tmp_path, capsys):
    cfg = write(tmp_path, {"rho": [1, 1, 1, 1, 1, 1]})
    code, cap = run(["geometry", "--config", cfg], capsys)
    assert code == EXIT_OK
    out = json.loads(cap.out)
    assert out["v4_squared"] == "1/72" and out["domain"] == "interior" and out["det_identity_holds"]
    assert "plain" in out["veff"]["matching"]


def test_prep_round_trip(tmp_path, capsys):
    target = tmp_path / "full.json"
    assert main(["prep", "--seed", "11", "--variant", "equal", "--out", str(target)]) == EXIT_OK
    data = json.loads(target.read_text())
    assert data["seed"] == 11 and data["variant"] == "equal"
    code, _ = run(["verify", "--config", str(target), "--suite", "jacobi"], capsys)
    assert code == EXIT_OK


def test_bo_command(capsys):
    code, cap = run(["bo"], capsys)
    assert code == EXIT_OK
    out = json.loads(cap.out)
    assert out["leading_expected"] == "6/1" and out["leading_rel_error"] < 0.01


def test_csv_rejected_for_json_commands(capsys):
    code, _ = run(["verify", "--format", "csv", "--suite", "bo"], capsys)
    assert code == EXIT_CONFIG


def test_flag_guard(capsys):
    code, _ = run(["spectrum", "--N", "7"], capsys)
    assert code == EXIT_CONFIG


def test_module_entry_point():
    import subprocess
    import sys
    proc = subprocess.run([sys.executable, "-m", "fourbody", "springs"], capture_output=True, text=True)
    assert proc.returncode == 0 and '"nu"' in proc.stdout
