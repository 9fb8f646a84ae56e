"""Command-line interface: reports, exit codes, determinism, error documents."""

import json
import subprocess
import sys
from importlib import resources

import pytest

FIXTURES = resources.files("kacgalois") / "fixtures"


def run_cli(*args, timeout=120):
    return subprocess.run(
        [sys.executable, "-m", "kacgalois", *args],
        capture_output=True,
        text=True,
        timeout=timeout,
    )


def test_validate_bundled_algebra_exits_zero():
    out = run_cli("validate", str(FIXTURES / "s3_function.json"))
    assert out.returncode == 0, out.stderr
    doc = json.loads(out.stdout)
    assert doc["passed"] is True
    assert doc["command"] == "validate"
    assert "input_sha256" in doc


def test_galois_lists_all_six_coideals_of_the_six_point_function_algebra():
    out = run_cli("galois", str(FIXTURES / "s3_function.json"))
    assert out.returncode == 0, out.stderr
    doc = json.loads(out.stdout)
    dims = sorted(c["dim"] for c in doc["report"]["coideals"])
    assert dims == [1, 2, 3, 3, 3, 6]
    fingerprints = {c["projector_fingerprint"] for c in doc["report"]["coideals"]}
    assert len(fingerprints) == 6
    pairs = sorted((p["dim"], p["tilde_dim"]) for p in doc["report"]["tilde_pairs"])
    assert pairs == [(1, 6), (2, 3), (3, 2), (3, 2), (3, 2), (6, 1)]
    assert doc["passed"] is True


def test_coideals_alias_matches_galois_command():
    a = run_cli("coideals", str(FIXTURES / "z4_group.json"))
    assert a.returncode == 0
    doc = json.loads(a.stdout)
    assert sorted(c["dim"] for c in doc["report"]["coideals"]) == [1, 2, 4]


def test_jones_witness_values_through_file_input():
    out = run_cli("jones", str(FIXTURES / "scaled_pair_third.json"))
    assert out.returncode == 0, out.stderr
    doc = json.loads(out.stdout)
    report = doc["report"]
    assert report["extremal"] is False
    assert doc["passed"] is True
    spectra = [
        sorted(s["generator_squared_spectrum"])
        for s in report["relative_commutant"]["summands"]
    ]
    assert len(spectra) == 1
    assert [round(v, 9) for v in spectra[0]] == [0.5, 2.0]
    eigs = sorted(report["dual_weight"]["index_eigenvalues"])
    assert [round(v, 9) for v in eigs] == [1.5, 3.0]
    assert report["extremality"]["criteria_agree"] is True


def test_dual_and_duality_alias():
    a = run_cli("dual", str(FIXTURES / "z3_group.json"))
    b = run_cli("check-duality", str(FIXTURES / "z3_group.json"))
    assert a.returncode == 0 and b.returncode == 0
    da, db = json.loads(a.stdout), json.loads(b.stdout)
    assert da["passed"] and db["passed"]
    assert da["report"] == db["report"]


def test_coreps_reports_dimensions():
    out = run_cli("coreps", str(FIXTURES / "s3_function.json"))
    assert out.returncode == 0
    doc = json.loads(out.stdout)
    assert sorted(doc["report"]["corep_dims"]) == [1, 1, 2]


def test_text_format_renders_same_report():
    js = run_cli("validate", str(FIXTURES / "z2_group.json"))
    txt = run_cli("validate", str(FIXTURES / "z2_group.json"), "--format", "text")
    assert txt.returncode == 0
    assert "passed" in txt.stdout
    assert json.loads(js.stdout)["passed"] is True


def test_output_flag_writes_the_document(tmp_path):
    target = tmp_path / "report.json"
    out = run_cli("validate", str(FIXTURES / "z2_group.json"), "--output", str(target))
    assert out.returncode == 0
    doc = json.loads(target.read_text())
    assert doc["passed"] is True


def test_missing_file_is_an_input_error():
    out = run_cli("validate", "/nonexistent/file.json")
    assert out.returncode == 2
    doc = json.loads(out.stdout)
    assert doc["passed"] is False
    assert "error" in doc and doc["error"]["type"]


def test_malformed_document_is_an_input_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"dim": 2}))
    out = run_cli("validate", str(bad))
    assert out.returncode == 2
    doc = json.loads(out.stdout)
    assert "error" in doc


def test_non_group_input_to_galois_is_an_input_error():
    out = run_cli("galois", str(FIXTURES / "kp8.json"))
    assert out.returncode == 2
    doc = json.loads(out.stdout)
    assert "error" in doc


def test_impossible_tolerance_is_a_check_failure():
    out = run_cli("jones", str(FIXTURES / "scaled_pair_third.json"), "--tolerance", "1e-16")
    assert out.returncode == 1
    doc = json.loads(out.stdout)
    assert doc["passed"] is False
    assert "error" not in doc


def test_nonpositive_tolerance_is_rejected():
    out = run_cli("validate", str(FIXTURES / "z2_group.json"), "--tolerance", "-1")
    assert out.returncode == 2


def test_version_flag():
    out = run_cli("--version")
    assert out.returncode == 0
    assert out.stdout.strip()


def test_seed_changes_nothing_structural_for_validate():
    a = run_cli("validate", str(FIXTURES / "q8_group.json"), "--seed", "3")
    b = run_cli("validate", str(FIXTURES / "q8_group.json"), "--seed", "4")
    da, db = json.loads(a.stdout), json.loads(b.stdout)
    assert da["report"] == db["report"]
