"""End-to-end CLI checks: exit codes, report shape, canonical output."""

import json
import subprocess
import sys

import pytest

from treeshift.fixtures import (
    full_shift,
    golden_mean_shift,
    no_constant_cell_shift,
    sibling_distinct_shift,
)
from treeshift.patterns import dumps_canonical


def run_cli(*argv, timeout=60):
    return subprocess.run(
        [sys.executable, "-m", "treeshift.cli", *argv],
        capture_output=True,
        text=True,
        timeout=timeout,
    )


@pytest.fixture()
def shift_files(tmp_path):
    paths = {}
    for name, shift in (
        ("full", full_shift()),
        ("gm", golden_mean_shift()),
        ("sd", sibling_distinct_shift()),
        ("ncc", no_constant_cell_shift()),
    ):
        p = tmp_path / f"{name}.json"
        p.write_text(dumps_canonical(shift.to_document()))
        paths[name] = str(p)
    return paths


def test_validate_is_idempotent_and_reports_fingerprint(shift_files):
    first = run_cli("validate", shift_files["gm"])
    assert first.returncode == 0
    doc = json.loads(first.stdout)
    assert doc["command"] == "validate"
    assert len(doc["fingerprint"]) == 64
    assert doc["result"]["valid"] is True
    # round-trip: validating the canonical form reproduces it byte for byte
    second = run_cli("validate", shift_files["gm"])
    d1, d2 = json.loads(first.stdout), json.loads(second.stdout)
    assert d1["result"] == d2["result"]
    assert d1["fingerprint"] == d2["fingerprint"]


def test_empty_verb(shift_files):
    out = run_cli("empty", shift_files["gm"])
    assert out.returncode == 0
    doc = json.loads(out.stdout)
    assert doc["result"]["empty"] is False
    assert sorted(doc["result"]["core"]) == ["0", "1"]


def test_blocks_count_only(shift_files):
    out = run_cli("blocks", shift_files["gm"], "--height", "4", "--count-only")
    doc = json.loads(out.stdout)
    assert doc["result"]["total"] == "66"


def test_entropy_includes_csv_rows(shift_files):
    out = run_cli("entropy", shift_files["full"], "--max-height", "10")
    doc = json.loads(out.stdout)
    assert abs(doc["result"]["estimate"] - 0.6931) < 0.05
    assert doc["result"]["csv"].splitlines()[0] == "n,log_count,estimate"
    assert len(doc["result"]["csv"].splitlines()) == 11


def test_check_verdicts_and_strict_exit(shift_files):
    ok = run_cli("check", shift_files["gm"], "--property", "usi")
    assert ok.returncode == 0
    doc = json.loads(ok.stdout)
    assert doc["result"]["status"] == "VERIFIED"

    refuted = run_cli("check", shift_files["ncc"], "--property", "ubg", "--strict")
    assert refuted.returncode == 0  # REFUTED is an answer, not a failure
    assert json.loads(refuted.stdout)["result"]["status"] == "REFUTED"


def test_strict_unknown_exits_two(shift_files):
    # level-constant SI at the default (truncated) code budget is UNKNOWN
    from treeshift.fixtures import level_constant_shift

    import pathlib

    p = pathlib.Path(shift_files["gm"]).with_name("lc.json")
    p.write_text(dumps_canonical(level_constant_shift(2).to_document()))
    out = run_cli("check", str(p), "--property", "si", "--height", "3", "--strict")
    assert out.returncode == 2
    assert json.loads(out.stdout)["result"]["status"] == "UNKNOWN"


def test_periodic_and_certificate(shift_files):
    cert = run_cli("aperiodic-cert", shift_files["sd"])
    assert json.loads(cert.stdout)["result"]["holds"] is True
    srch = run_cli("periodic", shift_files["sd"], "--max-leaves", "6")
    doc = json.loads(srch.stdout)
    assert doc["result"]["found"] is False
    hit = run_cli("periodic", shift_files["full"], "--max-leaves", "2")
    assert json.loads(hit.stdout)["result"]["found"] is True


def test_hierarchy_flags_empty(shift_files):
    out = run_cli("hierarchy", shift_files["gm"])
    doc = json.loads(out.stdout)
    assert doc["result"]["consistency_flags"] == []


def test_recode_reports_window(shift_files):
    out = run_cli("recode", shift_files["gm"])
    doc = json.loads(out.stdout)
    assert doc["result"]["window"] == 2
    assert doc["result"]["alphabet_size"] == 3


def test_bad_json_exits_one(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run_cli("validate", str(p)).returncode == 1


def test_missing_file_exits_one(tmp_path):
    assert run_cli("validate", str(tmp_path / "nope.json")).returncode == 1


def test_schema_error_exits_one(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"kind": "vertex", "arity": 2}))
    assert run_cli("validate", str(p)).returncode == 1


def test_usage_error_exits_64(shift_files):
    assert run_cli().returncode == 64
    assert run_cli("check", shift_files["gm"]).returncode == 64
    assert run_cli("not-a-verb", shift_files["gm"]).returncode == 64


def test_workers_reflect_env(shift_files):
    out = subprocess.run(
        [sys.executable, "-m", "treeshift.cli", "core", shift_files["gm"]],
        capture_output=True,
        text=True,
        env={"TSD_THREADS": "4", "PATH": "/usr/bin:/bin"},
    )
    assert json.loads(out.stdout)["workers"] == 4
