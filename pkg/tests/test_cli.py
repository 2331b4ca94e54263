"""Command-line surface: exit codes, formats, and byte-determinism of reports."""

from __future__ import annotations

import json
import shutil
import subprocess

import pytest

from trigjac.cli import EXIT_OK, EXIT_VALIDATION, EXIT_VERIFICATION, main

CURVE12 = ["1", "2", "0", "1", "--", "-1"]


@pytest.fixture(scope="module")
def cache_dir(tmp_path_factory):
    return str(tmp_path_factory.mktemp("clicache"))


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_semigroup_json(capsys):
    code, out, _ = run(capsys, "semigroup", "3", "4", "5")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["gaps"] == [1, 2]
    assert data["genus"] == 2
    assert data["symmetric"] is False
    assert data["partition"] == sorted(data["partition"], reverse=True)


def test_semigroup_rejects_non_coprime(capsys):
    code, _, err = run(capsys, "semigroup", "4", "6")
    assert code == EXIT_VALIDATION
    assert "validation error" in err


def test_curve_invariants(capsys):
    # option-style negatives go after a lone --; flags must precede positionals
    code, out, _ = run(capsys, "curve", *CURVE12)
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["genus"] == 2
    assert data["generators"] == [3, 4, 5]
    assert data["exact"] is True
    types = [b["type"] for b in data["branch_points"]]
    assert types == ["A", "A", "B"]
    assert len(data["holomorphic_forms"]) == 2


def test_curve_wrong_branch_count(capsys):
    code, _, err = run(capsys, "curve", "1", "2", "0", "1")
    assert code == EXIT_VALIDATION
    assert "expected 3 branch points" in err


def test_curve_invalid_family(capsys):
    # s + 2r = 3 makes w^3 = A B^2 reducible over the weight grading
    code, _, err = run(capsys, "curve", "1", "1", "0", "1")
    assert code == EXIT_VALIDATION


def test_curve_unparsable_branch_token(capsys):
    code, _, err = run(capsys, "curve", "1", "2", "0", "1", "zzz")
    assert code == EXIT_VALIDATION
    assert "cannot parse" in err


def test_curve_roots_of_polynomial(capsys):
    code, out, _ = run(capsys, "curve", "0", "4", "--roots-of", "1,0,0,0,1")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["genus"] == 3
    assert data["exact"] is False
    assert all(b["type"] == "A" for b in data["branch_points"])


def test_tables_check_published_ok(capsys):
    code, out, _ = run(capsys, "tables", "1", "3", "--check-published")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["check"]["R_ok"] is True
    assert data["check"]["RB_ok"] is True


def test_tables_check_published_unknown_pair(capsys):
    code, _, err = run(capsys, "tables", "1", "2", "--check-published")
    assert code == EXIT_VALIDATION
    assert "no published table row" in err


def test_format_csv(capsys):
    code, out, _ = run(capsys, "--format", "csv", "semigroup", "3", "4", "5")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert "genus,2" in lines
    assert "gaps.0,1" in lines and "gaps.1,2" in lines


def test_format_text(capsys):
    code, out, _ = run(capsys, "--format", "text", "semigroup", "3", "4", "5")
    assert code == EXIT_OK
    assert "genus = 2" in out.splitlines()


def test_timings_meta(capsys):
    code, out, _ = run(capsys, "--timings", "semigroup", "3", "4", "5")
    assert code == EXIT_OK
    data = json.loads(out)
    assert float(data["meta"]["seconds"]) >= 0.0


def test_periods_json_byte_deterministic(capsys, cache_dir, tmp_path):
    base = ["--precision", "20", "periods", *CURVE12]
    _, cold, _ = run(capsys, "--cache-dir", cache_dir, *base)
    _, warm, _ = run(capsys, "--cache-dir", cache_dir, *base)
    _, fresh, _ = run(capsys, "--cache-dir", str(tmp_path / "never"), *base)
    assert cold == warm == fresh
    data = json.loads(cold)
    assert data["genus"] == 2
    assert len(data["tau"]) == 2
    # one cache entry per curve; reruns reuse it instead of appending
    import os

    assert len(os.listdir(cache_dir)) == 1


def test_theta_with_characteristic(capsys, cache_dir):
    # subcommand flags must precede the positionals once -- is in play
    code, out, _ = run(
        capsys, "--precision", "20", "--cache-dir", cache_dir,
        "theta", "--char", "1/2,0;0,1/2", *CURVE12,
    )
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["parity"] == 1
    assert data["vanishing"] in (True, False, None)
    assert "value" in data and "scale" in data


def test_theta_bad_characteristic(capsys, cache_dir):
    code, _, err = run(
        capsys, "--precision", "20", "--cache-dir", cache_dir,
        "theta", "--char", "1/2;0", *CURVE12,
    )
    assert code == EXIT_VALIDATION
    assert "2 entries" in err


def test_rc_shifted_constant(capsys, cache_dir):
    code, out, _ = run(
        capsys, "--precision", "20", "--cache-dir", cache_dir, "rc", *CURVE12
    )
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["unshifted_is_half_period"] is False
    assert float(data["two_delta_s_lattice_dist"]) < 1e-8
    assert float(data["char_residual"]) < 1e-8
    # Fraction reprs; the characteristic must be half-integer
    halves = data["characteristic"]["top"] + data["characteristic"]["bottom"]
    assert all(v in ("0", "1/2") for v in halves)


def test_fs_explicit_points(capsys, cache_dir):
    code, out, _ = run(
        capsys, "--precision", "20", "--cache-dir", cache_dir,
        "fs", "--points", "1.25,0", *CURVE12,
    )
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["ok"] is True
    assert len(data["points"]) == 1


def test_fs_points_count_mismatch(capsys, cache_dir):
    code, _, err = run(
        capsys, "--precision", "20", "--cache-dir", cache_dir,
        "fs", "--n", "2", "--points", "1.25,0", *CURVE12,
    )
    assert code == EXIT_VALIDATION


def test_verify_battery_passes(capsys, cache_dir):
    code, out, _ = run(
        capsys, "--precision", "20", "--cache-dir", cache_dir, "verify", *CURVE12
    )
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["ok"] is True
    assert data["failed_stage"] is None
    assert set(data["stages"]) == {
        "semicanonical", "periods", "riemann_constant",
        "shifted_constant", "shifted_theorems", "jacobi_inversion",
    }


def test_console_entry_point():
    exe = shutil.which("trigjac")
    assert exe, "console script not installed"
    proc = subprocess.run(
        [exe, "semigroup", "3", "7", "8"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["gaps"] == [1, 2, 4, 5]
