"""Command-line interface: exit codes, schema failures, canonical output,
and end-to-end command plumbing (via the installed console script)."""

import json
import subprocess

import pytest

EXIT_OK, EXIT_SCHEMA, EXIT_NUMERICAL = 0, 2, 3


def run_cli(*args, cwd=None):
    return subprocess.run(
        ["spectral-cmc", *args], capture_output=True, text=True, cwd=cwd,
        timeout=300,
    )


@pytest.fixture(scope="module")
def rot1_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "rot1.json"
    r = run_cli("rot", "gen", "--genus", "1", "--H", "1.0", "--alpha", "3.0",
                "-o", str(path))
    assert r.returncode == EXIT_OK, r.stderr
    return path


def test_validate_good_data(rot1_file):
    r = run_cli("validate", str(rot1_file))
    assert r.returncode == EXIT_OK, r.stderr
    report = json.loads(r.stdout)
    assert report["all_pass"]
    assert max(report["residuals"].values()) < 1e-9


def test_validate_corrupted_b_exits_numerical(rot1_file, tmp_path):
    obj = json.loads(rot1_file.read_text())
    obj["b"][0][0] += 0.05
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    r = run_cli("validate", str(bad))
    assert r.returncode == EXIT_NUMERICAL
    assert json.loads(r.stdout)["passes"]["iv"] is False


def test_validate_garbage_exits_schema(tmp_path):
    bad = tmp_path / "garbage.json"
    bad.write_text("definitely { not json")
    assert run_cli("validate", str(bad)).returncode == EXIT_SCHEMA


def test_validate_missing_file_exits_schema(tmp_path):
    assert run_cli("validate", str(tmp_path / "nope.json")).returncode == EXIT_SCHEMA


def test_rot_gen_genus0_roundtrip(tmp_path):
    out = tmp_path / "rot0.json"
    r = run_cli("rot", "gen", "--genus", "0", "--H", "0.5", "-o", str(out))
    assert r.returncode == EXIT_OK, r.stderr
    assert json.loads(out.read_text())["g"] == 0
    assert run_cli("validate", str(out)).returncode == EXIT_OK


def test_rot_gen_alias(tmp_path):
    out = tmp_path / "rot0.json"
    r = run_cli("rot-gen", "--genus", "0", "--H", "1.0", "-o", str(out))
    assert r.returncode == EXIT_OK, r.stderr


def test_flow_zero_steps_is_canonical_identity(rot1_file, tmp_path):
    out = tmp_path / "out.json"
    r = run_cli("flow", "run", "--data", str(rot1_file), "--strategy", "shrink",
                "--steps", "0", "-o", str(out))
    assert r.returncode == EXIT_OK, r.stderr
    assert out.read_bytes() == rot1_file.read_bytes()


def test_flow_run_with_log(rot1_file, tmp_path):
    out = tmp_path / "out.json"
    log = tmp_path / "traj.csv"
    r = run_cli("flow", "run", "--data", str(rot1_file), "--strategy", "shrink",
                "--rate", "0.5", "--dt", "5e-5", "--steps", "4",
                "--log", str(log), "-o", str(out))
    assert r.returncode == EXIT_OK, r.stderr
    report = json.loads(r.stdout)
    assert report["steps"] == 4
    assert abs(report["t_final"] - 2e-4) < 1e-12
    lines = log.read_text().splitlines()
    assert lines[0].startswith("t,")
    assert len(lines) == 1 + 5  # header + initial state + 4 steps
    assert run_cli("validate", str(out)).returncode == EXIT_OK


def test_flow_rejects_bad_options(rot1_file):
    r = run_cli("flow", "run", "--data", str(rot1_file), "--strategy", "shrink",
                "--dt", "-0.1", "--steps", "3")
    assert r.returncode == EXIT_SCHEMA


def test_surface_command(rot1_file, tmp_path):
    out = tmp_path / "mesh.csv"
    r = run_cli("surface", "--data", str(rot1_file), "--resolution", "17",
                "--extent", "0.16", "-o", str(out))
    assert r.returncode == EXIT_OK, r.stderr
    report = json.loads(r.stdout)
    assert report["on_sphere_residual"] < 1e-8
    assert report["sinh_gordon_residual"] < 1e-4
    assert out.exists()


def test_isospectral_command(rot1_file, tmp_path):
    out = tmp_path / "xi.json"
    r = run_cli("isospectral", "--data", str(rot1_file), "--direction", "0",
                "--dt", "0.005", "-o", str(out))
    assert r.returncode == EXIT_OK, r.stderr
    assert json.loads(out.read_text())["g"] == 1


def test_thread_cap_rejects_non_integer(rot1_file, tmp_path, monkeypatch):
    import os
    env = dict(os.environ, SPECTRAL_CMC_THREADS="abc")
    r = subprocess.run(["spectral-cmc", "validate", str(rot1_file)],
                       capture_output=True, text=True, env=env, timeout=300)
    assert r.returncode == EXIT_SCHEMA


def test_thread_cap_accepts_integer(rot1_file):
    import os
    env = dict(os.environ, SPECTRAL_CMC_THREADS="1")
    r = subprocess.run(["spectral-cmc", "validate", str(rot1_file)],
                       capture_output=True, text=True, env=env, timeout=300)
    assert r.returncode == EXIT_OK
