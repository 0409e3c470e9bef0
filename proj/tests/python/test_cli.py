import json
import subprocess


def run(cli, *args):
    return subprocess.run([cli, *map(str, args)], capture_output=True, text=True)


def test_run_pass_writes_two_files(cli, data_dir, tmp_path):
    r = run(cli, "run", data_dir / "smooth_small.json", "--out", tmp_path)
    assert r.returncode == 0, r.stderr
    assert (tmp_path / "smooth_small.json").exists()
    assert (tmp_path / "smooth_small.csv").exists()
    assert "verdict: pass" in r.stdout


def test_rerun_is_identical(cli, data_dir, tmp_path):
    run(cli, "run", data_dir / "smooth_small.json", "--out", tmp_path / "a")
    run(cli, "run", data_dir / "smooth_small.json", "--out", tmp_path / "b", "--workers", 2)
    for ext in ("json", "csv"):
        a = (tmp_path / "a" / f"smooth_small.{ext}").read_bytes()
        b = (tmp_path / "b" / f"smooth_small.{ext}").read_bytes()
        assert a == b


def test_zero_symbol_is_degenerate(cli, data_dir, tmp_path):
    r = run(cli, "run", data_dir / "zero_small.json", "--out", tmp_path)
    assert r.returncode == 0
    rep = json.loads((tmp_path / "zero_small.json").read_text())
    assert rep["degenerate"] is True
    assert rep["verdict"] == "degenerate"


def test_failing_verdict_exits_2(cli, data_dir, tmp_path):
    r = run(cli, "run", data_dir / "strict_small.json", "--out", tmp_path)
    assert r.returncode == 2


def test_unknown_fixture_exits_1(cli, data_dir, tmp_path):
    r = run(cli, "run", data_dir / "bad_fixture.json", "--out", tmp_path)
    assert r.returncode == 1
    assert "symbol" in r.stderr


def test_validate_config(cli, data_dir):
    before = (data_dir / "bad_q.json").read_bytes()
    r = run(cli, "validate-config", data_dir / "bad_q.json")
    assert r.returncode == 1
    assert "q" in r.stderr
    assert (data_dir / "bad_q.json").read_bytes() == before
    assert run(cli, "validate-config", data_dir / "smooth_small.json").returncode == 0


def test_seed_flag_overrides(cli, data_dir, tmp_path):
    run(cli, "run", data_dir / "smooth_small.json", "--out", tmp_path, "--seed", 9)
    assert json.loads((tmp_path / "smooth_small.json").read_text())["seed"] == 9


def test_show_report_and_list(cli, data_dir, tmp_path):
    run(cli, "run", data_dir / "smooth_small.json", "--out", tmp_path)
    r = run(cli, "show-report", tmp_path / "smooth_small.json")
    assert r.returncode == 0
    assert "smooth_scaling" in r.stdout
    r = run(cli, "list-fixtures")
    assert "gaussian_bump" in r.stdout and "half_plane" in r.stdout
