import json

import pytest

from orbitlab.cli import main


def _write_cfg(tmp_path, data, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def _run(tmp_path, data, out="out", extra=()):
    cfg = _write_cfg(tmp_path, data)
    out_dir = tmp_path / out
    rc = main([cfg, "--out-dir", str(out_dir), *extra])
    return rc, out_dir


def _report(out_dir):
    return json.loads((out_dir / "report.json").read_text(encoding="utf-8"))


class TestDeterminism:
    def test_preset_runs_byte_identical(self, tmp_path, monkeypatch):
        monkeypatch.delenv("ORBITLAB_OUT", raising=False)
        data = {"command": "preset", "preset": "certify-prefix3"}
        rc1, d1 = _run(tmp_path, data, out="first")
        rc2, d2 = _run(tmp_path, data, out="second")
        assert rc1 == rc2 == 0
        assert (d1 / "report.json").read_bytes() == (d2 / "report.json").read_bytes()
        assert (d1 / "table.csv").read_bytes() == (d2 / "table.csv").read_bytes()

    def test_certify_table_shape(self, tmp_path):
        rc, out = _run(tmp_path, {"command": "preset", "preset": "certify-prefix3"})
        assert rc == 0
        table = (out / "table.csv").read_bytes()
        assert b"\r" not in table
        lines = table.decode().splitlines()
        assert lines[0] == "n,k_n,defect,distance,bound,pass"
        assert len(lines) == 1 + 21  # header + targets 0..20

    def test_report_carries_config_echo(self, tmp_path):
        rc, out = _run(tmp_path, {"command": "preset", "preset": "certify-prefix3"})
        rep = _report(out)
        assert rep["preset"] == "certify-prefix3"
        assert rep["command"] == "certify"
        assert rep["passed"] is True
        assert rep["config"]["lambda"] == [2.0, 0.0]
        assert rep["config"]["pattern"] == {"kind": "prefix", "m": 3}


class TestConfigErrors:
    def test_missing_file(self, tmp_path):
        rc = main([str(tmp_path / "nope.json"), "--out-dir", str(tmp_path)])
        assert rc == 2

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        rc = main([str(path), "--out-dir", str(tmp_path)])
        assert rc == 2

    @pytest.mark.parametrize(
        "data",
        [
            {"command": "fly"},
            {"command": "certify", "lambda": [1, 0], "pattern": {"kind": "prefix", "m": 3}},
            {"command": "certify", "lambda": [2, 0], "pattern": {"kind": "prefix", "m": 3}, "bogus": 1},
            {"command": "certify", "lambda": [2, 0], "pattern": {"kind": "weird"}},
            {"command": "certify", "lambda": [2, 0]},
            {"command": "spectrum"},
            {"command": "preset", "preset": "no-such-preset"},
            {"command": "findim", "pattern": {"kind": "prefix", "m": 1}, "truncationDim": 40},
            {"command": "probe", "lambda": [2, 0], "pattern": {"kind": "prefix", "m": 1}, "probe": {"uRadius": 0}},
        ],
        ids=[
            "unknown-command",
            "unimodular-lambda",
            "unknown-key",
            "bad-pattern",
            "missing-pattern",
            "missing-operator",
            "missing-preset",
            "huge-matrix-dim",
            "zero-radius",
        ],
    )
    def test_rejected_configs(self, tmp_path, data):
        rc, out = _run(tmp_path, data)
        assert rc == 2
        assert not (out / "report.json").exists()


class TestVerdicts:
    def test_failing_run_exits_one_but_reports(self, tmp_path):
        data = {
            "command": "criterion",
            "lambda": [2, 0],
            "pattern": {"kind": "prefix", "m": 3},
            "targets": 5,
            "horizon": 5,
            "supportBound": 6,
        }
        rc, out = _run(tmp_path, data)
        assert rc == 1
        rep = _report(out)
        assert rep["passed"] is False
        assert rep["verdict"] == "fail"
        assert rep["report"]["verdict"]["condIII"] is False

    def test_probe_expectations_both_ways(self, tmp_path):
        hit = {
            "command": "probe",
            "lambda": [2, 0],
            "pattern": {"kind": "residue", "a": 0, "b": 2},
            "supportBound": 8,
            "horizon": 30,
            "truncationDim": 128,
        }
        rc, out = _run(tmp_path, hit, out="hit")
        assert rc == 0
        rep = _report(out)
        assert rep["report"]["found"] is True
        assert rep["report"]["n"] % 2 == 0

        miss = {
            "command": "probe",
            "lambda": [2, 0],
            "pattern": {"kind": "prefix", "m": 3},
            "horizon": 40,
            "truncationDim": 256,
            "expect": "none",
        }
        rc, out = _run(tmp_path, miss, out="miss")
        assert rc == 0
        assert _report(out)["report"]["found"] is False


class TestRunners:
    def test_construct_row_count(self, tmp_path):
        data = {
            "command": "construct",
            "lambda": [2, 0],
            "pattern": {"kind": "prefix", "m": 3},
            "targets": 6,
        }
        rc, out = _run(tmp_path, data)
        assert rc == 0
        lines = (out / "table.csv").read_text(encoding="utf-8").splitlines()
        assert len(lines) == 1 + 7

    def test_findim_quick(self, tmp_path):
        data = {
            "command": "findim",
            "pattern": {"kind": "residue", "a": 0, "b": 2},
            "truncationDim": 4,
            "supportBound": 4,
            "horizon": 2000,
            "trials": 2,
        }
        rc, out = _run(tmp_path, data)
        assert rc == 0
        rep = _report(out)
        for trial in rep["report"]["trials"]:
            assert trial["stabilized"] is True
            assert trial["densityDefect"] >= 0.5

    def test_kernel_quick(self, tmp_path):
        data = {"command": "kernel", "eigenInstances": 10, "chainInstances": 5}
        rc, out = _run(tmp_path, data)
        assert rc == 0
        rep = _report(out)
        assert rep["report"]["eigen"]["maxDeviation"] <= 1e-8
        assert rep["report"]["chain"]["maxResidual"] <= 1e-7

    def test_jordan_sweep(self, tmp_path):
        rc, out = _run(tmp_path, {"command": "jordan"})
        assert rc == 0
        rep = _report(out)
        assert len(rep["report"]["cases"]) == 12

    def test_preset_overlay(self, tmp_path):
        data = {"command": "preset", "preset": "certify-prefix3", "targets": 6}
        rc, out = _run(tmp_path, data)
        assert rc == 0
        rep = _report(out)
        assert rep["config"]["targets"] == 6
        lines = (out / "table.csv").read_text(encoding="utf-8").splitlines()
        assert len(lines) == 1 + 7

    def test_verbose_prints_rows(self, tmp_path, capsys):
        rc, _ = _run(
            tmp_path,
            {"command": "jordan"},
            extra=("--verbose",),
        )
        assert rc == 0
        printed = capsys.readouterr().out
        assert "maxRelError" in printed
        assert "PASS" in printed


class TestOutputRouting:
    def test_env_var_overrides_flag(self, tmp_path, monkeypatch):
        env_dir = tmp_path / "env-out"
        monkeypatch.setenv("ORBITLAB_OUT", str(env_dir))
        data = {"command": "jordan"}
        rc, flag_dir = _run(tmp_path, data, out="flag-out")
        assert rc == 0
        assert (env_dir / "report.json").exists()
        assert not flag_dir.exists()
