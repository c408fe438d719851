"""End-to-end runs of the JSON-config driver against temporary directories."""

import json
import math
import subprocess
import sys

import pytest

from susyqm import cli

BOX = {"x_min": -10.0, "x_max": 10.0, "n_points": 401}


def write_config(tmp_path, payload, name="run.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def spectrum_config(**overrides):
    cfg = {
        "command": "spectrum",
        "superpotential": {"name": "harmonic"},
        "grid": dict(BOX),
        "levels": 4,
    }
    cfg.update(overrides)
    return cfg


def read_csv(path):
    text = path.read_text(encoding="utf-8")
    assert "\r" not in text
    assert text.endswith("\n")
    lines = text.splitlines()
    return lines[0].split(","), [line.split(",") for line in lines[1:]]


class TestSpectrumCommand:
    def test_csv_run(self, tmp_path):
        cfg = write_config(tmp_path, spectrum_config())
        rc = cli.main(["--config", cfg, "--out", str(tmp_path), "--format", "csv"])
        assert rc == 0
        header, rows = read_csv(tmp_path / "spectrum.csv")
        assert header == ["index", "E_plus", "E_minus", "gap"]
        assert len(rows) == 4
        assert [r[0] for r in rows] == ["1", "2", "3", "4"]
        assert max(abs(float(r[3])) for r in rows) <= 1e-10
        zheader, zrows = read_csv(tmp_path / "zero_mode.csv")
        assert zheader == ["x", "re", "im"]
        assert len(zrows) == BOX["n_points"]

    def test_json_run(self, tmp_path):
        cfg = write_config(tmp_path, spectrum_config())
        rc = cli.main(["--config", cfg, "--out", str(tmp_path), "--format", "json"])
        assert rc == 0
        payload = json.loads((tmp_path / "spectrum.json").read_text())
        assert payload["superpotential"] == "harmonic"
        assert abs(payload["zero_mode_energy"]) <= 1e-10
        assert len(payload["pairs"]) == 4
        zm = json.loads((tmp_path / "zero_mode.json").read_text())
        assert len(zm["x"]) == len(zm["re"]) == len(zm["im"]) == BOX["n_points"]

    def test_sign_condition_violation_exits_one(self, tmp_path, capsys):
        cfg = write_config(tmp_path, spectrum_config(
            superpotential={"name": "harmonic", "params": {"scale": -1.0}}))
        rc = cli.main(["--config", cfg, "--out", str(tmp_path)])
        assert rc == 1
        assert "physics violation" in capsys.readouterr().err


class TestEntangleCommand:
    def entangle_config(self, **overrides):
        cfg = {
            "command": "entangle",
            "superpotential": {"name": "harmonic"},
            "grid": dict(BOX),
            "level": 1,
            "sweep": {"c1_points": 5, "phase_points": 4},
        }
        cfg.update(overrides)
        return cfg

    def test_sweep_csv(self, tmp_path):
        cfg = write_config(tmp_path, self.entangle_config())
        rc = cli.main(["--config", cfg, "--out", str(tmp_path)])
        assert rc == 0
        header, rows = read_csv(tmp_path / "entangle.csv")
        assert header == list(cli.SWEEP_COLUMNS)
        assert len(rows) == 5 * 4
        vals = [[float(c) for c in r] for r in rows]
        for r in vals:
            c1, c_spin, c_over, c_svd = r[0], r[8], r[9], r[10]
            assert abs(c_spin - c_svd) <= 1e-12
            assert abs(c_spin - c_over) <= 1e-12
            if c1 in (0.0, 1.0):  # product states at the sweep edges
                assert c_spin <= 1e-6
        assert max(r[8] for r in vals) > 0.9

    def test_overlapping_partners_cap_concurrence(self, tmp_path):
        # broken parity makes <psi+|psi-> nonzero, so C cannot reach 1
        cfg = write_config(tmp_path, self.entangle_config(
            superpotential={"name": "shifted_cubic"},
            sweep={"c1_points": 9, "phase_points": 1}))
        rc = cli.main(["--config", cfg, "--out", str(tmp_path)])
        assert rc == 0
        _, rows = read_csv(tmp_path / "entangle.csv")
        vals = [[float(c) for c in r] for r in rows]
        assert vals[0][2] > 0.01  # overlap_abs column
        assert max(r[10] for r in vals) < 1.0 - 1e-4

    def test_default_sweep_density(self, tmp_path):
        cfg = write_config(tmp_path, self.entangle_config(sweep={}))
        rc = cli.main(["--config", cfg, "--out", str(tmp_path), "--format", "json"])
        assert rc == 0
        payload = json.loads((tmp_path / "entangle.json").read_text())
        assert len(payload["rows"]) == 21 * 8
        assert set(payload["rows"][0]) == set(cli.SWEEP_COLUMNS)
        assert payload["E_plus"] == pytest.approx(payload["E_minus"], abs=1e-10)


class TestSuperchargeCommand:
    def test_rows_and_residuals(self, tmp_path):
        cfg = write_config(tmp_path, {
            "command": "supercharge",
            "superpotential": {"name": "harmonic"},
            "grid": dict(BOX),
            "levels": 2,
        })
        rc = cli.main(["--config", cfg, "--out", str(tmp_path)])
        assert rc == 0
        header, rows = read_csv(tmp_path / "supercharge.csv")
        assert header == ["index", "energy", "family", "sign", "residual",
                          "concurrence"]
        assert len(rows) == 2 * 4
        for r in rows:
            assert r[2] in ("q1", "q2")
            assert r[3] in ("+1", "-1")
            assert float(r[4]) <= 1e-8
            assert float(r[5]) == pytest.approx(1.0, abs=1e-10)
        assert {(r[0], r[2], r[3]) for r in rows} == {
            (i, fam, s) for i in ("1", "2") for fam in ("q1", "q2")
            for s in ("+1", "-1")
        }


class TestJCCommand:
    def test_levels_and_algebra_reports(self, tmp_path):
        cfg = write_config(tmp_path, {
            "command": "jc",
            "jc_params": {"omega": 1.0, "gamma": 0.1, "n_max": 16},
        })
        rc = cli.main(["--config", cfg, "--out", str(tmp_path), "--format", "csv"])
        assert rc == 0
        header, rows = read_csv(tmp_path / "jc_levels.csv")
        assert header == ["n", "branch", "E_analytic", "E_numeric", "gap",
                          "concurrence"]
        assert len(rows) == 1 + 2 * 14  # ground + doublets up to the guard
        assert max(float(r[4]) for r in rows) <= 1e-10
        alg = json.loads((tmp_path / "jc_algebra.json").read_text())
        assert alg["guard_n_max"] == 14
        idn = alg["identities"]
        for name in ("q1_sq_minus_q2_sq", "anti_q1_q2", "comm_q_h0_guarded",
                      "anti_sz_q"):
            assert idn[name] <= 1e-12
        assert alg["match_summary"]["all_matched"] is True
        labels = alg["eigenstate_label_check"]
        assert labels["implemented_upper_label_n_minus_1"] <= 1e-12
        assert labels["alternative_upper_label_n_plus_1"] > 1.0


class TestVerifyCommand:
    def test_clean_superpotential_passes(self, tmp_path):
        cfg = write_config(tmp_path, {
            "command": "verify",
            "superpotential": {"name": "harmonic"},
            "grid": {"x_min": -10.0, "x_max": 10.0, "n_points": 201},
            "levels": 6,
        })
        rc = cli.main(["--config", cfg, "--out", str(tmp_path)])
        assert rc == 0
        payload = json.loads((tmp_path / "verify.json").read_text())
        assert payload["passed"] is True
        assert len(payload["checks"]) == 11
        assert all(c["passed"] for c in payload["checks"])
        assert all(c["value"] <= c["bound"] for c in payload["checks"])

    def test_wall_bound_superpotential_fails_honestly(self, tmp_path, capsys):
        # tanh's kernel vector does not vanish at the box edge, so the
        # zero-mode checks must come back red while the report still writes
        cfg = write_config(tmp_path, {
            "command": "verify",
            "superpotential": {"name": "tanh"},
            "grid": {"x_min": -10.0, "x_max": 10.0, "n_points": 201},
            "levels": 6,
        })
        rc = cli.main(["--config", cfg, "--out", str(tmp_path)])
        assert rc == 1
        payload = json.loads((tmp_path / "verify.json").read_text())
        assert payload["passed"] is False
        failed = {c["name"] for c in payload["checks"] if not c["passed"]}
        assert "zero_mode_residual" in failed
        assert "verify:" in capsys.readouterr().err


class TestConfigErrors:
    def run_expecting_config_error(self, tmp_path, capsys, payload, needle):
        cfg = write_config(tmp_path, payload)
        rc = cli.main(["--config", cfg, "--out", str(tmp_path)])
        assert rc == 2
        err = capsys.readouterr().err
        assert "config error" in err
        assert needle in err

    def test_missing_field(self, tmp_path, capsys):
        payload = spectrum_config()
        del payload["grid"]
        self.run_expecting_config_error(tmp_path, capsys, payload, "grid")

    def test_unknown_key_rejected(self, tmp_path, capsys):
        self.run_expecting_config_error(
            tmp_path, capsys, spectrum_config(extra=1), "extra")

    def test_unknown_superpotential(self, tmp_path, capsys):
        self.run_expecting_config_error(
            tmp_path, capsys,
            spectrum_config(superpotential={"name": "quartic"}), "quartic")

    def test_unknown_command(self, tmp_path, capsys):
        self.run_expecting_config_error(
            tmp_path, capsys, {"command": "explode"}, "command")

    def test_levels_capped_by_grid(self, tmp_path, capsys):
        self.run_expecting_config_error(
            tmp_path, capsys, spectrum_config(levels=50), "levels")

    def test_boolean_not_a_number(self, tmp_path, capsys):
        bad = spectrum_config(grid={"x_min": True, "x_max": 10.0, "n_points": 401})
        self.run_expecting_config_error(tmp_path, capsys, bad, "x_min")

    def test_jc_cutoff_too_small(self, tmp_path, capsys):
        self.run_expecting_config_error(
            tmp_path, capsys,
            {"command": "jc", "jc_params": {"omega": 1.0, "gamma": 0.1, "n_max": 3}},
            "n_max")

    def test_bad_output_format(self, tmp_path, capsys):
        self.run_expecting_config_error(
            tmp_path, capsys, spectrum_config(output={"format": "xml"}), "xml")

    def test_invalid_json(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{ not json", encoding="utf-8")
        rc = cli.main(["--config", str(path), "--out", str(tmp_path)])
        assert rc == 2
        assert "not valid JSON" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path, capsys):
        rc = cli.main(["--config", str(tmp_path / "absent.json")])
        assert rc == 2
        assert "cannot read" in capsys.readouterr().err


class TestOutputResolution:
    def test_config_output_block_used_when_flags_absent(self, tmp_path):
        outdir = tmp_path / "fromconfig"
        cfg = write_config(tmp_path, spectrum_config(
            output={"path": str(outdir), "format": "json"}))
        rc = cli.main(["--config", cfg])
        assert rc == 0
        assert (outdir / "spectrum.json").exists()
        assert not (outdir / "spectrum.csv").exists()

    def test_flags_override_output_block(self, tmp_path):
        configured = tmp_path / "fromconfig"
        override = tmp_path / "fromflag"
        cfg = write_config(tmp_path, spectrum_config(
            output={"path": str(configured), "format": "json"}))
        rc = cli.main(["--config", cfg, "--out", str(override), "--format", "csv"])
        assert rc == 0
        assert (override / "spectrum.csv").exists()
        assert not configured.exists()


class TestDeterminism:
    def test_repeat_runs_byte_identical(self, tmp_path):
        cfg = write_config(tmp_path, spectrum_config())
        first, second = tmp_path / "a", tmp_path / "b"
        assert cli.main(["--config", cfg, "--out", str(first)]) == 0
        assert cli.main(["--config", cfg, "--out", str(second)]) == 0
        for name in ("spectrum.csv", "zero_mode.csv"):
            assert (first / name).read_bytes() == (second / name).read_bytes()


def test_module_entry_point_help():
    out = subprocess.run([sys.executable, "-m", "susyqm.cli", "--help"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    for flag in ("--config", "--out", "--format"):
        assert flag in out.stdout
