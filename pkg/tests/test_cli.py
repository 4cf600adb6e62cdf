"""End-to-end CLI behaviour: verbs, exit codes, artifacts, provenance."""

import json

import pytest

from gsrepeater import cli

SMALL_SPACE = [
    "--tree-depths", "2", "--b-max", "4", "--m1-max", "200",
]


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEvaluate:
    def test_summary_line(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "evaluate", "--gamma-ghz", "2", "--tcoh-s", "0.013",
            "--protocol", "tree", "--scheme", "ancilla",
            "--branchings", "4,16,5", "--m", "587",
        )
        assert code == 0
        assert out.count("\n") == 1
        assert "R_eff = " in out
        assert "geometry = 4-16-5" in out
        assert "secure = true" in out

    def test_total_loss_is_zero_rate_success(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "evaluate", "--gamma-ghz", "2", "--tcoh-s", "0.013",
            "--mu-coup", "1.0",
        )
        assert code == 0
        assert "R_eff = 0.000000e+00" in out
        assert "secure = false" in out

    def test_config_file_with_override(self, capsys, tmp_path):
        conf = tmp_path / "run.conf"
        conf.write_text(
            "gamma_ghz = 2.0\n"
            "tcoh_s = 0.013\n"
            "branchings = 4,16,5\n"
            "m = 587  # stations\n"
        )
        code, out, _ = run_cli(capsys, "evaluate", "--config", str(conf))
        code2, out2, _ = run_cli(
            capsys, "evaluate", "--config", str(conf), "--m", "100"
        )
        assert code == 0 and code2 == 0
        assert "m = 587" in out
        assert "m = 100" in out2  # flag wins over file

    def test_missing_config_is_validation_error(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "evaluate", "--config", str(tmp_path / "absent.conf")
        )
        assert code == 2
        assert "no such file" in err

    def test_missing_gamma_is_validation_error(self, capsys):
        code, _, err = run_cli(capsys, "evaluate", "--tcoh-s", "1")
        assert code == 2
        assert "gamma_ghz" in err

    def test_artifact_row(self, capsys, tmp_path):
        out_path = tmp_path / "eval.csv"
        code, _, _ = run_cli(
            capsys,
            "evaluate", "--gamma-ghz", "2", "--tcoh-s", "0.013",
            "--branchings", "4,16,5", "--m", "587",
            "--output", str(out_path),
        )
        assert code == 0
        lines = out_path.read_text().strip().split("\n")
        header = [l for l in lines if not l.startswith("#")]
        assert header[0].startswith("gamma_ghz,tcoh_s,")
        assert len(header) == 2
        assert ",4-16-5,587," in header[1]


class TestOptimize:
    def test_artifact_and_summary(self, capsys, tmp_path):
        out_path = tmp_path / "opt.csv"
        code, out, _ = run_cli(
            capsys,
            "optimize", "--gamma-ghz", "100", "--tcoh-s", "1",
            "--protocol", "tree", "--scheme", "ancilla",
            *SMALL_SPACE, "--output", str(out_path),
        )
        assert code == 0
        assert "R_eff = " in out and "secure = " in out
        text = out_path.read_text()
        assert "# verb = optimize" in text
        assert "# b_max = 4" in text

    def test_rerun_byte_identical(self, capsys, tmp_path):
        argv = [
            "optimize", "--gamma-ghz", "100", "--tcoh-s", "1",
            "--protocol", "tree", "--scheme", "ancilla", *SMALL_SPACE,
        ]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert cli.main(argv + ["--output", str(a)]) == 0
        assert cli.main(argv + ["--output", str(b)]) == 0
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()

    def test_json_format(self, capsys, tmp_path):
        out_path = tmp_path / "opt.json"
        code, _, _ = run_cli(
            capsys,
            "optimize", "--gamma-ghz", "100", "--tcoh-s", "1",
            "--protocol", "tree", "--scheme", "ancilla",
            *SMALL_SPACE, "--output", str(out_path), "--format", "json",
        )
        assert code == 0
        payload = json.loads(out_path.read_text())
        assert payload["provenance"]["verb"] == "optimize"
        assert payload["provenance"]["m1_max"] == 200
        assert len(payload["rows"]) == 1

    def test_outdir_env(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv(cli.OUTDIR_ENV, str(tmp_path))
        code, _, _ = run_cli(
            capsys,
            "optimize", "--gamma-ghz", "100", "--tcoh-s", "1",
            "--protocol", "tree", "--scheme", "ancilla",
            *SMALL_SPACE, "--output", "rel.csv",
        )
        assert code == 0
        assert (tmp_path / "rel.csv").exists()

    def test_bad_space_is_validation_error(self, capsys):
        code, _, err = run_cli(
            capsys,
            "optimize", "--gamma-ghz", "100", "--tcoh-s", "1",
            "--b-min", "0",
        )
        assert code == 2
        assert "b_min" in err


class TestSweep:
    def test_grid_artifact(self, capsys, tmp_path):
        out_path = tmp_path / "sweep.csv"
        code, out, _ = run_cli(
            capsys,
            "sweep", "--protocol", "tree", "--scheme", "ancilla",
            "--grid", "10,100x0.001,1", *SMALL_SPACE,
            "--output", str(out_path), "--parallelism", "2",
        )
        assert code == 0
        assert out.startswith("rows = 4  best: ")
        rows = [
            l for l in out_path.read_text().strip().split("\n")
            if not l.startswith("#")
        ]
        assert len(rows) == 5  # header + 4 grid points
        assert rows[1].startswith("10.0,0.001,")
        assert rows[4].startswith("100.0,1.0,")

    def test_bad_grid_exits_2(self, capsys):
        code, _, err = run_cli(
            capsys,
            "sweep", "--protocol", "tree", "--scheme", "ancilla",
            "--grid", "bad",
        )
        assert code == 2
        assert "grid" in err


class TestScan:
    def test_l_km_column(self, capsys, tmp_path):
        out_path = tmp_path / "scan.csv"
        code, _, _ = run_cli(
            capsys,
            "scan", "--protocol", "tree", "--scheme", "ancilla",
            "--l-km-grid", "500,1000", *SMALL_SPACE,
            "--output", str(out_path), "--parallelism", "2",
        )
        assert code == 0
        lines = out_path.read_text().strip().split("\n")
        assert "# l_km_grid = 500,1000" in lines
        header = [l for l in lines if not l.startswith("#")]
        assert header[0].endswith(",secure,L_km")
        assert header[1].endswith(",500.0")
        assert header[2].endswith(",1000.0")

    def test_default_operating_point_in_provenance(self, capsys, tmp_path):
        out_path = tmp_path / "scan.csv"
        code, _, _ = run_cli(
            capsys,
            "scan", "--protocol", "tree", "--scheme", "ancilla",
            "--l-km-grid", "500", *SMALL_SPACE, "--output", str(out_path),
        )
        assert code == 0
        text = out_path.read_text()
        assert "# gamma_ghz = 10.0" in text
        assert "# tcoh_s = 0.001" in text

    def test_bad_distance_exits_2(self, capsys):
        code, _, _ = run_cli(
            capsys,
            "scan", "--protocol", "tree", "--scheme", "ancilla",
            "--l-km-grid", "0",
        )
        assert code == 2


class TestSequence:
    def test_trace_file(self, capsys, tmp_path):
        out_path = tmp_path / "trace.txt"
        code, out, _ = run_cli(
            capsys,
            "sequence", "--gamma-ghz", "1", "--tcoh-s", "1",
            "--protocol", "rgs", "--scheme", "feedback",
            "--branchings", "2,3", "--rgs-n", "6",
            "--output", str(out_path),
        )
        assert code == 0
        assert "photons = 54" in out
        assert "geometry = 6:2-3" in out
        assert len(out_path.read_text().strip().split("\n")) > 54

    def test_summary_only_without_output(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "sequence", "--gamma-ghz", "1", "--tcoh-s", "1",
            "--branchings", "2,3",
        )
        assert code == 0
        assert out.count("\n") == 1
        assert "makespan = " in out


class TestOracle:
    def test_exhaustive(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "oracle", "--kind", "exhaustive", "--branchings", "2,3",
            "--mu", "0.1",
        )
        assert code == 0
        assert "0.7215787800000002" in out

    def test_mc_tree_deterministic(self, capsys):
        argv = (
            "oracle", "--kind", "mc-tree", "--branchings", "2,3",
            "--mu", "0.1", "--eps-sp", "0.001",
            "--trials", "20000", "--seed", "7",
        )
        code, out_a, _ = run_cli(capsys, *argv)
        code_b, out_b, _ = run_cli(capsys, *argv)
        assert code == 0 and code_b == 0
        assert out_a == out_b
        assert "seed = 7" in out_a

    def test_mc_rgs(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "oracle", "--kind", "mc-rgs", "--branchings", "2,2",
            "--rgs-n", "4", "--mu", "0.05", "--trials", "20000",
        )
        assert code == 0
        assert "mc rgs success" in out
        assert "infidelity" in out

    def test_photon_cap_is_validation_error(self, capsys):
        code, _, err = run_cli(
            capsys,
            "oracle", "--kind", "exhaustive", "--branchings", "4,16,5",
        )
        assert code == 2
        assert "photon" in err.lower()


class TestParser:
    def test_unknown_verb(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["frobnicate"])
        capsys.readouterr()
        assert exc.value.code == 2

    def test_unknown_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["evaluate", "--no-such-flag", "1"])
        capsys.readouterr()
        assert exc.value.code == 2
