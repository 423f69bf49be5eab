"""CLI subcommands, flags, config files, and exit codes."""

import json
import math

import pytest

from gibbslab.cli import cli_run


def run(capsys, *argv):
    code = cli_run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCertify:
    def test_independent_set_psd(self, capsys):
        code, out, _ = run(capsys, "certify", "--model", "independent_set",
                           "--lambda", "1")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "PsdForAlpha(1)"
        payload = json.loads(lines[1])
        assert payload["verdict"] == "psd_for_alpha" and payload["alpha"] == 1.0

    def test_uncertified_model_fails(self, capsys):
        code, out, _ = run(capsys, "certify", "--model", "xor", "--k", "3",
                           "--beta", "0.5")
        assert code == 1
        assert "not certified" in out

    def test_ksat_certified(self, capsys):
        code, out, _ = run(capsys, "certify", "--model", "ksat", "--k", "3",
                           "--beta", "0.5")
        assert code == 0 and "certified" in out


class TestLogz:
    def test_potts_exact_value(self, capsys):
        code, out, _ = run(capsys, "logz", "--model", "potts", "--q", "3",
                           "--beta", "0", "--n", "4", "--c", "1", "--seed", "7",
                           "--exact")
        assert code == 0
        row = json.loads(out)
        assert row["method"] == "exact" and row["seed"] == 7
        assert row["logz"] == pytest.approx(4 * math.log(3), rel=1e-12)

    def test_mc_row(self, capsys):
        code, out, _ = run(capsys, "logz", "--model", "independent_set",
                           "--lambda", "1", "--n", "3", "--c", "1", "--seed", "2",
                           "--mc", "--samples", "2000")
        assert code == 0
        row = json.loads(out)
        assert row["method"] == "mc" and "se" in row


class TestUsageErrors:
    def test_unknown_flag(self, capsys):
        code, _, _ = run(capsys, "logz", "--badflag")
        assert code == 2

    def test_unknown_model(self, capsys):
        code, _, err = run(capsys, "certify", "--model", "nope")
        assert code == 2 and "error" in err

    def test_missing_subcommand(self, capsys):
        code, _, _ = run(capsys)
        assert code == 2

    def test_exact_beyond_cap_suggests_mc(self, capsys):
        code, _, err = run(capsys, "logz", "--model", "independent_set",
                           "--lambda", "1", "--n", "30", "--c", "1", "--exact")
        assert code == 2 and "--mc" in err

    def test_out_of_range_parameter(self, capsys):
        code, _, err = run(capsys, "certify", "--model", "independent_set",
                           "--lambda", "-1")
        assert code == 2


class TestModelShowAndGen:
    def test_show_prints_soft_constants(self, capsys):
        code, out, _ = run(capsys, "model", "show", "--model", "ksat",
                           "--k", "3", "--beta", "0.5")
        assert code == 0
        payload = json.loads(out)
        assert payload["soft"]["rho_min"] == pytest.approx(math.exp(-0.5))
        assert payload["soft"]["kappa"] == 2.0

    def test_gen_deterministic(self, capsys):
        code, out1, _ = run(capsys, "gen", "--n", "6", "--c", "1.5", "--k", "2",
                            "--seed", "4")
        assert code == 0
        _, out2, _ = run(capsys, "gen", "--n", "6", "--c", "1.5", "--k", "2",
                         "--seed", "4")
        assert out1 == out2
        payload = json.loads(out1)
        assert payload["n"] == 6 and len(payload["edges"]) == 9

    def test_config_file(self, capsys, tmp_path):
        cfg = tmp_path / "model.json"
        cfg.write_text(json.dumps({"model": "potts",
                                   "params": {"q": 3, "beta": 0.0},
                                   "seed": 7}))
        code, out, _ = run(capsys, "logz", "--config", str(cfg), "--n", "4",
                           "--c", "1")
        assert code == 0
        row = json.loads(out)
        assert row["seed"] == 7
        assert row["logz"] == pytest.approx(4 * math.log(3), rel=1e-12)


class TestExperimentCommands:
    def test_moments_pass(self, capsys):
        code, out, _ = run(capsys, "moments", "--model", "independent_set",
                           "--lambda", "1", "--n", "3", "--n1", "1", "--r", "2")
        assert code == 0
        record = json.loads(out)
        assert record["verdict"] == "pass"

    def test_interpolate_writes_records(self, capsys, tmp_path):
        out_path = tmp_path / "records.jsonl"
        csv_path = tmp_path / "records.csv"
        code, out, _ = run(capsys, "interpolate", "--model", "independent_set",
                           "--lambda", "1", "--n", "4", "--n1", "2", "--c", "1",
                           "--samples", "60", "--seed", "3",
                           "--out", str(out_path), "--csv", str(csv_path))
        assert code == 0
        record = json.loads(out)
        assert record["experiment"] == "interpolation_monotonicity"
        assert out_path.read_text().strip() == json.dumps(
            record, separators=(",", ":"))
        assert csv_path.read_text().startswith("experiment,verdict,timestamp")

    def test_concentrate_and_converge(self, capsys):
        code, out, _ = run(capsys, "concentrate", "--model", "independent_set",
                           "--lambda", "1", "--n-list", "4,6", "--c", "1",
                           "--samples", "50", "--seed", "1")
        assert code in (0, 1)  # verdict depends on the tiny sample slope
        code, out, _ = run(capsys, "converge", "--model", "potts", "--q", "2",
                           "--beta", "0", "--n-list", "4,8", "--c", "1",
                           "--samples", "10", "--seed", "1")
        assert code == 0
        assert json.loads(out)["verdict"] == "report"
