"""End-to-end tests for the command line interface."""

import json

import numpy as np
import pytest

from belldecomp import cli


def write_state(path, num_qubits, amps):
    path.write_text(
        json.dumps(
            {"num_qubits": num_qubits, "amps": [[z.real, z.imag] for z in amps]}
        )
    )
    return str(path)


def write_channel(path, pairs):
    path.write_text(
        json.dumps({"pairs": [[[z.real, z.imag] for z in pair] for pair in pairs]})
    )
    return str(path)


S = 1 / np.sqrt(2)
MES = [complex(S), 0j, 0j, complex(S)]
DIAG = [complex(0.8), 0j, 0j, complex(0.6)]
PRODUCT = [1 + 0j, 0j, 0j, 0j]


@pytest.fixture
def one_qubit(tmp_path):
    state = write_state(tmp_path / "s.json", 1, [0.6 + 0j, 0.8j])
    channel = write_channel(tmp_path / "c.json", [DIAG])
    return state, channel


class TestParsing:
    def test_missing_state_file(self, tmp_path, capsys):
        channel = write_channel(tmp_path / "c.json", [MES])
        code = cli.main(["teleport", "--state", str(tmp_path / "nope.json"), "--channel", channel])
        assert code == 2
        assert "cannot read state file" in capsys.readouterr().err

    def test_malformed_json(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code = cli.main(["decompose", "--channel", str(bad), "--outcome", "1"])
        assert code == 2

    def test_wrong_amplitude_count(self, tmp_path, capsys):
        state = write_state(tmp_path / "s.json", 2, [1 + 0j, 0j])
        channel = write_channel(tmp_path / "c.json", [MES, MES])
        code = cli.main(["teleport", "--state", state, "--channel", channel])
        assert code == 2
        assert "expected 4 amplitudes" in capsys.readouterr().err

    def test_zero_state_rejected(self, tmp_path, capsys):
        state = write_state(tmp_path / "s.json", 1, [0j, 0j])
        channel = write_channel(tmp_path / "c.json", [MES])
        assert cli.main(["teleport", "--state", state, "--channel", channel]) == 2

    def test_unnormalized_inputs_warn(self, tmp_path, capsys):
        state = write_state(tmp_path / "s.json", 1, [1 + 0j, 1 + 0j])
        channel = write_channel(tmp_path / "c.json", [[1 + 0j, 0j, 0j, 1 + 0j]])
        code = cli.main(["teleport", "--state", state, "--channel", channel])
        err = capsys.readouterr().err
        assert code == 0
        assert "state" in err and "renormalized" in err
        assert "pair 1" in err

    def test_size_mismatch(self, tmp_path, capsys):
        state = write_state(tmp_path / "s.json", 1, [1 + 0j, 0j])
        channel = write_channel(tmp_path / "c.json", [MES, MES])
        assert cli.main(["teleport", "--state", state, "--channel", channel]) == 2

    def test_unknown_command_is_usage_error(self, capsys):
        assert cli.main(["frobnicate"]) == 2

    def test_bad_outcome_digits(self, tmp_path, capsys):
        channel = write_channel(tmp_path / "c.json", [MES])
        assert cli.main(["decompose", "--channel", channel, "--outcome", "5"]) == 2
        assert cli.main(["decompose", "--channel", channel, "--outcome", "12"]) == 2


class TestDecompose:
    def test_prints_blocks_and_inverse(self, tmp_path, capsys):
        channel = write_channel(tmp_path / "c.json", [DIAG])
        code = cli.main(["decompose", "--channel", channel, "--outcome", "3"])
        out = capsys.readouterr().out
        assert code == 0
        assert "block for pair 1, result 3" in out
        assert "inverse decomposition matrix" in out
        assert "full block table" in out

    def test_outcome_accepts_commas(self, tmp_path, capsys):
        channel = write_channel(tmp_path / "c.json", [MES, MES, MES])
        code = cli.main(["decompose", "--channel", channel, "--outcome", "2,3,4"])
        out = capsys.readouterr().out
        assert code == 0
        assert "outcome 234" in out

    def test_non_invertible_pair_is_reported_not_fatal(self, tmp_path, capsys):
        channel = write_channel(tmp_path / "c.json", [PRODUCT])
        code = cli.main(["decompose", "--channel", channel, "--outcome", "1"])
        out = capsys.readouterr().out
        assert code == 0
        assert "inverse: not available" in out


class TestTeleport:
    def test_round_trip(self, one_qubit, capsys):
        state, channel = one_qubit
        code = cli.main(["teleport", "--state", state, "--channel", channel, "--seed", "3"])
        out = capsys.readouterr().out
        assert code == 0
        assert "fidelity to input: 1.0000000000" in out

    def test_deterministic_for_seed(self, one_qubit, capsys):
        state, channel = one_qubit
        cli.main(["teleport", "--state", state, "--channel", channel, "--seed", "9"])
        first = capsys.readouterr().out
        cli.main(["teleport", "--state", state, "--channel", channel, "--seed", "9"])
        second = capsys.readouterr().out
        assert first == second

    def test_product_pair_fails_criterion(self, tmp_path, capsys):
        state = write_state(tmp_path / "s.json", 1, [0.6 + 0j, 0.8j])
        channel = write_channel(tmp_path / "c.json", [PRODUCT])
        code = cli.main(["teleport", "--state", state, "--channel", channel])
        out = capsys.readouterr().out
        assert code == 3
        assert "criterion: FAILURE (pair(s) 1 not invertible)" in out


class TestVerify:
    def test_bundled_fixture_passes(self, capsys):
        code = cli.main(["verify"])
        out = capsys.readouterr().out
        assert code == 0
        assert "result: PASS" in out
        assert "check oracle-equivalence: PASS" in out
        assert "check recovery-fidelity: PASS" in out

    def test_impossible_tolerance_fails(self, capsys):
        code = cli.main(["verify", "--tol-eq", "0"])
        out = capsys.readouterr().out
        assert code == 1
        assert "result: FAIL" in out

    def test_non_invertible_channel_skips_recovery(self, tmp_path, capsys):
        state = write_state(tmp_path / "s.json", 1, [0.6 + 0j, 0.8j])
        channel = write_channel(tmp_path / "c.json", [PRODUCT])
        code = cli.main(["verify", "--state", state, "--channel", channel])
        out = capsys.readouterr().out
        assert code == 0
        assert "check recovery-fidelity: SKIP" in out

    def test_random_instances_and_output_file(self, tmp_path, capsys):
        out_file = tmp_path / "report.txt"
        code = cli.main(["verify", "--random-instances", "2", "--seed", "11", "--output", str(out_file)])
        out = capsys.readouterr().out
        assert code == 0
        assert "[random 2/2, seed 12]" in out
        assert out_file.read_text() == out


class TestSweep:
    def test_csv_schema(self, one_qubit, capsys):
        state, channel = one_qubit
        code = cli.main(["sweep", "--state", state, "--channel", channel, "--theta-steps", "5"])
        lines = capsys.readouterr().out.splitlines()
        assert code == 0
        assert lines[0] == "theta,outcome,probability,abs_det_min,min_singular_value"
        assert len(lines) == 1 + 5 * 4
        first = lines[1].split(",")
        assert first[0] == "0"
        assert first[1] == "1"
        total = sum(float(line.split(",")[2]) for line in lines[1:5])
        assert total == pytest.approx(1.0, abs=1e-10)

    def test_identical_runs_are_byte_identical(self, one_qubit, tmp_path):
        state, channel = one_qubit
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["sweep", "--state", state, "--channel", channel, "--theta-steps", "7"]
        assert cli.main(args + ["--output", str(a)]) == 0
        assert cli.main(args + ["--output", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_pair_index_validated(self, one_qubit, capsys):
        state, channel = one_qubit
        assert cli.main(["sweep", "--state", state, "--channel", channel, "--pair", "2"]) == 2

    def test_output_dir_env_var(self, one_qubit, tmp_path, monkeypatch):
        state, channel = one_qubit
        monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path / "out"))
        code = cli.main(
            ["sweep", "--state", state, "--channel", channel, "--output", "grid.csv"]
        )
        assert code == 0
        assert (tmp_path / "out" / "grid.csv").exists()

    def test_multi_pair_sweep_varies_chosen_pair(self, tmp_path, capsys):
        rng = np.random.default_rng(90)
        amps = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        amps /= np.linalg.norm(amps)
        state = write_state(tmp_path / "s.json", 2, list(amps))
        channel = write_channel(tmp_path / "c.json", [MES, MES])
        code = cli.main(
            ["sweep", "--state", state, "--channel", channel, "--pair", "2",
             "--theta-steps", "3"]
        )
        lines = capsys.readouterr().out.splitlines()
        assert code == 0
        assert len(lines) == 1 + 3 * 16
        # theta = 0 makes pair 2 a product pair: min |det| over pairs is 0
        assert float(lines[1].split(",")[3]) == 0.0
