import pytest

from typing import Any

from pathlib import Path

from mvkit.model_file import Model, parse_model_file
from mvkit.suites import SUITES, Suite

from mvkit.scripts.mvkit_cmd import main

from models import get_model_filename


LADDER1 = str(get_model_filename("ladder1.mv"))
Z4 = str(get_model_filename("z4.mv"))

SMALL = ["--trials", "2", "--max-order", "8", "--max-rank", "1", "--max-factors", "2"]


def exit_code(argv: list[str]) -> int:
    """Run main(), returning its exit status."""
    try:
        main(argv)
    except SystemExit as exc:
        assert isinstance(exc.code, int)
        return exc.code
    return 0


class TestParse:
    def test_prints_model(self, capsys: Any) -> None:
        assert exit_code(["parse", Z4]) == 0
        out, _ = capsys.readouterr()
        assert "group Z4 = [4]" in out
        assert parse_model_file(out).names() == parse_model_file(
            Path(Z4).read_text()
        ).names()

    def test_bad_model(self, tmp_path: Path, capsys: Any) -> None:
        filename = tmp_path / "bad.mv"
        filename.write_text("group A = [2]\nrow R : A\n")
        assert exit_code(["parse", str(filename)]) == 2

        out, err = capsys.readouterr()
        assert out == ""
        assert err.startswith("ModelParseError: line 2: ")
        assert err.endswith(f"In model file {filename}\n")

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(FileNotFoundError):
            main(["parse", str(tmp_path / "nope.mv")])


class TestCheck:
    def test_z4(self, capsys: Any) -> None:
        assert exit_code(["check", Z4]) == 0
        out, _ = capsys.readouterr()
        assert "row R: " in out
        assert "FAIL" not in out
        assert "ladder I: all squares commute" in out

    def test_k_ladder(self, capsys: Any) -> None:
        assert exit_code(["check", LADDER1, "--ladder", "L"]) == 0
        out, _ = capsys.readouterr()
        assert out == "ladder L: valid\n"

    def test_non_commuting(self, tmp_path: Path, capsys: Any) -> None:
        filename = tmp_path / "bad.mv"
        filename.write_text(
            Path(Z4).read_text()
            + "hom zero2 : Z2 -> Z2 = zero\n"
            + "ladder J { top: R, bottom: R, verticals: [id2, id4, zero2] }\n"
        )
        assert exit_code(["check", str(filename), "--ladder", "J"]) == 1
        out, _ = capsys.readouterr()
        assert out.startswith("ladder J: square 1 does not commute")

    def test_unknown_ladder(self, capsys: Any) -> None:
        assert exit_code(["check", LADDER1, "--ladder", "nope"]) == 2
        _, err = capsys.readouterr()
        assert err == "no ladder named 'nope'\n"


class TestLadderCommands:
    def test_mv1(self, capsys: Any) -> None:
        assert exit_code(["mv1", LADDER1]) == 0
        out, _ = capsys.readouterr()
        assert out.startswith("suite: mv1\n")
        assert "weibel" in out

    def test_mv2_machine(self, capsys: Any) -> None:
        assert exit_code(["mv2", LADDER1, "--ladder", "L", "--emit", "machine"]) == 0
        out, _ = capsys.readouterr()
        assert 'fact.x="Z/2"' in out.splitlines()

    def test_phi(self, capsys: Any) -> None:
        assert exit_code(["phi", LADDER1, "--emit", "machine"]) == 0
        out, _ = capsys.readouterr()
        assert 'fact.phi_kernel="0"' in out.splitlines()

    def test_unknown_ladder(self, capsys: Any) -> None:
        assert exit_code(["mv2", LADDER1, "--ladder", "M"]) == 2
        _, err = capsys.readouterr()
        assert err == "InstanceError: mv2: no K-group ladder named 'M'\n"


def always_fails(model: Model) -> str | None:
    return "always fails"


class TestProps:
    def test_passing(self, capsys: Any) -> None:
        assert exit_code(["props", "--suite", "group", *SMALL, "--emit", "machine"]) == 0
        out, _ = capsys.readouterr()
        assert out.startswith("suite=group\nseed=42\ntrials=2\nmax_order=8\n")

    def test_config_file(self, tmp_path: Path, capsys: Any) -> None:
        config = tmp_path / "trials.toml"
        config.write_text("[trials]\nseed = 7\ntrials = 1\nmax_order = 8\n")
        argv = ["props", "--suite", "snf", "--config", str(config), "--trials", "2"]
        assert exit_code([*argv, "--emit", "machine"]) == 0
        out, _ = capsys.readouterr()
        assert out.startswith("suite=snf\nseed=7\ntrials=2\nmax_order=8\n")

    def test_bad_config(self, tmp_path: Path, capsys: Any) -> None:
        config = tmp_path / "trials.toml"
        config.write_text("[trials]\nbogus = 1\n")
        assert exit_code(["props", "--suite", "snf", "--config", str(config)]) == 2
        _, err = capsys.readouterr()
        assert err == "TrialConfigError: unknown [trials] keys: bogus\n"

    def test_bad_bound(self, capsys: Any) -> None:
        assert exit_code(["props", "--suite", "snf", "--max-order", "1"]) == 2
        _, err = capsys.readouterr()
        assert err == "TrialConfigError: max_order must be at least 2, not 1\n"

    def test_counterexamples_written_and_replayed(
        self, tmp_path: Path, capsys: Any, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        monkeypatch.setitem(
            SUITES,
            "broken",
            Suite("broken", "Never holds", SUITES["group"].generate, {"fails": always_fails}),
        )
        out_dir = tmp_path / "counterexamples"
        argv = ["props", "--suite", "broken", *SMALL, "--counterexample-dir", str(out_dir)]
        assert exit_code(argv) == 1
        out, _ = capsys.readouterr()
        assert "fails failed: always fails" in out

        counterexample = out_dir / "broken-fails.mv"
        assert counterexample.read_text().startswith("# broken suite, seed 42, trial 0\n")

        assert exit_code(["replay", "--suite", "broken", str(counterexample)]) == 1
        out, _ = capsys.readouterr()
        assert out.startswith("suite: broken\n")


class TestReplay:
    def test_passing(self, capsys: Any) -> None:
        assert exit_code(["replay", "--suite", "birelative-ses", LADDER1]) == 0

    def test_failing(self, capsys: Any) -> None:
        assert exit_code(["replay", "--suite", "excision", LADDER1]) == 1
        out, _ = capsys.readouterr()
        assert "classical failed: NotExcisiveError: " in out
        # The replayed model is printed back as the counterexample
        assert "ladder L degree 0 {" in out

    def test_wrong_model(self, capsys: Any) -> None:
        assert exit_code(["replay", "--suite", "pullback", Z4]) == 2
        _, err = capsys.readouterr()
        assert err == "InstanceError: pullback: model has no 'f'\n"


class TestSnf:
    @pytest.mark.parametrize(
        "text, cokernel",
        [
            ("6 0\n0 4\n", "Z/2 + Z/12"),
            ("2\n3\n", "Z"),
            ("1 0\n0 1\n", "0"),
            ("# a comment\n2 4\n", "Z/2"),
        ],
    )
    def test_cokernel(self, tmp_path: Path, capsys: Any, text: str, cokernel: str) -> None:
        filename = tmp_path / "m.txt"
        filename.write_text(text)
        assert exit_code(["snf", str(filename)]) == 0
        out, _ = capsys.readouterr()
        lines = out.splitlines()
        assert lines[0] == "D:"
        assert lines[-1] == f"cokernel: {cokernel}"

    def test_bad_matrix(self, tmp_path: Path, capsys: Any) -> None:
        filename = tmp_path / "m.txt"
        filename.write_text("1 2\n3\n")
        assert exit_code(["snf", str(filename)]) == 2
        _, err = capsys.readouterr()
        assert err.startswith("MatrixTextError: ")
