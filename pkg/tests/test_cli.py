"""Tests for the command-line surface: outputs, witnesses and exit codes."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any

import pytest

from spectral_domains import __version__
from spectral_domains.cli import EXIT_DIVERGED, EXIT_FAILED, EXIT_INPUT, EXIT_OK, run
from spectral_domains.lattice_duality import FinDistLattice
from spectral_domains.models import LatticeModel, StepFnModel
from spectral_domains.step_functions import StepFn


def write_json(path: Path, payload: Any) -> Path:
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def single(box: list[str], piece: list[str]) -> dict[str, Any]:
    """``box·χ(piece]`` over [0, 3] in the file format."""
    return {
        "carrier": ["0", "3"],
        "dim": 1,
        "components": [
            {"open": {"carrier": ["0", "3"], "pieces": [piece]}, "box": {"dims": [box]}}
        ],
    }


def invoke(*argv: str) -> tuple[int, str]:
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    return code, out.getvalue()


@pytest.fixture
def g_file(tmp_path: Path, worked_g: StepFn) -> Path:
    return write_json(tmp_path / "g.json", StepFnModel.from_domain(worked_g).dump())


@pytest.fixture
def lattice_file(tmp_path: Path, five_lattice: FinDistLattice) -> Path:
    return write_json(tmp_path / "lattice.json", LatticeModel.from_domain(five_lattice).dump())


@pytest.fixture
def exp_file(tmp_path: Path) -> Path:
    return write_json(
        tmp_path / "exp.json",
        {"n": 1, "t0": "0", "T": "1", "y0": {"dims": [["1", "1"]]}, "field": "y1"},
    )


# ---------------------------------------------------------------------------
# duality
# ---------------------------------------------------------------------------


class TestDuality:
    def test_roundtrip(self, lattice_file: Path) -> None:
        code, out = invoke("duality", "roundtrip", "--lattice", str(lattice_file))
        assert code == EXIT_OK
        assert json.loads(out) == {"iso": True, "points": 3, "opens": 5}

    def test_primes_exhaustive(self, lattice_file: Path) -> None:
        code, out = invoke(
            "duality", "primes", "--lattice", str(lattice_file), "--strategy", "exhaustive"
        )
        assert code == EXIT_OK
        assert json.loads(out)["count"] == 3

    def test_not_a_lattice(self, tmp_path: Path) -> None:
        path = write_json(
            tmp_path / "bad.json",
            {"elements": ["x", "y"], "leq": [[True, False], [False, True]]},
        )
        code, out = invoke("duality", "roundtrip", "--lattice", str(path))
        assert code == EXIT_INPUT
        assert out == ""


# ---------------------------------------------------------------------------
# stepfn
# ---------------------------------------------------------------------------


class TestStepFn:
    def test_eval(self, g_file: Path) -> None:
        code, out = invoke("stepfn", "eval", "--lhs", str(g_file), "--at", "3/2")
        assert code == EXIT_OK
        assert json.loads(out) == {"at": "3/2", "value": {"dims": [["1", "2"]]}}

    def test_order_holds(self, tmp_path: Path) -> None:
        f = write_json(tmp_path / "f.json", single(["0", "3"], ["0", "2"]))
        g = write_json(tmp_path / "g.json", single(["1", "2"], ["0", "2"]))
        code, _ = invoke("stepfn", "order", "--lhs", str(f), "--rhs", str(g))
        assert code == EXIT_OK

    @pytest.mark.parametrize("strategy", ["cells", "primefilters"])
    def test_order_fails(self, tmp_path: Path, strategy: str) -> None:
        f = write_json(tmp_path / "f.json", single(["0", "3"], ["0", "2"]))
        g = write_json(tmp_path / "g.json", single(["1", "2"], ["0", "1"]))
        code, out = invoke(
            "stepfn", "order", "--lhs", str(f), "--rhs", str(g), "--strategy", strategy
        )
        assert code == EXIT_FAILED
        payload = json.loads(out)
        assert payload["verdict"] is False
        if strategy == "cells":
            assert payload["witness"] == {"cell": "(1,2]"}

    def test_waybelow(self, tmp_path: Path, g_file: Path) -> None:
        f = write_json(tmp_path / "f.json", single(["-1", "5/2"], ["0", "1"]))
        code, out = invoke("stepfn", "waybelow", "--lhs", str(f), "--rhs", str(g_file))
        assert code == EXIT_OK
        assert json.loads(out) == {"strategy": "spectral", "verdict": True}

    def test_waybelow_witness(self, tmp_path: Path, g_file: Path) -> None:
        f = write_json(tmp_path / "f.json", single(["-1", "5/2"], ["0", "3"]))
        code, out = invoke(
            "stepfn", "waybelow", "--lhs", str(f), "--rhs", str(g_file), "--strategy", "absbasis"
        )
        assert code == EXIT_FAILED
        assert json.loads(out)["witness"] == {"component": 0}

    def test_preimage(self, tmp_path: Path, g_file: Path) -> None:
        box = write_json(tmp_path / "b.json", {"dims": [["-1", "5/2"]]})
        code, out = invoke(
            "stepfn", "preimage", "--rhs", str(g_file), "--box", str(box), "--strategy", "cells"
        )
        assert code == EXIT_OK
        assert json.loads(out)["open"] == {"carrier": ["0", "3"], "pieces": [["0", "2"]]}

    def test_preimage_cap(self, tmp_path: Path, g_file: Path) -> None:
        box = write_json(tmp_path / "b.json", {"dims": [["-1", "5/2"]]})
        code, _ = invoke(
            "--cap-subsets", "1", "stepfn", "preimage", "--rhs", str(g_file), "--box", str(box)
        )
        assert code == EXIT_INPUT

    def test_inconsistent_file(self, tmp_path: Path) -> None:
        broken = single(["0", "1"], ["0", "2"])
        clash = single(["2", "3"], ["1", "3"])
        broken["components"].extend(clash["components"])
        path = write_json(tmp_path / "broken.json", broken)
        code, _ = invoke("stepfn", "eval", "--lhs", str(path), "--at", "1")
        assert code == EXIT_INPUT


# ---------------------------------------------------------------------------
# galois
# ---------------------------------------------------------------------------


class TestGalois:
    def test_check(self, tmp_path: Path, g_file: Path) -> None:
        g = write_json(tmp_path / "narrow.json", single(["1", "2"], ["0", "3"]))
        code, out = invoke("galois", "check", "--f", str(g_file), "--g", str(g))
        assert code == EXIT_OK
        assert json.loads(out) == {
            "lhs": False,
            "rhs": False,
            "agree": True,
            "witness": {"cell": "(0,1]", "component": 0},
        }

    def test_fuzz(self) -> None:
        code, out = invoke("--seed", "3", "galois", "fuzz", "--n", "30")
        assert code == EXIT_OK
        assert out == "galois: checked=30 agreements=30 failures=0 skipped=0\n"

    def test_fuzz_all(self) -> None:
        code, out = invoke("galois", "fuzz", "--n", "5", "--suite", "all")
        assert code == EXIT_OK
        names = [line.split(":")[0] for line in out.splitlines()]
        assert names == ["galois", "waybelow", "basis", "order", "duality", "ideals"]

    def test_unknown_suite(self) -> None:
        code, _ = invoke("galois", "fuzz", "--suite", "nope")
        assert code == EXIT_INPUT


# ---------------------------------------------------------------------------
# ivp
# ---------------------------------------------------------------------------


class TestIvp:
    def test_solve(self, exp_file: Path) -> None:
        code, out = invoke("ivp", "solve", "--problem", str(exp_file), "--pieces", "4")
        assert code == EXIT_OK
        header, *rows = list(csv.reader(io.StringIO(out)))
        assert header == ["q_lo", "q_hi", "lo1", "hi1", "node"]
        assert len(rows) == 9
        assert [r[-1] for r in rows].count("1") == 5

    def test_convergence(self, exp_file: Path) -> None:
        code, out = invoke("ivp", "convergence", "--problem", str(exp_file), "--levels", "2")
        assert code == EXIT_OK
        table = list(csv.DictReader(io.StringIO(out)))
        assert [r["k"] for r in table] == ["4", "8"]
        assert table[0]["ratio"] == ""
        assert table[1]["ratio"] != ""

    def test_divergence(self, tmp_path: Path) -> None:
        path = write_json(
            tmp_path / "blowup.json",
            {"n": 1, "t0": "0", "T": "10", "y0": {"dims": [["1", "1"]]}, "field": "y1 * y1"},
        )
        code, _ = invoke("ivp", "solve", "--problem", str(path), "--pieces", "1")
        assert code == EXIT_DIVERGED

    def test_check_exp(self, exp_file: Path) -> None:
        argv = ["--problem", str(exp_file), "--pieces", "8", "--oracle", "exp", "--samples", "20"]
        code, out = invoke("ivp", "check", *argv)
        assert code == EXIT_OK
        assert json.loads(out) == {"oracle": "exp", "pieces": 8, "checked": 29, "verdict": True}

    def test_check_rotation(self, tmp_path: Path) -> None:
        path = write_json(
            tmp_path / "rotation.json",
            {
                "n": 2,
                "t0": "0",
                "T": "1",
                "y0": {"dims": [["1", "1"], ["0", "0"]]},
                "field": "-y2; y1",
            },
        )
        code, out = invoke("ivp", "check", "--problem", str(path), "--oracle", "rotation")
        assert code == EXIT_OK
        assert json.loads(out)["checked"] == 117

    def test_check_wrong_oracle(self, exp_file: Path) -> None:
        code, out = invoke("ivp", "check", "--problem", str(exp_file), "--oracle", "rotation")
        assert code == EXIT_INPUT
        assert out == ""

    def test_parse_error(self, tmp_path: Path) -> None:
        path = write_json(
            tmp_path / "bad.json",
            {"n": 1, "t0": "0", "T": "1", "y0": {"dims": [["1", "1"]]}, "field": "y1 &"},
        )
        code, _ = invoke("ivp", "solve", "--problem", str(path))
        assert code == EXIT_INPUT


# ---------------------------------------------------------------------------
# Global options
# ---------------------------------------------------------------------------


class TestGlobalOptions:
    def test_out_file(self, tmp_path: Path, g_file: Path) -> None:
        target = tmp_path / "value.json"
        code, out = invoke(
            "--out", str(target), "stepfn", "eval", "--lhs", str(g_file), "--at", "1/2"
        )
        assert code == EXIT_OK
        assert out == ""
        assert json.loads(target.read_text(encoding="utf-8"))["value"] == {"dims": [["0", "2"]]}

    def test_version(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run(["--version"]) == EXIT_OK
        assert capsys.readouterr().out.strip() == f"spectral-domains {__version__}"

    def test_missing_file(self, tmp_path: Path) -> None:
        code, _ = invoke("stepfn", "eval", "--lhs", str(tmp_path / "nope.json"), "--at", "1")
        assert code == EXIT_INPUT

    def test_malformed_json(self, tmp_path: Path) -> None:
        path = tmp_path / "garbage.json"
        path.write_text("{not json", encoding="utf-8")
        code, _ = invoke("stepfn", "eval", "--lhs", str(path), "--at", "1")
        assert code == EXIT_INPUT

    def test_usage_error(self) -> None:
        code, _ = invoke("stepfn", "eval")
        assert code == EXIT_INPUT

    def test_bad_log_level(self, g_file: Path) -> None:
        code, _ = invoke(
            "--log-level", "LOUD", "stepfn", "eval", "--lhs", str(g_file), "--at", "1"
        )
        assert code == EXIT_INPUT

    def test_options_after_the_command(self) -> None:
        code, out = invoke("galois", "fuzz", "--n", "30", "--seed", "3")
        assert code == EXIT_OK
        assert out == "galois: checked=30 agreements=30 failures=0 skipped=0\n"

    def test_command_option_overrides_root(self) -> None:
        _, before = invoke("--seed", "3", "galois", "fuzz", "--n", "30")
        _, after = invoke("--seed", "1", "galois", "fuzz", "--n", "30", "--seed", "3")
        assert after == before

    def test_out_after_the_command(self, tmp_path: Path, exp_file: Path) -> None:
        target = tmp_path / "enc.csv"
        code, out = invoke(
            "ivp", "solve", "--problem", str(exp_file), "--pieces", "16", "--out", str(target)
        )
        assert code == EXIT_OK
        assert out == ""
        rows = list(csv.reader(io.StringIO(target.read_text(encoding="utf-8"))))
        assert len(rows) == 1 + 33

    def test_cap_after_the_command(self, tmp_path: Path, g_file: Path) -> None:
        box = write_json(tmp_path / "b.json", {"dims": [["-1", "5/2"]]})
        code, _ = invoke(
            "stepfn", "preimage", "--rhs", str(g_file), "--box", str(box), "--cap-subsets", "1"
        )
        assert code == EXIT_INPUT

    @pytest.mark.slow
    def test_full_fuzz_run(self) -> None:
        code, out = invoke("galois", "fuzz", "--n", "1000", "--seed", "7")
        assert code == EXIT_OK
        assert out == "galois: checked=1000 agreements=1000 failures=0 skipped=0\n"


# ---------------------------------------------------------------------------
# Malformed input
# ---------------------------------------------------------------------------


class TestMalformedInput:
    def test_not_utf8(self, tmp_path: Path) -> None:
        path = tmp_path / "binary.json"
        path.write_bytes(b"\xff\xfe{")
        code, out = invoke("ivp", "solve", "--problem", str(path))
        assert code == EXIT_INPUT
        assert out == ""

    @pytest.mark.parametrize(
        "field",
        ["(" * 400 + "y1" + ")" * 400, "-" * 400 + "y1", " + ".join(["y1"] * 600)],
    )
    def test_deep_field(self, tmp_path: Path, field: str) -> None:
        path = write_json(
            tmp_path / "deep.json",
            {"n": 1, "t0": "0", "T": "1", "y0": {"dims": [["1", "1"]]}, "field": field},
        )
        code, out = invoke("ivp", "solve", "--problem", str(path))
        assert code == EXIT_INPUT
        assert out == ""
