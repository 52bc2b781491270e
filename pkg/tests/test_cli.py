"""Exit codes, JSON schemas, and flag handling of the command line tool."""

import json
import os
import pathlib

import pytest

from tltt.cli import main
from tltt.corpus import CORPUS_ROOT

PRELUDE = sorted(str(p) for p in (CORPUS_ROOT / "prelude").glob("*.tltt"))


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCheck:
    def test_prelude_passes(self, capsys):
        code, out, _ = run(capsys, "check", *PRELUDE)
        assert code == 0 and "pass" in out

    def test_failure_is_exit_one_with_diagnostic(self, capsys, tmp_path):
        bad = tmp_path / "bad.tltt"
        bad.write_text("def bad : U 0 := NatS\n")
        code, _, err = run(capsys, "check", str(bad))
        assert code == 1
        assert f"{bad}:1:" in err and "[FIB-PRE]" in err

    def test_missing_file_is_exit_two(self, capsys):
        code, _, _ = run(capsys, "check", "no/such/file.tltt")
        assert code == 2

    def test_json_single_document(self, capsys):
        code, out, _ = run(capsys, "check", "--json", PRELUDE[0])
        doc = json.loads(out)
        assert code == 0 and doc["status"] == "pass"


class TestCorpus:
    def test_run_exits_zero(self, capsys):
        code, out, _ = run(capsys, "corpus", "run")
        assert code == 0 and "corpus: pass" in out

    def test_json_has_coverage(self, capsys):
        code, out, _ = run(capsys, "corpus", "run", "--json")
        doc = json.loads(out)
        assert code == 0
        assert doc["coverage_gaps"] == []
        assert "FIB-PRE" in doc["coverage"]

    def test_bad_directory_is_exit_two(self, capsys):
        code, _, _ = run(capsys, "corpus", "run", "no/such/dir")
        assert code == 2


class TestHornFactor:
    def test_json_schema(self, capsys):
        code, out, _ = run(capsys, "lab", "horn-factor",
                           "--n", "3", "--k", "1", "--json")
        doc = json.loads(out)
        assert code == 0
        assert doc["n"] == 3 and doc["k"] == 1 and doc["length"] == 6
        for step in doc["steps"]:
            assert set(step) == {"S", "h", "inner"}

    def test_out_of_range_is_exit_two(self, capsys):
        code, _, _ = run(capsys, "lab", "horn-factor", "--n", "1", "--k", "2")
        assert code == 2

    def test_unsupported_outer_horn_is_exit_one(self, capsys):
        code, _, err = run(capsys, "lab", "horn-factor", "--n", "2", "--k", "0")
        assert code == 1 and "not contained" in err

    def test_max_dim_flag(self, capsys):
        code, _, _ = run(capsys, "lab", "horn-factor",
                         "--n", "5", "--k", "2", "--max-dim", "4")
        assert code == 2

    def test_max_dim_env(self, capsys, monkeypatch):
        monkeypatch.setenv("TLTT_MAX_DIM", "4")
        code, _, _ = run(capsys, "lab", "horn-factor", "--n", "5", "--k", "2")
        assert code == 2


class TestLabs:
    def test_yoneda(self, capsys):
        code, out, _ = run(capsys, "lab", "yoneda", "--json")
        doc = json.loads(out)
        assert code == 0 and doc["status"] == "pass"

    def test_limits_deterministic_given_seed(self, capsys):
        code1, out1, _ = run(capsys, "lab", "limits", "--seeds", "5",
                             "--seed", "42", "--json")
        code2, out2, _ = run(capsys, "lab", "limits", "--seeds", "5",
                             "--seed", "42", "--json")
        assert code1 == code2 == 0 and out1 == out2

    def test_segal_pass_and_fail(self, capsys):
        code, _, _ = run(capsys, "lab", "segal")
        assert code == 0
        code, out, _ = run(capsys, "lab", "segal",
                           "--fixture", "non_segal.json", "--json")
        assert code == 1
        assert json.loads(out)["status"] == "fail"

    def test_classifier(self, capsys):
        code, out, _ = run(capsys, "lab", "classifier",
                           "--n", "1", "--max-card", "1", "--json")
        doc = json.loads(out)
        assert code == 0 and doc["count"] == 2

    def test_usage_error_is_exit_two(self, capsys):
        assert main(["lab", "nonsense"]) == 2
        assert main([]) == 2
