import json
import subprocess
import sys
from pathlib import Path

import pytest

from conftest import B
from stratrev.cli import main
from stratrev.logic import equivalent, parse_formula

SAMPLES = Path(__file__).resolve().parent.parent / "samples"
THREE_STRATA, NEGATED_ATOMS, SINGLE_MAX = (
    str(SAMPLES / f"{name}.skb") for name in ("three_strata", "negated_atoms", "single_max"))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestRevise:
    def test_dma_three_strata(self, capsys):
        code, out, _ = run(capsys, "revise", "--kb", THREE_STRATA, "--phi", "c", "--method", "dma")
        assert code == 0
        base = [parse_formula(line) for line in out.splitlines()]
        assert equivalent(base, B("!a", "b", "c", "d", "e"))

    def test_dr_models(self, capsys):
        code, out, _ = run(capsys, "revise", "--kb", THREE_STRATA, "--phi", "c", "--method", "dr",
                           "--output", "models")
        assert code == 0
        assert out.splitlines() == ["{a, c, d, e}", "{b, c, d, e}"]

    def test_dr_base_output(self, capsys):
        code, out, _ = run(capsys, "revise", "--kb", THREE_STRATA, "--phi", "c", "--method", "dr",
                           "--output", "base")
        assert code == 0
        (line,) = out.splitlines()
        assert equivalent([parse_formula(line)], B("(a & !b | !a & b) & c & d & e"))

    def test_cmr_negated_atoms(self, capsys):
        code, out, _ = run(capsys, "revise", "--kb", NEGATED_ATOMS, "--phi", "a|b", "--method", "cmr")
        assert code == 0 and len(out.splitlines()) == 6

    def test_json_round_trip(self, capsys):
        code, out, _ = run(capsys, "revise", "--kb", THREE_STRATA, "--phi", "c", "--json")
        doc = json.loads(out)
        assert doc["method"] == "dma"
        assert [t["action"] for t in doc["trace"]] == ["merged", "revised", "dropped"]
        assert doc["trace"][1]["k"] == 2
        assert doc["trace"][1]["kernel"] == ["!a", "!b", "!c | b"]
        assert equivalent([parse_formula(f) for f in doc["base"]], B("!a", "b", "c", "d", "e"))

    def test_json_models(self, capsys):
        _, out, _ = run(capsys, "revise", "--kb", THREE_STRATA, "--phi", "c", "--method", "dma",
                        "--output", "models", "--json")
        assert json.loads(out)["models"] == [["b", "c", "d", "e"]]

    def test_deterministic(self, capsys):
        argv = ("revise", "--kb", NEGATED_ATOMS, "--phi", "a|b", "--method", "dma")
        assert run(capsys, *argv) == run(capsys, *argv)

    def test_explain(self, capsys):
        _, out, _ = run(capsys, "revise", "--kb", THREE_STRATA, "--phi", "c", "--explain")
        lines = out.splitlines()
        assert lines[:3] == ["# stratum 1: merged",
                             "# stratum 2: revised k=2 kernel={!a, !b, !c | b}",
                             "# stratum 3: dropped kernel={!c | !d}"]

    def test_bad_formula(self, capsys):
        code, _, err = run(capsys, "revise", "--kb", THREE_STRATA, "--phi", "c &")
        assert code == 1 and "error" in err

    def test_unsatisfiable_phi(self, capsys):
        assert run(capsys, "revise", "--kb", THREE_STRATA, "--phi", "c & !c")[0] == 1

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "revise", "--kb", str(tmp_path / "nope"), "--phi", "c")[0] == 1

    def test_bad_kb_file(self, capsys, tmp_path):
        bad = tmp_path / "bad.skb"
        bad.write_text("[stratum 1]\na\n!a\n")
        assert run(capsys, "revise", "--kb", str(bad), "--phi", "c")[0] == 1

    def test_usage_error_is_input_error(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["revise", "--kb", THREE_STRATA])
        assert info.value.code == 1

    def test_atom_cap(self, capsys):
        code, _, err = run(capsys, "revise", "--kb", THREE_STRATA, "--phi", "c", "--atom-cap", "3")
        assert code == 3 and "atoms" in err

    def test_atom_cap_env(self, capsys, monkeypatch):
        monkeypatch.setenv("STRATREV_ATOM_CAP", "4")
        assert run(capsys, "revise", "--kb", THREE_STRATA, "--phi", "c")[0] == 3
        monkeypatch.setenv("STRATREV_ATOM_CAP", "lots")
        assert run(capsys, "revise", "--kb", THREE_STRATA, "--phi", "c")[0] == 1


class TestKernel:
    def test_three_strata_state(self, capsys):
        code, out, _ = run(capsys, "kernel", "--kb", THREE_STRATA, "--phi", "c", "--upto", "2")
        assert code == 0
        assert out.splitlines() == ["conflict: {!a, !b, a | b}",
                                    "conflict: {!b, !c | b, c}",
                                    "kernel: {!a, !b, !c | b, a | b, c}"]

    def test_single_max(self, capsys):
        _, out, _ = run(capsys, "kernel", "--kb", SINGLE_MAX, "--phi", "c", "--json")
        assert len(json.loads(out)["conflicts"]) == 2

    def test_consistent(self, capsys, tmp_path):
        f = tmp_path / "base.txt"
        f.write_text("a\nb | c\n")
        assert run(capsys, "kernel", "--base", str(f)) == (0, "consistent\n", "")


class TestLex:
    def test_true(self, capsys):
        assert run(capsys, "lex", "--kb", THREE_STRATA, "--phi", "c", "--query", "b")[:2] == (0, "true\n")

    def test_query_is_phi(self, capsys):
        assert run(capsys, "lex", "--kb", THREE_STRATA, "--phi", "c", "--query", "c")[0] == 0

    def test_false(self, capsys):
        code, out, _ = run(capsys, "lex", "--kb", THREE_STRATA, "--phi", "c", "--query", "!c | !d")
        assert (code, out) == (2, "false\n")

    def test_guard(self, capsys):
        code, _, err = run(capsys, "lex", "--kb", THREE_STRATA, "--phi", "c", "--query", "b",
                           "--max-formulas", "4")
        assert code == 3 and "limit" in err


class TestCheckEquiv:
    def write(self, tmp_path, name, *lines):
        p = tmp_path / name
        p.write_text("\n".join(lines) + "\n")
        return str(p)

    def test_three_strata_raw_dma(self, capsys, tmp_path):
        raw = self.write(tmp_path, "raw", "a | b", "c", "!a | !b", "!a | !c | b", "d", "e")
        simple = self.write(tmp_path, "simple", "!a", "b", "c", "d", "e")
        assert run(capsys, "check-equiv", raw, simple)[:2] == (0, "true\n")

    def test_identical(self, capsys, tmp_path):
        f = self.write(tmp_path, "f", "a -> b")
        assert run(capsys, "check-equiv", f, f)[0] == 0

    def test_different(self, capsys, tmp_path):
        a = self.write(tmp_path, "a", "a")
        b = self.write(tmp_path, "b", "b")
        assert run(capsys, "check-equiv", a, b)[0] == 2

    def test_parse_error(self, capsys, tmp_path):
        a = self.write(tmp_path, "a", "a")
        b = self.write(tmp_path, "b", "(b")
        assert run(capsys, "check-equiv", a, b)[0] == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "stratrev", "lex", "--kb", THREE_STRATA, "--phi", "c",
                           "--query", "!c | !d"], capture_output=True, text=True)
    assert proc.returncode == 2 and proc.stdout == "false\n"
