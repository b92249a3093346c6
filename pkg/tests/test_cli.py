import io
import json
import subprocess
import sys

import pytest

from ctxgram import corpus
from ctxgram.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def grammar_file(tmp_path):
    def make(text):
        path = tmp_path / "g.2cg"
        path.write_text(text)
        return str(path)

    return make


def test_check():
    assert run("check", "ex1")[0] == 0


def test_check_undeclared(grammar_file):
    code, _, err = run("check", grammar_file("S -> a Z;"))
    assert code == 1 and "Z" in err


def test_check_missing_file():
    assert run("check", "/no/such/file.2cg")[0] == 2


def test_check_warnings_keep_exit_zero(grammar_file):
    code, _, err = run("check", grammar_file("S -> a; B -> b;"))
    assert code == 0 and "unreachable nonterminal B" in err


def test_parse_accept_and_reject():
    assert run("parse", "ex1", "--input", "abca")[:2] == (0, "accept\n")
    assert run("parse", "ex1", "--input", "abcb")[:2] == (1, "reject\n")


def test_parse_compare():
    code, out, _ = run("parse", "ex1", "--input", "abca", "--compare")
    assert code == 0 and "agree" in out


def test_parse_empty_input_needs_oracle():
    assert run("parse", "ex1", "--input", "")[0] == 2
    assert run("parse", "ex2", "--input", "", "--oracle")[0] == 0
    assert run("parse", "ex1", "--input", "", "--oracle")[0] == 1


def test_parse_input_from_file(tmp_path):
    path = tmp_path / "w.txt"
    path.write_text("abca\n")
    assert run("parse", "ex1", "--input", f"@{path}")[0] == 0
    assert run("parse", "ex1", "--input", f"@{tmp_path / 'missing'}")[0] == 2


def test_parse_foreign_character():
    assert run("parse", "ex1", "--input", "abxa")[0] == 1


def test_parse_json_table_and_proof():
    code, out, _ = run("parse", "ex-s5", "--input", "ab", "--table", "--proof", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["accepted"] and data["passes"] >= 2
    assert {"i": 0, "j": 1, "nts": ["A", "C"]} in data["table"]["cells"]
    assert data["proof"]["symbol"] == "S"


def test_parse_oracle_table_text():
    code, out, _ = run("parse", "ex1", "--input", "abca", "--oracle", "--table")
    assert code == 0 and "S(0,4)" in out


def test_parse_dot_proof():
    code, out, _ = run("parse", "ex1", "--input", "abca", "--proof", "--format", "dot")
    assert code == 0 and out.startswith("digraph")
    assert run("parse", "ex1", "--input", "abca", "--format", "dot")[0] == 2


def test_divergence_exit_code(monkeypatch):
    import ctxgram.cli as cli

    class Lying:
        def __init__(self, table):
            self.table = table

        def __getattr__(self, name):
            return getattr(self.table, name)

        def accepts(self):
            return not self.table.accepts()

    real = cli.parse_table
    monkeypatch.setattr(cli, "parse_table", lambda g, w: Lying(real(g, w)))
    code, _, err = run("parse", "ex1", "--input", "abca", "--compare")
    assert code == 3 and "divergence" in err


def test_normalize_to_file(tmp_path):
    out_path = tmp_path / "nf.2cg"
    code, out, _ = run("normalize", "ex1", "-o", str(out_path))
    assert code == 0 and "remove_useless" in out
    from ctxgram.grammar import parse_grammar
    from ctxgram.normalize import shape_violations

    assert shape_violations(parse_grammar(out_path.read_text(), allow_reserved=True)) == []


def test_normalize_empty_language(grammar_file):
    code, out, err = run("normalize", grammar_file("S -> eps;"))
    assert code == 0
    assert "warning: normal form has no rules" in err
    assert "empty string is in the language" in err


def test_normalize_json_with_nullable():
    code, out, _ = run("normalize", "ex5", "--format", "json", "--nullable")
    data = json.loads(out)
    assert code == 0
    assert [s["stage"] for s in data["stages"]][0] == "input"
    assert {"U": ["D"], "A": "A", "V": ["E"], "left_edge": False, "right_edge": False} in data["nullable"]["nullable"]


def test_normalize_reports_growth():
    code, _, err = run("normalize", "ex2")
    assert code == 0 and "growth: peak 42 rules, 2.5x the input" in err


def test_enumerate():
    assert run("enumerate", "ex1", "--max-len", "6")[1] == "abca\n"
    assert run("enumerate", "ex-s5", "--max-len", "4")[1] == "ab\n"
    assert run("enumerate", "ex2", "--max-len", "0")[1] == "\n"
    assert run("enumerate", "ex1", "--max-len", "0")[1] == ""
    assert run("enumerate", "ex1", "--max-len", "-1")[0] == 2


def test_enumerate_matches_golden_file():
    e = corpus.load("ex5-nullable-2sided")
    assert run("enumerate", e.id, "--max-len", str(e.bound))[1] == corpus.format_lang(e.lang)


def test_nullable_command():
    code, out, _ = run("nullable", "ex5", "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data["nullable"]) == 3
    assert data["nullable_left_eps"] == [{"A": "C", "V": ["E"], "right_edge": False}]
    assert data["nullable_right_eps"] == [{"U": ["D"], "A": "B", "left_edge": False}]


def test_ambiguous_and_unknown_ids():
    assert run("check", "ex4")[0] == 2
    assert run("check", "zz")[0] == 2


def test_usage_errors():
    assert run()[0] == 2
    assert run("parse", "ex1")[0] == 2
    assert run("frobnicate", "ex1")[0] == 2


def test_color(monkeypatch):
    monkeypatch.setenv("CTXGRAM_COLOR", "1")
    assert "\033[32maccept" in run("parse", "ex1", "--input", "abca")[1]
    monkeypatch.setenv("CTXGRAM_COLOR", "0")
    assert run("parse", "ex1", "--input", "abca")[1] == "accept\n"


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ctxgram.cli", "parse", "ex1", "--input", "abca"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "accept"
