import json

import pytest

from tusi import cli, pipeline
from tusi.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_text(capsys):
    code, out, _ = run(capsys, "solve", "x^3 + 2 = 3x^2", "--digits", "6")
    assert code == 0
    assert "case: TwoRoots" in out
    assert "x1 = 1.000000  (exact)" in out
    assert "x2 = 2.732050" in out
    assert "oracle: agree" in out


def test_impossible_is_success(capsys):
    code, out, _ = run(capsys, "solve", "x^3 + 5 = 3x^2")
    assert code == 0 and "Impossible" in out and "c0 = 4" in out


def test_double_root(capsys):
    code, out, _ = run(capsys, "solve", "x^3 + 4 = 3x^2", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["case"] == "DoubleRoot"
    assert d["roots"][0]["digits"].startswith("2.") and d["roots"][0]["multiplicity"] == 2


def test_json_keys_and_round_trip(capsys):
    code, out, _ = run(capsys, "solve", "x^3 + 8x + 4 = 7x^2", "--format", "json")
    line = out.strip()
    d = json.loads(line)
    assert list(d) == ["input", "form", "x0", "c0", "case", "lemma2", "chain", "roots", "oracle"]
    assert d["x0"] == {"p": "4", "q": "0", "d": "25"}
    assert [s["kind"] for s in d["chain"]] == ["shift_plus", "shift_minus", "lemma2"]
    assert list(d["roots"][0]) == ["digits", "base", "enclosure", "multiplicity"]
    assert json.dumps(d, ensure_ascii=False) == line
    again = main(["solve", "x^3 + 8x + 4 = 7x^2", "--format", "json"])
    assert again == 0 and capsys.readouterr().out.strip() == line


def test_base60(capsys):
    code, out, _ = run(capsys, "solve", "x^3 + 2 = 3x^2", "--base", "60", "--digits", "4")
    assert code == 0 and "x2 = 2;43,55,22,58" in out


def test_trace_block_order(capsys):
    code, out, _ = run(capsys, "solve", "x^3 + 2 = 3x^2", "--trace")
    names = [ln.split("] ", 1)[1] for ln in out.splitlines() if ln.startswith("[")]
    assert names == ["form", "domain", "maximum", "case", "reductions", "extraction"]


def test_parse_error_exit_2(capsys):
    code, _, err = run(capsys, "solve", "x^3 + = 2")
    assert code == 2 and "position 6" in err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        main(["solve"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["solve", "x^2=2", "--base", "7"])
    assert e.value.code == 2


def test_internal_error_exit_3(capsys, monkeypatch):
    def broken(*a, **k):
        raise pipeline.InvariantError("boom")

    monkeypatch.setattr(cli, "solve", broken)
    code, out, _ = run(capsys, "solve", "x^3 + 2 = 3x^2")
    assert code == 3 and "internal error: boom" in out


def test_oracle_disagreement_exit_3(capsys, monkeypatch):
    real = pipeline.differential_check

    def pessimist(*a, **k):
        rep = real(*a, **k)
        rep.fail("injected")
        return rep

    monkeypatch.setattr(pipeline, "differential_check", pessimist)
    code, out, _ = run(capsys, "solve", "x^3 + 2 = 3x^2")
    assert code == 3 and "oracle: disagree" in out


def test_no_oracle(capsys):
    code, out, _ = run(capsys, "solve", "x^3 + 2 = 3x^2", "--no-oracle")
    assert code == 0 and "oracle: skipped" in out


def test_batch(tmp_path, capsys):
    f = tmp_path / "eqs.txt"
    f.write_text("# three instances of one form\nx^3 + 1 = 3x^2\nx^3 + 2 = 3x^2\nx^3 + 3 = 3x^2  # above\n")
    code, out, err = run(capsys, "solve", "--batch", str(f), "--format", "json")
    rows = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and len(rows) == 3
    assert [r["lemma2"] for r in rows] == ["Below", "Equal", "Above"]
    assert all(r["oracle"]["verdict"] == "agree" for r in rows)
    summary = json.loads(err)["summary"]
    assert summary["equations"] == 3 and summary["agree"] == 3


def test_batch_empty(tmp_path, capsys):
    f = tmp_path / "empty.txt"
    f.write_text("")
    code, out, _ = run(capsys, "solve", "--batch", str(f))
    assert code == 0 and "equations 0" in out


def test_batch_malformed_line(tmp_path, capsys):
    f = tmp_path / "mixed.txt"
    f.write_text("x^3 + 2 = 3x^2\nx^^3\nx^3 + 4 = 3x^2\n")
    code, out, _ = run(capsys, "solve", "--batch", str(f))
    assert code == 0
    assert "line 2: input: x^^3" in out
    assert out.count("oracle: agree") == 2
    assert "parse_errors 1" in out


def test_batch_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "solve", "--batch", str(tmp_path / "nope.txt"))
    assert code == 2 and "cannot read" in err
