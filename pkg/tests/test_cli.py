from __future__ import annotations

import json

from syncfair.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_equal_holds(capsys):
    code, out, _ = run(capsys, "equal", "term && fair", "fin(alpha)")
    assert code == 0 and out.startswith("Equal")


def test_refines_refuted_with_lasso(capsys):
    code, out, _ = run(capsys, "refines", "fair", "chaos", "--format", "json")
    assert code == 1
    report = json.loads(out)
    assert report["holds"] is False and report["witness"]["side"] == "rhs"
    assert report["witness"]["observation"].endswith("^w")


def test_parse_error_reports_position(capsys):
    code, _, err = run(capsys, "equal", "nil || p", "nil")
    assert code == 2 and "column 8" in err


def test_usage_errors(capsys):
    assert run(capsys, "equal", "nil")[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "eval", "nil", "--lasso-period", "0")[0] == 2
    assert run(capsys, "laws", "--only", "no-such-law")[0] == 2


def test_resource_cap_names_subterm(capsys):
    code, _, err = run(capsys, "eval", "nil ; chaos", "--cap", "50")
    assert code == 2 and "subterm chaos" in err


def test_eval_lists_members(capsys):
    code, out, _ = run(capsys, "eval", "pi", "--states", "1", "--bound", "1",
                       "--lasso-prefix", "0", "--lasso-period", "1", "--traces")
    assert code == 0
    assert "0: p(0,0) !term" in out and "0: !inc" in out


def test_file_input(capsys, tmp_path):
    path = tmp_path / "terms.txt"
    path.write_text("# two terms\nskip && fair\nfin(eps)\n")
    assert run(capsys, "equal", "--file", str(path))[0] == 0


def test_laws_json_deterministic(capsys):
    argv = ("laws", "--only", "fair-parallel-associative", "--samples", "50", "--format", "json")
    code, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert code == 0 and first == second
    report = json.loads(first)
    assert report["laws"][0]["status"] == "pass"
    assert report["laws"][0]["instances"] == 50


def test_failing_law_exits_one(capsys):
    code, out, _ = run(capsys, "laws", "--only", "sync-initial", "--samples", "100")
    assert code == 1 and "witness only in" in out


def test_mutants_refuted(capsys):
    code, out, _ = run(capsys, "laws", "--only", "term-fair", "--mutants")
    assert code == 0 and "SURVIVED" not in out and "REFUTED" in out


def test_examples_command(capsys):
    code, out, _ = run(capsys, "examples")
    assert code == 0 and out.count("PASS") == 5


def test_oracle_check_command(capsys):
    code, out, _ = run(capsys, "oracle-check", "--bound", "2", "--lasso-period", "1")
    assert code == 0 and "0 disagreements" in out
