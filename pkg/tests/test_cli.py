import subprocess
import sys

import pytest

from rnprover.cli import main
from conftest import needs_solver


def run(*argv):
    return main(list(argv))


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        run("prove", "--formula", "p")  # no --logic
    assert e.value.code == 64
    with pytest.raises(SystemExit) as e:
        run("prove", "--logic", "c0", "--formula", "p")
    assert e.value.code == 64
    with pytest.raises(SystemExit) as e:
        run("refute", "--logic", "c1", "--formula", "p")
    assert e.value.code == 64
    with pytest.raises(SystemExit) as e:
        run("prove", "--logic", "c1")
    assert e.value.code == 64
    with pytest.raises(SystemExit) as e:
        run("prove", "--logic", "s4", "--formula", "p", "--bounds", "4,2")
    assert e.value.code == 64


def test_bad_input(tmp_path, capsys):
    assert run("oracle", "--logic", "c1", "--formula", "#box p") == 65
    assert run("oracle", "--logic", "c1", "--formula", "p &") == 65
    bad = tmp_path / "bad.p"
    bad.write_text("fof(x, axiom, p).\n")
    assert run("prove", "--logic", "c1", str(bad)) == 65
    assert run("prove", "--logic", "c1", str(tmp_path / "missing.p")) == 74


def test_oracle_mode(capsys):
    assert run("oracle", "--logic", "c1", "--formula", "p | ~p") == 0
    assert capsys.readouterr().out == "Valid\n"
    assert run("oracle", "--logic", "ipl", "--formula", "p | ~p", "--countermodel") == 1
    out = capsys.readouterr().out.splitlines()
    assert out == ["Invalid", "  p = F", "  ~p = F", "  (p | ~p) = F"]


def test_oracle_cap(capsys):
    f = "((p & q) | (r & s)) => ((p | r) & (q | s) & ~p & ~q)"
    assert run("oracle", "--logic", "s4", "--formula", f) == 2
    assert run("--mode", "oracle", "--logic", "s4", "--formula", "p => p", "--oracle-cap", "3") == 0


def test_spawn_failure(capsys):
    code = run("prove", "--logic", "c1", "--formula", "p", "--solver", "/nonexistent/solver {file}")
    assert code == 69


def test_emit(tmp_path, capsys):
    prob = tmp_path / "ax4.p"
    prob.write_text("fof(ax4, conjecture, (#box p => #box #box p)).\n")
    out1, out2 = tmp_path / "one", tmp_path / "two"
    assert run("emit", "--logic", "s4", str(prob), "--emit-dir", str(out1)) == 0
    assert run("emit", "--logic", "s4", str(prob), "--emit-dir", str(out2), "--bounds", "1,2,4,8") == 0
    names = sorted(p.name for p in out1.iterdir())
    assert names == [
        "ax4.bounded-1.smt2", "ax4.bounded-2.smt2", "ax4.bounded-4.smt2", "ax4.bounded-8.smt2",
        "ax4.depth-indexed.smt2",
    ]
    for n in names:
        assert (out1 / n).read_bytes() == (out2 / n).read_bytes()
    assert run("emit", "--logic", "c2", "--formula", "p | ~p", "--emit-dir", str(tmp_path / "c")) == 0
    assert [p.name for p in (tmp_path / "c").iterdir()] == ["formula.single-row.smt2"]


def test_bench_oracle_corpus(tmp_path, capsys):
    (tmp_path / "a.p").write_text("fof(a, conjecture, (p => p)).\n")
    (tmp_path / "b.p").write_text("fof(b, conjecture, (p | ~p)).\n")
    (tmp_path / "statuses.txt").write_text("a.p Theorem\nb.p Theorem\n")
    report = tmp_path / "r.csv"
    assert run("bench", "--logic", "ipl", str(tmp_path), "--engine", "oracle", "--report", str(report)) == 1
    rows = report.read_text().splitlines()
    assert rows[0] == "instance,logic,conclusion,source,elapsed_ms"
    assert [r.split(",")[2] for r in rows[1:]] == ["Valid", "Invalid"]
    assert "b: expected Valid, got Invalid" in capsys.readouterr().err


def test_bench_needs_cn_without_corpus():
    with pytest.raises(SystemExit) as e:
        run("bench", "--logic", "s4")
    assert e.value.code == 64


@needs_solver
def test_prove_exit_codes(capsys):
    assert run("prove", "--logic", "c1", "--formula", "p | ~p") == 0
    assert run("prove", "--logic", "ipl", "--formula", "~p | ~~p", "--countermodel") == 1
    out = capsys.readouterr().out
    assert out.startswith("Valid\nInvalid\n") and "  ~p = " in out
    assert run("prove", "--logic", "s4", "--formula", "#box p => p", "--timeout-ms", "20000") == 0


@needs_solver
def test_console_entry(tmp_path):
    prob = tmp_path / "t.p"
    prob.write_text("fof(t, conjecture, (#box p => p)).\n")
    res = subprocess.run(
        [sys.executable, "-m", "rnprover", "prove", str(prob), "--logic", "s4", "-v"],
        capture_output=True, text=True,
    )
    assert res.returncode == 0 and res.stdout == "Valid\n"
    assert "source: depth-indexed" in res.stderr
