import csv
import json
import re
import subprocess
import sys

import pytest

from binomcrn.cli import main
from binomcrn.network import parse_batch, parse_network
from conftest import GOLDEN, CHAIN3

TIME_RE = re.compile(r"(time (?:matrix|graph)): [0-9.]+ ms")


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def mask_text(text):
    return TIME_RE.sub(r"\1: <t> ms", text)


def test_analyze_text_golden(capsys, tmp_path):
    code, out, err = run(capsys, "analyze", GOLDEN / "cycle3.crn", "--show-odes", "--dump-matrix",
                         "--dump-graph", "steps", "--dump-dir", tmp_path)
    assert code == 0
    assert mask_text(out) == (GOLDEN / "cycle3.analyze.txt").read_text()
    for i in (1, 2, 3):
        assert (tmp_path / f"cycle3.step{i}.dot").read_text() == (GOLDEN / f"cycle3.step{i}.dot").read_text()
    assert "wrote" in err


@pytest.mark.parametrize("mode", ["initial", "final"])
def test_dot_golden(capsys, tmp_path, mode):
    code, _, _ = run(capsys, "analyze", GOLDEN / "cycle3.crn", "--dump-graph", mode, "--dump-dir", tmp_path)
    assert code == 0
    dot = (tmp_path / f"cycle3.{mode}.dot").read_text()
    assert dot == (GOLDEN / f"cycle3.{mode}.dot").read_text()


def test_dot_is_bipartite_with_rational_labels():
    dot = (GOLDEN / "cycle3.final.dot").read_text()
    edges = re.findall(r'^\s+(\w+) -- (\w+) \[label="([^"]+)"\];$', dot, re.M)
    assert edges
    for a, b, lab in edges:
        assert a.startswith("s") and b.startswith("r")
        assert re.fullmatch(r"-?\d+(/\d+)?", lab)
    assert "2/3" in {lab for _, _, lab in edges}
    assert "shape=circle" in dot and "shape=box" in dot


def test_analyze_json_golden(capsys):
    code, out, _ = run(capsys, "analyze", GOLDEN / "cycle3.crn", "--format", "json",
                       "--show-odes", "--dump-matrix")
    assert code == 0
    data = json.loads(out)
    assert data["t_matrix_ms"] > 0 and data["t_graph_ms"] > 0
    data["t_matrix_ms"] = data["t_graph_ms"] = "<t>"
    assert data == json.loads((GOLDEN / "cycle3.analyze.json").read_text())
    assert data["rref"]["entries"][1] == ["0", "1", "-1"]


def test_analyze_single_method(capsys, tmp_path):
    f = tmp_path / "chain3.crn"
    f.write_text(CHAIN3)
    code, out, _ = run(capsys, "analyze", f, "--method", "graph")
    assert code == 0
    assert "verdict: UnconditionallyBinomial" in out
    assert "time matrix" not in out and "agreement" not in out


def test_analyze_batch_file(capsys):
    code, out, _ = run(capsys, "analyze", GOLDEN / "reference_corpus.crn", "--format", "json")
    assert code == 0
    assert [m["model"] for m in json.loads(out)] == ["chain3", "chain4", "cycle3"]


def test_exit_code_parse_failure(capsys, tmp_path):
    f = tmp_path / "bad.crn"
    f.write_text("A + <=> B\n")
    code, _, err = run(capsys, "analyze", f)
    assert code == 2
    assert "line 1, column 5" in err
    assert run(capsys, "analyze", tmp_path / "missing.crn")[0] == 2


def test_exit_code_irreversible(capsys, tmp_path):
    f = tmp_path / "irr.crn"
    f.write_text("A -> B\n")
    assert run(capsys, "analyze", f)[0] == 2
    assert run(capsys, "analyze", f, "--assume-reversible")[0] == 0


def test_exit_code_bad_flags(capsys):
    assert run(capsys, "analyze", "x.crn", "--method", "groebner")[0] == 4
    assert run(capsys, "random", "--seed", "1", "--species", "5..2", "--reactions", "1")[0] == 4
    assert run(capsys, "bench", "x", "--threads", "0")[0] == 4
    assert run(capsys)[0] == 4


def test_exit_code_disagreement(capsys, monkeypatch):
    import binomcrn.harness as harness
    from binomcrn.verdict import Verdict

    real = harness._run_graph

    def flipped(net):
        v, t, d = real(net)
        return Verdict.of(not v), t, d

    monkeypatch.setattr(harness, "_run_graph", flipped)
    code, _, err = run(capsys, "analyze", GOLDEN / "cycle3.crn")
    assert code == 3
    assert "fatal" in err and '"matrix"' in err


def test_degenerate_warning_on_stderr(capsys, tmp_path):
    f = tmp_path / "deg.crn"
    f.write_text("A <=> A\n")
    code, out, err = run(capsys, "analyze", f)
    assert code == 0
    assert "warning" in err and "verdict: UnconditionallyBinomial" in out


def masked_rows(path_or_text):
    rows = list(csv.reader(path_or_text.splitlines()))
    return [rows[0]] + [r[:4] + ["<t>"] * 3 for r in rows[1:]]


def test_bench_csv_golden(capsys, tmp_path):
    out, js, fig = tmp_path / "r.csv", tmp_path / "r.json", tmp_path / "r.png"
    code, _, err = run(capsys, "bench", GOLDEN / "reference_corpus.crn", "--out", out, "--json", js,
                       "--figure", fig)
    assert code == 0
    assert "median speedup" in err
    assert masked_rows(out.read_text()) == masked_rows((GOLDEN / "reference_corpus.bench.csv").read_text())
    assert json.loads(js.read_text())["summary"]["models"] == 3
    assert fig.read_bytes()[:4] == b"\x89PNG"


def test_bench_csv_to_stdout(capsys, tmp_path):
    code, out, _ = run(capsys, "bench", GOLDEN / "reference_corpus.crn")
    assert code == 0
    assert masked_rows(out) == masked_rows((GOLDEN / "reference_corpus.bench.csv").read_text())


def test_bench_missing_corpus(capsys, tmp_path):
    assert run(capsys, "bench", tmp_path / "nope")[0] == 2


def test_bench_empty_corpus(capsys, tmp_path):
    d = tmp_path / "empty"
    d.mkdir()
    code, out, _ = run(capsys, "bench", d)
    assert code == 0
    assert out == "model,n,r,verdict,t_matrix_ms,t_graph_ms,speedup\n"


def test_random_command(capsys, tmp_path):
    code, out, _ = run(capsys, "random", "--seed", 1, "--species", "2..4", "--reactions", "1..3")
    assert code == 0
    assert run(capsys, "random", "--seed", 1, "--species", "2..4", "--reactions", "1..3")[1] == out
    net = parse_network(out)
    assert 2 <= net.n_species <= 4 and 1 <= net.n_reactions <= 3

    target = tmp_path / "many.crn"
    code, _, _ = run(capsys, "random", "--seed", 5, "--species", "3..6", "--reactions", "2..4",
                     "--count", 4, "--emit", target, "--max-coeff", 1)
    assert code == 0
    batch = parse_batch(target)
    assert [n for n, _ in batch.models] == ["random-5", "random-6", "random-7", "random-8"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "binomcrn", "analyze", str(GOLDEN / "cycle3.crn")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "NotUnconditionallyBinomial" in proc.stdout
