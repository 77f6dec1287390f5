import json
import subprocess
import sys

import pytest

from refsparse.cli import RunReport, main
from refsparse.graph import parse_edge_stream, parse_weighted_graph


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def B_file(tmp_path, capsys):
    path = tmp_path / "B.el"
    assert run(capsys, "gen", "--type", "clique_chain", "--c", "2", "--s", "3",
               "--out", str(path))[0] == 0
    return path


def test_gen_examples(capsys):
    _, out, _ = run(capsys, "gen", "--type", "star", "--n", "5")
    assert parse_edge_stream(out).m == 4
    _, out, _ = run(capsys, "gen", "--type", "gnp", "--n", "8", "--p", "1.0")
    assert parse_edge_stream(out).m == 28


def test_gen_B(B_file):
    s = parse_edge_stream(B_file.read_text())
    assert s.n == 6 and s.m == 7


def test_strength_exact_on_B(capsys, B_file):
    code, out, _ = run(capsys, "strength", "--in", str(B_file), "--method", "exact")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 7
    bridge = [ln for ln in lines if ln.split()[1:3] == ["2", "3"]]
    assert bridge and bridge[0].endswith(" 1")
    _, brute, _ = run(capsys, "strength", "--in", str(B_file), "--method", "brute")
    assert brute == out


def test_sparsify_deterministic(capsys, tmp_path):
    g = tmp_path / "g.el"
    run(capsys, "gen", "--type", "gnp", "--n", "40", "--p", "0.3", "--seed", "1", "--out", str(g))
    outs = []
    for name in ("a.el", "b.el"):
        code, rep, _ = run(capsys, "sparsify", "--algo", "onepass", "--eps", "0.5", "--seed", "7",
                           "--rho-scale", "0.001", "--in", str(g), "--out", str(tmp_path / name))
        assert code == 0
        outs.append((tmp_path / name).read_bytes())
        report = RunReport.from_json(rep.strip())
        assert report.seed == 7 and report.algorithm == "onepass" and report.schema == 1
    assert outs[0] == outs[1]


def test_report_roundtrip():
    r = RunReport("bk", 4, 5, 0.5, 1.0, 3, 4, 10.0, 1.0, 0, 5, 5.0, 1.5, 0, 0)
    assert RunReport.from_json(r.to_json()) == r
    assert "\n" not in r.to_json()


def test_bk_saturated_equals_input(capsys, tmp_path):
    g = tmp_path / "g.el"
    run(capsys, "gen", "--type", "gnp", "--n", "32", "--p", "0.3", "--out", str(g))
    code, out, err = run(capsys, "sparsify", "--algo", "bk", "--in", str(g))
    assert code == 0
    src = parse_edge_stream(g.read_text()).to_graph()
    got = parse_weighted_graph(out)
    assert got.canonical() == src.canonical()
    assert json.loads(err)["sample_edges"] == src.m


def test_bk_with_strength_file(capsys, tmp_path, B_file):
    sfile = tmp_path / "s.txt"
    run(capsys, "strength", "--in", str(B_file), "--out", str(sfile))
    code, out, _ = run(capsys, "sparsify", "--algo", "bk", "--in", str(B_file),
                       "--strengths", str(sfile))
    assert code == 0 and parse_weighted_graph(out).m == 7


@pytest.mark.parametrize("algo", ["twopass", "multipass"])
def test_stdin_rejected_for_replay(capsys, algo):
    code, _, err = run(capsys, "sparsify", "--algo", algo, "--in", "-")
    assert code == 2 and "requires a replayable file" in err


def test_flag_conflicts(capsys, B_file):
    code, _, err = run(capsys, "sparsify", "--algo", "onepass", "--delta", "0.3",
                       "--in", str(B_file))
    assert code == 2 and "--delta" in err


def test_all_algorithms_run(capsys, B_file, tmp_path):
    for algo in ("refsample", "multipass", "onepass", "twopass", "bk"):
        code, out, _ = run(capsys, "sparsify", "--algo", algo, "--in", str(B_file),
                           "--out", str(tmp_path / f"{algo}.el"), "--shrink")
        assert code == 0
        assert json.loads(out)["algorithm"] == algo


def test_trials_emit_one_report_each(capsys, B_file, tmp_path):
    code, out, _ = run(capsys, "sparsify", "--algo", "onepass", "--in", str(B_file),
                       "--trials", "3", "--seed", "10", "--out", str(tmp_path / "s{seed}.el"))
    seeds = [json.loads(ln)["seed"] for ln in out.splitlines()]
    assert code == 0 and seeds == [10, 11, 12]
    assert (tmp_path / "s12.el").exists()


def test_certificate_contains_bridge(capsys, B_file):
    hits = 0
    for seed in range(100):
        _, out, _ = run(capsys, "certificate", "--in", str(B_file), "--level", "1",
                        "--seed", str(seed))
        hits += (2, 3, 1) in parse_edge_stream(out).edges
    assert hits >= 95


def test_verify_identity_and_failure(capsys, tmp_path):
    g = tmp_path / "g.el"
    run(capsys, "gen", "--type", "gnp", "--n", "10", "--p", "0.5", "--out", str(g))
    code, out, _ = run(capsys, "verify", "--graph", str(g), "--sparsifier", str(g),
                       "--cuts", "all", "--eps", "0.1")
    rep = json.loads(out)
    assert code == 0 and rep["max_rel_error"] == 0 and rep["pass"] is True
    doubled = tmp_path / "d.el"
    text = parse_weighted_graph(g.read_text())
    doubled.write_text(f"{text.n}\n" + "".join(f"{a} {b} 2\n" for a, b, _ in text.edges))
    code, out, _ = run(capsys, "verify", "--graph", str(g), "--sparsifier", str(doubled))
    assert code == 1 and json.loads(out)["pass"] is False


def test_parse_error_reports_line(capsys, tmp_path):
    bad = tmp_path / "bad.el"
    bad.write_text("3\n0 1\n1 1\n")
    code, _, err = run(capsys, "sparsify", "--algo", "onepass", "--in", str(bad))
    assert code == 2 and "line 3" in err


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "refsparse.cli", "gen", "--type", "star",
                          "--n", "3"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "3\n0 1\n0 2\n"
