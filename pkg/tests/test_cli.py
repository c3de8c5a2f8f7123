import csv
import subprocess
import sys

import pytest

from alphacf.cli import main


def rows(path):
    with open(path, encoding="utf-8") as fh:
        return list(csv.reader(line for line in fh if not line.startswith("#")))


def meta(path):
    return [line for line in open(path, encoding="utf-8") if line.startswith("#")]


@pytest.fixture
def k2(tmp_path):
    p = tmp_path / "k2.txt"
    p.write_text("a b\n")
    return p


@pytest.fixture
def star5(tmp_path):
    p = tmp_path / "star.txt"
    p.write_text("".join(f"0 {i}\n" for i in range(1, 6)))
    return p


def test_centrality_k2_exact(k2, tmp_path):
    out = tmp_path / "out"
    assert main(["centrality", str(k2), "--measure", "alpha_cf", "--alpha", "0.8",
                 "--exact", "--out", str(out)]) == 0
    edges = rows(out / "alpha_cf_edges.csv")
    assert edges[0][:3] == ["u", "v", "score"]
    assert edges[1][:2] == ["a", "b"] and float(edges[1][2]) == pytest.approx(1.0)
    assert any("alpha: 0.8" in line for line in meta(out / "alpha_cf_edges.csv"))
    nodes = rows(out / "alpha_cf_nodes.csv")
    assert [float(r[1]) for r in nodes[1:]] == pytest.approx([1.0, 1.0])


def test_centrality_degree_has_no_edge_file(star5, tmp_path):
    assert main(["centrality", str(star5), "--measure", "degree", "--out", str(tmp_path)]) == 0
    nodes = rows(tmp_path / "degree_nodes.csv")
    assert [int(float(r[1])) for r in nodes[1:]] == [5, 1, 1, 1, 1, 1]
    assert not (tmp_path / "degree_edges.csv").exists()


def test_truncated_flag_selects_truncated_measure(k2, tmp_path):
    assert main(["centrality", str(k2), "--truncated", "--exact", "--out", str(tmp_path)]) == 0
    assert float(rows(tmp_path / "alpha_cf_tr_edges.csv")[1][2]) == 0.0


def test_empty_file_is_usage_error(tmp_path, capsys):
    p = tmp_path / "empty.txt"
    p.write_text("")
    assert main(["stats", str(p)]) == 2
    assert "error" in capsys.readouterr().err


def test_unknown_measure(k2, capsys):
    assert main(["centrality", str(k2), "--measure", "katz"]) == 2


@pytest.mark.parametrize("argv", [
    ["stats", "nofile.txt"],
    ["centrality", "ws:n=20,k=4,p=0.1", "--alpha", "1.5"],
    ["centrality", "ws:n=20,k=4,p=0.1", "--pairs", "0"],
    ["generate", "ws:n=20,k=3,p=0.1"],
    ["frobnicate"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_budget_error_exit_code(tmp_path):
    assert main(["centrality", "ws:n=2100,k=2,p=0.0", "--exact", "--out", str(tmp_path)]) == 1


def test_correlate_single_measure(star5, capsys):
    assert main(["correlate", str(star5), "--measures", "pagerank", "--no-timestamp"]) == 0
    body = [line for line in capsys.readouterr().out.splitlines() if not line.startswith("#")]
    assert body == ["measure,pagerank", "pagerank,1.000000"]


def test_generate_deterministic(tmp_path):
    a, b, c = (tmp_path / f"{x}.txt" for x in "abc")
    spec = "ws:n=1000,k=12,p=0.15"
    assert main(["generate", spec, "--seed", "4", "--out", str(a)]) == 0
    assert main(["generate", spec, "--seed", "4", "--out", str(b)]) == 0
    assert main(["generate", spec, "--seed", "5", "--out", str(c)]) == 0
    assert a.read_bytes() == b.read_bytes() != c.read_bytes()
    lines = [line for line in a.read_text().splitlines() if not line.startswith("#")]
    assert len(lines) == 6000


def test_stats_watts_strogatz(capsys):
    assert main(["stats", "ws:n=1000,k=12,p=0.15", "--seed", "2"]) == 0
    body = [r for r in csv.reader(capsys.readouterr().out.splitlines()) if not r[0].startswith("#")]
    rec = dict(zip(body[0], body[1]))
    assert rec["n"] == "1000" and rec["m"] == "6000"
    assert float(rec["mean_degree"]) == pytest.approx(12.0)


def test_vulnerability_star(star5, tmp_path):
    assert main(["vulnerability", str(star5), "--measures", "degree", "--out", str(tmp_path)]) == 0
    body = rows(tmp_path / "vulnerability_degree.csv")
    assert body[0] == ["fraction", "inv_avg_dist", "lcc_size"]
    assert float(body[1][0]) == 0.0
    assert [int(r[2]) for r in body[1:4]] == [6, 1, 1]
    assert any("ranking: static" in line for line in meta(tmp_path / "vulnerability_degree.csv"))


def test_vulnerability_recompute(star5, tmp_path):
    assert main(["vulnerability", str(star5), "--measures", "betweenness", "--recompute",
                 "--step", "2", "--out", str(tmp_path)]) == 0
    body = rows(tmp_path / "vulnerability_betweenness.csv")
    assert [int(r[2]) for r in body[1:]] == [6, 1, 1, 0]


def test_ccdf_edge_pairs(tmp_path, capsys):
    p = tmp_path / "p3.txt"
    p.write_text("0 1\n1 2\n")
    assert main(["ccdf", str(p), "--measure", "alpha_cf:0.8", "--edge", "0,1"]) == 0
    body = [r for r in csv.reader(capsys.readouterr().out.splitlines()) if not r[0].startswith("#")]
    assert body[0] == ["x", "count_greater"]
    assert int(body[-1][1]) == 0 and len(body) >= 2


def test_output_deterministic_without_timestamp(tmp_path):
    args = ["centrality", "ws:n=60,k=4,p=0.2", "--pairs", "50", "--seed", "3", "--no-timestamp"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    for name in ("alpha_cf_nodes.csv", "alpha_cf_edges.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_environment_override(k2, tmp_path, monkeypatch):
    monkeypatch.setenv("ALPHACF_ALPHA", "0.3")
    monkeypatch.setenv("ALPHACF_EXACT", "1")
    assert main(["centrality", str(k2), "--out", str(tmp_path)]) == 0
    assert any("alpha: 0.3" in line for line in meta(tmp_path / "alpha_cf_edges.csv"))


def test_module_entry_point(k2):
    proc = subprocess.run([sys.executable, "-m", "alphacf", "stats", str(k2)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "n,m" in proc.stdout
