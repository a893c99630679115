import json
import math

import pytest

from rlab.cli import main
from rlab.families import cycle, petersen
from rlab.graphcore import format_graph
from rlab.realize import format_partition


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in {"petersen.graph": format_graph(petersen()),
                       "c6.graph": format_graph(cycle(6)),
                       "c6.part": format_partition([(0, 2, 4), (1, 3, 5)]),
                       "c6.degmat": "2\n0 2\n2 0\n",
                       "bad.graph": "3 1\n0 7\n"}.items():
        p = tmp_path / name
        p.write_text(text)
        paths[name] = p
    return paths


def test_degmat_spectrum(capsys):
    code, out, _ = run_json(capsys, "degmat", "spectrum", "[[0,3],[2,0]]")
    assert code == 0
    assert out["eigenvalues"] == pytest.approx([math.sqrt(6), -math.sqrt(6)])


def test_degmat_validate_and_sizes(capsys):
    code, out, _ = run_json(capsys, "degmat", "validate", "[[0,1],[0,0]]")
    assert code == 2 and out["valid"] is False
    code, out, _ = run_json(capsys, "degmat", "sizes", "[[0,3],[2,0]]")
    assert code == 0 and out["sizes"] == [2, 3]


def test_rho_cover_kesten(capsys):
    code, out, _ = run_json(capsys, "rho-cover", "[[3]]", "--rmax", 2000)
    assert code == 0
    assert out["lower"] <= 2 * math.sqrt(2) <= out["upper"]
    assert out["upper"] - out["lower"] < 1e-3


def test_certify_classic_and_D(capsys, files):
    code, out, _ = run_json(capsys, "certify", files["petersen.graph"])
    assert code == 0 and out["verdict"] == "certified-yes"
    code, out, _ = run_json(capsys, "certify", files["c6.graph"], "--degmat", files["c6.degmat"],
                            "--partition", files["c6.part"])
    assert code == 0 and out["verdict"] == "certified-yes" and out["k"] == 1
    code, out, _ = run_json(capsys, "certify", "@prism:24")
    assert code == 0 and out["verdict"] == "certified-no"


def test_certify_hypothesis_violation(capsys):
    code, out, err = run(capsys, "certify", "@path:4")
    assert code == 1 and out == "" and "regular" in err


def test_input_errors(capsys, files):
    code, out, err = run(capsys, "spectrum", files["bad.graph"])
    assert code == 2 and out == "" and err
    code, out, err = run(capsys, "spectrum", "/nonexistent/file")
    assert code == 2 and "cannot read" in err
    code, _, err = run(capsys, "spectrum", "@nosuch:3")
    assert code == 2 and "unknown family" in err
    code, _, _ = run(capsys, "degmat", "sizes", "[[0,1]")
    assert code == 2


def test_output_is_deterministic(capsys, files):
    first = run(capsys, "serre", files["petersen.graph"], "-d", 3, "--delta-max", 3, "--eps", 0.5)
    second = run(capsys, "serre", files["petersen.graph"], "-d", 3, "--delta-max", 3, "--eps", 0.5)
    assert first == second and first[0] == 0
    assert json.loads(first[1])["status"] == "pass"


def test_table_output(capsys):
    code, out, _ = run(capsys, "rho", "@petersen", "--table")
    assert code == 0
    assert [line.split()[0] for line in out.splitlines()] == ["input_sha256", "n", "rho"]
    with pytest.raises(SystemExit):
        main(["rho", "@petersen", "--table", "--json"])


def test_paschke_sweep_csv(capsys):
    code, out, _ = run(capsys, "paschke", "-d", 4, "-g", 5, "--sweep", "--csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "d,g,s_star,rho,h"
    assert len(lines) == 1 + 2 * 3
    for row in lines[1:]:
        d, g, _, rho, _ = row.split(",")
        assert float(rho) > 2 * math.sqrt(int(d) - 1)


def test_multiple_inputs_and_jobs(capsys):
    code, out, _ = run_json(capsys, "rho", "@petersen", "@cycle:5", "--jobs", 2)
    assert code == 0 and [r["rho"] for r in out] == pytest.approx([3.0, 2.0])
    code, out, err = run_json(capsys, "rho", "@petersen", "@nosuch")
    assert code == 2 and "error" in out[1] and err


def test_serre_negative_boost(capsys):
    code, out, _ = run_json(capsys, "serre", "@prism:50", "-d", 3, "--delta-max", 3, "--eps", 0.5)
    assert code == 0 and out["count"] >= out["required"]
    code, out, _ = run_json(capsys, "negative", "@cycle:101", "-d", 2, "--delta-max", 2)
    assert code == 0 and out["constants"]["r"] == 49 and out["balls_bipartite"]
    code, out, _ = run_json(capsys, "boost", "@complete:6", "-d", 5, "--delta-max", 5)
    assert code == 0 and out["status"] == "pass"


def test_negative_with_degree_matrix(capsys, files):
    code, out, _ = run_json(capsys, "negative", files["c6.graph"], "--degmat", files["c6.degmat"],
                            "--partition", files["c6.part"], "--eps", 1.5, "--delta-max", 2)
    assert code == 0 and out["count"] == 3


def test_graph_commands(capsys):
    code, out, _ = run_json(capsys, "ball", "@petersen", "-v", 0, "-r", 1)
    assert out["n"] == 4 and out["rho"] == pytest.approx(math.sqrt(3))
    code, out, _ = run_json(capsys, "girth", "@petersen")
    assert out["girth"] == 5
    code, out, _ = run_json(capsys, "girth", "@petersen", "--odd")
    assert out["odd_girth"] == 5
    code, out, _ = run_json(capsys, "girth", "@kbip:3,3", "--universal", "--cap", 12)
    assert code == 0 and out["universal_girth"] == 4
    code, out, _ = run_json(capsys, "spectrum", "@cycle:4", "--method", "lapack")
    assert out["eigenvalues"] == pytest.approx([2, 0, 0, -2], abs=1e-12)


def test_tree_commands(capsys):
    code, out, _ = run_json(capsys, "treeball", "[[3]]", "-r", 2)
    assert code == 0 and out["n"] == 10 and out["depth"].count(2) == 6
    code, out, _ = run_json(capsys, "treeball", "[[3]]", "-r", 2, "--quotient")
    assert out["sizes"] == [1, 3, 6]
    code, out, _ = run_json(capsys, "xdg", "-d", 3, "-g", 5, "-r", 2)
    assert code == 0 and out["n"] == 10


def test_realize_and_project(capsys, tmp_path):
    stem = tmp_path / "k23"
    code, out, _ = run_json(capsys, "realize", "[[0,3],[2,0]]", "--out", stem)
    assert code == 0 and out["n"] == 5 and out["equitable"]
    graph, part = f"{stem}.graph", f"{stem}.part"
    code, out, _ = run_json(capsys, "project", graph, "[[0,3],[2,0]]", "--partition", part,
                            "--start", 0, "-r", 3, "--backtrack")
    assert code == 0 and out["status"] == "success"
    code, out, _ = run_json(capsys, "project", "@star:3", "[[2]]", "--start", 0, "-r", 2)
    assert code == 1 and out["status"] == "failure"


def test_caps_env(capsys, monkeypatch):
    monkeypatch.setenv("RLAB_CAPS", "tree_ball=5")
    code, out, err = run(capsys, "treeball", "[[3]]", "-r", 3)
    assert code == 2 and out == "" and err
    monkeypatch.setenv("RLAB_CAPS", "nonsense=1")
    code, _, err = run(capsys, "treeball", "[[3]]", "-r", 1)
    assert code == 2 and "RLAB_CAPS" in err


def test_inconclusive_exit_code(capsys):
    # at radius 8 the X_{3,5} ball is still below 2 sqrt 2, so no positive delta exists
    code, out, _ = run_json(capsys, "boost", "@petersen", "-d", 3, "--delta-max", 3,
                            "--radius", 8)
    assert code == 3 and out["status"] == "inconclusive"
