import json
import subprocess
import sys

import pytest

from forestdecomp.cli import (
    EXIT_BUDGET,
    EXIT_ERROR,
    EXIT_INFEASIBLE,
    EXIT_INVALID,
    EXIT_OK,
    EXIT_PRECONDITION,
    EXIT_USAGE,
    run,
)
from forestdecomp.formats import ParseError, graph_to_json, load_graph, parse_graph, to_text
from forestdecomp.graph import Multigraph, StubGraph, complete_graph, cycle_graph, disjoint_union, path_graph


@pytest.fixture
def files(tmp_path):
    def write(name, g):
        p = tmp_path / name
        p.write_text(to_text(g))
        return str(p)

    return write


def result_of(path):
    return json.loads(open(path).read())["result"]


def test_text_format_round_trip():
    g = StubGraph.of(3, [(0, 1), (1, 2)], [(2, 4)])
    assert parse_graph(to_text(g, "hello")) == g
    assert parse_graph(json.dumps(graph_to_json(g))) == g
    assert parse_graph("# two tokens\n2 1\n0 1\n") == StubGraph.of(2, [(0, 1)])


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError) as exc:
        parse_graph("3 2 0\n0 1\n1 x\n", "g.txt")
    assert exc.value.line == 3 and str(exc.value).startswith("g.txt:3:")
    with pytest.raises(ParseError) as exc:
        parse_graph("2 1 0\n0 5\n")
    assert exc.value.line == 2
    with pytest.raises(ParseError):
        parse_graph("2 2 0\n0 1\n")
    with pytest.raises(ParseError):
        parse_graph('{"vertices": 2, "edges": [[0, 1]')


def test_commands_on_small_graphs(files, tmp_path):
    k4 = files("k4.txt", complete_graph(4))
    out = str(tmp_path / "o.json")
    assert run(["mincut", "--host", k4, "--out", out]) == EXIT_OK
    assert result_of(out)["order"] == 3
    assert run(["pack", "--host", k4, "--k", "2", "--out", out]) == EXIT_OK
    assert len(result_of(out)["trees"]) == 2
    assert run(["pack", "--host", files("c5.txt", cycle_graph(5)), "--k", "2", "--out", out]) == EXIT_INFEASIBLE
    assert result_of(out)["certificate"]
    assert run(["orient", "--host", k4, "--out", out]) == EXIT_OK
    assert result_of(out)["balanced"] and result_of(out)["strongly_connected"]
    assert run(["sparse-tree", "--host", k4, "--p", "1", "--out", out]) == EXIT_OK
    assert result_of(out)["bound_holds"]
    assert run(["split", "--host", k4, "--k0", "1", "--delta0", "1", "--out", out]) == EXIT_PRECONDITION
    assert run(["split", "--host", files("k9.txt", complete_graph(9)), "--k0", "1", "--delta0", "2", "--lenient", "--out", out]) == EXIT_OK
    assert result_of(out)["rest_min_degree"] >= 2
    two = Multigraph(8, complete_graph(4).edges + tuple((u + 4, v + 4) for u, v in complete_graph(4).edges) + ((3, 4),))
    assert run(["peel", "--host", files("two.txt", two), "--k", "2", "--out", out]) == EXIT_OK
    assert len(result_of(out)["parts"]) == 2


def test_forest_commands(files, tmp_path):
    f = files("f.txt", disjoint_union([path_graph(1), path_graph(2)]))
    out = str(tmp_path / "o.json")
    assert run(["chain", "--forest", f, "--k", "2", "--out", out]) == EXIT_OK
    assert len(result_of(out)["groups"]) == 2
    assert run(["forest-params", "--forest", f, "--minimal", "--out", out]) == EXIT_OK
    r = result_of(out)
    assert (r["n"], r["m"], r["r"]) == (10, 21, 5)
    bad = files("bad.txt", disjoint_union([path_graph(2), path_graph(4)]))
    assert run(["forest-params", "--forest", bad, "--out", out]) == EXIT_PRECONDITION


def test_decompose_verify_round_trip(files, tmp_path):
    host = str(tmp_path / "host.txt")
    assert run(["gen", "--kind", "clustered", "--sizes", "36,22", "--seed", "0", "--p", "0.85", "--bridges", "2",
                "--modulus", "3", "--part-moduli=-,15", "--format", "text", "--out", host]) == EXIT_OK
    f = files("f.txt", disjoint_union([path_graph(1), path_graph(2)]))
    dec = str(tmp_path / "d.json")
    assert run(["decompose", "--host", host, "--forest", f, "--minimal", "--delta", "14", "--out", dec]) == EXIT_OK
    ver = str(tmp_path / "v.json")
    assert run(["verify", "--host", host, "--decomposition", dec, "--out", ver]) == EXIT_OK
    assert result_of(ver)["valid"]
    # tamper: make two parts share an element
    obj = json.loads(open(dec).read())
    parts = obj["result"]["decomposition"]["parts"]
    parts[1]["edges"] = parts[1]["edges"][:-1] + [parts[0]["edges"][0]]
    bad = str(tmp_path / "bad.json")
    open(bad, "w").write(json.dumps(obj))
    assert run(["verify", "--host", host, "--decomposition", bad, "--out", ver]) == EXIT_INVALID
    assert "part" in result_of(ver)["message"]


def test_decompose_budget_exit(files, tmp_path):
    host = str(tmp_path / "host.txt")
    run(["gen", "--kind", "clustered", "--sizes", "36,22", "--seed", "0", "--p", "0.85", "--bridges", "2",
         "--modulus", "3", "--part-moduli=-,15", "--format", "text", "--out", host])
    f = files("f.txt", disjoint_union([path_graph(1), path_graph(2)]))
    code = run(["decompose", "--host", host, "--forest", f, "--minimal", "--budget", "1", "--out", str(tmp_path / "d.json")])
    assert code in (EXIT_BUDGET, EXIT_INFEASIBLE)


def test_counterexample_command(tmp_path):
    out = str(tmp_path / "c.json")
    assert run(["counterexample", "--f3", "1", "--k", "2", "--t", "4", "--out", out]) == EXIT_OK
    r = result_of(out)
    assert r["certificate"]["issued"] and r["graph"]["vertices"] == 2 * 4 * 4
    # with two matching edges every residue mod 6 is reachable at depth 2
    assert run(["counterexample", "--f3", "2", "--k", "2", "--t", "3", "--out", out]) == EXIT_PRECONDITION
    assert result_of(out)["profile"]["status"] == "none"


def test_gen_is_deterministic(tmp_path):
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    args = ["gen", "--kind", "random-min-degree", "--n", "30", "--delta", "8", "--seed", "1"]
    assert run(args + ["--out", a]) == EXIT_OK
    assert run(args + ["--out", b]) == EXIT_OK
    assert open(a).read() == open(b).read()
    r = result_of(a)
    assert r["meta"]["min_degree"] >= 8
    assert load_graph(a).vertex_count == 30


def test_gen_missing_parameter(tmp_path):
    assert run(["gen", "--kind", "random-min-degree", "--out", str(tmp_path / "x")]) == EXIT_PRECONDITION


def test_parse_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 2 0\n0 1\n1 x\n")
    assert run(["mincut", "--host", str(bad)]) == EXIT_ERROR
    assert "bad.txt:3:" in capsys.readouterr().err


def test_missing_file_and_usage(tmp_path):
    assert run(["mincut", "--host", str(tmp_path / "none.txt")]) == EXIT_ERROR
    with pytest.raises(SystemExit) as exc:
        run(["mincut"])
    assert exc.value.code == EXIT_USAGE


def test_console_script_runs(files):
    k4 = files("k4.txt", complete_graph(4))
    proc = subprocess.run([sys.executable, "-m", "forestdecomp.cli", "mincut", "--host", k4], capture_output=True, text=True)
    assert proc.returncode == 0
    out = json.loads(proc.stdout)
    assert out["header"]["tool"] == "forestdecomp" and out["result"]["order"] == 3
