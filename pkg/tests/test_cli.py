import json

import pytest

from qfdef import Relation, diamond_lattice, save_algebra, save_relation
from qfdef.cli import main
from qfdef.oracle import Graph, save_graph

from conftest import DIAMOND_LEQ


@pytest.fixture
def diamond_files(tmp_path):
    alg_path = tmp_path / "diamond.json"
    save_algebra(diamond_lattice(), str(alg_path))
    order_path = tmp_path / "order.json"
    save_relation(Relation(2, DIAMOND_LEQ), str(order_path))
    rprime_path = tmp_path / "rprime.json"
    save_relation(Relation.of(2, [(0, 1), (0, 2), (0, 3)]), str(rprime_path))
    return str(alg_path), str(order_path), str(rprime_path)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


@pytest.mark.parametrize("strategy", ["merging", "splitting"])
def test_decide_definable_exit_zero(capsys, diamond_files, strategy):
    alg, order, _ = diamond_files
    code, out = run(
        capsys, ["decide", "--strategy", strategy, "--algebra", alg, "--relation", order]
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["definable"] is True
    if strategy == "splitting":
        assert "formula" in doc and "stats" in doc


@pytest.mark.parametrize("strategy", ["merging", "splitting"])
def test_decide_not_definable_exit_one(capsys, diamond_files, strategy):
    alg, _, rprime = diamond_files
    code, out = run(
        capsys, ["decide", "--strategy", strategy, "--algebra", alg, "--relation", rprime]
    )
    assert code == 1
    doc = json.loads(out)
    assert doc["definable"] is False
    assert doc["witness_in"] != doc["witness_out"]
    assert set(doc["gamma"]) == {"domain", "image"}


def test_decide_emit_formula(capsys, diamond_files, tmp_path):
    alg, order, _ = diamond_files
    out_path = tmp_path / "phi.qf"
    code, out = run(
        capsys,
        [
            "decide", "--strategy", "splitting", "--algebra", alg,
            "--relation", order, "--emit-formula", str(out_path),
        ],
    )
    assert code == 0
    from qfdef import extension, parse_formula

    phi = parse_formula(out_path.read_text().strip())
    assert extension(diamond_lattice(), phi, 2).tuples == DIAMOND_LEQ


def test_isotype_matches_canonical_partition(capsys, diamond_files):
    alg, _, _ = diamond_files
    code, out = run(capsys, ["isotype", "--algebra", alg, "--tuple", "u,u',⊥"])
    assert code == 0
    doc = json.loads(out)
    assert doc["partition"] == [
        [0, 3, 12, 14, 18, 21, 24],
        [1, 7, 16, 17, 19, 22, 25],
        [2, 4, 5, 6, 8, 9, 10, 11, 20, 23, 26],
        [13, 15, 27, 28, 29, 30, 31, 32, 33, 34],
    ]
    assert doc["universe"] == ["u", "u'", "⊥", "⊤"]


def test_isotype_trace_includes_terms(capsys, diamond_files):
    alg, _, _ = diamond_files
    code, out = run(capsys, ["isotype", "--algebra", alg, "--tuple", "1,2,0", "--trace"])
    assert code == 0
    doc = json.loads(out)
    assert doc["terms"][:4] == ["x0", "x1", "x2", "meet(x0,x0)"]


def test_decompose(capsys, diamond_files):
    _, order, _ = diamond_files
    code, out = run(capsys, ["decompose", "--relation", order])
    assert code == 0
    doc = json.loads(out)
    assert doc["arity"] == 2 and doc["spec"] == [1, 2]
    assert doc["targets"][0]["pattern"] == [[0, 1]]


def test_oracle_cli(capsys, diamond_files):
    alg, order, rprime = diamond_files
    assert run(capsys, ["oracle", "--algebra", alg, "--relation", order])[0] == 0
    assert run(capsys, ["oracle", "--algebra", alg, "--relation", rprime])[0] == 1


def test_oracle_budget_exit_code(capsys, diamond_files):
    alg, order, _ = diamond_files
    code, _ = run(capsys, ["oracle", "--algebra", alg, "--relation", order, "--budget", "5"])
    assert code == 3


def test_gen_group_and_decide_round_trip(capsys, tmp_path):
    alg_path = tmp_path / "g.json"
    code, _ = run(capsys, ["gen", "group", "--factors", "2,2", "--out", str(alg_path)])
    assert code == 0
    phi_path = tmp_path / "phi.qf"
    rel_path = tmp_path / "rel.json"
    code, _ = run(
        capsys,
        [
            "--seed", "4", "gen", "formula", "--algebra", str(alg_path), "--arity", "2",
            "--out", str(phi_path), "--extension-out", str(rel_path),
        ],
    )
    assert code == 0
    code, out = run(
        capsys,
        ["decide", "--strategy", "splitting", "--algebra", str(alg_path), "--relation", str(rel_path)],
    )
    assert code == 0
    assert json.loads(out)["definable"] is True


def test_gen_graph_star(capsys, tmp_path):
    graph_path = tmp_path / "graph.json"
    save_graph(Graph.of(2, [(0, 1)]), str(graph_path))
    out_path = tmp_path / "star.json"
    code, out = run(capsys, ["gen", "graph-star", "--graph", str(graph_path), "--out", str(out_path)])
    assert code == 0
    assert json.loads(out) == {"zero": 2, "one": 3}
    from qfdef import load_algebra

    star = load_algebra(str(out_path))
    assert star.size == 4


def test_bench_cli_csv(capsys, tmp_path):
    csv_path = tmp_path / "bench.csv"
    code, _ = run(
        capsys,
        [
            "bench", "--family", "abelian-group", "--sizes", "4", "--samples", "1",
            "--csv", str(csv_path),
        ],
    )
    assert code == 0
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "family,size,strategy,samples,median_ms,timeouts"
    assert len(lines) == 3


def test_usage_error_exit_code(capsys, tmp_path):
    code, _ = run(capsys, ["decide", "--strategy", "merging", "--algebra", "missing.json", "--relation", "missing.json"])
    assert code == 2


def test_global_flags_after_subcommand(capsys, tmp_path):
    out_a = tmp_path / "a.json"
    out_b = tmp_path / "b.json"
    assert main(["--seed", "9", "gen", "random", "--size", "3", "--out", str(out_a)]) == 0
    assert main(["gen", "random", "--size", "3", "--out", str(out_b), "--seed", "9"]) == 0
    from qfdef import load_algebra

    assert load_algebra(str(out_a)).op("f").table == load_algebra(str(out_b)).op("f").table


def test_decide_trace_and_invariants(capsys, diamond_files):
    alg, order, _ = diamond_files
    code = main(
        [
            "decide", "--strategy", "merging", "--algebra", alg, "--relation", order,
            "--trace", "--check-invariants",
        ]
    )
    captured = capsys.readouterr()
    assert code == 0
    assert "pop" in captured.err
