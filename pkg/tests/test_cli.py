import io
import json
import re

import networkx as nx
import pytest

from ucfamily import cli
from ucfamily.errors import ConjectureViolation
from ucfamily.family import format_family
from ucfamily.oracle import enumerate_all_families

from conftest import fam, power_set_family

POWER3 = format_family(power_set_family(3))


def run(monkeypatch, capsys, argv, stdin=""):
    monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_height_human(monkeypatch, capsys):
    code, out, _ = run(monkeypatch, capsys, ["height"], POWER3)
    assert code == 0
    assert out.splitlines()[0] == "n=3 m=7 H=3"
    assert "pi_1 (height 3): {1} {2} {3}" in out
    assert "pi_3 (height 1): {1,2,3}" in out
    assert "properties: all pass" in out


def test_height_single_set(monkeypatch, capsys):
    code, out, _ = run(monkeypatch, capsys, ["height"], "1 2 3\n")
    assert code == 0 and "H=1" in out


def test_height_structured(monkeypatch, capsys):
    code, out, _ = run(monkeypatch, capsys, ["height", "--format", "structured"], POWER3)
    doc = json.loads(out)
    assert doc["H"] == 3
    assert [layer["height_number"] for layer in doc["layers"]] == [3, 2, 1]
    assert all(item["passed"] for item in doc["properties"].values())


def test_not_closed_exit_status(monkeypatch, capsys):
    code, out, err = run(monkeypatch, capsys, ["height"], "1\n2\n")
    assert code == cli.EXIT_NOT_CLOSED
    assert "not union-closed" in err
    assert "[1] | [2]" in err


def test_parse_error_exit_status(monkeypatch, capsys):
    code, _, err = run(monkeypatch, capsys, ["witness"], "1 a\n")
    assert code == cli.EXIT_PARSE
    assert "malformed" in err


def test_input_file(tmp_path, monkeypatch, capsys):
    path = tmp_path / "f.txt"
    path.write_text("1 2\n1 2 3\n")
    code, out, _ = run(monkeypatch, capsys, ["witness", "--input", str(path)])
    assert code == 0
    assert out.splitlines()[0] == "element 1, 2/2, H2, guaranteed"


def test_missing_input_file(monkeypatch, capsys, tmp_path):
    code, _, _ = run(monkeypatch, capsys, ["witness", "-i", str(tmp_path / "nope")])
    assert code == cli.EXIT_PARSE


@pytest.mark.parametrize("text, first_line", [
    (POWER3, "element 1, 4/7, H3-LargeM, guaranteed"),
    ("1 2 3\n", "element 1, 1/1, H1, guaranteed"),
    ("1 2\n1 2 3\n", "element 1, 2/2, H2, guaranteed"),
])
def test_witness_human(monkeypatch, capsys, text, first_line):
    code, out, _ = run(monkeypatch, capsys, ["witness"], text)
    assert code == 0
    assert out.splitlines()[0] == first_line


def test_witness_structured_trace(monkeypatch, capsys):
    code, out, _ = run(monkeypatch, capsys, ["witness", "--format", "structured"], POWER3)
    doc = json.loads(out)
    w = doc["witness"]
    assert (w["element"], w["frequency"], w["m"], w["branch"], w["guaranteed"]) == \
        (1, 4, 7, "H3-LargeM", True)
    assert w["trace"]["M"] == [2, 3]
    assert w["trace"]["tent_size"] == 3


def test_witness_conjecture_violation_status(monkeypatch, capsys):
    def boom(f, d=None):
        raise ConjectureViolation("synthetic", family=f)

    monkeypatch.setattr(cli, "find_witness", boom)
    code, out, _ = run(monkeypatch, capsys, ["witness", "--format", "structured"], POWER3)
    assert code == cli.EXIT_CONJECTURE
    assert json.loads(out)["error"] == "conjecture-violation"


def test_invariant_violation_status(monkeypatch, capsys):
    from ucfamily.errors import InvariantViolation

    def boom(f, d=None):
        raise InvariantViolation("synthetic")

    monkeypatch.setattr(cli, "find_witness", boom)
    code, _, err = run(monkeypatch, capsys, ["witness"], POWER3)
    assert code == cli.EXIT_INVARIANT
    assert "synthetic" in err


def test_close(monkeypatch, capsys):
    code, out, _ = run(monkeypatch, capsys, ["close"], "1\n2\n3\n")
    assert code == 0
    assert out == POWER3
    code, out, _ = run(monkeypatch, capsys, ["close", "--format", "structured"], "4\n9\n")
    assert json.loads(out)["family"]["members"] == [[4], [9], [4, 9]]


def test_tents(monkeypatch, capsys):
    code, out, _ = run(monkeypatch, capsys, ["tents"], POWER3)
    assert code == 0
    assert "T({1,2}) |T|=3 base: {1} {2}" in out
    assert "Int({1,2}, {1,3}) = 1" in out
    code, out, _ = run(monkeypatch, capsys, ["tents", "--format", "structured"], POWER3)
    doc = json.loads(out)
    assert len(doc["tents"]) == 4
    assert all(p["intersection"] <= 1 for p in doc["intersections"])


def test_random(monkeypatch, capsys):
    argv = ["random", "--n", "6", "--gens", "4", "--seed", "11"]
    code, first, _ = run(monkeypatch, capsys, argv)
    _, second, _ = run(monkeypatch, capsys, argv)
    assert code == 0 and first == second
    code, out, _ = run(monkeypatch, capsys, ["close"], first)
    assert out == first


def test_verify(monkeypatch, capsys):
    code, out, _ = run(monkeypatch, capsys, ["verify", "--n", "3"])
    assert code == 0
    assert "45 union-closed families" in out
    assert "violations: 0" in out


def test_verify_failing_status(monkeypatch, capsys):
    from ucfamily import oracle

    real = oracle.check_family
    monkeypatch.setattr(oracle, "check_family",
                        lambda f: real(f)[:2] + (["synthetic problem"],))
    code, out, _ = run(monkeypatch, capsys, ["verify", "--n", "2"])
    assert code == cli.EXIT_VIOLATIONS
    assert "violations: 4" in out


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["verify"])
    assert info.value.code == 2


def parse_dot(text):
    """Minimal DOT reader: checks brace balance and declared edge endpoints."""
    depth = 0
    for ch in re.sub(r'"[^"]*"', '""', text):
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        assert depth >= 0
    assert depth == 0
    nodes = dict(re.findall(r'^\s*(s\d+) \[label="([^"]*)"\];$', text, re.M))
    edges = re.findall(r"^\s*(s\d+) -> (s\d+);$", text, re.M)
    ranks = re.findall(r"subgraph \w+ \{ rank=same; ([^}]*)\}", text)
    for a, b in edges:
        assert a in nodes and b in nodes
    return nodes, edges, ranks


def hasse_edge_count(f):
    g = nx.DiGraph()
    g.add_nodes_from(range(f.m))
    for i, a in enumerate(f.members):
        for j, b in enumerate(f.members):
            if i != j and b & ~a == 0:
                g.add_edge(j, i)
    return nx.transitive_reduction(g).number_of_edges()


@pytest.mark.parametrize("sets, counts", [
    ([[1], [1, 2]], (2, 1, 2)),
    ([[1, 2, 3]], (1, 0, 1)),
])
def test_dot_examples(sets, counts):
    nodes, edges, ranks = parse_dot(cli.dot_document(fam(*sets)))
    assert (len(nodes), len(edges), len(ranks)) == counts


def test_dot_power_set(monkeypatch, capsys):
    code, out, _ = run(monkeypatch, capsys, ["dot"], POWER3)
    assert code == 0
    nodes, edges, ranks = parse_dot(out)
    assert (len(nodes), len(edges), len(ranks)) == (7, 9, 3)
    assert '"{1,2,3}"' in out


@pytest.mark.parametrize("n", [1, 2, 3])
def test_dot_well_formed_exhaustive(n):
    for f in enumerate_all_families(n):
        nodes, edges, ranks = parse_dot(cli.dot_document(f))
        assert len(nodes) == f.m
        assert len(edges) == hasse_edge_count(f)
        assert sum(len(r.split()) for r in ranks) == f.m
