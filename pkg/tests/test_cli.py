from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from circflow.cli import main
from circflow.families import flower, petersen
from circflow.graph6 import parse_graph6, write_graph6
from conftest import DATA, small_cubic


def run(*args, input=None, env=None):
    result = CliRunner().invoke(main, list(args), input=input, env=env)
    return result


def records(output: str) -> list[list[str]]:
    return [line.split("\t") for line in output.splitlines() if line and not line.startswith("#")]


def test_compute_order18():
    res = run("compute", str(DATA / "snarks18.g6"))
    assert res.exit_code == 0, res.output
    rows = records(res.output)
    assert [r[1] for r in rows] == ["9/2", "9/2"]
    assert all(r[2].isdigit() for r in rows)
    assert res.output.splitlines()[-1] == "# histogram 9/2: 2"


def test_bound_on_petersen():
    res = run("bound", "5/1", input=write_graph6(petersen()) + "\n")
    assert res.exit_code == 0
    assert records(res.output)[0][1] == "ge"
    res = run("bound", "5", input=write_graph6(flower(5)) + "\n")
    assert records(res.output)[0][1] == "lt"


def test_bound_rejects_bad_values():
    assert run("bound", "2", input="").exit_code != 0
    assert run("bound", "x/y", input="").exit_code != 0


def test_generate_then_compute():
    res = run("generate", "flower", "7")
    assert res.exit_code == 0
    assert parse_graph6(res.output.strip()).n == 28
    res = run("compute", input=res.output)
    assert records(res.output)[0][1] == "13/3"


def test_generate_errors():
    assert run("generate", "flower", "4").exit_code != 0
    assert run("generate", "flower").exit_code != 0
    assert run("generate", "named", "nosuch").exit_code != 0
    assert run("generate", "petersen").output.strip() == write_graph6(petersen())


def _batch() -> str:
    graphs = [g for g in small_cubic() if g.n >= 8][:12]
    return "".join(write_graph6(g) + "\n" for g in graphs)


def test_output_order_is_independent_of_workers():
    batch = _batch()
    one = run("compute", "--jobs", "1", input=batch)
    many = run("compute", "--jobs", "3", input=batch)
    split = run("compute", "--jobs", "2", "--split-bisections", input=batch)
    keys = [[r[:2] for r in records(x.output)] for x in (one, many, split)]
    assert keys[0] == keys[1] == keys[2]
    assert [r[0] for r in keys[0]] == batch.split()


def test_env_default_jobs():
    batch = _batch()
    res = run("compute", input=batch, env={"CFN_JOBS": "2"})
    assert res.exit_code == 0
    assert [r[1] for r in records(res.output)] == [r[1] for r in records(run("compute", input=batch).output)]


def test_tsv_and_json_agree():
    batch = _batch()
    tsv = records(run("compute", input=batch).output)
    doc = json.loads(run("compute", "--format", "json", input=batch).output)
    assert [(r["graph6"], r["result"]) for r in doc["records"]] == [(r[0], r[1]) for r in tsv]
    hist = {}
    for r in tsv:
        hist[r[1]] = hist.get(r[1], 0) + 1
    assert doc["histogram"] == hist


def test_corrupt_lines_are_reported_and_skipped():
    batch = write_graph6(petersen()) + "\nnot-graph6!\n" + write_graph6(flower(5)) + "\n"
    res = CliRunner().invoke(main, ["compute"], input=batch)
    assert res.exit_code == 1
    rows = records(res.stdout)
    assert [r[1] for r in rows] == [">=5", "error", "9/2"]
    assert "line 2" in res.stderr


def test_non_cubic_and_bridged_inputs():
    from circflow.graph import Graph

    path = write_graph6(Graph(3, [(0, 1), (1, 2)]))
    res = run("compute", input=path + "\n")
    assert res.exit_code == 1 and records(res.stdout)[0][1] == "error"
    bridged = Graph(10, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (0, 4), (3, 4),
                         (5, 6), (5, 7), (6, 7), (6, 8), (7, 8), (5, 9), (8, 9), (4, 9)])
    res = run("compute", input=write_graph6(bridged) + "\n")
    assert res.exit_code == 0 and records(res.stdout)[0][1] == "inf"


def test_timeout_token():
    res = run("compute", "--timeout", "0.000001", input=write_graph6(flower(7)) + "\n")
    assert records(res.output)[0][1] == "timeout"


def test_oracle_check_passes_on_corpus():
    res = run("oracle-check", str(DATA / "cubic_bridgeless_4_to_12.g6"))
    assert res.exit_code == 0
    assert "mismatch" not in res.output


def test_oracle_check_flags_errors():
    res = run("oracle-check", input="C~\n???\n")
    assert res.exit_code == 1


def test_reduce_command():
    from circflow.expansion import contract_edge

    g = contract_edge(petersen(), 0, 1)
    res = run("reduce", input=write_graph6(g) + "\n")
    assert res.exit_code == 0, res.output
    lines = res.output.splitlines()
    assert lines[0] == f"# graph {write_graph6(g)}"
    verdict = lines[-1].split("\t")
    assert verdict[0] == write_graph6(g) and verdict[1] in ("ge", "lt")
    leaves = [parse_graph6(x.split("\t")[0]) for x in lines[1:-1]]
    assert leaves and all(h.is_cubic() for h in leaves)


def test_reduce_with_gadget_file(tmp_path):
    from circflow.expansion import contract_edge

    path = tmp_path / "g.txt"
    path.write_text("gadget c4\nvertices 4\nedges 0-1 1-2 2-3 3-0\nattach 0 1 2 3\n")
    g = contract_edge(petersen(), 0, 1)
    res = run("reduce", "--gadgets", str(path), input=write_graph6(g) + "\n")
    assert res.exit_code == 0
    n_leaves = len(res.output.splitlines()) - 2
    res_default = run("reduce", input=write_graph6(g) + "\n")
    assert n_leaves < len(res_default.output.splitlines()) - 2


@pytest.mark.parametrize("cmd", ["compute", "bound", "oracle-check", "generate", "reduce"])
def test_help(cmd):
    assert run(cmd, "--help").exit_code == 0
