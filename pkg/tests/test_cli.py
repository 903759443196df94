import json

import numpy as np
import pytest

from discgrp import cli, intertwiners
from discgrp.correspondence import graph_from_json
from discgrp.correspondence import CorrespondenceContext
from discgrp.suites import SuiteResult

LOOP_GRAPH = {
    "vertices": ["v1"],
    "edges": [{"name": "e1", "src": "v1", "rng": "v1"}],
    "multiplicities": {"v1": 1},
}

TWO_GRAPH = {
    "vertices": ["v1", "v2"],
    "edges": [
        {"name": "e1", "src": "v1", "rng": "v1"},
        {"name": "e2", "src": "v1", "rng": "v2"},
    ],
    "multiplicities": {"v1": 2, "v2": 1},
}


def write_graph(tmp_path, obj, name="g.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_run_single_suite(tmp_path, capsys):
    g = write_graph(tmp_path, TWO_GRAPH)
    out = tmp_path / "report.json"
    code = cli.main(
        ["run", "--graph", g, "--suite", "moebius", "--trials", "10",
         "--seed", "3", "-o", str(out)]
    )
    assert code == cli.EXIT_PASS
    report = json.loads(out.read_text())
    assert report["schema"] == "discgrp/1"
    assert report["status"] == "pass"
    assert report["config"]["seed"] == 3
    assert report["instance"]["dim_H"] == 3
    (r,) = report["results"]
    assert r["suite"] == "moebius" and r["status"] == "pass"
    assert "moebius" in capsys.readouterr().out


def test_run_all_deterministic(tmp_path):
    g = write_graph(tmp_path, TWO_GRAPH)
    outs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        code = cli.main(
            ["run", "--graph", g, "--suite", "all", "--trials", "5",
             "--morita-ranks", "v1=2,v2=1", "-o", str(out)]
        )
        assert code == cli.EXIT_PASS
        outs.append(json.loads(out.read_text())["results"])
    # timing differs between runs; residuals and statuses must not
    for ra, rb in zip(*outs):
        ra.pop("seconds"), rb.pop("seconds")
        assert ra == rb


def test_parse_error_reports_line(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"vertices": [\n  "v1",,\n]}')
    code = cli.main(["run", "--graph", str(path), "--suite", "moebius"])
    assert code == cli.EXIT_HYPOTHESES
    err = capsys.readouterr().err
    assert "bad.json:2" in err


def test_graph_spec_error(tmp_path, capsys):
    g = write_graph(tmp_path, {"vertices": ["v1"]})
    assert cli.main(["run", "--graph", g]) == cli.EXIT_HYPOTHESES
    assert "error" in capsys.readouterr().err


def test_hypotheses_not_met_exit(tmp_path, capsys):
    # v1 receives no edge, so the isometry suite refuses the instance
    obj = {
        "vertices": ["v1", "v2"],
        "edges": [{"name": "e1", "src": "v1", "rng": "v2"}],
        "multiplicities": {"v1": 1, "v2": 1},
    }
    g = write_graph(tmp_path, obj)
    out = tmp_path / "r.json"
    code = cli.main(["run", "--graph", g, "--suite", "isometry", "-o", str(out)])
    assert code == cli.EXIT_HYPOTHESES
    report = json.loads(out.read_text())
    assert report["status"] == "hypotheses_not_met"


def test_failure_exit_code(tmp_path, monkeypatch):
    def failing(ctx, seed, tol, trials):
        r = SuiteResult("moebius")
        r.record("forced", 1.0, 1e-9)
        return r

    monkeypatch.setitem(cli.SUITES, "moebius", failing)
    g = write_graph(tmp_path, LOOP_GRAPH)
    out = tmp_path / "r.json"
    code = cli.main(["run", "--graph", g, "--suite", "moebius", "-o", str(out)])
    assert code == cli.EXIT_FAIL
    report = json.loads(out.read_text())
    assert report["status"] == "fail"
    assert report["results"][0]["failures"][0]["check"] == "forced"


def test_bad_rank_spec(tmp_path, capsys):
    g = write_graph(tmp_path, TWO_GRAPH)
    code = cli.main(["run", "--graph", g, "--morita-ranks", "v1:2"])
    assert code == cli.EXIT_HYPOTHESES


def test_sample_command(tmp_path, capsys):
    g = write_graph(tmp_path, TWO_GRAPH)
    code = cli.main(["sample", "--graph", g, "--seed", "9", "--radius", "0.5"])
    assert code == cli.EXIT_PASS
    obj = json.loads(capsys.readouterr().out)
    graph, mult = graph_from_json(TWO_GRAPH)
    ctx = CorrespondenceContext(graph, mult)
    eta = intertwiners.from_blocks_json(ctx, obj)
    assert intertwiners.is_intertwiner(ctx, eta)
    assert np.linalg.norm(eta, 2) <= 0.5 + 1e-12
