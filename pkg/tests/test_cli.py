import json
from pathlib import Path

import pytest

from bunkbed.cli import RunConfig, main, run

GRAPHS = Path(__file__).resolve().parent.parent / "graphs"


def invoke(capsys, *args):
    code = main([str(a) for a in args])
    out, err = capsys.readouterr()
    return code, json.loads(out), err


def test_poly_uniform_prints_path_polynomial(capsys):
    code, report, err = invoke(capsys, "poly", "--graph", GRAPHS / "p2.txt", "--u", 0, "--v", 2, "--uniform")
    assert code == 0
    assert report["schema"] == 1
    assert report["uniform"] == "q^3 - 2q^4 + q^5"
    assert report["truncated"] is False
    assert "q^3 - 2q^4 + q^5" in err


def test_poly_evaluations(capsys):
    _, report, _ = invoke(capsys, "poly", "--graph", GRAPHS / "p2.txt", "--u", 0, "--v", 2, "--uniform", "1/2")
    assert report["evaluations"] == [{"q": "1/2", "value": "1/32"}]


def test_poly_truncated(capsys):
    _, report, _ = invoke(capsys, "poly", "--graph", GRAPHS / "p2.txt", "--u", 0, "--v", 2, "--r-max", 2)
    assert report["truncated"] is True


def test_verify_path(capsys):
    code, report, _ = invoke(capsys, "verify", "--graph", GRAPHS / "p2.txt", "--u", 0, "--v", 2, "--r-max", 3)
    assert code == 0 and report["pass"]
    assert set(report["results"]) == {"claim1", "claim2", "claim3_r2", "claim3_r3", "decomposition"}
    assert all(r["pass"] for r in report["results"].values())


def test_verify_equal_endpoints_fails(capsys):
    code, report, _ = invoke(capsys, "verify", "--graph", GRAPHS / "p2.txt", "--u", 1, "--v", 1)
    assert code != 0
    assert report["pass"] is False and report["error"]["type"] == "GraphError"


def test_missing_file_is_structured_error(capsys, tmp_path):
    code, report, _ = invoke(capsys, "bunkbed", "--graph", tmp_path / "nope.txt")
    assert code != 0 and "error" in report


def test_bad_graph_file(capsys, tmp_path):
    bad = tmp_path / "loop.txt"
    bad.write_text("0 0\n")
    code, report, _ = invoke(capsys, "bunkbed", "--graph", bad)
    assert code != 0 and "self-loop" in report["error"]["message"]


def test_max_vertices_guard(capsys):
    code, report, _ = invoke(capsys, "bunkbed", "--graph", GRAPHS / "k4.txt", "--max-vertices", 3)
    assert code != 0 and report["error"]["type"] == "SizeGuardError"


def test_bunkbed_and_cuts(capsys):
    _, report, _ = invoke(capsys, "bunkbed", "--graph", GRAPHS / "k2.txt", "--uniform", "1/3")
    assert report["bunkbed"]["vertices"] == ["0-", "1-", "0+", "1+"]
    assert report["assignment"]["q"]["H(0,1)"] == "1/3"
    _, report, _ = invoke(capsys, "cuts", "--graph", GRAPHS / "k2.txt", "--u", 0, "--v", 1)
    assert len(report["S_minus"]) == len(report["S_plus"]) == 4
    t = [c for c in report["S_minus"] if c["in_T"]]
    assert t == [{"cut": ["0-", "1+"], "in_T": True, "support": [0, 1], "monomial": "V(0)*V(1)*H(0,1)^2"}]


def test_epsilon_and_oracle_compare(capsys):
    code, report, _ = invoke(capsys, "epsilon", "--graph", GRAPHS / "p2.txt", "--u", 0, "--v", 2, "--trials", 50)
    assert code == 0 and report["uniform"]["uniform_threshold"]
    code, report, _ = invoke(capsys, "oracle-compare", "--graph", GRAPHS / "k2.txt", "--u", 0, "--v", 1, "--trials", 3)
    assert code == 0 and len(report["comparisons"]) == 3


def test_simulate_is_byte_identical(capsys, tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"mc{i}.json"
        code = main(["simulate", "--graph", str(GRAPHS / "k2.txt"), "--u", "0", "--v", "1",
                     "--uniform", "1/4", "--trials", "5000", "--seed", "42", "--out", str(path)])
        assert code == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_sweep_small(capsys):
    code, report, _ = invoke(capsys, "sweep", "--max-vertices", 2)
    assert code == 0 and report["failures"] == [] and report["instances"] == 4


def test_sweep_flags_stray_component_failures(capsys):
    code, report, _ = invoke(capsys, "sweep", "--max-vertices", 3)
    assert code == 1 and report["instances"] == 28
    assert [(f["graph"], f["u"], f["v"], f["failed"]) for f in report["failures"]] == [
        ("n=3 edges=[(1, 2)]", 1, 2, ["claim3_r2"]),
        ("n=3 edges=[(1, 2)]", 2, 1, ["claim3_r2"]),
    ]
    assert report["failures_with_stray_component"] == 2


def test_run_config_validates_command():
    with pytest.raises(ValueError):
        RunConfig(command="nope")
    code, report = run(RunConfig(command="cuts"))
    assert code != 0 and report["error"]["message"] == "--graph is required"
