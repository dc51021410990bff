import io
import json
import math
from pathlib import Path

import pytest

from fqgraph import __version__
from fqgraph.cli import resolve_t_policy, run
from fqgraph.field import make_field

SAMPLES = Path(__file__).resolve().parent.parent / "docs" / "samples"

SAMPLE_ARGS = {
    "spheres": ["spheres", "--q", "5", "--d", "2"],
    "eval": ["eval", "--graph", "P2", "--q", "7", "--inputs", "random:0.3,random:0.5,sphere"],
    "sweep": ["sweep", "--graph", "K2", "--q", "5,13", "--exponents", "3/2,3/2", "--mode", "paper"],
    "vertices": ["vertices", "--graph", "K3", "--d", "2"],
    "implications": ["implications"],
    "decay": ["decay", "--q", "5,7"],
}


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def assert_close(a, b):
    if isinstance(a, float) or isinstance(b, float):
        assert math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-12)
    elif isinstance(a, dict):
        assert a.keys() == b.keys()
        for k in a:
            assert_close(a[k], b[k])
    elif isinstance(a, list):
        assert len(a) == len(b)
        for x, y in zip(a, b):
            assert_close(x, y)
    else:
        assert a == b


@pytest.mark.parametrize("name", sorted(SAMPLE_ARGS))
def test_frozen_samples(name):
    code, out, _ = invoke(SAMPLE_ARGS[name])
    frozen = json.loads((SAMPLES / f"{name}.json").read_text())
    got = json.loads(out)
    assert code == frozen["exit_code"] == 0
    frozen.pop("version")
    got.pop("version")
    assert_close(got, frozen)


def test_payload_fields_and_determinism():
    code, first, err = invoke(SAMPLE_ARGS["eval"])
    _, second, _ = invoke(SAMPLE_ARGS["eval"])
    assert first == second
    payload = json.loads(first)
    assert {"tool", "version", "command", "config", "seed", "exit_code", "results"} <= payload.keys()
    assert payload["version"] == __version__
    assert "wall_time_s" not in payload
    assert err.startswith("wall_time_s=")
    _, timed, _ = invoke(SAMPLE_ARGS["eval"] + ["--timing"])
    assert "wall_time_s" in json.loads(timed)


def test_spheres_rows():
    _, out, _ = invoke(["spheres", "--q", "5", "--d", "2"])
    rows = json.loads(out)["results"]
    assert [(r["t"], r["size"]) for r in rows] == [(1, 4), (4, 4)]
    assert all(r["oracle_agrees"] and r["scan_agrees"] for r in rows)
    _, out, _ = invoke(["spheres", "--q", "5", "--d", "2", "--t", "0"])
    assert json.loads(out)["results"][0]["size"] == 9


def test_eval_values():
    code, out, _ = invoke(["eval", "--graph", "K2", "--q", "5"])
    rec = json.loads(out)["results"][0]
    assert code == 0 and rec["generic"] == pytest.approx(1.0) and rec["agree"]
    code, out, _ = invoke(["eval", "--graph", "KITE", "--q", "13", "--inputs", "random:0.5,random:0.5,sphere,full"])
    assert json.loads(out)["results"][0]["agree"] is True


@pytest.mark.parametrize("argv,code,message", [
    (["spheres", "--q", "4"], 2, "NotOddPrime"),
    (["eval", "--graph", "K3", "--q", "5", "--mode", "paper"], 3, "ZeroNormalizer"),
    (["eval", "--graph", "K3", "--q", "13", "--t", "2", "--mode", "paper"], 3, "ZeroNormalizer"),
    (["eval", "--graph", "K2", "--inputs", "delta"], 2, "needs 2 inputs"),
    (["eval", "--graph", "Q9"], 2, "UnknownGraph"),
    (["sweep", "--graph", "K2"], 2, "--exponents"),
    (["sweep", "--graph", "K2", "--exponents", "1/2,1"], 2, "BadExponent"),
    (["bogus"], 2, "invalid choice"),
    (["eval", "--graph", "K2", "--all"], 2, "not allowed"),
])
def test_exit_codes(argv, code, message):
    got, out, err = invoke(argv)
    assert got == code
    assert out == ""
    assert message in err


def test_vertices_exit_codes():
    code, out, _ = invoke(["vertices", "--all", "--d", "2"])
    rows = {r["graph"]: r for r in json.loads(out)["results"]}
    assert code == 1
    assert [g for g, r in rows.items() if r["status"] == "MISMATCH"] == ["Y"]
    assert sum(r["status"] == "MATCH" for r in rows.values()) == 6
    code, out, _ = invoke(["vertices", "--graph", "K2", "--d", "3"])
    assert code == 0 and "(3/4,3/4)" in json.loads(out)["results"][0]["vertices"]


def test_implications_agree():
    code, out, _ = invoke(["implications"])
    rows = json.loads(out)["results"]
    assert code == 0
    checked = [r for r in rows if "expected" in r]
    assert len(checked) == 13 and all(r["agrees_with_expected"] for r in checked)


def test_sweep_averaging_and_csv(tmp_path):
    code, out, _ = invoke(["sweep", "--graph", "A", "--q", "5,13", "--exponents", "1,inf"])
    rows = json.loads(out)["results"]
    assert code == 0 and rows[0]["general_max"] < rows[1]["general_max"]
    target = tmp_path / "decay.csv"
    code, out, _ = invoke(["decay", "--q", "5", "--format", "csv", "--out", str(target)])
    lines = target.read_text().splitlines()
    assert code == 0 and out == ""
    assert lines[0].split(",")[:3] == ["q", "d", "t"] and len(lines) == 3  # header + t in {1, 4}


def test_t_policy():
    f = make_field(7)
    assert resolve_t_policy(None, f, 2) == [1, 2, 4]
    assert resolve_t_policy(None, f, 3) == list(range(1, 7))
    assert resolve_t_policy("3,10", f, 2) == [3, 3]
