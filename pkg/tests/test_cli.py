import json
import subprocess
import sys
from pathlib import Path

import pytest

from coxcohom.cli import emit, main, run

CONFIGS = Path(__file__).resolve().parent.parent / "demos" / "configs"


def c4(tasks, **extra):
    data = {"version": 1,
            "graph": {"vertices": ["a", "b", "c", "d"],
                      "edges": [["a", "b"], ["b", "c"], ["c", "d"], ["d", "a"]], "default": "infinity"},
            "vertex_groups": {v: "Z" for v in "abcd"}, "tasks": tasks}
    data.update(extra)
    return data


def pentagon(**extra):
    v = [f"v{i}" for i in range(5)]
    data = {"version": 1, "graph": {"vertices": v, "edges": [[v[i], v[(i + 1) % 5]] for i in range(5)],
                                    "default": "infinity"},
            "weights": {"*": "1"}, "tasks": ["weighted"]}
    data.update(extra)
    return data


def test_l2_on_four_cycle():
    report, code = run(c4(["l2"]))
    assert code == 0 and report["exit_code"] == 0
    assert report["results"][0]["result"]["betti"] == {"2": "1"}


def test_bad_label_exit_2():
    data = {"version": 1, "graph": {"vertices": ["s", "t"], "edges": [["s", "t", 1]]}, "tasks": ["growth"]}
    report, code = run(data)
    assert code == 2 and "below 2" in report["error"]["message"]


def test_uncertified_weights_exit_3_and_force():
    report, code = run(pentagon())
    assert code == 3 and report["error"]["type"] == "RegimeUncertifiable"
    report, code = run(pentagon(), force="large")
    assert code == 0
    assert report["results"][0]["result"]["unverified-hypothesis"] is True


@pytest.mark.parametrize("bad", [
    {"version": 2},
    {"tasks": ["nonsense"]},
    {"options": {"unknown": 1}},
    {"weights": {"*": "0"}},
    {"weights": {"*": "1.5"}},
    {"extra_key": True},
])
def test_schema_violations(bad):
    data = pentagon()
    data.update(bad)
    _, code = run(data)
    assert code == 2


def test_float_weights_rejected(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"version": 1, "graph": {"vertices": ["s"], "edges": []}, '
                   '"weights": {"*": 0.5}, "tasks": ["weighted"]}')
    out = tmp_path / "r.json"
    assert main(["analyze", str(cfg), "--out", str(out)]) == 2
    assert json.loads(out.read_text())["exit_code"] == 2


def test_empty_task_list_warns():
    report, code = run(c4([]))
    assert code == 0 and report["results"] == [] and report["warnings"]


def test_report_is_deterministic():
    data = c4(["l2", "groupring", "duality", "growth"], options={"max_length": 6})
    a, _ = run(data)
    b, _ = run(json.loads(json.dumps(data)))
    assert emit(a) == emit(b)
    assert emit(a, "markdown") == emit(b, "markdown")
    assert a["input_digest"] == b["input_digest"]
    assert a["timing"] is None


def test_digest_ignores_key_order():
    data = c4(["l2"])
    shuffled = dict(reversed(list(data.items())))
    assert run(data)[0]["input_digest"] == run(shuffled)[0]["input_digest"]


def test_markdown_output():
    report, _ = run(c4(["groupring"]))
    md = emit(report, "markdown").decode()
    assert "| degree |" in md
    rows = [line for line in md.splitlines() if line.startswith("| 2 ")]
    assert len(rows) >= 1


@pytest.mark.parametrize("name,code", [
    ("raag_4cycle", 0), ("bad_label", 2), ("pentagon_q1", 3), ("dinf_weighted", 0),
    ("octahedral_path", 0), ("pjoin_edge", 0), ("graph_product_finite", 0),
    ("graph_product_coxeter", 0), ("empty", 0)])
def test_demo_configs(name, code, tmp_path):
    out = tmp_path / "r.json"
    assert main(["analyze", str(CONFIGS / f"{name}.json"), "--out", str(out)]) == code
    report = json.loads(out.read_text())
    assert report["exit_code"] == code
    for entry in report["results"]:
        if entry["task"] == "verify":
            assert all(c["passed"] for c in entry["result"]["checks"]), entry


def test_verify_subcommand(tmp_path):
    out = tmp_path / "v.json"
    assert main(["verify", str(CONFIGS / "raag_4cycle.json"), "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert [r["task"] for r in report["results"]] == ["verify"]


def test_missing_file(tmp_path):
    out = tmp_path / "r.json"
    assert main(["analyze", str(tmp_path / "nope.json"), "--out", str(out)]) == 2


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "coxcohom", "analyze", str(CONFIGS / "raag_4cycle.json"),
                           "--format", "markdown"], capture_output=True, text=True)
    assert proc.returncode == 0 and "coxcohom" in proc.stdout
