import json
import os
import subprocess
from fractions import Fraction

import pytest

import latloc

DATA = os.environ.get("LATLOC_TEST_DATA", os.path.join(os.path.dirname(__file__), "..", "data"))


def test_version():
    assert latloc.__version__ == "0.1.0"


def test_run_program_mid():
    output, trace = latloc.run_program("mid", [], (3, 3, 5))
    assert output == "3"
    assert trace == [4, 4, 5, 10, 11, 12, 14, 15, 24, 6]
    assert latloc.run_program("mid", [1], (2, 1, 3))[0] == "1"


def test_generate_corpus_and_truth():
    ctx, truth = latloc.generate_corpus("trityp", [1, 2, 6])
    assert ctx.object_count == 576
    assert truth["fault_lines"] == {"1": 84, "2": 79, "6": 74}
    failing = {m: set(ids) for m, ids in truth["failing"].items()}
    assert latloc.classify_dependency(failing["1"], failing["2"]) == "ID"
    again, _ = latloc.generate_corpus("trityp", [1, 2, 6])
    assert again.to_jsonl() == ctx.to_jsonl()


def test_rules_are_fractions():
    ctx = latloc.load_trace_context(os.path.join(DATA, "mid.jsonl"))
    assert ctx.failing_count == 1
    stats = latloc.failure_rule_stats(ctx, [15])
    assert stats["lift"] == Fraction(3)
    rules = latloc.mine_failure_rules(ctx)
    assert rules
    assert all(r["lift"] >= 1 for r in rules)


def test_scripted_run_locates_all_faults():
    ctx, _ = latloc.generate_corpus("trityp", [1, 2, 6])
    run = latloc.run_scripted(ctx, [84, 79, 74])
    assert run["failures_to_explain"] == []
    assert {84, 79, 74} <= set(run["inspected"])


def test_localize_mid():
    ctx = latloc.load_trace_context(os.path.join(DATA, "mid.jsonl"), mode="sequence")
    traces = [[4, 4, 5, 10, 11, 12, 14, 15, 24, 6], [4, 4, 5, 10, 11, 12, 13, 24, 6],
              [4, 4, 5, 10, 11, 18, 13, 24, 6], [4, 4, 5, 10, 11, 18, 13, 24, 6],
              [4, 4, 5, 10, 11, 12, 13, 24, 6], [4, 4, 5, 10, 11, 12, 14, 15, 24, 6]]
    verdicts = [v for _, v in ctx.tests]
    report = latloc.localize(traces, verdicts, min_support=1)
    assert report["tie_groups"][0]["confidence"] == "1/2"
    ranks = {r["item"]: r["rank"] for r in report["ranking"]}
    assert 15 in ranks


def test_explore_service():
    ctx, _ = latloc.generate_corpus("trityp", [1, 2, 6])
    svc = latloc.ExploreService(ctx)
    session = svc.session()
    first = session["current"]["concept"]
    after = svc.decide({"concept": first, "decision": "no_fault"})
    assert len(after["log"]) == 1
    with pytest.raises(latloc.LatlocError):
        svc.decide({"concept": first, "decision": "no_fault"})
    with pytest.raises(ValueError):
        svc.decide({"decision": "perhaps"})
    assert svc.reset({"strategy": "stack"})["strategy"] == "stack"
    assert svc.lattice()["format"] == 1


def test_invalid_input_raises():
    with pytest.raises(latloc.LatlocError):
        latloc.parse_trace_context('{"test": "t1", "verdict": "maybe", "trace": [1]}\n')
    with pytest.raises(latloc.LatlocError):
        latloc.generate_corpus("trityp", [9])


@pytest.mark.skipif("LATLOC_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_pipeline(tmp_path):
    cli = os.environ["LATLOC_CLI"]
    traces = tmp_path / "traces.jsonl"
    rules = tmp_path / "rules.json"
    subprocess.run([cli, "corpus", "--mutants", "1", "--out", str(traces)], check=True)
    subprocess.run([cli, "mine", str(traces), "--out", str(rules)], check=True)
    doc = json.loads(rules.read_text())
    assert doc["format"] == 1
    bad = subprocess.run([cli, "mine", str(traces), "--min-sup", "999"], capture_output=True, text=True)
    assert bad.returncode == 2
    assert bad.stderr.startswith("error:")
