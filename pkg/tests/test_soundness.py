import csv
import json

import pytest

from decorat.soundness import (EXCEPTION_RULES, STATE_RULES, check_rule_soundness,
                               confirm_library, harness_models, model_for)
from decorat.report import write_report

MODELS = harness_models(0)


@pytest.mark.parametrize("rule", ["ax2", "copair2", "eax1", "pair1"])
def test_primary_rules_pass(rule):
    rep = check_rule_soundness(rule, MODELS[model_for(rule)], n=30)
    assert rep.failures == 0 and rep.passes == 30


def test_rules_are_assigned_to_their_model():
    assert all(model_for(r) == "state" for r in STATE_RULES)
    assert all(model_for(r) == "exception" for r in EXCEPTION_RULES)
    assert model_for("imp1") == "combined"


def test_pair1_fails_in_the_combined_model():
    rep = check_rule_soundness("pair1", MODELS["combined"], n=100)
    assert rep.failures > 0
    cx = rep.first_counterexample
    assert cx is not None and "raise" in json.dumps(cx)


def test_reports_are_reproducible():
    a = check_rule_soundness("eq2", MODELS["state"], n=20, seed=3)
    b = check_rule_soundness("eq2", harness_models(0)["state"], n=20, seed=3)
    assert a.to_json() == b.to_json()


def test_library_lemmas_hold_in_the_models():
    reports = confirm_library(n=5)
    assert len(reports) >= 16
    assert all(r.ok for r in reports), [r.rule for r in reports if not r.ok]


def test_report_files(tmp_path):
    reps = {"primary": [check_rule_soundness("ax1", MODELS["state"], n=5)],
            "combined": [check_rule_soundness("pair1", MODELS["combined"], n=5)]}
    paths = write_report(reps, {"primary_ok": True}, tmp_path)
    doc = json.loads(open(paths["json"]).read())
    assert doc["reports"]["primary"][0]["rule"] == "ax1"
    with open(paths["csv"]) as fh:
        rows = list(csv.DictReader(fh))
    assert [r["rule"] for r in rows] == ["ax1", "pair1"]
    with open(paths["png"], "rb") as fh:
        assert fh.read(8) == b"\x89PNG\r\n\x1a\n"
