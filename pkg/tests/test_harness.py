import json

from rechml.experiments import must_satisfy, parallel_compose
from rechml.generators import TrialConfig
from rechml.harness import fixture_lts, report_json, report_text, verify_theorems
from rechml.semantics import satisfies
from rechml.testterms import reachable_lts
from rechml.textio import parse_formula, parse_lts, parse_test

CHECK_NAMES = [
    "must_formula_agreement",
    "must_test_agreement",
    "may_formula_agreement",
    "may_test_agreement",
    "bekic_equivalence",
    "fixpoint_prefix_property",
    "fixpoint_unfolding",
    "approximant_chain",
    "divergence_collapse",
    "open_min_not_full",
    "acc_equivalence",
    "unfold_law",
    "must_implies_may",
    "tt_grammar_semantic",
]


def small_config(**overrides):
    base = dict(seed=3, trials=30, property_trials=10)
    base.update(overrides)
    return TrialConfig(**base)


def test_all_checks_run_and_pass():
    report = verify_theorems(small_config())
    assert [c.name for c in report.checks] == CHECK_NAMES
    assert report.passed
    assert all(c.failures == 0 for c in report.checks)


def test_reports_are_reproducible_in_process():
    cfg = small_config()
    first = verify_theorems(cfg)
    second = verify_theorems(cfg)
    assert report_text(first) == report_text(second)
    assert report_json(first) == report_json(second)


def test_zero_trials_is_a_vacuous_pass():
    report = verify_theorems(TrialConfig(trials=0, property_trials=0))
    assert report.passed
    assert all(c.trials == 0 for c in report.checks)


def test_only_restricts_the_run():
    report = verify_theorems(small_config(), only={"bekic_equivalence"})
    assert [c.name for c in report.checks] == ["bekic_equivalence"]


def test_fixture_has_the_awkward_shapes():
    lts = fixture_lts(TrialConfig())
    assert not lts.converges("div")
    assert not lts.converges("divfork")
    assert lts.converges("dead")
    assert lts.outgoing("dead") == []


def test_report_text_shape():
    report = verify_theorems(small_config(trials=5, property_trials=2))
    text = report_text(report)
    lines = text.strip().splitlines()
    assert lines[0].startswith("verify seed=3 ")
    assert lines[-1].startswith("summary checks=14 ")
    assert lines[-1].endswith("verdict=pass")
    payload = json.loads(report_json(report))
    assert payload["summary"]["verdict"] == "pass"
    assert len(payload["checks"]) == 14


def test_mutation_is_detected():
    report = verify_theorems(small_config(trials=60, property_trials=2), mutate=True)
    assert not report.passed
    broken = {c.name: c for c in report.checks}["must_formula_agreement"]
    assert broken.failures > 0
    assert broken.counterexample is not None
    # everything except the corrupted compiler still holds
    for check in report.checks:
        if check.name != "must_formula_agreement":
            assert check.failures == 0, check.name


def test_mutation_counterexample_refails_standalone():
    report = verify_theorems(small_config(trials=60, property_trials=2), mutate=True)
    ce = {c.name: c for c in report.checks}["must_formula_agreement"].counterexample
    lts, init = parse_lts(ce["lts"])
    assert init == ce["state"]
    formula = parse_formula(ce["formula"])
    test = parse_test(ce["test"])
    tlts, troot = reachable_lts(test)
    graph = parallel_compose(lts, tlts, ce["state"], troot)
    assert must_satisfy(graph) == ce["test_verdict"]
    assert satisfies(lts, ce["state"], formula) == ce["formula_verdict"]
    assert ce["test_verdict"] != ce["formula_verdict"]
