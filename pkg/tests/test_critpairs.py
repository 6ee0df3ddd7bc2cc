import ls2.critpairs as cp
from ls2.critpairs import LHS, critical_pair_scan, is_left_linear, produced_shape
from ls2.rewrite import STANDARD_RULES, RuleId


def test_no_critical_pairs_over_all_rules():
    report = critical_pair_scan()
    assert report.critical_pairs == 0
    assert len(report.rules) == 25


def test_all_rules_left_linear():
    report = critical_pair_scan()
    assert report.all_left_linear
    assert sum(report.left_linear.values()) == 25


def test_subset_still_clean():
    subset = tuple(r for r in STANDARD_RULES if r is not RuleId.SUM_PAIR)
    report = critical_pair_scan(subset)
    assert report.critical_pairs == 0
    assert len(report.rules) == 24


def test_every_standard_rule_has_a_pattern():
    assert set(LHS) == set(STANDARD_RULES)
    assert all(is_left_linear(r) for r in STANDARD_RULES)


def test_shape_filter_is_load_bearing(monkeypatch):
    # without the well-formedness restriction the raw syntactic overlaps
    # (sums and products inside the tensor and case eliminations) appear
    monkeypatch.setattr(cp, "_compatible", lambda a, b: True)
    report = critical_pair_scan()
    assert report.critical_pairs > 0


def test_produced_shapes():
    assert produced_shape(LHS[RuleId.SUM_STAR]) == "one"
    assert produced_shape(LHS[RuleId.SUM_PAIR]) == "with"
    assert produced_shape(LHS[RuleId.PROD_TLAM]) == "forall"
    assert produced_shape(LHS[RuleId.BETA_LOLLI]) == "any"


def test_summary_format():
    text = critical_pair_scan().summary()
    assert "critical pairs: 0" in text
    assert "left-linear: 25/25" in text
