import json
import re
from fractions import Fraction

import pytest

from psistirling import harness
from psistirling.verdict import Counterexample, IdentityVerdict

Q = Fraction


@pytest.fixture(scope="module")
def ledger_verdicts():
    return harness.run_all(6)


def test_unknown_suite_lists_registered():
    with pytest.raises(KeyError) as exc:
        harness.run_suite("nonsense", 4)
    assert "eq20-orthogonality" in str(exc.value)


def test_orthogonality_suite():
    vs = harness.run_suite("eq20-orthogonality", 8, [1, 2, Q(1, 2)])
    assert vs and all(v.verdict == "VERIFIED" for v in vs)


def test_weyl_suite():
    vs = harness.run_suite("eq23-weyl", 8, [1, 2, Q(3, 5)])
    assert vs and all(v.verdict == "VERIFIED" for v in vs)


def test_cigl_recurrence_readings():
    q = Q(2)
    vs = {v.identity_id: v for v in harness.run_suite("ex5-cigl-recurrence", 3, [q])}
    a, b = vs["ex5-cigl-recurrence-readingA"], vs["ex5-cigl-recurrence-readingB"]
    assert a.verdict == "FAILED" and b.verdict == "FAILED"
    ce = b.counterexample
    assert (ce.n, ce.k, ce.lhs, ce.rhs) == (3, 2, 2 * q + q * q, 1 + q + q * q)
    # reading A already breaks at row 2 (minimal n), and again at (3, 2)
    assert (a.counterexample.n, a.counterexample.k) == (2, 1)
    lhs, rhs = harness.cigl_recurrence_value(q, 3, 2, "A"), 1 + q + q * q
    assert lhs == q ** 4 + q + q * q and lhs != rhs
    one = harness.run_suite("ex5-cigl-recurrence", 6, [1])
    assert all(v.verdict == "VERIFIED" for v in one)


def test_counterexamples_are_sound(ledger_verdicts):
    failed = [v for v in ledger_verdicts if v.verdict == "FAILED"]
    assert failed
    for v in failed:
        lhs, rhs = harness.reevaluate(v)
        assert lhs != rhs
        assert (lhs, rhs) == (v.counterexample.lhs, v.counterexample.rhs)


def test_ledger_is_deterministic(ledger_verdicts):
    again = harness.run_all(6)
    assert harness.export_ledger(again) == harness.export_ledger(ledger_verdicts)


def test_ledger_roundtrip(ledger_verdicts):
    text = harness.export_ledger(ledger_verdicts)
    assert harness.export_ledger(harness.load_ledger(text)) == text


def test_ledger_schema_cases():
    assert json.loads(harness.export_ledger([])) == []
    ok = IdentityVerdict("x", "VERIFIED", 3, {"psi": "classical"})
    rec = json.loads(harness.export_ledger([ok]))[0]
    assert list(rec) == ["identity_id", "params", "range", "q_samples", "verdict"]
    bad = IdentityVerdict("y", "FAILED", 3, {}, (Q(2),), Counterexample(1, 1, Q(1, 3), Q(2)))
    rec = json.loads(harness.export_ledger([bad]))[0]
    assert rec["counterexample"] == {"n": 1, "k": 1, "lhs": "1/3", "rhs": "2"}
    assert rec["q_samples"] == ["2"]


def test_failed_needs_counterexample():
    with pytest.raises(ValueError):
        IdentityVerdict("z", "FAILED", 2)
    with pytest.raises(ValueError):
        IdentityVerdict("z", "FAILED", 2, counterexample=Counterexample(0, 0, Q(1), Q(1)))


def test_registry_covers_every_equation_and_exercise():
    cover = harness.registry_coverage()
    for i in range(1, 24):
        assert f"eq{i}" in cover or f"eq{i}" in harness.OUT_OF_SCOPE, i
    for j in range(1, 14):
        assert f"ex{j}" in cover or f"ex{j}" in harness.OUT_OF_SCOPE, j
    for ids in cover.values():
        assert all(s in harness.SUITES for s in ids)


def test_every_evaluator_is_reachable(ledger_verdicts):
    seen = {v.identity_id for v in ledger_verdicts}
    cellwise = set(harness.EVALUATORS) - {"qpoly-carlitz2-degree-bound", "qpoly-cigl2-degree-bound"}
    assert cellwise <= seen | {"ex5-cigl-dobinski-poisson"}


def test_ambiguous_identities_all_reported(ledger_verdicts):
    ids = {v.identity_id for v in ledger_verdicts}
    for needed in ("ex3-carlitz-q", "ex3-carlitz-tilde-readingA", "ex3-carlitz-tilde-readingB",
                   "ex4-bell-q", "ex4-bell-tilde-readingA", "ex4-bell-tilde-readingB",
                   "ex5-cigl-recurrence-readingA", "ex5-cigl-recurrence-readingB",
                   "eq16-dobinski-times", "eq16-dobinski-divides",
                   "eq16-dobinski-times-q17", "eq16-dobinski-divides-q17"):
        assert needed in ids


def test_classical_specializations_hold(ledger_verdicts):
    unexpected = [v for v in ledger_verdicts if v.verdict == "FAILED" and harness.expected_verified(v)]
    assert unexpected == []


def test_degree_bound_suite_is_symbolic():
    vs = harness.run_suite("qpoly-degree-bound", 5, [1])
    for v in vs:
        assert v.verdict == "VERIFIED"
        assert v.params["symbolic-strength"] == "yes"
        assert len(v.q_samples) == 5 * 4 // 2 + 1


def test_summary_table(ledger_verdicts):
    table = harness.summary_table(ledger_verdicts)
    lines = table.splitlines()
    assert lines[0].split()[:3] == ["identity", "params", "verdict"]
    assert len(lines) == len(ledger_verdicts) + 1
    assert re.search(r"ex5-cigl-recurrence-readingB\s+q:2\s+FAILED\s+n=3 k=2", table)


def test_bad_max_n():
    with pytest.raises(ValueError):
        harness.run_suite("eq2-rota", 0)
