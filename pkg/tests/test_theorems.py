import dataclasses
from fractions import Fraction

import pytest

from lpkit.array import InvalidArrayError, ParameterArray, compute_a, compute_a_star, dualize
from lpkit.families import (
    CaseIData,
    CaseIIIData,
    CaseIVData,
    generate_case0_d0,
    generate_case0_d1,
    generate_case_I,
    generate_case_III,
    generate_case_IV,
    generate_d2_counterexample,
)
from lpkit.fields import RATIONAL
from lpkit.theorems import (
    analyze,
    check_all,
    is_balanced,
    is_essentially_bipartite,
    is_essentially_dual_bipartite,
)

from oracles import valid_samples

Q = RATIONAL
PINNED = ParameterArray.build(Q, [0, 1, 3], [0, 1, 3], [-1, -4], [2, 2])
D1 = ParameterArray.build(Q, [0, 1], [0, 1], [1], [2])
ETA5_DATA = CaseIData(Q, 3, q=2, eta=5, mu=1, h=-1, eta_star=0, mu_star=1, h_star=3, tau=0)
ETA5 = generate_case_I(ETA5_DATA)


def test_is_balanced_examples():
    assert is_balanced(PINNED)
    assert not is_balanced(D1)
    assert is_balanced(generate_case0_d0(Q, 1, 2))


def test_essentially_bipartite_examples():
    assert is_essentially_bipartite(ETA5) == (True, Q(5))
    assert all(ETA5.theta[i] + ETA5.theta[3 - i] == 10 for i in range(4))
    assert is_essentially_bipartite(PINNED) == (False, None)
    d1 = generate_case0_d1(Q, [0, 1], [0, 1], Fraction(-1, 2))
    assert is_essentially_bipartite(d1) == (True, Q(Fraction(1, 2)))
    assert is_balanced(d1)


def test_essentially_dual_bipartite_examples():
    assert is_essentially_dual_bipartite(dualize(ETA5)) == (True, Q(5))
    assert is_essentially_dual_bipartite(PINNED) == (False, None)
    d0 = generate_case0_d0(Q, 1, 2)
    assert is_essentially_dual_bipartite(d0) == (True, Q(2))


def test_arithmetic_progression_d2_is_bipartite():
    pa = generate_d2_counterexample(Q, [0, 1, 2], [0, 1, 3])
    flag, xi = is_essentially_bipartite(pa)
    assert flag
    a = compute_a(pa)
    assert a[1] - a[0] == 0


def test_predicates_reject_invalid():
    bad = ParameterArray.build(Q, [0, 1], [0, 1], [1], [1])
    for fn in (is_balanced, is_essentially_bipartite, is_essentially_dual_bipartite, analyze, check_all):
        with pytest.raises(InvalidArrayError):
            fn(bad)


def test_pinned_counterexample():
    rep = analyze(PINNED)
    assert rep.balanced and not rep.essentially_bipartite and not rep.essentially_dual_bipartite
    assert rep.case.tag == "Case0"
    report = check_all(PINNED)
    assert report.all_hold
    entry = report["balanced_implies_bipartite"]
    assert entry.skipped and entry.holds


def test_analysis_report_json():
    obj = analyze(PINNED).to_json()
    assert obj["a"] == ["1", "2", "1"] and obj["a_star"] == ["1", "2", "1"]
    assert obj["balanced"] is True and obj["case"] == "Case0"
    assert obj["essentially_bipartite"] is False and obj["essentially_dual_bipartite"] is False
    assert list(obj) == [
        "a", "a_star", "H", "case", "beta", "balanced",
        "essentially_bipartite", "xi", "essentially_dual_bipartite", "xi_star",
    ]


def test_case_IV_h_zero_instance():
    data = CaseIVData(Q, 3, eta=0, h=2, s=1, eta_star=0, h_star=2, s_star=1, tau=-20)
    pa = generate_case_IV(data)
    report = check_all(pa, data)
    assert report.all_hold, report.failed
    a, a_s = compute_a(pa), compute_a_star(pa)
    assert a[0] == a[3] and a_s[0] == a_s[3]
    assert not is_balanced(pa)
    assert not report["case4_no_balance"].skipped


def test_d0_checks_vacuous():
    report = check_all(generate_case0_d0(Q, 0, 0))
    assert report.all_hold


def test_check_all_with_case_data():
    report = check_all(ETA5, ETA5_DATA)
    assert report.all_hold
    ids = report.ids()
    for want in ("case1_h_closed_form", "case1_bipartite_criterion", "endpoints_dual", "balanced_three_way"):
        assert want in ids


def test_check_all_without_case_data_skips_closed_forms():
    ids = check_all(ETA5).ids()
    assert not any(i.startswith("case1_") for i in ids)


def test_wrong_case_data_is_caught():
    # the checks must be able to fail: lie about tau
    lie = dataclasses.replace(ETA5_DATA, tau=Q(1))
    report = check_all(ETA5, lie)
    assert not report.all_hold
    assert "case1_h_closed_form" in [e.id for e in report.failed]


def test_case_III_balanced_criterion():
    data = CaseIIIData(Q, 4, eta=0, h=1, s=0, eta_star=0, h_star=1, s_star=1, tau=0)
    pa = generate_case_III(data)
    report = check_all(pa, data)
    assert report.all_hold
    # s s* = 0 and tau = 0, so balanced
    assert is_balanced(pa)


def test_report_json_shape():
    obj = check_all(D1).to_json()
    assert obj["all_hold"] is True
    assert all(set(e) == {"id", "holds", "skipped", "detail"} for e in obj["entries"])


def test_all_checks_hold_on_samples():
    for s in valid_samples(seed=19, samples=5):
        report = check_all(s.array, s.data)
        assert report.all_hold, (s.family, report.failed)


def test_theorem_implications_on_samples():
    for s in valid_samples(seed=23, samples=5):
        pa = s.array
        d = pa.d
        a, a_s = compute_a(pa), compute_a_star(pa)
        assert (a[0] == a[d]) == (a_s[0] == a_s[d])
        bal = is_balanced(pa)
        eb, _ = is_essentially_bipartite(pa)
        edb, _ = is_essentially_dual_bipartite(pa)
        if eb or edb:
            assert bal
        if bal and d != 2:
            assert eb or edb
