from fractions import Fraction

import pytest

from psistirling import bell, stirling, umbral
from psistirling.oracles import bell_oracle
from psistirling.psi import PsiSequence

Q = Fraction
TOL = Q(1, 10 ** 13)
E = Q(271828182845904523536, 10 ** 20)


def test_bell_tilde_examples():
    assert list(bell.bell_tilde(PsiSequence.classical(), 5).values) == [1, 1, 2, 5, 15, 52]
    for q in (Q(2), Q(1, 2), Q(-5, 3)):
        assert bell.bell_tilde(PsiSequence.q_gauss(q), 3)[3] == 4 + q
    assert bell.bell_tilde(PsiSequence.custom([3, 7]), 0)[0] == 1


def test_carlitz_recurrence_examples():
    for q in (Q(2), Q(1, 2), Q(3, 5)):
        b = bell.bell_carlitz_by_recurrence(q, 2)
        assert b[1] == 1
        assert b[2] == 1 + q
        assert b[2] == bell.bell_carlitz(q, 2)[2]
    assert list(bell.bell_carlitz_by_recurrence(1, 5).values) == [1, 1, 2, 5, 15, 52]


def test_carlitz_recurrence_vs_row_sums():
    # a claimed identity: exact at q = 1, recorded elsewhere for generic q
    assert bell.bell_carlitz_by_recurrence(1, 10).values == bell.bell_carlitz(1, 10).values
    assert bell.bell_carlitz_by_recurrence(2, 10).values != bell.bell_carlitz(2, 10).values


def test_cigl_bell_examples():
    for q in (Q(2), Q(1, 2), Q(3, 5)):
        b = bell.bell_cigl(q, 3)
        assert b[2] == 1 + q
        assert b[3] == 2 + q + q ** 2 + q ** 3
    assert [int(v) for v in bell.bell_cigl(1, 10).values] == [bell_oracle(n) for n in range(11)]
    for q in (Q(1), Q(2), Q(1, 2)):
        assert list(bell.bell_cigl(q, 10).values) == [umbral.cigl_dobinski_exact(q, n) for n in range(11)]


def test_tilde_barred_is_weighted_row_sum():
    q = Q(3, 5)
    tri = stirling.tilde2_by_recurrence(PsiSequence.q_gauss(q), 5)
    b = bell.bell_tilde_barred(q, 5)
    assert b[4] == sum(q ** k * v for k, v in enumerate(tri.row(4)))


def test_epsilon_weight_classical():
    for r in (0, 3, 17):
        e = bell.epsilon_weight(PsiSequence.classical(), r, Q(1, 10 ** 10))
        assert e.contains(Q(367879441171442, 10 ** 15))
        assert e.tail_bound <= Q(1, 10 ** 10)


def test_epsilon_weight_first_term_only():
    e = bell.epsilon_weight(PsiSequence.classical(), 0, 2)
    assert e.partial_sum == 1
    assert e.tail_bound == 1


def test_epsilon_weight_q_half():
    e = bell.epsilon_weight(PsiSequence.q_gauss(Q(1, 2)), 0, Q(1, 10 ** 8))
    assert e.converged and e.terms_used <= 40


def test_q17_factor_scales():
    seq = PsiSequence.q_gauss(2)
    plain = bell.epsilon_weight(seq, 3, Q(1, 10 ** 9))
    scaled = bell.epsilon_weight(seq, 3, Q(1, 10 ** 9), q17_factor=True)
    assert scaled.partial_sum == plain.partial_sum / 8
    with pytest.raises(ValueError):
        bell.epsilon_weight(PsiSequence.custom([1, 2]), 1, Q(1, 100), q17_factor=True)


def test_classical_dobinski_times():
    for n in range(11):
        a = bell.dobinski_sum(PsiSequence.classical(), n, bell.TIMES, TOL, 60)
        assert a.contains(bell_oracle(n))
        assert a.tail_bound <= Q(1, 10 ** 12)
    five = bell.dobinski_sum(PsiSequence.classical(), 5, bell.TIMES, TOL, 60)
    assert five.to_dict()["decimal"] == "52.0000000000"


def test_classical_dobinski_divides_gives_e_squared_times_bell():
    zero = bell.dobinski_sum(PsiSequence.classical(), 0, bell.DIVIDES, TOL, 60)
    assert abs(zero.partial_sum - E * E) < Q(1, 10 ** 9)
    five = bell.dobinski_sum(PsiSequence.classical(), 5, bell.DIVIDES, TOL, 60)
    assert not five.contains(52)
    assert abs(five.partial_sum - 52 * E * E) < Q(1, 10 ** 8)


def test_tail_bound_shrinks_with_cap():
    seq = PsiSequence.classical()
    bounds = [bell.dobinski_sum(seq, 6, bell.TIMES, TOL, cap).tail_bound for cap in (12, 18, 30)]
    assert bounds[0] > bounds[1] > bounds[2]
    for cap in (12, 18, 30):
        assert bell.dobinski_sum(seq, 6, bell.TIMES, TOL, cap).contains(203)


def test_interval_nesting():
    seq = PsiSequence.q_gauss(Q(1, 2))
    for conv in bell.CONVENTIONS:
        coarse = bell.dobinski_sum(seq, 3, conv, Q(1, 10 ** 6), 60)
        fine = bell.dobinski_sum(seq, 3, conv, Q(1, 10 ** 12), 120)
        assert coarse.contains(fine.partial_sum)


def test_dobinski_validation():
    with pytest.raises(ValueError):
        bell.dobinski_sum(PsiSequence.classical(), 2, "sideways")
    with pytest.raises(ValueError):
        bell.dobinski_sum(PsiSequence.classical(), -1)
    with pytest.raises(ValueError):
        bell.dobinski_sum(PsiSequence.classical(), 1, tol=0)


def test_unbounded_tail_reported():
    # r_cap too small for the terms to start decreasing
    a = bell.dobinski_sum(PsiSequence.classical(), 10, bell.TIMES, TOL, 3)
    assert a.tail_bound is None and not a.converged
    assert a.to_dict()["tail_bound"] == "inf"


def test_cigl_poisson_route():
    q = Q(1, 2)
    for n in range(9):
        a = bell.cigl_dobinski_series(q, n, TOL)
        assert a.contains(umbral.cigl_dobinski_exact(q, n))
    assert bell.cigl_dobinski_series(q, 3, TOL).contains(Q(23, 8))


def test_egf_check():
    assert bell.bell_egf_check(12).verdict == "VERIFIED"
    s = bell.bell_egf_series(4)
    assert s[0] == 1 and s[4] == Q(5, 8)


def test_psi_egf_coefficient_check():
    assert bell.psi_egf_coefficient_check(PsiSequence.classical(), 8).verdict == "VERIFIED"
    v = bell.psi_egf_coefficient_check(PsiSequence.classical(), 2, bell.DIVIDES)
    assert v.verdict == "FAILED"
    assert v.counterexample.n == 0 and v.counterexample.rhs == 1
    assert abs(v.counterexample.lhs - E * E) < Q(1, 10 ** 9)
    seq = PsiSequence.q_gauss(Q(1, 2))
    ids = set()
    for conv in bell.CONVENTIONS:
        for q17 in (False, True):
            r = bell.psi_egf_coefficient_check(seq, 3, conv, q17_factor=q17)
            assert r.verdict in ("VERIFIED", "FAILED", "INCONCLUSIVE")
            ids.add(r.identity_id)
    assert len(ids) == 4


def test_decimal_rendering():
    assert bell.to_decimal(Q(1, 3), 4) == "0.3333"
    assert bell.to_decimal(Q(-5, 2), 0) == "-2"
    assert bell.to_decimal(Q(52), 3) == "52.000"
