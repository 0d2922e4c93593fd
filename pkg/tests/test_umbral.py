import random
from fractions import Fraction

import pytest

from psistirling import stirling, umbral
from psistirling.exactnum import Poly, newton_coefficients
from psistirling.harness import default_custom_sequence
from psistirling.oracles import bell_oracle
from psistirling.psi import PsiSequence

Q = Fraction


def test_psi_derivative_examples():
    assert umbral.psi_derivative(PsiSequence.classical())(Poly.monomial(3)) == Poly.monomial(2, 3)
    assert umbral.jackson_derivative(2)(Poly.monomial(3)) == Poly.monomial(2, 7)
    assert umbral.psi_derivative(PsiSequence.q_gauss(3))(Poly([5])) == Poly()


def test_dilation_and_shift():
    assert umbral.q_dilation(2)(Poly.monomial(2)) == Poly.monomial(2, 4)
    p = Poly([1, Q(2, 3), 5])
    assert umbral.q_dilation(1)(p) == p
    assert umbral.q_dilation(Q(1, 2))(Poly([0, 1, 0, 1])) == Poly([0, Q(1, 2), 0, Q(1, 8)])
    x = umbral.mult_by_x()
    assert x(Poly([1])) == Poly([0, 1])
    assert x(Poly.monomial(2)) == Poly.monomial(3)
    assert x(Poly()) == Poly()


def test_operator_algebra():
    x, d = umbral.mult_by_x(), umbral.jackson_derivative(2)
    p = Poly([1, 1, 1])
    assert (x @ d)(p) == x(d(p))
    assert (x + d)(p) == x(p) + d(p)
    assert (d ** 0)(p) == p
    assert (d ** 2)(p) == d(d(p))
    assert d.scaled(3)(p) == d(p) * 3
    with pytest.raises(ValueError):
        d ** -1


def _rand_poly(rng):
    return Poly(Q(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(rng.randint(0, 7)))


def test_linearity():
    rng = random.Random(2024)
    ops = [umbral.psi_derivative(PsiSequence.q_gauss(Q(3, 5))), umbral.q_dilation(Q(-2, 3)),
           umbral.mult_by_x(), umbral.identity_op(), umbral.mult_by_x() @ umbral.jackson_derivative(2)]
    for _ in range(100):
        a, b = Q(rng.randint(-9, 9), rng.randint(1, 5)), Q(rng.randint(-9, 9), rng.randint(1, 5))
        p, r = _rand_poly(rng), _rand_poly(rng)
        for op in ops:
            assert op(p * a + r * b) == op(p) * a + op(r) * b


def test_weyl_hand_case():
    x, d = umbral.mult_by_x(), umbral.jackson_derivative(2)
    assert ((x @ d) ** 2)(Poly.monomial(2)) == Poly.monomial(2, 9)
    v = umbral.verify_weyl_expansion(5, 0, 6)
    assert v.verdict == "VERIFIED"


@pytest.mark.parametrize("q", [Q(1), Q(2), Q(1, 2), Q(3, 5)])
def test_weyl_expansion(q):
    for n in range(9):
        assert umbral.verify_weyl_expansion(q, n, 8).verdict == "VERIFIED"


def test_weyl_arguments():
    with pytest.raises(ValueError):
        umbral.verify_weyl_expansion(2, 3, 2)


def test_q_leibnitz_examples():
    d2, dil2 = umbral.jackson_derivative(2), umbral.q_dilation(2)
    x = Poly.monomial(1)
    assert d2(x * x) == Poly.monomial(1, 3)
    assert d2(x) * x + dil2(x) * d2(x) == Poly.monomial(1, 3)
    q = Q(1, 2)
    d, dil = umbral.jackson_derivative(q), umbral.q_dilation(q)
    f, g = Poly.monomial(2), x
    assert d(f * g) == Poly.monomial(2, Q(7, 4))
    assert d(f) * g + dil(f) * d(g) == Poly.monomial(2, Q(7, 4))


@pytest.mark.parametrize("q", [Q(1), Q(2), Q(1, 2), Q(3, 5)])
def test_q_leibnitz_battery(q):
    assert umbral.q_leibnitz_check(q, 8).verdict == "VERIFIED"


def test_rota_functional():
    assert umbral.rota_functional([0, 0, 1]) == 1
    assert umbral.rota_functional([0, 1, 1]) == 2
    assert umbral.rota_functional([0, 1, 3, 1]) == 5
    for n in range(11):
        coords = newton_coefficients(Poly.monomial(n), list(range(n)))
        assert umbral.rota_functional(coords) == bell_oracle(n)


def test_exponential_polys_examples():
    ops = umbral.exponential_polys_by_operator(PsiSequence.classical(), 3)
    assert ops[2] == Poly([0, 1, 1])
    assert ops[3] == Poly([0, 1, 3, 1])
    assert umbral.exponential_polys_by_operator(PsiSequence.q_gauss(Q(2, 9)), 1)[1] == Poly([0, 1])


@pytest.mark.parametrize("seq", [PsiSequence.classical(), PsiSequence.q_gauss(2),
                                 PsiSequence.q_gauss(Q(1, 2)), default_custom_sequence()],
                         ids=lambda s: s.spec[:12])
def test_exponential_polys_routes(seq):
    assert umbral.exponential_polys_by_operator(seq, 10) == umbral.exponential_polys_by_rowsum(seq, 10)


def test_cigl_dobinski_exact():
    assert umbral.cigl_dobinski_exact(Q(3, 7), 0) == 1
    for q in (Q(2), Q(1, 2), Q(-3, 4)):
        assert umbral.cigl_dobinski_exact(q, 2) == 1 + q
    assert umbral.cigl_dobinski_exact(1, 4) == 15
    for q in (Q(1), Q(2), Q(1, 2)):
        sums = stirling.cigl2(q, 10).row_sums()
        assert [umbral.cigl_dobinski_exact(q, n) for n in range(11)] == sums
