"""Linear operators on polynomials and the identities built from them."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .exactnum import Poly, RationalLike, as_rational, newton_coefficients
from .psi import PsiSequence
from .stirling import carlitz2, cigler_product, tilde2_by_recurrence
from .verdict import compare_cells


@dataclass(frozen=True)
class PolyOperator:
    action: Callable[[Poly], Poly]
    descriptor: str

    def __call__(self, p: Poly) -> Poly:
        return self.action(p)

    def __matmul__(self, other: "PolyOperator") -> "PolyOperator":
        """``(a @ b)(p) == a(b(p))``."""
        a, b = self.action, other.action
        return PolyOperator(lambda p: a(b(p)), f"({self.descriptor})({other.descriptor})")

    def __add__(self, other: "PolyOperator") -> "PolyOperator":
        a, b = self.action, other.action
        return PolyOperator(lambda p: a(p) + b(p), f"({self.descriptor} + {other.descriptor})")

    def scaled(self, c: RationalLike) -> "PolyOperator":
        c = as_rational(c)
        a = self.action
        return PolyOperator(lambda p: a(p) * c, f"{c}*{self.descriptor}")

    def __pow__(self, n: int) -> "PolyOperator":
        if n < 0:
            raise ValueError("negative operator power")
        a = self.action

        def run(p: Poly) -> Poly:
            for _ in range(n):
                p = a(p)
            return p

        return PolyOperator(run, f"({self.descriptor})^{n}")


def identity_op() -> PolyOperator:
    return PolyOperator(lambda p: p, "1")


def psi_derivative(seq: PsiSequence) -> PolyOperator:
    """``x**n -> n_psi x**(n-1)``."""

    def act(p: Poly) -> Poly:
        return Poly(seq.value(n) * c for n, c in enumerate(p.coeffs) if n >= 1)

    return PolyOperator(act, f"d[{seq.spec}]")


def jackson_derivative(q: RationalLike) -> PolyOperator:
    return psi_derivative(PsiSequence.q_gauss(q))


def q_dilation(q: RationalLike) -> PolyOperator:
    """``f(x) -> f(q x)``."""
    q = as_rational(q)
    return PolyOperator(lambda p: Poly(c * q ** n for n, c in enumerate(p.coeffs)), f"D[{q}]")


def mult_by_x() -> PolyOperator:
    return PolyOperator(lambda p: p.shift_up(1), "x")


def verify_weyl_expansion(q: RationalLike, n: int, m_max: int):
    """``(x d_q)**n = sum_k {n,k}_q x**k d_q**k`` applied to ``x**m``, ``m <= m_max``."""
    if n < 0 or m_max < n:
        raise ValueError("need n >= 0 and m_max >= n")
    q = as_rational(q)
    x, d = mult_by_x(), jackson_derivative(q)
    lhs_op = (x @ d) ** n
    row = carlitz2(q, n).row(n)
    terms = [((x ** k) @ (d ** k), row[k]) for k in range(n + 1)]

    def cells():
        for m in range(m_max + 1):
            mono = Poly.monomial(m)
            lhs = lhs_op(mono)
            rhs = Poly()
            for op, c in terms:
                rhs = rhs + op(mono) * c
            j = next((i for i in range(max(lhs.degree, rhs.degree, m) + 1)
                      if lhs.coeff(i) != rhs.coeff(i)), m)
            yield n, m, lhs.coeff(j), rhs.coeff(j)

    return compare_cells("eq23-weyl", cells(), range_=m_max,
                         params={"q": str(q), "n": n}, q_samples=(q,))


def leibnitz_battery(deg: int, count: int = 24, seed: int = 1887) -> list[tuple[Poly, Poly]]:
    """Deterministic pseudorandom polynomial pairs of degree at most ``deg``."""
    rng = random.Random(seed * 1000 + deg)

    def rand_poly() -> Poly:
        d = rng.randint(0, deg)
        return Poly(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(d + 1))

    pairs = [(Poly.monomial(1), Poly.monomial(1))]
    pairs += [(rand_poly(), rand_poly()) for _ in range(count)]
    return pairs


def q_leibnitz_check(q: RationalLike, deg: int):
    """``d_q(f g) = d_q(f) g + f(q x) d_q(g)`` on the pseudorandom battery."""
    if deg < 0:
        raise ValueError("deg must be nonnegative")
    q = as_rational(q)
    d, dil = jackson_derivative(q), q_dilation(q)

    def cells():
        for i, (f, g) in enumerate(leibnitz_battery(deg)):
            lhs = d(f * g)
            rhs = d(f) * g + dil(f) * d(g)
            top = max(lhs.degree, rhs.degree, 0)
            for j in range(top + 1):
                yield i, j, lhs.coeff(j), rhs.coeff(j)

    return compare_cells("eq23-q-leibnitz", cells(), range_=deg, params={"q": str(q)}, q_samples=(q,))


def rota_functional(coords: Sequence[RationalLike]) -> Fraction:
    """``L`` with ``L(x (x-1) ... (x-n+1)) = 1``, given falling-factorial coordinates."""
    return sum((as_rational(c) for c in coords), Fraction(0))


def rota_functional_poly(p: Poly) -> Fraction:
    """``L(p)`` for a polynomial given in the monomial basis."""
    return rota_functional(newton_coefficients(p, list(range(max(p.degree, 0)))))


def exponential_polys_by_operator(seq: PsiSequence, N: int) -> list[Poly]:
    """``A_n = y (1 + d_psi) A_{n-1}``, ``A_0 = 1``."""
    step = mult_by_x() @ (identity_op() + psi_derivative(seq))
    out = [Poly([1])]
    for _ in range(N):
        out.append(step(out[-1]))
    return out


def exponential_polys_by_rowsum(seq: PsiSequence, N: int) -> list[Poly]:
    """``A_n(y) = sum_k {n,k}~ y**k``."""
    tri = tilde2_by_recurrence(seq, N)
    return [Poly(tri.row(n)) for n in range(N + 1)]


def cigl_dobinski_exact(q: RationalLike, n: int) -> Fraction:
    """``L(X (X + q - 1) ... (X + q**(n-1) - 1))``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return rota_functional_poly(cigler_product(q, n))

