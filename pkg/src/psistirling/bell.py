"""Extended Bell numbers and truncated Dobinski-type series.

Series are summed in exact rational arithmetic. An :class:`ApproxValue` holds
the partial sum and a bound on everything that was left out, so the true value
lies in ``[partial_sum - tail_bound, partial_sum + tail_bound]``. A
``tail_bound`` of ``None`` means no bound could be established.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Context, Decimal, localcontext
from fractions import Fraction

from .exactnum import RationalLike, TruncatedSeries, as_rational, format_rational, series_compose, series_exp
from .oracles import bell_oracle
from .psi import PsiSequence
from .stirling import carlitz2, cigl2, cigler_product, tilde2_by_recurrence
from .verdict import FAILED, INCONCLUSIVE, VERIFIED, Counterexample, IdentityVerdict

TIMES = "weight_times"
DIVIDES = "weight_divides"
CONVENTIONS = (TIMES, DIVIDES)
EPSILON_TERM_CAP = 5000


class ConvergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class BellSequence:
    family: str
    params: str
    values: tuple[Fraction, ...]

    def __getitem__(self, n: int) -> Fraction:
        return self.values[n]

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ApproxValue:
    partial_sum: Fraction
    tail_bound: Fraction | None
    terms_used: int

    @property
    def converged(self) -> bool:
        """A finite tail bound exists (it may still exceed the requested tolerance)."""
        return self.tail_bound is not None

    def within(self, tol: RationalLike) -> bool:
        return self.tail_bound is not None and self.tail_bound <= as_rational(tol)

    def contains(self, x: RationalLike) -> bool:
        if self.tail_bound is None:
            return True
        return abs(as_rational(x) - self.partial_sum) <= self.tail_bound

    def to_dict(self, digits: int = 10) -> dict:
        return {
            "partial_sum": format_rational(self.partial_sum),
            "tail_bound": "inf" if self.tail_bound is None else format_rational(self.tail_bound),
            "terms_used": self.terms_used,
            "decimal": to_decimal(self.partial_sum, digits),
        }


def to_decimal(x: Fraction, digits: int = 10) -> str:
    """Fixed-point rendering with ``digits`` places, rounded half-even."""
    if digits < 0:
        raise ValueError("digits must be nonnegative")
    x = Fraction(x)
    intpart = abs(x.numerator) // x.denominator
    prec = len(str(intpart)) + digits + 10
    with localcontext(Context(prec=prec)):
        d = Decimal(x.numerator) / Decimal(x.denominator)
        return str(d.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN))


# -- exact Bell sequences ------------------------------------------------------


def bell_tilde(seq: PsiSequence, N: int) -> BellSequence:
    """Row sums of the psi-tilde second-kind triangle."""
    return BellSequence("tilde", seq.spec, tuple(tilde2_by_recurrence(seq, N).row_sums()))


def bell_tilde_barred(q: RationalLike, N: int) -> BellSequence:
    """``sum_k q**k {l,k}~_q`` (the weighted row sum appearing in the q-Bell convolution)."""
    q = as_rational(q)
    tri = tilde2_by_recurrence(PsiSequence.q_gauss(q), N)
    vals = tuple(sum((q ** k * v for k, v in enumerate(tri.row(n))), Fraction(0)) for n in range(N + 1))
    return BellSequence("tilde_barred", f"q:{format_rational(q)}", vals)


def bell_carlitz(q: RationalLike, N: int) -> BellSequence:
    """Row sums of the Carlitz triangle."""
    q = as_rational(q)
    return BellSequence("carlitz_q", f"q:{format_rational(q)}", tuple(carlitz2(q, N).row_sums()))


def bell_carlitz_by_recurrence(q: RationalLike, N: int) -> BellSequence:
    """``B(n+1) = sum_l (n choose l)_q q**l B(l)`` from ``B(0) = 1``."""
    q = as_rational(q)
    seq = PsiSequence.q_gauss(q)
    vals = [Fraction(1)]
    for n in range(N):
        vals.append(sum((seq.binomial(n, l) * q ** l * vals[l] for l in range(n + 1)), Fraction(0)))
    return BellSequence("carlitz_q_recurrence", f"q:{format_rational(q)}", tuple(vals))


def bell_cigl(q: RationalLike, N: int) -> BellSequence:
    q = as_rational(q)
    return BellSequence("cigl", f"q:{format_rational(q)}", tuple(cigl2(q, N).row_sums()))


def bell_classical(N: int) -> BellSequence:
    return bell_tilde(PsiSequence.classical(), N)


# -- epsilon weights and Dobinski sums ------------------------------------------


def _grid_digits(tol: Fraction) -> int:
    d = 0
    while Fraction(1, 10 ** d) * 100 > tol:
        d += 1
    return d


def _snap(value: Fraction, bound: Fraction | None, tol: Fraction) -> tuple[Fraction, Fraction | None]:
    """Round to a decimal grid ~100x finer than ``tol``, widening the bound to cover it.

    Keeps partial sums printable; exact series denominators grow without limit.
    """
    scale = 10 ** _grid_digits(tol)
    snapped = Fraction(round(value * scale), scale)
    if bound is None:
        return snapped, None
    widened = bound + abs(value - snapped)
    return snapped, Fraction(-((-widened.numerator * scale) // widened.denominator), scale)


def _q17_factor(seq: PsiSequence, r: int) -> Fraction:
    q = seq.q_parameter
    if q is None:
        raise ValueError("the q**-(r choose 2) factor needs a Gauss or classical sequence")
    if q == 0 and r >= 2:
        raise ZeroDivisionError("q**-(r choose 2) undefined at q = 0")
    return Fraction(1) / q ** (r * (r - 1) // 2) if r >= 2 else Fraction(1)


def epsilon_weight(seq: PsiSequence, r: int, tol: RationalLike, q17_factor: bool = False) -> ApproxValue:
    """``sum_{k >= r} (-1)**(k-r) / (k-r)_psi!``, optionally times ``q**-(r choose 2)``.

    Summation stops once the next term is smaller than ``tol``; the alternating
    series bound then gives ``tail_bound = |next term|``. That bound needs
    nonincreasing magnitudes, which is checked over the window summed.
    """
    tol = as_rational(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    total = Fraction(1)
    prev_mag = Fraction(1)
    j = 1
    while True:
        if j > EPSILON_TERM_CAP:
            raise ConvergenceError(f"epsilon did not converge within {EPSILON_TERM_CAP} terms")
        f = seq.factorial(j)
        if f <= 0:
            raise ConvergenceError(f"alternating bound needs positive psi-factorials; {j}_psi! = {f}")
        mag = 1 / f
        if mag > prev_mag:
            raise ConvergenceError(f"epsilon terms not decreasing at j={j} for {seq.spec}")
        if mag < tol:
            break
        total += mag if j % 2 == 0 else -mag
        prev_mag = mag
        j += 1
    partial, bound = _snap(total, mag, tol)
    if q17_factor:
        f = _q17_factor(seq, r)
        partial, bound = partial * f, bound * abs(f)
    return ApproxValue(partial, bound, j)


def _outer_series(magnitude, weight, tol: Fraction, r_cap: int) -> ApproxValue:
    """Sum ``weight(r) * magnitude(r)`` for ``r = 0, 1, ...``.

    ``weight(r, budget)`` returns ``(w, err)`` with ``|w_true - w| <= err`` and
    ``err * |magnitude(r)| <= budget``. The outer tail after index R is bounded
    by ``U_R * rho / (1 - rho)`` with ``U_r = (|w| + err) |magnitude(r)|`` and
    ``rho = U_R / U_{R-1}``; this assumes the term ratios keep decreasing, which
    holds for ``r**n / r!``-type terms and is the heuristic stopping rule.
    """
    per_term = tol / (4 * (r_cap + 1))
    total = Fraction(0)
    inner_err = Fraction(0)
    prev_upper = None
    tail = None
    for r in range(r_cap + 1):
        a = magnitude(r)
        if a == 0:
            w, err = Fraction(0), Fraction(0)
        else:
            w, err = weight(r, per_term / abs(a))
        total += w * a
        inner_err += err * abs(a)
        upper = (abs(w) + err) * abs(a) if a != 0 else Fraction(0)
        tail = None
        if prev_upper and upper < prev_upper:
            rho = upper / prev_upper
            tail = upper * rho / (1 - rho)
            if upper < tol and tail <= tol / 2:
                return ApproxValue(*_snap(total, inner_err + tail, tol), r + 1)
        prev_upper = upper
    # cap reached: a bound exists only if the terms were still decreasing
    return ApproxValue(*_snap(total, None if tail is None else inner_err + tail, tol), r_cap + 1)


def _epsilon_to_budget(seq: PsiSequence, r: int, budget: Fraction, q17: bool) -> tuple[Fraction, Fraction]:
    e = epsilon_weight(seq, r, budget, q17)
    return e.partial_sum, e.tail_bound


def dobinski_sum(seq: PsiSequence, n: int, convention: str = TIMES, tol: RationalLike = Fraction(1, 10 ** 13),
                 r_cap: int = 60, q17_factor: bool = False) -> ApproxValue:
    """``sum_r w_r r_psi**n / r_psi!`` with ``w_r = eps(psi, r)`` or ``1 / eps(psi, r)``."""
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    if n < 0:
        raise ValueError("n must be nonnegative")
    tol = as_rational(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if seq.limit is not None:
        r_cap = min(r_cap, seq.limit)

    def magnitude(r: int) -> Fraction:
        return seq.value(r) ** n / seq.factorial(r)

    def weight(r: int, budget: Fraction) -> tuple[Fraction, Fraction]:
        if convention == TIMES:
            return _epsilon_to_budget(seq, r, budget, q17_factor)
        # |1/e - 1/e_hat| <= b / (|e_hat| (|e_hat| - b)); tighten until within budget
        inner = min(budget, Fraction(1, 100))
        for _ in range(60):
            e, b = _epsilon_to_budget(seq, r, inner, q17_factor)
            if abs(e) > 2 * b:
                err = b / (abs(e) * (abs(e) - b))
                if err <= budget:
                    return 1 / e, err
            inner /= 1000
        raise ConvergenceError(f"1/epsilon at r={r} could not be bounded")

    return _outer_series(magnitude, weight, tol, r_cap)


def cigl_dobinski_series(q: RationalLike, n: int, tol: RationalLike = Fraction(1, 10 ** 13),
                         r_cap: int = 80) -> ApproxValue:
    """Poisson-mean route: ``e**-1 sum_r P(r) / r!`` with ``P`` the Cigler product."""
    q = as_rational(q)
    tol = as_rational(tol)
    p = cigler_product(q, n)
    classical = PsiSequence.classical()
    fact = [Fraction(1)]

    def magnitude(r: int) -> Fraction:
        while len(fact) <= r:
            fact.append(fact[-1] * len(fact))
        return p(r) / fact[r]

    def weight(r: int, budget: Fraction) -> tuple[Fraction, Fraction]:
        return _epsilon_to_budget(classical, r, budget, False)

    return _outer_series(magnitude, weight, tol, r_cap)


# -- generating-function checks --------------------------------------------------


def bell_egf_series(N: int) -> TruncatedSeries:
    """``exp(e**x - 1)`` through ``x**N``."""
    shifted = TruncatedSeries.exp_x(N) - TruncatedSeries([1], N)
    return series_exp(shifted)


def bell_egf_check(N: int) -> IdentityVerdict:
    """Coefficients of ``exp(e**x - 1)`` against enumerated ``B_n / n!``."""
    egf = bell_egf_series(N)
    via_compose = series_compose(series_exp(TruncatedSeries([0, 1], N)), TruncatedSeries.exp_x(N) - TruncatedSeries([1], N))
    fact = 1
    for n in range(N + 1):
        if n:
            fact *= n
        target = Fraction(bell_oracle(n), fact)
        for got in (egf[n], via_compose[n]):
            if got != target:
                return IdentityVerdict("eq1-egf", FAILED, N, {}, (), Counterexample(n, 0, got, target))
    return IdentityVerdict("eq1-egf", VERIFIED, N, {})


def psi_egf_coefficient_check(seq: PsiSequence, N: int, convention: str = TIMES,
                              tol: RationalLike = Fraction(1, 10 ** 13), r_cap: int = 60,
                              q17_factor: bool = False, identity_id: str | None = None) -> IdentityVerdict:
    """Compare the Dobinski-type sum with the exact psi-Bell number for each n <= N."""
    tol = as_rational(tol)
    exact = bell_tilde(seq, N)
    params = {"psi": seq.spec, "convention": convention, "q17_factor": "on" if q17_factor else "off",
              "tol": format_rational(tol), "r_cap": r_cap}
    ident = identity_id or f"eq16-dobinski-{'times' if convention == TIMES else 'divides'}" + ("-q17" if q17_factor else "")
    qs = (seq.q_parameter,) if seq.kind == "q_gauss" else ()
    for n in range(N + 1):
        try:
            approx = dobinski_sum(seq, n, convention, tol, r_cap, q17_factor)
        except ConvergenceError as exc:
            return IdentityVerdict(ident, INCONCLUSIVE, N, {**params, "note": f"n={n}: {exc}"}, qs)
        if approx.tail_bound is None:
            return IdentityVerdict(ident, INCONCLUSIVE, N,
                                   {**params, "note": f"n={n}: outer series not decreasing within r_cap",
                                    "partial_sum": format_rational(approx.partial_sum)}, qs)
        if approx.tail_bound > tol and not abs(approx.partial_sum - exact[n]) > approx.tail_bound + tol:
            return IdentityVerdict(ident, INCONCLUSIVE, N,
                                   {**params, "note": f"n={n}: tail bound above tol at r_cap",
                                    "tail_bound": format_rational(approx.tail_bound)}, qs)
        if abs(approx.partial_sum - exact[n]) > approx.tail_bound + tol:
            return IdentityVerdict(ident, FAILED, N,
                                   {**params, "tail_bound": format_rational(approx.tail_bound),
                                    "decimal": to_decimal(approx.partial_sum, 12)}, qs,
                                   Counterexample(n, 0, approx.partial_sum, exact[n]))
    return IdentityVerdict(ident, VERIFIED, N, params, qs)
