"""Registry of claimed identities and the exact checks that adjudicate them.

Each identity has a cell evaluator ``(params, n, k) -> (lhs, rhs)`` where ``lhs``
is the claimed side and ``rhs`` the reference value. A suite enumerates cells
in ascending ``(n, k)`` order and the first mismatch is the counterexample.
:func:`reevaluate` replays a stored counterexample through the same evaluators.

Printed formulas with more than one plausible reading are registered once per
reading, with ``-readingA`` / ``-readingB`` suffixes.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Iterable, Sequence

from . import bell, stirling, umbral
from .exactnum import Poly, TruncatedSeries, as_rational, format_rational, parse_rational
from .oracles import bell_oracle, cycle_counts, stirling2_oracle
from .psi import PsiSequence
from .verdict import FAILED, INCONCLUSIVE, VERIFIED, Counterexample, IdentityVerdict, compare_cells

DEFAULT_Q_SAMPLES = (Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3, 5))
DEFAULT_TOL = Fraction(1, 10 ** 13)
DEFAULT_RCAP = 60
CYCLE_ORACLE_LIMIT = 8


# -- cached building blocks -----------------------------------------------------


@lru_cache(maxsize=256)
def _seq(spec: str) -> PsiSequence:
    return PsiSequence.from_spec(spec)


@lru_cache(maxsize=256)
def _tilde2(spec: str, N: int) -> stirling.Triangle:
    return stirling.tilde2_by_recurrence(_seq(spec), N)


@lru_cache(maxsize=256)
def _tilde2_basis(spec: str, N: int) -> stirling.Triangle:
    return stirling.tilde2_by_basis(_seq(spec), N)


@lru_cache(maxsize=256)
def _tilde1(spec: str, N: int) -> stirling.Triangle:
    return stirling.tilde1(_seq(spec), N)


@lru_cache(maxsize=256)
def _q_table(family: str, q: Fraction, N: int) -> stirling.Triangle:
    return {
        "carlitz2": stirling.carlitz2,
        "carlitz2-basis": stirling.carlitz2_by_basis,
        "inv2": stirling.inv2,
        "cigl2": stirling.cigl2,
        "cigl2-differences": stirling.cigl2_by_differences,
    }[family](q, N)


@lru_cache(maxsize=256)
def _expolys(spec: str, N: int, route: str) -> tuple[Poly, ...]:
    fn = umbral.exponential_polys_by_operator if route == "operator" else umbral.exponential_polys_by_rowsum
    return tuple(fn(_seq(spec), N))


def _q(params: dict) -> Fraction:
    return parse_rational(params["q"])


def _qseq(params: dict) -> PsiSequence:
    return _seq(f"q:{params['q']}")


def sample_point(i: int) -> Fraction:
    """Distinct rational evaluation points; ``k + 1`` of them pin down a degree-``k`` polynomial."""
    return Fraction(3 * i - 7, i + 3)


def default_custom_sequence(length: int = 14, seed: int = 44) -> PsiSequence:
    """Deterministic pseudorandom custom sequence with distinct positive values."""
    rng = random.Random(seed)
    vals: list[Fraction] = []
    while len(vals) < length:
        v = Fraction(rng.randint(1, 30), rng.randint(1, 7))
        if v not in vals:
            vals.append(v)
    return PsiSequence.custom(vals)


# -- cell evaluators --------------------------------------------------------------
# each returns (claimed, reference)


def _eq1(p, n, k):
    return bell.bell_egf_series(n)[n], Fraction(bell_oracle(n), factorial(n))


def _eq2(p, n, k):
    return umbral.rota_functional_poly(Poly.monomial(n)), Fraction(bell_oracle(n))


def _eq4(p, n, k):
    q = _q(p)
    return _q_table("carlitz2-basis", q, n)[n, k], _q_table("carlitz2", q, n)[n, k]


def _basis_identity(p, n, j):
    """Coefficient of ``x**j`` in ``sum_k {n,k}~ psi_k(x)`` against that of ``x**n``."""
    seq = _seq(p["psi"])
    tri = _tilde2(p["psi"], n)
    total = Poly()
    for k in range(n + 1):
        total = total + seq.falling_poly(k) * tri[n, k]
    return total.coeff(j), Fraction(1 if j == n else 0)


def _eq7(p, n, k):
    return _tilde2(p["psi"], n)[n, k], _tilde2_basis(p["psi"], n)[n, k]


@lru_cache(maxsize=256)
def _ogf_column(spec: str, k: int, order: int) -> TruncatedSeries:
    seq = _seq(spec)
    acc = TruncatedSeries([1], order)
    for i in range(1, k + 1):
        v = seq.value(i)
        acc = acc * TruncatedSeries([v ** j for j in range(order + 1)], order)
    return acc.shift_up(k)


def _eq8(p, n, k):
    return _ogf_column(p["psi"], k, n)[n], _tilde2(p["psi"], n)[n, k]


def _eq8_printed(p, n, k):
    """``G_k = x / (1 - k_psi) G_{k-1}`` read literally: a scalar denominator."""
    seq = _seq(p["psi"])
    c = Fraction(1)
    for i in range(1, k + 1):
        d = 1 - seq.value(i)
        if d == 0:
            raise ZeroDivisionError(f"1 - {i}_psi = 0")
        c /= d
    return (c if n == k else Fraction(0)), _tilde2(p["psi"], n)[n, k]


def _eq9(p, n, k):
    return stirling.tilde2_by_partial_fractions(_seq(p["psi"]), n, k), _tilde2(p["psi"], n)[n, k]


def _eq10(binomial: str):
    def ev(p, n, k):
        seq = _seq(p["psi"])
        total = Fraction(0)
        for r in range(1, k + 1):
            b = seq.binomial(k, r) if binomial == "psi" else Fraction(comb(k, r))
            total += (-1) ** (k - r) * b * seq.value(r) ** n
        return total / seq.factorial(k), _tilde2(p["psi"], max(n, k))[n, k]

    return ev


def _eq11(p, n, k):
    return stirling.tilde2_by_multisets(_seq(p["psi"]), n, k), _tilde2(p["psi"], n)[n, k]


def _eq12(p, n, k):
    return stirling.tilde2_by_compositions(_seq(p["psi"]), n, k), _tilde2(p["psi"], n)[n, k]


def _eq13(p, n, j):
    return _expolys(p["psi"], n, "operator")[n].coeff(j), _expolys(p["psi"], n, "rowsum")[n].coeff(j)


def _eq19(p, k, i):
    x = sample_point(i)
    seq = _seq(p["psi"])
    row = _tilde1(p["psi"], k).row(k)
    claimed = sum((c * x ** r for r, c in enumerate(row)), Fraction(0))
    direct = Fraction(1)
    for j in range(k):
        direct *= x - seq.value(j)
    return claimed, direct


def _eq20(p, k, l):
    N = max(k, l)
    first, second = _tilde1(p["psi"], N), _tilde2(p["psi"], N)
    return sum((first[k, r] * second[r, l] for r in range(N + 1)), Fraction(0)), Fraction(1 if k == l else 0)


def _eq21_oracle(p, n, k):
    return stirling.cycle1(_seq("classical"), n)[n, k], Fraction(cycle_counts(n)[k])


def _eq21_rising(p, k, i):
    x = sample_point(i)
    seq = _seq(p["psi"])
    row = stirling.cycle1(seq, k).row(k)
    claimed = sum((c * x ** r for r, c in enumerate(row)), Fraction(0))
    direct = Fraction(1)
    for j in range(k):
        direct *= x + seq.value(j)
    return claimed, direct


def _eq23_cell(p, n, m):
    q = _q(p)
    x, d = umbral.mult_by_x(), umbral.jackson_derivative(q)
    mono = Poly.monomial(m)
    lhs = ((x @ d) ** n)(mono)
    row = _q_table("carlitz2", q, n).row(n)
    rhs = Poly()
    for k in range(n + 1):
        rhs = rhs + ((x ** k) @ (d ** k))(mono) * row[k]
    return lhs.coeff(m), rhs.coeff(m)


def _leibnitz_cell(p, i, j):
    q = _q(p)
    d, dil = umbral.jackson_derivative(q), umbral.q_dilation(q)
    f, g = umbral.leibnitz_battery(int(p["deg"]))[i]
    return d(f * g).coeff(j), (d(f) * g + dil(f) * d(g)).coeff(j)


def _ex3_carlitz_q(p, n, k):
    q, seq = _q(p), _qseq(p)
    c = _q_table("carlitz2", q, n)
    m = n - 1
    claimed = sum((seq.binomial(m, l) * q ** l * c[l, k - 1] for l in range(m + 1)), Fraction(0))
    return claimed, c[n, k]


def _ex3_carlitz_tilde(shift: int):
    # exponent l - k + 1 with k the target column (shift 0) or the summand's column k - 1 (shift 1)
    def ev(p, n, k):
        q, seq = _q(p), _qseq(p)
        t = _tilde2(f"q:{p['q']}", n)
        m = n - 1
        claimed = sum((seq.binomial(m, l) * q ** (l - k + 1 + shift) * t[l, k - 1] for l in range(m + 1)),
                      Fraction(0))
        return claimed, t[n, k]

    return ev


def _ex4_bell_q(p, n, k):
    q, seq = _q(p), _qseq(p)
    sums = _q_table("carlitz2", q, n).row_sums()
    m = n - 1
    return sum((seq.binomial(m, l) * q ** l * sums[l] for l in range(m + 1)), Fraction(0)), sums[n]


def _ex4_bell_tilde(reading: str):
    # A: k is the summation index inside the barred sum, so q**(l-k+1) q**k collapses to q**(l+1)
    # B: k is the target index n+1, applied to the barred sum as printed
    def ev(p, n, k):
        q, seq = _q(p), _qseq(p)
        plain = _tilde2(f"q:{p['q']}", n).row_sums()
        m = n - 1
        if reading == "A":
            claimed = sum((seq.binomial(m, l) * q ** (l + 1) * plain[l] for l in range(m + 1)), Fraction(0))
        else:
            barred = bell.bell_tilde_barred(q, n).values
            claimed = sum((seq.binomial(m, l) * q ** (l - n + 1) * barred[l] for l in range(m + 1)), Fraction(0))
        return claimed, plain[n]

    return ev


def _ex5_inv(p, n, k):
    return _q_table("inv2", Fraction(1), n)[n, k], Fraction(stirling2_oracle(n, k))


def cigl_recurrence_value(q, n: int, k: int, reading: str) -> Fraction:
    """Printed Cigler recurrence for cell ``{n,k}`` (``n >= 1``, ``k >= 1``).

    reading ``A`` uses ``{m-l, k-1}`` as printed; ``B`` uses ``{l, k-1}``; both
    carry ``(m choose l)_q q**((m-l+1) choose 2)`` with ``m = n - 1``.
    """
    q = as_rational(q)
    seq = PsiSequence.q_gauss(q)
    c = _q_table("cigl2", q, n)
    m = n - 1
    total = Fraction(0)
    for l in range(m + 1):
        e = (m - l + 1) * (m - l) // 2
        arg = m - l if reading == "A" else l
        total += seq.binomial(m, l) * q ** e * c[arg, k - 1]
    return total


def _ex5_cigl_recurrence(reading: str):
    def ev(p, n, k):
        q = _q(p)
        return cigl_recurrence_value(q, n, k, reading), _q_table("cigl2", q, n)[n, k]

    return ev


def _ex5_cigl_umbral(p, n, k):
    q = _q(p)
    return umbral.cigl_dobinski_exact(q, n), sum(_q_table("cigl2", q, n).row(n), Fraction(0))


def _ex5_cigl_poisson(p, n, k):
    q = _q(p)
    approx = bell.cigl_dobinski_series(q, n, parse_rational(p["tol"]), int(p["r_cap"]))
    return approx.partial_sum, sum(_q_table("cigl2", q, n).row(n), Fraction(0))


def _eq16(p, n, k):
    approx = bell.dobinski_sum(_seq(p["psi"]), n, p["convention"], parse_rational(p["tol"]),
                               int(p["r_cap"]), p["q17_factor"] == "on")
    return approx.partial_sum, bell.bell_tilde(_seq(p["psi"]), n)[n]


def _degree_bound_cell(family: str):
    cross = {"carlitz2": "carlitz2-basis", "cigl2": "cigl2-differences"}[family]

    def ev(p, n, k):
        q = parse_rational(p["q_fail"])
        return _q_table(family, q, n)[n, k], _q_table(cross, q, n)[n, k]

    return ev


EVALUATORS: dict[str, Callable[[dict, int, int], tuple[Fraction, Fraction]]] = {
    "eq1-egf": _eq1,
    "eq2-rota": _eq2,
    "eq4-carlitz-basis": _eq4,
    "eq5-basis": _basis_identity,
    "eq6-basis": _basis_identity,
    "eq7-recurrence": _eq7,
    "eq8-ogf": _eq8,
    "eq8-ogf-printed": _eq8_printed,
    "eq9-partial-fractions": _eq9,
    "eq10-explicit-readingA": _eq10("psi"),
    "eq10-explicit-readingB": _eq10("ordinary"),
    "eq11-multisets": _eq11,
    "eq12-compositions": _eq12,
    "eq13-expoly": _eq13,
    "eq19-first-kind": _eq19,
    "eq20-orthogonality": _eq20,
    "eq21-cycle-oracle": _eq21_oracle,
    "eq21-rising": _eq21_rising,
    "eq23-weyl": _eq23_cell,
    "eq23-q-leibnitz": _leibnitz_cell,
    "ex3-carlitz-q": _ex3_carlitz_q,
    "ex3-carlitz-tilde-readingA": _ex3_carlitz_tilde(0),
    "ex3-carlitz-tilde-readingB": _ex3_carlitz_tilde(1),
    "ex4-bell-q": _ex4_bell_q,
    "ex4-bell-tilde-readingA": _ex4_bell_tilde("A"),
    "ex4-bell-tilde-readingB": _ex4_bell_tilde("B"),
    "ex5-inv-q1": _ex5_inv,
    "ex5-cigl-recurrence-readingA": _ex5_cigl_recurrence("A"),
    "ex5-cigl-recurrence-readingB": _ex5_cigl_recurrence("B"),
    "ex5-cigl-dobinski-umbral": _ex5_cigl_umbral,
    "ex5-cigl-dobinski-poisson": _ex5_cigl_poisson,
    "eq16-dobinski-times": _eq16,
    "eq16-dobinski-divides": _eq16,
    "eq16-dobinski-times-q17": _eq16,
    "eq16-dobinski-divides-q17": _eq16,
    "qpoly-carlitz2-degree-bound": _degree_bound_cell("carlitz2"),
    "qpoly-cigl2-degree-bound": _degree_bound_cell("cigl2"),
}

# identities whose printed form is ambiguous or suspect; their verdicts are findings, not expectations
ADJUDICATED = frozenset({
    "eq8-ogf-printed",
    "eq10-explicit-readingA",
    "eq10-explicit-readingB",
    "ex3-carlitz-q",
    "ex3-carlitz-tilde-readingA",
    "ex3-carlitz-tilde-readingB",
    "ex4-bell-q",
    "ex4-bell-tilde-readingA",
    "ex4-bell-tilde-readingB",
    "ex4-bell-tilde-printed",
    "ex5-cigl-recurrence-readingA",
    "ex5-cigl-recurrence-readingB",
    "eq16-dobinski-times",
    "eq16-dobinski-divides",
    "eq16-dobinski-times-q17",
    "eq16-dobinski-divides-q17",
})


def expected_verified(v: IdentityVerdict) -> bool:
    """Whether a verdict is expected to come out VERIFIED.

    Adjudicated identities are expected to hold only in their classical
    specialization (classical psi, or q = 1), where the claimed forms reduce to
    textbook identities. The printed weight_divides Dobinski convention and the
    literal OGF recurrence are excluded even there.
    """
    if v.identity_id not in ADJUDICATED:
        return True
    if v.identity_id in ("eq8-ogf-printed", "eq16-dobinski-divides", "eq16-dobinski-divides-q17"):
        return False
    return v.params.get("psi") in ("classical", "q:1") or v.params.get("q") == "1"


def reevaluate(v: IdentityVerdict) -> tuple[Fraction, Fraction]:
    """Recompute a stored counterexample's ``(lhs, rhs)`` through the public evaluators."""
    if v.counterexample is None:
        raise ValueError("verdict has no counterexample")
    ce = v.counterexample
    return EVALUATORS[v.identity_id](v.params, ce.n, ce.k)


# -- suites ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SuiteContext:
    max_n: int
    q_samples: tuple[Fraction, ...]
    custom: PsiSequence

    @property
    def psi_specs(self) -> list[str]:
        specs = ["classical"] + [f"q:{format_rational(q)}" for q in self.q_samples] + [self.custom.spec]
        seen: list[str] = []
        for s in specs:
            if s not in seen:
                seen.append(s)
        return seen

    @property
    def q_strings(self) -> list[str]:
        return [format_rational(q) for q in self.q_samples]


def _run_cells(identity_id: str, params: dict, cells: Iterable[tuple[int, int]], range_: int,
               q_samples: Sequence[Fraction] = ()) -> IdentityVerdict:
    ev = EVALUATORS[identity_id]

    def gen():
        for n, k in cells:
            lhs, rhs = ev(params, n, k)
            yield n, k, lhs, rhs

    try:
        return compare_cells(identity_id, gen(), range_=range_, params=params, q_samples=q_samples)
    except (ZeroDivisionError, ValueError, ArithmeticError) as exc:
        return IdentityVerdict(identity_id, INCONCLUSIVE, range_, {**params, "note": str(exc)}, tuple(q_samples))


def _triangle_cells(N: int, start: int = 0, k_start: int = 0):
    for n in range(start, N + 1):
        for k in range(k_start, n + 1):
            yield n, k


def _square_cells(N: int, start: int = 0):
    for n in range(start, N + 1):
        for k in range(start, N + 1):
            yield n, k


def _psi_params(spec: str) -> dict:
    return {"psi": spec, "symbolic-strength": "no"}


def _q_params(q: str) -> dict:
    return {"q": q, "symbolic-strength": "no"}


def _qs(spec: str) -> tuple[Fraction, ...]:
    return (parse_rational(spec[2:]),) if spec.startswith("q:") else ()


def suite_eq1(ctx: SuiteContext) -> list[IdentityVerdict]:
    N = max(ctx.max_n, 12)
    return [_run_cells("eq1-egf", {}, ((n, 0) for n in range(N + 1)), N)]


def suite_eq2(ctx: SuiteContext) -> list[IdentityVerdict]:
    return [_run_cells("eq2-rota", {}, ((n, 0) for n in range(ctx.max_n + 1)), ctx.max_n)]


def suite_eq4(ctx: SuiteContext) -> list[IdentityVerdict]:
    out = []
    for q in ctx.q_strings:
        if parse_rational(q) == 0:
            continue
        out.append(_run_cells("eq4-carlitz-basis", _q_params(q), _triangle_cells(ctx.max_n), ctx.max_n,
                              (parse_rational(q),)))
    return out


def suite_eq5(ctx: SuiteContext) -> list[IdentityVerdict]:
    return [_run_cells("eq5-basis", _psi_params(f"q:{q}"), _triangle_cells(ctx.max_n), ctx.max_n,
                       (parse_rational(q),)) for q in ctx.q_strings]


def _per_psi(identity_id: str, cells_fn, ctx: SuiteContext, specs: Sequence[str] | None = None):
    return [_run_cells(identity_id, _psi_params(s), cells_fn(), ctx.max_n, _qs(s))
            for s in (specs if specs is not None else ctx.psi_specs)]


def suite_eq6(ctx):
    return _per_psi("eq6-basis", lambda: _triangle_cells(ctx.max_n), ctx, ["classical", ctx.custom.spec])


def suite_eq7(ctx):
    return _per_psi("eq7-recurrence", lambda: _triangle_cells(ctx.max_n), ctx)


def suite_eq8(ctx):
    return (_per_psi("eq8-ogf", lambda: _triangle_cells(ctx.max_n), ctx)
            + _per_psi("eq8-ogf-printed", lambda: _triangle_cells(ctx.max_n, 1, 1), ctx))


def suite_eq9(ctx):
    return _per_psi("eq9-partial-fractions", lambda: _triangle_cells(ctx.max_n), ctx)


def suite_eq10(ctx):
    # r runs from 1 as printed, so only n, k >= 1 is meaningful
    cells = lambda: _square_cells(ctx.max_n, 1)  # noqa: E731
    return (_per_psi("eq10-explicit-readingA", cells, ctx) + _per_psi("eq10-explicit-readingB", cells, ctx))


def suite_eq11(ctx):
    return _per_psi("eq11-multisets", lambda: _triangle_cells(ctx.max_n), ctx)


def suite_eq12(ctx):
    return _per_psi("eq12-compositions", lambda: _triangle_cells(ctx.max_n), ctx)


def suite_eq13(ctx):
    return _per_psi("eq13-expoly", lambda: _triangle_cells(ctx.max_n), ctx)


def suite_eq16(ctx: SuiteContext) -> list[IdentityVerdict]:
    out = []
    specs = [s for s in ctx.psi_specs if not s.startswith("custom")]
    for s in specs:
        seq = _seq(s)
        for conv in bell.CONVENTIONS:
            for q17 in (False, True):
                if q17 and seq.kind != "q_gauss":
                    continue
                v = bell.psi_egf_coefficient_check(seq, ctx.max_n, conv, DEFAULT_TOL, DEFAULT_RCAP, q17)
                out.append(IdentityVerdict(v.identity_id, v.verdict, v.range,
                                           {**v.params, "symbolic-strength": "no"}, v.q_samples, v.counterexample))
    return out


def suite_eq19(ctx):
    return _per_psi("eq19-first-kind", lambda: ((k, i) for k in range(ctx.max_n + 1) for i in range(k + 1)), ctx)


def suite_eq20(ctx):
    return _per_psi("eq20-orthogonality", lambda: _square_cells(ctx.max_n), ctx)


def suite_eq21(ctx):
    N = min(ctx.max_n, CYCLE_ORACLE_LIMIT)
    out = [_run_cells("eq21-cycle-oracle", {"psi": "classical"}, _triangle_cells(N), N)]
    out += _per_psi("eq21-rising", lambda: ((k, i) for k in range(ctx.max_n + 1) for i in range(k + 1)), ctx)
    return out


def suite_eq23(ctx: SuiteContext) -> list[IdentityVerdict]:
    out = []
    for q in ctx.q_strings:
        for n in range(ctx.max_n + 1):
            out.append(_run_cells("eq23-weyl", {**_q_params(q), "n": n},
                                  ((n, m) for m in range(ctx.max_n + 1)), ctx.max_n, (parse_rational(q),)))
    for q in ctx.q_strings:
        deg = ctx.max_n
        pairs = umbral.leibnitz_battery(deg)
        cells = [(i, j) for i, (f, g) in enumerate(pairs) for j in range(max(f.degree + g.degree, 0) + 1)]
        out.append(_run_cells("eq23-q-leibnitz", {**_q_params(q), "deg": deg}, cells, deg, (parse_rational(q),)))
    return out


def _per_q(identity_id: str, cells_fn, ctx: SuiteContext, extra: dict | None = None):
    return [_run_cells(identity_id, {**_q_params(q), **(extra or {})}, cells_fn(), ctx.max_n, (parse_rational(q),))
            for q in ctx.q_strings]


def suite_ex3(ctx):
    cells = lambda: _triangle_cells(ctx.max_n, 1, 1)  # noqa: E731
    return (_per_q("ex3-carlitz-q", cells, ctx)
            + _per_q("ex3-carlitz-tilde-readingA", cells, ctx)
            + _per_q("ex3-carlitz-tilde-readingB", cells, ctx))


def suite_ex4(ctx):
    cells = lambda: ((n, 0) for n in range(1, ctx.max_n + 1))  # noqa: E731
    a = _per_q("ex4-bell-tilde-readingA", cells, ctx)
    b = _per_q("ex4-bell-tilde-readingB", cells, ctx)
    # the printed form counts as established only if some binding of k holds
    printed = []
    for q, va, vb in zip(ctx.q_strings, a, b):
        holding = [v.identity_id.rsplit("-", 1)[1] for v in (va, vb) if v.verdict == VERIFIED]
        params = _q_params(q)
        if holding:
            printed.append(IdentityVerdict("ex4-bell-tilde-printed", VERIFIED, ctx.max_n,
                                           {**params, "binding": holding[0]}, (parse_rational(q),)))
        else:
            printed.append(IdentityVerdict("ex4-bell-tilde-printed", INCONCLUSIVE, ctx.max_n,
                                           {**params, "note": "no binding of k holds"}, (parse_rational(q),)))
    return _per_q("ex4-bell-q", cells, ctx) + a + b + printed


def suite_ex5_inv(ctx):
    return [_run_cells("ex5-inv-q1", _q_params("1"), _triangle_cells(ctx.max_n), ctx.max_n, (Fraction(1),))]


def suite_ex5_cigl_recurrence(ctx):
    cells = lambda: _triangle_cells(ctx.max_n, 1, 1)  # noqa: E731
    return (_per_q("ex5-cigl-recurrence-readingA", cells, ctx)
            + _per_q("ex5-cigl-recurrence-readingB", cells, ctx))


def suite_ex5_cigl_dobinski(ctx: SuiteContext) -> list[IdentityVerdict]:
    out = _per_q("ex5-cigl-dobinski-umbral", lambda: ((n, 0) for n in range(ctx.max_n + 1)), ctx)
    for q in ctx.q_strings:
        qv = parse_rational(q)
        params = {**_q_params(q), "tol": format_rational(DEFAULT_TOL), "r_cap": 80}
        if qv <= 0:
            out.append(IdentityVerdict("ex5-cigl-dobinski-poisson", INCONCLUSIVE, ctx.max_n,
                                       {**params, "note": "Poisson route needs q > 0"}, (qv,)))
            continue
        out.append(_approx_verdict("ex5-cigl-dobinski-poisson", params, ctx.max_n, (qv,),
                                   lambda n: bell.cigl_dobinski_series(qv, n, DEFAULT_TOL, 80),
                                   lambda n: umbral.cigl_dobinski_exact(qv, n)))
    return out


def _approx_verdict(identity_id, params, N, qs, approx_fn, exact_fn) -> IdentityVerdict:
    for n in range(N + 1):
        a = approx_fn(n)
        exact = exact_fn(n)
        if a.tail_bound is None:
            return IdentityVerdict(identity_id, INCONCLUSIVE, N, {**params, "note": f"n={n}: no tail bound"}, qs)
        if abs(a.partial_sum - exact) > a.tail_bound + DEFAULT_TOL:
            return IdentityVerdict(identity_id, FAILED, N, params, qs, Counterexample(n, 0, a.partial_sum, exact))
        if not a.within(DEFAULT_TOL):
            return IdentityVerdict(identity_id, INCONCLUSIVE, N,
                                   {**params, "note": f"n={n}: tail bound above tol at r_cap"}, qs)
    return IdentityVerdict(identity_id, VERIFIED, N, params, qs)


def suite_degree_bound(ctx: SuiteContext) -> list[IdentityVerdict]:
    """Agreement of two routes at ``D + 1`` distinct q, ``D = n(n-1)/2``: a polynomial-identity proof."""
    N = ctx.max_n
    D = N * (N - 1) // 2
    qs = tuple(Fraction(j, 3) for j in range(1, D + 2))
    out = []
    for family, cross in (("carlitz2", "carlitz2-basis"), ("cigl2", "cigl2-differences")):
        ident = f"qpoly-{family}-degree-bound"
        params = {"family": family, "cross_route": cross, "degree_bound": D, "samples": len(qs),
                  "symbolic-strength": "yes"}
        verdict = IdentityVerdict(ident, VERIFIED, N, params, qs)
        for q in qs:
            a, b = _q_table(family, q, N), _q_table(cross, q, N)
            bad = next(((n, k) for n, k in _triangle_cells(N) if a[n, k] != b[n, k]), None)
            if bad:
                n, k = bad
                verdict = IdentityVerdict(ident, FAILED, N, {**params, "q_fail": format_rational(q)}, qs,
                                          Counterexample(n, k, a[n, k], b[n, k]))
                break
        out.append(verdict)
    return out


@dataclass(frozen=True)
class Suite:
    run: Callable[[SuiteContext], list[IdentityVerdict]]
    equations: tuple[int, ...]
    exercises: tuple[int, ...]
    summary: str


SUITES: dict[str, Suite] = {
    "eq1-egf": Suite(suite_eq1, (1,), (1,), "exp(e^x - 1) coefficients against enumerated B_n/n!"),
    "eq2-rota": Suite(suite_eq2, (2, 3), (1,), "L(x^n) = B_n with L(falling factorial) = 1"),
    "eq4-carlitz-basis": Suite(suite_eq4, (4, 22), (2, 13), "Carlitz expansion of x_q^n vs the recurrence"),
    "eq5-basis": Suite(suite_eq5, (5,), (2,), "x^n = sum {n,k}~_q chi_k(x) as polynomials"),
    "eq6-basis": Suite(suite_eq6, (6,), (), "x^n = sum {n,k}~_psi psi_k(x) as polynomials"),
    "eq7-recurrence": Suite(suite_eq7, (7,), (6,), "triangular recurrence vs basis conversion"),
    "eq8-ogf": Suite(suite_eq8, (8,), (6,), "column OGFs; printed scalar-denominator reading too"),
    "eq9-partial-fractions": Suite(suite_eq9, (9,), (6,), "partial fractions of x^k / prod(1 - i x)"),
    "eq10-explicit": Suite(suite_eq10, (10,), (6,), "explicit alternating sum, two binomial readings"),
    "eq11-multisets": Suite(suite_eq11, (11,), (7,), "sum over nondecreasing index tuples"),
    "eq12-compositions": Suite(suite_eq12, (12,), (7,), "sum over weak compositions"),
    "eq13-expoly": Suite(suite_eq13, (13,), (8,), "A_n = [y(1 + d_psi)] A_{n-1} vs row sums"),
    "eq16-dobinski": Suite(suite_eq16, (14, 15, 16, 17, 18), (1, 9, 10),
                           "Dobinski-type sums, both weight conventions, q-factor on/off"),
    "eq19-first-kind": Suite(suite_eq19, (19,), (11,), "first-kind coefficients vs direct product"),
    "eq20-orthogonality": Suite(suite_eq20, (20,), (11,), "first kind times second kind = identity"),
    "eq21-cycle": Suite(suite_eq21, (21,), (12,), "rising-product numbers; cycle counts classically"),
    "eq23-weyl": Suite(suite_eq23, (23,), (13,), "(x d_q)^n expansion and the q-Leibniz rule"),
    "ex3-carlitz": Suite(suite_ex3, (), (3,), "q-binomial convolutions for both q-Stirling families"),
    "ex4-bell": Suite(suite_ex4, (), (4,), "q-Bell convolutions"),
    "ex5-inv-q1": Suite(suite_ex5_inv, (), (5,), "inversion q-Stirling numbers at q = 1"),
    "ex5-cigl-recurrence": Suite(suite_ex5_cigl_recurrence, (), (5,), "printed Cigler recurrence, two readings"),
    "ex5-cigl-dobinski": Suite(suite_ex5_cigl_dobinski, (), (5,), "Cigler q-Dobinski: umbral and Poisson routes"),
    "qpoly-degree-bound": Suite(suite_degree_bound, (22,), (5, 13), "degree-bound q sampling for carlitz2, cigl2"),
}

OUT_OF_SCOPE = {
    "poisson-measure": "probabilistic interpretation realized only as truncated series evaluation",
    "cobweb-remarks": "closing remarks on cobweb posets, F-nomial coefficients, Whitney numbers",
}


def registry_coverage() -> dict[str, list[str]]:
    """Map ``eq<i>`` and ``ex<j>`` labels to the suite ids that check them."""
    cover: dict[str, list[str]] = {}
    for sid, s in SUITES.items():
        for e in s.equations:
            cover.setdefault(f"eq{e}", []).append(sid)
        for x in s.exercises:
            cover.setdefault(f"ex{x}", []).append(sid)
    return cover


def run_suite(suite: str, max_n: int = 8, q_samples: Sequence = DEFAULT_Q_SAMPLES,
              custom: PsiSequence | None = None) -> list[IdentityVerdict]:
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; registered: {', '.join(SUITES)}")
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    qs = tuple(as_rational(q) for q in q_samples)
    ctx = SuiteContext(max_n, qs, custom or default_custom_sequence(max(max_n, 12) + 2))
    return SUITES[suite].run(ctx)


def run_all(max_n: int = 8, q_samples: Sequence = DEFAULT_Q_SAMPLES) -> list[IdentityVerdict]:
    out = []
    for sid in SUITES:
        out.extend(run_suite(sid, max_n, q_samples))
    return out


def export_ledger(verdicts: Sequence[IdentityVerdict]) -> str:
    """Stable JSON: one record per verdict, in input order, keys in schema order."""
    return json.dumps([v.to_dict() for v in verdicts], indent=2) + "\n"


def load_ledger(text: str) -> list[IdentityVerdict]:
    out = []
    for rec in json.loads(text):
        ce = rec.get("counterexample")
        out.append(IdentityVerdict(
            rec["identity_id"], rec["verdict"], rec["range"], rec["params"],
            tuple(parse_rational(q) for q in rec["q_samples"]),
            Counterexample(ce["n"], ce["k"], parse_rational(ce["lhs"]), parse_rational(ce["rhs"])) if ce else None,
        ))
    return out


def summary_table(verdicts: Sequence[IdentityVerdict]) -> str:
    rows = [("identity", "params", "verdict", "counterexample")]
    for v in verdicts:
        p = v.params.get("psi") or (f"q:{v.params['q']}" if "q" in v.params else "")
        if "convention" in v.params:
            p += f" {v.params['convention']} q17={v.params['q17_factor']}"
        if "n" in v.params and v.identity_id == "eq23-weyl":
            p += f" n={v.params['n']}"
        ce = ""
        if v.counterexample is not None:
            c = v.counterexample
            lhs, rhs = format_rational(c.lhs), format_rational(c.rhs)
            if len(lhs) > 24:
                lhs = bell.to_decimal(c.lhs, 12)
            ce = f"n={c.n} k={c.k} lhs={lhs} rhs={rhs}"
        rows.append((v.identity_id, p, v.verdict, ce))
    widths = [max(len(r[i]) for r in rows) for i in range(3)]
    lines = []
    for r in rows:
        lines.append("  ".join(r[i].ljust(widths[i]) for i in range(3)) + ("  " + r[3] if r[3] else ""))
    return "\n".join(lines) + "\n"
