"""Exact Stirling-like triangles.

Second kind
    ``tilde2``   psi-Stirling numbers (Comtet numbers at nodes ``i_psi``), four routes
    ``carlitz2`` Carlitz q-Stirling numbers
    ``inv2``     inversion q-Stirling numbers
    ``cigl2``    Cigler q-Stirling numbers

First kind
    ``tilde1``   signed coefficients of ``x (x - 1_psi) ... (x - (k-1)_psi)``
    ``cycle1``   coefficients of ``x (x + 1_psi) ... (x + (k-1)_psi)``
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Iterator, Sequence

from .exactnum import Poly, RationalLike, as_rational, format_rational, newton_coefficients, parse_rational, poly_root_product
from .psi import PsiSequence
from .verdict import compare_cells

FAMILIES = ("tilde2", "carlitz2", "inv2", "cigl2", "tilde1", "cycle1")
COMPOSITION_LIMIT = 30


@dataclass(frozen=True)
class Triangle:
    """Cells ``(n, k)`` for ``0 <= k <= n <= max_n``; reads outside that range give 0."""

    family: str
    params: str
    rows: tuple[tuple[Fraction, ...], ...]

    @property
    def max_n(self) -> int:
        return len(self.rows) - 1

    def __getitem__(self, nk: tuple[int, int]) -> Fraction:
        n, k = nk
        if 0 <= n < len(self.rows) and 0 <= k <= n:
            return self.rows[n][k]
        return Fraction(0)

    def row(self, n: int) -> tuple[Fraction, ...]:
        return self.rows[n]

    def row_sums(self) -> list[Fraction]:
        return [sum(r, Fraction(0)) for r in self.rows]

    def cells(self) -> Iterator[tuple[int, int, Fraction]]:
        for n, r in enumerate(self.rows):
            for k, v in enumerate(r):
                yield n, k, v

    def same_cells(self, other: "Triangle") -> bool:
        return self.rows == other.rows

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "k", "value"])
        for n, k, v in self.cells():
            w.writerow([n, k, format_rational(v)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, family: str, params: str) -> "Triangle":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        if header != ["n", "k", "value"]:
            raise ValueError(f"unexpected CSV header {header}")
        rows: list[list[Fraction]] = []
        for n_s, k_s, v_s in reader:
            n, k = int(n_s), int(k_s)
            while len(rows) <= n:
                rows.append([])
            if k != len(rows[n]):
                raise ValueError(f"cells out of order at ({n},{k})")
            rows[n].append(parse_rational(v_s))
        return cls(family, params, tuple(tuple(r) for r in rows))

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "params": self.params,
            "rows": [[format_rational(v) for v in r] for r in self.rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Triangle":
        d = json.loads(text)
        rows = tuple(tuple(parse_rational(v) for v in r) for r in d["rows"])
        return cls(d["family"], d["params"], rows)

    def to_pretty(self) -> str:
        return "\n".join(f"{n}: " + " ".join(format_rational(v) for v in r) for n, r in enumerate(self.rows))


def _freeze(family: str, params: str, rows: Sequence[Sequence[Fraction]]) -> Triangle:
    return Triangle(family, params, tuple(tuple(r) for r in rows))


def _q_params(q: Fraction) -> str:
    return f"q:{format_rational(q)}"


def _check_n(N: int) -> None:
    if N < 0:
        raise ValueError("N must be nonnegative")


# -- psi-tilde second kind ---------------------------------------------------


def tilde2_by_recurrence(seq: PsiSequence, N: int) -> Triangle:
    """``{n+1,k} = {n,k-1} + k_psi {n,k}`` from ``{0,0} = 1``."""
    _check_n(N)
    rows = [[Fraction(1)]]
    for n in range(N):
        prev = rows[-1]
        row = [Fraction(0)] * (n + 2)
        for k in range(1, n + 2):
            left = prev[k - 1]
            right = prev[k] * seq.value(k) if k <= n else 0
            row[k] = left + right
        rows.append(row)
    return _freeze("tilde2", seq.spec, rows)


def tilde2_by_basis(seq: PsiSequence, N: int) -> Triangle:
    """Row n is ``x**n`` written in the basis ``psi_k(x)``."""
    _check_n(N)
    nodes = seq.nodes(N)
    rows = []
    for n in range(N + 1):
        rows.append(newton_coefficients(Poly.monomial(n), nodes[:n]))
    return _freeze("tilde2", seq.spec, rows)


def partial_fraction_weights(seq: PsiSequence, k: int) -> list[Fraction]:
    """``c_r = prod_{i != r} r_psi / (r_psi - i_psi)`` for ``r = 1..k``."""
    vals = [seq.value(i) for i in range(1, k + 1)]
    if len(set(vals)) != len(vals):
        raise ValueError("partial fractions require distinct nodes")
    out = []
    for r, vr in enumerate(vals):
        c = Fraction(1)
        for i, vi in enumerate(vals):
            if i != r:
                c *= vr / (vr - vi)
        out.append(c)
    return out


def tilde2_by_partial_fractions(seq: PsiSequence, n: int, k: int) -> Fraction:
    """Coefficient of ``x**n`` in ``x**k / prod_{i=1..k} (1 - i_psi x)``."""
    if n < 0 or k < 0:
        raise ValueError("indices must be nonnegative")
    if k == 0:
        return Fraction(1 if n == 0 else 0)
    weights = partial_fraction_weights(seq, k)
    if n < k:
        return Fraction(0)
    return sum((c * seq.value(r) ** (n - k) for r, c in enumerate(weights, start=1)), Fraction(0))


def weak_compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All ``(d_1..d_parts)`` with ``d_i >= 0`` summing to ``total`` (stars and bars)."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for bars in combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(total + parts - 1 - prev - 1)
        yield tuple(out)


def tilde2_by_compositions(seq: PsiSequence, n: int, k: int) -> Fraction:
    """Sum over weak compositions ``d_1+..+d_k = n-k`` of ``prod i_psi**d_i``."""
    if n > COMPOSITION_LIMIT:
        raise ValueError(f"oracle limit: compositions route supports n <= {COMPOSITION_LIMIT}")
    if k < 0 or k > n:
        return Fraction(0)
    vals = [seq.value(i) for i in range(1, k + 1)]
    total = Fraction(0)
    for d in weak_compositions(n - k, k):
        term = Fraction(1)
        for v, e in zip(vals, d):
            if e:
                term *= v ** e
        total += term
    return total


def tilde2_by_multisets(seq: PsiSequence, n: int, k: int) -> Fraction:
    """Sum over ``1 <= i_1 <= .. <= i_{n-k} <= k`` of ``prod (i_j)_psi``."""
    if n > COMPOSITION_LIMIT:
        raise ValueError(f"oracle limit: multiset route supports n <= {COMPOSITION_LIMIT}")
    if k < 0 or k > n:
        return Fraction(0)
    if n == k:
        return Fraction(1)
    if k == 0:
        return Fraction(0)
    vals = [seq.value(i) for i in range(1, k + 1)]
    total = Fraction(0)
    for idx in combinations_with_replacement(range(k), n - k):
        term = Fraction(1)
        for i in idx:
            term *= vals[i]
        total += term
    return total


def _cellwise(seq: PsiSequence, N: int, fn) -> Triangle:
    _check_n(N)
    rows = [[fn(seq, n, k) for k in range(n + 1)] for n in range(N + 1)]
    return _freeze("tilde2", seq.spec, rows)


def tilde2_table_by_partial_fractions(seq: PsiSequence, N: int) -> Triangle:
    return _cellwise(seq, N, tilde2_by_partial_fractions)


def tilde2_table_by_compositions(seq: PsiSequence, N: int) -> Triangle:
    return _cellwise(seq, N, tilde2_by_compositions)


TILDE2_ROUTES = {
    "recurrence": tilde2_by_recurrence,
    "basis": tilde2_by_basis,
    "partial-fractions": tilde2_table_by_partial_fractions,
    "compositions": tilde2_table_by_compositions,
}


# -- q families --------------------------------------------------------------


def carlitz2(q: RationalLike, N: int) -> Triangle:
    """``{n+1,k}_q = q**(k-1) {n,k-1}_q + k_q {n,k}_q``."""
    _check_n(N)
    q = as_rational(q)
    seq = PsiSequence.q_gauss(q)
    rows = [[Fraction(1)]]
    for n in range(N):
        prev = rows[-1]
        row = [Fraction(0)] * (n + 2)
        for k in range(1, n + 2):
            left = q ** (k - 1) * prev[k - 1]
            right = seq.value(k) * prev[k] if k <= n else 0
            row[k] = left + right
        rows.append(row)
    return _freeze("carlitz2", _q_params(q), rows)


def carlitz2_by_basis(q: RationalLike, N: int) -> Triangle:
    """Carlitz numbers from ``x_q**n = sum_k {n,k}_q x_q (x-1)_q ... (x-k+1)_q``.

    Since ``(x - i)_q = (x_q - i_q) / q**i``, the q-falling power in the variable
    ``X = x_q`` is ``q**-(k choose 2)`` times ``X (X - 1_q) ... (X - (k-1)_q)``, so
    the row is the Newton expansion of ``X**n`` at nodes ``i_q`` rescaled by
    ``q**(k choose 2)``. Requires ``q != 0``.
    """
    _check_n(N)
    q = as_rational(q)
    if q == 0:
        raise ValueError("basis route needs q != 0")
    seq = PsiSequence.q_gauss(q)
    nodes = seq.nodes(N)
    rows = []
    for n in range(N + 1):
        coords = newton_coefficients(Poly.monomial(n), nodes[:n])
        rows.append([c * q ** (k * (k - 1) // 2) for k, c in enumerate(coords)])
    return _freeze("carlitz2", _q_params(q), rows)


def inv2(q: RationalLike, N: int) -> Triangle:
    """``{n+1,k} = sum_l (n choose l)_q {n-l,k-1}`` from ``{0,0} = 1``."""
    _check_n(N)
    q = as_rational(q)
    seq = PsiSequence.q_gauss(q)
    rows = [[Fraction(1)]]
    for n in range(N):
        row = [Fraction(0)] * (n + 2)
        for k in range(1, n + 2):
            acc = Fraction(0)
            for l in range(n + 1):
                m = n - l
                if k - 1 <= m:
                    acc += seq.binomial(n, l) * rows[m][k - 1]
            row[k] = acc
        rows.append(row)
    return _freeze("inv2", _q_params(q), rows)


def cigler_product(q: RationalLike, n: int) -> Poly:
    """``x (x - 1 + q) (x - 1 + q**2) ... (x - 1 + q**(n-1))``."""
    q = as_rational(q)
    return poly_root_product(1 - q ** j for j in range(n))


def cigl2(q: RationalLike, N: int) -> Triangle:
    """Row n expands the Cigler product in the classical falling-factorial basis."""
    _check_n(N)
    q = as_rational(q)
    nodes = list(range(N))
    rows = [newton_coefficients(cigler_product(q, n), nodes[:n]) for n in range(N + 1)]
    return _freeze("cigl2", _q_params(q), rows)


def cigl2_by_differences(q: RationalLike, N: int) -> Triangle:
    """Cross-route: ``c_k = (Delta**k P)(0) / k!`` from values of the product at 0..n."""
    _check_n(N)
    q = as_rational(q)
    rows = []
    for n in range(N + 1):
        p = cigler_product(q, n)
        vals = [p(m) for m in range(n + 1)]
        row = []
        fact = 1
        for k in range(n + 1):
            if k:
                fact *= k
            row.append(vals[0] / fact)
            vals = [b - a for a, b in zip(vals, vals[1:])]
        rows.append(row)
    return _freeze("cigl2", _q_params(q), rows)


# -- first kind --------------------------------------------------------------


def tilde1(seq: PsiSequence, N: int) -> Triangle:
    _check_n(N)
    rows = [list(seq.falling_poly(k).coeffs) for k in range(N + 1)]
    return _freeze("tilde1", seq.spec, rows)


def cycle1(seq: PsiSequence, N: int) -> Triangle:
    _check_n(N)
    rows = [list(seq.rising_poly(k).coeffs) for k in range(N + 1)]
    return _freeze("cycle1", seq.spec, rows)


def orthogonality_check(seq: PsiSequence, N: int):
    """``sum_r [k r]~ {r l}~ = delta_{k,l}`` for ``0 <= l <= k <= N``."""
    first = tilde1(seq, N)
    second = tilde2_by_recurrence(seq, N)

    def cells():
        for k in range(N + 1):
            for l in range(N + 1):
                lhs = sum((first[k, r] * second[r, l] for r in range(N + 1)), Fraction(0))
                yield k, l, lhs, Fraction(1 if k == l else 0)

    return compare_cells("eq20-orthogonality", cells(), range_=N, params={"psi": seq.spec})


def build(family: str, N: int, *, seq: PsiSequence | None = None, q: RationalLike | None = None) -> Triangle:
    """Dispatch on family name; psi families take ``seq``, q families take ``q``."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    if family in ("tilde2", "tilde1", "cycle1"):
        if seq is None:
            raise ValueError(f"{family} needs a psi sequence")
        return {"tilde2": tilde2_by_recurrence, "tilde1": tilde1, "cycle1": cycle1}[family](seq, N)
    if q is None:
        raise ValueError(f"{family} needs q")
    return {"carlitz2": carlitz2, "inv2": inv2, "cigl2": cigl2}[family](q, N)
