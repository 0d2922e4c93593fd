"""Exact numeric substrate: rationals, dense polynomials, truncated power series.

Rationals are :class:`fractions.Fraction`; everything else in the package is
built on top of them. Polynomials and series are immutable.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[int, Fraction, str]


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused on purpose: they would smuggle rounding into exact code.
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    s = text.strip()
    if not s:
        raise ValueError("empty rational")
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not a rational: {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(p, q)


def format_rational(value: Fraction) -> str:
    """Lowest-terms string: ``"p/q"``, or ``"p"`` when the denominator is 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Poly:
    """Dense univariate polynomial with Fraction coefficients.

    ``coeffs[i]`` is the coefficient of ``x**i``. Trailing zeros are stripped,
    so the zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def monomial(cls, n: int, c: RationalLike = 1) -> "Poly":
        return cls([0] * n + [c])

    @classmethod
    def constant(cls, c: RationalLike) -> "Poly":
        return cls([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __call__(self, x: RationalLike) -> Fraction:
        x = as_rational(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly([{', '.join(format_rational(c) for c in self.coeffs)}])"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = format_rational(abs(c))
            if i == 0:
                body = mag
            else:
                power = "x" if i == 1 else f"x^{i}"
                body = power if abs(c) == 1 else f"{mag}*{power}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly([as_rational(other)])

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = as_rational(other)
            return Poly(c * a for a in self.coeffs)
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly([1])
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def shift_up(self, k: int = 1) -> "Poly":
        """Multiply by ``x**k``."""
        if not self.coeffs:
            return self
        return Poly([0] * k + list(self.coeffs))

    def divmod_linear(self, node: RationalLike) -> tuple["Poly", Fraction]:
        """Synthetic division by ``(x - node)``: returns (quotient, remainder)."""
        node = as_rational(node)
        if not self.coeffs:
            return Poly(), Fraction(0)
        out = []
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * node + c
            out.append(acc)
        remainder = out.pop()
        return Poly(reversed(out)), remainder

    def to_json(self) -> str:
        return json.dumps([format_rational(c) for c in self.coeffs])

    @classmethod
    def from_json(cls, text: str) -> "Poly":
        data = json.loads(text)
        if not isinstance(data, list):
            raise ValueError("polynomial JSON must be an array")
        return cls(parse_rational(str(c)) for c in data)


X = Poly([0, 1])
ONE = Poly([1])


def poly_mul(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return Poly()
    out = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, ca in enumerate(a.coeffs):
        if ca == 0:
            continue
        for j, cb in enumerate(b.coeffs):
            out[i + j] += ca * cb
    return Poly(out)


def poly_root_product(roots: Iterable[RationalLike]) -> Poly:
    """Monic polynomial ``prod_j (x - roots[j])``; the empty product is 1."""
    cs = [Fraction(1)]
    for r in roots:
        r = as_rational(r)
        nxt = [Fraction(0)] * (len(cs) + 1)
        for i, c in enumerate(cs):
            nxt[i + 1] += c
            nxt[i] -= r * c
        cs = nxt
    return Poly(cs)


def newton_coefficients(p: Poly, nodes: Sequence[RationalLike]) -> list[Fraction]:
    """Coordinates of ``p`` in the Newton basis ``prod_{i<k} (x - nodes[i])``.

    Successive synthetic division: the remainder of dividing by
    ``x - nodes[0]`` is ``a_0``, the quotient is divided by ``x - nodes[1]``,
    and so on. Repeated nodes are fine. Returns ``degree(p) + 1`` values
    (an empty list for the zero polynomial).
    """
    d = p.degree
    if len(nodes) < d:
        raise ValueError(f"basis too small: degree {d} needs {d} nodes, got {len(nodes)}")
    out = []
    rest = p
    for i in range(d):
        rest, rem = rest.divmod_linear(nodes[i])
        out.append(rem)
    if d >= 0:
        out.append(rest.coeff(0))
    return out


def newton_to_poly(coords: Sequence[RationalLike], nodes: Sequence[RationalLike]) -> Poly:
    """Inverse of :func:`newton_coefficients`: rebuild the monomial-basis polynomial."""
    if len(coords) > len(nodes) + 1:
        raise ValueError("basis too small")
    if not coords:
        return Poly()
    acc = Poly([coords[-1]])
    for k in range(len(coords) - 2, -1, -1):
        acc = acc * (X - as_rational(nodes[k])) + as_rational(coords[k])
    return acc


class TruncatedSeries:
    """Power series known exactly through ``x**order``.

    Coefficients beyond ``order`` are unknown, not zero; binary operations
    work at the smaller of the two orders.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Iterable[RationalLike], order: int | None = None):
        cs = [as_rational(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("series order must be nonnegative")
        cs = (cs + [Fraction(0)] * (order + 1))[: order + 1]
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    @classmethod
    def from_poly(cls, p: Poly, order: int) -> "TruncatedSeries":
        return cls(p.coeffs, order)

    @classmethod
    def exp_x(cls, order: int) -> "TruncatedSeries":
        """``e**x`` through ``order``."""
        cs = [Fraction(1)]
        for n in range(1, order + 1):
            cs.append(cs[-1] / n)
        return cls(cs, order)

    def __getitem__(self, i: int) -> Fraction:
        if i > self.order:
            raise IndexError(f"coefficient {i} beyond order {self.order}")
        return self.coeffs[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.order, self.coeffs))

    def __repr__(self) -> str:
        body = ", ".join(format_rational(c) for c in self.coeffs)
        return f"TruncatedSeries([{body}], order={self.order})"

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return TruncatedSeries(self.coeffs[: order + 1], order)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(self.order, other.order)
        return TruncatedSeries((self.coeffs[i] + other.coeffs[i] for i in range(n + 1)), n)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries((-c for c in self.coeffs), self.order)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def scale(self, c: RationalLike) -> "TruncatedSeries":
        c = as_rational(c)
        return TruncatedSeries((c * a for a in self.coeffs), self.order)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(n + 1):
            out.append(sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0)))
        return TruncatedSeries(out, n)

    def shift_up(self, k: int) -> "TruncatedSeries":
        """Multiply by ``x**k``; the order is unchanged (high terms fall off)."""
        return TruncatedSeries([Fraction(0)] * k + list(self.coeffs), self.order)


def series_exp(s: TruncatedSeries) -> TruncatedSeries:
    """``exp(s)`` for ``s(0) = 0`` via ``n f_n = sum_k k s_k f_{n-k}``."""
    if s.coeffs[0] != 0:
        raise ValueError("series_exp needs a zero constant term (exp(c) is not rational)")
    f = [Fraction(1)]
    for n in range(1, s.order + 1):
        acc = sum((k * s.coeffs[k] * f[n - k] for k in range(1, n + 1)), Fraction(0))
        f.append(acc / n)
    return TruncatedSeries(f, s.order)


def series_compose(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    """``outer(inner(x))`` through ``min(outer.order, inner.order)``."""
    if inner.coeffs[0] != 0:
        raise ValueError("series_compose needs an inner series with zero constant term")
    n = min(outer.order, inner.order)
    inner = inner.truncate(n)
    acc = TruncatedSeries([outer.coeffs[n]], n)
    for i in range(n - 1, -1, -1):
        acc = acc * inner + TruncatedSeries([outer.coeffs[i]], n)
    return acc
