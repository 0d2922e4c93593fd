"""Extended number sequences ``n -> n_psi`` and their factorials and binomials.

Three families are supported:

* ``classical``: ``n_psi = n``
* ``q_gauss(q)``: ``n_psi = 1 + q + ... + q**(n-1)`` (the Gauss q-number)
* ``custom(values)``: explicit finite list ``1_psi, 2_psi, ...``

Values are computed lazily and cached. A value of zero at ``n >= 1`` makes the
factorials non-invertible and is rejected the first time it is needed.
"""

from __future__ import annotations

import json
import threading
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .exactnum import Poly, RationalLike, as_rational, format_rational, parse_rational, poly_root_product


class DegenerateSequenceError(ValueError):
    pass


class PsiSequence:
    def __init__(self, kind: str, q: Fraction | None = None, values: Sequence[Fraction] = ()):
        if kind not in ("classical", "q_gauss", "custom"):
            raise ValueError(f"unknown psi family {kind!r}")
        self.kind = kind
        self.q = q
        self._custom = tuple(values)
        self._values = [Fraction(0)]
        self._factorials = [Fraction(1)]
        self._seen: dict[Fraction, int] = {}
        self._distinct = True
        self._lock = threading.Lock()

    @classmethod
    def classical(cls) -> "PsiSequence":
        return cls("classical")

    @classmethod
    def q_gauss(cls, q: RationalLike) -> "PsiSequence":
        return cls("q_gauss", q=as_rational(q))

    @classmethod
    def custom(cls, values: Sequence[RationalLike]) -> "PsiSequence":
        """``values[0]`` is ``1_psi``, ``values[1]`` is ``2_psi``, and so on."""
        return cls("custom", values=[as_rational(v) for v in values])

    @classmethod
    def from_spec(cls, spec: str) -> "PsiSequence":
        """Parse ``classical``, ``q:<rational>``, ``custom:<path>`` or ``custom:[...]``."""
        spec = spec.strip()
        if spec == "classical":
            return cls.classical()
        head, sep, body = spec.partition(":")
        if not sep or not body:
            raise ValueError(f"bad psi spec {spec!r}; expected classical, q:<rational> or custom:<path>")
        if head == "q":
            return cls.q_gauss(parse_rational(body))
        if head == "custom":
            text = body if body.lstrip().startswith("[") else Path(body).read_text()
            data = json.loads(text)
            if not isinstance(data, list) or not data:
                raise ValueError("custom psi values must be a non-empty JSON array")
            return cls.custom([parse_rational(str(v)) for v in data])
        raise ValueError(f"bad psi spec {spec!r}; expected classical, q:<rational> or custom:<path>")

    @property
    def spec(self) -> str:
        if self.kind == "classical":
            return "classical"
        if self.kind == "q_gauss":
            return f"q:{format_rational(self.q)}"
        return "custom:" + json.dumps([format_rational(v) for v in self._custom], separators=(",", ":"))

    def __repr__(self) -> str:
        return f"PsiSequence({self.spec})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, PsiSequence):
            return NotImplemented
        return self.spec == other.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    @property
    def limit(self) -> int | None:
        """Largest supported index, or None if unbounded."""
        return len(self._custom) if self.kind == "custom" else None

    @property
    def q_parameter(self) -> Fraction | None:
        """The q of a Gauss family; classical counts as q = 1."""
        if self.kind == "q_gauss":
            return self.q
        if self.kind == "classical":
            return Fraction(1)
        return None

    def _raw(self, n: int) -> Fraction:
        if self.kind == "classical":
            return Fraction(n)
        if self.kind == "q_gauss":
            # summed, not (1 - q**n)/(1 - q), so q = 1 needs no special case
            acc, power = Fraction(0), Fraction(1)
            for _ in range(n):
                acc += power
                power *= self.q
            return acc
        if n > len(self._custom):
            raise ValueError(f"custom psi sequence has {len(self._custom)} values; index {n} requested")
        return self._custom[n - 1]

    def _grow(self, n: int) -> None:
        if n < 0:
            raise ValueError("psi index must be nonnegative")
        if n < len(self._values):
            return
        with self._lock:
            while len(self._values) <= n:
                m = len(self._values)
                v = self._raw(m)
                if v == 0:
                    raise DegenerateSequenceError(f"degenerate psi-sequence: {m}_psi = 0 for {self.spec}")
                if v in self._seen:
                    self._distinct = False
                self._seen[v] = m
                self._factorials.append(self._factorials[-1] * v)
                self._values.append(v)

    def value(self, n: int) -> Fraction:
        self._grow(n)
        return self._values[n]

    def factorial(self, n: int) -> Fraction:
        self._grow(n)
        return self._factorials[n]

    def binomial(self, n: int, k: int) -> Fraction:
        """``n_psi! / (k_psi! (n-k)_psi!)``; zero when ``k > n`` or ``k < 0``."""
        if k < 0 or k > n:
            return Fraction(0)
        return self.factorial(n) / (self.factorial(k) * self.factorial(n - k))

    @property
    def distinct(self) -> bool:
        """True iff every value ``1_psi .. n_psi`` requested so far is distinct."""
        return self._distinct

    def distinct_upto(self, n: int) -> bool:
        vals = [self.value(i) for i in range(1, n + 1)]
        return len(set(vals)) == len(vals)

    def nodes(self, k: int) -> list[Fraction]:
        """``[0_psi, 1_psi, ..., (k-1)_psi]``."""
        return [self.value(i) for i in range(k)]

    def falling_poly(self, k: int) -> Poly:
        """``x (x - 1_psi) ... (x - (k-1)_psi)``."""
        return poly_root_product(self.nodes(k))

    def rising_poly(self, k: int) -> Poly:
        """``x (x + 1_psi) ... (x + (k-1)_psi)``."""
        return poly_root_product(-v for v in self.nodes(k))


def psi_value(seq: PsiSequence, n: int) -> Fraction:
    return seq.value(n)


def psi_factorial(seq: PsiSequence, n: int) -> Fraction:
    return seq.factorial(n)


def psi_binomial(seq: PsiSequence, n: int, k: int) -> Fraction:
    return seq.binomial(n, k)


def psi_falling_poly(seq: PsiSequence, k: int) -> Poly:
    return seq.falling_poly(k)


def psi_rising_poly(seq: PsiSequence, k: int) -> Poly:
    return seq.rising_poly(k)


def q_number(q: RationalLike, n: int) -> Fraction:
    """Gauss q-number ``n_q`` as a one-off (no cache)."""
    return PsiSequence.q_gauss(q)._raw(n)
