"""Outcome records for identity checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exactnum import format_rational

VERIFIED = "VERIFIED"
FAILED = "FAILED"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class Counterexample:
    """``lhs`` is the claimed side, ``rhs`` the reference value.

    Single-index identities (Bell-type sequences) use ``k = 0``.
    """

    n: int
    k: int
    lhs: Fraction
    rhs: Fraction

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "lhs": format_rational(self.lhs), "rhs": format_rational(self.rhs)}


@dataclass(frozen=True)
class IdentityVerdict:
    identity_id: str
    verdict: str
    range: int
    params: dict = field(default_factory=dict)
    q_samples: tuple[Fraction, ...] = ()
    counterexample: Optional[Counterexample] = None

    def __post_init__(self):
        if self.verdict not in (VERIFIED, FAILED, INCONCLUSIVE):
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.verdict == FAILED:
            ce = self.counterexample
            if ce is None or ce.lhs == ce.rhs:
                raise ValueError("a FAILED verdict needs a counterexample with lhs != rhs")

    @property
    def ok(self) -> bool:
        return self.verdict == VERIFIED

    def to_dict(self) -> dict:
        out = {
            "identity_id": self.identity_id,
            "params": dict(self.params),
            "range": self.range,
            "q_samples": [format_rational(q) for q in self.q_samples],
            "verdict": self.verdict,
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample.to_dict()
        return out


def compare_cells(identity_id, cells, *, range_, params=None, q_samples=()) -> IdentityVerdict:
    """Build a verdict from ``(n, k, lhs, rhs)`` tuples in ascending (n, k) order.

    The first mismatch becomes the counterexample, so it is minimal in n.
    """
    for n, k, lhs, rhs in cells:
        if lhs != rhs:
            return IdentityVerdict(identity_id, FAILED, range_, dict(params or {}), tuple(q_samples),
                                   Counterexample(n, k, Fraction(lhs), Fraction(rhs)))
    return IdentityVerdict(identity_id, VERIFIED, range_, dict(params or {}), tuple(q_samples))
