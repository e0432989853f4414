"""Exact integer-affine expressions and quantified comparisons over boxes.

An expression is affine in the stage counter ``n`` and finitely many named
parameters, all with integer coefficients.  A *box* assigns every variable
an integer lower bound and no upper bound.  Universally and existentially
quantified comparisons over a box are decided exactly (coefficient signs,
corner evaluation, and a bounded reachability argument for equalities), so
no verdict is ever approximate and every negative verdict carries a
checkable witness valuation.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

COUNTER = "n"

RELATIONS = (">=", "<=", "==", "!=", "<", ">")

_NEGATED = {">=": "<", "<=": ">", "==": "!=", "!=": "==", "<": ">=", ">": "<="}


class Truth(Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SymbolicTruth:
    """Outcome of a quantified comparison, with a witness when one exists.

    A FAILS witness of a universal query (and a HOLDS witness of an
    existential one) is a full valuation of the box that can be replayed
    through ``Affine.eval``.
    """

    truth: Truth
    witness: Mapping[str, int] | None = None

    @property
    def holds(self) -> bool:
        return self.truth is Truth.HOLDS


@dataclass(frozen=True)
class Affine:
    """Integer-affine form ``const + sum(coeff * var)``, kept normalized."""

    const: int = 0
    coeffs: tuple[tuple[str, int], ...] = ()

    @staticmethod
    def of(const: int = 0, **coeffs: int) -> "Affine":
        items = tuple(sorted((v, c) for v, c in coeffs.items() if c != 0))
        return Affine(const, items)

    def coeff(self, var: str) -> int:
        for v, c in self.coeffs:
            if v == var:
                return c
        return 0

    def variables(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.coeffs)

    @property
    def is_constant(self) -> bool:
        return not self.coeffs

    def eval(self, valuation: Mapping[str, int]) -> int:
        total = self.const
        for v, c in self.coeffs:
            if v not in valuation:
                raise ValueError(f"missing binding for '{v}'")
            total += c * int(valuation[v])
        return total

    def shift(self, delta: int) -> "Affine":
        """Substitute ``n := n + delta``; coefficients are unchanged."""
        if delta == 0:
            return self
        return Affine(self.const + self.coeff(COUNTER) * delta, self.coeffs)

    def substitute(self, var: str, value: int) -> "Affine":
        c = self.coeff(var)
        if c == 0:
            return self
        rest = tuple(item for item in self.coeffs if item[0] != var)
        return Affine(self.const + c * int(value), rest)

    def substitute_all(self, pins: Mapping[str, int]) -> "Affine":
        out = self
        for var, value in pins.items():
            out = out.substitute(var, value)
        return out

    def __add__(self, other: "Affine | int") -> "Affine":
        if isinstance(other, int):
            return Affine(self.const + other, self.coeffs)
        merged = dict(self.coeffs)
        for v, c in other.coeffs:
            merged[v] = merged.get(v, 0) + c
        items = tuple(sorted((v, c) for v, c in merged.items() if c != 0))
        return Affine(self.const + other.const, items)

    def __neg__(self) -> "Affine":
        return Affine(-self.const, tuple((v, -c) for v, c in self.coeffs))

    def __sub__(self, other: "Affine | int") -> "Affine":
        if isinstance(other, int):
            return Affine(self.const - other, self.coeffs)
        return self + (-other)

    def render(self) -> str:
        """Canonical text: parameters alphabetically, then ``n``, then the constant."""
        parts: list[tuple[str, str]] = []
        for v, c in sorted(self.coeffs, key=lambda it: (it[0] == COUNTER, it[0])):
            term = v if abs(c) == 1 else f"{abs(c)}*{v}"
            parts.append(("-" if c < 0 else "+", term))
        if self.const != 0 or not parts:
            parts.append(("-" if self.const < 0 else "+", str(abs(self.const))))
        sign, first = parts[0]
        text = ("-" if sign == "-" else "") + first
        for sign, term in parts[1:]:
            text += f" {sign} {term}"
        return text

    def __str__(self) -> str:
        return self.render()


def _corner(bounds: Mapping[str, int]) -> dict[str, int]:
    return {v: int(b) for v, b in bounds.items()}


def _check_covered(d: Affine, bounds: Mapping[str, int]) -> None:
    missing = [v for v in d.variables() if v not in bounds]
    if missing:
        raise ValueError(f"box is missing bounds for {missing}")


def _forall_nonneg(d: Affine, bounds: Mapping[str, int]) -> SymbolicTruth:
    """Decide ``d >= 0`` at every integer point of the box."""
    _check_covered(d, bounds)
    corner = _corner(bounds)
    at_corner = d.eval(corner)
    negatives = sorted(v for v in d.variables() if d.coeff(v) < 0)
    if at_corner >= 0 and not negatives:
        return SymbolicTruth(Truth.HOLDS)
    if at_corner < 0:
        return SymbolicTruth(Truth.FAILS, corner)
    var = negatives[0]
    step = -d.coeff(var)
    witness = dict(corner)
    witness[var] += at_corner // step + 1
    return SymbolicTruth(Truth.FAILS, witness)


def _exists_zero(d: Affine, bounds: Mapping[str, int]) -> dict[str, int] | None:
    """Find a box point where ``d == 0``, or None when no such point exists.

    After shifting to the corner the question is whether the target can be
    written as a nonnegative integer combination of the coefficients; a
    breadth-first search over a window of width max|coeff| around the
    segment [0, target] is exhaustive for that question, because any
    reachable target is reachable by steps that never leave the window
    (take increasing steps while below it and decreasing ones while above).
    """
    _check_covered(d, bounds)
    corner = _corner(bounds)
    target = -d.eval(corner)
    if target == 0:
        return corner
    coins = dict(d.coeffs)
    if not coins:
        return None
    gcd = math.gcd(*(abs(c) for c in coins.values()))
    if target % gcd:
        return None
    if target > 0 and all(c < 0 for c in coins.values()):
        return None
    if target < 0 and all(c > 0 for c in coins.values()):
        return None
    biggest = max(abs(c) for c in coins.values())
    lo, hi = min(0, target) - biggest, max(0, target) + biggest
    came_from: dict[int, tuple[int, str] | None] = {0: None}
    queue = deque([0])
    while queue and target not in came_from:
        value = queue.popleft()
        for var, c in sorted(coins.items()):
            nxt = value + c
            if lo <= nxt <= hi and nxt not in came_from:
                came_from[nxt] = (value, var)
                queue.append(nxt)
    if target not in came_from:
        return None
    witness = dict(corner)
    value = target
    while value != 0:
        value, var = came_from[value]  # type: ignore[misc]
        witness[var] += 1
    return witness


def holds_forall(lhs: Affine, rhs: Affine, rel: str, bounds: Mapping[str, int]) -> SymbolicTruth:
    """Decide ``lhs rel rhs`` at every integer point of the box.

    Strict relations reduce to non-strict ones by one (integer arithmetic),
    equality is the conjunction of the two inequalities, and disequality is
    the negation of an exact equality search; the result is never UNKNOWN.
    """
    if rel not in RELATIONS:
        raise ValueError(f"unsupported relation {rel!r}")
    d = lhs - rhs
    if rel == ">=":
        return _forall_nonneg(d, bounds)
    if rel == "<=":
        return _forall_nonneg(-d, bounds)
    if rel == ">":
        return _forall_nonneg(d - 1, bounds)
    if rel == "<":
        return _forall_nonneg(-d - 1, bounds)
    if rel == "==":
        ge = _forall_nonneg(d, bounds)
        if not ge.holds:
            return ge
        return _forall_nonneg(-d, bounds)
    witness = _exists_zero(d, bounds)
    if witness is None:
        return SymbolicTruth(Truth.HOLDS)
    return SymbolicTruth(Truth.FAILS, witness)


def find_witness(lhs: Affine, rhs: Affine, rel: str, bounds: Mapping[str, int]) -> SymbolicTruth:
    """Find a box point satisfying ``lhs rel rhs`` (the dual of holds_forall)."""
    result = holds_forall(lhs, rhs, _NEGATED[rel], bounds)
    if result.truth is Truth.FAILS:
        return SymbolicTruth(Truth.HOLDS, result.witness)
    return SymbolicTruth(Truth.FAILS)
