"""Multivariable Laurent polynomials with integer coefficients and half-integer exponents (stored doubled)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping


@dataclass(frozen=True)
class LaurentMV:
    arity: int
    terms: Mapping[tuple[int, ...], int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for e, c in dict(self.terms).items():
            e = tuple(e)
            if len(e) != self.arity:
                raise ValueError(f"exponent {e} has wrong arity (want {self.arity})")
            if c:
                clean[e] = int(c)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def const(cls, c: int, arity: int) -> "LaurentMV":
        return cls(arity, {(0,) * arity: c})

    @classmethod
    def monomial(cls, exps2: tuple[int, ...], c: int = 1) -> "LaurentMV":
        return cls(len(exps2), {tuple(exps2): c})

    @classmethod
    def half_difference(cls, slot: int, arity: int) -> "LaurentMV":
        """x_slot^{1/2} - x_slot^{-1/2}."""
        up = tuple(1 if i == slot else 0 for i in range(arity))
        down = tuple(-x for x in up)
        return cls(arity, {up: 1, down: -1})

    def __add__(self, other: "LaurentMV") -> "LaurentMV":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentMV(self.arity, out)

    def __neg__(self) -> "LaurentMV":
        return LaurentMV(self.arity, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "LaurentMV") -> "LaurentMV":
        return self + (-other)

    def __mul__(self, other: "LaurentMV") -> "LaurentMV":
        self._check(other)
        out: dict[tuple[int, ...], int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentMV(self.arity, out)

    def __pow__(self, k: int) -> "LaurentMV":
        out = LaurentMV.const(1, self.arity)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentMV) and self.arity == other.arity and self.terms == other.terms

    def __hash__(self):
        return hash((self.arity, tuple(sorted(self.terms.items()))))

    def _check(self, other: "LaurentMV"):
        if self.arity != other.arity:
            raise ValueError(f"arity mismatch {self.arity} vs {other.arity}")

    def is_zero(self) -> bool:
        return not self.terms

    def abs_coefficient_sum(self) -> int:
        return sum(abs(c) for c in self.terms.values())

    def equal_up_to_sign(self, other: "LaurentMV") -> bool:
        return self == other or self == -other

    def collapse(self) -> "LaurentMV":
        """Set every variable equal to a single variable t."""
        out: dict[tuple[int], int] = {}
        for e, c in self.terms.items():
            k = (sum(e),)
            out[k] = out.get(k, 0) + c
        return LaurentMV(1, out)

    def divide_half_difference(self, slot: int) -> "LaurentMV":
        """Exact quotient by (x_slot^{1/2} - x_slot^{-1/2}); raises if not divisible."""
        rest = dict(self.terms)
        floor = min((k[slot] for k in rest), default=0)
        quotient: dict[tuple[int, ...], int] = {}
        while rest:
            e = max(rest, key=lambda k: (k[slot], k))
            if e[slot] < floor + 2:
                raise ValueError("not divisible by the half difference")
            c = rest.pop(e)
            q = tuple(a - 1 if i == slot else a for i, a in enumerate(e))
            quotient[q] = c
            low = tuple(a - 2 if i == slot else a for i, a in enumerate(e))
            rest[low] = rest.get(low, 0) + c
            if rest[low] == 0:
                del rest[low]
        return LaurentMV(self.arity, quotient)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"x{i + 1}^{_fmt(Fraction(a, 2))}" for i, a in enumerate(e) if a
            )
            coeff = str(c) if (c not in (1, -1) or not mono) else ("-" if c < 0 else "")
            parts.append(f"{coeff}{'*' if coeff not in ('', '-') and mono else ''}{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> dict[str, int]:
        return {",".join(str(a) for a in e): c for e, c in sorted(self.terms.items())}


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"({q.numerator}/{q.denominator})"
