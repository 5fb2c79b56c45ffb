"""
Exact linear algebra over the two-element field.

Vectors are stored as Python integers used as bitsets (bit i set means basis
index i is in the support).  XOR is addition.  This covers both the sparse
relation matrices of the cabled computation and the denser blocks of grid
differentials without a second code path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


@dataclass(frozen=True)
class F2Vector:
    bits: int = 0

    @classmethod
    def from_support(cls, support: Iterable[int]) -> "F2Vector":
        bits = 0
        for i in support:
            if i < 0:
                raise ValueError(f"negative index {i}")
            bits ^= 1 << i
        return cls(bits)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(_iter_bits(self.bits))

    def __add__(self, other: "F2Vector") -> "F2Vector":
        return F2Vector(self.bits ^ other.bits)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, i: int) -> bool:
        return (self.bits >> i) & 1 == 1

    def max_index(self) -> int:
        return self.bits.bit_length() - 1


@dataclass(frozen=True)
class F2Matrix:
    rows: int
    cols: int
    entries: tuple[F2Vector, ...] = field(default=())

    def __post_init__(self):
        if len(self.entries) != self.rows:
            raise ValueError(f"expected {self.rows} rows, got {len(self.entries)}")
        for r in self.entries:
            if r.bits >> self.cols:
                raise ValueError(f"row support {r.support} exceeds cols={self.cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Iterable[int]], cols: int) -> "F2Matrix":
        return cls(len(rows), cols, tuple(F2Vector.from_support(r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(n, n, tuple(F2Vector(1 << i) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "F2Matrix":
        return cls(rows, cols, tuple(F2Vector() for _ in range(rows)))

    def transpose(self) -> "F2Matrix":
        out = [0] * self.cols
        for i, r in enumerate(self.entries):
            for j in _iter_bits(r.bits):
                out[j] |= 1 << i
        return F2Matrix(self.cols, self.rows, tuple(F2Vector(b) for b in out))

    def apply(self, v: F2Vector) -> F2Vector:
        """Row-vector convention: returns the rows-indexed vector m @ v."""
        bits = 0
        for i, r in enumerate(self.entries):
            if _parity(r.bits & v.bits):
                bits |= 1 << i
        return F2Vector(bits)

    def __matmul__(self, other: "F2Matrix") -> "F2Matrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for r in self.entries:
            acc = 0
            for j in _iter_bits(r.bits):
                acc ^= other.entries[j].bits
            out.append(F2Vector(acc))
        return F2Matrix(self.rows, other.cols, tuple(out))

    def is_zero(self) -> bool:
        return not any(r.bits for r in self.entries)


def _iter_bits(bits: int):
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def _parity(bits: int) -> int:
    return bits.bit_count() & 1


def _lowest(bits: int) -> int:
    return (bits & -bits).bit_length() - 1


def echelon(rows: Iterable[int]) -> dict[int, int]:
    """Reduce integer bit-rows; returns {pivot index: reduced row}.

    Pivots are the lowest set bit of each row, and every stored row has
    been reduced against earlier pivots, so the result is deterministic in
    the order of ``rows``.
    """
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            p = _lowest(r)
            q = pivots.get(p)
            if q is None:
                pivots[p] = r
                break
            r ^= q
    return pivots


def rank_bits(rows: Iterable[int]) -> int:
    return len(echelon(rows))


def rank(m: F2Matrix) -> int:
    return rank_bits(r.bits for r in m.entries)


def kernel_basis(m: F2Matrix) -> list[F2Vector]:
    """Basis of {x : m x = 0}, one vector per free column."""
    # Full reduction (reduced row echelon) keyed by lowest-index pivot.
    pivots = echelon(r.bits for r in m.entries)
    order = sorted(pivots)
    for p in order:
        row = pivots[p]
        for q in order:
            if q != p and (pivots[q] >> p) & 1:
                pivots[q] ^= row
    free = [j for j in range(m.cols) if j not in pivots]
    basis = []
    for f in free:
        bits = 1 << f
        for p, row in pivots.items():
            if (row >> f) & 1:
                bits |= 1 << p
        basis.append(F2Vector(bits))
    return basis


def quotient_dim(ambient_dim: int, relations: Iterable[F2Vector]) -> int:
    rels = list(relations)
    for r in rels:
        if r.bits >> ambient_dim:
            raise ValueError(f"relation support {r.support} outside ambient dim {ambient_dim}")
    return ambient_dim - rank_bits(r.bits for r in rels)
