"""
Multigraded F2 vector spaces.

Alexander gradings are half-integers and are stored doubled, so a
``MultiGrading(maslov=-1, alex=(0, -1))`` means M = -1, A = (0, -1/2).
Two modules are considered isomorphic when their graded dimensions agree.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence


class NotDivisible(ValueError):
    """The Poincare polynomial does not factor as requested."""


@dataclass(frozen=True, order=True)
class MultiGrading:
    maslov: int
    alex: tuple[int, ...] = ()

    def __add__(self, other: "MultiGrading") -> "MultiGrading":
        if len(self.alex) != len(other.alex):
            raise ValueError(f"alexander arity mismatch: {len(self.alex)} vs {len(other.alex)}")
        return MultiGrading(self.maslov + other.maslov, tuple(a + b for a, b in zip(self.alex, other.alex)))

    def __sub__(self, other: "MultiGrading") -> "MultiGrading":
        return self + other.negate()

    def negate(self) -> "MultiGrading":
        return MultiGrading(-self.maslov, tuple(-a for a in self.alex))

    def concat(self, other: "MultiGrading") -> "MultiGrading":
        return MultiGrading(self.maslov + other.maslov, self.alex + other.alex)

    @property
    def arity(self) -> int:
        return len(self.alex)

    def key(self) -> str:
        return f"({self.maslov};{','.join(str(a) for a in self.alex)})"

    @classmethod
    def parse_key(cls, key: str) -> "MultiGrading":
        body = key.strip()[1:-1]
        m, _, rest = body.partition(";")
        alex = tuple(int(a) for a in rest.split(",")) if rest else ()
        return cls(int(m), alex)


def grading(maslov: int, *alex2: int) -> MultiGrading:
    """Shorthand; Alexander entries are already doubled."""
    return MultiGrading(maslov, tuple(alex2))


@dataclass(frozen=True)
class GradedModule:
    alex_arity: int
    basis: tuple[tuple[str, MultiGrading], ...] = ()

    def __post_init__(self):
        labels = [b[0] for b in self.basis]
        if len(set(labels)) != len(labels):
            raise ValueError("basis labels must be unique")
        for label, g in self.basis:
            if g.arity != self.alex_arity:
                raise ValueError(f"{label}: grading arity {g.arity} != module arity {self.alex_arity}")

    @classmethod
    def from_dims(cls, dims: Mapping[MultiGrading, int], alex_arity: int, prefix: str = "g") -> "GradedModule":
        basis = []
        for g in sorted(dims):
            d = dims[g]
            if d < 0:
                raise ValueError(f"negative dimension at {g}")
            basis.extend((f"{prefix}{len(basis)}", g) for _ in range(d))
        return cls(alex_arity, tuple(basis))

    @classmethod
    def unit(cls, alex_arity: int = 0) -> "GradedModule":
        return cls(alex_arity, (("1", MultiGrading(0, (0,) * alex_arity)),))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def labels(self) -> list[str]:
        return [b[0] for b in self.basis]

    def grading_of(self, label: str) -> MultiGrading:
        for lab, g in self.basis:
            if lab == label:
                return g
        raise KeyError(label)

    def dims(self) -> Counter:
        return Counter(g for _, g in self.basis)

    def dim_at(self, g: MultiGrading) -> int:
        return self.dims().get(g, 0)

    def maslov_dims(self) -> Counter:
        return Counter(g.maslov for _, g in self.basis)

    def same_dims(self, other: "GradedModule") -> bool:
        return self.alex_arity == other.alex_arity and self.dims() == other.dims()

    def to_json(self) -> str:
        return json.dumps(dims_to_json(self.dims()), sort_keys=True)


def dims_to_json(dims: Mapping[MultiGrading, int]) -> dict[str, int]:
    return {g.key(): int(d) for g, d in sorted(dims.items()) if d}


def tensor(a: GradedModule, b: GradedModule, mode: str = "add") -> GradedModule:
    """Tensor product; ``mode='add'`` sums Alexander slots, ``'concat'`` appends them."""
    if mode == "add":
        if a.alex_arity != b.alex_arity:
            raise ValueError(f"cannot add Alexander slots of arity {a.alex_arity} and {b.alex_arity}")
        arity = a.alex_arity
        combine = MultiGrading.__add__
    elif mode == "concat":
        arity = a.alex_arity + b.alex_arity
        combine = MultiGrading.concat
    else:
        raise ValueError(f"unknown tensor mode {mode!r}")
    basis = tuple(
        (f"{la}*{lb}", combine(ga, gb)) for la, ga in a.basis for lb, gb in b.basis
    )
    return GradedModule(arity, basis)


def shift(a: GradedModule, dM: int, dA: Sequence[int] | None = None) -> GradedModule:
    dA = tuple(dA) if dA is not None else (0,) * a.alex_arity
    if len(dA) != a.alex_arity:
        raise ValueError("shift arity mismatch")
    s = MultiGrading(dM, dA)
    return GradedModule(a.alex_arity, tuple((lab, g + s) for lab, g in a.basis))


def _divide_once(poly: Counter, top: MultiGrading, bottom: MultiGrading) -> Counter:
    """Divide a nonnegative Poincare polynomial by (t^top + t^bottom).

    Requires top.maslov > bottom.maslov; gradings are processed from the
    highest Maslov degree down, so each quotient coefficient is fixed by
    already-known higher ones.
    """
    if top.maslov <= bottom.maslov:
        raise ValueError("factor terms must have distinct Maslov gradings, top first")
    step = bottom - top
    quotient: Counter = Counter()
    for g in sorted(poly, key=lambda g: (-g.maslov, g.alex)):
        q = poly[g] - quotient.get(g - top - step, 0)
        if q < 0:
            raise NotDivisible(f"negative coefficient at {g.key()}")
        if q:
            quotient[g - top] = q
    # verify the product reproduces the input exactly
    product: Counter = Counter()
    for g, c in quotient.items():
        product[g + top] += c
        product[g + bottom] += c
    if +product != +poly:
        raise NotDivisible("remainder is nonzero")
    return quotient


def factor_out(
    a: GradedModule,
    factor: tuple[MultiGrading, MultiGrading],
    multiplicity: int,
    prefix: str = "q",
) -> GradedModule:
    """Strip ``multiplicity`` copies of a two-dimensional tensor factor."""
    top, bottom = sorted(factor, key=lambda g: -g.maslov)
    poly = a.dims()
    for _ in range(multiplicity):
        poly = _divide_once(poly, top, bottom)
    if multiplicity == 0:
        return a
    return GradedModule.from_dims(poly, a.alex_arity, prefix=prefix)


def collapse_alexander(a: GradedModule, groups: Sequence[Iterable[int]]) -> GradedModule:
    groups = [tuple(g) for g in groups]
    flat = sorted(i for g in groups for i in g)
    if flat != list(range(a.alex_arity)):
        raise ValueError(f"groups {groups} do not partition {a.alex_arity} slots")
    basis = tuple(
        (lab, MultiGrading(g.maslov, tuple(sum(g.alex[i] for i in grp) for grp in groups)))
        for lab, g in a.basis
    )
    return GradedModule(len(groups), basis)


# The two-dimensional factors used throughout.
def v_module(alex_arity: int = 0) -> GradedModule:
    """<T, B> with M(T)=0, M(B)=-1 and vanishing Alexander grading."""
    z = (0,) * alex_arity
    return GradedModule(alex_arity, (("T", MultiGrading(0, z)), ("B", MultiGrading(-1, z))))


def w_factor_gradings(alex_arity: int, slot: int) -> tuple[MultiGrading, MultiGrading]:
    """(theta, xi) gradings for an extra basepoint pair on ``slot``: A = +1/2, -1/2."""
    up = tuple(1 if i == slot else 0 for i in range(alex_arity))
    down = tuple(-x for x in up)
    return MultiGrading(0, up), MultiGrading(-1, down)


def w_module(alex_arity: int, slot: int) -> GradedModule:
    theta, xi = w_factor_gradings(alex_arity, slot)
    return GradedModule(alex_arity, (("theta", theta), ("xi", xi)))
