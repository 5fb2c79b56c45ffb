"""
Closed-form link Floer homology of unlinks and the elementary cobordism maps.

An unlink with one marked component has homology V^{(n-1)}, one V = <T, B>
factor per non-marked component, identified with reduced Khovanov homology
(T <-> 1, B <-> X in F2[X]/(X^2)).  Extra basepoint pairs contribute W =
<theta, xi> factors.  Linear combinations are frozensets of basis tensors,
with symmetric difference as addition.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping

from .graded import GradedModule, MultiGrading

V_MASLOV = {"T": 0, "B": -1}
W_GRADING = {"theta": (0, 1), "xi": (-1, -1)}  # (Maslov, doubled Alexander)
KINDS = ("S+", "S-", "T+", "T-")


class UnlinkError(ValueError):
    pass


@dataclass(frozen=True)
class ReducedTensor:
    components: tuple[Hashable, ...]
    marked: Hashable
    word: tuple[tuple[Hashable, str], ...] = ()
    extra: tuple[tuple[Hashable, str], ...] = ()

    def __post_init__(self):
        if len(set(self.components)) != len(self.components):
            raise UnlinkError(f"duplicate component ids in {self.components}")
        if self.marked not in self.components:
            raise UnlinkError(f"marked component {self.marked!r} not present")
        labels = dict(self.word)
        if set(labels) != set(self.components) - {self.marked} or len(labels) != len(self.word):
            raise UnlinkError("word must cover exactly the non-marked components")
        if any(s not in V_MASLOV for s in labels.values()):
            raise UnlinkError(f"bad V symbol in {self.word}")
        for comp, sym in self.extra:
            if comp not in self.components or sym not in W_GRADING:
                raise UnlinkError(f"bad extra factor {(comp, sym)}")
        # canonical order: word follows component order
        order = {c: i for i, c in enumerate(self.components)}
        object.__setattr__(self, "word", tuple(sorted(self.word, key=lambda p: order[p[0]])))

    def label(self, c) -> str:
        return dict(self.word)[c]

    def with_word(self, **changes) -> "ReducedTensor":
        return ReducedTensor(
            changes.get("components", self.components),
            changes.get("marked", self.marked),
            changes.get("word", self.word),
            changes.get("extra", self.extra),
        )

    def grading(self) -> MultiGrading:
        """Maslov plus one doubled Alexander slot per component, in component order."""
        m = sum(V_MASLOV[s] for _, s in self.word)
        alex = dict.fromkeys(self.components, 0)
        for c, sym in self.extra:
            dm, da = W_GRADING[sym]
            m += dm
            alex[c] += da
        return MultiGrading(m, tuple(alex[c] for c in self.components))

    def __str__(self):
        parts = [f"{c}:{s}" for c, s in self.word] + [f"{c}:{s}" for c, s in self.extra]
        return f"<{self.marked}*|{' '.join(parts)}>"


Chain = frozenset  # F2 linear combination of ReducedTensors


def chain(*terms: ReducedTensor) -> frozenset:
    out: set = set()
    for t in terms:
        out ^= {t}
    return frozenset(out)


def linear(f: Callable[[ReducedTensor], Iterable[ReducedTensor]]):
    """Extend a map on basis tensors F2-linearly to chains."""

    def apply(x: frozenset, *args, **kwargs) -> frozenset:
        out: set = set()
        for t in x:
            for s in f(t, *args, **kwargs):
                out ^= {s}
        return frozenset(out)

    apply.__name__ = f.__name__
    apply.__doc__ = f.__doc__
    return apply


def unlink_basis(components, marked, extras: Mapping | None = None) -> list[ReducedTensor]:
    """All basis tensors; ``extras`` maps component -> number of extra pairs."""
    components = tuple(components)
    free = [c for c in components if c != marked]
    extra_slots = [c for c in components for _ in range((extras or {}).get(c, 0))]
    out = []
    for syms in itertools.product("TB", repeat=len(free)):
        word = tuple(zip(free, syms))
        for ws in itertools.product(("theta", "xi"), repeat=len(extra_slots)):
            out.append(ReducedTensor(components, marked, word, tuple(zip(extra_slots, ws))))
    return out


def unlink_module(components, marked, extras: Mapping | None = None) -> GradedModule:
    basis = unlink_basis(components, marked, extras)
    arity = len(tuple(components))
    return GradedModule(arity, tuple((str(t), t.grading()) for t in basis))


def _check_present(t: ReducedTensor, *cs):
    for c in cs:
        if c not in t.components:
            raise UnlinkError(f"component {c!r} not present")


def _extras_on(t: ReducedTensor, c) -> list[int]:
    return [i for i, (comp, _) in enumerate(t.extra) if comp == c]


@linear
def birth(t: ReducedTensor, new_component):
    """Unit: a new unknotted component carrying T."""
    if new_component in t.components:
        raise UnlinkError(f"component {new_component!r} already exists")
    yield ReducedTensor(t.components + (new_component,), t.marked, t.word + ((new_component, "T"),), t.extra)


@linear
def death(t: ReducedTensor, component):
    """Counit: B on the capped component survives, T dies."""
    _check_present(t, component)
    if component == t.marked:
        raise UnlinkError("cannot cap the marked component")
    if _extras_on(t, component):
        raise UnlinkError("cap a component only after destabilising its extra basepoints")
    if t.label(component) == "B":
        yield ReducedTensor(
            tuple(c for c in t.components if c != component),
            t.marked,
            tuple(p for p in t.word if p[0] != component),
            t.extra,
        )


@linear
def merge(t: ReducedTensor, a, b):
    """Merge component b into a (multiplication in F2[X]/(X^2), reduced at the marked component)."""
    _check_present(t, a, b)
    if a == b:
        raise UnlinkError("merge needs two distinct components")
    if b == t.marked:
        a, b = b, a
    keep = a
    comps = tuple(c for c in t.components if c != b)
    extra = tuple((keep if c == b else c, s) for c, s in t.extra)
    rest = tuple(p for p in t.word if p[0] not in (a, b))
    sb = t.label(b)
    if a == t.marked:
        if sb == "T":
            yield ReducedTensor(comps, t.marked, rest, extra)
        return
    sa = t.label(a)
    if sa == "B" and sb == "B":
        return
    prod = "T" if sa == sb == "T" else "B"
    yield ReducedTensor(comps, t.marked, rest + ((keep, prod),), extra)


@linear
def split(t: ReducedTensor, a, new):
    """Split a into (a, new): T -> T B + B T, B -> B B; marked a just deposits B on new."""
    _check_present(t, a)
    if new in t.components:
        raise UnlinkError(f"component {new!r} already exists")
    comps = t.components + (new,)
    if a == t.marked:
        yield ReducedTensor(comps, t.marked, t.word + ((new, "B"),), t.extra)
        return
    rest = tuple(p for p in t.word if p[0] != a)
    if t.label(a) == "B":
        yield ReducedTensor(comps, t.marked, rest + ((a, "B"), (new, "B")), t.extra)
    else:
        yield ReducedTensor(comps, t.marked, rest + ((a, "T"), (new, "B")), t.extra)
        yield ReducedTensor(comps, t.marked, rest + ((a, "B"), (new, "T")), t.extra)


@linear
def braid_action(
    t: ReducedTensor,
    transposition: tuple[int, int],
    strand_to_component: Mapping[int, Hashable],
    family_of: Mapping[int, Hashable] | None = None,
    marked_braid: str = "identity",
):
    """Swap the V factors on two adjacent strands of one cable family."""
    i, j = transposition
    if j != i + 1:
        raise UnlinkError(f"{transposition} is not an adjacent transposition")
    if family_of is not None and family_of[i] != family_of[j]:
        raise UnlinkError("strands belong to different cable families")
    ci, cj = strand_to_component[i], strand_to_component[j]
    _check_present(t, ci, cj)
    if t.marked in (ci, cj):
        if marked_braid == "identity":
            yield t
        elif marked_braid != "zero":
            raise UnlinkError(f"marked_braid must be identity or zero, got {marked_braid!r}")
        return
    labels = dict(t.word)
    labels[ci], labels[cj] = labels[cj], labels[ci]
    yield ReducedTensor(t.components, t.marked, tuple(labels.items()), t.extra)


@linear
def basepoint_move(t: ReducedTensor, component, twists: int = 0):
    """Moving basepoints around an unlink component acts as the identity."""
    _check_present(t, component)
    yield t


@linear
def quasi_stab(t: ReducedTensor, kind: str, component):
    """S+ inserts theta, T+ inserts xi; S- keeps xi, T- keeps theta (removing the last pair)."""
    _check_present(t, component)
    if kind == "S+":
        yield ReducedTensor(t.components, t.marked, t.word, t.extra + ((component, "theta"),))
        return
    if kind == "T+":
        yield ReducedTensor(t.components, t.marked, t.word, t.extra + ((component, "xi"),))
        return
    if kind not in KINDS:
        raise UnlinkError(f"unknown quasi-stabilization {kind!r}")
    slots = _extras_on(t, component)
    if not slots:
        raise UnlinkError(f"no extra basepoint pair on component {component!r} to remove")
    k = slots[-1]
    survivor = "xi" if kind == "S-" else "theta"
    if t.extra[k][1] == survivor:
        yield ReducedTensor(t.components, t.marked, t.word, t.extra[:k] + t.extra[k + 1 :])


@dataclass
class UnlinkOp:
    """A named map step, used to describe cobordism movies."""

    name: str
    args: tuple = ()
    kwargs: dict = field(default_factory=dict)

    def apply(self, x: frozenset) -> frozenset:
        return OPS[self.name](x, *self.args, **self.kwargs)


OPS = {
    "birth": birth,
    "death": death,
    "merge": merge,
    "split": split,
    "braid": braid_action,
    "basepoint_move": basepoint_move,
    "quasi_stab": quasi_stab,
}


def run_movie(x: frozenset, steps: Iterable[UnlinkOp]) -> frozenset:
    for step in steps:
        x = step.apply(x)
    return x


def grading_shift(op: Callable, t: ReducedTensor, *args, **kwargs) -> set[tuple[int, int]]:
    """(dM, total doubled dA) over all output terms; a singleton for homogeneous maps."""
    g0 = t.grading()
    out = set()
    for s in op(chain(t), *args, **kwargs):
        g1 = s.grading()
        out.add((g1.maslov - g0.maslov, sum(g1.alex) - sum(g0.alex)))
    return out
