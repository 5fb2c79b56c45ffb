"""
Cabled link Floer homology of the 0-framed unknot with empty boundary link.

Level (k+, k-) is the unlink of k = k+ + k- parallel copies of the unknot,
with homology V^{(k-1)} shifted up by k.  The colimit identifies elements
across levels by braid symmetrisation and the two pair-of-pants relations
(``v ~ split(v (x) B)`` and ``0 ~ split(v (x) T)``).  We truncate at
k+ + k- <= N and watch the quotient stabilise as N grows.
"""

from __future__ import annotations

import warnings
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .f2 import F2Vector, quotient_dim
from .graded import GradedModule, v_module, tensor, shift
from .unlink import ReducedTensor, braid_action, chain, split


class GradingViolation(RuntimeError):
    """A generated relation is not homogeneous; indicates a shift-table bug."""


class NonMonotonicInstability(UserWarning):
    pass


@dataclass(frozen=True, order=True)
class CableLevel:
    k_plus: int
    k_minus: int

    def __post_init__(self):
        if self.k_plus < 0 or self.k_minus < 0:
            raise ValueError("cable counts must be nonnegative")

    @property
    def alpha(self) -> int:
        return self.k_plus - self.k_minus

    @property
    def total(self) -> int:
        return self.k_plus + self.k_minus

    def components(self) -> tuple[str, ...]:
        return tuple(f"p{i}" for i in range(1, self.k_plus + 1)) + tuple(
            f"n{i}" for i in range(1, self.k_minus + 1)
        )

    def marked(self) -> str:
        # One marked copy per alpha sector, so pants maps never re-mark.
        return "p1" if self.alpha >= 0 else "n1"


def level_module(level: CableLevel) -> GradedModule:
    """V^{(k-1)} shifted up by k, Alexander collapsed to one vanishing slot."""
    if level.total < 1:
        raise ValueError("level (0,0) is handled separately (see bridge_zero_level)")
    mod = GradedModule.unit(1)
    for _ in range(level.total - 1):
        mod = tensor(mod, v_module(1))
    return shift(mod, level.total, (0,))


def level_basis(level: CableLevel) -> list[ReducedTensor]:
    comps = level.components()
    marked = level.marked()
    free = [c for c in comps if c != marked]
    out = []
    for mask in range(1 << len(free)):
        word = tuple((c, "B" if (mask >> i) & 1 else "T") for i, c in enumerate(free))
        out.append(ReducedTensor(comps, marked, word))
    return out


@dataclass
class Relation:
    tag: str  # braid | pants_B | pants_T | basepoint | bridge | vanishing
    vector: F2Vector
    alpha: int
    maslov: int


@dataclass
class CabledPresentation:
    truncation: int
    levels: list[CableLevel]
    offsets: dict[CableLevel, int]
    basis: list[tuple[CableLevel, ReducedTensor | None]]
    gradings: list[tuple[int, int]]  # (alpha, M) per basis index
    relations: list[Relation] = field(default_factory=list)
    excluded: dict[str, int] = field(default_factory=lambda: defaultdict(int))
    bridge_zero_level: bool = False
    marked_braid: str = "identity"

    @property
    def dim(self) -> int:
        return len(self.basis)

    def tag_counts(self) -> dict[str, int]:
        out: dict[str, int] = defaultdict(int)
        for r in self.relations:
            out[r.tag] += 1
        return dict(out)


def _levels(N: int, bridge_zero_level: bool) -> list[CableLevel]:
    out = [CableLevel(a, b) for a in range(N + 1) for b in range(N + 1 - a) if a + b >= 1]
    if bridge_zero_level:
        out.insert(0, CableLevel(0, 0))
    return sorted(out, key=lambda l: (l.total, l.k_plus))


def _element_maslov(level: CableLevel, t: ReducedTensor | None) -> int:
    if t is None:
        return 0
    return t.grading().maslov + level.total


def enumerate_relations(
    N: int,
    bridge_zero_level: bool = False,
    marked_braid: str = "identity",
    alphas: set[int] | None = None,
) -> CabledPresentation:
    if N < 1:
        raise ValueError("truncation must be at least 1")
    levels = _levels(N, bridge_zero_level)
    if alphas is not None:
        levels = [l for l in levels if l.alpha in alphas]
    basis: list = []
    gradings: list = []
    offsets: dict = {}
    index: dict = {}
    for lvl in levels:
        offsets[lvl] = len(basis)
        elems = [None] if lvl.total == 0 else level_basis(lvl)
        for t in elems:
            index[(lvl, t)] = len(basis)
            basis.append((lvl, t))
            gradings.append((lvl.alpha, _element_maslov(lvl, t)))
    p = CabledPresentation(N, levels, offsets, basis, gradings,
                           bridge_zero_level=bridge_zero_level, marked_braid=marked_braid)
    present = set(levels)

    def add(tag, src_idx, targets):
        bits = 0 if src_idx is None else 1 << src_idx
        for j in targets:
            bits ^= 1 << j
        if not bits:
            return
        v = F2Vector(bits)
        gs = {gradings[i] for i in v.support}
        if len(gs) != 1:
            if tag == "bridge":
                p.excluded["bridge_nonhomogeneous"] += 1
                return
            raise GradingViolation(f"{tag} relation mixes gradings {sorted(gs)}")
        (alpha, m), = gs
        p.relations.append(Relation(tag, v, alpha, m))

    for lvl in levels:
        up = CableLevel(lvl.k_plus + 1, lvl.k_minus + 1)
        for t in ([None] if lvl.total == 0 else level_basis(lvl)):
            src = index[(lvl, t)]
            if t is None:
                # empty cable: the only pants candidate is splitting the marked unknot
                if up in present:
                    target = ReducedTensor(up.components(), up.marked(), (("n1", "B"),))
                    add("bridge", src, [index[(up, target)]])
                else:
                    p.excluded["bridge"] += 1
                continue

            # braid relations within each sign family
            for fam, count in (("p", lvl.k_plus), ("n", lvl.k_minus)):
                s2c = {i: f"{fam}{i}" for i in range(1, count + 1)}
                for i in range(1, count):
                    img = braid_action(chain(t), (i, i + 1), s2c, marked_braid=marked_braid)
                    add("braid", src, [index[(lvl, s)] for s in img])

            # basepoint moving is the identity on unlinks: v ~ v, nothing to add
            p.excluded["basepoint_vacuous"] += 1

            # pants relations land one level up
            if up not in present:
                p.excluded["pants_B"] += 1
                p.excluded["pants_T"] += 1
                continue
            new_p, new_n = f"p{up.k_plus}", f"n{up.k_minus}"
            for sym, tag in (("B", "pants_B"), ("T", "pants_T")):
                with_u = ReducedTensor(t.components + (new_p,), t.marked, t.word + ((new_p, sym),))
                img = split(chain(with_u), new_p, new_n)
                targets = [index[(up, _canonical(up, s))] for s in img]
                add(tag, src if tag == "pants_B" else None, targets)
    return p


def _canonical(level: CableLevel, t: ReducedTensor) -> ReducedTensor:
    labels = dict(t.word)
    comps = level.components()
    return ReducedTensor(comps, level.marked(), tuple((c, labels[c]) for c in comps if c != level.marked()))


def inject_vanishing(p: CabledPresentation) -> CabledPresentation:
    """Add v ~ 0 for every generator (the pants map factors through a zero map)."""
    for i, (a, m) in enumerate(p.gradings):
        p.relations.append(Relation("vanishing", F2Vector(1 << i), a, m))
    return p


def truncated_quotient(p: CabledPresentation) -> dict[int, dict[int, int]]:
    """{alpha: {M: dim}} of the quotient, blockwise per (alpha, M)."""
    blocks: dict[tuple[int, int], list[int]] = defaultdict(list)
    for i, g in enumerate(p.gradings):
        blocks[g].append(i)
    rels: dict[tuple[int, int], list[F2Vector]] = defaultdict(list)
    for r in p.relations:
        rels[(r.alpha, r.maslov)].append(r.vector)
    out: dict[int, dict[int, int]] = defaultdict(dict)
    for g, members in blocks.items():
        pos = {i: k for k, i in enumerate(members)}
        local = [F2Vector.from_support(pos[i] for i in v.support) for v in rels.get(g, [])]
        d = quotient_dim(len(members), local)
        if d:
            out[g[0]][g[1]] = d
    return {a: dict(sorted(ms.items())) for a, ms in sorted(out.items())}


def _quotient_for(args) -> dict[int, dict[int, int]]:
    N, bridge, marked_braid, alphas = args
    return truncated_quotient(enumerate_relations(N, bridge, marked_braid, alphas))


@dataclass
class StabilizationReport:
    truncations: list[int]
    alphas: list[int]
    dims: dict[int, dict[int, list[int]]]  # alpha -> M -> dims per N
    stable: dict[int, dict[int, int]]  # alpha -> M -> dim, where last two N agree
    profiles: dict[int, dict]  # alpha -> shape analysis
    bridge_zero_level: bool
    marked_braid: str

    def matches_expected_profile(self) -> bool:
        return all(pr["matches"] for pr in self.profiles.values())

    def to_json(self) -> dict:
        return {
            "truncations": self.truncations,
            "bridge_zero_level": self.bridge_zero_level,
            "marked_braid": self.marked_braid,
            "sectors": [
                {
                    "alpha": a,
                    "truncations": self.truncations,
                    "dims": {str(m): ds for m, ds in sorted(self.dims[a].items(), reverse=True)},
                    "stable": {str(m): d for m, d in sorted(self.stable[a].items(), reverse=True)},
                    "profile": self.profiles[a],
                }
                for a in self.alphas
            ],
        }


def _profile(dims: dict[int, list[int]], window: int = 3) -> dict:
    """Compare the sector against one copy of F2 per grading, step -1, bounded above."""
    last = {m: ds[-1] for m, ds in dims.items() if ds[-1]}
    prev = {m: ds[-2] for m, ds in dims.items() if len(ds) > 1 and ds[-2]}
    if not last:
        return {"matches": False, "reason": "empty sector"}
    top = max(last)
    top_prev = max(prev) if prev else None
    win = list(range(top, top - window - 1, -1))
    stable_window = all(len(dims.get(m, [0])) > 1 and dims[m][-1] == dims[m][-2] for m in win if m in dims)
    one_dim = all(last.get(m, 0) == 1 for m in win)
    bounded = top_prev == top
    return {
        "top_grading": top,
        "top_grading_previous_truncation": top_prev,
        "offset_from_zero": top,
        "window": win,
        "stable_in_window": stable_window,
        "one_dimensional_step_minus_one": one_dim,
        "bounded_above": bounded,
        "support": sorted(last, reverse=True),
        "matches": stable_window and one_dim and bounded,
    }


def stabilization_report(
    N_list: list[int],
    alphas: list[int] | None = None,
    bridge_zero_level: bool = False,
    marked_braid: str = "identity",
    jobs: int = 1,
) -> StabilizationReport:
    if not N_list:
        raise ValueError("need at least one truncation")
    if any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise ValueError("truncations must be strictly increasing")
    alpha_set = set(alphas) if alphas is not None else None
    work = [(N, bridge_zero_level, marked_braid, alpha_set) for N in N_list]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_quotient_for, work))
    else:
        results = [_quotient_for(w) for w in work]
    if alphas is None:
        alphas = sorted({a for r in results for a in r})
    dims: dict[int, dict[int, list[int]]] = {}
    stable: dict[int, dict[int, int]] = {}
    profiles: dict[int, dict] = {}
    for a in alphas:
        ms = sorted({m for r in results for m in r.get(a, {})}, reverse=True)
        dims[a] = {m: [r.get(a, {}).get(m, 0) for r in results] for m in ms}
        stable[a] = {m: ds[-1] for m, ds in dims[a].items() if len(ds) > 1 and ds[-1] == ds[-2]}
        for m, ds in dims[a].items():
            rising = any(x < y for x, y in zip(ds, ds[1:]))
            falling = any(x > y for x, y in zip(ds, ds[1:]))
            if rising and falling:
                warnings.warn(f"alpha={a}, M={m}: non-monotone dims {ds}", NonMonotonicInstability)
        profiles[a] = _profile(dims[a])
    return StabilizationReport(list(N_list), list(alphas), dims, stable, profiles, bridge_zero_level, marked_braid)
