"""
Lasagna fillings with decorated surfaces, their gradings, and the B^4 evaluation.

Surfaces are stored combinatorially: pieces of Sigma_w / Sigma_z with their
Euler characteristics, the dividing arcs between them, and the boundary
circles with their basepoint counts.  Gluing pieces along an open arc
subtracts 1 from the Euler characteristic; closed dividing circles subtract 0.

Gradings of a filling F with inputs v_i:
    M(F) = chi(Sigma_w) + sum M(v_i)
    2 A(F) = chi(Sigma_w) - chi(Sigma_z) + sum 2 A(v_i)
The B^4 evaluation lands in link Floer homology of the outer link, whose
grading is M(F) - |w_out| (the outer link's w-strips are not counted there).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .graded import MultiGrading
from .obstruction import CobordismGradingData, alexander_shift, maslov_shift
from .unlink import ReducedTensor, UnlinkOp, run_movie


class InhomogeneousInput(ValueError):
    pass


class GradingDrift(AssertionError):
    pass


class NotComputable(ValueError):
    pass


@dataclass(frozen=True)
class Piece:
    kind: str  # "w" or "z"
    euler: int
    boundary_arcs: tuple[tuple[str, int], ...] = ()  # (circle id, segments on it)
    arcs: tuple[str, ...] = ()  # adjacent dividing arcs / circles
    twist: int = 0


@dataclass(frozen=True)
class Arc:
    id: str
    endpoints: tuple[str, ...] = ()  # two circle ids, or empty for a closed circle

    @property
    def closed(self) -> bool:
        return not self.endpoints


@dataclass(frozen=True)
class BoundaryCircle:
    id: str
    component: str
    side: Union[str, int]  # "outer" or an input ball index
    w_count: int = 1
    z_count: int = 1


@dataclass(frozen=True)
class DecoratedSurface:
    pieces: tuple[Piece, ...] = ()
    arcs: tuple[Arc, ...] = ()
    boundaries: tuple[BoundaryCircle, ...] = ()
    euler: int | None = None

    def chi(self, kind: str) -> int:
        return sum(p.euler for p in self.pieces if p.kind == kind)

    def glued_euler(self) -> int:
        return sum(p.euler for p in self.pieces) - sum(1 for a in self.arcs if not a.closed)

    def w_out(self) -> int:
        return sum(c.w_count for c in self.boundaries if c.side == "outer")


Element = Union[MultiGrading, frozenset]


@dataclass(frozen=True)
class FillingInput:
    ball: int
    link: str  # "unlink" or free-form description
    circles: tuple[str, ...]
    element: Element


@dataclass(frozen=True)
class LasagnaFilling:
    inputs: tuple[FillingInput, ...] = ()
    surface: DecoratedSurface = DecoratedSurface()
    homology_class: tuple[int, ...] = ()
    collar: tuple[UnlinkOp, ...] = ()


# --------------------------------------------------------------------------
# validation


def validate(f: LasagnaFilling) -> list[str]:
    """Every violated invariant, as a list of messages (empty means ok)."""
    s = f.surface
    bad: list[str] = []
    circles = {c.id: c for c in s.boundaries}
    if len(circles) != len(s.boundaries):
        bad.append("duplicate boundary circle ids")
    arcs = {a.id: a for a in s.arcs}
    for p in s.pieces:
        if p.kind not in ("w", "z"):
            bad.append(f"piece kind {p.kind!r} is neither w nor z")
        for cid, _ in p.boundary_arcs:
            if cid not in circles:
                bad.append(f"piece touches unknown circle {cid!r}")
        for aid in p.arcs:
            if aid not in arcs:
                bad.append(f"piece touches unknown arc {aid!r}")
        if p.boundary_arcs and p.euler > 1:
            bad.append(f"piece with boundary has euler {p.euler} > 1")

    # each dividing arc separates a w piece from a z piece
    for a in s.arcs:
        kinds = sorted(p.kind for p in s.pieces for x in p.arcs if x == a.id)
        if kinds != ["w", "z"]:
            bad.append(f"arc {a.id!r} borders pieces {kinds}, expected one w and one z")
        if not a.closed and (len(a.endpoints) != 2 or any(e not in circles for e in a.endpoints)):
            bad.append(f"arc {a.id!r} needs two endpoints on boundary circles")

    # basepoints alternate and each boundary segment holds exactly one of them
    for c in s.boundaries:
        if c.w_count != c.z_count:
            bad.append(f"circle {c.id!r}: w and z counts differ")
        ends = sum(a.endpoints.count(c.id) for a in s.arcs)
        if ends != c.w_count + c.z_count:
            bad.append(f"circle {c.id!r}: {ends} arc endpoints for {c.w_count + c.z_count} basepoints")
        for kind, want in (("w", c.w_count), ("z", c.z_count)):
            got = sum(n for p in s.pieces if p.kind == kind for cid, n in p.boundary_arcs if cid == c.id)
            if got != want:
                bad.append(f"circle {c.id!r}: {got} {kind}-segments but {want} {kind} basepoints")

    if s.euler is not None and s.euler != s.glued_euler():
        bad.append(f"stated euler {s.euler} != glued euler {s.glued_euler()}")

    balls = [i.ball for i in f.inputs]
    if len(set(balls)) != len(balls):
        bad.append("duplicate input ball ids")
    for inp in f.inputs:
        on_surface = {c.id for c in s.boundaries if c.side == inp.ball}
        if on_surface != set(inp.circles):
            bad.append(f"input ball {inp.ball}: circles {sorted(inp.circles)} != surface {sorted(on_surface)}")
        if isinstance(inp.element, frozenset):
            for t in inp.element:
                if len(t.components) != len(inp.circles):
                    bad.append(f"input ball {inp.ball}: tensor has {len(t.components)} components")
                    break
    for c in s.boundaries:
        if c.side != "outer" and c.side not in balls:
            bad.append(f"circle {c.id!r} sits on missing input ball {c.side!r}")
    return bad


# --------------------------------------------------------------------------
# gradings


def element_grading(e: Element) -> MultiGrading:
    """Single-slot grading of a homogeneous input (Alexander slots summed)."""
    if isinstance(e, MultiGrading):
        return MultiGrading(e.maslov, (sum(e.alex),))
    gs = {t.grading() for t in e}
    gs = {MultiGrading(g.maslov, (sum(g.alex),)) for g in gs}
    if len(gs) != 1:
        raise InhomogeneousInput(f"input is not homogeneous: {sorted(g.key() for g in gs)}")
    return gs.pop()


def maslov(f: LasagnaFilling) -> int:
    return f.surface.chi("w") + sum(element_grading(i.element).maslov for i in f.inputs)


def alexander(f: LasagnaFilling) -> int:
    """Doubled Alexander grading."""
    s = f.surface
    return s.chi("w") - s.chi("z") + sum(element_grading(i.element).alex[0] for i in f.inputs)


def gradings(f: LasagnaFilling) -> tuple[int, int, tuple[int, ...]]:
    return maslov(f), alexander(f), tuple(f.homology_class)


# --------------------------------------------------------------------------
# constructors


def identity_filling(element: Element, n_components: int = 1, w_per_component: int = 1) -> LasagnaFilling:
    """Product surface L x I over a single input ball."""
    pieces, arcs, circles = [], [], []
    for c in range(n_components):
        out_id, in_id = f"o{c}", f"i{c}"
        circles += [
            BoundaryCircle(out_id, f"L{c}", "outer", w_per_component, w_per_component),
            BoundaryCircle(in_id, f"L{c}", 0, w_per_component, w_per_component),
        ]
        k = 2 * w_per_component
        ids = [f"a{c}_{j}" for j in range(k)]
        arcs += [Arc(a, (out_id, in_id)) for a in ids]
        for j in range(k):
            kind = "w" if j % 2 == 0 else "z"
            pieces.append(
                Piece(kind, 1, ((out_id, 1), (in_id, 1)), (ids[j], ids[(j + 1) % k]))
            )
    inp = FillingInput(0, "unlink", tuple(f"i{c}" for c in range(n_components)), element)
    surf = DecoratedSurface(tuple(pieces), tuple(arcs), tuple(circles))
    return LasagnaFilling((inp,), surf, ())


def model_filling(k_plus, k_minus, v: Element) -> LasagnaFilling:
    """Cable copies capped by disks, each split by a diameter into a w and a z half."""
    kp = [k_plus] if isinstance(k_plus, int) else list(k_plus)
    km = [k_minus] if isinstance(k_minus, int) else list(k_minus)
    if len(kp) != len(km):
        raise ValueError("k_plus and k_minus must have one entry per handle")
    pieces, arcs, circles, names = [], [], [], []
    for h, (a, b) in enumerate(zip(kp, km)):
        for sign, count in (("p", a), ("n", b)):
            for j in range(1, count + 1):
                name = f"{sign}{j}" if len(kp) == 1 else f"h{h}{sign}{j}"
                cid, aid = f"c_{name}", f"d_{name}"
                names.append(cid)
                circles.append(BoundaryCircle(cid, name, 0, 1, 1))
                arcs.append(Arc(aid, (cid, cid)))
                pieces.append(Piece("w", 1, ((cid, 1),), (aid,)))
                pieces.append(Piece("z", 1, ((cid, 1),), (aid,)))
    inputs = (FillingInput(0, "unlink", tuple(names), v),) if names else ()
    if not names:
        # no cables: the filling is just the input element
        inputs = (FillingInput(0, "empty", (), v),)
    surf = DecoratedSurface(tuple(pieces), tuple(arcs), tuple(circles))
    cls = tuple(a - b for a, b in zip(kp, km))
    return LasagnaFilling(inputs, surf, cls)


# --------------------------------------------------------------------------
# equivalence moves


@dataclass(frozen=True)
class AbsorptionMove:
    """Absorb a ball W' (containing some input balls) into a single new input.

    ``cuts`` gives, per piece index, (euler of the part inside W', number of
    arcs along which the boundary of W' cuts that piece).  Each cut arc of a
    w piece carries one w basepoint of the new input link, likewise for z.
    """

    absorbed: tuple[int, ...]
    cuts: tuple[tuple[int, int, int], ...]  # (piece index, inner euler, cut arcs)

    def grading_data(self, f: LasagnaFilling) -> CobordismGradingData:
        s = f.surface
        chi = {"w": 0, "z": 0}
        new = {"w": 0, "z": 0}
        for idx, inner, n_cut in self.cuts:
            kind = s.pieces[idx].kind
            chi[kind] += inner
            new[kind] += n_cut
        if new["w"] != new["z"]:
            raise ValueError("the new input link must carry equally many w and z basepoints")
        w_in = sum(c.w_count for c in s.boundaries if c.side in self.absorbed)
        J = len(self.absorbed)
        return CobordismGradingData(chi["w"], chi["z"], w_in, new["w"], 0, 1 - J, 0, J, 1)


@dataclass
class AuditResult:
    before: tuple[int, int, tuple[int, ...]]
    after: tuple[int, int, tuple[int, ...]]
    new_input: MultiGrading

    @property
    def unchanged(self) -> bool:
        return self.before == self.after


def equivalence_move_audit(f: LasagnaFilling, move: AbsorptionMove | CobordismGradingData) -> AuditResult:
    """Regrade the filling after absorbing part of it into a new input ball."""
    if isinstance(move, CobordismGradingData):
        d = move
        absorbed: tuple[int, ...] = ()
        if d.n_in_spheres != 0 or d.w1_count != 0:
            raise ValueError("bare grading data can only describe a ball with no inputs inside")
    else:
        d = move.grading_data(f)
        absorbed = move.absorbed
    known = {i.ball for i in f.inputs}
    if not set(absorbed) <= known:
        raise ValueError(f"absorbed balls {absorbed} not all inputs of the filling")
    s = f.surface
    w_new = d.w2_count
    chi_w = s.chi("w") - d.chi_w + w_new
    chi_z = s.chi("z") - d.chi_z + w_new
    inside = [element_grading(i.element) for i in f.inputs if i.ball in absorbed]
    outside = [element_grading(i.element) for i in f.inputs if i.ball not in absorbed]
    new_m = sum(g.maslov for g in inside) + maslov_shift(d)
    new_a = sum(g.alex[0] for g in inside) + alexander_shift(d)
    m_after = chi_w + new_m + sum(g.maslov for g in outside)
    a_after = chi_w - chi_z + new_a + sum(g.alex[0] for g in outside)
    res = AuditResult(gradings(f), (m_after, a_after, tuple(f.homology_class)), MultiGrading(new_m, (new_a,)))
    if not res.unchanged:
        raise GradingDrift(f"gradings moved from {res.before} to {res.after}")
    return res


def random_move(f: LasagnaFilling, rng: random.Random) -> AbsorptionMove:
    """A random absorption move whose w and z cut counts balance."""
    balls = [i.ball for i in f.inputs]
    absorbed = tuple(b for b in balls if rng.random() < 0.5)
    cuts = []
    for idx, p in enumerate(f.surface.pieces):
        if rng.random() < 0.6:
            cuts.append([idx, rng.randint(-2, 1), rng.randint(0, 3)])
    w = sum(c[2] for c in cuts if f.surface.pieces[c[0]].kind == "w")
    z = sum(c[2] for c in cuts if f.surface.pieces[c[0]].kind == "z")
    # top up whichever side is short so |w'| = |z'|
    if w != z:
        short = "w" if w < z else "z"
        idxs = [i for i, p in enumerate(f.surface.pieces) if p.kind == short]
        if not idxs:
            cuts = []
        else:
            cuts.append([idxs[0], 0, abs(w - z)])
    return AbsorptionMove(absorbed, tuple(tuple(c) for c in cuts))


# --------------------------------------------------------------------------
# evaluation over B^4


def has_closed_disk(f: LasagnaFilling, kind: str = "w") -> bool:
    """A piece that is a disk bounded only by a closed dividing circle."""
    arcs = {a.id: a for a in f.surface.arcs}
    for p in f.surface.pieces:
        if p.kind == kind and p.euler == 1 and not p.boundary_arcs:
            if p.arcs and all(arcs[a].closed for a in p.arcs):
                return True
    return False


def b4_evaluate(f: LasagnaFilling) -> frozenset:
    """Push the input through the collar movie; returns an F2 chain of unlink tensors."""
    if f.homology_class:
        raise NotComputable("only fillings of B^4 (no handles) are evaluated")
    if len(f.inputs) != 1:
        raise NotComputable("expected exactly one input ball")
    inp = f.inputs[0]
    if inp.link != "unlink" or not isinstance(inp.element, frozenset):
        raise NotComputable("input is not an unlink tensor")
    # basepoint twists act trivially on unlinks, so piece.twist is ignored here
    if has_closed_disk(f, "w"):
        return frozenset()
    return run_movie(inp.element, f.collar)


def evaluated_grading(f: LasagnaFilling) -> int:
    """Maslov grading of the evaluation image predicted from the filling."""
    return maslov(f) - f.surface.w_out()


# --------------------------------------------------------------------------
# JSON


def _element_to_json(e: Element):
    if isinstance(e, MultiGrading):
        return {"grading": {"maslov": e.maslov, "alex": list(e.alex)}}
    return {
        "chain": [
            {
                "components": list(t.components),
                "marked": t.marked,
                "word": {c: s for c, s in t.word},
                "extra": [list(x) for x in t.extra],
            }
            for t in sorted(e, key=str)
        ]
    }


def _element_from_json(d) -> Element:
    if "grading" in d:
        g = d["grading"]
        return MultiGrading(int(g["maslov"]), tuple(int(a) for a in g.get("alex", [0])))
    if "chain" in d:
        out = set()
        for t in d["chain"]:
            rt = ReducedTensor(
                tuple(t["components"]),
                t["marked"],
                tuple(t.get("word", {}).items()),
                tuple(tuple(x) for x in t.get("extra", [])),
            )
            out ^= {rt}
        return frozenset(out)
    raise ValueError(f"unrecognised element {d!r}")


def to_json(f: LasagnaFilling) -> dict:
    s = f.surface
    out = {
        "inputs": [
            {"ball": i.ball, "link": i.link, "circles": list(i.circles), "element": _element_to_json(i.element)}
            for i in f.inputs
        ],
        "surface": {
            "pieces": [
                {"kind": p.kind, "euler": p.euler, "boundary_arcs": [list(b) for b in p.boundary_arcs],
                 "arcs": list(p.arcs), **({"twist": p.twist} if p.twist else {})}
                for p in s.pieces
            ],
            "arcs": [{"id": a.id, "endpoints": list(a.endpoints)} for a in s.arcs],
            "boundaries": [
                {"id": c.id, "component": c.component, "side": c.side, "w_count": c.w_count, "z_count": c.z_count}
                for c in s.boundaries
            ],
        },
        "class": list(f.homology_class),
    }
    if s.euler is not None:
        out["surface"]["euler"] = s.euler
    if f.collar:
        out["collar"] = [{"op": op.name, "args": list(op.args), "kwargs": op.kwargs} for op in f.collar]
    return out


def from_json(d: dict) -> LasagnaFilling:
    try:
        sd = d["surface"]
        pieces = tuple(
            Piece(p["kind"], int(p["euler"]), tuple((b[0], int(b[1])) for b in p.get("boundary_arcs", [])),
                  tuple(p.get("arcs", [])), int(p.get("twist", 0)))
            for p in sd.get("pieces", [])
        )
        arcs = tuple(Arc(a["id"], tuple(a.get("endpoints", []))) for a in sd.get("arcs", []))
        circles = tuple(
            BoundaryCircle(c["id"], c["component"], c["side"], int(c.get("w_count", 1)), int(c.get("z_count", 1)))
            for c in sd.get("boundaries", [])
        )
        inputs = tuple(
            FillingInput(int(i["ball"]), i.get("link", "unlink"), tuple(i.get("circles", [])),
                         _element_from_json(i["element"]))
            for i in d.get("inputs", [])
        )
        collar = tuple(
            UnlinkOp(c["op"], tuple(c.get("args", [])), dict(c.get("kwargs", {}))) for c in d.get("collar", [])
        )
        surf = DecoratedSurface(pieces, arcs, circles, sd.get("euler"))
        return LasagnaFilling(inputs, surf, tuple(int(x) for x in d.get("class", [])), collar)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"filling JSON does not match the schema: {exc!r}") from None


def load_filling(path) -> LasagnaFilling:
    return from_json(json.loads(Path(path).read_text()))
