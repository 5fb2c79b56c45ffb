"""
Grid diagrams and the tilde flavour of grid homology over F2.

Conventions
-----------
* Row ``r`` carries an O marker in column ``o_perm[r]`` and an X marker in
  column ``x_perm[r]``.  Markers sit at cell centres ``(col + 1/2, row + 1/2)``.
* O markers play the role of w basepoints and X markers of z basepoints.
* A state is a permutation ``s``: the point on vertical line ``i`` is at
  height ``s[i]``.
* Maslov grading is the O-grading, normalised so that the top generator of
  the grid homology of a diagram with only O markers sits in degree 0.
* The Alexander grading of component ``c`` is ``J(x - (X+O)/2, X_c - O_c)``,
  without the usual ``-(n_c - 1)/2`` correction.  Every extra marker pair
  then contributes a factor with gradings (0, +1/2) and (-1, -1/2), which is
  the symmetric normalisation used for extra basepoints elsewhere in the
  package.

Up to these conventions the homology is the link Floer homology of the link
with one (w, z) pair per marker pair.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .f2 import F2Matrix, F2Vector, rank_bits
from .graded import GradedModule, MultiGrading, factor_out, w_factor_gradings
from .laurent import LaurentMV

MAX_GRID_SIZE = 8


class GridError(ValueError):
    pass


class NotAPermutation(GridError):
    pass


class MarkerCollision(GridError):
    pass


class MalformedFile(GridError):
    pass


@dataclass(frozen=True)
class GridDiagram:
    n: int
    o_perm: tuple[int, ...]
    x_perm: tuple[int, ...]
    component_of_row: tuple[int, ...] = ()
    # Orientation: horizontal segments run O -> X, vertical segments X -> O,
    # vertical strands pass over horizontal ones.
    orientation: str = "horizontal O->X, vertical X->O, vertical over"

    def __post_init__(self):
        n = self.n
        for name, perm in (("O", self.o_perm), ("X", self.x_perm)):
            if len(perm) != n or sorted(perm) != list(range(n)):
                raise NotAPermutation(f"{name}={list(perm)} is not a permutation of 0..{n - 1}")
        if n >= 2:
            for r in range(n):
                if self.o_perm[r] == self.x_perm[r]:
                    raise MarkerCollision(f"O and X share cell (col {self.o_perm[r]}, row {r})")
        traced = trace_components(self.o_perm, self.x_perm)
        if not self.component_of_row:
            object.__setattr__(self, "component_of_row", traced)
        else:
            comp = tuple(self.component_of_row)
            if len(comp) != n:
                raise MalformedFile(f"components line has {len(comp)} labels, expected {n}")
            # labels must induce exactly the traced partition of rows
            pairs = set(zip(traced, comp))
            if len({a for a, _ in pairs}) != len(pairs) or len({b for _, b in pairs}) != len(pairs):
                raise GridError(f"component labels {list(comp)} disagree with traced components {list(traced)}")
            if sorted(set(comp)) != list(range(len(set(comp)))):
                raise GridError("component labels must be 0..l-1")
            object.__setattr__(self, "component_of_row", comp)

    @property
    def n_components(self) -> int:
        return len(set(self.component_of_row))

    def marker_pairs(self) -> list[int]:
        """Number of (O, X) pairs on each component."""
        counts = [0] * self.n_components
        for c in self.component_of_row:
            counts[c] += 1
        return counts

    def to_text(self) -> str:
        return (
            f"n {self.n}\n"
            f"O {' '.join(map(str, self.o_perm))}\n"
            f"X {' '.join(map(str, self.x_perm))}\n"
            f"components {' '.join(map(str, self.component_of_row))}\n"
        )


def trace_components(o_perm, x_perm) -> tuple[int, ...]:
    """Label rows by link component, numbering components by their lowest row."""
    n = len(o_perm)
    o_row_of_col = [0] * n
    for r, c in enumerate(o_perm):
        o_row_of_col[c] = r
    label = [-1] * n
    k = 0
    for start in range(n):
        if label[start] >= 0:
            continue
        r = start
        while label[r] < 0:
            label[r] = k
            # horizontal O->X in row r, then vertical X->O in column x_perm[r]
            r = o_row_of_col[x_perm[r]]
        k += 1
    return tuple(label)


def parse_grid(text: str) -> GridDiagram:
    """Parse the four-line grid format (``n``, ``O``, ``X``, optional ``components``)."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if len(lines) not in (3, 4):
        raise MalformedFile(f"expected 3 or 4 lines, got {len(lines)}")
    expected = ["n", "O", "X", "components"]
    fields = []
    for lineno, (line, key) in enumerate(zip(lines, expected), start=1):
        parts = line.split()
        if not parts or parts[0] != key:
            raise MalformedFile(f"line {lineno}: expected '{key} ...', got {line!r}")
        try:
            values = [int(p) for p in parts[1:]]
        except ValueError:
            raise MalformedFile(f"line {lineno}: non-integer entry in {line!r}") from None
        fields.append(values)
    if len(fields[0]) != 1:
        raise MalformedFile("line 1: expected a single integer")
    n = fields[0][0]
    if n < 1:
        raise MalformedFile("line 1: grid size must be positive")
    for lineno in (2, 3):
        if len(fields[lineno - 1]) != n:
            raise MalformedFile(f"line {lineno}: expected {n} entries, got {len(fields[lineno - 1])}")
        if any(v < 0 or v >= n for v in fields[lineno - 1]):
            raise NotAPermutation(f"line {lineno}: entries must lie in 0..{n - 1}")
        if len(set(fields[lineno - 1])) != n:
            raise NotAPermutation(f"line {lineno}: repeated column index")
    for r, (o, x) in enumerate(zip(fields[1], fields[2])):
        if o == x and n >= 2:
            raise MarkerCollision(f"lines 2-3: O and X share column {o} in row {r}")
    comps = tuple(fields[3]) if len(fields) == 4 else ()
    return GridDiagram(n, tuple(fields[1]), tuple(fields[2]), comps)


def load_grid(path) -> GridDiagram:
    return parse_grid(Path(path).read_text())


DATA_DIR = Path(__file__).resolve().parent / "data"


def builtin_grid(name: str) -> GridDiagram:
    """Grids shipped with the package: unknot, unlink2, unlink3, trefoil, figure8, l2."""
    return load_grid(DATA_DIR / f"{name}.grid")


# --------------------------------------------------------------------------
# grid moves (used for invariance checks)


def cyclic_shift(g: GridDiagram, dcol: int = 0, drow: int = 0) -> GridDiagram:
    n = g.n
    o = [0] * n
    x = [0] * n
    comp = [0] * n
    for r in range(n):
        r2 = (r + drow) % n
        o[r2] = (g.o_perm[r] + dcol) % n
        x[r2] = (g.x_perm[r] + dcol) % n
        comp[r2] = g.component_of_row[r]
    return GridDiagram(n, tuple(o), tuple(x), tuple(comp))


def commute_columns(g: GridDiagram, c: int) -> GridDiagram:
    """Swap columns c and c+1; allowed when their vertical segments do not interleave."""
    n = g.n
    if not 0 <= c < n - 1:
        raise GridError("column index out of range")
    seg = []
    for col in (c, c + 1):
        rows = (g.o_perm.index(col), g.x_perm.index(col))
        seg.append((min(rows), max(rows)))
    (a1, b1), (a2, b2) = seg
    interleaved = (a1 < a2 < b1 < b2) or (a2 < a1 < b2 < b1)
    if interleaved:
        raise GridError(f"columns {c},{c + 1} interleave; commutation not allowed")
    swap = {c: c + 1, c + 1: c}
    o = tuple(swap.get(v, v) for v in g.o_perm)
    x = tuple(swap.get(v, v) for v in g.x_perm)
    return GridDiagram(n, o, x, g.component_of_row)


def stabilize(g: GridDiagram, row: int) -> GridDiagram:
    """Replace the X in ``row`` by a 2x2 block (X, X on the antidiagonal, O in the corner)."""
    n = g.n
    c = g.x_perm[row]

    def col(v):
        return v + 1 if v > c else v

    o, x, comp = [], [], []
    for r in range(n):
        if r == row:
            o.append(col(g.o_perm[r]))
            x.append(c + 1)
            comp.append(g.component_of_row[r])
            o.append(c + 1)
            x.append(c)
            comp.append(g.component_of_row[r])
        else:
            o.append(col(g.o_perm[r]))
            x.append(col(g.x_perm[r]))
            comp.append(g.component_of_row[r])
    return GridDiagram(n + 1, tuple(o), tuple(x), tuple(comp))


# --------------------------------------------------------------------------
# states and gradings


def _count_table(n: int, markers: list[tuple[int, int]], point_first: bool) -> np.ndarray:
    """table[i, h] = #{markers q : point (i, h) is SW of q}  (point_first)
    or #{markers q : q is SW of point (i, h)} (not point_first).

    Markers are given as cell indices (col, row) and sit at (col+1/2, row+1/2).
    """
    t = np.zeros((n, n), dtype=np.int64)
    for mc, mr in markers:
        for i in range(n):
            for h in range(n):
                if point_first:
                    if i <= mc and h <= mr:
                        t[i, h] += 1
                elif mc < i and mr < h:
                    t[i, h] += 1
    return t


def _marker_I(p: list[tuple[int, int]], q: list[tuple[int, int]]) -> int:
    return sum(1 for a in p for b in q if a[0] < b[0] and a[1] < b[1])


@dataclass
class GridComplex:
    """Generators, gradings and the tilde differential of a grid diagram."""

    grid: GridDiagram
    states: np.ndarray  # (N, n) permutations
    maslov: np.ndarray  # (N,)
    alex: np.ndarray  # (N, l) doubled, symmetric normalisation
    targets: list[list[int]] = field(default_factory=list)

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {tuple(s): k for k, s in enumerate(self.states.tolist())}

    def grading(self, k: int) -> MultiGrading:
        return MultiGrading(int(self.maslov[k]), tuple(int(a) for a in self.alex[k]))

    def matrix(self) -> F2Matrix:
        """Row k holds the support of the boundary of generator k."""
        N = len(self.states)
        return F2Matrix(N, N, tuple(F2Vector.from_support(t) for t in self.targets))

    def blocks(self) -> dict[MultiGrading, list[int]]:
        out: dict[MultiGrading, list[int]] = defaultdict(list)
        for k in range(len(self.states)):
            out[self.grading(k)].append(k)
        return dict(out)

    def d_squared_is_zero(self) -> bool:
        for k, tk in enumerate(self.targets):
            acc = 0
            for j in tk:
                for m in self.targets[j]:
                    acc ^= 1 << m
            if acc:
                return False
        return True

    def grading_audit(self) -> list[tuple[int, int]]:
        """Differential entries that do not drop M by one or that move A."""
        bad = []
        for k, tk in enumerate(self.targets):
            for j in tk:
                if self.maslov[j] != self.maslov[k] - 1 or not np.array_equal(self.alex[j], self.alex[k]):
                    bad.append((k, j))
        return bad


def enumerate_states(n: int) -> np.ndarray:
    if n > MAX_GRID_SIZE:
        raise GridError(f"grid size {n} exceeds supported maximum {MAX_GRID_SIZE}")
    return np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)


def state_gradings(g: GridDiagram, states: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = g.n
    O = [(g.o_perm[r], r) for r in range(n)]
    X = [(g.x_perm[r], r) for r in range(n)]
    cols = np.arange(n)

    # I(x, x): pairs i < j with s[i] < s[j]
    Ixx = np.zeros(len(states), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            Ixx += states[:, i] < states[:, j]

    def I_xP(P):
        return _count_table(n, P, True)[cols, states].sum(axis=1)

    def I_Px(P):
        return _count_table(n, P, False)[cols, states].sum(axis=1)

    maslov = Ixx - I_xP(O) - I_Px(O) + _marker_I(O, O) + 1

    ell = g.n_components
    alex = np.zeros((len(states), ell), dtype=np.int64)
    XO = X + O
    for c in range(ell):
        Oc = [O[r] for r in range(n) if g.component_of_row[r] == c]
        Xc = [X[r] for r in range(n) if g.component_of_row[r] == c]
        four_a = 2 * (I_xP(Xc) + I_Px(Xc) - I_xP(Oc) - I_Px(Oc))
        const = (
            _marker_I(XO, Xc) + _marker_I(Xc, XO) - _marker_I(XO, Oc) - _marker_I(Oc, XO)
        )
        four_a = four_a - const
        if np.any(four_a % 2):
            raise GridError("non-half-integral Alexander grading; convention bug")
        alex[:, c] = four_a // 2
    return maslov, alex


def maslov_grading(g: GridDiagram, s) -> int:
    m, _ = state_gradings(g, np.asarray([s], dtype=np.int64))
    return int(m[0])


def alexander_grading(g: GridDiagram, s) -> tuple[int, ...]:
    """Doubled per-component Alexander grading of a single state."""
    _, a = state_gradings(g, np.asarray([s], dtype=np.int64))
    return tuple(int(v) for v in a[0])


def _marker_prefix(g: GridDiagram) -> np.ndarray:
    """2D prefix sums of marker counts on a doubled torus (2n x 2n cells)."""
    n = g.n
    cells = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for r in range(n):
        for c in (g.o_perm[r], g.x_perm[r]):
            for dc in (0, n):
                for dr in (0, n):
                    cells[c + dc, r + dr] += 1
    pre = np.zeros((2 * n + 1, 2 * n + 1), dtype=np.int64)
    pre[1:, 1:] = cells.cumsum(0).cumsum(1)
    return pre


def _rect_markers(pre, c0, w, r0, h) -> int:
    c1, r1 = c0 + w, r0 + h
    return int(pre[c1, r1] - pre[c0, r1] - pre[c1, r0] + pre[c0, r0])


def tilde_differential(g: GridDiagram) -> GridComplex:
    """Build the complex: boundary counts empty rectangles avoiding every marker."""
    n = g.n
    states = enumerate_states(n)
    maslov, alex = state_gradings(g, states)
    cx = GridComplex(g, states, maslov, alex)
    index = cx.index
    pre = _marker_prefix(g).tolist()
    targets = []
    for s in states.tolist():
        out = []
        for i in range(n):
            for j in range(i + 1, n):
                for a, b in ((i, j), (j, i)):
                    w = (b - a) % n
                    h1, h2 = s[a], s[b]
                    h = (h2 - h1) % n
                    if h == 0:
                        continue
                    c1, r1 = a + w, h1 + h
                    if pre[c1][r1] - pre[a][r1] - pre[c1][h1] + pre[a][h1]:
                        continue
                    empty = True
                    for t in range(1, w):
                        col = (a + t) % n
                        if 0 < (s[col] - h1) % n < h:
                            empty = False
                            break
                    if not empty:
                        continue
                    y = list(s)
                    y[i], y[j] = y[j], y[i]
                    out.append(index[tuple(y)])
        targets.append(out)
    cx.targets = targets
    return cx


def empty_rectangles_avoiding(g: GridDiagram, s, avoid: str = "OX") -> list[tuple[int, ...]]:
    """States reachable from ``s`` by an empty rectangle avoiding the given marker types."""
    n = g.n
    marks = []
    if "O" in avoid:
        marks += [(g.o_perm[r], r) for r in range(n)]
    if "X" in avoid:
        marks += [(g.x_perm[r], r) for r in range(n)]
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            for a, b in ((i, j), (j, i)):
                w = (b - a) % n
                h1, h = s[a], (s[b] - s[a]) % n
                if (h == 0) or any(
                    0 <= (mc - a) % n < w and 0 <= (mr - h1) % n < h for mc, mr in marks
                ):
                    continue
                if any(0 < (s[(a + t) % n] - h1) % n < h for t in range(1, w)):
                    continue
                y = list(s)
                y[i], y[j] = y[j], y[i]
                out.append(tuple(y))
    return out


# --------------------------------------------------------------------------
# homology


def block_homology(cx: GridComplex) -> dict[MultiGrading, int]:
    blocks = cx.blocks()
    position: dict[int, int] = {}
    for gr, members in blocks.items():
        for pos, k in enumerate(members):
            position[k] = pos
    ranks: dict[MultiGrading, int] = {}
    for gr, members in blocks.items():
        rows = []
        for k in members:
            bits = 0
            for j in cx.targets[k]:
                bits ^= 1 << position[j]
            rows.append(bits)
        ranks[gr] = rank_bits(rows)  # rank of d leaving this block
    dims = {}
    for gr, members in blocks.items():
        above = MultiGrading(gr.maslov + 1, gr.alex)
        d = len(members) - ranks[gr] - ranks.get(above, 0)
        if d:
            dims[gr] = d
    return dims


def homology(g: GridDiagram, cx: GridComplex | None = None) -> GradedModule:
    cx = cx or tilde_differential(g)
    return GradedModule.from_dims(block_homology(cx), g.n_components, prefix="h")


def extract_hfl(
    g: GridDiagram,
    basepoint_pairs: list[int] | None = None,
    hom: GradedModule | None = None,
) -> GradedModule:
    """Divide out the extra-marker factors, leaving ``basepoint_pairs[c]`` pairs on component c.

    Default is one pair per component, i.e. the ordinary link Floer homology.
    """
    hom = hom or homology(g)
    pairs = g.marker_pairs()
    want = basepoint_pairs or [1] * len(pairs)
    if len(want) != len(pairs):
        raise GridError(f"basepoint_pairs has {len(want)} entries, link has {len(pairs)} components")
    out = hom
    for c, (have, keep) in enumerate(zip(pairs, want)):
        if not 1 <= keep <= have:
            raise GridError(f"component {c}: cannot keep {keep} of {have} marker pairs")
        out = factor_out(out, w_factor_gradings(g.n_components, c), have - keep, prefix="v")
    return out


def euler_characteristic(g: GridDiagram, cx: GridComplex | None = None) -> LaurentMV:
    """Sum over generators of (-1)^M x^A, exponents doubled."""
    if cx is None:
        states = enumerate_states(g.n)
        maslov, alex = state_gradings(g, states)
    else:
        maslov, alex = cx.maslov, cx.alex
    terms: dict[tuple[int, ...], int] = defaultdict(int)
    for m, a in zip(maslov.tolist(), alex.tolist()):
        terms[tuple(a)] += -1 if m % 2 else 1
    return LaurentMV(g.n_components, terms)


def module_euler(mod: GradedModule) -> LaurentMV:
    terms: dict[tuple[int, ...], int] = defaultdict(int)
    for _, gr in mod.basis:
        terms[gr.alex] += -1 if gr.maslov % 2 else 1
    return LaurentMV(mod.alex_arity, terms)


def expected_euler(g: GridDiagram, alexander: LaurentMV) -> LaurentMV:
    """Alexander polynomial times the factor contributed by the extra marker pairs.

    For links with two or more components the link Floer homology carries one
    additional (x^{1/2} - x^{-1/2}) per component.
    """
    ell = g.n_components
    out = alexander
    for c, k in enumerate(g.marker_pairs()):
        power = k - 1 + (1 if ell >= 2 else 0)
        out = out * LaurentMV.half_difference(c, ell) ** power
    return out
