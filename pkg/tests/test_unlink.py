
import pytest
from hypothesis import given
import hypothesis.strategies as st

from floer_lasagna.graded import MultiGrading
from floer_lasagna.grid import builtin_grid, homology, stabilize
from floer_lasagna.unlink import (
    ReducedTensor,
    UnlinkError,
    UnlinkOp,
    basepoint_move,
    birth,
    braid_action,
    chain,
    death,
    grading_shift,
    merge,
    quasi_stab,
    run_movie,
    split,
    unlink_basis,
    unlink_module,
)

ZERO = frozenset()


def rt(word, comps=None, marked="m", extra=()):
    comps = comps or ("m",) + tuple(c for c, _ in word)
    return ReducedTensor(tuple(comps), marked, tuple(word), tuple(extra))


def basis_words(max_free=3):
    for k in range(max_free + 1):
        comps = ("m",) + tuple(f"c{i}" for i in range(k))
        yield from unlink_basis(comps, "m")


def test_reduced_tensor_invariants():
    with pytest.raises(UnlinkError):
        ReducedTensor(("a", "b"), "c", (("a", "T"),))
    with pytest.raises(UnlinkError):
        ReducedTensor(("a", "b"), "a", ())
    t = rt([("b", "B")], extra=[("a", "xi")], comps=("a", "b"), marked="a")
    assert t.grading() == MultiGrading(-2, (-1, 0))


# -- death / birth ---------------------------------------------------------------


def test_death_formula():
    v = rt([("a", "T")])
    assert death(chain(rt([("a", "T"), ("b", "B")])), "b") == chain(v)
    assert death(chain(rt([("a", "T"), ("b", "T")])), "b") == ZERO
    both = chain(rt([("a", "T"), ("b", "T")]), rt([("a", "T"), ("b", "B")]))
    assert death(both, "b") == chain(v)


def test_death_of_marked_is_an_error():
    with pytest.raises(UnlinkError):
        death(chain(rt([("a", "T")])), "m")


def test_birth_inserts_unit():
    u = rt([], comps=("m",))
    out = birth(chain(u), "n")
    assert out == chain(rt([("n", "T")]))
    assert next(iter(out)).grading().maslov == u.grading().maslov
    with pytest.raises(UnlinkError):
        birth(chain(u), "m")


def test_death_after_birth_vanishes():
    for t in basis_words(2):
        assert death(birth(chain(t), "new"), "new") == ZERO


# -- merge / split -------------------------------------------------------------


@pytest.mark.parametrize(
    "sa, sb, out",
    [("T", "T", "T"), ("T", "B", "B"), ("B", "T", "B"), ("B", "B", None)],
)
def test_merge_table(sa, sb, out):
    res = merge(chain(rt([("a", sa), ("b", sb)])), "a", "b")
    assert res == (ZERO if out is None else chain(rt([("a", out)], comps=("m", "a"))))


def test_merge_into_marked():
    assert merge(chain(rt([("a", "T")])), "m", "a") == chain(rt([], comps=("m",)))
    assert merge(chain(rt([("a", "B")])), "m", "a") == ZERO
    # argument order does not matter
    assert merge(chain(rt([("a", "T")])), "a", "m") == chain(rt([], comps=("m",)))


def test_split_formulas():
    assert split(chain(rt([("a", "B")])), "a", "n") == chain(rt([("a", "B"), ("n", "B")]))
    assert split(chain(rt([("a", "T")])), "a", "n") == chain(
        rt([("a", "T"), ("n", "B")]), rt([("a", "B"), ("n", "T")])
    )
    assert split(chain(rt([], comps=("m",))), "m", "n") == chain(rt([("n", "B")]))


def test_merge_after_split_is_zero():
    for t in basis_words(3):
        for a in [c for c in t.components if c != t.marked]:
            assert merge(split(chain(t), a, "n"), a, "n") == ZERO


def test_death_after_split_is_identity():
    for t in basis_words(3):
        for a in [c for c in t.components if c != t.marked]:
            assert death(split(chain(t), a, "n"), "n") == chain(t)


def test_merge_commutative_and_associative():
    comps = ("m", "a", "b", "c")
    for t in unlink_basis(comps, "m"):
        x = chain(t)
        assert merge(x, "a", "b") == _rename(merge(x, "b", "a"), "b", "a")
        left = merge(merge(x, "a", "b"), "a", "c")
        right = merge(merge(x, "b", "c"), "a", "b")
        assert left == right


def _rename(x, old, new):
    out = set()
    for t in x:
        comps = tuple(new if c == old else c for c in t.components)
        word = tuple((new if c == old else c, s) for c, s in t.word)
        out ^= {ReducedTensor(comps, t.marked, word, t.extra)}
    return frozenset(out)


# -- braid / basepoint ----------------------------------------------------------


def test_braid_swaps_factors():
    x = chain(rt([("a", "T"), ("b", "B")]))
    out = braid_action(x, (1, 2), {1: "a", 2: "b"})
    assert out == chain(rt([("a", "B"), ("b", "T")]))
    assert braid_action(out, (1, 2), {1: "a", 2: "b"}) == x


def test_braid_with_marked_strand():
    x = chain(rt([("a", "B")]))
    assert braid_action(x, (1, 2), {1: "m", 2: "a"}) == x
    assert braid_action(x, (1, 2), {1: "m", 2: "a"}, marked_braid="zero") == ZERO


def test_braid_rejects_mixed_families():
    x = chain(rt([("a", "T"), ("b", "B")]))
    with pytest.raises(UnlinkError):
        braid_action(x, (1, 2), {1: "a", 2: "b"}, family_of={1: "+", 2: "-"})


@given(st.integers(-5, 5), st.integers(-5, 5))
def test_basepoint_move_is_identity(k1, k2):
    x = chain(*unlink_basis(("m", "a", "b"), "m")[:3])
    assert basepoint_move(basepoint_move(x, "a", k1), "a", k2) == basepoint_move(x, "a", k1 + k2) == x


# -- quasi-stabilisations ------------------------------------------------------------


def test_six_stabilization_formulas():
    v = rt([("a", "B")])
    th = rt([("a", "B")], extra=[("a", "theta")])
    xi = rt([("a", "B")], extra=[("a", "xi")])
    assert quasi_stab(chain(v), "S+", "a") == chain(th)
    assert quasi_stab(chain(th), "S-", "a") == ZERO
    assert quasi_stab(chain(xi), "S-", "a") == chain(v)
    assert quasi_stab(chain(v), "T+", "a") == chain(xi)
    assert quasi_stab(chain(th), "T-", "a") == chain(v)
    assert quasi_stab(chain(xi), "T-", "a") == ZERO


def test_destabilization_needs_an_extra_pair():
    with pytest.raises(UnlinkError):
        quasi_stab(chain(rt([("a", "B")])), "S-", "a")


def test_stabilization_gradings():
    v = rt([("a", "T")])
    assert grading_shift(quasi_stab, v, "T+", "a") == {(-1, -1)}
    assert grading_shift(quasi_stab, v, "S+", "a") == {(0, 1)}


@given(st.lists(st.sampled_from(["birth", "split", "braid", "S+", "T+"]), max_size=4),
       st.sampled_from(["S", "T"]), st.randoms())
def test_closed_disk_composites_vanish(prefix, letter, rnd):
    comps = ("m", "a", "b")
    x = chain(*unlink_basis(comps, "m"))
    fresh = iter(f"f{i}" for i in range(10))
    for step in prefix:
        free = sorted({c for t in x for c in t.components if c != "m"})
        if step == "birth":
            x = birth(x, next(fresh))
        elif step == "split":
            x = split(x, rnd.choice(free), next(fresh))
        elif step == "braid":
            a, b = rnd.sample(free, 2)
            x = braid_action(x, (1, 2), {1: a, 2: b})
        else:
            x = quasi_stab(x, step, rnd.choice(free + ["m"]))
    target = rnd.choice(sorted({c for t in x for c in t.components}))
    y = quasi_stab(quasi_stab(x, f"{letter}+", target), f"{letter}-", target)
    assert y == ZERO


def test_every_op_has_constant_shift():
    shifts = {
        "split": lambda t: grading_shift(split, t, "a", "n"),
        "death": lambda t: grading_shift(death, t, "a"),
        "birth": lambda t: grading_shift(birth, t, "n"),
    }
    expected = {"split": (-1, 0), "death": (1, 0), "birth": (0, 0)}
    for name, fn in shifts.items():
        seen = set()
        for t in unlink_basis(("m", "a", "b"), "m"):
            seen |= fn(t)
        assert seen == {expected[name]}, name
    seen = set()
    for t in unlink_basis(("m", "a", "b"), "m"):
        seen |= grading_shift(merge, t, "a", "b")
    assert seen == {(0, 0)}


def test_movie_runner():
    x = chain(rt([("a", "T")]))
    steps = [UnlinkOp("split", ("a", "n")), UnlinkOp("death", ("n",))]
    assert run_movie(x, steps) == x


# -- agreement with grid homology -----------------------------------------------


@pytest.mark.parametrize(
    "name, stab_rows",
    [
        ("unknot", []),
        ("unknot", [0]),
        ("unknot", [0, 0]),
        ("unlink2", []),
        ("unlink2", [0]),
        ("unlink2", [0, 3]),
        ("unlink3", []),
        ("unlink3", [0]),
        ("unlink3", [0, 3]),
    ],
)
def test_tensor_space_matches_unlink_grid(name, stab_rows):
    g = builtin_grid(name)
    for r in stab_rows:
        g = stabilize(g, r)
    comps = tuple(range(g.n_components))
    extras = {c: k - 1 for c, k in enumerate(g.marker_pairs())}  # each extra pair is one W factor
    model = unlink_module(comps, 0, extras)
    assert model.same_dims(homology(g))
