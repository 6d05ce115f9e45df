"""Plane-tree realization: profile round trips, rewrite surgeries, exports."""

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from belyi_forge import F1, F3, CriticalProfile, seed_profile, validate_profile
from belyi_forge.tree_realization import (
    PlaneTree,
    RealizationError,
    apply_letter_tree,
    check_tree,
    derive_tree,
    export_dot,
    export_json_adjacency,
    parse_dot,
    profile_of,
    realize_profile,
    tree_from_json,
    tree_state_matches,
)
from belyi_forge.word_engine import (
    T13Letter,
    enumerate_LE,
    trajectory,
    word_from_str,
)


def small_valid_profiles():
    def build(black, white):
        black = tuple(black)
        white = tuple(white)
        d = sum(black) + sum(white) + 1
        assume(d <= 40)
        b_leaves = d - sum(m + 1 for m in black)
        w_leaves = d - sum(m + 1 for m in white)
        assume(b_leaves >= 0 and w_leaves >= 0)
        return CriticalProfile(black, white, b_leaves, w_leaves)

    mults = st.lists(st.integers(min_value=1, max_value=7), min_size=0, max_size=5)
    return st.builds(build, mults, mults)


@settings(max_examples=200)
@given(small_valid_profiles())
def test_realize_then_read_back_is_identity(p):
    t = realize_profile(p)
    check_tree(t)
    assert profile_of(t) == p


@settings(max_examples=100)
@given(small_valid_profiles())
def test_realized_tree_shape(p):
    t = realize_profile(p)
    assert t.vertex_count == p.degree + 1
    assert t.edge_count == p.degree
    for v, u in t.edges():
        assert t.colors[v] != t.colors[u]


def test_realize_rejects_invalid_profile():
    broken = CriticalProfile((2,), (2,), 5, 0)
    assert not validate_profile(broken).ok
    with pytest.raises(RealizationError):
        realize_profile(broken)


SEEDS = [F1(0, 1), F1(1, 1), F1(0, 2), F3(2, 1, 1, 1, 0)]


@pytest.mark.parametrize("seed", SEEDS, ids=repr)
def test_tree_rewrites_commute_with_profile_rewrites(seed):
    """Replaying a word by tree surgery gives the same profile trajectory
    as the profile-level engine, for every admissible short word."""
    for word in enumerate_LE(seed, 6):
        states = trajectory(seed, word)
        assert tree_state_matches(seed, word, states[-1]), word
        t = derive_tree(seed, word)
        check_tree(t)
        assert profile_of(t) == states[-1].profile


def test_single_surgery_matches_engine_step():
    seed = F1(1, 1)
    t = derive_tree(seed, ())
    site = next(
        v
        for v in range(t.vertex_count)
        if t.colors[v] == "white" and t.degree(v) == 1
    )
    t2 = apply_letter_tree(t, T13Letter.ALPHA, site)
    s2 = trajectory(seed, word_from_str("a", seed))[-1]
    assert profile_of(t2) == s2.profile


def test_surgery_site_validation():
    t = derive_tree(F1(0, 1), ())
    black = next(v for v in range(t.vertex_count) if t.colors[v] == "black")
    with pytest.raises(RealizationError):
        apply_letter_tree(t, T13Letter.ALPHA, black)
    with pytest.raises(RealizationError):
        apply_letter_tree(t, T13Letter.BETA, black)
    with pytest.raises(RealizationError):
        apply_letter_tree(t, T13Letter.ALPHA, t.vertex_count)
    # beta with no pending simple white anywhere
    white_leaf = next(
        v
        for v in range(t.vertex_count)
        if t.colors[v] == "white" and t.degree(v) == 1
    )
    with pytest.raises(RealizationError):
        apply_letter_tree(t, T13Letter.BETA, white_leaf)


def test_check_tree_rejects_malformed_inputs():
    with pytest.raises(RealizationError):
        check_tree(PlaneTree(colors=(), rotation=()))
    with pytest.raises(RealizationError):
        check_tree(
            PlaneTree(colors=("black", "black"), rotation=((1,), (0,)))
        )
    with pytest.raises(RealizationError):
        check_tree(
            PlaneTree(colors=("black", "white"), rotation=((1,), ()))
        )
    # cycle: 4 vertices in a square
    with pytest.raises(RealizationError):
        check_tree(
            PlaneTree(
                colors=("black", "white", "black", "white"),
                rotation=((1, 3), (0, 2), (1, 3), (2, 0)),
            )
        )


@pytest.mark.parametrize("seed", SEEDS, ids=repr)
def test_dot_round_trip(seed):
    t = derive_tree(seed, ())
    text = export_dot(t)
    back = parse_dot(text)
    assert back.colors == t.colors
    assert back.rotation == t.rotation


def test_json_round_trip():
    t = derive_tree(F1(1, 1), word_from_str("ab", F1(1, 1)))
    back = tree_from_json(export_json_adjacency(t))
    assert back == t


def test_derived_tree_grows_by_word_length():
    seed = F1(0, 1)
    base = derive_tree(seed, ())
    grown = derive_tree(seed, word_from_str("abab", seed))
    # each letter adds one hub plus nu fresh leaves
    assert grown.vertex_count == base.vertex_count + 4 * 3
    assert grown.edge_count == base.edge_count + 4 * 3
