"""Rewriting words: admissibility language, step bounds, catalogued families."""

import math

import pytest

from belyi_forge import F1, F2, F3, seed_profile, seed_triple
from belyi_forge.word_engine import (
    AlphabetMismatchError,
    NoFamilyRecordedError,
    WordEngineError,
    alternating_word,
    enumerate_LE,
    is_E_admissible,
    max_h,
    paper_word_families,
    trajectory,
    word_from_str,
    word_to_str,
)

T13_SEEDS = [F1(0, 1), F1(1, 1), F1(2, 1), F1(0, 3), F3(2, 1, 1, 1, 0), F3(3, -1, 0, 2, 0)]
T2_SEEDS = [F2(0, 1, 1, 1), F2(0, 1, 2, 3), F2(1, 1, 1, 1), F2(1, 0, 0, 1)]


@pytest.mark.parametrize("seed", T13_SEEDS + T2_SEEDS, ids=repr)
def test_enumeration_prefix_closed(seed):
    words = enumerate_LE(seed, 5)
    pool = set(words)
    assert () in pool
    for w in words:
        for cut in range(len(w)):
            assert w[:cut] in pool, (word_to_str(w), cut)


def test_enumeration_deterministic():
    a = enumerate_LE(F2(0, 1, 1, 1), 6)
    b = enumerate_LE(F2(0, 1, 1, 1), 6)
    assert a == b
    lengths = [len(w) for w in a]
    assert lengths == sorted(lengths)


@pytest.mark.parametrize("seed", T13_SEEDS, ids=repr)
def test_degree_and_count_closure_alternating_alphabet(seed):
    t = seed_triple(seed)
    base = seed_profile(seed)
    n_minus1_0 = base.count_black(t.nu)
    for w in enumerate_LE(seed, 6):
        h = len(w)
        s = trajectory(seed, w)[-1].stats()
        assert s.d == t.d0 + h * (t.nu + 1), word_to_str(w)
        assert s.n_minus1 == n_minus1_0 + h, word_to_str(w)
        expected_plus = 1 + (h // 2 if t.nu == 2 else 0)
        assert s.n_plus1 == expected_plus, word_to_str(w)


def test_base_seed_language_is_alternating_chain():
    words = [word_to_str(w) for w in enumerate_LE(F1(0, 1), 8)]
    assert words == [
        "",
        "a",
        "ab",
        "aba",
        "abab",
        "ababa",
        "ababab",
        "abababa",
        "abababab",
    ]


def test_bounded_seed_longest_word():
    words = enumerate_LE(F1(1, 1), 10)
    assert max(len(w) for w in words) == 4
    assert word_from_str("abab", F1(1, 1)) in words


@pytest.mark.parametrize("seed", T13_SEEDS + T2_SEEDS, ids=repr)
def test_zero_length_enumeration(seed):
    assert enumerate_LE(seed, 0) == [()]


def test_max_h_frozen_values():
    assert max_h(F1(1, 1)) == 4
    assert max_h(F3(2, 1, 2, 1, 0)) == 10
    assert max_h(F1(0, 1)) == math.inf
    with pytest.raises(WordEngineError):
        max_h(F2(0, 1, 1, 1))


def test_max_h_first_family_closed_form():
    for n in range(0, 5):
        for m in range(1, 5):
            if (n, m) == (0, 1):
                continue
            assert max_h(F1(n, m)) == 3 * (n + m) - 2, (n, m)


def alternating_seeds_with_finite_bound():
    seeds = [F1(n, m) for n in range(0, 4) for m in range(1, 4) if (n, m) != (0, 1)]
    for x in (1, 2, 3):
        for j in (-1, 0, 1):
            for m in (1, 2):
                if 3 * m + j < 4:
                    continue
                seeds.append(F3(x, j, 1, m, 0))
    return seeds


@pytest.mark.parametrize("seed", alternating_seeds_with_finite_bound(), ids=repr)
def test_alternating_words_pass_exactly_to_the_bound(seed):
    bound = max_h(seed)
    assert bound >= 0
    assert is_E_admissible(seed, alternating_word(bound))
    assert not is_E_admissible(seed, alternating_word(bound + 1))


def test_unbounded_seed_runs_very_long():
    assert is_E_admissible(F1(0, 1), alternating_word(200))


def test_word_string_round_trip():
    w = word_from_str("abab", F1(0, 1))
    assert word_to_str(w) == "abab"
    v = word_from_str("BggAdD", F2(0, 1, 1, 1))
    assert word_to_str(v) == "BggAdD"
    with pytest.raises(AlphabetMismatchError):
        word_from_str("ab", F2(0, 1, 1, 1))
    with pytest.raises(AlphabetMismatchError):
        word_from_str("Bg", F1(0, 1))
    with pytest.raises(WordEngineError):
        word_from_str("xyz", F1(0, 1))


FAMILY_SEEDS = [
    F1(0, 1),
    F1(1, 2),
    F3(2, 1, 1, 1, 0),
    F2(0, 1, 1, 1),
    F2(0, 2, 1, 1),
    F2(0, 1, 2, 2),
    F2(0, 1, 2, 3),
    F2(1, 1, 1, 1),
    F2(1, 2, 1, 3),
]


@pytest.mark.parametrize("seed", FAMILY_SEEDS, ids=repr)
def test_catalogued_families_are_admissible(seed):
    words = paper_word_families(seed, limit=8)
    assert words
    for w in words:
        assert is_E_admissible(seed, w), (seed, word_to_str(w))


def test_families_are_a_sublanguage():
    seed = F2(0, 1, 1, 1)
    fam = set(paper_word_families(seed))
    assert fam
    pool = set(enumerate_LE(seed, max(len(w) for w in fam)))
    assert fam <= pool


def test_no_family_for_trivial_seed():
    with pytest.raises(NoFamilyRecordedError):
        paper_word_families(F2(1, 0, 0, 0))


def test_degree_123_coincidence():
    seed = F2(0, 2, 1, 1)
    fam = {word_to_str(w): trajectory(seed, w)[-1] for w in paper_word_families(seed)}
    assert "BggggggggA" in fam and "BggAgggggg" in fam
    states = [fam["BggggggggA"], fam["BggAgggggg"]]
    assert all(s.stats().d == 123 for s in states)
    assert all(s.stats().n_minus1 == 12 for s in states)


def test_degree_126_coincidence():
    seed = F2(0, 2, 1, 1)
    fam = {word_to_str(w): trajectory(seed, w)[-1] for w in paper_word_families(seed)}
    for text in ["BggggggggAA", "BggAggggggA", "BggAgggAggg"]:
        assert text in fam, text
        assert fam[text].stats().d == 126, text


@pytest.mark.parametrize("n", [1, 2, 3])
def test_series_matches_closed_form_lattice(n):
    """Every catalogued word's final (d, N) solves d = d0+(3m+k)nu+3m,
    N = 3+3m+k with integers m, k >= 0, and the top degree is 2nu(nu+1)."""
    seed = F2(0, n, 1, 1)
    t = seed_triple(seed)
    assert t.d0 == 12 * n + 15
    degrees = set()
    for w in paper_word_families(seed):
        s = trajectory(seed, w)[-1].stats()
        degrees.add(s.d)
        three_m = s.d - t.d0 - (s.n_minus1 - 3) * t.nu
        assert three_m >= 0 and three_m % 3 == 0, word_to_str(w)
        assert s.n_minus1 - 3 - three_m // 3 >= 0, word_to_str(w)
    assert max(degrees) == 2 * t.nu * (t.nu + 1)


def test_growth_chain_first_family():
    seed = F1(1, 1)
    states = trajectory(seed, word_from_str("ab", seed))
    stats = [s.stats() for s in states]
    assert [s.d for s in stats] == [21, 27, 33]
    assert [s.n_minus1 for s in stats] == [3, 4, 5]
    assert all(s.nu == 5 for s in stats)


@pytest.mark.parametrize("n", range(0, 6))
def test_growth_chain_second_family(n):
    seed = F2(1, n, 0, 1)
    states = trajectory(seed, word_from_str("dB", seed))
    degrees = [s.stats().d for s in states]
    assert degrees == [15 * n + 21, 15 * n + 24, 18 * n + 27]


def test_trajectory_prefix_consistency():
    seed = F2(0, 1, 1, 1)
    word = word_from_str("BggD", seed)
    states = trajectory(seed, word)
    assert len(states) == 5
    for i, st in enumerate(states):
        assert st.word == word[:i]
        assert st.satisfies_E()


def test_inadmissible_word_detected():
    # Too many alternating letters for a bounded seed.
    assert not is_E_admissible(F1(1, 1), alternating_word(5))
    # Letters from the wrong alphabet refuse to apply.
    with pytest.raises(WordEngineError):
        trajectory(F1(0, 1), word_from_str("Bg", F2(0, 1, 1, 1)))
