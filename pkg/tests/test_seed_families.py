"""Seed families: domains, frozen starting data, and coincidence identities."""

import pytest

from belyi_forge import (
    F1,
    F2,
    F3,
    SeedDomainError,
    condition_E,
    format_seed,
    parse_seed,
    seed_from_json,
    seed_profile,
    seed_to_json,
    seed_triple,
    validate_profile,
    verify_coincidences,
)
from belyi_forge.seed_families import seed_satisfies_E


def parameter_grid(bound: int = 6):
    """Every seed with all parameters at most ``bound``, within the domains."""
    for n in range(0, bound + 1):
        for m in range(1, bound + 1):
            yield F1(n, m)
    for n in range(1, bound + 1):
        for m in range(1, bound + 1):
            for l in range(m, bound + 1):
                yield F2(0, n, m, l)
    for n in range(0, bound + 1):
        for m in range(0, bound + 1):
            for l in range(m, bound + 1):
                yield F2(1, n, m, l)
    for x in (1, 2, 3):
        for j in (-1, 0, 1):
            for n in range(0, bound + 1):
                for m in range(1, bound + 1):
                    if 3 * m + j < 4:
                        continue
                    l_values = [0] if m == 1 else range(0, m - 1)
                    for l in l_values:
                        yield F3(x, j, n, m, l)


GRID = list(parameter_grid())


def test_grid_is_nontrivial():
    assert len(GRID) == 1330


def test_every_grid_seed_profile_validates():
    for seed in GRID:
        report = validate_profile(seed_profile(seed))
        assert report.ok, (seed, report.violations)


def test_every_grid_seed_satisfies_admissibility():
    for seed in GRID:
        assert seed_satisfies_E(seed), seed


def test_grid_degrees_divisible_by_three():
    for seed in GRID:
        assert seed_triple(seed).d0 % 3 == 0, seed


def test_grid_eps_below_nu():
    for seed in GRID:
        t = seed_triple(seed)
        assert t.eps < t.nu, seed


def test_triple_consistent_with_profile():
    for seed in GRID[::7]:
        t = seed_triple(seed)
        p = seed_profile(seed)
        assert p.degree == t.d0
        assert condition_E(t.d0, t.nu, p.count_black(t.nu), p.count_white(t.nu))


FROZEN_TRIPLES = {
    F1(0, 1): (9, 2, 0),
    F1(1, 1): (21, 5, 0),
    F1(2, 3): (141, 14, 0),
    F2(0, 1, 1, 1): (27, 6, 2),
    F2(0, 2, 1, 3): (153, 15, 2),
    F2(1, 0, 0, 0): (3, 1, 0),
    F2(1, 2, 1, 2): (108, 13, 3),
    F3(2, 1, 1, 1, 0): (33, 8, 0),
    F3(3, -1, 0, 2, 0): (36, 7, 0),
}


@pytest.mark.parametrize("seed,expected", sorted(FROZEN_TRIPLES.items(), key=repr))
def test_frozen_triples(seed, expected):
    t = seed_triple(seed)
    assert (t.d0, t.nu, t.eps) == expected


def test_frozen_base_profile():
    p = seed_profile(F1(0, 1))
    assert p.black_mults == (2, 2, 2)
    assert p.white_mults == (2,)
    assert (p.black_leaves, p.white_leaves) == (0, 6)
    assert p.degree == 9


@pytest.mark.parametrize(
    "bad",
    [
        lambda: seed_triple(F1(-1, 1)),
        lambda: seed_triple(F1(0, 0)),
        lambda: seed_triple(F2(2, 1, 1, 1)),
        lambda: seed_triple(F2(0, 0, 1, 1)),
        lambda: seed_triple(F2(1, 0, 2, 1)),
        lambda: seed_triple(F3(4, 0, 0, 2, 0)),
        lambda: seed_triple(F3(1, 2, 0, 2, 0)),
        lambda: seed_triple(F3(1, 0, 1, 0, 0)),
        lambda: seed_triple(F3(1, 0, 0, 1, 0)),
        lambda: seed_triple(F3(1, 0, 0, 3, 2)),
        lambda: seed_triple(F3(1, 0, 0, 1, 1)),
    ],
)
def test_domain_violations_raise(bad):
    with pytest.raises(SeedDomainError):
        bad()


def test_coincidences_all_match():
    report = verify_coincidences(5, 5)
    assert report.ok
    assert len(report.pairs) > 0
    for pair in report.pairs:
        assert pair.matches, (pair.left, pair.right)
        assert seed_triple(pair.left) == seed_triple(pair.right)
        assert seed_profile(pair.left) == seed_profile(pair.right)


def test_known_coincidence_instance():
    assert seed_triple(F1(1, 1)) == seed_triple(F3(2, 1, 0, 1, 0))
    assert seed_profile(F1(1, 1)) == seed_profile(F3(2, 1, 0, 1, 0))


def test_format_parse_round_trip():
    for seed in GRID[::11]:
        assert parse_seed(format_seed(seed)) == seed


def test_json_round_trip():
    for seed in GRID[::11]:
        assert seed_from_json(seed_to_json(seed)) == seed


def test_parse_rejects_garbage():
    for text in ["F9:1,1", "F1:1", "F1:a,b", "", "F3:1,0,0"]:
        with pytest.raises((ValueError, KeyError)):
            parse_seed(text)
