"""Seed families of two-critical-value polynomials indexed by integer tuples.

Three families are available.  Each choice of in-domain parameters yields a
starting triple (d0, nu, eps) and a starting critical profile: d0 is the
degree, nu the top multiplicity over critical value -1, and eps the
multiplicity of an optional secondary black critical point (eps = 0 means no
such point).  Every seed satisfies the admissibility condition checked by
``profile_core.condition_E`` and is the entry point of the rewrite systems
in ``word_engine``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

from .profile_core import CriticalProfile, condition_E, top_stats, validate_profile


class SeedDomainError(ValueError):
    """Raised when seed parameters violate the family's domain constraints."""


@dataclass(frozen=True)
class F1:
    """First family: parameters n >= 0, m >= 1."""

    n: int
    m: int


@dataclass(frozen=True)
class F2:
    """Second family: j in {0,1}; n,m >= 1 if j=0, n,m >= 0 if j=1; l >= m."""

    j: int
    n: int
    m: int
    l: int


@dataclass(frozen=True)
class F3:
    """Third family: x in {1,2,3}, j in {-1,0,1}, m >= 1, n >= 0, 3m+j >= 4,
    and l = 0 when m = 1, otherwise 0 <= l <= m-2."""

    x: int
    j: int
    n: int
    m: int
    l: int


SeedSpec = F1 | F2 | F3


@dataclass(frozen=True)
class SeedTriple:
    d0: int
    nu: int
    eps: int


def validate_seed(seed: SeedSpec) -> None:
    """Raise SeedDomainError naming the violated constraint, if any."""
    if isinstance(seed, F1):
        if seed.n < 0:
            raise SeedDomainError(f"F1 requires n >= 0, got n={seed.n}")
        if seed.m < 1:
            raise SeedDomainError(f"F1 requires m >= 1, got m={seed.m}")
        return
    if isinstance(seed, F2):
        if seed.j not in (0, 1):
            raise SeedDomainError(f"F2 requires j in {{0,1}}, got j={seed.j}")
        low = 1 if seed.j == 0 else 0
        if seed.n < low or seed.m < low:
            raise SeedDomainError(
                f"F2 with j={seed.j} requires n,m >= {low}, got n={seed.n}, m={seed.m}"
            )
        if seed.l < seed.m:
            raise SeedDomainError(f"F2 requires l >= m, got l={seed.l}, m={seed.m}")
        return
    if isinstance(seed, F3):
        if seed.x not in (1, 2, 3):
            raise SeedDomainError(f"F3 requires x in {{1,2,3}}, got x={seed.x}")
        if seed.j not in (-1, 0, 1):
            raise SeedDomainError(f"F3 requires j in {{-1,0,1}}, got j={seed.j}")
        if seed.m < 1:
            raise SeedDomainError(f"F3 requires m >= 1, got m={seed.m}")
        if seed.n < 0:
            raise SeedDomainError(f"F3 requires n >= 0, got n={seed.n}")
        if 3 * seed.m + seed.j < 4:
            raise SeedDomainError(
                f"F3 requires 3m+j >= 4, got 3*{seed.m}+{seed.j} = {3 * seed.m + seed.j}"
            )
        if seed.m == 1:
            if seed.l != 0:
                raise SeedDomainError(f"F3 with m=1 requires l=0, got l={seed.l}")
        elif not 0 <= seed.l <= seed.m - 2:
            raise SeedDomainError(
                f"F3 requires 0 <= l <= m-2 for m >= 2, got l={seed.l}, m={seed.m}"
            )
        return
    raise SeedDomainError(f"unknown seed family: {seed!r}")


def seed_triple(seed: SeedSpec) -> SeedTriple:
    """(d0, nu, eps) of the seed.  eps is evaluated with exact rationals."""
    validate_seed(seed)
    if isinstance(seed, F1):
        n, m = seed.n, seed.m
        return SeedTriple(
            d0=3 * (n + 3 * m * (n + m)),
            nu=3 * (n + m) - 1,
            eps=0,
        )
    if isinstance(seed, F2):
        j, n, m, l = seed.j, seed.n, seed.m, seed.l
        return SeedTriple(
            d0=3 * (m + l * j + (n + l) * (3 * l + j + 1)) + j * (j + 2),
            nu=3 * (n + l) + j,
            eps=3 * m + j - 1,
        )
    x, j, n, m, l = seed.x, seed.j, seed.n, seed.m, seed.l
    d0 = 3 * (m * (3 * (m + n) + x - 1) + j * (n + 2 * m + x // 3) + l + 1)
    nu = 3 * (n + m) + j + x - 1
    # The secondary multiplicity mixes half-integer and reciprocal floors;
    # evaluate them exactly rather than in floating point.
    inner = 1 + ((x - 1) // 2 - Fraction(1, 2)) * j
    eps = 3 * l + 2 * math.floor(inner) + j * math.floor(Fraction(1, x))
    return SeedTriple(d0=d0, nu=nu, eps=int(eps))


def seed_profile(seed: SeedSpec) -> CriticalProfile:
    """Starting critical profile of the seed.

    All families place one white point of multiplicity nu; the black side
    carries the family's count of nu-points plus, when eps > 0, one
    secondary point of multiplicity eps.  Remaining edge endpoints are
    leaves.
    """
    t = seed_triple(seed)
    if isinstance(seed, F1):
        top_count = 3 * seed.m
    elif isinstance(seed, F2):
        top_count = 3 * seed.l + seed.j
    else:
        top_count = 3 * seed.m + seed.j - 1
    black = [t.nu] * top_count
    black_degree_sum = top_count * (t.nu + 1)
    if t.eps > 0:
        black.append(t.eps)
        black_degree_sum += t.eps + 1
    black_leaves = t.d0 - black_degree_sum
    white_leaves = t.d0 - (t.nu + 1)
    if black_leaves < 0 or white_leaves < 0:
        raise SeedDomainError(
            f"profile infeasible for {seed!r}: leaf count would be negative"
        )
    profile = CriticalProfile(
        black_mults=tuple(black),
        white_mults=(t.nu,),
        black_leaves=black_leaves,
        white_leaves=white_leaves,
    )
    report = validate_profile(profile)
    if not report.ok:
        raise SeedDomainError(
            f"profile infeasible for {seed!r}: {'; '.join(report.violations)}"
        )
    return profile


def seed_satisfies_E(seed: SeedSpec) -> bool:
    t = seed_triple(seed)
    stats = top_stats(seed_profile(seed), t.nu)
    return condition_E(stats.d, t.nu, stats.n_minus1, stats.n_plus1)


@dataclass(frozen=True)
class CoincidencePair:
    left: SeedSpec
    right: SeedSpec
    matches: bool


@dataclass(frozen=True)
class CoincidenceReport:
    pairs: tuple[CoincidencePair, ...]

    @property
    def ok(self) -> bool:
        return all(p.matches for p in self.pairs)


def coincidence_pairs(n_max: int, m_max: int) -> Iterator[tuple[SeedSpec, SeedSpec]]:
    """Parameter identifications under which distinct families agree.

    Three identifications hold for all in-domain parameters:
      F1{n+1, m}          == F3{x=2, j=1, n, m, 0}
      F2{0, n+1, l+1, m}  == F3{x=3, j=1, n, m, l}
      F2{1, n+1, l, m-1}  == F3{x=3, j=-1, n, m, l}   (m >= 2)
    """
    for n in range(0, n_max + 1):
        for m in range(1, m_max + 1):
            yield F1(n + 1, m), F3(x=2, j=1, n=n, m=m, l=0)
            l_values = [0] if m == 1 else list(range(0, m - 1))
            for l in l_values:
                yield F2(j=0, n=n + 1, m=l + 1, l=m), F3(x=3, j=1, n=n, m=m, l=l)
                if m >= 2:
                    yield F2(j=1, n=n + 1, m=l, l=m - 1), F3(x=3, j=-1, n=n, m=m, l=l)


def verify_coincidences(n_max: int = 5, m_max: int = 5) -> CoincidenceReport:
    """Check both the triples and the full profiles on each identified pair."""
    pairs = []
    for left, right in coincidence_pairs(n_max, m_max):
        same = seed_triple(left) == seed_triple(right) and seed_profile(
            left
        ) == seed_profile(right)
        pairs.append(CoincidencePair(left=left, right=right, matches=same))
    return CoincidenceReport(pairs=tuple(pairs))


def seed_to_json(seed: SeedSpec) -> dict:
    if isinstance(seed, F1):
        return {"family": "F1", "n": seed.n, "m": seed.m}
    if isinstance(seed, F2):
        return {"family": "F2", "j": seed.j, "n": seed.n, "m": seed.m, "l": seed.l}
    return {
        "family": "F3",
        "x": seed.x,
        "j": seed.j,
        "n": seed.n,
        "m": seed.m,
        "l": seed.l,
    }


def seed_from_json(obj: Mapping) -> SeedSpec:
    family = obj["family"]
    if family == "F1":
        return F1(n=int(obj["n"]), m=int(obj["m"]))
    if family == "F2":
        return F2(j=int(obj["j"]), n=int(obj["n"]), m=int(obj["m"]), l=int(obj["l"]))
    if family == "F3":
        return F3(
            x=int(obj["x"]),
            j=int(obj["j"]),
            n=int(obj["n"]),
            m=int(obj["m"]),
            l=int(obj["l"]),
        )
    raise SeedDomainError(f"unknown seed family: {family!r}")


def format_seed(seed: SeedSpec) -> str:
    """Compact flag form: F1:n,m | F2:j,n,m,l | F3:x,j,n,m,l."""
    if isinstance(seed, F1):
        return f"F1:{seed.n},{seed.m}"
    if isinstance(seed, F2):
        return f"F2:{seed.j},{seed.n},{seed.m},{seed.l}"
    return f"F3:{seed.x},{seed.j},{seed.n},{seed.m},{seed.l}"


def parse_seed(text: str) -> SeedSpec:
    """Inverse of format_seed; validates the parameter domain."""
    try:
        family, _, rest = text.strip().partition(":")
        nums = [int(p) for p in rest.split(",")] if rest else []
    except ValueError as exc:
        raise SeedDomainError(f"malformed seed string: {text!r}") from exc
    shapes = {"F1": 2, "F2": 4, "F3": 5}
    family = family.upper()
    if family not in shapes:
        raise SeedDomainError(f"unknown seed family in {text!r}")
    if len(nums) != shapes[family]:
        raise SeedDomainError(
            f"{family} takes {shapes[family]} parameters, got {len(nums)}"
        )
    if family == "F1":
        seed: SeedSpec = F1(n=nums[0], m=nums[1])
    elif family == "F2":
        seed = F2(j=nums[0], n=nums[1], m=nums[2], l=nums[3])
    else:
        seed = F3(x=nums[0], j=nums[1], n=nums[2], m=nums[3], l=nums[4])
    validate_seed(seed)
    return seed
