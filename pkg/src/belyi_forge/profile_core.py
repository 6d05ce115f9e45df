"""Critical profiles of polynomials with exactly two finite critical values.

A degree-d polynomial whose finite critical values are -1 and +1 corresponds
to a bicolored plane tree with d edges: black vertices sit over -1, white
vertices over +1, and a vertex of degree k is a critical point of
multiplicity k - 1.  A profile keeps only the multiplicity bookkeeping of
that tree, which is what every counting formula downstream consumes.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping


def _canon(mults: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(mults, reverse=True))


@dataclass(frozen=True)
class CriticalProfile:
    """Multiplicity data of a two-critical-value polynomial.

    ``black_mults`` and ``white_mults`` hold the multiplicities (each >= 1)
    of the critical points with critical value -1 and +1 respectively;
    degree-one tree vertices carry no multiplicity and are stored as leaf
    counts.  Multisets are kept sorted in descending order so equal profiles
    compare equal.
    """

    black_mults: tuple[int, ...]
    white_mults: tuple[int, ...]
    black_leaves: int = 0
    white_leaves: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "black_mults", _canon(self.black_mults))
        object.__setattr__(self, "white_mults", _canon(self.white_mults))

    @property
    def degree(self) -> int:
        """Edge count of the tree, computed from the black side."""
        return sum(m + 1 for m in self.black_mults) + self.black_leaves

    @property
    def white_degree(self) -> int:
        return sum(m + 1 for m in self.white_mults) + self.white_leaves

    @property
    def vertex_count(self) -> int:
        return (
            len(self.black_mults)
            + len(self.white_mults)
            + self.black_leaves
            + self.white_leaves
        )

    def count_black(self, mult: int) -> int:
        return self.black_mults.count(mult)

    def count_white(self, mult: int) -> int:
        return self.white_mults.count(mult)

    def black_counter(self) -> Counter[int]:
        return Counter(self.black_mults)

    def white_counter(self) -> Counter[int]:
        return Counter(self.white_mults)


@dataclass(frozen=True)
class TopStats:
    """Degree and the critical-point counts at the top multiplicity nu."""

    d: int
    nu: int
    n_minus1: int
    n_plus1: int


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...] = ()


def validate_profile(p: CriticalProfile) -> ValidationReport:
    """Check the three linear identities a realizable profile must satisfy.

    Both color classes must account for every edge endpoint, the critical
    multiplicities must sum to degree - 1, and the vertex count must equal
    degree + 1 (the tree condition).  Total function: never raises.
    """
    violations: list[str] = []
    if any(m < 1 for m in p.black_mults + p.white_mults):
        violations.append("multiplicities must be >= 1")
    if p.black_leaves < 0 or p.white_leaves < 0:
        violations.append("leaf counts must be >= 0")
    d = p.degree
    if p.white_degree != d:
        violations.append(
            f"handshake mismatch: black side sums to {d}, white to {p.white_degree}"
        )
    mult_sum = sum(p.black_mults) + sum(p.white_mults)
    if mult_sum != d - 1:
        violations.append(
            f"multiplicity sum {mult_sum} != degree - 1 = {d - 1}"
        )
    if p.vertex_count != d + 1:
        violations.append(
            f"vertex count {p.vertex_count} != degree + 1 = {d + 1}"
        )
    return ValidationReport(ok=not violations, violations=tuple(violations))


def top_stats(p: CriticalProfile, nu: int) -> TopStats:
    """Degree plus the counts of multiplicity-nu points on each side.

    nu is the designated top multiplicity of the derivation the profile
    belongs to; it need not be attained by the profile.
    """
    if nu < 1:
        raise ValueError(f"nu must be >= 1, got {nu}")
    return TopStats(
        d=p.degree,
        nu=nu,
        n_minus1=p.count_black(nu),
        n_plus1=p.count_white(nu),
    )


def condition_E(d: int, nu: int, n_minus1: int, n_plus1: int) -> bool:
    """Admissibility test for the triple attached to a degree-d tree.

    Holds iff floor(d / (nu+1)) equals the count of top-multiplicity points
    over -1 and floor((d-1) / nu) - floor(d / (nu+1)) equals the count
    over +1.
    """
    if d < 1 or nu < 1:
        raise ValueError(f"need d >= 1 and nu >= 1, got d={d}, nu={nu}")
    q = d // (nu + 1)
    return q == n_minus1 and (d - 1) // nu - q == n_plus1


def profile_to_json(p: CriticalProfile) -> dict:
    """Plain-dict form: multiplicity arrays sorted descending, leaf counts."""
    return {
        "black": list(p.black_mults),
        "white": list(p.white_mults),
        "black_leaves": p.black_leaves,
        "white_leaves": p.white_leaves,
    }


def profile_from_json(obj: Mapping) -> CriticalProfile:
    return CriticalProfile(
        black_mults=tuple(int(m) for m in obj["black"]),
        white_mults=tuple(int(m) for m in obj["white"]),
        black_leaves=int(obj["black_leaves"]),
        white_leaves=int(obj["white_leaves"]),
    )
