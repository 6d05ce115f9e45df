"""Rewrite words acting on critical profiles, and their admissible language.

Two alphabets act on derivation states.  Seeds from the first and third
families use the two-letter alphabet {alpha, beta} ("T13"): alpha attaches a
new black nu-point whose hub upgrades a white leaf to a simple (multiplicity
one) critical point, and beta attaches a second black nu-point to that
pending simple point, raising it to multiplicity two.  Seeds from the second
family use the five-letter alphabet {alpha, beta, gamma, delta, delta-bar}
("T2"), whose letters adjust the degree and the count of black nu-points
while keeping exactly one white nu-point.

A word is admissible when the seed and every prefix state satisfy the
floor-arithmetic admissibility condition at the seed's nu.  The admissible
language is prefix-closed by definition, so breadth-first enumeration with
pruning is exact.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable

from .profile_core import (
    CriticalProfile,
    TopStats,
    condition_E,
    top_stats,
)
from .seed_families import F1, F2, F3, SeedSpec, seed_profile, seed_triple


class WordEngineError(Exception):
    """Base class for rewrite-system errors."""


class AlphabetMismatchError(WordEngineError):
    """A letter from the wrong alphabet was applied to a state."""


class LetterNotApplicableError(WordEngineError):
    """The letter's surgery has no legal target in the current profile."""


class NoFamilyRecordedError(WordEngineError):
    """No catalogued word family covers the given seed."""


class T13Letter(Enum):
    ALPHA = "a"
    BETA = "b"


class T2Letter(Enum):
    ALPHA = "A"
    BETA = "B"
    GAMMA = "g"
    DELTA = "d"
    DELTA_BAR = "D"


Letter = T13Letter | T2Letter
Word = tuple[Letter, ...]

_CODE_TO_T13 = {letter.value: letter for letter in T13Letter}
_CODE_TO_T2 = {letter.value: letter for letter in T2Letter}


def uses_t2(seed: SeedSpec) -> bool:
    return isinstance(seed, F2)


def alphabet_for(seed: SeedSpec) -> tuple[Letter, ...]:
    return tuple(T2Letter) if uses_t2(seed) else tuple(T13Letter)


def word_to_str(word: Word) -> str:
    return "".join(letter.value for letter in word)


def word_from_str(text: str, seed: SeedSpec) -> Word:
    codes = _CODE_TO_T2 if uses_t2(seed) else _CODE_TO_T13
    letters = []
    for ch in text:
        if ch not in codes:
            raise AlphabetMismatchError(
                f"letter {ch!r} is not in the alphabet for {type(seed).__name__} seeds"
            )
        letters.append(codes[ch])
    return tuple(letters)


@lru_cache(maxsize=None)
def _triple(seed: SeedSpec):
    return seed_triple(seed)


@dataclass(frozen=True)
class DerivationState:
    """A seed together with the profile reached by a word."""

    seed: SeedSpec
    word: Word
    profile: CriticalProfile

    @property
    def nu(self) -> int:
        return _triple(self.seed).nu

    @property
    def pending_simple_white(self) -> bool:
        """True iff an alpha's simple white point awaits its beta upgrade."""
        return 1 in self.profile.white_mults

    def stats(self) -> TopStats:
        return top_stats(self.profile, self.nu)

    def satisfies_E(self) -> bool:
        s = self.stats()
        return condition_E(s.d, s.nu, s.n_minus1, s.n_plus1)


def initial_state(seed: SeedSpec) -> DerivationState:
    return DerivationState(seed=seed, word=(), profile=seed_profile(seed))


def _residuals(mults: tuple[int, ...], nu: int) -> list[int]:
    return [m for m in mults if m != nu]


def _replace(mults: tuple[int, ...], remove: Iterable[int], add: Iterable[int]):
    bag = Counter(mults)
    bag.subtract(Counter(remove))
    if any(c < 0 for c in bag.values()):
        raise LetterNotApplicableError("internal: removed a missing multiplicity")
    bag.update(Counter(add))
    return tuple(bag.elements())


def _apply_t13(state: DerivationState, letter: T13Letter) -> CriticalProfile:
    p, nu = state.profile, state.nu
    if letter is T13Letter.ALPHA:
        # New black nu-point hooked onto a white leaf; the leaf becomes a
        # simple critical point and nu fresh white leaves appear.
        if p.white_leaves < 1:
            raise LetterNotApplicableError("alpha needs a white leaf to upgrade")
        return CriticalProfile(
            black_mults=p.black_mults + (nu,),
            white_mults=p.white_mults + (1,),
            black_leaves=p.black_leaves,
            white_leaves=p.white_leaves + nu - 1,
        )
    # Beta: second black nu-point on the pending simple white point.
    if 1 not in p.white_mults:
        raise LetterNotApplicableError(
            "beta needs the simple white point left by a preceding alpha"
        )
    return CriticalProfile(
        black_mults=p.black_mults + (nu,),
        white_mults=_replace(p.white_mults, [1], [2]),
        black_leaves=p.black_leaves,
        white_leaves=p.white_leaves + nu,
    )


def _apply_t2(state: DerivationState, letter: T2Letter) -> CriticalProfile:
    p, nu = state.profile, state.nu
    res_black = _residuals(p.black_mults, nu)
    res_white = _residuals(p.white_mults, nu)
    if letter is T2Letter.ALPHA:
        # Three black leaves hooked onto a white leaf, which becomes a
        # 3-point.  The black leaves are what later gamma steps consume:
        # every recorded gamma-run bound is exactly the running black-leaf
        # budget under this reading.
        if p.white_leaves < 1:
            raise LetterNotApplicableError("alpha needs a white leaf")
        if nu <= 3:
            raise LetterNotApplicableError("alpha would create a second top point")
        return CriticalProfile(
            black_mults=p.black_mults,
            white_mults=p.white_mults + (3,),
            black_leaves=p.black_leaves + 3,
            white_leaves=p.white_leaves - 1,
        )
    if letter is T2Letter.BETA:
        # Promote the secondary black point (a black leaf when none exists)
        # to a nu-point, and raise one white leaf to multiplicity two.
        if p.white_leaves < 1:
            raise LetterNotApplicableError("beta needs a white leaf")
        if nu <= 2:
            raise LetterNotApplicableError("beta would duplicate the white top point")
        if res_black:
            eps = max(res_black)
            return CriticalProfile(
                black_mults=_replace(p.black_mults, [eps], [nu]),
                white_mults=p.white_mults + (2,),
                black_leaves=p.black_leaves + 2,
                white_leaves=p.white_leaves + nu - eps - 1,
            )
        if p.black_leaves < 1:
            raise LetterNotApplicableError("beta needs a black leaf to promote")
        return CriticalProfile(
            black_mults=p.black_mults + (nu,),
            white_mults=p.white_mults + (2,),
            black_leaves=p.black_leaves + 1,
            white_leaves=p.white_leaves + nu - 1,
        )
    if letter is T2Letter.GAMMA:
        # Promote a black leaf directly to a nu-point.
        if p.black_leaves < 1:
            raise LetterNotApplicableError("gamma needs a black leaf to promote")
        return CriticalProfile(
            black_mults=p.black_mults + (nu,),
            white_mults=p.white_mults,
            black_leaves=p.black_leaves - 1,
            white_leaves=p.white_leaves + nu,
        )
    if letter is T2Letter.DELTA:
        # Grow the secondary black point by three (create one if absent).
        if res_black:
            target = max(res_black)
            if target + 3 >= nu:
                raise LetterNotApplicableError(
                    "delta would push the secondary black point to the top multiplicity"
                )
            return CriticalProfile(
                black_mults=_replace(p.black_mults, [target], [target + 3]),
                white_mults=p.white_mults,
                black_leaves=p.black_leaves,
                white_leaves=p.white_leaves + 3,
            )
        if p.black_leaves < 1:
            raise LetterNotApplicableError("delta needs a black leaf to promote")
        if 3 >= nu:
            raise LetterNotApplicableError("delta would reach the top multiplicity")
        return CriticalProfile(
            black_mults=p.black_mults + (3,),
            white_mults=p.white_mults,
            black_leaves=p.black_leaves - 1,
            white_leaves=p.white_leaves + 3,
        )
    # DELTA_BAR: same growth applied on the white side, to the white
    # critical point of lowest multiplicity.
    if res_white:
        target = min(res_white)
        if target + 3 >= nu:
            raise LetterNotApplicableError(
                "delta-bar would push a white point to the top multiplicity"
            )
        return CriticalProfile(
            black_mults=p.black_mults,
            white_mults=_replace(p.white_mults, [target], [target + 3]),
            black_leaves=p.black_leaves + 3,
            white_leaves=p.white_leaves,
        )
    if p.white_leaves < 1:
        raise LetterNotApplicableError("delta-bar needs a white leaf to promote")
    if 3 >= nu:
        raise LetterNotApplicableError("delta-bar would reach the top multiplicity")
    return CriticalProfile(
        black_mults=p.black_mults,
        white_mults=p.white_mults + (3,),
        black_leaves=p.black_leaves + 3,
        white_leaves=p.white_leaves - 1,
    )


def apply_letter(state: DerivationState, letter: Letter) -> DerivationState:
    """Apply one rewrite letter; raises if the alphabet or target is wrong."""
    if uses_t2(state.seed):
        if not isinstance(letter, T2Letter):
            raise AlphabetMismatchError(
                f"{letter!r} is not a T2 letter; this seed uses the five-letter alphabet"
            )
        new_profile = _apply_t2(state, letter)
    else:
        if not isinstance(letter, T13Letter):
            raise AlphabetMismatchError(
                f"{letter!r} is not a T13 letter; this seed uses the two-letter alphabet"
            )
        new_profile = _apply_t13(state, letter)
    return DerivationState(
        seed=state.seed, word=state.word + (letter,), profile=new_profile
    )


def trajectory(seed: SeedSpec, word: Word) -> list[DerivationState]:
    """States visited while reading the word, seed state included."""
    states = [initial_state(seed)]
    for letter in word:
        states.append(apply_letter(states[-1], letter))
    return states


def is_E_admissible(seed: SeedSpec, word: Word) -> bool:
    """True iff the seed and every prefix state satisfy the condition."""
    state = initial_state(seed)
    if not state.satisfies_E():
        return False
    for letter in word:
        try:
            state = apply_letter(state, letter)
        except LetterNotApplicableError:
            return False
        if not state.satisfies_E():
            return False
    return True


MAX_ENUM_LEN = 64


def enumerate_LE(seed: SeedSpec, max_len: int) -> list[Word]:
    """All admissible words up to the given length, in canonical order.

    Order is breadth-first by length, then by alphabet order within each
    length.  The empty word is listed iff the seed itself is admissible.
    """
    if max_len < 0:
        raise ValueError(f"max_len must be >= 0, got {max_len}")
    if max_len > MAX_ENUM_LEN:
        raise ValueError(
            f"max_len {max_len} exceeds the enumeration guard {MAX_ENUM_LEN}"
        )
    start = initial_state(seed)
    if not start.satisfies_E():
        return []
    words: list[Word] = [()]
    frontier = [start]
    letters = alphabet_for(seed)
    for _ in range(max_len):
        nxt = []
        for state in frontier:
            for letter in letters:
                try:
                    child = apply_letter(state, letter)
                except LetterNotApplicableError:
                    continue
                if child.satisfies_E():
                    nxt.append(child)
                    words.append(child.word)
        frontier = nxt
    return words


def max_h(seed: SeedSpec) -> int | float:
    """Largest admissible alternating-word length for a T13 seed.

    Infinite (math.inf) exactly when nu = 2, which happens only for the
    first family with n = 0, m = 1.

    Each alternating letter adds nu+1 to the degree and one black
    nu-point, so floor(d/(nu+1)) and N_minus1 advance in lockstep and
    the binding constraint is N_plus1 = 1:

        floor((d0 - 1 + h)/nu) = floor(d0/(nu+1)) + 1

    whose largest solution is (floor(d0/(nu+1)) + 2)*nu - d0.  For the
    first family this collapses to 3(n+m)-2, and for the third family
    with x+j divisible by 3 to 3(n+m-l-1), 3(n+m-l)+1, 3(n+m-l)-1 at
    x = 1, 2, 3 respectively.
    """
    if not isinstance(seed, (F1, F3)):
        raise WordEngineError(
            "max_h applies to T13 seeds (first and third families)"
        )
    t = _triple(seed)
    if t.nu == 2:
        return math.inf
    return (t.d0 // (t.nu + 1) + 2) * t.nu - t.d0


def alternating_word(length: int) -> Word:
    """alpha, beta, alpha, ... of the given length."""
    return tuple(
        T13Letter.ALPHA if i % 2 == 0 else T13Letter.BETA for i in range(length)
    )


def _t2_word(*runs: tuple[T2Letter, int]) -> Word:
    out: list[Letter] = []
    for letter, count in runs:
        out.extend([letter] * count)
    return tuple(out)


def _families_t2_j0(seed: F2) -> set[Word]:
    A, B, G, DB = T2Letter.ALPHA, T2Letter.BETA, T2Letter.GAMMA, T2Letter.DELTA_BAR
    n, m, l = seed.n, seed.m, seed.l
    nu = _triple(seed).nu
    # The alpha-run bound is m-1 when l=m and m+s-1 when l=m+s, i.e. l-1.
    a_max = l - 1
    words: set[Word] = {(B,)}
    for q in range(1, a_max + 1):
        words.add(_t2_word((B, 1), (A, q)))
    for r in range(1, nu):
        words.add(_t2_word((B, 1), (A, a_max), (G, r)))
    for f in range(1, n + 1):
        words.add(_t2_word((B, 1), (A, a_max), (G, nu - 1), (A, f)))
    for g in range(1, 3 * n + 1):
        words.add(_t2_word((B, 1), (A, a_max), (G, nu - 1), (A, n), (G, g)))
    if m == 1 and l == 1:
        # Series reaching degree 2 nu (nu + 1): one delta-bar after beta
        # gamma^2, then gamma^3 delta-bar blocks, then a gamma tail.
        for q in range(1, nu):
            words.add(_t2_word((B, 1), (G, q)))
        base = _t2_word((B, 1), (G, 2), (DB, 1))
        for r in range(0, n):
            block = base + _t2_word((G, 3), (DB, 1)) * r
            for s in range(0, nu + 1):
                words.add(block + _t2_word((G, s)))
        if n == 2:
            words |= _families_t2_adhoc()
    return words


def _families_t2_adhoc() -> set[Word]:
    # Catalogued one-off list for the seed with j=0, n=2, m=1, l=1.
    A, B, G = T2Letter.ALPHA, T2Letter.BETA, T2Letter.GAMMA
    word_a = _t2_word((B, 1), (G, 2))
    word_b = word_a + _t2_word((G, 6))
    word_c = word_a + _t2_word((A, 1), (G, 3))
    words: set[Word] = {(B,), (B, G), word_a}
    for p in range(1, 7):
        words.add(word_a + _t2_word((G, p)))
    for q in range(0, 4):
        words.add(word_a + _t2_word((A, 1), (G, q)))
    for r in range(0, 4):
        words.add(word_b + _t2_word((A, 1), (G, r)))
    words.add(word_c + _t2_word((G, 1)))
    words.add(word_c + _t2_word((G, 2)))
    for s in range(0, 10):
        words.add(word_c + _t2_word((A, 1), (G, s)))
    # Words recorded for the degree coincidences: B-alpha and C-gamma^3
    # share d=123; B-alpha^2, C-gamma^3-alpha, C-alpha-gamma^3 share d=126.
    words.add(word_c + _t2_word((G, 3)))
    words.add(word_b + _t2_word((A, 2)))
    words.add(word_c + _t2_word((G, 3), (A, 1)))
    return words


def _families_t2_j1(seed: F2) -> set[Word]:
    A, B, G, D = T2Letter.ALPHA, T2Letter.BETA, T2Letter.GAMMA, T2Letter.DELTA
    n, m, l = seed.n, seed.m, seed.l
    words: set[Word] = set()
    # Recorded alpha-run sizes count added edges (three per letter), so the
    # run of letters after beta is at most l-1 long; longer runs leave the
    # admissibility window, whose slack after beta is exactly 3l.
    a_max = l - 1
    if a_max >= 0:
        words.add((B,))
        for q in range(1, a_max + 1):
            words.add(_t2_word((B, 1), (A, q)))
        # The two gamma words need n >= 1 when l = m; any n when l > m.
        if l > m or n >= 1:
            words.add(_t2_word((B, 1), (A, a_max), (G, 1)))
            words.add(_t2_word((B, 1), (A, a_max), (G, 2)))
    if m == 0 and l == 1:
        words |= {(D,), (D, B)}
    if not words:
        raise NoFamilyRecordedError(f"no catalogued word family for {seed!r}")
    return words


def paper_word_families(seed: SeedSpec, limit: int = 20) -> list[Word]:
    """Catalogued admissible word families for the seed, in canonical order.

    For T13 seeds this is the alternating family up to max_h; when that
    bound is infinite (nu = 2) the family is truncated at ``limit``
    letters.  For second-family seeds the catalogue depends on (j, l - m)
    and includes the recorded one-off lists.  Raises NoFamilyRecordedError
    when no catalogue entry covers the seed.
    """
    if isinstance(seed, (F1, F3)):
        bound = max_h(seed)
        cap = limit if bound == math.inf else int(bound)
        words = [alternating_word(k) for k in range(1, cap + 1)]
        return words
    assert isinstance(seed, F2)
    if seed.j == 0:
        words = _families_t2_j0(seed)
    else:
        words = _families_t2_j1(seed)
    order = {letter: i for i, letter in enumerate(T2Letter)}
    return sorted(words, key=lambda w: (len(w), [order[x] for x in w]))
