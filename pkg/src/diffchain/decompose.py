"""Deciding membership in the k-term difference hierarchy of universal
sentences with d-variable blocks.

The canonical derived chain of a language L iterates: close L universally
(its d-ceiling language), subtract, repeat.  L is a k-term iterated
difference of d-block universal sentences exactly when the k-th residual is
empty; on success the ceilings themselves are the chain, and each carries a
defining sentence skeleton whose numerical predicates are automata.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iter_product

from .automata import (
    DEFAULT_STATE_CAP,
    Dfa,
    ResourceLimitError,
    Word,
    decide,
    difference,
    minimize,
    shortest_word,
    single_word,
)
from .ceiling import LetterTuple, pi1_ceiling_language, r_predicate
from .structures import VarSet


@dataclass(frozen=True)
class DerivedChain:
    """Languages D1..D(k+1) and ceilings C1..Ck with D1 the input,
    Ci the d-ceiling language of Di and D(i+1) = Ci - Di."""

    block_length: int
    languages: tuple[Dfa, ...]
    ceilings: tuple[Dfa, ...]


def derived_chain(lang: Dfa, d: int, k: int, cap: int = DEFAULT_STATE_CAP) -> DerivedChain:
    if d < 1 or k < 1:
        raise ValueError("need d >= 1 and k >= 1")
    languages = [minimize(lang)]
    ceilings = []
    for i in range(1, k + 1):
        try:
            c = pi1_ceiling_language(languages[-1], d, cap)
        except ResourceLimitError as e:
            raise ResourceLimitError(f"while building chain link {i}: {e}") from e
        ceilings.append(c)
        languages.append(difference(c, languages[-1], cap))
    return DerivedChain(d, tuple(languages), tuple(ceilings))


@dataclass(frozen=True)
class LinkPredicate:
    """One ceiling disjunct: a letter tuple with its predicate automaton."""

    letters: LetterTuple
    automaton: Dfa


@dataclass(frozen=True)
class LinkSkeleton:
    """Defining-sentence skeleton of one chain link: for block variables
    x1..xd, the sentence is  forall x1..xd. OR over disjuncts of
    (letters spelled at the tags AND predicate holds)."""

    disjuncts: tuple[LinkPredicate, ...]


@dataclass(frozen=True)
class DecompositionReport:
    verdict: str  # "success" | "failure"
    d: int
    k: int
    chain: tuple[Dfa, ...] | None
    skeleton: tuple[LinkSkeleton, ...] | None
    residual: Dfa | None
    witness: Word | None
    epsilon_note: bool

    @property
    def success(self) -> bool:
        return self.verdict == "success"


def _link_skeleton(link_lang: Dfa, d: int, cap: int) -> LinkSkeleton:
    vars = VarSet.canonical(d)
    disjuncts = tuple(
        LinkPredicate(letters, r_predicate(link_lang, letters, vars, cap))
        for letters in iter_product(tuple(link_lang.alphabet), repeat=d)
    )
    return LinkSkeleton(disjuncts)


def decompose(
    lang: Dfa,
    d: int,
    k: int,
    cap: int = DEFAULT_STATE_CAP,
    with_skeleton: bool = True,
) -> DecompositionReport:
    """Decide whether the language is a k-term iterated difference of
    d-block universal sentences over regular numerical predicates.

    Success iff the (k+1)-th derived language is empty; the ceilings then
    reconstruct the input exactly.  On failure the report carries the
    non-empty residual and its shortest word; epsilon_note flags the one
    boundary case where ignoring the empty word would flip the verdict.
    """
    chain = derived_chain(lang, d, k, cap)
    residual = chain.languages[k]
    empty, _ = decide("empty", residual)
    if empty:
        skeleton = None
        if with_skeleton:
            skeleton = tuple(
                _link_skeleton(di, d, cap) for di in chain.languages[:k]
            )
        return DecompositionReport(
            "success", d, k, chain.ceilings, skeleton, None, None, False
        )
    witness = shortest_word(residual)
    eps_only = decide("equiv", residual, single_word(lang.alphabet, ()))[0]
    return DecompositionReport(
        "failure", d, k, None, None, residual, witness, eps_only
    )


def pi1_exact_test(lang: Dfa, d: int, cap: int = DEFAULT_STATE_CAP) -> tuple[bool, Word | None]:
    """Is the language exactly its own d-block universal closure?  The
    witness on failure is a shortest word of the (one-sided) difference."""
    if d < 1:
        raise ValueError("need d >= 1")
    return decide("equiv", lang, pi1_ceiling_language(lang, d, cap))


def sigma1_test(lang: Dfa, d: int, cap: int = DEFAULT_STATE_CAP) -> tuple[bool, Word | None]:
    """Is the language definable by one d-block existential sentence?
    Equivalent to the complement being exactly its universal closure."""
    from .automata import complement

    return pi1_exact_test(complement(lang), d, cap)


def verify(chain, lang: Dfa, cap: int = DEFAULT_STATE_CAP) -> bool:
    """Independent re-check: fold the chain as C1 - (C2 - (...)) and test
    equivalence with the language."""
    links = list(chain)
    if not links:
        raise ValueError("empty chain")
    acc = links[-1]
    for c in reversed(links[:-1]):
        acc = difference(c, acc, cap)
    return decide("equiv", acc, lang)[0]


@dataclass(frozen=True)
class SearchResult:
    """Outcome of a parameter sweep: the first success in (k, d) order, the
    residual automaton sizes of failed cells, and cells that hit limits."""

    found: tuple[int, int] | None  # (d, k)
    residual_states: dict[tuple[int, int], int]
    errors: dict[tuple[int, int], str]


def search(lang: Dfa, d_max: int, k_max: int, cap: int = DEFAULT_STATE_CAP) -> SearchResult:
    """Scan (k, d) lexicographically, fewest terms first; derived chains are
    computed once per d and shared across all k."""
    if d_max < 1 or k_max < 1:
        raise ValueError("bounds must be at least 1")
    residuals: dict[tuple[int, int], Dfa] = {}
    errors: dict[tuple[int, int], str] = {}
    for d in range(1, d_max + 1):
        languages = [minimize(lang)]
        for k in range(1, k_max + 1):
            try:
                c = pi1_ceiling_language(languages[-1], d, cap)
                languages.append(difference(c, languages[-1], cap))
            except ResourceLimitError as e:
                for kk in range(k, k_max + 1):
                    errors[(d, kk)] = str(e)
                break
            residuals[(d, k)] = languages[-1]
    found = None
    sizes: dict[tuple[int, int], int] = {}
    for k in range(1, k_max + 1):
        for d in range(1, d_max + 1):
            if (d, k) in errors:
                continue
            res = residuals[(d, k)]
            if decide("empty", res)[0]:
                if found is None:
                    found = (d, k)
            else:
                sizes[(d, k)] = res.n_states
    return SearchResult(found, sizes, errors)
