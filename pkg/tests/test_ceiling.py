import random
from itertools import product

import pytest

from diffchain.automata import (
    decide,
    empty_language,
    intersection,
    minimize,
    run,
    single_word,
    complement,
)
from diffchain.ceiling import ceiling, letter_atoms, pi1_ceiling_language, r_predicate
from diffchain.logic import compile_sentence
from diffchain.structures import VarSet, legal_structures, tag
from corpus import AB, PI1_CORPUS, all_words, bstar, random_dfa, r_oracle, sentence

X1 = VarSet.canonical(1)
X2 = VarSet.canonical(2)


def b_star_a_b_star():
    from diffchain.automata import Dfa

    return minimize(Dfa(AB, 3, 0, frozenset([1]), ((1, 0), (2, 1), (2, 2))))


def check_r_against_oracle(lang, letters, vars, max_len, rng=None):
    d_pred = r_predicate(lang, letters, vars)
    for n in range(1, max_len + 1):
        base_word = ("a",) * n
        for positions in product(range(1, n + 1), repeat=len(vars)):
            expected = r_oracle(lang, letters, positions, n)
            assert run(d_pred, tag(base_word, positions, vars)) == expected
            if rng is not None:
                other = tuple(rng.choice("ab") for _ in range(n))
                assert run(d_pred, tag(other, positions, vars)) == expected


# -- the tuple predicate ----------------------------------------------------------


def test_r_predicate_of_empty_language_is_empty():
    assert decide("empty", r_predicate(empty_language(AB), ("a",), X1)) == (True, None)


def test_r_predicate_one_a_examples():
    lang = b_star_a_b_star()
    # every position of every length can carry the single a
    pred_a = r_predicate(lang, ("a",), X1)
    for n in range(1, 6):
        for p in range(1, n + 1):
            assert run(pred_a, tag(("a",) * n, (p,), X1))
    # a b can only sit somewhere once the word has length at least two
    pred_b = r_predicate(lang, ("b",), X1)
    assert not run(pred_b, tag(("a",), (1,), X1))
    for n in range(2, 6):
        for p in range(1, n + 1):
            assert run(pred_b, tag(("a",) * n, (p,), X1))


def test_r_predicate_matches_oracle_randomized():
    rng = random.Random(101)
    for _ in range(15):
        lang = random_dfa(rng)
        for vars in (X1, X2):
            for letters in product("ab", repeat=len(vars)):
                check_r_against_oracle(lang, letters, vars, 5, rng)


def test_r_predicate_is_letter_blind():
    rng = random.Random(103)
    lang = b_star_a_b_star()
    pred = r_predicate(lang, ("a", "b"), X2)
    for _ in range(80):
        n = rng.randint(1, 6)
        positions = (rng.randint(1, n), rng.randint(1, n))
        w1 = tuple(rng.choice("ab") for _ in range(n))
        w2 = tuple(rng.choice("ab") for _ in range(n))
        assert run(pred, tag(w1, positions, X2)) == run(pred, tag(w2, positions, X2))


def test_r_predicate_rejects_illegal_structures():
    pred = r_predicate(bstar(), ("b",), X1)
    assert not run(pred, ("b{x1}", "b{x1}"))
    assert not run(pred, ("b{}", "b{}"))


# -- letter atoms -----------------------------------------------------------------


def test_letter_atoms_checks_tagged_letters():
    atoms = letter_atoms(AB, ("a", "b"), X2)
    assert run(atoms, ("a{x1}", "b{x2}"))
    assert run(atoms, ("b{}", "a{x1}", "b{x2}"))
    assert not run(atoms, ("b{x1}", "b{x2}"))
    assert not run(atoms, ("a{x1}", "a{x2}"))
    assert not run(atoms, ("a{x1,x2}", "b{}"))  # x1 and x2 on one a-position


def test_letter_atoms_same_position_same_letter():
    atoms = letter_atoms(AB, ("a", "a"), X2)
    assert run(atoms, ("a{x1,x2}", "b{}"))
    assert not run(atoms, ("b{x1,x2}", "a{}"))


# -- the ceiling ------------------------------------------------------------------


def test_ceiling_of_bstar_is_letter_b_at_x1():
    ceil = ceiling(bstar(), 1)
    legal = legal_structures(AB, X1)
    for n in range(1, 6):
        for w in product("ab", repeat=n):
            for p in range(1, n + 1):
                s = tag(w, (p,), X1)
                assert run(ceil, s) == (w[p - 1] == "b")
    assert decide("subset", ceil, legal) == (True, None)


def test_ceiling_of_empty_is_empty():
    assert decide("empty", ceiling(empty_language(AB), 1)) == (True, None)
    assert decide("empty", ceiling(empty_language(AB), 2)) == (True, None)


def test_ceiling_monotone_under_inclusion():
    rng = random.Random(107)
    for _ in range(15):
        x, y = random_dfa(rng), random_dfa(rng)
        smaller = intersection(x, y)
        for d in (1, 2):
            assert decide("subset", ceiling(smaller, d), ceiling(x, d)) == (True, None)


# -- the closed ceiling language -----------------------------------------------------


def test_ceiling_language_examples():
    assert decide("equiv", pi1_ceiling_language(bstar(), 1), bstar()) == (True, None)

    lang = b_star_a_b_star()
    expected = complement(single_word(AB, "b"))
    assert decide("equiv", pi1_ceiling_language(lang, 1), expected) == (True, None)

    eps = single_word(AB, ())
    assert decide("equiv", pi1_ceiling_language(empty_language(AB), 1), eps) == (True, None)


def test_ceiling_language_contains_input():
    rng = random.Random(109)
    for _ in range(20):
        lang = random_dfa(rng)
        for d in (1, 2):
            assert decide("subset", lang, pi1_ceiling_language(lang, d)) == (True, None)


def test_ceiling_language_idempotent():
    rng = random.Random(113)
    for _ in range(10):
        lang = random_dfa(rng)
        once = pi1_ceiling_language(lang, 1)
        twice = pi1_ceiling_language(once, 1)
        assert decide("equiv", once, twice) == (True, None)


def test_ceiling_language_exact_on_universal_sentences_sample():
    for text, alphabet, d in PI1_CORPUS[:5]:
        lang = compile_sentence(sentence(text, alphabet))
        assert decide("equiv", pi1_ceiling_language(lang, d), lang) == (True, None)


def test_ceiling_language_via_forall_semantics():
    # brute-force the universal closure of the ceiling automaton directly
    lang = b_star_a_b_star()
    ceil = ceiling(lang, 1)
    closed = pi1_ceiling_language(lang, 1)
    for w in all_words(AB, 6):
        if w:
            expected = all(run(ceil, tag(w, (p,), X1)) for p in range(1, len(w) + 1))
        else:
            expected = True
        assert run(closed, w) == expected


def test_ceiling_rejects_bad_block_length():
    with pytest.raises(ValueError):
        ceiling(bstar(), 0)
