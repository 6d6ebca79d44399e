import random

import pytest

from diffchain.automata import (
    decide,
    difference,
    empty_language,
    run,
    single_word,
    universal_language,
    ResourceLimitError,
)
from diffchain.decompose import (
    decompose,
    derived_chain,
    pi1_exact_test,
    search,
    sigma1_test,
    verify,
)
from diffchain.logic import compile_sentence, to_difference_chain

from corpus import (
    AB,
    ABC,
    BSIGMA1_CORPUS,
    PI1_CORPUS,
    SIGMA1_CORPUS,
    astar_bstar,
    bstar,
    contains_a,
    parity_dfa,
    random_dfa,
    sentence,
)


def a_no_b():
    return compile_sentence(sentence("(exists x. a(x)) and (forall x. not b(x))", ABC))


def no_b():
    return compile_sentence(sentence("forall x. not b(x)", ABC))


# -- derived chains ----------------------------------------------------------------


def test_derived_chain_of_universal_language_closes_immediately():
    chain = derived_chain(bstar(), 1, 1)
    assert decide("equiv", chain.ceilings[0], bstar()) == (True, None)
    assert decide("empty", chain.languages[1]) == (True, None)


def test_derived_chain_of_empty_language():
    chain = derived_chain(empty_language(AB), 1, 1)
    eps = single_word(AB, ())
    assert decide("equiv", chain.ceilings[0], eps) == (True, None)
    assert decide("equiv", chain.languages[1], eps) == (True, None)


def test_derived_chain_contains_a_no_b():
    lang = a_no_b()
    chain = derived_chain(lang, 1, 2)
    no_a_no_b = compile_sentence(sentence("forall x. not a(x) and not b(x)", ABC))
    # second language: in the closure but not the language; here that is
    # "no a and no b" (the closure restores the words that dropped the a)
    d2 = chain.languages[1]
    expected = difference(no_a_no_b, single_word(ABC, "c"))
    assert decide("equiv", d2, expected) == (True, None)
    assert decide("empty", chain.languages[2]) == (True, None)


def test_derived_chain_invariants():
    rng = random.Random(211)
    for _ in range(10):
        lang = random_dfa(rng)
        chain = derived_chain(lang, 1, 2)
        for i, c in enumerate(chain.ceilings):
            assert decide("subset", chain.languages[i], c) == (True, None)
            reconstructed = difference(c, chain.languages[i + 1])
            assert decide("equiv", chain.languages[i], reconstructed) == (True, None)


def test_derived_chain_resource_error_carries_link():
    with pytest.raises(ResourceLimitError) as e:
        derived_chain(astar_bstar(), 2, 1, cap=6)
    assert "link 1" in str(e.value)


# -- the decision ---------------------------------------------------------------------


def test_decompose_no_b_single_term():
    report = decompose(no_b(), 1, 1)
    assert report.success
    assert len(report.chain) == 1
    assert decide("equiv", report.chain[0], no_b()) == (True, None)
    assert verify(report.chain, no_b())


def test_decompose_a_no_b_needs_two_terms():
    lang = a_no_b()
    first = decompose(lang, 1, 1)
    assert not first.success
    assert first.residual is not None and first.witness is not None
    assert run(first.residual, first.witness)

    second = decompose(lang, 1, 2)
    assert second.success
    assert verify(second.chain, lang)
    # the canonical chain agrees with the syntactic normalization
    links = to_difference_chain(sentence("(exists x. a(x)) and (forall x. not b(x))", ABC))
    compiled = [compile_sentence(link) for link in links.links]
    assert verify(compiled, lang)


def test_decompose_report_skeleton_defines_the_chain():
    lang = a_no_b()
    report = decompose(lang, 1, 2)
    assert report.skeleton is not None and len(report.skeleton) == 2
    for link_skeleton in report.skeleton:
        assert [p.letters for p in link_skeleton.disjuncts] == [("a",), ("b",), ("c",)]


def test_decompose_parity_always_fails_small_parameters():
    parity = parity_dfa()
    for d in (1, 2):
        for k in (1, 2, 3):
            report = decompose(parity, d, k)
            assert not report.success
            assert run(report.residual, report.witness)


def test_decompose_epsilon_note():
    report = decompose(empty_language(AB), 1, 1)
    assert not report.success
    assert report.witness == ()
    assert report.epsilon_note
    # the language of only the empty word IS a one-term chain
    eps_report = decompose(single_word(AB, ()), 1, 1)
    assert eps_report.success


def test_decompose_success_is_exact_reconstruction():
    for text, alphabet, d, k in BSIGMA1_CORPUS[:4]:
        lang = compile_sentence(sentence(text, alphabet))
        report = decompose(lang, d, k)
        assert report.success
        assert verify(report.chain, lang)


# -- special cases ----------------------------------------------------------------------


def test_pi1_exact_examples():
    assert pi1_exact_test(bstar(), 1) == (True, None)
    ok, witness = pi1_exact_test(astar_bstar(), 1)
    assert not ok and witness is not None
    assert pi1_exact_test(astar_bstar(), 2) == (True, None)
    ok, _ = pi1_exact_test(parity_dfa(), 2)
    assert not ok


def test_pi1_exact_matches_single_term_decompose():
    rng = random.Random(223)
    for _ in range(12):
        lang = random_dfa(rng)
        assert pi1_exact_test(lang, 1)[0] == decompose(lang, 1, 1).success


def test_sigma1_examples():
    assert sigma1_test(contains_a(), 1) == (True, None)
    assert sigma1_test(empty_language(AB), 1) == (True, None)
    ok, _ = sigma1_test(parity_dfa(), 2)
    assert not ok


def test_verify_basics():
    lang = contains_a()
    assert verify([lang], lang)
    top = universal_language(AB)
    assert verify([top, top], empty_language(AB))
    assert not verify([top], contains_a())


# -- search ------------------------------------------------------------------------------


def test_search_a_no_b():
    result = search(a_no_b(), 2, 2)
    assert result.found == (1, 2)
    assert (1, 1) in result.residual_states
    assert not result.errors


def test_search_bstar():
    assert search(bstar(), 1, 1).found == (1, 1)


def test_search_parity_exhausts():
    result = search(parity_dfa(), 2, 3)
    assert result.found is None
    assert set(result.residual_states) == {(d, k) for d in (1, 2) for k in (1, 2, 3)}
    assert all(v >= 1 for v in result.residual_states.values())


def test_search_records_resource_errors_and_continues():
    result = search(astar_bstar(), 2, 1, cap=20)
    assert (2, 1) in result.errors
    # the d=1 cell still ran: a*b* is not a one-variable universal language
    assert (1, 1) in result.residual_states
    assert result.found is None


# -- parameter monotonicity ----------------------------------------------------------------


def test_success_survives_wider_blocks_and_two_more_terms():
    for text, alphabet, d, k in BSIGMA1_CORPUS[:3]:
        lang = compile_sentence(sentence(text, alphabet))
        assert decompose(lang, d, k).success
        assert decompose(lang, d + 1, k).success
        assert decompose(lang, d, k + 2).success
