"""Decide and emit iterated-difference decompositions of regular languages
into universal first-order sentences with regular numerical predicates."""

from .automata import (
    Alphabet,
    AlphabetMismatchError,
    AutomataError,
    Dfa,
    FormatError,
    Nfa,
    ResourceLimitError,
    UnknownSymbolError,
    boolean,
    complement,
    decide,
    determinize,
    difference,
    format_automaton,
    format_word,
    intersection,
    map_letters,
    minimize,
    parse_automaton,
    parse_word,
    preimage,
    run,
    to_dfa,
    to_dot,
    union,
)
from .structures import (
    TaggedAlphabet,
    VarSet,
    cylindrify,
    exists_close,
    forall_close,
    legal_structures,
    project,
    tag,
    tagged_alphabet,
    untag,
)
from .hausdorff import (
    BoolFunc,
    Chain,
    eval_chain,
    is_monotone,
    normal_form,
    upward_closure,
)
from .logic import (
    ClassificationError,
    Formula,
    NonRegularAtomError,
    ParseError,
    QuantClass,
    Sentence,
    SentenceChain,
    classify,
    compile_formula,
    compile_sentence,
    eval_sentence,
    evaluate,
    load_sentence,
    pad_block,
    parse,
    parse_sentence,
    to_difference_chain,
)
from .ceiling import ceiling, letter_atoms, pi1_ceiling_language, r_predicate
from .decompose import (
    DecompositionReport,
    DerivedChain,
    SearchResult,
    decompose,
    derived_chain,
    pi1_exact_test,
    search,
    sigma1_test,
    verify,
)

__version__ = "0.1.0"
