"""The tightest universal over-approximation of a regular language.

For a language L, a block length d and a letter tuple a in A^d, the
predicate automaton accepts a structure w(i) exactly when some v in L has
length |w| and carries the tuple a at the positions i.  It is numerical:
membership never depends on the letters written at the structure's own
positions.  The d-ceiling of L is the disjunction over all tuples a of
"the tagged positions spell a, and the predicate for a holds"; closing it
universally gives the smallest d-block universal language containing L.
"""

from __future__ import annotations

from itertools import product as iter_product

from .automata import (
    DEFAULT_STATE_CAP,
    Dfa,
    Nfa,
    determinize,
    intersection,
    minimize,
    union,
)
from .structures import (
    VarSet,
    forall_close,
    legal_structures,
    split_tagged,
    tagged_alphabet,
)

LetterTuple = tuple[str, ...]


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def r_predicate(lang: Dfa, letters: LetterTuple, vars: VarSet, cap: int = DEFAULT_STATE_CAP) -> Dfa:
    """Structures w(i) such that some word of ``lang`` of length |w| carries
    ``letters`` at the tagged positions.

    Built by replacing each original edge on letter c with edges on every
    (b, S) where S only places variables whose tuple letter is c; the letter
    read in the structure itself is unconstrained, which is what makes the
    result a numerical predicate.  Intersecting with the legal structures
    enforces each variable exactly once.
    """
    if len(letters) != len(vars) or not letters:
        raise ValueError("need one letter per variable, at least one")
    for c in letters:
        if c not in lang.alphabet:
            raise ValueError(f"letter {c!r} not in the language alphabet")
    tagged = tagged_alphabet(lang.alphabet, vars)
    transitions = set()
    for q in range(lang.n_states):
        for ci, c in enumerate(lang.alphabet):
            q2 = lang.delta[q][ci]
            allowed = 0
            for j, aj in enumerate(letters):
                if aj == c:
                    allowed |= 1 << j
            for b in lang.alphabet:
                for mask in _submasks(allowed):
                    transitions.add((q, tagged.symbol(b, mask), q2))
    nfa = Nfa(tagged, lang.n_states, frozenset([lang.initial]), lang.accepting, frozenset(transitions))
    det = determinize(nfa, cap)
    return intersection(det, legal_structures(lang.alphabet, vars), cap)


def letter_atoms(lang_alphabet, letters: LetterTuple, vars: VarSet) -> Dfa:
    """Structures whose position tagged with the j-th variable carries the
    j-th letter of the tuple (and every variable placed exactly once)."""
    if len(letters) != len(vars) or not letters:
        raise ValueError("need one letter per variable, at least one")
    tagged = tagged_alphabet(lang_alphabet, vars)
    d = len(vars)
    full = (1 << d) - 1
    sink = 1 << d
    rows = []
    for seen in range(1 << d):
        row = []
        for sym in tagged:
            b, tags = split_tagged(sym)
            mask = tagged.subset_mask(tags)
            if mask & seen or any(letters[j] != b for j in range(d) if mask >> j & 1):
                row.append(sink)
            else:
                row.append(seen | mask)
        rows.append(tuple(row))
    rows.append((sink,) * len(tagged))
    return minimize(Dfa(tagged, sink + 1, 0, frozenset([full]), tuple(rows)))


def ceiling(lang: Dfa, d: int, cap: int = DEFAULT_STATE_CAP) -> Dfa:
    """Quantifier-free d-ceiling, as an automaton over tagged structures:
    the union over all letter tuples of (tuple spelled at the tags) AND
    (tuple predicate).  Tuples are enumerated in alphabet order and the
    union is built as a balanced tree with minimization at every node."""
    if d < 1:
        raise ValueError("block length must be at least 1")
    vars = VarSet.canonical(d)
    disjuncts = [
        intersection(
            letter_atoms(lang.alphabet, letters, vars),
            r_predicate(lang, letters, vars, cap),
            cap,
        )
        for letters in iter_product(tuple(lang.alphabet), repeat=d)
    ]
    while len(disjuncts) > 1:
        merged = [
            union(disjuncts[i], disjuncts[i + 1], cap)
            for i in range(0, len(disjuncts) - 1, 2)
        ]
        if len(disjuncts) % 2:
            merged.append(disjuncts[-1])
        disjuncts = merged
    return intersection(disjuncts[0], legal_structures(lang.alphabet, vars), cap)


def pi1_ceiling_language(lang: Dfa, d: int, cap: int = DEFAULT_STATE_CAP) -> Dfa:
    """Universal closure of the d-ceiling: the tightest d-block universal
    over-approximation of the language.  Always a superset of the input."""
    return forall_close(ceiling(lang, d, cap), cap)
