"""Words tagged with first-order variables, and quantification over tags.

A word over the tagged alphabet pairs each letter with a set of variables;
it is a *legal structure* for a variable set V when every variable of V
occurs in exactly one position's tag.  Tagged symbols render as ``a{}`` or
``b{x1,x3}`` (variables sorted by index).  With no variables the tagged
alphabet collapses to the base alphabet itself.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .automata import (
    DEFAULT_STATE_CAP,
    Alphabet,
    Dfa,
    Word,
    complement,
    determinize,
    difference,
    intersection,
    map_letters,
    minimize,
    nfa_from_dfa,
    preimage,
)

_VAR_RE = re.compile(r"^x[1-9][0-9]*$")


@dataclass(frozen=True, eq=False)
class VarSet:
    """Ordered set of canonical variable names (x1, x2, ...), sorted by index."""

    names: tuple[str, ...]

    def __post_init__(self):
        if not isinstance(self.names, tuple):
            object.__setattr__(self, "names", tuple(self.names))
        for name in self.names:
            if not _VAR_RE.match(name):
                raise ValueError(f"variable names are canonicalized to x1, x2, ...; got {name!r}")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable")
        object.__setattr__(self, "names", tuple(sorted(self.names, key=var_index)))

    @staticmethod
    def canonical(d: int) -> "VarSet":
        return VarSet(tuple(f"x{i}" for i in range(1, d + 1)))

    def __iter__(self):
        return iter(self.names)

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self.names

    def __eq__(self, other):
        return isinstance(other, VarSet) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def union(self, other: "VarSet") -> "VarSet":
        return VarSet(tuple(set(self.names) | set(other.names)))

    def minus(self, other: "VarSet") -> "VarSet":
        return VarSet(tuple(set(self.names) - set(other.names)))

    def issubset(self, other: "VarSet") -> bool:
        return set(self.names) <= set(other.names)


def var_index(name: str) -> int:
    return int(name[1:])


def render_tagged(letter: str, tags: Iterable[str]) -> str:
    inner = ",".join(sorted(tags, key=var_index))
    return f"{letter}{{{inner}}}"


def split_tagged(symbol: str) -> tuple[str, tuple[str, ...]]:
    """Inverse of render_tagged; plain symbols carry an empty tag set."""
    if not symbol.endswith("}"):
        return symbol, ()
    letter, brace, inner = symbol.partition("{")
    if not brace or not letter:
        raise ValueError(f"malformed tagged symbol {symbol!r}")
    inner = inner[:-1]
    return letter, (tuple(inner.split(",")) if inner else ())


@dataclass(frozen=True, eq=False)
class TaggedAlphabet(Alphabet):
    """Alphabet of (letter, variable subset) pairs.

    Symbol order is base order first, then tag subsets by bitmask (bit j of
    the mask is the j-th variable of ``vars``).  With an empty variable set
    the symbols are the base symbols themselves.
    """

    base: Alphabet = None  # type: ignore[assignment]
    vars: VarSet = None  # type: ignore[assignment]

    def subset_mask(self, tags: Iterable[str]) -> int:
        mask = 0
        for t in tags:
            mask |= 1 << self.vars.names.index(t)
        return mask

    def symbol(self, letter: str, mask: int) -> str:
        return self.symbols[self.base.index(letter) * (1 << len(self.vars)) + mask]


def tagged_alphabet(base: Alphabet, vars: VarSet) -> TaggedAlphabet:
    if isinstance(base, TaggedAlphabet):
        raise ValueError("base alphabet is already tagged")
    if not vars.names:
        return TaggedAlphabet(base.symbols, base=base, vars=vars)
    for letter in base:
        if "{" in letter or "}" in letter or "," in letter:
            raise ValueError(f"base symbol {letter!r} cannot be tagged")
    symbols = []
    d = len(vars)
    for letter in base:
        for mask in range(1 << d):
            tags = [vars.names[j] for j in range(d) if mask >> j & 1]
            symbols.append(render_tagged(letter, tags))
    return TaggedAlphabet(tuple(symbols), base=base, vars=vars)


def _require_tagged(d: Dfa) -> TaggedAlphabet:
    if not isinstance(d.alphabet, TaggedAlphabet):
        raise TypeError("expected an automaton over a tagged alphabet")
    return d.alphabet


def legal_structures(base: Alphabet, vars: VarSet) -> Dfa:
    """Dfa accepting exactly the legal V-structures: states track the subset
    of variables placed so far, plus a sink for repeats."""
    tagged = tagged_alphabet(base, vars)
    d = len(vars)
    if d == 0:
        return Dfa(tagged, 1, 0, frozenset([0]), ((0,) * len(tagged),))
    full = (1 << d) - 1
    sink = 1 << d
    rows = []
    for seen in range(1 << d):
        row = []
        for sym in tagged:
            _, tags = split_tagged(sym)
            mask = tagged.subset_mask(tags)
            row.append(sink if mask & seen else seen | mask)
        rows.append(tuple(row))
    rows.append((sink,) * len(tagged))
    return minimize(Dfa(tagged, sink + 1, 0, frozenset([full]), tuple(rows)))


def tag(word: Sequence[str], positions: Sequence[int], vars: VarSet) -> Word:
    """Attach variable x_j to position positions[j] (1-based); repeats allowed."""
    if len(positions) != len(vars):
        raise ValueError(f"expected {len(vars)} positions, got {len(positions)}")
    for p in positions:
        if not 1 <= p <= len(word):
            raise IndexError(f"position {p} out of range 1..{len(word)}")
    if not vars.names:
        return tuple(word)
    by_pos: dict[int, list[str]] = {}
    for name, p in zip(vars.names, positions):
        by_pos.setdefault(p, []).append(name)
    return tuple(
        render_tagged(letter, by_pos.get(p, ()))
        for p, letter in enumerate(word, start=1)
    )


def untag(structure: Sequence[str]) -> tuple[Word, dict[str, int]]:
    """Split a structure word into its plain word and variable placement."""
    letters = []
    assign: dict[str, int] = {}
    for p, sym in enumerate(structure, start=1):
        letter, tags = split_tagged(sym)
        letters.append(letter)
        for t in tags:
            if t in assign:
                raise ValueError(f"variable {t} tagged twice")
            assign[t] = p
    return tuple(letters), assign


def _drop_map(tagged: TaggedAlphabet, keep: VarSet) -> tuple[dict[str, str], TaggedAlphabet]:
    """Symbol map erasing all tags outside ``keep``; returns map and target."""
    target = tagged_alphabet(tagged.base, keep)
    mapping = {}
    for sym in tagged:
        letter, tags = split_tagged(sym)
        kept = [t for t in tags if t in keep]
        if keep.names:
            mapping[sym] = render_tagged(letter, kept)
        else:
            mapping[sym] = letter
    return mapping, target


def project(phi: Dfa, erase: VarSet, cap: int = DEFAULT_STATE_CAP) -> Dfa:
    """Existential projection: accepts u iff the erased variables can be
    placed somewhere in u (each exactly once) to give a word phi accepts."""
    tagged = _require_tagged(phi)
    if not erase.issubset(tagged.vars):
        raise ValueError("erased variables must belong to the automaton's variable set")
    keep = tagged.vars.minus(erase)
    legal = legal_structures(tagged.base, tagged.vars)
    constrained = intersection(phi, legal, cap)
    mapping, target = _drop_map(tagged, keep)
    mapped = map_letters(nfa_from_dfa(constrained), mapping, target)
    return minimize(determinize(mapped, cap))


def cylindrify(phi: Dfa, vars2: VarSet) -> Dfa:
    """Re-read phi over a larger variable set; the new variables' tags are
    ignored.  Callers wanting structure-validity must intersect with
    legal_structures themselves."""
    tagged = _require_tagged(phi)
    if not tagged.vars.issubset(vars2):
        raise ValueError("cylindrification only adds variables")
    mapping = {}
    target = tagged_alphabet(tagged.base, vars2)
    for sym in target:
        letter, tags = split_tagged(sym)
        kept = [t for t in tags if t in tagged.vars]
        mapping[sym] = render_tagged(letter, kept) if tagged.vars.names else letter
    return minimize(preimage(phi, mapping, target))


def _to_plain(phi: Dfa, cap: int) -> Dfa:
    """Project a tagged automaton to its base alphabet by erasing all tags."""
    tagged = _require_tagged(phi)
    mapping = {sym: split_tagged(sym)[0] for sym in tagged}
    mapped = map_letters(nfa_from_dfa(phi), mapping, tagged.base)
    return minimize(determinize(mapped, cap))


def _reread_plain(phi: Dfa) -> Dfa:
    base = _require_tagged(phi).base
    return minimize(Dfa(base, phi.n_states, phi.initial, phi.accepting, phi.delta))


def forall_close(phi: Dfa, cap: int = DEFAULT_STATE_CAP) -> Dfa:
    """Language of words w such that EVERY placement of the variables yields
    a structure accepted by phi.

    Computed as the complement of the projection of the legal structures
    rejected by phi.  The empty word is accepted vacuously whenever the
    variable set is non-empty.
    """
    tagged = _require_tagged(phi)
    if not tagged.vars.names:
        return _reread_plain(phi)
    legal = legal_structures(tagged.base, tagged.vars)
    bad = difference(legal, phi, cap)
    return complement(_to_plain(bad, cap))


def exists_close(phi: Dfa, cap: int = DEFAULT_STATE_CAP) -> Dfa:
    """Language of words w such that SOME placement of the variables yields a
    structure accepted by phi; the dual of forall_close under complement."""
    tagged = _require_tagged(phi)
    if not tagged.vars.names:
        return _reread_plain(phi)
    legal = legal_structures(tagged.base, tagged.vars)
    good = intersection(phi, legal, cap)
    return _to_plain(good, cap)
