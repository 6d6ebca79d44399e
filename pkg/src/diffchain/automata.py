"""Finite automata over arbitrary finite alphabets.

Symbols are plain strings; tagged symbols such as ``b{x1,x3}`` are ordinary
symbols to this module (structures.py gives them meaning).  Deterministic
automata are total: every (state, symbol) pair has a successor, with
rejecting sinks materialized explicitly.  ``minimize`` returns a canonical
machine (breadth-first state numbering in alphabet order), so language-equal
inputs minimize to structurally identical results.

All values are immutable after construction; every operation is a pure
function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

Word = tuple[str, ...]

DEFAULT_STATE_CAP = 100_000


class AutomataError(Exception):
    """Base class for automata-layer failures."""


class AlphabetMismatchError(AutomataError):
    """Binary operation applied to automata over different alphabets."""


class UnknownSymbolError(AutomataError):
    """A symbol outside the relevant alphabet was used."""


class ResourceLimitError(AutomataError):
    """A construction would exceed the configured state cap."""


class FormatError(AutomataError):
    """Malformed automaton or word text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


@dataclass(frozen=True, eq=False)
class Alphabet:
    """Ordered set of symbol names; the order fixes serialization and witness tie-breaks."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        if not isinstance(self.symbols, tuple):
            # Accepts any iterable; note a plain string becomes its characters.
            object.__setattr__(self, "symbols", tuple(self.symbols))
        if not self.symbols:
            raise ValueError("alphabet must be non-empty")
        index: dict[str, int] = {}
        for i, name in enumerate(self.symbols):
            if not name or any(ch.isspace() for ch in name):
                raise ValueError(f"bad symbol name: {name!r}")
            if name in index:
                raise ValueError(f"duplicate symbol: {name!r}")
            index[name] = i
        object.__setattr__(self, "_index", index)

    # Equality is by symbol sequence only, so subclasses carrying extra
    # bookkeeping still compare equal to a plain Alphabet.
    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __hash__(self):
        return hash(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def __contains__(self, name):
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownSymbolError(f"symbol {name!r} not in alphabet") from None


@dataclass(frozen=True)
class Nfa:
    """Nondeterministic automaton; states are 0..n_states-1, no epsilon moves."""

    alphabet: Alphabet
    n_states: int
    initial: frozenset[int]
    accepting: frozenset[int]
    transitions: frozenset[tuple[int, str, int]]

    def __post_init__(self):
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        if self.n_states < 0:
            raise ValueError("negative state count")
        for q in self.initial | self.accepting:
            if not 0 <= q < self.n_states:
                raise ValueError(f"state {q} out of range")
        for q, sym, r in self.transitions:
            if not (0 <= q < self.n_states and 0 <= r < self.n_states):
                raise ValueError(f"transition ({q},{sym!r},{r}) out of range")
            if sym not in self.alphabet:
                raise UnknownSymbolError(f"transition symbol {sym!r} not in alphabet")


@dataclass(frozen=True)
class Dfa:
    """Deterministic automaton with a total transition function.

    ``delta[q][i]`` is the successor of state ``q`` on the i-th alphabet
    symbol.
    """

    alphabet: Alphabet
    n_states: int
    initial: int
    accepting: frozenset[int]
    delta: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "delta", tuple(tuple(row) for row in self.delta))
        if self.n_states < 1:
            raise ValueError("a Dfa needs at least one state")
        if not 0 <= self.initial < self.n_states:
            raise ValueError("initial state out of range")
        if any(not 0 <= q < self.n_states for q in self.accepting):
            raise ValueError("accepting state out of range")
        if len(self.delta) != self.n_states:
            raise ValueError("delta must have one row per state")
        width = len(self.alphabet)
        for row in self.delta:
            if len(row) != width or any(not 0 <= t < self.n_states for t in row):
                raise ValueError("delta is not a total function into the state set")

    def step(self, state: int, symbol: str) -> int:
        return self.delta[state][self.alphabet.index(symbol)]


def nfa_from_dfa(d: Dfa) -> Nfa:
    trans = frozenset(
        (q, sym, d.delta[q][i])
        for q in range(d.n_states)
        for i, sym in enumerate(d.alphabet)
    )
    return Nfa(d.alphabet, d.n_states, frozenset([d.initial]), d.accepting, trans)


def run(d: Dfa, word: Iterable[str]) -> bool:
    """Membership: does ``d`` accept the word (an iterable of symbols)?"""
    q = d.initial
    for sym in word:
        q = d.delta[q][d.alphabet.index(sym)]
    return q in d.accepting


def determinize(n: Nfa, cap: int = DEFAULT_STATE_CAP) -> Dfa:
    """Subset construction.  Output is trimmed to reachable subsets but not
    minimized; raises ResourceLimitError past ``cap`` discovered subsets."""
    nsym = len(n.alphabet)
    move: list[dict[int, set[int]]] = [dict() for _ in range(nsym)]
    for q, sym, r in n.transitions:
        move[n.alphabet.index(sym)].setdefault(q, set()).add(r)

    start = frozenset(n.initial)
    index: dict[frozenset[int], int] = {start: 0}
    subsets = [start]
    rows: list[tuple[int, ...]] = []
    i = 0
    while i < len(subsets):
        cur = subsets[i]
        i += 1
        row = []
        for s in range(nsym):
            tgt = frozenset(t for q in cur for t in move[s].get(q, ()))
            j = index.get(tgt)
            if j is None:
                if len(subsets) >= cap:
                    raise ResourceLimitError(
                        f"determinization exceeded the state cap ({cap})"
                    )
                j = len(subsets)
                index[tgt] = j
                subsets.append(tgt)
            row.append(j)
        rows.append(tuple(row))
    accepting = frozenset(i for i, sub in enumerate(subsets) if sub & n.accepting)
    return Dfa(n.alphabet, len(subsets), 0, accepting, tuple(rows))


def _hopcroft(n: int, nsym: int, delta: list[tuple[int, ...]], accepting: frozenset[int]) -> list[int]:
    """Partition refinement; returns a block id per state."""
    inv: list[list[list[int]]] = [[[] for _ in range(n)] for _ in range(nsym)]
    for q in range(n):
        row = delta[q]
        for s in range(nsym):
            inv[s][row[s]].append(q)

    blocks: list[set[int]] = []
    for group in (set(accepting), set(range(n)) - set(accepting)):
        if group:
            blocks.append(group)
    block_of = [0] * n
    for i, b in enumerate(blocks):
        for q in b:
            block_of[q] = i

    work = list(range(len(blocks)))
    in_work = set(work)
    while work:
        bi = work.pop()
        in_work.discard(bi)
        splitter = tuple(blocks[bi])
        for s in range(nsym):
            preimage: set[int] = set()
            for q in splitter:
                preimage.update(inv[s][q])
            touched: dict[int, set[int]] = {}
            for q in preimage:
                touched.setdefault(block_of[q], set()).add(q)
            for bj, inter in touched.items():
                if len(inter) == len(blocks[bj]):
                    continue
                rest = blocks[bj] - inter
                blocks[bj] = inter
                new_id = len(blocks)
                blocks.append(rest)
                for q in rest:
                    block_of[q] = new_id
                if bj in in_work:
                    work.append(new_id)
                    in_work.add(new_id)
                else:
                    smaller = new_id if len(rest) <= len(inter) else bj
                    work.append(smaller)
                    in_work.add(smaller)
    return block_of


def minimize(d: Dfa) -> Dfa:
    """Minimal total Dfa with canonical state numbering.

    States are numbered breadth-first from the initial state following the
    alphabet order, so any two Dfas for the same language minimize to
    structurally identical values.
    """
    nsym = len(d.alphabet)

    # restrict to reachable states
    order = [d.initial]
    seen = {d.initial}
    for q in order:
        for t in d.delta[q]:
            if t not in seen:
                seen.add(t)
                order.append(t)
    remap = {q: i for i, q in enumerate(order)}
    delta = [tuple(remap[t] for t in d.delta[q]) for q in order]
    accepting = frozenset(remap[q] for q in d.accepting if q in remap)
    n = len(order)

    block_of = _hopcroft(n, nsym, delta, accepting)

    # canonical breadth-first renumbering of blocks
    rep: dict[int, int] = {}
    for q in range(n):
        rep.setdefault(block_of[q], q)
    border = [block_of[0]]
    bseen = {block_of[0]}
    brows: dict[int, list[int]] = {}
    pos = 0
    while pos < len(border):
        b = border[pos]
        pos += 1
        row = []
        for s in range(nsym):
            tb = block_of[delta[rep[b]][s]]
            if tb not in bseen:
                bseen.add(tb)
                border.append(tb)
            row.append(tb)
        brows[b] = row
    renum = {b: i for i, b in enumerate(border)}
    new_delta = tuple(tuple(renum[t] for t in brows[b]) for b in border)
    new_acc = frozenset(renum[b] for b in border if rep[b] in accepting)
    return Dfa(d.alphabet, len(border), 0, new_acc, new_delta)


def _product(l: Dfa, r: Dfa, keep: Callable[[bool, bool], bool], cap: int) -> Dfa:
    if l.alphabet != r.alphabet:
        raise AlphabetMismatchError("product of automata over different alphabets")
    nsym = len(l.alphabet)
    start = (l.initial, r.initial)
    index = {start: 0}
    pairs = [start]
    rows: list[tuple[int, ...]] = []
    i = 0
    while i < len(pairs):
        p, q = pairs[i]
        i += 1
        row = []
        for s in range(nsym):
            tgt = (l.delta[p][s], r.delta[q][s])
            j = index.get(tgt)
            if j is None:
                if len(pairs) >= cap:
                    raise ResourceLimitError(f"product exceeded the state cap ({cap})")
                j = len(pairs)
                index[tgt] = j
                pairs.append(tgt)
            row.append(j)
        rows.append(tuple(row))
    accepting = frozenset(
        i for i, (p, q) in enumerate(pairs) if keep(p in l.accepting, q in r.accepting)
    )
    return minimize(Dfa(l.alphabet, len(pairs), 0, accepting, tuple(rows)))


def complement(d: Dfa) -> Dfa:
    flipped = frozenset(range(d.n_states)) - d.accepting
    return minimize(Dfa(d.alphabet, d.n_states, d.initial, flipped, d.delta))


def intersection(l: Dfa, r: Dfa, cap: int = DEFAULT_STATE_CAP) -> Dfa:
    return _product(l, r, lambda a, b: a and b, cap)


def union(l: Dfa, r: Dfa, cap: int = DEFAULT_STATE_CAP) -> Dfa:
    return _product(l, r, lambda a, b: a or b, cap)


def difference(l: Dfa, r: Dfa, cap: int = DEFAULT_STATE_CAP) -> Dfa:
    """Words accepted by ``l`` and not by ``r``."""
    return _product(l, r, lambda a, b: a and not b, cap)


_BOOLEAN_OPS = {
    "and": intersection,
    "or": union,
    "diff": difference,
}


def boolean(op: str, lhs: Dfa, rhs: Dfa | None = None) -> Dfa:
    """Boolean combination; ``op`` is one of and/or/diff/not.  Results are
    minimized."""
    if op == "not":
        if rhs is not None:
            raise ValueError("'not' is unary")
        return complement(lhs)
    try:
        fn = _BOOLEAN_OPS[op]
    except KeyError:
        raise ValueError(f"unknown boolean op {op!r}") from None
    if rhs is None:
        raise ValueError(f"{op!r} needs two automata")
    return fn(lhs, rhs)


def _shortest(starts: Iterable[tuple], step, hit) -> Word | None:
    """Generic breadth-first shortest-word search in alphabet order.

    The first hit found is the shortest matching word, ties broken
    lexicographically by symbol order.
    """
    queue = list(starts)
    labels: list[Word] = [() for _ in queue]
    seen = set(queue)
    pos = 0
    while pos < len(queue):
        state = queue[pos]
        word = labels[pos]
        pos += 1
        if hit(state):
            return word
        for sym, nxt in step(state):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
                labels.append(word + (sym,))
    return None


def shortest_word(d: Dfa) -> Word | None:
    """Shortest accepted word, or None if the language is empty."""
    return _shortest(
        [d.initial],
        lambda q: ((sym, d.delta[q][i]) for i, sym in enumerate(d.alphabet)),
        lambda q: q in d.accepting,
    )


def _shortest_pair(l: Dfa, r: Dfa, keep: Callable[[bool, bool], bool]) -> Word | None:
    if l.alphabet != r.alphabet:
        raise AlphabetMismatchError("comparison of automata over different alphabets")
    return _shortest(
        [(l.initial, r.initial)],
        lambda pq: (
            (sym, (l.delta[pq[0]][i], r.delta[pq[1]][i]))
            for i, sym in enumerate(l.alphabet)
        ),
        lambda pq: keep(pq[0] in l.accepting, pq[1] in r.accepting),
    )


def decide(pred: str, lhs: Dfa, rhs: Dfa | None = None) -> tuple[bool, Word | None]:
    """Decision predicates with shortest counterexample witnesses.

    ``empty``:  witness is a shortest accepted word when non-empty.
    ``subset``: witness is a shortest word of lhs - rhs when not included.
    ``equiv``:  witness is a shortest word of the symmetric difference.
    """
    if pred == "empty":
        if rhs is not None:
            raise ValueError("'empty' is unary")
        w = shortest_word(lhs)
        return (w is None, w)
    if rhs is None:
        raise ValueError(f"{pred!r} needs two automata")
    if pred == "subset":
        w = _shortest_pair(lhs, rhs, lambda a, b: a and not b)
    elif pred == "equiv":
        w = _shortest_pair(lhs, rhs, lambda a, b: a != b)
    else:
        raise ValueError(f"unknown predicate {pred!r}")
    return (w is None, w)


def map_letters(n: Nfa, mapping: Mapping[str, str], target: Alphabet) -> Nfa:
    """Relabel every transition through ``mapping``; the language becomes the
    letterwise image of the input language."""
    for sym in n.alphabet:
        if sym not in mapping:
            raise UnknownSymbolError(f"mapping not defined on {sym!r}")
        if mapping[sym] not in target:
            raise UnknownSymbolError(f"mapping image {mapping[sym]!r} not in target alphabet")
    trans = frozenset((q, mapping[sym], r) for q, sym, r in n.transitions)
    return Nfa(target, n.n_states, n.initial, n.accepting, trans)


def preimage(d: Dfa, mapping: Mapping[str, str], source: Alphabet) -> Dfa:
    """Dfa accepting w iff ``d`` accepts the letterwise image of w.

    Determinism is preserved directly: the new machine reads a source symbol
    and follows d's move on its image.
    """
    for sym in source:
        if sym not in mapping:
            raise UnknownSymbolError(f"mapping not defined on {sym!r}")
    cols = [d.alphabet.index(mapping[sym]) for sym in source]
    rows = tuple(tuple(d.delta[q][c] for c in cols) for q in range(d.n_states))
    return Dfa(source, d.n_states, d.initial, d.accepting, rows)


# -- small constructors ------------------------------------------------------

def empty_language(alphabet: Alphabet) -> Dfa:
    return Dfa(alphabet, 1, 0, frozenset(), ((0,) * len(alphabet),))


def universal_language(alphabet: Alphabet) -> Dfa:
    return Dfa(alphabet, 1, 0, frozenset([0]), ((0,) * len(alphabet),))


def single_word(alphabet: Alphabet, word: Iterable[str]) -> Dfa:
    """The one-word language {word}."""
    syms = tuple(word)
    n = len(syms) + 2  # word spine plus sink
    sink = n - 1
    rows = []
    for pos in range(len(syms) + 1):
        row = []
        for sym in alphabet:
            if pos < len(syms) and sym == syms[pos]:
                row.append(pos + 1)
            else:
                row.append(sink)
        rows.append(tuple(row))
    rows.append((sink,) * len(alphabet))
    return minimize(Dfa(alphabet, n, 0, frozenset([len(syms)]), tuple(rows)))


# -- text format -------------------------------------------------------------

def _dead_states(d: Dfa) -> frozenset[int]:
    """States from which no accepting state is reachable."""
    preds: list[set[int]] = [set() for _ in range(d.n_states)]
    for q in range(d.n_states):
        for t in d.delta[q]:
            preds[t].add(q)
    alive = set(d.accepting)
    stack = list(alive)
    while stack:
        q = stack.pop()
        for p in preds[q]:
            if p not in alive:
                alive.add(p)
                stack.append(p)
    return frozenset(range(d.n_states)) - alive


def format_automaton(d: Dfa) -> str:
    """Canonical text rendering.  Transitions into (or out of) dead states
    are omitted; missing (state, symbol) pairs mean a rejecting sink."""
    dead = _dead_states(d)
    lines = [
        "alphabet: " + " ".join(d.alphabet),
        f"states: {d.n_states}",
        f"initial: {d.initial}",
        "accepting: " + " ".join(str(q) for q in sorted(d.accepting)),
    ]
    lines[-1] = lines[-1].rstrip()
    for q in range(d.n_states):
        if q in dead:
            continue
        for i, sym in enumerate(d.alphabet):
            t = d.delta[q][i]
            if t in dead:
                continue
            lines.append(f"{q} {sym} -> {t}")
    return "\n".join(lines) + "\n"


def parse_automaton(text: str) -> Nfa:
    """Parse the text format.  The reader is tolerant: several initial states
    are allowed and duplicate (state, symbol) lines make the result
    nondeterministic."""
    fields: dict[str, tuple[str, int]] = {}
    triples: list[tuple[int, str, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" in line and "->" not in line:
            key, _, rest = line.partition(":")
            key = key.strip()
            if key in fields:
                raise FormatError(f"duplicate field {key!r}", lineno)
            fields[key] = (rest.strip(), lineno)
        else:
            parts = line.split()
            if len(parts) != 4 or parts[2] != "->":
                raise FormatError("expected 'STATE SYMBOL -> STATE'", lineno)
            try:
                q, t = int(parts[0]), int(parts[3])
            except ValueError:
                raise FormatError("state ids must be integers", lineno) from None
            triples.append((q, parts[1], t, lineno))

    def field(key: str) -> tuple[str, int]:
        if key not in fields:
            raise FormatError(f"missing '{key}:' line")
        return fields[key]

    raw_alpha, lineno = field("alphabet")
    try:
        alphabet = Alphabet(tuple(raw_alpha.split()))
    except ValueError as e:
        raise FormatError(str(e), lineno) from None

    raw_states, lineno = field("states")
    try:
        n_states = int(raw_states)
    except ValueError:
        raise FormatError("states must be an integer", lineno) from None
    if n_states < 0:
        raise FormatError("states must be non-negative", lineno)

    def state_list(key: str) -> frozenset[int]:
        raw, lineno = field(key)
        out = set()
        for tok in raw.split():
            try:
                q = int(tok)
            except ValueError:
                raise FormatError(f"bad state id {tok!r}", lineno) from None
            if not 0 <= q < n_states:
                raise FormatError(f"state {q} out of range", lineno)
            out.add(q)
        return frozenset(out)

    initial = state_list("initial")
    accepting = state_list("accepting")

    transitions = set()
    for q, sym, t, lineno in triples:
        if sym not in alphabet:
            raise FormatError(f"unknown symbol {sym!r}", lineno)
        if not (0 <= q < n_states and 0 <= t < n_states):
            raise FormatError("transition state out of range", lineno)
        transitions.add((q, sym, t))
    return Nfa(alphabet, n_states, initial, accepting, frozenset(transitions))


def to_dfa(n: Nfa, cap: int = DEFAULT_STATE_CAP) -> Dfa:
    return minimize(determinize(n, cap))


def to_dot(d: Dfa, name: str = "automaton") -> str:
    """Graphviz rendering; dead states are dropped for readability."""
    dead = _dead_states(d)
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  __start [shape=point, label=""];']
    for q in range(d.n_states):
        if q in dead:
            continue
        shape = "doublecircle" if q in d.accepting else "circle"
        lines.append(f"  {q} [shape={shape}];")
    lines.append(f"  __start -> {d.initial};")
    for q in range(d.n_states):
        if q in dead:
            continue
        grouped: dict[int, list[str]] = {}
        for i, sym in enumerate(d.alphabet):
            t = d.delta[q][i]
            if t not in dead:
                grouped.setdefault(t, []).append(sym)
        for t, syms in sorted(grouped.items()):
            label = ", ".join(syms)
            lines.append(f'  {q} -> {t} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- words -------------------------------------------------------------------

def parse_word(alphabet: Alphabet, text: str) -> Word:
    """Parse a word: space-separated symbols, or (for purely single-character
    alphabets) a compact run like ``abba``.  The empty string is the empty
    word."""
    text = text.strip()
    if not text:
        return ()
    if " " in text:
        parts = tuple(text.split())
    elif all(len(sym) == 1 for sym in alphabet):
        parts = tuple(text)
    else:
        parts = (text,)
    for sym in parts:
        if sym not in alphabet:
            raise UnknownSymbolError(f"symbol {sym!r} not in alphabet")
    return parts


def format_word(alphabet: Alphabet, word: Word) -> str:
    if all(len(sym) == 1 for sym in alphabet):
        return "".join(word)
    return " ".join(word)
