"""First-order sentences on words: syntax, evaluation, compilation, and
normalization into iterated differences of universal sentences.

Concrete syntax:

    exists x. forall y. (a(x) and x < y) => not b(y)

with atoms ``a(x)`` (letter), ``x < y``, ``x = y``, ``x % q = r`` (1-based
position modulo), ``len % q = r``, ``div(x, y)``, ``true``, ``false``.
Quantifier bodies extend as far to the right as possible.  ``div`` is the
only non-regular atom: the evaluator supports it, the compiler rejects it.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iter_product

from .automata import (
    DEFAULT_STATE_CAP,
    Alphabet,
    Dfa,
    ResourceLimitError,
    Word,
    difference,
    empty_language,
    intersection,
    minimize,
    union,
    universal_language,
)
from .hausdorff import BoolFunc, minimal_elements, normal_form
from .structures import (
    VarSet,
    legal_structures,
    cylindrify,
    project,
    split_tagged,
    tagged_alphabet,
)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}")


class NonRegularAtomError(Exception):
    """The compiler met an evaluator-only atom."""


class ClassificationError(Exception):
    """The sentence is outside the class an operation requires."""


# -- abstract syntax -----------------------------------------------------------

class Formula:
    """Base class; all nodes are immutable and hashable."""

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class TrueAtom(Formula):
    pass


@dataclass(frozen=True)
class FalseAtom(Formula):
    pass


@dataclass(frozen=True)
class Letter(Formula):
    letter: str
    var: str


@dataclass(frozen=True)
class Less(Formula):
    x: str
    y: str


@dataclass(frozen=True)
class EqVar(Formula):
    x: str
    y: str


@dataclass(frozen=True)
class ModPos(Formula):
    """Position of ``var`` is congruent to r mod q (positions are 1-based)."""

    var: str
    r: int
    q: int


@dataclass(frozen=True)
class ModLen(Formula):
    """Word length is congruent to r mod q."""

    r: int
    q: int


@dataclass(frozen=True)
class Divides(Formula):
    """Position of x divides position of y.  Evaluator-only (not regular)."""

    x: str
    y: str


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Or(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Exists(Formula):
    vars: tuple[str, ...]
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    vars: tuple[str, ...]
    body: Formula


_ATOM_TYPES = (TrueAtom, FalseAtom, Letter, Less, EqVar, ModPos, ModLen, Divides)


@lru_cache(maxsize=None)
def free_vars(f: Formula) -> frozenset[str]:
    match f:
        case Letter(var=x) | ModPos(var=x):
            return frozenset([x])
        case Less(x=x, y=y) | EqVar(x=x, y=y) | Divides(x=x, y=y):
            return frozenset([x, y])
        case Not(body=b):
            return free_vars(b)
        case And(lhs=l, rhs=r) | Or(lhs=l, rhs=r) | Implies(lhs=l, rhs=r):
            return free_vars(l) | free_vars(r)
        case Exists(vars=vs, body=b) | Forall(vars=vs, body=b):
            return free_vars(b) - frozenset(vs)
        case _:
            return frozenset()


@lru_cache(maxsize=None)
def is_regular(f: Formula) -> bool:
    """True when no evaluator-only atom occurs."""
    match f:
        case Divides():
            return False
        case Not(body=b):
            return is_regular(b)
        case And(lhs=l, rhs=r) | Or(lhs=l, rhs=r) | Implies(lhs=l, rhs=r):
            return is_regular(l) and is_regular(r)
        case Exists(body=b) | Forall(body=b):
            return is_regular(b)
        case _:
            return True


@lru_cache(maxsize=None)
def has_quantifier(f: Formula) -> bool:
    match f:
        case Exists() | Forall():
            return True
        case Not(body=b):
            return has_quantifier(b)
        case And(lhs=l, rhs=r) | Or(lhs=l, rhs=r) | Implies(lhs=l, rhs=r):
            return has_quantifier(l) or has_quantifier(r)
        case _:
            return False


def rename_free(f: Formula, mapping: dict[str, str]) -> Formula:
    """Simultaneous substitution of free variable names."""

    def sub(name: str, bound: frozenset[str]) -> str:
        return name if name in bound else mapping.get(name, name)

    def walk(g: Formula, bound: frozenset[str]) -> Formula:
        match g:
            case Letter(letter=a, var=x):
                return Letter(a, sub(x, bound))
            case Less(x=x, y=y):
                return Less(sub(x, bound), sub(y, bound))
            case EqVar(x=x, y=y):
                return EqVar(sub(x, bound), sub(y, bound))
            case ModPos(var=x, r=r, q=q):
                return ModPos(sub(x, bound), r, q)
            case Divides(x=x, y=y):
                return Divides(sub(x, bound), sub(y, bound))
            case Not(body=b):
                return Not(walk(b, bound))
            case And(lhs=l, rhs=r):
                return And(walk(l, bound), walk(r, bound))
            case Or(lhs=l, rhs=r):
                return Or(walk(l, bound), walk(r, bound))
            case Implies(lhs=l, rhs=r):
                return Implies(walk(l, bound), walk(r, bound))
            case Exists(vars=vs, body=b):
                return Exists(vs, walk(b, bound | frozenset(vs)))
            case Forall(vars=vs, body=b):
                return Forall(vs, walk(b, bound | frozenset(vs)))
            case _:
                return g

    return walk(f, frozenset())


# -- rendering -----------------------------------------------------------------

_PREC_QUANT = 0
_PREC_IMPLIES = 1
_PREC_OR = 2
_PREC_AND = 3
_PREC_NOT = 4
_PREC_ATOM = 5


def to_text(f: Formula) -> str:
    """Concrete-syntax rendering; parses back to an equal tree."""

    def walk(g: Formula, parent: int) -> str:
        match g:
            case TrueAtom():
                return "true"
            case FalseAtom():
                return "false"
            case Letter(letter=a, var=x):
                return f"{a}({x})"
            case Less(x=x, y=y):
                return f"{x} < {y}"
            case EqVar(x=x, y=y):
                return f"{x} = {y}"
            case ModPos(var=x, r=r, q=q):
                return f"{x} % {q} = {r}"
            case ModLen(r=r, q=q):
                return f"len % {q} = {r}"
            case Divides(x=x, y=y):
                return f"div({x}, {y})"
            case Not(body=b):
                text = f"not {walk(b, _PREC_NOT)}"
                prec = _PREC_NOT
            case And(lhs=l, rhs=r):
                text = f"{walk(l, _PREC_AND)} and {walk(r, _PREC_AND + 1)}"
                prec = _PREC_AND
            case Or(lhs=l, rhs=r):
                text = f"{walk(l, _PREC_OR)} or {walk(r, _PREC_OR + 1)}"
                prec = _PREC_OR
            case Implies(lhs=l, rhs=r):
                text = f"{walk(l, _PREC_IMPLIES + 1)} => {walk(r, _PREC_IMPLIES)}"
                prec = _PREC_IMPLIES
            case Exists(vars=vs, body=b):
                text = f"exists {' '.join(vs)}. {walk(b, _PREC_QUANT)}"
                prec = _PREC_QUANT
            case Forall(vars=vs, body=b):
                text = f"forall {' '.join(vs)}. {walk(b, _PREC_QUANT)}"
                prec = _PREC_QUANT
            case _:
                raise TypeError(f"not a formula: {g!r}")
        return f"({text})" if prec < parent else text

    return walk(f, _PREC_QUANT)


# -- parsing -------------------------------------------------------------------

_KEYWORDS = {"exists", "forall", "and", "or", "not", "true", "false", "div", "len"}

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<num>[0-9]+)
      | (?P<op>=>|[().,<=%])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # name, num, op, eof
    text: str
    line: int
    col: int


def _tokenize(text: str, line_offset: int = 0) -> list[_Token]:
    tokens = []
    line = 1 + line_offset
    col = 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind != "ws":
            tokens.append(_Token(kind, tok, line, col))
        newlines = tok.count("\n")
        if newlines:
            line += newlines
            col = len(tok) - tok.rfind("\n")
        else:
            col += len(tok)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], alphabet: Alphabet):
        self.tokens = tokens
        self.pos = 0
        self.alphabet = alphabet

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.next()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text!r}", tok.line, tok.col)
        return tok

    def error(self, message: str) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.line, tok.col)

    def parse(self) -> Formula:
        f = self.formula(frozenset())
        tok = self.peek()
        if tok.kind != "eof":
            raise ParseError(f"unexpected {tok.text!r} after formula", tok.line, tok.col)
        return f

    def formula(self, scope: frozenset[str]) -> Formula:
        lhs = self.or_expr(scope)
        if self.peek().text == "=>":
            self.next()
            return Implies(lhs, self.formula(scope))
        return lhs

    def or_expr(self, scope) -> Formula:
        f = self.and_expr(scope)
        while self.peek().text == "or":
            self.next()
            f = Or(f, self.and_expr(scope))
        return f

    def and_expr(self, scope) -> Formula:
        f = self.unary(scope)
        while self.peek().text == "and":
            self.next()
            f = And(f, self.unary(scope))
        return f

    def unary(self, scope) -> Formula:
        tok = self.peek()
        if tok.text == "not":
            self.next()
            return Not(self.unary(scope))
        if tok.text in ("exists", "forall"):
            return self.quantifier(scope)
        return self.atom(scope)

    def quantifier(self, scope) -> Formula:
        kw = self.next()
        names = []
        while self.peek().kind == "name" and self.peek().text not in _KEYWORDS:
            var = self.next()
            if var.text in scope or var.text in names:
                raise ParseError(f"variable {var.text!r} rebinds an enclosing binder", var.line, var.col)
            names.append(var.text)
        if not names:
            raise self.error(f"expected variable name after {kw.text!r}")
        self.expect(".")
        body = self.formula(scope | frozenset(names))
        node = Exists if kw.text == "exists" else Forall
        return node(tuple(names), body)

    def modulus(self, subject_line: int, subject_col: int) -> tuple[int, int]:
        self.expect("%")
        qtok = self.next()
        if qtok.kind != "num":
            raise ParseError("expected a modulus", qtok.line, qtok.col)
        self.expect("=")
        rtok = self.next()
        if rtok.kind != "num":
            raise ParseError("expected a remainder", rtok.line, rtok.col)
        q, r = int(qtok.text), int(rtok.text)
        if q < 1 or not 0 <= r < q:
            raise ParseError(
                f"malformed modulus: need q >= 1 and 0 <= r < q, got r={r}, q={q}",
                subject_line,
                subject_col,
            )
        return r, q

    def atom(self, scope) -> Formula:
        tok = self.next()
        if tok.text == "(":
            f = self.formula(scope)
            self.expect(")")
            return f
        if tok.text == "true":
            return TrueAtom()
        if tok.text == "false":
            return FalseAtom()
        if tok.text == "div":
            self.expect("(")
            x = self.var_name(scope)
            self.expect(",")
            y = self.var_name(scope)
            self.expect(")")
            return Divides(x, y)
        if tok.text == "len":
            r, q = self.modulus(tok.line, tok.col)
            return ModLen(r, q)
        if tok.kind != "name":
            raise ParseError(f"expected an atom, found {tok.text!r}", tok.line, tok.col)
        if self.peek().text == "(":
            if tok.text not in self.alphabet:
                raise ParseError(f"unknown letter {tok.text!r}", tok.line, tok.col)
            self.next()
            x = self.var_name(scope)
            self.expect(")")
            return Letter(tok.text, x)
        # variable-led atoms
        x = tok.text
        op = self.next()
        if op.text == "<":
            return Less(x, self.var_name(scope))
        if op.text == "=":
            return EqVar(x, self.var_name(scope))
        if op.text == "%":
            self.pos -= 1
            r, q = self.modulus(tok.line, tok.col)
            return ModPos(x, r, q)
        raise ParseError(f"expected '<', '=' or '%' after {x!r}", op.line, op.col)

    def var_name(self, scope) -> str:
        tok = self.next()
        if tok.kind != "name" or tok.text in _KEYWORDS:
            raise ParseError(f"expected a variable name, found {tok.text!r}", tok.line, tok.col)
        return tok.text


def parse(text: str, alphabet: Alphabet, line_offset: int = 0) -> Formula:
    """Parse a formula; letter atoms are validated against the alphabet."""
    return _Parser(_tokenize(text, line_offset), alphabet).parse()


@dataclass(frozen=True)
class Sentence:
    """A closed formula together with its declared alphabet."""

    formula: Formula
    alphabet: Alphabet

    def __post_init__(self):
        fv = free_vars(self.formula)
        if fv:
            raise ValueError(f"sentence must be closed; free variables: {sorted(fv)}")
        for letter in _letters_used(self.formula):
            if letter not in self.alphabet:
                raise ValueError(f"letter {letter!r} not in the declared alphabet")

    def __str__(self):
        return to_text(self.formula)


@lru_cache(maxsize=None)
def _letters_used(f: Formula) -> frozenset[str]:
    match f:
        case Letter(letter=a):
            return frozenset([a])
        case Not(body=b) | Exists(body=b) | Forall(body=b):
            return _letters_used(b)
        case And(lhs=l, rhs=r) | Or(lhs=l, rhs=r) | Implies(lhs=l, rhs=r):
            return _letters_used(l) | _letters_used(r)
        case _:
            return frozenset()


def parse_sentence(text: str, alphabet: Alphabet, line_offset: int = 0) -> Sentence:
    return Sentence(parse(text, alphabet, line_offset), alphabet)


def load_sentence(text: str) -> Sentence:
    """Sentence file: first line ``alphabet: a b c``, rest is the formula."""
    lines = text.splitlines()
    header = None
    body_start = 0
    for i, line in enumerate(lines):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        header = stripped
        body_start = i + 1
        break
    if header is None or not header.startswith("alphabet:"):
        raise ParseError("first line must be 'alphabet: ...'", 1, 1)
    symbols = header.split(":", 1)[1].split()
    if not symbols:
        raise ParseError("empty alphabet", body_start, 1)
    alphabet = Alphabet(tuple(symbols))
    body = "\n".join(lines[body_start:])
    return parse_sentence(body, alphabet, line_offset=body_start)


# -- evaluation (the brute-force oracle) ----------------------------------------

def evaluate(f: Formula, structure) -> bool:
    """Evaluate on a structure word (sequence of tagged symbols).

    Quantifiers range over positions by enumeration; all atoms are
    supported, including ``div``.  This is deliberately independent of the
    automaton compiler.
    """
    letters = []
    assign: dict[str, int] = {}
    for p, sym in enumerate(structure, start=1):
        letter, tags = split_tagged(sym)
        letters.append(letter)
        for t in tags:
            if t in assign:
                raise ValueError(f"variable {t} tagged twice")
            assign[t] = p
    fv = free_vars(f)
    if fv != frozenset(assign):
        raise ValueError(
            f"variable mismatch: formula uses {sorted(fv)}, structure places {sorted(assign)}"
        )
    return _eval(f, tuple(letters), assign)


def eval_sentence(s: Sentence, word) -> bool:
    letters = tuple(word)
    for sym in letters:
        if sym not in s.alphabet:
            raise ValueError(f"letter {sym!r} not in the sentence alphabet")
    return _eval(s.formula, letters, {})


def _eval(f: Formula, letters: Word, assign: dict[str, int]) -> bool:
    n = len(letters)
    match f:
        case TrueAtom():
            return True
        case FalseAtom():
            return False
        case Letter(letter=a, var=x):
            return letters[assign[x] - 1] == a
        case Less(x=x, y=y):
            return assign[x] < assign[y]
        case EqVar(x=x, y=y):
            return assign[x] == assign[y]
        case ModPos(var=x, r=r, q=q):
            return assign[x] % q == r
        case ModLen(r=r, q=q):
            return n % q == r
        case Divides(x=x, y=y):
            return assign[y] % assign[x] == 0
        case Not(body=b):
            return not _eval(b, letters, assign)
        case And(lhs=l, rhs=r):
            return _eval(l, letters, assign) and _eval(r, letters, assign)
        case Or(lhs=l, rhs=r):
            return _eval(l, letters, assign) or _eval(r, letters, assign)
        case Implies(lhs=l, rhs=r):
            return not _eval(l, letters, assign) or _eval(r, letters, assign)
        case Exists(vars=vs, body=b):
            return any(
                _eval(b, letters, {**assign, **dict(zip(vs, combo))})
                for combo in iter_product(range(1, n + 1), repeat=len(vs))
            )
        case Forall(vars=vs, body=b):
            return all(
                _eval(b, letters, {**assign, **dict(zip(vs, combo))})
                for combo in iter_product(range(1, n + 1), repeat=len(vs))
            )
        case _:
            raise TypeError(f"not a formula: {f!r}")


# -- classification -------------------------------------------------------------

class QuantClass(enum.Enum):
    SIGMA1 = "Sigma1"
    PI1 = "Pi1"
    BSIGMA1 = "BSigma1"
    QUANTIFIER_FREE = "QuantifierFree"
    OTHER = "Other"


def nnf(f: Formula, negate: bool = False) -> Formula:
    """Negation normal form: Implies eliminated, Not pushed onto atoms,
    constants folded."""
    match f:
        case TrueAtom():
            return FalseAtom() if negate else f
        case FalseAtom():
            return TrueAtom() if negate else f
        case Not(body=b):
            return nnf(b, not negate)
        case And(lhs=l, rhs=r):
            if negate:
                return Or(nnf(l, True), nnf(r, True))
            return And(nnf(l), nnf(r))
        case Or(lhs=l, rhs=r):
            if negate:
                return And(nnf(l, True), nnf(r, True))
            return Or(nnf(l), nnf(r))
        case Implies(lhs=l, rhs=r):
            if negate:
                return And(nnf(l), nnf(r, True))
            return Or(nnf(l, True), nnf(r))
        case Exists(vars=vs, body=b):
            return Forall(vs, nnf(b, True)) if negate else Exists(vs, nnf(b))
        case Forall(vars=vs, body=b):
            return Exists(vs, nnf(b, True)) if negate else Forall(vs, nnf(b))
        case _:
            return Not(f) if negate else f


def _strip_block(f: Formula) -> tuple[str | None, tuple[str, ...], Formula]:
    """Peel the maximal leading block of like quantifiers (merging adjacent
    binders of the same kind).  Returns (kind, variables, remainder)."""
    kind = None
    names: list[str] = []
    while isinstance(f, (Exists, Forall)):
        k = "exists" if isinstance(f, Exists) else "forall"
        if kind is None:
            kind = k
        elif k != kind:
            break
        names.extend(f.vars)
        f = f.body
    return kind, tuple(names), f


def classify(s: Sentence | Formula) -> QuantClass:
    """Syntactic quantifier class, via negation normal form plus merging of
    adjacent like quantifier blocks.  Conservative: anything the rewrites do
    not settle is Other."""
    f = s.formula if isinstance(s, Sentence) else s
    g = nnf(f)
    if not has_quantifier(g):
        return QuantClass.QUANTIFIER_FREE
    kind, _, matrix = _strip_block(g)
    if kind is not None and not has_quantifier(matrix):
        return QuantClass.SIGMA1 if kind == "exists" else QuantClass.PI1

    def leaf_ok(h: Formula) -> bool:
        if isinstance(h, (And, Or)):
            return leaf_ok(h.lhs) and leaf_ok(h.rhs)
        if isinstance(h, Not):
            return leaf_ok(h.body)
        if isinstance(h, (Exists, Forall)):
            _, _, m = _strip_block(h)
            return not has_quantifier(m)
        return True

    return QuantClass.BSIGMA1 if leaf_ok(g) else QuantClass.OTHER


# -- compilation to automata -----------------------------------------------------

def _canonicalize(f: Formula) -> Formula:
    """Rename all variables to the canonical family: free variables become
    x1..xn in deterministic name order, binder instances get fresh indices.
    Distinct binder instances never share a slot."""
    free = sorted(free_vars(f), key=lambda s: (len(s), s))
    counter = len(free)
    top = {name: f"x{i}" for i, name in enumerate(free, start=1)}

    def walk(g: Formula, env: dict[str, str]) -> Formula:
        nonlocal counter
        match g:
            case Exists(vars=vs, body=b) | Forall(vars=vs, body=b):
                inner = dict(env)
                fresh = []
                for name in vs:
                    counter += 1
                    new = f"x{counter}"
                    inner[name] = new
                    fresh.append(new)
                node = Exists if isinstance(g, Exists) else Forall
                return node(tuple(fresh), walk(b, inner))
            case Not(body=b):
                return Not(walk(b, env))
            case And(lhs=l, rhs=r):
                return And(walk(l, env), walk(r, env))
            case Or(lhs=l, rhs=r):
                return Or(walk(l, env), walk(r, env))
            case Implies(lhs=l, rhs=r):
                return Implies(walk(l, env), walk(r, env))
            case _:
                return rename_free(g, env)

    return walk(f, top)


def _varset(f: Formula) -> VarSet:
    return VarSet(tuple(free_vars(f)))


def _align(d: Dfa, base: Alphabet, vars2: VarSet, cap: int) -> Dfa:
    """Cylindrify to a larger variable set and restore structure-validity."""
    if d.alphabet.vars == vars2:  # type: ignore[attr-defined]
        return d
    wide = cylindrify(d, vars2)
    return intersection(wide, legal_structures(base, vars2), cap)


def _atom_letter(base: Alphabet, letter: str, var: str) -> Dfa:
    vs = VarSet((var,))
    tagged = tagged_alphabet(base, vs)
    rows = []
    for state in range(2):  # 0 = waiting, 1 = placed; 2 = sink
        row = []
        for sym in tagged:
            b, tags = split_tagged(sym)
            if tags:
                row.append(1 if state == 0 and b == letter else 2)
            else:
                row.append(state)
        rows.append(tuple(row))
    rows.append((2,) * len(tagged))
    return minimize(Dfa(tagged, 3, 0, frozenset([1]), tuple(rows)))


def _atom_pair(base: Alphabet, x: str, y: str, *, same_pos: bool) -> Dfa:
    """x = y (same_pos) or x < y (strict order) over the two-variable tagged
    alphabet; degenerate variable repetition is handled by the callers."""
    vs = VarSet((x, y))
    tagged = tagged_alphabet(base, vs)
    sink = 3
    rows = []
    for state in range(3):  # 0 = none placed, 1 = first placed, 2 = done
        row = []
        for sym in tagged:
            _, tags = split_tagged(sym)
            has_x, has_y = x in tags, y in tags
            if same_pos:
                if state == 0 and has_x and has_y:
                    row.append(2)
                elif not has_x and not has_y:
                    row.append(state)
                else:
                    row.append(sink)
            else:
                if state == 0 and has_x and not has_y:
                    row.append(1)
                elif state == 1 and has_y and not has_x:
                    row.append(2)
                elif not has_x and not has_y:
                    row.append(state)
                else:
                    row.append(sink)
        rows.append(tuple(row))
    rows.append((sink,) * len(tagged))
    return minimize(Dfa(tagged, 4, 0, frozenset([2]), tuple(rows)))


def _atom_modpos(base: Alphabet, var: str, r: int, q: int) -> Dfa:
    vs = VarSet((var,))
    tagged = tagged_alphabet(base, vs)
    # states: (count mod q) * 2 + placed, plus sink
    sink = 2 * q
    rows = []
    for state in range(2 * q):
        count, placed = divmod(state, 2)
        nxt = (count + 1) % q
        row = []
        for sym in tagged:
            _, tags = split_tagged(sym)
            if var in tags:
                ok = not placed and (count + 1) % q == r % q
                row.append(nxt * 2 + 1 if ok else sink)
            else:
                row.append(nxt * 2 + placed)
        rows.append(tuple(row))
    rows.append((sink,) * len(tagged))
    accepting = frozenset(c * 2 + 1 for c in range(q))
    return minimize(Dfa(tagged, 2 * q + 1, 0, accepting, tuple(rows)))


def _atom_modlen(base: Alphabet, r: int, q: int) -> Dfa:
    tagged = tagged_alphabet(base, VarSet(()))
    rows = tuple(tuple((c + 1) % q for _ in tagged) for c in range(q))
    return minimize(Dfa(tagged, q, 0, frozenset([r]), rows))


def compile_formula(f: Formula, alphabet: Alphabet, cap: int = DEFAULT_STATE_CAP) -> Dfa:
    """Compile a regular formula to the Dfa of its satisfying structures,
    over the tagged alphabet of its free variables (canonicalized x1..xd).

    The result accepts exactly the legal structures satisfying the formula.
    """
    if not is_regular(f):
        offender = _first_nonregular(f)
        raise NonRegularAtomError(f"non-regular atom {to_text(offender)}")
    g = _canonicalize(f)

    def go(h: Formula) -> Dfa:
        match h:
            case TrueAtom():
                return universal_language(tagged_alphabet(alphabet, VarSet(())))
            case FalseAtom():
                return empty_language(tagged_alphabet(alphabet, VarSet(())))
            case Letter(letter=a, var=x):
                return _atom_letter(alphabet, a, x)
            case Less(x=x, y=y):
                if x == y:
                    return empty_language(tagged_alphabet(alphabet, VarSet((x,))))
                return _atom_pair(alphabet, x, y, same_pos=False)
            case EqVar(x=x, y=y):
                if x == y:
                    return legal_structures(alphabet, VarSet((x,)))
                return _atom_pair(alphabet, x, y, same_pos=True)
            case ModPos(var=x, r=r, q=q):
                return _atom_modpos(alphabet, x, r, q)
            case ModLen(r=r, q=q):
                return _atom_modlen(alphabet, r, q)
            case Not(body=b):
                sub = go(b)
                vs = sub.alphabet.vars  # type: ignore[attr-defined]
                return difference(legal_structures(alphabet, vs), sub, cap)
            case And(lhs=l, rhs=r) | Or(lhs=l, rhs=r):
                dl, dr = go(l), go(r)
                vs = dl.alphabet.vars.union(dr.alphabet.vars)  # type: ignore[attr-defined]
                dl = _align(dl, alphabet, vs, cap)
                dr = _align(dr, alphabet, vs, cap)
                op = intersection if isinstance(h, And) else union
                return op(dl, dr, cap)
            case Implies(lhs=l, rhs=r):
                return go(Or(Not(l), r))
            case Exists(vars=names, body=b) | Forall(vars=names, body=b):
                sub = go(b)
                quant = VarSet(names)
                vs1 = sub.alphabet.vars.union(quant)  # type: ignore[attr-defined]
                sub = _align(sub, alphabet, vs1, cap)
                if isinstance(h, Exists):
                    return project(sub, quant, cap)
                bad = difference(legal_structures(alphabet, vs1), sub, cap)
                off = project(bad, quant, cap)
                keep = vs1.minus(quant)
                return difference(legal_structures(alphabet, keep), off, cap)
            case _:
                raise TypeError(f"not a formula: {h!r}")

    return go(g)


def _first_nonregular(f: Formula) -> Formula:
    match f:
        case Divides():
            return f
        case Not(body=b) | Exists(body=b) | Forall(body=b):
            return _first_nonregular(b)
        case And(lhs=l, rhs=r) | Or(lhs=l, rhs=r) | Implies(lhs=l, rhs=r):
            return _first_nonregular(l) if not is_regular(l) else _first_nonregular(r)
        case _:
            return f


def compile_sentence(s: Sentence, cap: int = DEFAULT_STATE_CAP) -> Dfa:
    """Compile a closed regular sentence to a Dfa over its plain alphabet."""
    d = compile_formula(s.formula, s.alphabet, cap)
    return minimize(Dfa(s.alphabet, d.n_states, d.initial, d.accepting, d.delta))


# -- difference-chain normalization ----------------------------------------------

@dataclass(frozen=True)
class SentenceChain:
    """Universal sentences with a common block length, read as the iterated
    difference links[0] - (links[1] - (...))."""

    links: tuple[Sentence, ...]
    block_length: int


def _canon_block(names: tuple[str, ...], matrix: Formula) -> tuple[int, Formula]:
    mapping = {name: f"x{i}" for i, name in enumerate(names, start=1)}
    return len(names), rename_free(matrix, mapping)


_Skel = tuple


def _eval_skel(sk: _Skel, values: list[bool]) -> bool:
    op = sk[0]
    if op == "const":
        return sk[1]
    if op == "atom":
        return values[sk[1]]
    if op == "not":
        return not _eval_skel(sk[1], values)
    if op == "and":
        return _eval_skel(sk[1], values) and _eval_skel(sk[2], values)
    return _eval_skel(sk[1], values) or _eval_skel(sk[2], values)


def to_difference_chain(s: Sentence, max_atoms: int = 16) -> SentenceChain:
    """Rewrite a boolean combination of single-block sentences as an iterated
    difference of universal sentences sharing one block length.

    Universal-sentence atoms are extracted from the propositional skeleton
    (existential ones are absorbed as negated universals, variable-free ones
    are split so the empty word keeps its exact status), the skeleton's truth
    table is put in monotone-chain normal form, and each monotone link is
    collapsed back into one universal sentence: conjunctions share variable
    blocks, disjunctions take fresh copies.  Finally all blocks are padded to
    the longest one, which never changes a language here because every block
    is non-empty.
    """
    cls = classify(s)
    if cls == QuantClass.OTHER:
        raise ClassificationError(
            f"chain normalization needs a boolean combination of single-block sentences; classified {cls.value}"
        )
    if cls == QuantClass.PI1:
        g = nnf(s.formula)
        _, names, _ = _strip_block(g)
        return SentenceChain((s,), len(names))

    atoms: list[tuple[int, Formula]] = []
    index: dict[tuple[int, str], int] = {}

    def intern(d: int, matrix: Formula) -> int:
        key = (d, to_text(matrix))
        if key not in index:
            index[key] = len(atoms)
            atoms.append((d, matrix))
        return index[key]

    def univ_atom(d: int, matrix: Formula) -> _Skel:
        return ("atom", intern(d, matrix))

    def skeletonize(h: Formula) -> _Skel:
        match h:
            case TrueAtom():
                return ("const", True)
            case FalseAtom():
                return ("const", False)
            case And(lhs=l, rhs=r):
                return ("and", skeletonize(l), skeletonize(r))
            case Or(lhs=l, rhs=r):
                return ("or", skeletonize(l), skeletonize(r))
            case Not(body=b):
                return ("not", skeletonize(b))
            case Exists(vars=_, body=_) | Forall(vars=_, body=_):
                kind, names, matrix = _strip_block(h)
                if has_quantifier(matrix):
                    raise ClassificationError(f"nested quantification in {to_text(h)}")
                d, canon = _canon_block(names, matrix)
                if kind == "forall":
                    return univ_atom(d, canon)
                return ("not", univ_atom(d, nnf(canon, negate=True)))
            case _:
                # A variable-free atom.  Its truth at the empty word cannot sit
                # inside a universal block (which is vacuously true there), so
                # split it: on non-empty words it equals "holds at every
                # position and at some position"; the empty word is restored
                # explicitly when the atom holds there.
                on_words = (
                    "and",
                    univ_atom(1, h),
                    ("not", univ_atom(1, nnf(h, negate=True))),
                )
                if _eval(h, (), {}):
                    return ("or", on_words, univ_atom(1, FalseAtom()))
                return on_words

    skel = skeletonize(nnf(s.formula))
    n = len(atoms)
    if n > max_atoms:
        raise ResourceLimitError(f"{n} distinct universal atoms exceed the limit ({max_atoms})")

    members = frozenset(
        mask
        for mask in range(1 << n)
        if _eval_skel(skel, [bool(mask >> (n - 1 - j) & 1) for j in range(n)])
    )
    table = BoolFunc(n, members)

    def pi1_sentence(d: int, matrix: Formula) -> Sentence:
        names = tuple(f"x{i}" for i in range(1, d + 1))
        return Sentence(Forall(names, matrix), s.alphabet)

    if not table.members:
        # The empty language is not expressible by one non-empty universal
        # block, so use the two-link difference "everything minus everything".
        top = pi1_sentence(1, TrueAtom())
        return SentenceChain((top, top), 1)

    collapsed: list[tuple[int, Formula]] = []
    for link in normal_form(table).links:
        mins = minimal_elements(link)
        if mins and mins[0] == 0:
            collapsed.append((1, TrueAtom()))
            continue
        disjuncts: list[tuple[int, Formula]] = []
        for m in mins:
            chosen = [atoms[j] for j in range(n) if m >> (n - 1 - j) & 1]
            width = max(d for d, _ in chosen)
            matrix: Formula | None = None
            for _, part in chosen:
                matrix = part if matrix is None else And(matrix, part)
            disjuncts.append((width, matrix))
        if len(disjuncts) == 1:
            collapsed.append(disjuncts[0])
        else:
            offset = 0
            shifted: Formula | None = None
            for width, matrix in disjuncts:
                mapping = {f"x{i}": f"x{i + offset}" for i in range(1, width + 1)}
                part = rename_free(matrix, mapping)
                shifted = part if shifted is None else Or(shifted, part)
                offset += width
            collapsed.append((offset, shifted))

    depth = max(d for d, _ in collapsed)
    links = tuple(pi1_sentence(depth, matrix) for _, matrix in collapsed)
    return SentenceChain(links, depth)


def pad_block(s: Sentence, d: int) -> Sentence:
    """Pad a universal sentence to a d-variable block with dummy variables.
    Language-preserving whenever the original block is non-empty."""
    g = nnf(s.formula)
    kind, names, matrix = _strip_block(g)
    if has_quantifier(matrix) or kind == "exists":
        raise ClassificationError("padding needs a universal single-block sentence")
    if kind is None:
        names = ()
    width, canon = _canon_block(names, matrix)
    if d < width:
        raise ValueError(f"cannot pad a {width}-variable block down to {d}")
    return Sentence(Forall(tuple(f"x{i}" for i in range(1, d + 1)), canon), s.alphabet)
