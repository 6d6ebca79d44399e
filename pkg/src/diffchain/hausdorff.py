"""Boolean functions as sets of bit strings, and their decomposition into
iterated differences of monotone functions.

A function of arity k is the set of its satisfying assignments, stored as
integer bitmasks: the first atom is the most significant bit, so the string
``101`` (atom 1 true, atom 2 false, atom 3 true) is mask 0b101.  Monotone
means upward closed under bitwise order.  Every function equals
M1 - (M2 - (... - Mm)) for a strictly decreasing sequence of monotone
functions; ``normal_form`` computes the canonical such chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

BitVec = tuple[int, ...]


def bits_to_mask(bits: Sequence[int] | str) -> int:
    mask = 0
    for b in bits:
        bit = int(b)
        if bit not in (0, 1):
            raise ValueError(f"bit string may contain only 0 and 1: {bits!r}")
        mask = mask << 1 | bit
    return mask


def mask_to_bits(mask: int, arity: int) -> BitVec:
    return tuple(mask >> (arity - 1 - i) & 1 for i in range(arity))


def mask_to_str(mask: int, arity: int) -> str:
    return format(mask, f"0{arity}b") if arity else ""


@dataclass(frozen=True)
class BoolFunc:
    """A boolean function of fixed arity, as its set of satisfying masks."""

    arity: int
    members: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        if self.arity < 0:
            raise ValueError("negative arity")
        limit = 1 << self.arity
        if any(not 0 <= m < limit for m in self.members):
            raise ValueError("member out of range for arity")

    @staticmethod
    def from_strings(arity: int, rows: Iterable[Sequence[int] | str]) -> "BoolFunc":
        masks = set()
        for row in rows:
            if len(row) != arity:
                raise ValueError(f"row {row!r} does not have length {arity}")
            masks.add(bits_to_mask(row))
        return BoolFunc(arity, frozenset(masks))

    def strings(self) -> list[str]:
        return [mask_to_str(m, self.arity) for m in sorted(self.members)]

    def __contains__(self, v: int | Sequence[int] | str) -> bool:
        mask = v if isinstance(v, int) else bits_to_mask(v)
        return mask in self.members

    def __len__(self):
        return len(self.members)


def full(arity: int) -> BoolFunc:
    return BoolFunc(arity, frozenset(range(1 << arity)))


def upward_closure(x: BoolFunc) -> BoolFunc:
    """Smallest upward-closed superset under the bitwise order."""
    closed = set(x.members)
    for j in range(x.arity):
        bit = 1 << j
        closed |= {m | bit for m in closed}
    return BoolFunc(x.arity, frozenset(closed))


def is_monotone(x: BoolFunc) -> bool:
    """True iff x equals its upward closure."""
    for m in x.members:
        for j in range(x.arity):
            bit = 1 << j
            if not m & bit and m | bit not in x.members:
                return False
    return True


def minimal_elements(x: BoolFunc) -> list[int]:
    """Minimal masks of a monotone function, sorted; its unique positive DNF."""
    out = []
    for m in x.members:
        if all(not (m >> j & 1) or (m ^ (1 << j)) not in x.members for j in range(x.arity)):
            out.append(m)
    return sorted(out)


@dataclass(frozen=True)
class Chain:
    """Strictly decreasing sequence of monotone functions, read as the
    iterated difference M1 - (M2 - (... - Mm))."""

    arity: int
    links: tuple[BoolFunc, ...]

    def __post_init__(self):
        object.__setattr__(self, "links", tuple(self.links))
        if not self.links:
            raise ValueError("a chain has at least one link")
        for link in self.links:
            if link.arity != self.arity:
                raise ValueError("link arity mismatch")
            if not is_monotone(link):
                raise ValueError("chain links must be monotone")
        for a, b in zip(self.links, self.links[1:]):
            if not (b.members < a.members):
                raise ValueError("chain links must strictly decrease")

    def __len__(self):
        return len(self.links)


def normal_form(x: BoolFunc) -> Chain:
    """Canonical difference chain: repeatedly peel off the upward closure and
    recurse on closure minus the set; each step strictly shrinks, so at most
    2^k + 1 links are produced.  Monotone input yields the one-link chain."""
    links = []
    cur = x
    while not is_monotone(cur):
        up = upward_closure(cur)
        links.append(up)
        cur = BoolFunc(x.arity, up.members - cur.members)
    links.append(cur)
    return Chain(x.arity, tuple(links))


def eval_chain(chain: Chain, v: int | Sequence[int] | str) -> bool:
    """Value of M1 - (M2 - (... - Mm)) at the assignment v, computed by the
    nested definition (no validity assumption needed)."""
    mask = v if isinstance(v, int) else bits_to_mask(v)
    if not isinstance(v, int) and len(v) != chain.arity:
        raise ValueError(f"assignment length {len(v)} does not match arity {chain.arity}")
    value = False
    for link in reversed(chain.links):
        value = mask in link.members and not value
    return value


def render_dnf(x: BoolFunc, names: Sequence[str] | None = None) -> str:
    """Positive DNF of a monotone function over atom names (default p1..pk)."""
    if not is_monotone(x):
        raise ValueError("DNF rendering is defined for monotone functions")
    if names is None:
        names = [f"p{i}" for i in range(1, x.arity + 1)]
    if not x.members:
        return "false"
    terms = []
    for m in minimal_elements(x):
        atoms = [names[i] for i in range(x.arity) if m >> (x.arity - 1 - i) & 1]
        terms.append(" and ".join(atoms) if atoms else "true")
    if terms == ["true"]:
        return "true"
    return " or ".join(f"({t})" if " and " in t else t for t in terms)


# -- truth-table text format ---------------------------------------------------

def parse_table(text: str) -> BoolFunc:
    """First line ``arity: k``, then one member bit string per line."""
    arity = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if arity is None:
            key, _, rest = line.partition(":")
            if key.strip() != "arity" or not rest.strip().isdigit():
                raise ValueError(f"line {lineno}: expected 'arity: K'")
            arity = int(rest.strip())
            continue
        if len(line) != arity or any(c not in "01" for c in line):
            raise ValueError(f"line {lineno}: expected a bit string of length {arity}")
        rows.append(line)
    if arity is None:
        raise ValueError("missing 'arity:' line")
    return BoolFunc.from_strings(arity, rows)


def format_table(x: BoolFunc) -> str:
    lines = [f"arity: {x.arity}"]
    lines.extend(x.strings())
    return "\n".join(lines) + "\n"
