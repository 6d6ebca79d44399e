#!/usr/bin/env python3
"""Normalize a gallery of sentences into difference chains of universal
sentences, then confirm each chain against the compiled language."""

from diffchain import (
    Alphabet,
    compile_sentence,
    decide,
    difference,
    parse_sentence,
    to_difference_chain,
)

GALLERY = [
    ("a b c", "(exists x. a(x)) and (forall x. not b(x))"),
    ("a b", "not (forall x. a(x))"),
    ("a b", "(exists x. a(x)) or (forall x. b(x))"),
    ("a b", "len % 2 = 1"),
    ("a b", "(forall x. not b(x)) or (forall x. not a(x))"),
    ("a b", "(exists x. x % 2 = 0 and b(x)) and (forall x. x % 3 = 1 => not b(x))"),
]


def chain_language(chain):
    dfas = [compile_sentence(link) for link in chain.links]
    acc = dfas[-1]
    for d in reversed(dfas[:-1]):
        acc = difference(d, acc)
    return acc


def main() -> None:
    for letters, text in GALLERY:
        sentence = parse_sentence(text, Alphabet(tuple(letters.split())))
        chain = to_difference_chain(sentence)
        ok = decide("equiv", chain_language(chain), compile_sentence(sentence))[0]
        print(f"{text}")
        print(f"  block length {chain.block_length}, {len(chain.links)} links, exact: {ok}")
        for i, link in enumerate(chain.links, start=1):
            print(f"    {i}. {link}")
        print()


if __name__ == "__main__":
    main()
