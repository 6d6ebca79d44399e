#!/usr/bin/env python3
"""Sweep the decomposition grid for PARITY and print every residual.

PARITY (an even number of 1s) is the standard language that no chain of
universal sentences over regular numerical predicates captures; the sweep
shows the residuals oscillating instead of emptying out.
"""

from diffchain import Alphabet, Dfa, decompose, format_word, run

BITS = Alphabet(("0", "1"))
PARITY = Dfa(BITS, 2, 0, frozenset([0]), ((0, 1), (1, 0)))


def main(d_max: int = 2, k_max: int = 4) -> None:
    print(f"{'d':>2} {'k':>2}  verdict  residual  witness")
    for d in range(1, d_max + 1):
        for k in range(1, k_max + 1):
            report = decompose(PARITY, d, k)
            if report.success:
                print(f"{d:>2} {k:>2}  success")
                continue
            witness = format_word(BITS, report.witness)
            in_lang = run(PARITY, report.witness)
            print(
                f"{d:>2} {k:>2}  failure  {report.residual.n_states:>3} states"
                f"  '{witness}' (in language: {in_lang})"
            )


if __name__ == "__main__":
    main()
