"""Shared helpers for the test suite: independent oracles implemented
with deliberately different algorithms than the library code."""

from __future__ import annotations

import mpmath


def chi_square_p(stat: float, dof: int) -> float:
    """Upper-tail p-value of the chi-square distribution."""
    return float(mpmath.gammainc(dof / 2, stat / 2, mpmath.inf, regularized=True))


def naive_free_reduce(word):
    """Rescan-from-scratch reduction: delete one cancelling pair per pass
    until none is left.  Quadratic and obviously correct."""
    letters = list(word)
    while True:
        for i in range(len(letters) - 1):
            if letters[i] == -letters[i + 1]:
                del letters[i : i + 2]
                break
        else:
            return tuple(letters)


def naive_cyclic_core(word):
    """Peel matching first/last letters off a freely reduced word."""
    letters = list(naive_free_reduce(word))
    while len(letters) >= 2 and letters[0] == -letters[-1]:
        letters = letters[1:-1]
    return tuple(letters)


def exponent_sum(word) -> int:
    return sum(1 if letter > 0 else -1 for letter in word)
