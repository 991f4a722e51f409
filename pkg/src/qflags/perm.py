"""Permutations in one-line notation with 1-based values."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from typing import Sequence

from .errors import IndexOutOfRange, TooLarge

MAX_N = 8


@dataclass(frozen=True)
class Permutation:
    """An element of S_n; ``word[i-1]`` is sigma(i)."""

    word: tuple[int, ...]

    def __post_init__(self):
        word = tuple(self.word)
        object.__setattr__(self, "word", word)
        if sorted(word) != list(range(1, len(word) + 1)):
            raise ValueError(f"{word} is not a permutation of 1..{len(word)}")

    @property
    def n(self) -> int:
        return len(self.word)

    def __call__(self, i: int) -> int:
        return self.word[i - 1]

    @cached_property
    def length(self) -> int:
        return inversions(self)

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition, (self * other)(i) = self(other(i))."""
        return Permutation(tuple(self.word[v - 1] for v in other.word))

    def inverse(self) -> "Permutation":
        out = [0] * self.n
        for i, v in enumerate(self.word, 1):
            out[v - 1] = i
        return Permutation(tuple(out))

    def __str__(self):
        return "(" + ",".join(map(str, self.word)) + ")"


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(1, n + 1)))


def longest(n: int) -> Permutation:
    return Permutation(tuple(range(n, 0, -1)))


def inversions(sigma: Permutation | Sequence[int]) -> int:
    """Number of pairs i < j with sigma(i) > sigma(j)."""
    w = sigma.word if isinstance(sigma, Permutation) else tuple(sigma)
    return sum(1 for i in range(len(w)) for j in range(i + 1, len(w)) if w[i] > w[j])


def left_mul_tau(j: int, sigma: Permutation) -> Permutation:
    """tau_j * sigma: swap the values j and j+1 in the one-line word."""
    if not 1 <= j <= sigma.n - 1:
        raise IndexOutOfRange(f"tau_{j} is not a generator of S_{sigma.n}")
    swap = {j: j + 1, j + 1: j}
    return Permutation(tuple(swap.get(v, v) for v in sigma.word))


def enumerate_sn(n: int) -> list[Permutation]:
    """All of S_n in lexicographic order of the one-line word."""
    if n > MAX_N:
        raise TooLarge(f"S_{n} has more than {MAX_N}! elements")
    if n < 0:
        raise ValueError("n must be nonnegative")
    return [Permutation(w) for w in permutations(range(1, n + 1))]


def q_factorial(n: int, q: int) -> int:
    """[n]_q! = prod_{i=1..n} (1 + q + ... + q^(i-1))."""
    out = 1
    for i in range(1, n + 1):
        out *= sum(q ** e for e in range(i))
    return out


def poincare_sum(n: int, q: int) -> int:
    """sum over S_n of q^I(sigma), via the product formula (no enumeration)."""
    return q_factorial(n, q)
