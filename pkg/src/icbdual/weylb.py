"""
The hyperoctahedral group W(B_m) as signed permutations in window notation.

A signed permutation ``w`` is stored as its window ``(w(1), ..., w(m))`` and
extended by ``w(-i) = -w(i)``. Products compose as functions, ``(xy)(i) =
x(y(i))``, so right multiplication by ``s_i`` acts on positions: ``s_0``
negates the first window entry and ``s_i`` (i >= 1) swaps entries ``i, i+1``.
With this convention ``(f . x) . y = f . (xy)`` for the right action on index
words, ``(f . w)(i) = f(w(i))`` where ``f(-a) = -f(a)``.

>>> w = SignedPerm.identity(2).apply_gen(0).apply_gen(1)
>>> w, w.length(), w.reduced_word()
(SignedPerm([2, -1]), 2, [0, 1])
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import Iterable, Sequence

__all__ = [
    "SignedPerm", "WeightFunction", "coset_reps", "longest_element",
    "parabolic_subgroup", "all_elements", "bruhat_leq", "act_index",
    "word_to_str", "parse_word", "InvalidWeightFunction", "act_perm", "coset_data",
]


class InvalidWeightFunction(ValueError):
    pass


@dataclass(frozen=True, order=True)
class SignedPerm:
    window: tuple[int, ...]

    def __post_init__(self):
        w = tuple(int(x) for x in self.window)
        object.__setattr__(self, "window", w)
        if sorted(abs(x) for x in w) != list(range(1, len(w) + 1)):
            raise ValueError(f"not a signed permutation window: {w}")

    @classmethod
    def identity(cls, m: int) -> "SignedPerm":
        return cls(tuple(range(1, m + 1)))

    @classmethod
    def from_word(cls, word: Iterable[int], m: int) -> "SignedPerm":
        w = cls.identity(m)
        for i in word:
            w = w.apply_gen(i)
        return w

    @property
    def m(self) -> int:
        return len(self.window)

    def __call__(self, i: int) -> int:
        return self.window[i - 1] if i > 0 else -self.window[-i - 1]

    def __mul__(self, other: "SignedPerm") -> "SignedPerm":
        return SignedPerm(tuple(self(other(i)) for i in range(1, self.m + 1)))

    def inverse(self) -> "SignedPerm":
        out = [0] * self.m
        for i, x in enumerate(self.window, start=1):
            out[abs(x) - 1] = i if x > 0 else -i
        return SignedPerm(tuple(out))

    def apply_gen(self, i: int) -> "SignedPerm":
        """Right multiplication by ``s_i``."""
        w = list(self.window)
        if i == 0:
            w[0] = -w[0]
        elif 1 <= i < self.m:
            w[i - 1], w[i] = w[i], w[i - 1]
        else:
            raise ValueError(f"generator s_{i} not in W(B_{self.m})")
        return SignedPerm(tuple(w))

    def left_gen(self, i: int) -> "SignedPerm":
        """Left multiplication by ``s_i`` (acts on values)."""
        return SignedPerm.identity(self.m).apply_gen(i) * self

    def is_identity(self) -> bool:
        return self.window == tuple(range(1, self.m + 1))

    def has_right_descent(self, i: int) -> bool:
        if i == 0:
            return self.window[0] < 0
        return self.window[i - 1] > self.window[i]

    def has_left_descent(self, i: int) -> bool:
        return self.inverse().has_right_descent(i)

    def length(self) -> int:
        return _length(self.window)

    def reduced_word(self) -> list[int]:
        return list(_reduced_word(self.window))

    def count_gen(self, i: int) -> int:
        """Occurrences of ``s_i`` in any reduced word (well defined for s_0)."""
        return self.reduced_word().count(i)

    def __repr__(self):
        return f"SignedPerm({list(self.window)})"

    def __str__(self):
        return "[" + ", ".join(str(x) for x in self.window) + "]"

    def word_str(self) -> str:
        return word_to_str(self.reduced_word())


@lru_cache(maxsize=None)
def _length(w: tuple[int, ...]) -> int:
    # l = inv(w) + nsp(w) + neg(w), where nsp counts pairs i < j with
    # w(i) + w(j) < 0 and neg counts negative entries
    m = len(w)
    inv = sum(1 for i in range(m) for j in range(i + 1, m) if w[i] > w[j])
    nsp = sum(1 for i in range(m) for j in range(i + 1, m) if w[i] + w[j] < 0)
    neg = sum(1 for x in w if x < 0)
    return inv + nsp + neg


@lru_cache(maxsize=None)
def _reduced_word(w: tuple[int, ...]) -> tuple[int, ...]:
    # strip the smallest right descent repeatedly; the word is read back to front
    x = SignedPerm(w)
    out = []
    while not x.is_identity():
        i = next(i for i in range(x.m) if x.has_right_descent(i))
        out.append(i)
        x = x.apply_gen(i)
    return tuple(reversed(out))


def word_to_str(word: Sequence[int]) -> str:
    return " ".join(f"s{i}" for i in word) if word else "e"


def parse_word(text: str) -> list[int]:
    text = text.strip()
    if text in ("", "e"):
        return []
    return [int(tok[1:]) for tok in text.split()]


@dataclass(frozen=True)
class WeightFunction:
    """
    A weight function on W(B_m), fixed by its values on ``s_0`` and ``s_1``.

    For ``m = 1`` the value on ``s_1`` is forced to 1, as there is no ``s_1``.
    """

    L0: int
    L1: int
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise InvalidWeightFunction("m must be >= 1")
        if self.m == 1 and self.L1 != 1:
            object.__setattr__(self, "L1", 1)

    def gen(self, i: int) -> int:
        return self.L0 if i == 0 else self.L1

    def value(self, w: SignedPerm) -> int:
        return sum(self.gen(i) for i in w.reduced_word())

    def __str__(self):
        return f"L(s0)={self.L0}, L(s1)={self.L1}"


def all_elements(m: int) -> list[SignedPerm]:
    """All 2^m m! elements, sorted by (length, window)."""
    return list(_all_elements(m))


@lru_cache(maxsize=None)
def _all_elements(m: int) -> tuple[SignedPerm, ...]:
    els = [
        SignedPerm(tuple(s * x for s, x in zip(signs, perm)))
        for perm in permutations(range(1, m + 1))
        for signs in product((1, -1), repeat=m)
    ]
    return tuple(sorted(els, key=lambda w: (w.length(), w.window)))


def parabolic_subgroup(J: Iterable[int], m: int) -> list[SignedPerm]:
    J = frozenset(J)
    return [w for w in all_elements(m) if set(w.reduced_word()) <= J]


def longest_element(J: Iterable[int], m: int) -> SignedPerm:
    return max(parabolic_subgroup(J, m), key=lambda w: (w.length(), w.window))


def coset_reps(J: Iterable[int], m: int) -> list[SignedPerm]:
    """Minimal length representatives of W_J \\ W, sorted by (length, window)."""
    return list(_coset_reps(frozenset(J), m))


@lru_cache(maxsize=None)
def _coset_reps(J: frozenset, m: int) -> tuple[SignedPerm, ...]:
    if not J <= set(range(m)):
        raise ValueError(f"J = {sorted(J)} is not a subset of {{0..{m - 1}}}")
    return tuple(w for w in all_elements(m) if not any(w.has_left_descent(j) for j in J))


def coset_data(J: Iterable[int], m: int) -> tuple[list[SignedPerm], SignedPerm]:
    return coset_reps(J, m), longest_element(J, m)


def _subwords_reach(word: tuple[int, ...], m: int) -> frozenset:
    reached = {SignedPerm.identity(m)}
    for i in word:
        reached |= {x.apply_gen(i) for x in reached}
    return frozenset(reached)


@lru_cache(maxsize=None)
def _below(w: SignedPerm) -> frozenset:
    return _subwords_reach(tuple(w.reduced_word()), w.m)


def bruhat_leq(x: SignedPerm, y: SignedPerm) -> bool:
    """Bruhat order by the subword property of a fixed reduced word of ``y``."""
    if x.length() > y.length():
        return False
    return x in _below(y)


def act_index(f: Sequence, i: int) -> tuple:
    """The right action ``f . s_i`` on an index word."""
    f = list(f)
    if i == 0:
        f[0] = -f[0]
    else:
        f[i - 1], f[i] = f[i], f[i - 1]
    return tuple(f)


def act_perm(f: Sequence, w: SignedPerm) -> tuple:
    """``f . w`` with ``(f . w)(i) = f(w(i))`` and ``f(-a) = -f(a)``."""
    return tuple(f[x - 1] if x > 0 else -f[-x - 1] for x in w.window)
