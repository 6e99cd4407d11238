"""Reduced words in free groups.

Generator ``i`` (0-based) is the letter ``i + 1`` and its inverse is ``-(i + 1)``. Words print
with lowercase letters for generators, capitals for inverses, and ``1`` for the identity.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from coarsequot.constants import GENERATOR_LETTERS, IDENTITY_LABEL
from coarsequot.errors import ParseError


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    """Cancel adjacent inverse pairs with a stack."""
    stack: list[int] = []
    for letter in letters:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def letter_rank(letter: int) -> int:
    """Position of a letter in the order ``a, A, b, B, ...``."""
    return 2 * (abs(letter) - 1) + (1 if letter < 0 else 0)


@dataclass(frozen=True, order=False)
class GroupElement:
    """A freely reduced word over signed generator indices."""

    word: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if 0 in self.word:
            raise ValueError("letter 0 is not a generator")
        reduced = free_reduce(self.word)
        if reduced != self.word:
            object.__setattr__(self, "word", reduced)

    @classmethod
    def identity(cls) -> GroupElement:
        """The empty word."""
        return cls(())

    @classmethod
    def generator(cls, index: int) -> GroupElement:
        """The ``index``-th generator (0-based)."""
        return cls((index + 1,))

    @classmethod
    def parse(cls, text: str) -> GroupElement:
        """Parse letters ``a..z`` (generators) and ``A..Z`` (inverses); ``1`` is the identity.

        Raises:
            ParseError: On any other character.
        """
        text = text.strip()
        if text in ("", IDENTITY_LABEL):
            return cls.identity()
        letters = []
        for char in text:
            index = GENERATOR_LETTERS.find(char.lower())
            if index < 0 or not char.isalpha():
                raise ParseError(f"invalid generator letter {char!r} in {text!r}")
            letters.append(index + 1 if char.islower() else -(index + 1))
        return cls(tuple(letters))

    def __str__(self) -> str:
        if not self.word:
            return IDENTITY_LABEL
        chars = []
        for letter in self.word:
            char = GENERATOR_LETTERS[abs(letter) - 1]
            chars.append(char if letter > 0 else char.upper())
        return "".join(chars)

    def __len__(self) -> int:
        return len(self.word)

    def __mul__(self, other: GroupElement) -> GroupElement:
        word = list(self.word)
        for letter in other.word:
            if word and word[-1] == -letter:
                word.pop()
            else:
                word.append(letter)
        return GroupElement(tuple(word))

    def __invert__(self) -> GroupElement:
        return GroupElement(tuple(-letter for letter in reversed(self.word)))

    def __pow__(self, n: int) -> GroupElement:
        if n == 0:
            return GroupElement.identity()
        if n < 0:
            return (~self) ** -n
        half = self ** (n // 2)
        if n % 2 == 0:
            return half * half
        return half * half * self

    def conjugate(self, other: GroupElement) -> GroupElement:
        """``other · self · other⁻¹``."""
        return other * self * ~other

    @property
    def is_identity(self) -> bool:
        """Whether this is the empty word."""
        return not self.word

    def shortlex_key(self) -> tuple[int, tuple[int, ...]]:
        """Sort key: length first, then letters in the order ``a, A, b, B, ...``."""
        return len(self.word), tuple(letter_rank(letter) for letter in self.word)

    def prefixes(self) -> list[GroupElement]:
        """Every prefix from the identity to the whole word."""
        return [GroupElement(self.word[:i]) for i in range(len(self.word) + 1)]


def cyclic_reduce(element: GroupElement) -> tuple[GroupElement, GroupElement]:
    """Split ``element = c · core · c⁻¹`` with ``core`` cyclically reduced.

    Returns:
        tuple[GroupElement, GroupElement]: The conjugator ``c`` and the core.
    """
    word = element.word
    i, j = 0, len(word) - 1
    while i < j and word[i] == -word[j]:
        i += 1
        j -= 1
    return GroupElement(word[:i]), GroupElement(word[i : j + 1])


def primitive_root(element: GroupElement) -> tuple[GroupElement, int]:
    """Write ``element = root^k`` with ``root`` not a proper power.

    Returns:
        tuple[GroupElement, int]: The root and the exponent ``k`` (0 for the identity).
    """
    if element.is_identity:
        return element, 0
    conjugator, core = cyclic_reduce(element)
    word = core.word
    size = len(word)
    for period in range(1, size + 1):
        if size % period == 0 and word == word[:period] * (size // period):
            root = GroupElement(word[:period]).conjugate(conjugator)
            return root, size // period
    return element, 1


def power_exponent(element: GroupElement, root: GroupElement) -> int | None:
    """The ``k`` with ``element = root^k`` in a free group, or ``None``."""
    if element.is_identity:
        return 0
    if root.is_identity:
        return None
    _, core_e = cyclic_reduce(element)
    _, core_r = cyclic_reduce(root)
    if len(core_e) % len(core_r) != 0:
        return None
    k = len(core_e) // len(core_r)
    for sign in (1, -1):
        if root ** (sign * k) == element:
            return sign * k
    return None


def translation_length(element: GroupElement) -> int:
    """Exact translation length of ``element`` on the Cayley tree: its cyclic length."""
    return len(cyclic_reduce(element)[1])


def word_distance(first: GroupElement, second: GroupElement) -> int:
    """Free-group word metric ``|first⁻¹ · second|``."""
    return len(~first * second)


def distance_matrix(rows: Sequence[GroupElement], cols: Sequence[GroupElement]) -> np.ndarray:
    """Pairwise free-group word distances, ``|u| + |v| − 2·lcp(u, v)``."""
    if not rows or not cols:
        return np.zeros((len(rows), len(cols)), dtype=np.int64)
    width = max(max(len(g) for g in rows), max(len(g) for g in cols), 1)

    def pad(items: Sequence[GroupElement]) -> tuple[np.ndarray, np.ndarray]:
        array = np.zeros((len(items), width), dtype=np.int64)
        for i, g in enumerate(items):
            array[i, : len(g)] = g.word
        return array, np.array([len(g) for g in items], dtype=np.int64)

    a, la = pad(rows)
    b, lb = pad(cols)
    agree = (a[:, None, :] == b[None, :, :]) & (a[:, None, :] != 0)
    lcp = np.cumprod(agree, axis=2).sum(axis=2)
    return la[:, None] + lb[None, :] - 2 * lcp
