"""Group presentations with a solvable word problem at desk scale."""

from __future__ import annotations

import json
import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from pathlib import Path

from coarsequot.errors import NotSmallCancellationError, ParseError
from coarsequot.groups.words import GroupElement, cyclic_reduce, free_reduce

logger = logging.getLogger(__name__)

SMALL_CANCELLATION_BOUND = Fraction(1, 6)


class PresentationKind(StrEnum):
    """Families of presentations the workbench can multiply in."""

    FREE = "free"
    FREE_PRODUCT = "free_product"
    SMALL_CANCELLATION = "small_cancellation"
    CYCLIC = "cyclic"


@dataclass(frozen=True)
class PieceReport:
    """Longest piece among the cyclic relator conjugates, relative to the shortest relator."""

    ratio: Fraction
    longest_piece: int
    shortest_relator: int
    degenerate: bool = False

    @property
    def small_cancellation(self) -> bool:
        """Whether the relators satisfy C′(1/6)."""
        return not self.degenerate and self.ratio < SMALL_CANCELLATION_BOUND


def _rotations(relators: Sequence[GroupElement]) -> list[tuple[int, ...]]:
    words = []
    for relator in relators:
        for word in (relator.word, (~relator).word):
            words.extend(word[i:] + word[:i] for i in range(len(word)))
    return words


def _common_prefix(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    size = 0
    for x, y in zip(a, b, strict=False):
        if x != y:
            break
        size += 1
    return size


def piece_report(relators: Sequence[GroupElement]) -> PieceReport:
    """Scan every pair of distinct cyclic relator positions for common prefixes.

    Sorting the rotations puts the longest common prefix of any two next to each other.
    """
    cores = [cyclic_reduce(r)[1] for r in relators if not r.is_identity]
    if not cores:
        return PieceReport(Fraction(0), 0, 0, degenerate=True)
    shortest = min(len(r) for r in cores)
    if shortest <= 1:
        return PieceReport(Fraction(0), 0, shortest, degenerate=True)
    rotations = sorted(_rotations(cores))
    longest = 0
    for a, b in zip(rotations, rotations[1:], strict=False):
        longest = max(longest, _common_prefix(a, b))
    return PieceReport(Fraction(longest, shortest), longest, shortest)


def piece_ratio(relators: Sequence[GroupElement]) -> Fraction:
    """Longest piece divided by the shortest relator length."""
    return piece_report(relators).ratio


class _DehnTable:
    """Rotations of ``r^{±1}`` indexed by their first ``⌊|r|/2⌋ + 1`` letters."""

    def __init__(self, relators: Sequence[GroupElement]) -> None:
        self.by_length: dict[int, dict[tuple[int, ...], tuple[int, ...]]] = {}
        for rotation in _rotations(relators):
            head = len(rotation) // 2 + 1
            self.by_length.setdefault(head, {})[rotation[:head]] = rotation

    def find(
        self, word: Sequence[int], cyclic: bool = False
    ) -> tuple[int, int, tuple[int, ...]] | None:
        """First position where more than half of a relator rotation starts.

        With ``cyclic`` set, ``word`` is read as a cyclic word and matches may wrap around.
        """
        text = tuple(word) + tuple(word) if cyclic else tuple(word)
        for start in range(len(word)):
            for head, table in self.by_length.items():
                if head > len(word):
                    continue
                rotation = table.get(text[start : start + head])
                if rotation is None:
                    continue
                size = head
                while (
                    size < len(rotation)
                    and size < len(word)
                    and start + size < len(text)
                    and text[start + size] == rotation[size]
                ):
                    size += 1
                return start, size, rotation
        return None


@dataclass(frozen=True)
class Presentation:
    """A presentation ``⟨generators | relators⟩`` of one of the supported kinds.

    Attributes:
        rank: Number of generators.
        relators: Cyclically reduced relator words.
        kind: Which word-problem solution applies.
        factor_ranks: Ranks of the free factors for ``FREE_PRODUCT``.
    """

    rank: int
    relators: tuple[GroupElement, ...] = ()
    kind: PresentationKind = PresentationKind.FREE
    factor_ranks: tuple[int, ...] = ()
    _table: _DehnTable | None = field(default=None, init=False, repr=False, compare=False)
    _pieces: PieceReport | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError("a presentation needs at least one generator")
        for relator in self.relators:
            if any(abs(letter) > self.rank for letter in relator.word):
                raise ValueError(f"relator {relator} uses a generator beyond rank {self.rank}")
        object.__setattr__(self, "relators", tuple(cyclic_reduce(r)[1] for r in self.relators))
        if self.kind is PresentationKind.FREE_PRODUCT:
            if sum(self.factor_ranks) != self.rank or not self.factor_ranks:
                raise ValueError("factor ranks must sum to the rank")
        if self.kind is PresentationKind.CYCLIC:
            if self.rank != 1 or len(self.relators) != 1 or len(set(self.relators[0].word)) != 1:
                raise ValueError("a cyclic presentation is ⟨a | a^k⟩")
        if self.kind is PresentationKind.SMALL_CANCELLATION:
            object.__setattr__(self, "_table", _DehnTable(self.relators))
            object.__setattr__(self, "_pieces", piece_report(self.relators))

    # Construction

    @classmethod
    def free(cls, rank: int) -> Presentation:
        """The free group of the given rank."""
        return cls(rank)

    @classmethod
    def free_product(cls, factor_ranks: Sequence[int]) -> Presentation:
        """A free product of free groups; generators are numbered factor by factor."""
        return cls(sum(factor_ranks), (), PresentationKind.FREE_PRODUCT, tuple(factor_ranks))

    @classmethod
    def cyclic(cls, order: int) -> Presentation:
        """The cyclic group ``⟨a | a^order⟩``."""
        return cls(1, (GroupElement.generator(0) ** order,), PresentationKind.CYCLIC)

    @classmethod
    def small_cancellation(cls, rank: int, relators: Sequence[GroupElement]) -> Presentation:
        """A one-or-more relator quotient that must satisfy C′(1/6).

        Raises:
            NotSmallCancellationError: If the relators fail C′(1/6).
        """
        report = piece_report(relators)
        if not report.small_cancellation:
            raise NotSmallCancellationError(
                f"piece ratio {report.ratio} is not below 1/6 (degenerate: {report.degenerate})"
            )
        return cls(rank, tuple(relators), PresentationKind.SMALL_CANCELLATION)

    @classmethod
    def from_dict(cls, payload: Mapping[str, object]) -> Presentation:
        """Build from ``{"rank", "relators", "kind", "factor_ranks"}``.

        Raises:
            ParseError: If a field is missing or malformed.
        """
        try:
            rank = int(payload["rank"])  # type: ignore[arg-type]
            raw_relators = payload.get("relators", [])
            relators = [GroupElement.parse(str(r)) for r in raw_relators]  # type: ignore[union-attr]
            default_kind = "small_cancellation" if relators else "free"
            kind = PresentationKind(payload.get("kind", default_kind))
            raw_factors = payload.get("factor_ranks", [])
            factors = tuple(int(f) for f in raw_factors)  # type: ignore[union-attr]
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"invalid presentation: {e}") from e
        if kind is PresentationKind.SMALL_CANCELLATION:
            return cls.small_cancellation(rank, relators)
        try:
            return cls(rank, tuple(relators), kind, factors)
        except ValueError as e:
            raise ParseError(f"invalid presentation: {e}") from e

    @classmethod
    def read(cls, path: str | Path) -> Presentation:
        """Read a presentation JSON file."""
        try:
            payload = json.loads(Path(path).read_text())
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", e.lineno) from e
        return cls.from_dict(payload)

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form."""
        payload: dict[str, object] = {
            "rank": self.rank,
            "relators": [str(r) for r in self.relators],
            "kind": str(self.kind),
        }
        if self.factor_ranks:
            payload["factor_ranks"] = list(self.factor_ranks)
        return payload

    # Word problem

    @property
    def is_free(self) -> bool:
        """Whether free reduction alone solves the word problem."""
        return self.kind in (PresentationKind.FREE, PresentationKind.FREE_PRODUCT)

    @property
    def shortest_relator(self) -> int:
        """Length of the shortest relator, 0 when there are none."""
        return min((len(r) for r in self.relators), default=0)

    def equality_floor(self) -> Fraction:
        """Length both sides must exceed before two distinct Dehn-reduced words can be equal.

        If ``u`` and ``v`` are Dehn-reduced and equal in the group, ``u v⁻¹`` holds more than
        ``(1 − 3λ)|r|`` letters of a relator with at most half of them from either side, so
        ``|u|, |v| > (1/2 − 3λ)|r|``.

        Raises:
            NotSmallCancellationError: For kinds whose normal forms are unique.
        """
        if self._pieces is None:
            raise NotSmallCancellationError(f"normal forms are unique for kind {self.kind}")
        ratio = self._pieces.ratio
        return max(Fraction(0), (Fraction(1, 2) - 3 * ratio) * self.shortest_relator)

    def generators(self) -> list[GroupElement]:
        """Generators and their inverses in the order ``a, A, b, B, ...``."""
        letters = []
        for i in range(self.rank):
            letters.extend([GroupElement((i + 1,)), GroupElement((-(i + 1),))])
        return letters

    def factor_of(self, letter: int) -> int:
        """Index of the free factor containing a generator letter."""
        index = abs(letter) - 1
        for factor, size in enumerate(self.factor_ranks or (self.rank,)):
            if index < size:
                return factor
            index -= size
        raise ValueError(f"letter {letter} beyond rank {self.rank}")

    def dehn_reduce(self, element: GroupElement) -> GroupElement:
        """Replace relator pieces ``u`` of ``uv`` with ``|u| > |v|`` by ``v⁻¹`` while any remain.

        Raises:
            NotSmallCancellationError: If the presentation is not C′(1/6).
        """
        if self._table is None:
            raise NotSmallCancellationError(f"Dehn reduction needs C'(1/6), kind is {self.kind}")
        word = list(element.word)
        while (found := self._table.find(word)) is not None:
            start, size, rotation = found
            replacement = [-letter for letter in reversed(rotation[size:])]
            word = list(free_reduce(word[:start] + replacement + word[start + size :]))
        return GroupElement(tuple(word))

    def _cyclic_exponent(self, element: GroupElement) -> int:
        order = len(self.relators[0])
        exponent = sum(1 if letter > 0 else -1 for letter in element.word) % order
        return exponent - order if exponent > order // 2 else exponent

    def normal_form(self, element: GroupElement) -> GroupElement:
        """Reduced representative: free reduction, Dehn reduction, or centred exponent."""
        if self.kind is PresentationKind.CYCLIC:
            return GroupElement.generator(0) ** self._cyclic_exponent(element)
        if self.kind is PresentationKind.SMALL_CANCELLATION:
            return self.dehn_reduce(element)
        return element

    def multiply(self, first: GroupElement, second: GroupElement) -> GroupElement:
        """Normal form of the product."""
        return self.normal_form(first * second)

    def is_trivial(self, element: GroupElement) -> bool:
        """Decide ``element = 1``; small cancellation uses Dehn's algorithm on the cyclic word."""
        if self.kind is PresentationKind.CYCLIC:
            return self._cyclic_exponent(element) == 0
        if self.kind is not PresentationKind.SMALL_CANCELLATION:
            return element.is_identity
        if self._table is None:
            raise NotSmallCancellationError("Dehn's algorithm needs a C'(1/6) presentation")
        word = cyclic_reduce(element)[1].word
        while word:
            found = self._table.find(word, cyclic=True)
            if found is None:
                return False
            start, size, rotation = found
            rotated = word[start:] + word[:start]
            replacement = tuple(-letter for letter in reversed(rotation[size:]))
            word = cyclic_reduce(GroupElement(replacement + rotated[size:]))[1].word
        return True

    def equal(self, first: GroupElement, second: GroupElement) -> bool:
        """Word-problem oracle."""
        return self.is_trivial(~first * second)

    def length(self, element: GroupElement) -> int:
        """Word length of the normal form.

        For small cancellation this is exact whenever the reduced word is shorter than half the
        shortest relator, and an upper bound otherwise.
        """
        if self.kind is PresentationKind.CYCLIC:
            return abs(self._cyclic_exponent(element))
        return len(self.normal_form(element))
