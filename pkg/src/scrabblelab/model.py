"""Core domain types for the derandomized Scrabble workbench.

A symbol is a canonical string token; everything assembled from symbols
(words, the dictionary, boards, bags, racks, game states, instances) is an
immutable value that can be shared freely between threads.  State change is
modelled by producing new values.

Token grammar (injective, sortable):

    ``#`` ``$`` ``*`` ``@``     auxiliary marks
    ``x<i>``                    variable symbol, i >= 1
    ``p<i>c<j>``                positive occurrence of variable i in clause j
    ``n<i>c<j>``                negative occurrence of variable i in clause j

Symbols order lexicographically by token, which gives deterministic
serialization everywhere.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Union

Cell = tuple[int, int]
Word = tuple[str, ...]

AUX_SYMBOLS = ("#", "$", "*", "@")

_TOKEN_RE = re.compile(r"^(?:[#$*@]|x[1-9][0-9]*|[pn]([1-9][0-9]*)c([1-9][0-9]*))$")


class TokenError(ValueError):
    """Raised for text that is not a canonical symbol token."""


def parse_symbol(text: str) -> str:
    """Parse a canonical token, returning the validated symbol.

    Raises :class:`TokenError` with the offending text otherwise.
    """
    if not isinstance(text, str) or not _TOKEN_RE.match(text):
        raise TokenError(f"unknown symbol token: {text!r}")
    return text


def symbol_token(sym: str) -> str:
    """Canonical text encoding of a symbol (the identity on valid symbols)."""
    return parse_symbol(sym)


def is_symbol(text: str) -> bool:
    return isinstance(text, str) and bool(_TOKEN_RE.match(text))


def var_symbol(i: int) -> str:
    """Symbol for variable ``x_i``."""
    if i < 1:
        raise ValueError(f"variable index must be >= 1, got {i}")
    return f"x{i}"


def occ_symbol(i: int, j: int, positive: bool) -> str:
    """Symbol for a signed appearance of variable i in clause j."""
    if i < 1 or j < 1:
        raise ValueError(f"occurrence indices must be >= 1, got ({i}, {j})")
    return f"{'p' if positive else 'n'}{i}c{j}"


def symbol_fields(sym: str) -> tuple:
    """Decompose a symbol into ``("aux", mark)``, ``("var", i)`` or
    ``("occ", i, j, positive)``."""
    parse_symbol(sym)
    if sym in AUX_SYMBOLS:
        return ("aux", sym)
    if sym[0] == "x":
        return ("var", int(sym[1:]))
    i, j = sym[1:].split("c")
    return ("occ", int(i), int(j), sym[0] == "p")


def parse_word(text: str) -> Word:
    """Parse a space-separated sequence of tokens into a word."""
    parts = text.split()
    if not parts:
        raise TokenError("empty word")
    return tuple(parse_symbol(p) for p in parts)


def word_text(word: Word) -> str:
    return " ".join(word)


class Dictionary:
    """An exact, orientation-sensitive set of words.

    Membership is literal: a word and its reverse are distinct entries
    unless both were added.  Entries must have length >= 2.
    """

    __slots__ = ("words", "_by_symbol", "_symbols", "_sorted", "max_len")

    def __init__(self, words: Iterable[Word]):
        ws = frozenset(tuple(w) for w in words)
        for w in ws:
            if len(w) < 2:
                raise ValueError(f"dictionary entry shorter than 2: {w!r}")
            for s in w:
                parse_symbol(s)
        self.words: frozenset[Word] = ws
        self.max_len: int = max((len(w) for w in ws), default=0)
        by_symbol: dict[str, list[tuple[Word, int]]] = {}
        for w in ws:
            for i, s in enumerate(w):
                by_symbol.setdefault(s, []).append((w, i))
        # Sorted so that iteration order never depends on set hashing.
        self._by_symbol: dict[str, tuple[tuple[Word, int], ...]] = {
            s: tuple(sorted(entries)) for s, entries in by_symbol.items()
        }
        self._symbols = frozenset(by_symbol)
        self._sorted: tuple[Word, ...] = tuple(sorted(ws))

    def entries_with(self, sym: str) -> tuple[tuple[Word, int], ...]:
        """All (word, index) pairs such that word[index] == sym."""
        return self._by_symbol.get(sym, ())

    @property
    def symbols(self) -> frozenset[str]:
        return self._symbols

    def sorted_words(self) -> tuple[Word, ...]:
        return self._sorted

    def __contains__(self, word: Word) -> bool:
        return tuple(word) in self.words

    def __iter__(self) -> Iterator[Word]:
        return iter(self.words)

    def __len__(self) -> int:
        return len(self.words)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Dictionary) and self.words == other.words

    def __hash__(self) -> int:
        return hash(self.words)

    def __repr__(self) -> str:
        return f"Dictionary({len(self.words)} words)"


class Board:
    """Finite sparse map from grid cells to symbols on an unbounded plane.

    Rows grow downward and columns rightward.  Instances are immutable;
    :meth:`with_placed` returns a new board.
    """

    __slots__ = ("cells", "_frozen")

    def __init__(self, cells: Mapping[Cell, str] | Iterable[tuple[Cell, str]] = ()):
        d = dict(cells.items() if isinstance(cells, Mapping) else cells)
        for cell, sym in d.items():
            if len(cell) != 2:
                raise ValueError(f"bad cell {cell!r}")
            parse_symbol(sym)
        self.cells: dict[Cell, str] = d
        self._frozen: Optional[frozenset] = None

    def frozen(self) -> frozenset:
        """Hashable snapshot of the cell map (cached)."""
        if self._frozen is None:
            self._frozen = frozenset(self.cells.items())
        return self._frozen

    def with_placed(self, placed: Iterable[tuple[Cell, str]]) -> "Board":
        new = dict(self.cells)
        for cell, sym in placed:
            if cell in new:
                raise ValueError(f"cell {cell} already occupied")
            new[cell] = sym
        return Board(new)

    def bounding_box(self) -> Optional[tuple[int, int, int, int]]:
        """(min_row, min_col, max_row, max_col), or None for an empty board."""
        if not self.cells:
            return None
        rows = [r for r, _ in self.cells]
        cols = [c for _, c in self.cells]
        return (min(rows), min(cols), max(rows), max(cols))

    def sorted_cells(self) -> list[tuple[Cell, str]]:
        return sorted(self.cells.items())

    def __contains__(self, cell: Cell) -> bool:
        return cell in self.cells

    def __len__(self) -> int:
        return len(self.cells)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Board) and self.cells == other.cells

    def __hash__(self) -> int:
        return hash(self.frozen())

    def __repr__(self) -> str:
        return f"Board({len(self.cells)} cells)"


def sorted_rack(letters: Iterable[str]) -> tuple[str, ...]:
    """Canonical rack form: a sorted tuple (racks are multisets)."""
    rack = tuple(sorted(letters))
    for s in rack:
        parse_symbol(s)
    return rack


def rack_minus(rack: tuple[str, ...], letters: Iterable[str]) -> Optional[tuple[str, ...]]:
    """Remove a sub-multiset from a rack; None if it is not contained."""
    counts = Counter(rack)
    counts.subtract(letters)
    if any(v < 0 for v in counts.values()):
        return None
    return tuple(sorted(counts.elements()))


@dataclass(frozen=True)
class VariantConfig:
    """Which rule variant is in force.

    Solitaire forbids exchanges; separate bags only make sense with two
    players.
    """

    mode: str  # "solitaire" | "two_player"
    exchanges_allowed: bool = False
    separate_bags: bool = False

    def __post_init__(self) -> None:
        if self.mode not in ("solitaire", "two_player"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "solitaire" and self.exchanges_allowed:
            raise ValueError("solitaire forbids exchanges")
        if self.separate_bags and self.mode != "two_player":
            raise ValueError("separate bags require two players")


SOLITAIRE = VariantConfig("solitaire")
TWO_PLAYER_NO_EXCHANGE = VariantConfig("two_player", exchanges_allowed=False)


@dataclass(frozen=True)
class Place:
    """A proper play: tiles placed along one line.

    ``placed`` holds ((row, col), symbol) pairs, stored sorted by cell.
    Orientation is "h" or "v"; for single-tile plays it is horizontal by
    convention when the horizontal run has length >= 2.
    """

    orientation: str
    placed: tuple[tuple[Cell, str], ...]

    def __post_init__(self) -> None:
        if self.orientation not in ("h", "v"):
            raise ValueError(f"bad orientation {self.orientation!r}")
        if not self.placed:
            raise ValueError("a Place must set at least one tile")
        ordered = tuple(sorted(self.placed))
        object.__setattr__(self, "placed", ordered)
        cells = [cell for cell, _ in ordered]
        if len(set(cells)) != len(cells):
            raise ValueError("placed cells must be pairwise distinct")
        rows = {r for (r, _), _ in ordered}
        cols = {c for (_, c), _ in ordered}
        if self.orientation == "h" and len(rows) > 1:
            raise ValueError("horizontal placement must stay in one row")
        if self.orientation == "v" and len(cols) > 1:
            raise ValueError("vertical placement must stay in one column")


@dataclass(frozen=True)
class Pass:
    """A pass: only the consecutive-pass counter moves."""


@dataclass(frozen=True)
class Exchange:
    """Exchange letters with the bag, in the order given."""

    letters: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.letters:
            raise ValueError("an Exchange must give up at least one letter")


PASS = Pass()
Move = Union[Place, Pass, Exchange]


def move_token(mv: Move) -> str:
    """Canonical one-line encoding of a move (used for sorting and output)."""
    if isinstance(mv, Place):
        cells = " ".join(f"{r},{c}={sym}" for (r, c), sym in mv.placed)
        return f"place {mv.orientation} {cells}"
    if isinstance(mv, Pass):
        return "pass"
    return "exchange " + " ".join(mv.letters)


def move_sort_key(mv: Move) -> tuple:
    """Canonical move order: placements, then pass, then exchanges."""
    if isinstance(mv, Place):
        return (0, mv.orientation, mv.placed)
    if isinstance(mv, Pass):
        return (1,)
    return (2, mv.letters)


@dataclass(frozen=True)
class GameState:
    """A position: active player, board, bag(s), racks, scores, pass streak.

    ``k`` (rack capacity) and ``dictionary`` ride along so that the rules
    engine is self-contained given a state; both are shared, never copied.
    """

    active: int
    board: Board
    bag: tuple[str, ...]
    rack1: tuple[str, ...]
    rack2: tuple[str, ...]
    score1: int
    score2: int
    pass_streak: int
    variant: VariantConfig
    k: int
    dictionary: Dictionary
    bag2: Optional[tuple[str, ...]] = None

    def validate(self) -> None:
        if self.active not in (1, 2):
            raise ValueError(f"active player must be 1 or 2, got {self.active}")
        if not 0 <= self.pass_streak <= 6:
            raise ValueError(f"pass_streak out of range: {self.pass_streak}")
        if self.k < 1:
            raise ValueError("rack capacity must be positive")
        if len(self.rack1) > self.k or len(self.rack2) > self.k:
            raise ValueError("rack exceeds capacity")
        if self.score1 < 0 or self.score2 < 0:
            raise ValueError("scores must be non-negative")
        if self.variant.mode == "solitaire":
            if self.rack2:
                raise ValueError("solitaire keeps player 2's rack empty")
            if self.active != 1:
                raise ValueError("solitaire is always player 1 to move")
        if self.variant.separate_bags != (self.bag2 is not None):
            raise ValueError("bag2 present iff variant uses separate bags")
        for s in self.bag + self.rack1 + self.rack2 + (self.bag2 or ()):
            parse_symbol(s)
        if self.rack1 != tuple(sorted(self.rack1)) or self.rack2 != tuple(sorted(self.rack2)):
            raise ValueError("racks must be stored sorted")

    def active_rack(self) -> tuple[str, ...]:
        return self.rack1 if self.active == 1 else self.rack2

    def active_bag(self) -> tuple[str, ...]:
        if self.variant.separate_bags and self.active == 2:
            return self.bag2 or ()
        return self.bag

    def bags_empty(self) -> bool:
        return not self.bag and not (self.bag2 or ())

    def canonical_key(self, with_scores: bool = True) -> tuple:
        """Hashable identity for memo tables.

        The dictionary is shared per solve and deliberately excluded.
        """
        return (
            self.active,
            self.pass_streak,
            (self.score1, self.score2) if with_scores else None,
            self.board.frozen(),
            self.bag,
            self.bag2,
            self.rack1,
            self.rack2,
            self.k,
            self.variant,
        )

    def canonical_text(self) -> str:
        """Deterministic textual serialization (stable across runs)."""
        parts = [
            f"active={self.active}",
            f"passes={self.pass_streak}",
            f"scores={self.score1},{self.score2}",
            f"k={self.k}",
            f"variant={self.variant.mode},{int(self.variant.exchanges_allowed)},{int(self.variant.separate_bags)}",
            "board=" + ";".join(f"{r},{c},{s}" for (r, c), s in sorted(self.board.cells.items())),
            "bag=" + ",".join(self.bag),
            "bag2=" + ("-" if self.bag2 is None else ",".join(self.bag2)),
            "rack1=" + ",".join(self.rack1),
            "rack2=" + ",".join(self.rack2),
        ]
        return "|".join(parts)


@dataclass(frozen=True)
class Instance:
    """A complete packaged game: the output of the reduction compilers."""

    dictionary: Dictionary
    k: int
    board0: Board
    bag0: tuple[str, ...]
    rack1_0: tuple[str, ...]
    rack2_0: tuple[str, ...]
    score1_0: int
    score2_0: int
    variant: VariantConfig
    bag2_0: Optional[tuple[str, ...]] = None
    active0: int = 1
    passes0: int = 0

    def validate(self) -> None:
        if self.k < 1:
            raise ValueError("rack size must be positive")
        if len(self.rack1_0) > self.k or len(self.rack2_0) > self.k:
            raise ValueError("initial rack exceeds rack size")
        for s in self.bag0 + self.rack1_0 + self.rack2_0 + (self.bag2_0 or ()):
            parse_symbol(s)
        if self.variant.separate_bags != (self.bag2_0 is not None):
            raise ValueError("bag2_0 present iff variant uses separate bags")
        self.initial_state().validate()

    def initial_state(self) -> GameState:
        return GameState(
            active=self.active0,
            board=self.board0,
            bag=self.bag0,
            rack1=tuple(sorted(self.rack1_0)),
            rack2=tuple(sorted(self.rack2_0)),
            score1=self.score1_0,
            score2=self.score2_0,
            pass_streak=self.passes0,
            variant=self.variant,
            k=self.k,
            dictionary=self.dictionary,
            bag2=self.bag2_0,
        )
