"""Rules engine: proper-play legality, move generation, scoring, transition.

All functions are pure: they take immutable states and return new values.
A placement is legal iff

  (a) every target cell is empty;
  (b) the placed cells plus any intervening existing cells form one
      gap-free run along the move's orientation (the main word);
  (c) the main word contains a pre-existing tile, or some placed tile is
      orthogonally adjacent to one, or the board was empty (first move);
  (d) every maximal run of length >= 2 created by the play is in the
      dictionary.

Scoring is unit-valued: a play scores the summed lengths of all words it
forms.  The game finishes after the sixth consecutive pass, or once the
bag is drained and the player to move has no tiles left to play out.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from typing import Iterable, Optional

from .model import (
    PASS,
    Board,
    Cell,
    Exchange,
    GameState,
    Move,
    Pass,
    Place,
    Word,
    move_sort_key,
)

_H = (0, 1)
_V = (1, 0)


class IllegalMoveError(Exception):
    """A move that violates the rules; ``code`` names the failed check."""

    def __init__(self, code: str, detail: str = ""):
        self.code = code
        super().__init__(f"{code}: {detail}" if detail else code)


@dataclass(frozen=True)
class FormedWord:
    """A maximal run of length >= 2 created by a placement."""

    word: Word
    start: Cell
    orientation: str  # "h" | "v"


@dataclass(frozen=True)
class MoveOutcome:
    next: GameState
    score_delta: int
    words: tuple[FormedWord, ...]


def _run_through(cells: dict, cell: Cell, d: tuple[int, int]) -> tuple[Cell, Word]:
    """Maximal occupied run through ``cell`` along direction ``d``."""
    r, c = cell
    dr, dc = d
    while (r - dr, c - dc) in cells:
        r, c = r - dr, c - dc
    start = (r, c)
    word = []
    while (r, c) in cells:
        word.append(cells[(r, c)])
        r, c = r + dr, c + dc
    return start, tuple(word)


def words_formed(board: Board, placed: Iterable[tuple[Cell, str]]) -> list[FormedWord]:
    """Every maximal run of length >= 2 (over board plus placed cells)
    containing at least one placed cell, each reported once.

    Runs read left-to-right or top-to-bottom.  Preconditions: ``placed``
    is non-empty and does not overlap occupied cells.
    """
    placed = list(placed)
    if not placed:
        raise IllegalMoveError("empty-placement", "no tiles placed")
    merged = dict(board.cells)
    for cell, sym in placed:
        if cell in board.cells:
            raise IllegalMoveError("occupied-cell", f"cell {cell} already occupied")
        if cell in merged and merged[cell] != sym:
            raise IllegalMoveError("occupied-cell", f"cell {cell} placed twice")
        merged[cell] = sym
    seen: set[tuple[Cell, str]] = set()
    out: list[FormedWord] = []
    for cell, _ in placed:
        for d, tag in ((_H, "h"), (_V, "v")):
            start, word = _run_through(merged, cell, d)
            if len(word) >= 2 and (start, tag) not in seen:
                seen.add((start, tag))
                out.append(FormedWord(word, start, tag))
    out.sort(key=lambda fw: (fw.orientation, fw.start))
    return out


def board_words(board: Board) -> list[FormedWord]:
    """All maximal runs of length >= 2 currently on the board."""
    seen: set[tuple[Cell, str]] = set()
    out: list[FormedWord] = []
    cells = board.cells
    for cell in cells:
        for d, tag in ((_H, "h"), (_V, "v")):
            start, word = _run_through(cells, cell, d)
            if len(word) >= 2 and (start, tag) not in seen:
                seen.add((start, tag))
                out.append(FormedWord(word, start, tag))
    out.sort(key=lambda fw: (fw.orientation, fw.start))
    return out


def _toggle(state: GameState) -> int:
    return 1 if state.variant.mode == "solitaire" else 3 - state.active


def _refill(rack: tuple[str, ...], bag: tuple[str, ...], k: int) -> tuple[tuple[str, ...], tuple[str, ...]]:
    take = min(k - len(rack), len(bag))
    if take <= 0:
        return tuple(sorted(rack)), bag
    return tuple(sorted(rack + bag[:take])), bag[take:]


def check_placement(state: GameState, mv: Place) -> MoveOutcome:
    """Validate a placement and build its outcome.

    Raises :class:`IllegalMoveError` with one of the codes ``occupied-cell``,
    ``gap-in-main-word``, ``disconnected``, ``word-not-in-dictionary``,
    ``tiles-not-on-rack``.
    """
    cells = state.board.cells
    rack = state.active_rack()

    need = Counter(sym for _, sym in mv.placed)
    have = Counter(rack)
    if any(need[s] > have[s] for s in need):
        raise IllegalMoveError("tiles-not-on-rack", f"rack {rack} lacks {sorted(need.elements())}")

    for cell, _ in mv.placed:
        if cell in cells:
            raise IllegalMoveError("occupied-cell", f"cell {cell} already occupied")

    dr, dc = _H if mv.orientation == "h" else _V
    placed_cells = [cell for cell, _ in mv.placed]
    lo = min(placed_cells)
    hi = max(placed_cells)
    span: list[Cell] = []
    r, c = lo
    while (r, c) <= hi:
        span.append((r, c))
        r, c = r + dr, c + dc
    placed_set = set(placed_cells)
    for cell in span:
        if cell not in placed_set and cell not in cells:
            raise IllegalMoveError("gap-in-main-word", f"gap at {cell}")

    merged = dict(cells)
    for cell, sym in mv.placed:
        merged[cell] = sym
    main_start, main_word = _run_through(merged, lo, (dr, dc))
    main_len = len(main_word)
    board_in_main = main_len - len(mv.placed)

    if cells:
        adjacent = any(
            (r + ar, c + ac) in cells
            for (r, c) in placed_cells
            for ar, ac in (( -1, 0), (1, 0), (0, -1), (0, 1))
        )
        if board_in_main == 0 and not adjacent:
            raise IllegalMoveError("disconnected", "placement touches no played word")

    words = words_formed(state.board, mv.placed)
    if not words:
        raise IllegalMoveError("word-not-in-dictionary", "placement forms no word")
    for fw in words:
        if fw.word not in state.dictionary:
            raise IllegalMoveError(
                "word-not-in-dictionary", " ".join(fw.word)
            )

    delta = sum(len(fw.word) for fw in words)
    new_board = state.board.with_placed(mv.placed)
    remaining = have - need
    new_rack = tuple(sorted(remaining.elements()))
    bag = state.active_bag()
    new_rack, new_bag = _refill(new_rack, bag, state.k)

    kwargs = dict(
        board=new_board,
        pass_streak=0,
        active=_toggle(state),
    )
    if state.active == 1:
        kwargs.update(rack1=new_rack, score1=state.score1 + delta)
    else:
        kwargs.update(rack2=new_rack, score2=state.score2 + delta)
    if state.variant.separate_bags and state.active == 2:
        kwargs.update(bag2=new_bag)
    else:
        kwargs.update(bag=new_bag)
    nxt = replace(state, **kwargs)
    return MoveOutcome(nxt, delta, tuple(words))


def apply_move(state: GameState, mv: Move) -> MoveOutcome:
    """Apply a legal move; illegal moves raise :class:`IllegalMoveError`."""
    if is_finished(state):
        raise IllegalMoveError("game-finished", "no moves in a finished game")
    if isinstance(mv, Place):
        return check_placement(state, mv)
    if isinstance(mv, Pass):
        nxt = replace(state, pass_streak=state.pass_streak + 1, active=_toggle(state))
        return MoveOutcome(nxt, 0, ())
    if isinstance(mv, Exchange):
        if not state.variant.exchanges_allowed:
            raise IllegalMoveError("exchange-forbidden", "variant forbids exchanges")
        rack = state.active_rack()
        counts = Counter(rack)
        counts.subtract(mv.letters)
        if any(v < 0 for v in counts.values()):
            raise IllegalMoveError("tiles-not-on-rack", f"rack {rack} lacks {list(mv.letters)}")
        kept = tuple(sorted(counts.elements()))
        bag = state.active_bag()
        # Refill before appending, so the exchanged letters cannot be
        # redrawn in the same turn; they go to the back in the given order.
        new_rack, new_bag = _refill(kept, bag, state.k)
        new_bag = new_bag + tuple(mv.letters)
        kwargs = dict(pass_streak=0, active=_toggle(state))
        if state.active == 1:
            kwargs.update(rack1=new_rack)
        else:
            kwargs.update(rack2=new_rack)
        if state.variant.separate_bags and state.active == 2:
            kwargs.update(bag2=new_bag)
        else:
            kwargs.update(bag=new_bag)
        return MoveOutcome(replace(state, **kwargs), 0, ())
    raise IllegalMoveError("unknown-move", repr(mv))


def is_finished(state: GameState) -> bool:
    """Finished after the sixth consecutive pass, or when every bag is
    empty and the player to move has an empty rack (nothing to play out)."""
    if state.pass_streak >= 6:
        return True
    return state.bags_empty() and not state.active_rack()


def outcome(state: GameState) -> str:
    """Winner of a finished game: ``"P1Wins"``, ``"P2Wins"`` or ``"Draw"``."""
    if not is_finished(state):
        raise ValueError("outcome of an unfinished game")
    if state.score1 > state.score2:
        return "P1Wins"
    if state.score2 > state.score1:
        return "P2Wins"
    return "Draw"


def _cross_word(cells: dict, cell: Cell, sym: str, d: tuple[int, int]) -> Optional[Word]:
    """Run perpendicular to ``d`` through a placed cell, or None if length 1."""
    pr, pc = (d[1], d[0])
    r, c = cell
    while (r - pr, c - pc) in cells:
        r, c = r - pr, c - pc
    word = []
    rr, cc = r, c
    while True:
        if (rr, cc) == cell:
            word.append(sym)
        elif (rr, cc) in cells:
            word.append(cells[(rr, cc)])
        else:
            break
        rr, cc = rr + pr, cc + pc
    return tuple(word) if len(word) >= 2 else None


def _try_span(
    result: dict,
    cells: dict,
    dic,
    rack_count: Counter,
    w: Word,
    origin: Cell,
    d: tuple[int, int],
    require_board: bool,
) -> None:
    """Attempt to realize dictionary word ``w`` on the span starting at
    ``origin`` along ``d``; record the placement if legal."""
    dr, dc = d
    L = len(w)
    r0, c0 = origin
    if (r0 - dr, c0 - dc) in cells or (r0 + L * dr, c0 + L * dc) in cells:
        return  # run would extend beyond the word
    placed: list[tuple[Cell, str]] = []
    n_board = 0
    r, c = r0, c0
    for j in range(L):
        b = cells.get((r, c))
        if b is None:
            placed.append(((r, c), w[j]))
        elif b == w[j]:
            n_board += 1
        else:
            return
        r, c = r + dr, c + dc
    if not placed:
        return
    if require_board != (n_board > 0):
        return
    need = Counter(sym for _, sym in placed)
    if any(need[s] > rack_count[s] for s in need):
        return
    for cell, sym in placed:
        cw = _cross_word(cells, cell, sym, d)
        if cw is not None and cw not in dic:
            return
    key = tuple(sorted(placed))
    if key not in result:
        result[key] = "h" if dr == 0 else "v"


def _resolve_orientation(cells: dict, placed: tuple, default: str) -> str:
    """Single-tile plays store horizontal orientation whenever the
    horizontal run has length >= 2."""
    if len(placed) > 1:
        return default
    (r, c), _ = placed[0]
    if (r, c - 1) in cells or (r, c + 1) in cells:
        return "h"
    if (r - 1, c) in cells or (r + 1, c) in cells:
        return "v"
    return "h"


def _place_moves(state: GameState) -> list[Place]:
    cells = state.board.cells
    dic = state.dictionary
    rack = state.active_rack()
    if not rack:
        return []
    rack_count = Counter(rack)
    rack_set = set(rack_count)
    found: dict[tuple, str] = {}

    if not cells:
        # First move on an empty board: connectivity is waived; spans are
        # pinned to cover the origin so the move list stays finite.
        for w in dic.sorted_words():
            if len(w) > len(rack):
                continue
            wc = Counter(w)
            if any(wc[s] > rack_count[s] for s in wc):
                continue
            for d in (_H, _V):
                for j in range(len(w)):
                    origin = (-j * d[0], -j * d[1])
                    _try_span(found, cells, dic, rack_count, w, origin, d, require_board=False)
        return [Place(_resolve_orientation(cells, p, o), p) for p, o in found.items()]

    board_count = Counter(cells.values())
    words = []
    for w in dic.sorted_words():
        ws = set(w)
        if not (ws & rack_set):
            continue  # no tile of ours could participate
        wc = Counter(w)
        if any(wc[s] > rack_count[s] + board_count[s] for s in wc):
            continue
        words.append((w, wc))

    frontier: Optional[set[Cell]] = None
    tried: set[tuple] = set()
    for w, wc in words:
        positions: dict[str, list[int]] = {}
        for i, s in enumerate(w):
            positions.setdefault(s, []).append(i)
        # Through-board placements: anchor the word on a matching cell.
        for cell, sym in cells.items():
            idxs = positions.get(sym)
            if not idxs:
                continue
            r0, c0 = cell
            for d in (_H, _V):
                for i in idxs:
                    origin = (r0 - i * d[0], c0 - i * d[1])
                    key = (w, origin, d)
                    if key in tried:
                        continue
                    tried.add(key)
                    _try_span(found, cells, dic, rack_count, w, origin, d, require_board=True)
        # Touching-only placements: the word is built entirely from the
        # rack, adjacent to (but disjoint from) existing tiles.
        if all(wc[s] <= rack_count[s] for s in wc):
            if frontier is None:
                frontier = set()
                for (r, c) in cells:
                    for n in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
                        if n not in cells:
                            frontier.add(n)
            for (r0, c0) in frontier:
                for d in (_H, _V):
                    for i in range(len(w)):
                        origin = (r0 - i * d[0], c0 - i * d[1])
                        key = (w, origin, d)
                        if key in tried:
                            continue
                        tried.add(key)
                        _try_span(found, cells, dic, rack_count, w, origin, d, require_board=False)

    return [Place(_resolve_orientation(cells, p, o), p) for p, o in found.items()]


def _exchange_moves(rack: tuple[str, ...]) -> list[Exchange]:
    """All distinct non-empty sub-multisets of the rack, in sorted order."""
    counts = sorted(Counter(rack).items())
    subs: list[tuple[str, ...]] = [()]
    for sym, n in counts:
        subs = [base + (sym,) * take for base in subs for take in range(n + 1)]
    return [Exchange(tuple(sorted(s))) for s in subs if s]


def legal_moves(state: GameState) -> list[Move]:
    """Every legal move, deduplicated and in canonical order.

    Placements are deduplicated by their resulting cell/symbol assignment;
    a finished state has no moves; passing is always available otherwise.
    """
    if is_finished(state):
        return []
    moves: list[Move] = list(_place_moves(state))
    moves.append(PASS)
    if state.variant.exchanges_allowed:
        moves.extend(_exchange_moves(state.active_rack()))
    moves.sort(key=move_sort_key)
    return moves
