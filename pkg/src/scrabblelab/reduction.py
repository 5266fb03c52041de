"""Compilers from 3-CNF formulas to Scrabble instances, plus the harness
that mechanically re-checks the construction's forcing properties.

Gadget layout
-------------

Each variable ``x_i`` owns a horizontal band.  With ``r`` the occurrence
bound and rack size ``k = 2r``, the band holds six families of pre-placed
("dummy") words:

* the *literal row*: one long horizontal word ``## (# t)^r # (t #)^r ##``
  whose ``t`` slots carry the occurrence symbols of ``x_i`` (positive
  occurrences in the left half, negative in the right; unused slots stay
  ``#``).  The single ``#`` in the middle separates the halves; one extra
  ``#`` at each end lets the assignment anchors tuck under the row.
* a two-letter anchor ``@ t`` above every actual occurrence slot (the
  ``t`` cell is shared with the literal row).
* the assignment anchors ``@ x_i`` (left) and ``x_i @`` (right) in the
  assignment row, two rows below the literal row.
* a vertical all-``#`` wall under the left anchor's ``@`` and a vertical
  ``#^{r+1} x_i #^r`` word under the right anchor's ``@``.  Both start one
  empty row below the assignment row: a tile dropped next to either ``@``
  would merge with them into a word no dictionary entry matches, which is
  what makes the two-letter anchors unextendable except by the two
  intended assignment words.

Assignment words run along the assignment row.  The left word
``@ x x $^{2r-1}`` covers exactly the positive slot columns (assigning
*false*); the mirrored right word covers the negative columns (*true*).
Clause words extend an occurrence anchor downward and cross the
assignment row at their fourth letter, so a clause word fits exactly when
that column was left open, i.e. when the recorded truth value agrees with
the literal.

The published construction leaves the precise coordinates to omitted
figures; this layout is a reconstruction whose sole authority is the
behavioral harness (:func:`verify_facts`) plus the oracle sweeps.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .engine import (
    IllegalMoveError,
    apply_move,
    board_words,
    is_finished,
    legal_moves,
    words_formed,
)
from .logic import Cnf, Literal, Qbf
from .model import (
    PASS,
    Board,
    Cell,
    Dictionary,
    GameState,
    Instance,
    Move,
    Place,
    SOLITAIRE,
    TWO_PLAYER_NO_EXCHANGE,
    Word,
    occ_symbol,
    symbol_fields,
    var_symbol,
)


@dataclass(frozen=True)
class ReductionParams:
    """Sizes shared by all three builders."""

    n: int  # variable count
    m: int  # clause count
    r: int  # occurrence bound, floored at 2
    k: int  # rack size, always 2r

    def __post_init__(self) -> None:
        if self.r < 2 or self.k != 2 * self.r:
            raise ValueError("occurrence bound must be >= 2 with rack size 2r")


def reduction_params(f: Cnf) -> ReductionParams:
    """Occurrence bound ``r`` = max clauses any signed literal appears in,
    floored at 2 so that the ``*^{2r-3}`` runs stay well-defined."""
    per_literal: dict[tuple[int, bool], set[int]] = {}
    for j, clause in enumerate(f.clauses, start=1):
        for lit in clause:
            per_literal.setdefault((lit.var, lit.negated), set()).add(j)
    raw = max((len(js) for js in per_literal.values()), default=0)
    r = max(2, raw)
    return ReductionParams(n=f.n_vars, m=len(f.clauses), r=r, k=2 * r)


def _clause_slot_symbols(f: Cnf) -> dict[int, tuple[str, str, str]]:
    """Occurrence symbols of each clause's three slots, in slot order."""
    out = {}
    for j, clause in enumerate(f.clauses, start=1):
        out[j] = tuple(occ_symbol(lit.var, j, not lit.negated) for lit in clause)
    return out


def _occurrence_lists(f: Cnf, i: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Sorted distinct clause indices where x_i appears positively /
    negatively."""
    pos, neg = set(), set()
    for j, clause in enumerate(f.clauses, start=1):
        for lit in clause:
            if lit.var == i:
                (neg if lit.negated else pos).add(j)
    return tuple(sorted(pos)), tuple(sorted(neg))


@dataclass(frozen=True)
class GadgetSpec:
    """Where one variable's dummy words sit on the board."""

    var_index: int
    pos_occurrences: tuple[int, ...]
    neg_occurrences: tuple[int, ...]
    origin_row: int
    literal_row_start: Cell
    literal_row_word: Word
    left_anchor: Cell  # the @ of "@ x_i"
    right_anchor: Cell  # the @ of "x_i @"
    wall_start: Cell  # top of the vertical #^{4r+3} wall
    separator_start: Cell  # top of the vertical #^{r+1} x #^r word
    separator_x_cell: Cell
    occ_anchor: tuple[tuple[str, Cell], ...]  # occurrence token -> its @ cell

    def occ_anchor_map(self) -> dict[str, Cell]:
        return dict(self.occ_anchor)


def _gadget_pitch(r: int) -> int:
    # Band height (anchor row through wall bottom) plus 2r+4 empty rows.
    return (4 * r + 8) + (2 * r + 4)


def _build_gadget(f: Cnf, p: ReductionParams, i: int) -> GadgetSpec:
    r = p.r
    x = var_symbol(i)
    pos, neg = _occurrence_lists(f, i)
    if len(pos) > r or len(neg) > r:
        raise ValueError(f"literal of x{i} exceeds occurrence bound {r}")
    r0 = (i - 1) * _gadget_pitch(r)
    width = 4 * r + 5  # literal row length

    # Literal row: all '#' except actual occurrence slots.
    row = ["#"] * width
    anchors: list[tuple[str, Cell]] = []
    for u, j in enumerate(pos, start=1):
        col = 2 * u + 1
        row[col] = occ_symbol(i, j, True)
        anchors.append((row[col], (r0, col)))
    for v, j in enumerate(neg, start=1):
        col = 2 * r + 1 + 2 * v
        row[col] = occ_symbol(i, j, False)
        anchors.append((row[col], (r0, col)))

    return GadgetSpec(
        var_index=i,
        pos_occurrences=pos,
        neg_occurrences=neg,
        origin_row=r0,
        literal_row_start=(r0 + 1, 0),
        literal_row_word=tuple(row),
        left_anchor=(r0 + 3, 0),
        right_anchor=(r0 + 3, width - 1),
        wall_start=(r0 + 5, 0),
        separator_start=(r0 + 5, width - 1),
        separator_x_cell=(r0 + 5 + p.r + 1, width - 1),
        occ_anchor=tuple(anchors),
    )


def build_board(f: Cnf, p: ReductionParams) -> tuple[Board, list[GadgetSpec]]:
    """Pre-place every gadget; bands of distinct variables never come
    within Chebyshev distance 2 of each other."""
    cells: dict[Cell, str] = {}

    def put(cell: Cell, sym: str) -> None:
        if cell in cells and cells[cell] != sym:
            raise AssertionError(f"gadget layout overlap at {cell}")
        cells[cell] = sym

    specs = []
    for i in range(1, p.n + 1):
        spec = _build_gadget(f, p, i)
        specs.append(spec)
        r0 = spec.origin_row
        row0, col0 = spec.literal_row_start
        for off, sym in enumerate(spec.literal_row_word):
            put((row0, col0 + off), sym)
        for tok, (ar, ac) in spec.occ_anchor:
            put((ar, ac), "@")  # the t below is the literal row's cell
        x = var_symbol(i)
        put(spec.left_anchor, "@")
        put((spec.left_anchor[0], spec.left_anchor[1] + 1), x)
        put(spec.right_anchor, "@")
        put((spec.right_anchor[0], spec.right_anchor[1] - 1), x)
        wr, wc = spec.wall_start
        for off in range(4 * p.r + 3):
            put((wr + off, wc), "#")
        sr, sc = spec.separator_start
        for off in range(2 * p.r + 2):
            put((sr + off, sc), "#")
        put(spec.separator_x_cell, x)
    return Board(cells), specs


def _assignment_words(p: ReductionParams, i: int) -> tuple[Word, Word]:
    x = var_symbol(i)
    left = ("@", x, x) + ("$",) * (2 * p.r - 1)
    right = ("$",) * (2 * p.r - 1) + (x, x, "@")
    return left, right


def _clause_words(slots: Sequence[str], r: int) -> set[Word]:
    words = set()
    for a, b, c in itertools.permutations(range(3)):
        words.add(
            ("@", slots[a], slots[a], slots[b], slots[c]) + ("*",) * (2 * r - 3)
        )
    return words


def build_dictionary(f: Cnf, p: ReductionParams) -> Dictionary:
    """Assignment words, clause words for every literal permutation, and
    every dummy word pre-placed on the board."""
    words: set[Word] = set()
    for i in range(1, p.n + 1):
        words.update(_assignment_words(p, i))
    slots = _clause_slot_symbols(f)
    for j in range(1, p.m + 1):
        words.update(_clause_words(slots[j], p.r))
    board, _ = build_board(f, p)
    for fw in board_words(board):
        words.add(fw.word)
    return Dictionary(words)


def build_bag(f: Cnf, p: ReductionParams) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """The full draw sequence, split as (bag0, rack0).

    The sequence is one block per variable (``x_i $^{2r-1}``) followed by
    one block per clause (its three occurrence symbols then ``*^{2r-3}``);
    rack0 is the leading x1 block.
    """
    seq: list[str] = []
    for i in range(1, p.n + 1):
        seq.append(var_symbol(i))
        seq.extend(["$"] * (2 * p.r - 1))
    slots = _clause_slot_symbols(f)
    for j in range(1, p.m + 1):
        seq.extend(slots[j])
        seq.extend(["*"] * (2 * p.r - 3))
    rack0 = tuple(seq[: p.k])
    bag0 = tuple(seq[p.k :])
    return bag0, rack0


def reduce_sat(f: Cnf) -> Instance:
    """Compile a 3-CNF formula into a solitaire instance that is solvable
    iff the formula is satisfiable."""
    p = reduction_params(f)
    board, _ = build_board(f, p)
    dictionary = build_dictionary(f, p)
    bag0, rack0 = build_bag(f, p)
    return Instance(
        dictionary=dictionary,
        k=p.k,
        board0=board,
        bag0=bag0,
        rack1_0=rack0,
        rack2_0=(),
        score1_0=0,
        score2_0=0,
        variant=SOLITAIRE,
    )


def pad_to_even(q: Qbf) -> Qbf:
    """Append a fresh variable and the tautological clause
    ``(x_{n+1} or not x_{n+1} or x_{n+1})`` when n is odd."""
    if q.n_vars % 2 == 0:
        return q
    n = q.n_vars + 1
    pad = (Literal(n, False), Literal(n, True), Literal(n, False))
    return Qbf(n, Cnf(n, q.matrix.clauses + (pad,)))


def duplicate_clauses(f: Cnf) -> Cnf:
    """Each clause immediately followed by an identical copy, so the
    second player can always match the first player's placement."""
    doubled = []
    for cl in f.clauses:
        doubled.append(cl)
        doubled.append(cl)
    return Cnf(f.n_vars, tuple(doubled))


def reduce_qbf(q: Qbf) -> Instance:
    """Compile an alternating QBF into a two-player shared-bag instance
    whose winner matches the formula's truth.

    The clause list is duplicated, a lone ``@`` rides at the very end of
    the bag, both players' first blocks are pre-drawn, and player 2
    starts with a one-point lead.
    """
    padded = pad_to_even(q)
    f = duplicate_clauses(padded.matrix)
    p = reduction_params(f)
    board, _ = build_board(f, p)
    dictionary = build_dictionary(f, p)
    bag0, rack1 = build_bag(f, p)
    rack2 = bag0[: p.k]  # the x2 block
    bag = bag0[p.k :] + ("@",)
    return Instance(
        dictionary=dictionary,
        k=p.k,
        board0=board,
        bag0=bag,
        rack1_0=rack1,
        rack2_0=rack2,
        score1_0=0,
        score2_0=1,
        variant=TWO_PLAYER_NO_EXCHANGE,
    )


# ---------------------------------------------------------------------------
# Decoding an instance back into its formula and layout
# ---------------------------------------------------------------------------


class DecodeError(ValueError):
    """The instance does not have the structure the compilers produce."""


@dataclass(frozen=True)
class ReductionLayout:
    """Formula, parameters and gadget coordinates recovered from an
    instance's bag; the canonical-playout and Facts machinery run off it."""

    cnf: Cnf
    params: ReductionParams
    specs: tuple[GadgetSpec, ...]
    two_player: bool

    def spec(self, i: int) -> GadgetSpec:
        return self.specs[i - 1]

    def clause_slots(self, j: int) -> tuple[str, str, str]:
        return _clause_slot_symbols(self.cnf)[j]

    def assignment_place(self, i: int, value: bool) -> Place:
        """The one placement that records ``x_i := value``."""
        p = self.params
        spec = self.spec(i)
        row = spec.left_anchor[0]
        x = var_symbol(i)
        if value:
            # Right word blocks the negative half.
            start = 2 * p.r + 3
            tiles = [((row, start + off), "$") for off in range(2 * p.r - 1)]
            tiles.append(((row, 4 * p.r + 2), x))
        else:
            tiles = [((row, 2), x)]
            tiles.extend(((row, 3 + off), "$") for off in range(2 * p.r - 1))
        return Place("h", tuple(tiles))

    def clause_place(self, j: int, lead_slot: int) -> Place:
        """The placement checking clause j via its ``lead_slot``-th literal."""
        p = self.params
        slots = self.clause_slots(j)
        lead = slots[lead_slot]
        kind, i, jj, positive = symbol_fields(lead)
        spec = self.spec(i)
        anchor = spec.occ_anchor_map()[lead]
        rest = [s for idx, s in enumerate(slots) if idx != lead_slot]
        tiles = [lead] + rest + ["*"] * (2 * p.r - 3)
        r0, col = anchor
        placed = tuple(((r0 + 2 + off, col), sym) for off, sym in enumerate(tiles))
        return Place("v", placed)

    def endgame_place(self) -> Place:
        """The closing two-letter word: the lone ``@`` dropped to the left
        of the first gadget's separator ``x``."""
        xr, xc = self.spec(1).separator_x_cell
        return Place("h", (((xr, xc - 1), "@"),))


def _split_blocks(seq: Sequence[str], k: int) -> list[tuple[str, ...]]:
    if len(seq) % k:
        raise DecodeError(f"draw sequence length {len(seq)} is not a multiple of {k}")
    return [tuple(seq[i : i + k]) for i in range(0, len(seq), k)]


def _block_kind(block: tuple[str, ...]) -> tuple:
    """Classify a bag block as ('var', i) or ('clause', slot-symbols)."""
    fields = [symbol_fields(s) for s in block]
    if fields[0][0] == "var" and all(s == "$" for s in block[1:]):
        return ("var", fields[0][1])
    if all(f[0] == "occ" for f in fields[:3]) and all(s == "*" for s in block[3:]):
        return ("clause", block[:3])
    raise DecodeError(f"unrecognized bag block {block}")


def decode_instance(inst: Instance) -> ReductionLayout:
    """Recover the compiled formula and gadget layout from an instance.

    Only the bag structure is validated; the board is deliberately not
    compared against a rebuild, so that damaged boards can still be run
    through :func:`verify_facts` (where they must fail behaviorally).
    """
    if inst.k % 2 or inst.k < 4:
        raise DecodeError(f"rack size {inst.k} is not an even number >= 4")
    r = inst.k // 2
    two_player = inst.variant.mode == "two_player"

    drawn: list[str] = list(inst.rack1_0)
    if two_player:
        drawn += list(inst.rack2_0)
    bag = list(inst.bag0)
    if two_player:
        if not bag or bag[-1] != "@":
            raise DecodeError("two-player bag must end with '@'")
        bag = bag[:-1]
    blocks = _split_blocks(drawn + bag, inst.k)

    kinds = [_block_kind(b) for b in blocks]
    var_kinds = [k for k in kinds if k[0] == "var"]
    clause_kinds = [k for k in kinds if k[0] == "clause"]
    if kinds != var_kinds + clause_kinds:
        raise DecodeError("variable blocks must all precede clause blocks")
    if [k[1] for k in var_kinds] != list(range(1, len(var_kinds) + 1)):
        raise DecodeError("variable blocks must run x1..xn in order")

    n = len(var_kinds)
    clauses = []
    for j, (_, slots) in enumerate(clause_kinds, start=1):
        lits = []
        for s in slots:
            kind, i, jj, positive = symbol_fields(s)
            if jj != j:
                raise DecodeError(f"occurrence {s} found in clause block {j}")
            if i > n:
                raise DecodeError(f"occurrence {s} references unknown variable x{i}")
            lits.append(Literal(i, not positive))
        clauses.append(tuple(lits))
    cnf = Cnf(n, tuple(clauses))

    p = reduction_params(cnf)
    if p.k != inst.k:
        raise DecodeError(
            f"rack size {inst.k} does not match the occurrence bound of the decoded formula"
        )
    specs = tuple(_build_gadget(cnf, p, i) for i in range(1, n + 1))
    return ReductionLayout(cnf=cnf, params=p, specs=specs, two_player=two_player)


# ---------------------------------------------------------------------------
# Canonical playouts
# ---------------------------------------------------------------------------


class IntendedPlayoutError(Exception):
    """A scripted move was illegal: either the assignment falsifies the
    formula (expected during verification) or the layout is broken."""

    def __init__(self, phase: str, index: int, prefix: list[Move], cause: Exception):
        self.phase = phase
        self.index = index
        self.prefix = prefix
        self.cause = cause
        super().__init__(f"scripted move illegal in {phase} phase at {phase} {index}: {cause}")


def _choice_slot(layout: ReductionLayout, j: int, choice: Literal) -> int:
    slots = layout.clause_slots(j)
    want = occ_symbol(choice.var, j, not choice.negated)
    for idx, s in enumerate(slots):
        if s == want:
            return idx
    raise ValueError(f"clause {j} has no literal {choice.to_int()}")


def intended_playout(
    inst: Instance,
    assignment: Mapping[int, bool],
    clause_choice: Mapping[int, Literal],
) -> list[Move]:
    """The scripted line of play: one assignment word per variable, one
    clause word per clause in the chosen literal's gadget, and (two-player
    games) the closing ``@`` word.

    Every scripted move is validated through the engine; the first illegal
    one raises :class:`IntendedPlayoutError` naming the phase and index.
    """
    layout = decode_instance(inst)
    state = inst.initial_state()
    moves: list[Move] = []

    def step(mv: Move, phase: str, index: int) -> None:
        nonlocal state
        try:
            state = apply_move(state, mv).next
        except IllegalMoveError as exc:
            raise IntendedPlayoutError(phase, index, moves.copy(), exc) from exc
        moves.append(mv)

    for i in range(1, layout.params.n + 1):
        if i not in assignment:
            raise ValueError(f"assignment missing variable x{i}")
        step(layout.assignment_place(i, assignment[i]), "value", i)
    for j in range(1, layout.params.m + 1):
        if j not in clause_choice:
            raise ValueError(f"clause choice missing clause {j}")
        slot = _choice_slot(layout, j, clause_choice[j])
        step(layout.clause_place(j, slot), "test", j)
    if layout.two_player:
        step(layout.endgame_place(), "endgame", 0)
    return moves


def first_true_choices(
    layout: ReductionLayout, assignment: Mapping[int, bool]
) -> dict[int, Literal]:
    """Per clause, the first literal the assignment makes true; clauses
    with no true literal get their first literal (the script then jams
    there, which is the point)."""
    out: dict[int, Literal] = {}
    for j, clause in enumerate(layout.cnf.clauses, start=1):
        pick = clause[0]
        for lit in clause:
            if assignment[lit.var] != lit.negated:
                pick = lit
                break
        out[j] = pick
    return out


def margin_playout(
    inst: Instance, assignment: Mapping[int, bool]
) -> tuple[list[Move], GameState]:
    """Both players scripted with a flat assignment; when the script jams
    at an unsatisfied clause the players trade the six mirrored passes and
    the game ends on the pass rule.  Returns the moves and final state."""
    layout = decode_instance(inst)
    choices = first_true_choices(layout, assignment)
    try:
        moves = intended_playout(inst, assignment, choices)
    except IntendedPlayoutError as exc:
        moves = exc.prefix + [PASS] * 6
    state = inst.initial_state()
    for mv in moves:
        state = apply_move(state, mv).next
    if not is_finished(state):
        raise AssertionError("scripted playout did not finish the game")
    return moves, state


# ---------------------------------------------------------------------------
# Facts harness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StateRecord:
    playout: str
    step: int
    phase: str
    check: str  # "fact1" | "fact2" | "fact3" | "law" | "endgame"
    ok: bool
    expected: str
    observed: str


@dataclass
class FactsReport:
    fact1_ok: bool = True
    fact2_ok: bool = True
    fact3_ok: bool = True
    law_ok: bool = True
    states_checked: int = 0
    playouts_run: int = 0
    failures: list[StateRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.fact1_ok and self.fact2_ok and self.fact3_ok and self.law_ok

    def record(self, rec: StateRecord) -> None:
        if not rec.ok:
            self.failures.append(rec)
            if rec.check == "fact1" or rec.check == "endgame":
                self.fact1_ok = False
            elif rec.check == "fact2":
                self.fact2_ok = False
            elif rec.check == "fact3":
                self.fact3_ok = False
            elif rec.check == "law":
                self.law_ok = False

    def summary(self) -> str:
        bits = [
            f"fact1={'pass' if self.fact1_ok else 'FAIL'}",
            f"fact2={'pass' if self.fact2_ok else 'FAIL'}",
            f"fact3={'pass' if self.fact3_ok else 'FAIL'}",
            f"law={'pass' if self.law_ok else 'FAIL'}",
            f"states={self.states_checked}",
            f"playouts={self.playouts_run}",
        ]
        return " ".join(bits)


def _rack_phase(layout: ReductionLayout, rack: tuple[str, ...]) -> tuple[str, int]:
    """Classify the active rack: ('value', i), ('test', j), ('endgame', 0)
    or ('other', 0)."""
    if rack == ("@",):
        return ("endgame", 0)
    if len(rack) != layout.params.k:
        return ("other", 0)
    for s in rack:
        f = symbol_fields(s)
        if f[0] == "var":
            return ("value", f[1])
        if f[0] == "occ":
            return ("test", f[2])
    return ("other", 0)


def _law_violations(board: Board, r: int) -> list[str]:
    bad = []
    for fw in board_words(board):
        L = len(fw.word)
        if L != 2 and L < 2 * r + 2:
            bad.append(f"{fw.orientation}@{fw.start}:len={L}")
    return bad


def _check_state(
    layout: ReductionLayout,
    state: GameState,
    assignment: Mapping[int, bool],
    report: FactsReport,
    playout: str,
    step: int,
) -> None:
    p = layout.params
    report.states_checked += 1

    law_bad = _law_violations(state.board, p.r)
    report.record(
        StateRecord(playout, step, "-", "law", not law_bad, "runs of length 2 or >=2r+2", ";".join(law_bad) or "ok")
    )

    if is_finished(state):
        return
    rack = state.active_rack()
    phase, idx = _rack_phase(layout, rack)
    places = [mv for mv in legal_moves(state) if isinstance(mv, Place)]

    # Fact 1: every legal placement plays the whole rack; full racks extend
    # a two-letter word (two board letters in the main word), the lone
    # closing '@' uses one.
    for pl in places:
        formed = words_formed(state.board, pl.placed)
        main = [fw for fw in formed if fw.orientation == pl.orientation]
        ok = len(pl.placed) == len(rack) and len(formed) == 1 and len(main) == 1
        if ok:
            board_letters = len(main[0].word) - len(pl.placed)
            ok = board_letters == (1 if phase == "endgame" else 2)
        report.record(
            StateRecord(
                playout,
                step,
                phase,
                "fact1" if phase != "endgame" else "endgame",
                ok,
                "uses whole rack, one word, two board letters (one for the closing @)",
                f"tiles={len(pl.placed)}/{len(rack)} words={len(formed)}",
            )
        )

    observed = sorted(pl.placed for pl in places)
    if phase == "value":
        expected = sorted(
            layout.assignment_place(idx, value).placed for value in (False, True)
        )
        report.record(
            StateRecord(
                playout,
                step,
                phase,
                "fact2",
                observed == expected,
                f"exactly the two assignment words of x{idx}",
                f"{len(places)} placements",
            )
        )
    elif phase == "test":
        slots = layout.clause_slots(idx)
        expected_anchors = set()
        for s in set(slots):
            kind, i, jj, positive = symbol_fields(s)
            if assignment[i] == positive:
                expected_anchors.add(layout.spec(i).occ_anchor_map()[s])
        observed_anchors = set()
        for pl in places:
            (top, col), _ = min(pl.placed)
            observed_anchors.add((top - 2, col))
        report.record(
            StateRecord(
                playout,
                step,
                phase,
                "fact3",
                observed_anchors == expected_anchors,
                f"anchors of clause {idx}'s true literals: {sorted(expected_anchors)}",
                f"{sorted(observed_anchors)}",
            )
        )
    elif phase == "endgame":
        ok = bool(places) and all(len(pl.placed) == 1 for pl in places)
        report.record(
            StateRecord(
                playout, step, phase, "endgame", ok,
                "the lone @ forms a two-letter word", f"{len(places)} placements",
            )
        )


def verify_facts(
    inst: Instance,
    max_playouts: int = 64,
    assignments: Optional[Iterable[Mapping[int, bool]]] = None,
) -> FactsReport:
    """Walk the states along canonical playouts and assert the forcing
    facts at each: whole-rack placements (1), exactly two value-phase
    options (2), test-phase options exactly matching the agreeing literals
    (3), plus the global run-length law.

    ``max_playouts`` bounds the assignment/choice combinations walked;
    assignments default to exhaustive enumeration in lexicographic order.
    """
    layout = decode_instance(inst)
    p = layout.params
    report = FactsReport()

    if assignments is None:
        assignments = (
            {v + 1: bool((bits >> v) & 1) for v in range(p.n)}
            for bits in range(1 << p.n)
        )

    for assignment in assignments:
        if report.playouts_run >= max_playouts:
            break
        report.playouts_run += 1
        tag = "a" + "".join("1" if assignment[v] else "0" for v in range(1, p.n + 1))
        choices = first_true_choices(layout, assignment)
        state = inst.initial_state()
        step = 0
        _check_state(layout, state, assignment, report, tag, step)
        script: list[tuple[Move, str, int]] = [
            (layout.assignment_place(i, assignment[i]), "value", i)
            for i in range(1, p.n + 1)
        ]
        script += [
            (layout.clause_place(j, _choice_slot(layout, j, choices[j])), "test", j)
            for j in range(1, p.m + 1)
        ]
        if layout.two_player:
            script.append((layout.endgame_place(), "endgame", 0))
        for mv, phase, idx in script:
            try:
                state = apply_move(state, mv).next
            except IllegalMoveError:
                # The script jams exactly when the assignment falsifies the
                # clause; the pre-move state assertions above already
                # checked that no placement was available.
                break
            step += 1
            _check_state(layout, state, assignment, report, tag, step)
    return report
