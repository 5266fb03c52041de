"""CNF/QBF data model, DIMACS/QDIMACS parsing, and brute-force oracles.

The oracles enumerate assignments exhaustively on purpose: they are the
independent reference the game-side solvers are checked against, so they
share no machinery with them (no unit propagation, no pruning).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

SAT_ORACLE_MAX_VARS = 24
QBF_EVAL_MAX_VARS = 16


class FormulaError(ValueError):
    """Malformed formula text; carries the offending 1-based line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True, order=True)
class Literal:
    var: int
    negated: bool = False

    def __post_init__(self) -> None:
        if self.var < 1:
            raise ValueError(f"variable index must be >= 1, got {self.var}")

    @classmethod
    def from_int(cls, lit: int) -> "Literal":
        if lit == 0:
            raise ValueError("0 is a clause terminator, not a literal")
        return cls(abs(lit), lit < 0)

    def to_int(self) -> int:
        return -self.var if self.negated else self.var

    def holds(self, assignment: dict[int, bool]) -> bool:
        return assignment[self.var] != self.negated


Clause = tuple[Literal, Literal, Literal]


@dataclass(frozen=True)
class Cnf:
    """A 3-CNF formula: every clause has exactly three literal slots
    (repeats allowed)."""

    n_vars: int
    clauses: tuple[Clause, ...]

    def __post_init__(self) -> None:
        for cl in self.clauses:
            if len(cl) != 3:
                raise ValueError(f"clause must have exactly 3 literal slots: {cl}")
            for lit in cl:
                if lit.var > self.n_vars:
                    raise ValueError(f"literal {lit.to_int()} beyond n_vars={self.n_vars}")

    @classmethod
    def from_ints(cls, n_vars: int, clauses: Iterable[Iterable[int]]) -> "Cnf":
        return cls(
            n_vars,
            tuple(tuple(Literal.from_int(l) for l in cl) for cl in clauses),
        )

    def satisfied_by(self, assignment: dict[int, bool]) -> bool:
        return all(any(lit.holds(assignment) for lit in cl) for cl in self.clauses)


@dataclass(frozen=True)
class Qbf:
    """A quantified 3-CNF formula with the implicit strictly alternating
    prefix ``exists x1, forall x2, exists x3, ...`` over x1..n_vars."""

    n_vars: int
    matrix: Cnf

    def __post_init__(self) -> None:
        if self.matrix.n_vars != self.n_vars:
            raise ValueError("matrix n_vars must match prefix length")


def _pad_clause(lits: list[Literal], line: int) -> Clause:
    if not lits:
        raise FormulaError("empty clause is not 3-CNF", line)
    if len(lits) > 3:
        raise FormulaError(f"clause has {len(lits)} literals, not 3-CNF", line)
    while len(lits) < 3:
        lits.append(lits[-1])  # pad by repeating the last literal
    return (lits[0], lits[1], lits[2])


def _parse_clauses(
    tokens: list[tuple[str, int]], n_vars: int, n_clauses: int
) -> tuple[Clause, ...]:
    clauses: list[Clause] = []
    current: list[Literal] = []
    current_line = tokens[0][1] if tokens else 0
    for tok, line in tokens:
        try:
            v = int(tok)
        except ValueError:
            raise FormulaError(f"bad literal {tok!r}", line)
        if v == 0:
            clauses.append(_pad_clause(current, line))
            current = []
            current_line = line
        else:
            if not current:
                current_line = line
            if abs(v) > n_vars:
                raise FormulaError(f"literal {v} beyond declared {n_vars} variables", line)
            current.append(Literal.from_int(v))
    if current:
        raise FormulaError("clause not terminated by 0", current_line)
    if len(clauses) != n_clauses:
        raise FormulaError(
            f"header declares {n_clauses} clauses, found {len(clauses)}",
            tokens[-1][1] if tokens else 1,
        )
    return tuple(clauses)


def _lines_with_numbers(text: str) -> list[tuple[list[str], int]]:
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("c"):
            continue
        out.append((stripped.split(), i))
    return out


def parse_dimacs(text: str) -> Cnf:
    """Parse DIMACS CNF.  Clauses with fewer than three literal slots are
    padded by repeating the last literal; longer clauses are rejected."""
    lines = _lines_with_numbers(text)
    if not lines:
        raise FormulaError("missing 'p cnf' header", 1)
    header, hline = lines[0]
    if len(header) != 4 or header[0] != "p" or header[1] != "cnf":
        raise FormulaError(f"expected 'p cnf <vars> <clauses>', got {' '.join(header)!r}", hline)
    try:
        n_vars, n_clauses = int(header[2]), int(header[3])
    except ValueError:
        raise FormulaError("non-numeric header counts", hline)
    if n_vars < 0 or n_clauses < 0:
        raise FormulaError("negative header counts", hline)
    tokens = [(tok, line) for parts, line in lines[1:] for tok in parts]
    return Cnf(n_vars, _parse_clauses(tokens, n_vars, n_clauses))


def parse_qdimacs(text: str) -> Qbf:
    """Parse QDIMACS with a strictly alternating single-variable prefix
    starting with an existential block: ``e 1 0``, ``a 2 0``, ...

    Anything else (merged blocks, gaps, a universal start) is rejected
    rather than normalized.
    """
    lines = _lines_with_numbers(text)
    if not lines:
        raise FormulaError("missing 'p cnf' header", 1)
    header, hline = lines[0]
    if len(header) != 4 or header[0] != "p" or header[1] != "cnf":
        raise FormulaError(f"expected 'p cnf <vars> <clauses>', got {' '.join(header)!r}", hline)
    n_vars, n_clauses = int(header[2]), int(header[3])

    idx = 1
    next_var = 1
    while idx < len(lines) and lines[idx][0][0] in ("e", "a"):
        parts, line = lines[idx]
        expected = "e" if next_var % 2 == 1 else "a"
        if parts[0] != expected:
            raise FormulaError(
                f"prefix must alternate starting with 'e'; expected {expected!r} block", line
            )
        if len(parts) != 3 or parts[2] != "0":
            raise FormulaError("quantifier blocks must bind a single variable", line)
        if parts[1] != str(next_var):
            raise FormulaError(f"expected variable {next_var} in prefix, got {parts[1]}", line)
        next_var += 1
        idx += 1
    if next_var - 1 != n_vars:
        raise FormulaError(
            f"prefix binds {next_var - 1} variables, header declares {n_vars}",
            lines[idx - 1][1] if idx > 1 else hline,
        )
    tokens = [(tok, line) for parts, line in lines[idx:] for tok in parts]
    return Qbf(n_vars, Cnf(n_vars, _parse_clauses(tokens, n_vars, n_clauses)))


def sat_oracle(f: Cnf) -> bool:
    """Exhaustive satisfiability test over all ``2^n`` assignments."""
    if f.n_vars > SAT_ORACLE_MAX_VARS:
        raise ValueError(f"sat_oracle is capped at {SAT_ORACLE_MAX_VARS} variables")
    int_clauses = [
        tuple((lit.var, lit.negated) for lit in cl) for cl in f.clauses
    ]
    for bits in range(1 << f.n_vars):
        ok = True
        for cl in int_clauses:
            if not any(((bits >> (v - 1)) & 1) != neg for v, neg in cl):
                ok = False
                break
        if ok:
            return True
    return False


def satisfying_assignment(f: Cnf) -> dict[int, bool] | None:
    """First satisfying assignment in lexicographic order, or None."""
    if f.n_vars > SAT_ORACLE_MAX_VARS:
        raise ValueError(f"satisfying_assignment is capped at {SAT_ORACLE_MAX_VARS} variables")
    for bits in range(1 << f.n_vars):
        assignment = {v: bool((bits >> (v - 1)) & 1) for v in range(1, f.n_vars + 1)}
        if f.satisfied_by(assignment):
            return assignment
    return None


def falsifying_assignment(f: Cnf) -> dict[int, bool] | None:
    """First assignment leaving some clause unsatisfied, or None."""
    for bits in range(1 << f.n_vars):
        assignment = {v: bool((bits >> (v - 1)) & 1) for v in range(1, f.n_vars + 1)}
        if not f.satisfied_by(assignment):
            return assignment
    return None


def qbf_eval(q: Qbf) -> bool:
    """Recursive truth of the alternating formula: OR over existential
    levels, AND over universal levels, matrix satisfaction at the base."""
    if q.n_vars > QBF_EVAL_MAX_VARS:
        raise ValueError(f"qbf_eval is capped at {QBF_EVAL_MAX_VARS} variables")

    def rec(level: int, assignment: dict[int, bool]) -> bool:
        if level > q.n_vars:
            return q.matrix.satisfied_by(assignment)
        results = []
        for value in (False, True):
            assignment[level] = value
            results.append(rec(level + 1, assignment))
            del assignment[level]
        if level % 2 == 1:  # existential
            return results[0] or results[1]
        return results[0] and results[1]

    return rec(1, {})
