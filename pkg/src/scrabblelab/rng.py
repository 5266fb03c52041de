"""Deterministic PRNG and random formula generation for sweeps.

The generator is xorshift64*: state updates ``x ^= x >> 12; x ^= x << 25;
x ^= x >> 27`` (64-bit wrapping), output ``x * 2685821657736338717`` masked
to 64 bits.  The constants are fixed here so that sweeps are reproducible
across runs and implementations; seed 0 is remapped to a fixed non-zero
constant because the all-zero state is a fixed point.
"""

from __future__ import annotations

from .logic import Cnf, Literal, Qbf

_MASK = (1 << 64) - 1
_MULT = 2685821657736338717
_ZERO_SEED = 0x9E3779B97F4A7C15  # substitute state for seed 0


class Xorshift64Star:
    """Tiny deterministic PRNG; not for cryptography."""

    def __init__(self, seed: int):
        self.state = (seed & _MASK) or _ZERO_SEED

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x = (x ^ (x << 25)) & _MASK
        x ^= x >> 27
        self.state = x
        return (x * _MULT) & _MASK

    def randrange(self, n: int) -> int:
        """Uniform-ish integer in [0, n); fine for test-case generation."""
        if n <= 0:
            raise ValueError("randrange needs a positive bound")
        return self.next_u64() % n

    def randint(self, lo: int, hi: int) -> int:
        """Integer in [lo, hi] inclusive."""
        return lo + self.randrange(hi - lo + 1)

    def coin(self) -> bool:
        return bool(self.next_u64() & 1)

    def choice(self, seq):
        return seq[self.randrange(len(seq))]


def random_cnf(rng: Xorshift64Star, n_vars: int, n_clauses: int) -> Cnf:
    """Random 3-CNF: each slot draws a variable and a polarity."""
    clauses = []
    for _ in range(n_clauses):
        clauses.append(
            tuple(
                Literal(rng.randint(1, n_vars), rng.coin()) for _ in range(3)
            )
        )
    return Cnf(n_vars, tuple(clauses))


def random_qbf(rng: Xorshift64Star, n_vars: int, n_clauses: int) -> Qbf:
    return Qbf(n_vars, random_cnf(rng, n_vars, n_clauses))
