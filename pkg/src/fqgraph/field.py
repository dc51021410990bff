"""Arithmetic in the prime field F_q together with its quadratic character."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from .errors import NotOddPrime, ZeroArgument


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True, eq=False)
class Field:
    """The field F_q for an odd prime q.

    ``eta_table[s]`` holds the quadratic character of ``s`` (entry 0 is a
    placeholder 0 and is never returned by :func:`eta`). ``sqrt_table[s]`` is
    the smaller square root of ``s`` or -1 when ``s`` is a non-residue.
    """

    q: int
    eta_table: np.ndarray = dc_field(repr=False)
    sqrt_table: np.ndarray = dc_field(repr=False)

    def reduce(self, s: int) -> int:
        return int(s) % self.q

    def inv(self, s: int) -> int:
        s = self.reduce(s)
        if s == 0:
            raise ZeroArgument("0 has no multiplicative inverse")
        return pow(s, self.q - 2, self.q)

    def half(self, s: int) -> int:
        return self.reduce(s) * self.inv(2) % self.q

    def is_square(self, s: int) -> bool:
        return self.sqrt_table[self.reduce(s)] >= 0

    def squares(self) -> list[int]:
        return [s for s in range(1, self.q) if self.eta_table[s] == 1]

    def nonsquares(self) -> list[int]:
        return [s for s in range(1, self.q) if self.eta_table[s] == -1]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("Field", self.q))


@lru_cache(maxsize=None)
def make_field(q: int) -> Field:
    """Build (and cache) the field with ``q`` elements; ``q`` must be an odd prime."""
    if isinstance(q, bool) or not isinstance(q, (int, np.integer)):
        raise NotOddPrime(f"q must be an integer, got {q!r}")
    q = int(q)
    if q < 3 or not is_prime(q):
        raise NotOddPrime(f"q={q} is not an odd prime")
    eta_table = np.zeros(q, dtype=np.int64)
    half = (q - 1) // 2
    for s in range(1, q):
        # Euler's criterion
        eta_table[s] = 1 if pow(s, half, q) == 1 else -1
    sqrt_table = np.full(q, -1, dtype=np.int64)
    for x in range(q - 1, -1, -1):
        sqrt_table[x * x % q] = min(x, q - x)
    eta_table.setflags(write=False)
    sqrt_table.setflags(write=False)
    return Field(q, eta_table, sqrt_table)


def eta(field: Field, s: int) -> int:
    """Quadratic character on F_q^*; raises :class:`ZeroArgument` at 0."""
    s = field.reduce(s)
    if s == 0:
        raise ZeroArgument("eta is defined on nonzero elements only")
    return int(field.eta_table[s])


def nu(field: Field, t: int) -> int:
    return field.q - 1 if field.reduce(t) == 0 else -1


def sqrt(field: Field, s: int) -> int | None:
    """Smaller square root of ``s`` in [0, q), or None for non-residues."""
    r = int(field.sqrt_table[field.reduce(s)])
    return None if r < 0 else r
