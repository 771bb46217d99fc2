"""Binomial coefficients modulo two.

The parity of C(a, b) is read off the binary digits: it is odd exactly when
every 1-bit of ``b`` is also a 1-bit of ``a`` (no carries in b + (a - b)).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .errors import ParameterError

BIG_BINOM_LIMIT = 10**4


@dataclass(frozen=True)
class OnesSet:
    """Bit positions holding a 1 in a nonnegative integer."""

    positions: frozenset[int]

    @classmethod
    def of(cls, x: int) -> OnesSet:
        if x < 0:
            raise ParameterError("ones() is defined for nonnegative integers")
        return cls(frozenset(i for i in range(x.bit_length()) if x >> i & 1))

    def value(self) -> int:
        return sum(1 << i for i in self.positions)

    def __le__(self, other: OnesSet) -> bool:
        return self.positions <= other.positions


def ones(x: int) -> frozenset[int]:
    return OnesSet.of(x).positions


def binom_parity(a: int, b: int) -> int:
    """C(a, b) mod 2 for arbitrary-precision ``0 <= b <= a``."""
    if b < 0 or b > a:
        raise ParameterError(f"binom_parity needs 0 <= b <= a, got a={a}, b={b}")
    return int(b & ~a == 0)


def big_binom(a: int, b: int) -> int:
    if not 0 <= b <= a <= BIG_BINOM_LIMIT:
        raise ParameterError(f"big_binom needs 0 <= b <= a <= {BIG_BINOM_LIMIT}, got ({a}, {b})")
    return comb(a, b)


def nested_binom_parity(i: int, q: int, t_star: int) -> int:
    """Parity of C(C(i, q), t_star); the inner value is computed exactly."""
    if t_star < 0:
        raise ParameterError("t_star must be nonnegative")
    inner = big_binom(i, q) if q <= i else 0
    if t_star > inner:
        return 0
    return binom_parity(inner, t_star)
