"""Packed bitstrings, seeded random sources and the two mutation operators.

Position ``i`` of a bitstring (0-based, leftmost character in its string
form) is stored in bit ``i`` of a Python int, so popcount and block slicing
are single integer operations.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

RandomSource = np.random.Generator


def make_rng(seed: int, *keys: int) -> RandomSource:
    """PCG64 generator for ``seed``, optionally split by integer ``keys``.

    ``make_rng(master, cell, trial)`` gives a stream that depends only on
    the three integers, never on which other streams were drawn first.
    """
    if keys:
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *keys])))
    return np.random.Generator(np.random.PCG64(seed))


def derive_seed(master_seed: int, *keys: int) -> int:
    """A 64-bit seed deterministically derived from ``master_seed`` and ``keys``."""
    state = np.random.SeedSequence([master_seed, *keys]).generate_state(2, dtype=np.uint32)
    return int(state[0]) | (int(state[1]) << 32)


@dataclass(frozen=True, slots=True)
class Bitstring:
    bits: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"bitstring length must be >= 1, got {self.n}")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bits {self.bits:#x} do not fit in {self.n} positions")

    @classmethod
    def from_digits(cls, digits: Iterable[int] | str) -> "Bitstring":
        digits = [int(d) for d in digits]
        if any(d not in (0, 1) for d in digits):
            raise ValueError("bitstring digits must be 0 or 1")
        return cls(sum(1 << i for i, d in enumerate(digits) if d), len(digits))

    @classmethod
    def zeros(cls, n: int) -> "Bitstring":
        return cls(0, n)

    @classmethod
    def ones(cls, n: int) -> "Bitstring":
        return cls((1 << n) - 1, n)

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        if not -self.n <= i < self.n:
            raise IndexError(i)
        return (self.bits >> (i % self.n)) & 1

    def __str__(self) -> str:
        return "".join(str((self.bits >> i) & 1) for i in range(self.n))

    @property
    def digits(self) -> tuple[int, ...]:
        return tuple((self.bits >> i) & 1 for i in range(self.n))

    def count_ones(self) -> int:
        return self.bits.bit_count()

    def complement(self) -> "Bitstring":
        return Bitstring(self.bits ^ ((1 << self.n) - 1), self.n)

    def block(self, start: int, length: int) -> int:
        """Positions ``start .. start+length-1`` as an int (position ``start`` in bit 0)."""
        return (self.bits >> start) & ((1 << length) - 1)

    def hamming(self, other: "Bitstring") -> int:
        if other.n != self.n:
            raise ValueError("hamming distance needs equal lengths")
        return (self.bits ^ other.bits).bit_count()

    def flip(self, mask: int) -> "Bitstring":
        return Bitstring(self.bits ^ mask, self.n)


def _pack_rows(flags: np.ndarray) -> list[int]:
    packed = np.packbits(flags, axis=-1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def random_bitstring(n: int, rng: RandomSource) -> Bitstring:
    if n < 1:
        raise ValueError(f"instance size must be >= 1, got {n}")
    return Bitstring(_pack_rows(rng.random((1, n)) < 0.5)[0], n)


def random_bitstrings(n: int, count: int, rng: RandomSource) -> list[Bitstring]:
    if n < 1:
        raise ValueError(f"instance size must be >= 1, got {n}")
    return [Bitstring(b, n) for b in _pack_rows(rng.random((count, n)) < 0.5)]


def bitwise_masks(n: int, count: int, rng: RandomSource) -> list[int]:
    """``count`` flip masks, each bit set independently with probability 1/n."""
    return _pack_rows(rng.random((count, n)) < 1.0 / n)


def onebit_masks(n: int, count: int, rng: RandomSource) -> list[int]:
    return [1 << int(i) for i in rng.integers(0, n, size=count)]


def bitwise_mutate(x: Bitstring, rng: RandomSource) -> Bitstring:
    return x.flip(bitwise_masks(x.n, 1, rng)[0])


def onebit_mutate(x: Bitstring, rng: RandomSource) -> Bitstring:
    return x.flip(onebit_masks(x.n, 1, rng)[0])


MUTATIONS = {"bitwise": bitwise_masks, "onebit": onebit_masks}


def mutation_masks(kind: str, n: int, count: int, rng: RandomSource) -> Sequence[int]:
    try:
        return MUTATIONS[kind](n, count, rng)
    except KeyError:
        raise ValueError(f"unknown mutation {kind!r}; expected one of {sorted(MUTATIONS)}") from None
