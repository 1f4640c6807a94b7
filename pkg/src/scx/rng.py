"""Deterministic xorshift64* generator used for all random instances.

Fixtures must replay identically across runs and across implementations,
so instance generation never touches the stdlib ``random`` module.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_MULT = 0x2545F4914F6CDD1D


class Rng:
    """xorshift64* with the classic (12, 25, 27) taps."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = (seed & _MASK) or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self.state
        x ^= (x >> 12)
        x ^= (x << 25) & _MASK
        x ^= (x >> 27)
        self.state = x
        return (x * _MULT) & _MASK

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        span = hi - lo + 1
        return lo + self.next_u64() % span

    def chance(self, num: int, den: int) -> bool:
        return self.next_u64() % den < num

    def choice(self, items):
        if not items:
            raise ValueError("choice from empty sequence")
        return items[self.next_u64() % len(items)]

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.next_u64() % (i + 1)
            items[i], items[j] = items[j], items[i]

    def spawn(self) -> "Rng":
        """Independent child stream (used to decouple sub-generators)."""
        return Rng(self.next_u64() ^ 0xD1B54A32D192ED03)
