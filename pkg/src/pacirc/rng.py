"""Deterministic random streams for circuit growth.

SplitMix64 streams with power-of-two rejection sampling for bounded
uniforms, so every bounded draw is exactly uniform (no modulo bias) and
bit-reproducible between the pure-Python model and the compiled
simulation kernel, which implement the identical update.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1

SM_GAMMA = 0x9E3779B97F4A7C15
SM_MULT1 = 0xBF58476D1CE4E5B9
SM_MULT2 = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """SplitMix64 finalizer: a fixed bijective scrambler of 64-bit words."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * SM_MULT1) & MASK64
    x = ((x ^ (x >> 27)) * SM_MULT2) & MASK64
    return x ^ (x >> 31)


def stream_state(seed: int, replicate: int = 0) -> int:
    """Initial generator state for one replicate, a pure function of (seed, replicate)."""
    return mix64((seed & MASK64) ^ mix64((replicate * SM_GAMMA) & MASK64))


class RandomSource:
    """SplitMix64 stream exposing exact bounded uniforms.

    Streams for distinct ``replicate`` values are independent for all
    practical purposes; identical ``(seed, replicate)`` always yields the
    identical sequence.
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int, replicate: int = 0):
        self._state = stream_state(seed, replicate)

    @classmethod
    def from_state(cls, state: int) -> "RandomSource":
        """Stream starting at a raw generator state (as derived by stream_state)."""
        rng = cls.__new__(cls)
        rng._state = state & MASK64
        return rng

    def next_u64(self) -> int:
        self._state = (self._state + SM_GAMMA) & MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * SM_MULT1) & MASK64
        z = ((z ^ (z >> 27)) * SM_MULT2) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound).

        Takes the top ``k`` bits of the stream where ``2**k`` is the next
        power of two >= bound, rejecting values >= bound.
        """
        if bound <= 0:
            raise ValueError(f"bound must be positive, got {bound}")
        if bound == 1:
            return 0
        shift = 64 - (bound - 1).bit_length()
        while True:
            x = self.next_u64() >> shift
            if x < bound:
                return x
