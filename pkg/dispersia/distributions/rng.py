"""
Random number streams.

A :class:`RngStream` is a value: two equal streams always produce the same draws,
and it can be passed to worker processes without sharing any mutable state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """
    The SplitMix64 finalizer. A bijection on 64-bit unsigned ints with full avalanche.

    :param x: 0 <= x < 2**64
    :return: mixed value, 0 <= value < 2**64
    """
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


@dataclass(frozen=True)
class RngStream:
    """
    Identifies a random number stream by (master_seed, stream_index).
    """

    master_seed: int
    stream_index: int

    def __post_init__(self):
        for name in ("master_seed", "stream_index"):
            value = getattr(self, name)
            if not isinstance(value, (int, numpy.integer)) or not (0 <= value <= _MASK64):
                raise ValueError("%s must be a 64-bit unsigned int, got %r" % (name, value))

    def generator(self) -> numpy.random.Generator:
        """
        :return: a fresh generator positioned at the start of this stream
        """
        seq = numpy.random.SeedSequence([int(self.stream_index), int(self.master_seed)])
        return numpy.random.Generator(numpy.random.PCG64(seq))
