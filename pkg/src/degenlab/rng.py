"""Splittable counter-based pseudo-random generator.

Experiments must be reproducible across platforms and across parallelism
levels, so randomness comes from a SHA-256 counter stream keyed by
(master seed, label path).  Child generators are derived by extending the
label path; streams for distinct paths are independent and a child's output
never depends on how much its parent or siblings were consumed.
"""

from __future__ import annotations

import hashlib
from fractions import Fraction


class SplitRng:
    """Deterministic random stream keyed by a seed and a label path."""

    __slots__ = ("seed", "path", "_key", "_counter", "_buffer")

    def __init__(self, seed: int | str, *path: object) -> None:
        self.seed = seed
        self.path = tuple(path)
        material = repr((str(seed), tuple(str(x) for x in path)))
        self._key = hashlib.sha256(material.encode("utf-8")).digest()
        self._counter = 0
        self._buffer = b""

    def child(self, *labels: object) -> "SplitRng":
        """Derive an independent generator for a sub-task."""
        return SplitRng(self.seed, *self.path, *labels)

    def _refill(self) -> None:
        block = hashlib.sha256(self._key + self._counter.to_bytes(8, "big")).digest()
        self._counter += 1
        self._buffer += block

    def bits64(self) -> int:
        while len(self._buffer) < 8:
            self._refill()
        chunk, self._buffer = self._buffer[:8], self._buffer[8:]
        return int.from_bytes(chunk, "big")

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased via rejection sampling."""
        if n <= 0:
            raise ValueError("randbelow requires a positive bound")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.bits64()
            if x < limit:
                return x % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.randbelow(hi - lo + 1)

    def choice(self, seq):
        if not seq:
            raise ValueError("choice from empty sequence")
        return seq[self.randbelow(len(seq))]

    def fraction(self, num_bound: int = 8, den_bound: int = 4) -> Fraction:
        """Small random rational, numerator in [-num_bound, num_bound]."""
        num = self.randint(-num_bound, num_bound)
        den = self.randint(1, den_bound)
        return Fraction(num, den)
