"""Deterministic, splittable random bit streams.

Streams are derived from a root integer seed through numpy's SeedSequence
spawn-key mechanism: ``child(i, j, ...)`` appends indices to the spawn key,
so any tree of streams is a pure function of (seed, key path).  Identical
seeds give identical output sequences regardless of process or thread
layout, which is what makes parallel Monte Carlo reductions reproducible.
"""

from __future__ import annotations

import numpy as np


class RngStream:
    """Single-owner stream of uniform bits with exact integer draws."""

    __slots__ = ("seed", "key", "_gen", "_buf", "_pos", "bits_consumed")

    _REFILL = 512  # bytes pulled from the generator per refill

    def __init__(self, seed: int, key: tuple[int, ...] = ()):
        self.seed = int(seed)
        self.key = tuple(int(k) for k in key)
        ss = np.random.SeedSequence(self.seed, spawn_key=self.key)
        self._gen = np.random.Generator(np.random.PCG64(ss))
        self._buf = b""
        self._pos = 0
        self.bits_consumed = 0

    def child(self, *indices: int) -> "RngStream":
        """Independent stream addressed by appending indices to the key."""
        return RngStream(self.seed, self.key + indices)

    def randbits(self, k: int) -> int:
        """Uniform integer in [0, 2^k)."""
        if k <= 0:
            raise ValueError(f"need k >= 1, got {k}")
        nbytes = (k + 7) // 8
        end = self._pos + nbytes
        if end > len(self._buf):
            # Buffered refill; the byte sequence consumed is identical to an
            # unbuffered generator, just fetched in larger slabs.
            self._buf = self._buf[self._pos:] + self._gen.bytes(
                max(self._REFILL, nbytes))
            self._pos = 0
            end = nbytes
        raw = int.from_bytes(self._buf[self._pos:end], "big")
        self._pos = end
        self.bits_consumed += k
        return raw >> (8 * nbytes - k)

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection; exact for any n >= 1."""
        if n <= 0:
            raise ValueError(f"need n >= 1, got {n}")
        if n == 1:
            return 0
        k = (n - 1).bit_length()
        while True:
            r = self.randbits(k)
            if r < n:
                return r

    def __repr__(self):
        return f"RngStream(seed={self.seed}, key={self.key})"
