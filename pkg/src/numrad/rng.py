"""Bit-reproducible random streams: splitmix64 seeding, xoshiro256** draws.

Both generators are defined by their published constants, so the same
(seed, index) produces the same matrices in any implementation:

* ``mix64`` is the splitmix64 finalizer (multipliers 0xBF58476D1CE4E5B9 and
  0x94D049BB133111EB, shifts 30/27/31).
* a sample's seed is ``mix64(seed ^ mix64(index + 0x9E3779B97F4A7C15))``.
* the xoshiro256** state is four successive splitmix64 outputs of that seed.
* uniforms are ``(next >> 11) * 2**-53``; normals come from Box-Muller with
  ``u1 = 1 - uniform()`` and ``u2 = uniform()``, cosine branch first.
* a standard complex Gaussian is ``(z0 + i z1) / sqrt(2)`` from two
  consecutive normals.
"""

from __future__ import annotations

import math

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def mix64(x: int) -> int:
    z = x & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def sample_seed(seed: int, index: int) -> int:
    return mix64((seed & MASK64) ^ mix64(index + GOLDEN_GAMMA))


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class Xoshiro256:
    """xoshiro256** with splitmix64 state initialization."""

    def __init__(self, seed: int):
        state = []
        x = seed & MASK64
        for _ in range(4):
            x = (x + GOLDEN_GAMMA) & MASK64
            state.append(mix64(x))
        self.s = state
        self._spare = None

    @classmethod
    def for_sample(cls, seed: int, index: int) -> "Xoshiro256":
        return cls(sample_seed(seed, index))

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s
        result = (_rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self.s = [s0, s1, s2, s3]
        return result

    def uniform(self) -> float:
        """Uniform on [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def integer(self, n: int) -> int:
        """Integer in ``range(n)`` (modulo reduction; bias is below 2**-50 for small n)."""
        return self.next_u64() % n

    def normal(self) -> float:
        if self._spare is not None:
            z, self._spare = self._spare, None
            return z
        u1 = 1.0 - self.uniform()
        u2 = self.uniform()
        r = math.sqrt(-2.0 * math.log(u1))
        self._spare = r * math.sin(2.0 * math.pi * u2)
        return r * math.cos(2.0 * math.pi * u2)

    def complex_normal(self) -> complex:
        return complex(self.normal(), self.normal()) / math.sqrt(2.0)

    def log_uniform(self, lo: float, hi: float) -> float:
        a, b = math.log10(lo), math.log10(hi)
        return 10.0 ** (a + (b - a) * self.uniform())
