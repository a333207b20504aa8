"""Deterministic, splittable randomness.

Every random choice in the package flows through :class:`Rng`, a SplitMix64
generator.  SplitMix64 is a fixed, documented 64-bit algorithm (Steele,
Lea & Flood 2014), so identical seeds give identical streams on every
platform and Python version -- nothing here depends on the stdlib
``random`` module's internals.

Seeds are derived (split) with :func:`derive_seed`, which hashes an
arbitrary tuple of ints/strings into a fresh 64-bit seed.  Distinct key
tuples give independent streams, which is what lets Monte Carlo trials run
in parallel and still replay bit-exactly.
"""

from __future__ import annotations

import hashlib
import math

MASK64 = (1 << 64) - 1

_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def splitmix64(state: int) -> tuple[int, int]:
    """One SplitMix64 step: returns (new_state, output)."""
    state = (state + _GOLDEN) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    z = z ^ (z >> 31)
    return state, z


def derive_seed(base: int, *keys: int | str) -> int:
    """Derive a child seed from a base seed and a key path.

    Uses SHA-256 over the canonical byte encoding of (base, keys), truncated
    to 64 bits.  Collisions between distinct key paths are cryptographically
    unlikely, which the experiment harness checks explicitly anyway.
    """
    h = hashlib.sha256()
    h.update(int(base & MASK64).to_bytes(8, "little"))
    for k in keys:
        if isinstance(k, str):
            h.update(b"s")
            h.update(k.encode("utf-8"))
        else:
            h.update(b"i")
            h.update(int(k & MASK64).to_bytes(8, "little", signed=False))
        h.update(b"\x00")
    return int.from_bytes(h.digest()[:8], "little")


class Rng:
    """SplitMix64-backed random source with the handful of draws we need."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def split(self, *keys: int | str) -> "Rng":
        return Rng(derive_seed(self._state, "split", *keys))

    def u64(self) -> int:
        self._state, out = splitmix64(self._state)
        return out

    def random(self) -> float:
        # 53-bit mantissa, uniform in [0, 1)
        return (self.u64() >> 11) * (1.0 / (1 << 53))

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased via rejection."""
        if n <= 0:
            raise ValueError("randrange needs n >= 1")
        # reject draws above the largest multiple of n
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.u64()
            if x < limit:
                return x % n

    def randint(self, a: int, b: int) -> int:
        """Uniform integer in [a, b] inclusive."""
        return a + self.randrange(b - a + 1)

    def coin(self, p: float) -> bool:
        return self.random() < p

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def shuffle(self, seq: list) -> None:
        """In-place Fisher-Yates."""
        for i in range(len(seq) - 1, 0, -1):
            j = self.randrange(i + 1)
            seq[i], seq[j] = seq[j], seq[i]

    def sample(self, seq, k: int) -> list:
        """k distinct elements, order random (partial Fisher-Yates)."""
        n = len(seq)
        if not 0 <= k <= n:
            raise ValueError(f"cannot sample {k} from {n}")
        pool = list(seq)
        for i in range(k):
            j = i + self.randrange(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]

    def geometric_skip(self, p: float) -> int:
        """Number of failures before the next success of a Bernoulli(p).

        Used by the G(n,p) generator to jump between present edges rather
        than tossing one coin per pair.
        """
        if p >= 1.0:
            return 0
        if p <= 0.0:
            raise ValueError("p must be positive for skip sampling")
        u = 1.0 - self.random()  # in (0, 1]
        return int(math.floor(math.log(u) / math.log(1.0 - p)))
