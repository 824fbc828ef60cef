"""Counter-based deterministic random numbers.

Every draw is a pure function of (seed, counter), so experiment rows can
be generated in any order (or in parallel) and still be byte-identical.
The mixer is the SplitMix64 finalizer.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1


def mix64(x: int) -> int:
    """SplitMix64 finalization of a 64-bit value."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


class CounterRng:
    """Stateless-core RNG: value i of stream (seed, stream) is
    mix64(mix64(seed ^ mix64(stream)) + i)."""

    def __init__(self, seed: int, stream: int = 0):
        self.base = mix64((seed & MASK64) ^ mix64(stream & MASK64))
        self.counter = 0

    def next_u64(self) -> int:
        v = mix64((self.base + self.counter) & MASK64)
        self.counter += 1
        return v

    def randrange(self, n: int) -> int:
        """Uniform in [0, n) by rejection (no modulo bias)."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (MASK64 + 1) - (MASK64 + 1) % n
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n

    def random(self) -> float:
        return self.next_u64() / (MASK64 + 1)

    def sample(self, population, k: int) -> list:
        """k distinct elements, order-stable partial Fisher-Yates."""
        pool = list(population)
        if k > len(pool):
            raise ValueError("sample larger than population")
        for i in range(k):
            j = i + self.randrange(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]

    def subset(self, population, density: float) -> list:
        return [x for x in population if self.random() < density]
