"""Prime sequences, primality testing, and position-based prime selectors.

Selectors describe infinite sets of primes by their position in the
increasing enumeration 2, 3, 5, ...: all positions, the odd positions
(2, 5, 11, ...) or the even positions (3, 7, 13, ...).  The latter two
partition the primes, which is what makes support-disjointness of
torsion descriptors decidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

# Witness set making Miller-Rabin deterministic for n < 3.3e24; far
# beyond anything a descriptor at desk scale can mention.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> tuple[int, ...]:
    """Distinct prime factors of |n| in increasing order."""
    n = abs(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return tuple(out)


_PRIME_CACHE: list[int] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]


def _extend_cache(upto_count: int) -> None:
    n = _PRIME_CACHE[-1]
    while len(_PRIME_CACHE) < upto_count:
        n += 2
        if is_prime(n):
            _PRIME_CACHE.append(n)


def nth_prime(i: int) -> int:
    """The i-th prime, 1-based: nth_prime(1) == 2."""
    if i < 1:
        raise ValueError(f"prime index must be >= 1, got {i}")
    _extend_cache(i)
    return _PRIME_CACHE[i - 1]


def prime_position(p: int) -> int | None:
    """Position of p in the prime sequence (1-based), or None if p is not prime."""
    if not is_prime(p):
        return None
    i = 1
    while nth_prime(i) < p:
        i += 1
    return i if nth_prime(i) == p else None


ALL = "all"
ODD_POSITIONS = "odd-positions"
EVEN_POSITIONS = "even-positions"

_KINDS = (ALL, ODD_POSITIONS, EVEN_POSITIONS)


@dataclass(frozen=True)
class PrimeSelector:
    """An infinite, increasing, decidable family of primes."""

    kind: str = ALL

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown prime selector {self.kind!r}")

    def nth(self, i: int) -> int:
        """The i-th prime of this family, 1-based."""
        if i < 1:
            raise ValueError(f"selector index must be >= 1, got {i}")
        if self.kind == ALL:
            return nth_prime(i)
        if self.kind == ODD_POSITIONS:
            return nth_prime(2 * i - 1)
        return nth_prime(2 * i)

    def index_of(self, p: int) -> int | None:
        """Position of the prime p within this family, or None if absent."""
        pos = prime_position(p)
        if pos is None:
            return None
        if self.kind == ALL:
            return pos
        if self.kind == ODD_POSITIONS:
            return (pos + 1) // 2 if pos % 2 == 1 else None
        return pos // 2 if pos % 2 == 0 else None

    def __contains__(self, p: int) -> bool:
        return self.index_of(p) is not None

    def iter_primes(self) -> Iterator[int]:
        i = 1
        while True:
            yield self.nth(i)
            i += 1

    def positions(self) -> frozenset[str]:
        """Which of the two position-parity classes this family meets."""
        if self.kind == ALL:
            return frozenset((ODD_POSITIONS, EVEN_POSITIONS))
        return frozenset((self.kind,))


ALL_PRIMES = PrimeSelector(ALL)
ODD_POSITION_PRIMES = PrimeSelector(ODD_POSITIONS)
EVEN_POSITION_PRIMES = PrimeSelector(EVEN_POSITIONS)


def selectors_disjoint(a: PrimeSelector, b: PrimeSelector) -> bool:
    return not (a.positions() & b.positions())
