"""Integer helpers: factoring, prime iteration, p-adic valuation."""
from __future__ import annotations

from math import isqrt

import sympy


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("valuation of zero")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def factorint(n: int) -> dict[int, int]:
    n = abs(int(n))
    if n <= 1:
        return {}
    return {int(p): int(e) for p, e in sympy.factorint(n).items()}


def prime_factors(n: int) -> list[int]:
    return sorted(factorint(n))


def primes_upto(n: int) -> list[int]:
    return [int(p) for p in sympy.primerange(2, n + 1)]


def iter_primes(start: int = 2):
    p = int(sympy.nextprime(start - 1)) if start > 2 else 2
    while True:
        yield p
        p = int(sympy.nextprime(p))


def is_prime(n: int) -> bool:
    return bool(sympy.isprime(n))


def is_square_int(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int]:
    """Combine x = r1 mod m1 and x = r2 mod m2 (moduli need not be coprime)."""
    from math import gcd
    g = gcd(m1, m2)
    if (r2 - r1) % g:
        raise ValueError(f"incompatible congruences {r1} mod {m1}, {r2} mod {m2}")
    l = m1 // g * m2
    k = ((r2 - r1) // g * pow(m1 // g, -1, m2 // g)) % (m2 // g) if m2 // g > 1 else 0
    return (r1 + m1 * k) % l, l
