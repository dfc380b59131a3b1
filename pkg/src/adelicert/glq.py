"""2x2 matrices over Z/n and finite subgroup closures; checks the mod-8 group computations."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd
from typing import Iterable


@dataclass(frozen=True)
class MatMod:
    a: int
    b: int
    c: int
    d: int
    n: int

    def __post_init__(self):
        n = self.n
        object.__setattr__(self, "a", self.a % n)
        object.__setattr__(self, "b", self.b % n)
        object.__setattr__(self, "c", self.c % n)
        object.__setattr__(self, "d", self.d % n)

    @classmethod
    def identity(cls, n: int) -> "MatMod":
        return cls(1, 0, 0, 1, n)

    @classmethod
    def of(cls, rows, n: int) -> "MatMod":
        (a, b), (c, d) = rows
        return cls(a, b, c, d, n)

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.n

    def trace(self) -> int:
        return (self.a + self.d) % self.n

    def is_invertible(self) -> bool:
        return gcd(self.det(), self.n) == 1

    def __mul__(self, o: "MatMod") -> "MatMod":
        if o.n != self.n:
            raise ValueError("modulus mismatch")
        return MatMod(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                      self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d, self.n)

    def __pow__(self, k: int) -> "MatMod":
        r = MatMod.identity(self.n)
        base = self
        while k:
            if k & 1:
                r = r * base
            base = base * base
            k >>= 1
        return r

    def inverse(self) -> "MatMod":
        if not self.is_invertible():
            raise ValueError(f"{self} is not invertible mod {self.n}")
        di = pow(self.det(), -1, self.n)
        return MatMod(self.d * di, -self.b * di, -self.c * di, self.a * di, self.n)

    def __repr__(self):
        return f"({self.a},{self.b};{self.c},{self.d}) mod {self.n}"


def commutator(x: MatMod, y: MatMod) -> MatMod:
    return x * y * x.inverse() * y.inverse()


def closure(generators: Iterable[MatMod], ceiling: int = 1 << 20) -> frozenset[MatMod]:
    """Subgroup generated by invertible matrices (breadth-first)."""
    gens = list(generators)
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].n
    for g in gens:
        if not g.is_invertible():
            raise ValueError(f"non-invertible generator {g}")
    seen = {MatMod.identity(n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                k = h * g
                if k not in seen:
                    seen.add(k)
                    nxt.append(k)
                    if len(seen) > ceiling:
                        raise OverflowError("closure exceeds size ceiling")
        frontier = nxt
    return frozenset(seen)


def mats_mod(n: int) -> list[MatMod]:
    return [MatMod(a, b, c, d, n) for a, b, c, d in product(range(n), repeat=4)]


def level_group(k: int, j: int, ell: int = 2) -> list[MatMod]:
    """V_k / V_j as matrices I + ell^k A mod ell^j."""
    n = ell**j
    step = ell**k
    return [MatMod(1 + step * a, step * b, step * c, 1 + step * d, n)
            for a, b, c, d in product(range(ell ** (j - k)), repeat=4)]


def squares_of_v1_mod8() -> frozenset[MatMod]:
    out = set()
    for s in product(range(2), repeat=4):
        for t in product(range(2), repeat=4):
            m = MatMod(1 + 2 * s[0] + 4 * t[0], 2 * s[1] + 4 * t[1],
                       2 * s[2] + 4 * t[2], 1 + 2 * s[3] + 4 * t[3], 8)
            out.add(m * m)
    return frozenset(out)


def square_identity_holds() -> bool:
    """(I+2S+4T)^2 = I + 4(S + S^2) mod 8 for all S, T mod 2."""
    for s in product(range(2), repeat=4):
        S = MatMod(*s, 8)
        S2 = S * S
        rhs = MatMod(1 + 4 * (S.a + S2.a), 4 * (S.b + S2.b), 4 * (S.c + S2.c), 1 + 4 * (S.d + S2.d), 8)
        for t in product(range(2), repeat=4):
            m = MatMod(1 + 2 * s[0] + 4 * t[0], 2 * s[1] + 4 * t[1],
                       2 * s[2] + 4 * t[2], 1 + 2 * s[3] + 4 * t[3], 8)
            if m * m != rhs:
                return False
    return True


def _mul4(x, y, n):
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % n, (a * f + b * h) % n, (c * e + d * g) % n, (c * f + d * h) % n)


def commutator_subgroup(group: Iterable[MatMod]) -> frozenset[MatMod]:
    g = list(group)
    if not g:
        raise ValueError("empty group")
    n = g[0].n
    # [x, y] = (x y)(x^-1 y^-1), on raw tuples to keep the 2^16 products cheap
    elems = [(m.entries, m.inverse().entries) for m in g]
    comms = set()
    for x, xi in elems:
        for y, yi in elems:
            comms.add(_mul4(_mul4(x, y, n), _mul4(xi, yi, n), n))
    return closure(MatMod(*e, n) for e in comms)


def u2_mod8() -> frozenset[MatMod]:
    """{I + 4A : tr A = 0 mod 2} inside GL2(Z/8)."""
    return frozenset(m for m in level_group(2, 3) if ((m.a - 1) // 4 + (m.d - 1) // 4) % 2 == 0)


def verify_commutator_lemma_mod8() -> bool:
    return commutator_subgroup(level_group(1, 3)) == u2_mod8()


def det5_extension_generates_v2(extra: MatMod) -> bool:
    """Squares of V1 mod 8 plus one det = 5 element of V2 generate all of V2/V3."""
    if extra.det() != 5 or (extra.a - 1) % 4 or extra.b % 4 or extra.c % 4 or (extra.d - 1) % 4:
        raise ValueError("extra element must be = I mod 4 with det 5 mod 8")
    return closure(list(squares_of_v1_mod8()) + [extra]) == frozenset(level_group(2, 3))


PRINTED_SQUARES = frozenset(MatMod.of(r, 8) for r in (
    ((1, 0), (0, 1)), ((1, 4), (0, 1)), ((1, 0), (4, 1)), ((5, 4), (4, 5)), ((5, 0), (0, 5))))


def verify_all() -> dict[str, bool]:
    """The finite-level group checks used by the full-2-torsion criterion."""
    c1 = commutator(MatMod.of(((3, 0), (2, 3)), 8), MatMod.of(((3, 0), (2, 1)), 8))
    c2 = commutator(MatMod.of(((3, 0), (0, 1)), 8), MatMod.of(((1, 2), (2, 1)), 8))
    det5 = [m for m in level_group(2, 3) if m.det() == 5]
    return {
        "squares_of_v1_mod8": squares_of_v1_mod8() == PRINTED_SQUARES,
        "commutator_identities": c1 == MatMod.of(((1, 0), (4, 1)), 8) and c2 == MatMod.of(((1, 4), (4, 1)), 8),
        "commutator_lemma_mod8": verify_commutator_lemma_mod8(),
        "det5_extension": all(det5_extension_generates_v2(m) for m in det5),
    }
