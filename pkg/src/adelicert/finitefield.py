"""Finite fields F_{p^f} (f <= 3) as F_p[x]/(m), plus vectorised helpers."""
from __future__ import annotations

import random
from math import isqrt
from typing import Sequence

import numpy as np

EXHAUSTIVE_ROOT_LIMIT = 4096


class FiniteField:
    """F_q = F_p[x]/(modulus); modulus is monic, coefficients low-to-high."""

    def __init__(self, p: int, modulus: Sequence[int] = (0, 1)):
        mod = [int(c) % p for c in modulus]
        while len(mod) > 1 and mod[-1] == 0:
            mod.pop()
        if len(mod) < 2 or mod[-1] != 1:
            raise ValueError("modulus must be monic of degree >= 1")
        self.p = p
        self.modulus = tuple(mod)
        self.f = len(mod) - 1
        self.q = p**self.f
        if self.f > 1 and not _is_irreducible(self.modulus, p):
            raise ValueError(f"modulus {self.modulus} is reducible mod {p}")
        self._nonresidue = None

    def __eq__(self, other):
        return isinstance(other, FiniteField) and self.p == other.p and self.modulus == other.modulus

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        return f"F_{self.p}^{self.f}[mod {list(self.modulus)}]"

    def __call__(self, value) -> "FqElem":
        if isinstance(value, FqElem):
            return value
        if isinstance(value, int):
            return FqElem(self, (value % self.p,) + (0,) * (self.f - 1))
        coeffs = [int(c) for c in value]
        return FqElem(self, tuple(self._reduce(coeffs)))

    @property
    def zero(self):
        return FqElem(self, (0,) * self.f)

    @property
    def one(self):
        return self(1)

    @property
    def gen(self):
        return self([0, 1]) if self.f > 1 else self(-self.modulus[0])

    def _reduce(self, coeffs: list[int]) -> list[int]:
        p, f, m = self.p, self.f, self.modulus
        c = [v % p for v in coeffs]
        for k in range(len(c) - 1, f - 1, -1):
            top = c[k]
            if top:
                for i in range(f):
                    c[k - f + i] = (c[k - f + i] - top * m[i]) % p
            c[k] = 0
        c = c[:f] + [0] * (f - len(c))
        return c

    def elements(self):
        for n in range(self.q):
            yield self.decode(n)

    def decode(self, n: int) -> "FqElem":
        cs = []
        for _ in range(self.f):
            n, r = divmod(n, self.p)
            cs.append(r)
        return FqElem(self, tuple(cs))

    def nonresidue(self) -> "FqElem":
        if self._nonresidue is None:
            for n in range(1, self.q):
                x = self.decode(n)
                if not euler_is_square(x):
                    self._nonresidue = x
                    break
        return self._nonresidue


class FqElem:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    def _c(self, other) -> "FqElem":
        if isinstance(other, FqElem):
            return other
        return self.field(other)

    def __add__(self, other):
        o = self._c(other)
        p = self.field.p
        return FqElem(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FqElem(self.field, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._c(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._c(other)
        a, b = self.coeffs, o.coeffs
        if self.field.f == 1:
            return FqElem(self.field, ((a[0] * b[0]) % self.field.p,))
        prod = [0] * (2 * self.field.f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return FqElem(self.field, tuple(self.field._reduce(prod)))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return fq_pow(self, n)

    def inverse(self) -> "FqElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in F_q")
        return fq_pow(self, self.field.q - 2)

    def __truediv__(self, other):
        return self * self._c(other).inverse()

    def __rtruediv__(self, other):
        return self.field(other) * self.inverse()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field(other)
        return isinstance(other, FqElem) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def encode(self) -> int:
        n = 0
        for c in reversed(self.coeffs):
            n = n * self.field.p + c
        return n

    def __int__(self):
        if self.field.f != 1:
            raise TypeError("only prime-field elements convert to int")
        return self.coeffs[0]

    def __repr__(self):
        if self.field.f == 1:
            return str(self.coeffs[0])
        return "[" + ",".join(map(str, self.coeffs)) + "]"


FqSpec = FiniteField


def _has_root_mod_p(poly: Sequence[int], p: int) -> bool:
    F = FiniteField(p)
    return bool(roots_deg_le3([F(c) for c in poly], F))


def _is_irreducible(poly: Sequence[int], p: int) -> bool:
    """No factor of degree <= deg/2: gcd(x^(p^i) - x, poly) = 1 for those i."""
    f = len(poly) - 1
    if f <= 3:
        return not _has_root_mod_p(poly, p)
    F = FiniteField(p)
    m = [F(c) for c in poly]
    x = [F.zero, F.one]
    xp = x
    for _ in range(f // 2):
        xp = _ppowmod(xp, p, m, F)
        diff = _ptrim([a - b for a, b in zip(xp + [F.zero] * (2 - len(xp)), x + [F.zero] * (len(xp) - 2))])
        if len(_pgcd(m, diff, F)) > 1:
            return False
    return True


def fq_pow(a: FqElem, n: int) -> FqElem:
    if n < 0:
        return fq_pow(a.inverse(), -n)
    result = a.field.one
    base = a
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def euler_is_square(a: FqElem) -> bool:
    """Euler's criterion: a^((q-1)/2) == 1.  Characteristic 2 returns True."""
    if a.is_zero():
        raise ValueError("zero")
    F = a.field
    if F.p == 2:
        return True
    return fq_pow(a, (F.q - 1) // 2) == F.one


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def fq_sqrt(a: FqElem) -> FqElem | None:
    """A square root of a in F_q (Tonelli-Shanks), or None when a is a non-square."""
    F = a.field
    if a.is_zero():
        return F.zero
    if F.p == 2:
        return fq_pow(a, F.q // 2)
    if not euler_is_square(a):
        return None
    q = F.q
    s, m = 0, q - 1
    while m % 2 == 0:
        s += 1
        m //= 2
    z = fq_pow(F.nonresidue(), m)
    x = fq_pow(a, (m + 1) // 2)
    t = fq_pow(a, m)
    while t != F.one:
        i, t2 = 0, t
        while t2 != F.one:
            t2 = t2 * t2
            i += 1
        b = z
        for _ in range(s - i - 1):
            b = b * b
        x = x * b
        z = b * b
        t = t * z
        s = i
    return x


# -- polynomials over F_q (lists of FqElem, low to high) -----------------------

def _ptrim(a):
    a = list(a)
    while a and a[-1].is_zero():
        a.pop()
    return a


def _pmul(a, b, F):
    if not a or not b:
        return []
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _ptrim(out)


def _pdivmod(a, b, F):
    a = _ptrim(a)
    b = _ptrim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = b[-1].inverse()
    quo = [F.zero] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        c = a[-1] * inv
        k = len(a) - len(b)
        quo[k] = c
        for i, bc in enumerate(b):
            a[i + k] = a[i + k] - c * bc
        a = _ptrim(a)
    return _ptrim(quo), a


def _pmod(a, b, F):
    return _pdivmod(a, b, F)[1]


def _pgcd(a, b, F):
    a, b = _ptrim(a), _ptrim(b)
    while b:
        a, b = b, _pmod(a, b, F)
    if a:
        inv = a[-1].inverse()
        a = [c * inv for c in a]
    return a


def _ppowmod(base, n, mod, F):
    result = [F.one]
    base = _pmod(base, mod, F)
    while n:
        if n & 1:
            result = _pmod(_pmul(result, base, F), mod, F)
        n >>= 1
        if n:
            base = _pmod(_pmul(base, base, F), mod, F)
    return result


def poly_eval(poly, x):
    acc = x.field.zero
    for c in reversed(poly):
        acc = acc * x + c
    return acc


def _split_linear(g, F, rng):
    """Distinct roots of a squarefree g that splits into linear factors over F."""
    g = _ptrim(g)
    if len(g) <= 1:
        return []
    if len(g) == 2:
        return [-(g[0] / g[1])]
    if F.p == 2:
        return [x for x in F.elements() if poly_eval(g, x).is_zero()]
    while True:
        delta = F.decode(rng.randrange(F.q))
        h = _ppowmod([delta, F.one], (F.q - 1) // 2, g, F) or [F.zero]
        h[0] = h[0] - F.one
        d = _pgcd(g, h, F)
        if 1 < len(d) < len(g):
            other = _pdivmod(g, d, F)[0]
            return _split_linear(d, F, rng) + _split_linear(other, F, rng)


def roots_deg_le3(poly: Sequence, F: FiniteField) -> list[FqElem]:
    """All roots in F of a polynomial of degree <= 3 (coefficients low-to-high), with multiplicity."""
    g = _ptrim([F(c) for c in poly])
    if len(g) > 4:
        raise ValueError("degree > 3")
    if len(g) <= 1:
        if not g:
            raise ValueError("zero polynomial has every element as a root")
        return []
    if F.q <= EXHAUSTIVE_ROOT_LIMIT:
        distinct = [x for x in F.elements() if poly_eval(g, x).is_zero()]
    elif len(g) == 3 and F.p != 2:
        a, b, c = g[2], g[1], g[0]
        disc = b * b - 4 * a * c
        r = fq_sqrt(disc)
        if r is None:
            return []
        inv2a = (2 * a).inverse()
        distinct = list({(-b + r) * inv2a, (-b - r) * inv2a})
    else:
        diff = _ppowmod([F.zero, F.one], F.q, g, F)
        diff += [F.zero] * max(0, 2 - len(diff))
        diff[1] = diff[1] - F.one
        lin = _pgcd(g, diff, F)
        distinct = _split_linear(lin, F, random.Random(F.q))
    out = []
    for r in sorted(distinct, key=lambda e: e.encode()):
        h = g
        while True:
            quo, rem = _pdivmod(h, [-r, F.one], F)
            if rem:
                break
            out.append(r)
            h = quo
    return out


def trace_extend(t: int, q: int, n: int) -> int:
    """s_n with s_0 = 2, s_1 = t, s_k = t s_{k-1} - q s_{k-2}; #E(F_{q^n}) = q^n + 1 - s_n."""
    if n < 1:
        raise ValueError("n must be positive")
    if t * t > 4 * q:
        raise ValueError(f"Hasse bound violated: t={t}, q={q}")
    s_prev, s = 2, t
    for _ in range(n - 1):
        s_prev, s = s, t * s - q * s_prev
    return s


def hasse_ok(t: int, q: int) -> bool:
    return t * t <= 4 * q


def isqrt_exact(n: int) -> int | None:
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


# -- vectorised arithmetic: arrays of shape (f, N) -------------------------------

def all_elements_array(F: FiniteField, start: int = 0, stop: int | None = None) -> np.ndarray:
    stop = F.q if stop is None else stop
    n = np.arange(start, stop, dtype=np.int64)
    out = np.empty((F.f, n.size), dtype=np.int64)
    for i in range(F.f):
        n, r = np.divmod(n, F.p)
        out[i] = r
    return out


def const_array(F: FiniteField, a: FqElem, size: int) -> np.ndarray:
    return np.array(a.coeffs, dtype=np.int64).reshape(F.f, 1).repeat(size, axis=1)


def vec_add(A, B, F):
    return (A + B) % F.p


def vec_mul(A, B, F):
    p, f, m = F.p, F.f, F.modulus
    if f == 1:
        return (A * B) % p
    prod = [None] * (2 * f - 1)
    for i in range(f):
        for j in range(f):
            term = (A[i] * B[j]) % p
            prod[i + j] = term if prod[i + j] is None else (prod[i + j] + term) % p
    for k in range(2 * f - 2, f - 1, -1):
        top = prod[k]
        for i in range(f):
            if m[i]:
                prod[k - f + i] = (prod[k - f + i] - top * m[i]) % p
    return np.stack(prod[:f])


def vec_encode(A, F):
    p = F.p
    n = np.zeros(A.shape[1], dtype=np.int64)
    for i in range(F.f - 1, -1, -1):
        n = n * p + A[i]
    return n


def square_table(F: FiniteField, chunk: int = 1 << 20) -> np.ndarray:
    """Boolean table indexed by element encoding: True where the element is a nonzero square."""
    table = np.zeros(F.q, dtype=bool)
    for start in range(1, F.q, chunk):
        X = all_elements_array(F, start, min(F.q, start + chunk))
        table[vec_encode(vec_mul(X, X, F), F)] = True
    return table
