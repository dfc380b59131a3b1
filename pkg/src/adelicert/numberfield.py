"""Exact arithmetic in a cubic field K = Q(a), a a root of a monic integer cubic.

Elements are stored as integer numerators over a common positive denominator in
the power basis 1, a, a^2.  An optional integral basis (rows in power-basis
coordinates) fixes which elements count as integral.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from math import gcd, isqrt
from typing import Iterable, Sequence

import mpmath


def _to_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return Fraction(v.strip())
    return Fraction(v)


def cubic_discriminant(c0: int, c1: int, c2: int) -> int:
    """Discriminant of x^3 + c2 x^2 + c1 x + c0."""
    a, b, c = c2, c1, c0
    return 18 * a * b * c - 4 * a**3 * c + a * a * b * b - 4 * b**3 - 27 * c * c


def _det3(m) -> Fraction | int:
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _adjugate3(m):
    return [
        [m[1][1] * m[2][2] - m[1][2] * m[2][1], m[0][2] * m[2][1] - m[0][1] * m[2][2], m[0][1] * m[1][2] - m[0][2] * m[1][1]],
        [m[1][2] * m[2][0] - m[1][0] * m[2][2], m[0][0] * m[2][2] - m[0][2] * m[2][0], m[0][2] * m[1][0] - m[0][0] * m[1][2]],
        [m[1][0] * m[2][1] - m[1][1] * m[2][0], m[0][1] * m[2][0] - m[0][0] * m[2][1], m[0][0] * m[1][1] - m[0][1] * m[1][0]],
    ]


def _inverse3(m):
    d = Fraction(_det3(m))
    if d == 0:
        raise ZeroDivisionError("singular 3x3 matrix")
    adj = _adjugate3(m)
    return [[Fraction(adj[i][j]) / d for j in range(3)] for i in range(3)]


class NumberField:
    """K = Q[x]/(x^3 + c2 x^2 + c1 x + c0) with a chosen integral basis."""

    def __init__(self, poly: Sequence[int], integral_basis=None, label: str = "", name: str = "a"):
        c0, c1, c2 = (int(c) for c in poly)
        self.poly = (c0, c1, c2)
        self.label = label
        self.name = name
        if integral_basis is None:
            integral_basis = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        self.basis = tuple(tuple(_to_fraction(v) for v in row) for row in integral_basis)
        if len(self.basis) != 3 or any(len(r) != 3 for r in self.basis):
            raise ValueError("integral basis must be 3x3")
        if self.rational_root() is not None:
            raise ValueError(f"x^3 + {c2}x^2 + {c1}x + {c0} is reducible over Q")
        self.disc_f = cubic_discriminant(c0, c1, c2)
        det_b = _det3(self.basis)
        if det_b == 0:
            raise ValueError("integral basis is singular")
        index = 1 / abs(Fraction(det_b))
        if index.denominator != 1:
            raise ValueError("integral basis does not contain Z[a]")
        self.index = int(index)
        disc_k = Fraction(self.disc_f) / (self.index * self.index)
        if disc_k.denominator != 1:
            raise ValueError("disc_f / index^2 is not an integer: bad integral basis")
        self.disc_K = int(disc_k)
        self._basis_inv = _inverse3(self.basis)
        # basis elements as numerators over a common denominator
        den = 1
        for row in self.basis:
            for v in row:
                den = den * v.denominator // gcd(den, v.denominator)
        self._basis_den = den
        self._basis_num = tuple(tuple(int(v * den) for v in row) for row in self.basis)
        self._embedding_cache: dict[int, list] = {}

    # -- construction -------------------------------------------------
    def __call__(self, value) -> "RingElement":
        if isinstance(value, RingElement):
            if value.field is not self:
                raise ValueError("element belongs to another field")
            return value
        if isinstance(value, (list, tuple)):
            return self.element(value)
        return self.element([value, 0, 0])

    def element(self, coords: Iterable) -> "RingElement":
        fr = [_to_fraction(v) for v in coords]
        if len(fr) != 3:
            raise ValueError("expected three power-basis coordinates")
        den = 1
        for v in fr:
            den = den * v.denominator // gcd(den, v.denominator)
        return RingElement(self, tuple(int(v * den) for v in fr), den)

    def from_basis(self, coords: Sequence) -> "RingElement":
        """Element with the given coordinates in the integral basis."""
        fr = [_to_fraction(v) for v in coords]
        power = [sum(fr[i] * self.basis[i][j] for i in range(3)) for j in range(3)]
        return self.element(power)

    @property
    def gen(self) -> "RingElement":
        return RingElement(self, (0, 1, 0), 1)

    @property
    def one(self) -> "RingElement":
        return RingElement(self, (1, 0, 0), 1)

    @property
    def zero(self) -> "RingElement":
        return RingElement(self, (0, 0, 0), 1)

    def basis_elements(self) -> list["RingElement"]:
        return [self.element(row) for row in self.basis]

    # -- invariants -----------------------------------------------------
    def rational_root(self) -> int | None:
        c0, c1, c2 = self.poly
        if c0 == 0:
            return 0
        n = abs(c0)
        cands = set()
        d = 1
        while d * d <= n:
            if n % d == 0:
                cands.update((d, n // d))
            d += 1
        for r in sorted(cands):
            for s in (r, -r):
                if s**3 + c2 * s * s + c1 * s + c0 == 0:
                    return s
        return None

    @property
    def index_is_trivial(self) -> bool:
        return self.index == 1

    def is_S3(self) -> bool:
        d = self.disc_K
        return not (d >= 0 and isqrt(d) ** 2 == d)

    def __repr__(self):
        c0, c1, c2 = self.poly
        return f"NumberField(x^3 + {c2}x^2 + {c1}x + {c0}, disc_K={self.disc_K}, index={self.index})"

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.poly == other.poly and self.basis == other.basis

    def __hash__(self):
        return hash((self.poly, self.basis))

    # -- real roots -----------------------------------------------------
    def poly_eval(self, x):
        c0, c1, c2 = self.poly
        return ((x + c2) * x + c1) * x + c0

    @cached_property
    def real_root_intervals(self) -> list[tuple[Fraction, Fraction]]:
        """Disjoint rational intervals (lo, hi), each holding exactly one real root of f."""
        c0, c1, c2 = self.poly
        f = [Fraction(c0), Fraction(c1), Fraction(c2), Fraction(1)]
        seq = _sturm_sequence(f)
        bound = Fraction(1 + max(abs(c0), abs(c1), abs(c2)))
        out = []
        stack = [(-bound, bound)]
        while stack:
            lo, hi = stack.pop()
            n = _sturm_count(seq, lo, hi)
            if n == 0:
                continue
            if n == 1:
                out.append((lo, hi))
                continue
            mid = (lo + hi) / 2
            if self.poly_eval(mid) == 0:  # impossible for irreducible f, kept as a guard
                raise ArithmeticError("rational root found")
            stack.append((lo, mid))
            stack.append((mid, hi))
        return sorted(out)

    @property
    def signature(self) -> tuple[int, int]:
        r1 = len(self.real_root_intervals)
        return r1, (3 - r1) // 2

    def embeddings(self, prec_bits: int = 128) -> list:
        """Roots of f as mpmath numbers: real roots first, then one root per complex pair."""
        if prec_bits not in self._embedding_cache:
            c0, c1, c2 = self.poly
            with mpmath.workprec(prec_bits + 32):
                roots = mpmath.polyroots([1, c2, c1, c0], maxsteps=200, extraprec=prec_bits + 64)
            real = sorted((mpmath.mpf(mpmath.re(r)) for r in roots if abs(mpmath.im(r)) < mpmath.mpf(2) ** (-prec_bits // 2)))
            cplx = [r for r in roots if mpmath.im(r) > mpmath.mpf(2) ** (-prec_bits // 2)]
            self._embedding_cache[prec_bits] = real + cplx
        return self._embedding_cache[prec_bits]


def _poly_trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_rem(a, b):
    a = _poly_trim(a)
    b = _poly_trim(b)
    while len(a) >= len(b) and a:
        coef = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[i + shift] -= coef * bc
        a = _poly_trim(a)
    return a


def _poly_deriv(p):
    return [i * p[i] for i in range(1, len(p))]


def _poly_val(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _sturm_sequence(f):
    seq = [_poly_trim(f), _poly_trim(_poly_deriv(f))]
    while len(seq[-1]) > 1:
        r = _poly_rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def _sign_changes(vals):
    signs = [v for v in vals if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def _sturm_count(seq, lo, hi):
    """Number of distinct real roots in (lo, hi]."""
    return _sign_changes([_poly_val(p, lo) for p in seq]) - _sign_changes([_poly_val(p, hi) for p in seq])


def _mul_reduce(field: NumberField, a, b):
    c0, c1, c2 = field.poly
    a0, a1, a2 = a
    b0, b1, b2 = b
    p0 = a0 * b0
    p1 = a0 * b1 + a1 * b0
    p2 = a0 * b2 + a1 * b1 + a2 * b0
    p3 = a1 * b2 + a2 * b1
    p4 = a2 * b2
    # x^4 = -c2 x^3 - c1 x^2 - c0 x
    p3 -= c2 * p4
    p2 -= c1 * p4
    p1 -= c0 * p4
    # x^3 = -c2 x^2 - c1 x - c0
    p2 -= c2 * p3
    p1 -= c1 * p3
    p0 -= c0 * p3
    return p0, p1, p2


class RingElement:
    """An element of K; coordinates are exact rationals in the power basis."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: NumberField, num: tuple[int, int, int], den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num = tuple(-v for v in num)
            den = -den
        g = gcd(gcd(gcd(num[0], num[1]), num[2]), den)
        if g > 1:
            num = tuple(v // g for v in num)
            den //= g
        self.field = field
        self.num = tuple(num)
        self.den = den

    # -- views --------------------------------------------------------
    @property
    def coords(self) -> tuple[Fraction, Fraction, Fraction]:
        return tuple(Fraction(v, self.den) for v in self.num)

    def basis_coords(self) -> tuple[Fraction, ...]:
        inv = self.field._basis_inv
        c = self.coords
        return tuple(sum(c[i] * inv[i][j] for i in range(3)) for j in range(3))

    def integral_coords(self) -> tuple[int, int, int]:
        bc = self.basis_coords()
        if any(v.denominator != 1 for v in bc):
            raise ValueError(f"{self} is not integral")
        return tuple(int(v) for v in bc)

    def is_integral(self) -> bool:
        if self.den == 1:
            return True
        return all(v.denominator == 1 for v in self.basis_coords())

    def basis_denominator(self) -> int:
        """Least positive D with D*self integral."""
        d = 1
        for v in self.basis_coords():
            d = d * v.denominator // gcd(d, v.denominator)
        return d

    def is_zero(self) -> bool:
        return self.num == (0, 0, 0)

    def is_rational(self) -> bool:
        return self.num[1] == 0 and self.num[2] == 0

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coords]

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, int):
            return RingElement(self.field, (other, 0, 0), 1)
        if isinstance(other, Fraction):
            return RingElement(self.field, (other.numerator, 0, 0), other.denominator)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self.den * o.den // gcd(self.den, o.den)
        ma, mb = d // self.den, d // o.den
        return RingElement(self.field, tuple(x * ma + y * mb for x, y in zip(self.num, o.num)), d)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.field, tuple(-v for v in self.num), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RingElement(self.field, _mul_reduce(self.field, self.num, o.num), self.den * o.den)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def mult_matrix(self) -> list[list[int]]:
        """Integer matrix (scaled by den) of multiplication by self; row i is self * a^i."""
        rows = []
        v = (1, 0, 0)
        for _ in range(3):
            rows.append(list(_mul_reduce(self.field, self.num, v)))
            v = _mul_reduce(self.field, v, (0, 1, 0))
        return rows

    def norm(self) -> Fraction:
        return Fraction(_det3(self.mult_matrix()), self.den**3)

    def trace(self) -> Fraction:
        m = self.mult_matrix()
        return Fraction(m[0][0] + m[1][1] + m[2][2], self.den)

    def inverse(self) -> "RingElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        m = self.mult_matrix()
        det = _det3(m)
        adj = _adjugate3(m)
        # solve y * M = e0: y = e0 * adj / det (row vector)
        num = (adj[0][0] * self.den, adj[0][1] * self.den, adj[0][2] * self.den)
        return RingElement(self.field, num, det)

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return self.field == other.field and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return self.num == (f.numerator, 0, 0) and self.den == f.denominator
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        name = self.field.name
        terms = []
        for i in (2, 1, 0):
            c = Fraction(self.num[i], self.den)
            if c == 0:
                continue
            mono = "" if i == 0 else (name if i == 1 else f"{name}^{i}")
            if mono and abs(c) == 1:
                s = mono
            else:
                s = f"{abs(c)}" + (f"*{mono}" if mono else "")
            terms.append(("-" if c < 0 else "+", s))
        if not terms:
            return "0"
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sgn, s in terms[1:]:
            out += f" {sgn} {s}"
        return out

    # -- evaluation ------------------------------------------------------
    def eval_at(self, x):
        """Value of the coordinate polynomial at x (any ring supporting + and *)."""
        a0, a1, a2 = self.coords
        return (a2 * x + a1) * x + a0

    def embedding_values(self, prec_bits: int = 128) -> list:
        roots = self.field.embeddings(prec_bits)
        with mpmath.workprec(prec_bits):
            a0, a1, a2 = (mpmath.mpf(v.numerator) / v.denominator for v in self.coords)
            return [(a2 * r + a1) * r + a0 for r in roots]


NumberFieldSpec = NumberField


def ring_mul(a: RingElement, b: RingElement) -> RingElement:
    if a.field != b.field:
        raise ValueError("mismatched field specs")
    return a * b


def norm_and_trace(a: RingElement) -> tuple[Fraction, Fraction]:
    return a.norm(), a.trace()


def totally_positive(a: RingElement) -> bool:
    """True iff a > 0 under every real embedding, decided with exact rational bisection."""
    if a.is_zero():
        raise ValueError("totally_positive(0) is undefined")
    K = a.field
    coords = a.coords
    apoly = _poly_trim(list(coords))
    if len(apoly) == 1:
        return apoly[0] > 0
    aseq = _sturm_sequence(apoly)
    for lo, hi in K.real_root_intervals:
        flo = K.poly_eval(lo)
        while True:
            vlo, vhi = _poly_val(apoly, lo), _poly_val(apoly, hi)
            if vlo != 0 and vhi != 0 and (vlo > 0) == (vhi > 0) and _sturm_count(aseq, lo, hi) == 0:
                if vlo < 0:
                    return False
                break
            mid = (lo + hi) / 2
            fmid = K.poly_eval(mid)
            if fmid == 0:
                raise ArithmeticError("f has a rational root")
            if (fmid > 0) == (flo > 0):
                lo, flo = mid, fmid
            else:
                hi = mid
    return True


def galois_group_is_S3(K: NumberField) -> bool:
    """Whether the Galois closure of K has group S3; then K meets Q^cyc only in Q."""
    if K.rational_root() is not None:
        raise ValueError("reducible defining polynomial")
    return K.is_S3()
