"""Ideals of O_K as integer HNF lattices; prime splitting, valuations, residue maps."""
from __future__ import annotations

from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

from .finitefield import FiniteField, FqElem, roots_deg_le3
from .intutil import factorint, prime_factors, primes_upto, vp
from .numberfield import NumberField, RingElement


class IndexDivisorError(ValueError):
    """p divides [O_K : Z[a]] and no splitting data was supplied."""


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hnf(rows: Iterable[Sequence[int]], ncols: int = 3) -> list[list[int]]:
    """Upper-triangular Hermite normal form of the row lattice (full rank assumed)."""
    rows = [list(r) for r in rows if any(r)]
    out = []
    for col in range(ncols):
        piv = None
        rest = []
        for r in rows:
            if r[col] == 0:
                rest.append(r)
                continue
            if piv is None:
                piv = r
                continue
            g, x, y = _xgcd(piv[col], r[col])
            a, b = piv[col] // g, r[col] // g
            new_piv = [x * u + y * v for u, v in zip(piv, r)]
            other = [b * u - a * v for u, v in zip(piv, r)]
            piv = new_piv
            if any(other):
                rest.append(other)
        if piv is None:
            raise ValueError("lattice is not of full rank")
        if piv[col] < 0:
            piv = [-v for v in piv]
        out.append(piv)
        rows = rest
    for i in range(ncols):
        d = out[i][i]
        for j in range(i):
            q = out[j][i] // d
            if q:
                out[j] = [u - q * v for u, v in zip(out[j], out[i])]
    return out


class Ideal:
    """A nonzero ideal of O_K; rows of ``hnf`` are a Z-basis in integral-basis coordinates."""

    def __init__(self, field: NumberField, hnf_rows: list[list[int]]):
        self.field = field
        self.hnf = [list(r) for r in hnf_rows]
        self.norm = self.hnf[0][0] * self.hnf[1][1] * self.hnf[2][2]

    @classmethod
    def from_generators(cls, field: NumberField, gens: Iterable[RingElement | int]) -> "Ideal":
        basis = field.basis_elements()
        rows = []
        for g in gens:
            g = field(g)
            for w in basis:
                rows.append((g * w).integral_coords())
        return cls(field, hnf(rows))

    @classmethod
    def unit(cls, field: NumberField) -> "Ideal":
        return cls(field, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])

    def elements_basis(self) -> list[RingElement]:
        return [self.field.from_basis(r) for r in self.hnf]

    def contains_coords(self, v: Sequence[int]) -> bool:
        v = list(v)
        for i in range(3):
            d = self.hnf[i][i]
            if v[i] % d:
                return False
            q = v[i] // d
            if q:
                v = [a - q * b for a, b in zip(v, self.hnf[i])]
        return True

    def __contains__(self, x) -> bool:
        x = self.field(x)
        if not x.is_integral():
            return False
        return self.contains_coords(x.integral_coords())

    def reduce_coords(self, v: Sequence[int]) -> tuple[int, int, int]:
        """Canonical representative of v modulo the lattice."""
        v = list(v)
        for i in range(3):
            q = v[i] // self.hnf[i][i]
            if q:
                v = [a - q * b for a, b in zip(v, self.hnf[i])]
        return tuple(v)

    def reduce(self, x: RingElement) -> RingElement:
        return self.field.from_basis(self.reduce_coords(x.integral_coords()))

    def __mul__(self, other: "Ideal") -> "Ideal":
        a = self.elements_basis()
        b = other.elements_basis()
        return Ideal(self.field, hnf([(u * v).integral_coords() for u in a for v in b]))

    def __pow__(self, n: int) -> "Ideal":
        result = Ideal.unit(self.field)
        for _ in range(n):
            result = result * self
        return result

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.field, hnf(self.hnf + other.hnf))

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.hnf == other.hnf

    def __hash__(self):
        return hash(tuple(map(tuple, self.hnf)))

    def __repr__(self):
        return f"Ideal(norm={self.norm}, hnf={self.hnf})"


def _rank_mod_p(rows: list[list[int]], p: int) -> list[list[int]]:
    """Row-echelon basis (mod p) of the span of rows."""
    rows = [[v % p for v in r] for r in rows]
    basis = []
    col = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in rows if r[col]), None)
        if piv is None:
            continue
        inv = pow(piv[col], -1, p)
        piv = [(v * inv) % p for v in piv]
        rows = [r for r in rows if r is not None]
        new_rows = []
        for r in rows:
            if r[col]:
                c = r[col]
                r = [(a - c * b) % p for a, b in zip(r, piv)]
            if any(r):
                new_rows.append(r)
        rows = new_rows
        basis.append(piv)
    return basis


def _solve_mod_p(matrix: list[list[int]], p: int) -> list[list[int]]:
    """Inverse of a square matrix mod p (Gauss-Jordan)."""
    n = len(matrix)
    aug = [[v % p for v in row] + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ValueError("matrix is singular mod p")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], -1, p)
        aug[col] = [(v * inv) % p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                c = aug[r][col]
                aug[r] = [(a - c * b) % p for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


class PrimeIdeal(Ideal):
    """Prime P = (p, gen) of O_K with residue degree f and ramification index e."""

    def __init__(self, field: NumberField, p: int, gen: RingElement, e: int, f: int,
                 gen_poly: tuple[int, ...] | None = None):
        base = Ideal.from_generators(field, [p, gen])
        super().__init__(field, base.hnf)
        if self.norm != p**f:
            raise ValueError(f"(p={p}, {gen}) has norm {self.norm}, expected {p}^{f}")
        self.p = p
        self.gen = gen
        self.e = e
        self.f = f
        self.gen_poly = gen_poly
        self._powers: list[Ideal] = [Ideal.unit(field), self]

    def __repr__(self):
        return f"Prime(p={self.p}, f={self.f}, e={self.e}, gen={self.gen})"

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.hnf == other.hnf

    def __hash__(self):
        return hash(tuple(map(tuple, self.hnf)))

    def to_json(self) -> dict:
        d = {"p": self.p, "e": self.e, "f": self.f, "gen": self.gen.to_json()}
        if self.gen_poly is not None:
            d["g"] = list(self.gen_poly)
        return d

    def power(self, t: int) -> Ideal:
        while len(self._powers) <= t:
            self._powers.append(self._powers[-1] * self)
        return self._powers[t]

    # -- residue field ---------------------------------------------------
    @cached_property
    def _residue_data(self):
        K, p, f = self.field, self.p, self.f
        W = _rank_mod_p(self.hnf, p)
        if len(W) != 3 - f:
            raise ArithmeticError("unexpected residue dimension")
        alpha = K.gen
        candidates = [alpha] + K.basis_elements()[1:] + [alpha + w for w in K.basis_elements()[1:]]
        for theta in candidates:
            powers = [K.one]
            for _ in range(f):
                powers.append(powers[-1] * theta)
            rows = W + [list(x.integral_coords()) for x in powers[:f]]
            try:
                inv = _solve_mod_p(rows, p)
            except ValueError:
                continue
            # theta^f in terms of 1..theta^{f-1} gives the minimal polynomial
            top = self._coords_in(inv, powers[f].integral_coords(), p, f)
            modulus = tuple((-c) % p for c in top) + (1,)
            return theta, inv, FiniteField(p, modulus)
        raise ArithmeticError(f"no residue-field generator found for {self}")

    @staticmethod
    def _coords_in(inv, v, p, f):
        n = len(inv)
        full = [sum(v[i] * inv[i][j] for i in range(n)) % p for j in range(n)]
        return full[n - f:]

    @property
    def residue_field(self) -> FiniteField:
        return self._residue_data[2]

    @property
    def residue_generator(self) -> RingElement:
        return self._residue_data[0]

    def residue(self, x) -> FqElem:
        """Image of x in O_K/P (x integral at P with denominator prime to p, or a (num, den) pair)."""
        if isinstance(x, tuple):
            num, den = x
            rd = self.residue(den)
            if rd.is_zero():
                raise ValueError("denominator not invertible at P")
            return self.residue(num) / rd
        K = self.field
        x = K(x)
        theta, inv, F = self._residue_data
        D = x.basis_denominator()
        if D % self.p == 0:
            if x.is_zero():
                return F.zero
            if valuation(x, self) < 0:
                raise ValueError("denominator not invertible at P")
            # clear the p-part of the denominator with an element that is a unit at P
            w = self._clearing_element(x)
            if w is None:
                raise ValueError("denominator not invertible at P")
            return self.residue(w * x) / self.residue(w)
        coords = (x * D).integral_coords()
        r = F(self._coords_in(inv, coords, self.p, self.f))
        if D != 1:
            r = r * F(pow(D, -1, self.p))
        return r

    def _clearing_element(self, x: RingElement) -> RingElement | None:
        others = [Q for Q in split_prime(self.field, self.p) if Q != self]
        w = self.field.one
        for Q in others:
            need = -valuation(x, Q)
            if need <= 0:
                continue
            q = next((b for b in Q.elements_basis() if b not in self), None)
            if q is None:
                return None
            w = w * q**need
        return w

    def lift(self, r: FqElem) -> RingElement:
        """An element of O_K whose residue is r."""
        theta = self.residue_generator
        out = self.field.zero
        pw = self.field.one
        for c in r.coeffs:
            out = out + c * pw
            pw = pw * theta
        return out

    def residue_representatives(self) -> list[RingElement]:
        F = self.residue_field
        return [self.lift(F.decode(n)) for n in range(F.q)]

    @cached_property
    def uniformizer(self) -> RingElement:
        K = self.field
        P2 = self.power(2)
        cands = [K(self.p), self.gen, self.gen + self.p, self.gen - self.p] + self.elements_basis()
        for c in cands:
            if not c.is_zero() and c in self and c not in P2:
                return c
        for a in self.elements_basis():
            for b in self.elements_basis():
                c = a + b
                if c in self and c not in P2:
                    return c
        raise ArithmeticError(f"no uniformizer found for {self}")


def _poly_elem(K: NumberField, coeffs: Sequence[int]) -> RingElement:
    c = list(coeffs) + [0] * (3 - len(coeffs))
    if len(c) == 4:
        # monic cubic: g(a) = f(a) = 0 is never a factor; callers pass degree <= 2
        raise ValueError("degree-3 factor")
    return K.element(c[:3])


def split_prime(K: NumberField, p: int, index_splittings: dict | None = None) -> list[PrimeIdeal]:
    """Primes of O_K above p, via factoring f mod p (Kummer-Dedekind) or supplied data."""
    cache = K.__dict__.setdefault("_split_cache", {})
    if p in cache and index_splittings is None:
        return cache[p]
    if K.index % p == 0:
        data = (index_splittings or getattr(K, "index_splittings", {}) or {}).get(p)
        if not data:
            raise IndexDivisorError(f"index-divisor: supply splitting for p={p}")
        out = [PrimeIdeal(K, p, K.element(d["gen"]), int(d["e"]), int(d["f"])) for d in data]
        if sum(P.e * P.f for P in out) != 3:
            raise ValueError(f"supplied splitting of {p} has sum e*f != 3")
        prod = Ideal.unit(K)
        for P in out:
            prod = prod * P.power(P.e)
        if prod != Ideal.from_generators(K, [p]):
            raise ValueError(f"supplied primes above {p} do not multiply to ({p})")
        cache[p] = out
        return out
    F = FiniteField(p)
    c0, c1, c2 = K.poly
    roots = roots_deg_le3([c0, c1, c2, 1], F)
    out: list[PrimeIdeal] = []
    if not roots:
        out.append(PrimeIdeal(K, p, K(p), 1, 3, gen_poly=(c0 % p, c1 % p, c2 % p, 1)))
    else:
        mult: dict[int, int] = {}
        for r in roots:
            mult[int(r)] = mult.get(int(r), 0) + 1
        for r, m in sorted(mult.items()):
            out.append(PrimeIdeal(K, p, K.element([-r, 1, 0]), m, 1, gen_poly=((-r) % p, 1)))
        if len(roots) == 1:
            # remaining irreducible quadratic: f / (x - r)
            r = int(roots[0])
            b2 = (c2 + r) % p
            b1 = (c1 + r * b2) % p
            out.append(PrimeIdeal(K, p, K.element([b1, b2, 1]), 1, 2, gen_poly=(b1, b2, 1)))
    cache[p] = out
    return out


def primes_above(K: NumberField, p: int) -> list[PrimeIdeal]:
    return split_prime(K, p)


def valuation(x, P: PrimeIdeal) -> int:
    """v_P(x) for nonzero x in K, or for a (num, den) pair."""
    if isinstance(x, tuple):
        return valuation(x[0], P) - valuation(x[1], P)
    x = P.field(x)
    if x.is_zero():
        raise ValueError("valuation of zero")
    D = x.basis_denominator()
    y = x * D
    shift = P.e * vp(D, P.p) if D != 1 else 0
    nv = vp(int(y.norm()), P.p)
    tmax = nv // P.f
    coords = y.integral_coords()
    t = 0
    while t < tmax and P.power(t + 1).contains_coords(coords):
        t += 1
    return t - shift


def valuations_above(x, K: NumberField, p: int) -> dict[PrimeIdeal, int]:
    """All v_P(x) for P | p, checked against v_p(N(x)) = sum f_P v_P(x)."""
    primes = split_prime(K, p)
    vals = {P: valuation(x, P) for P in primes}
    if isinstance(x, tuple):
        n = x[0].norm() / x[1].norm()
    else:
        n = K(x).norm()
    expected = vp(n.numerator, p) - vp(n.denominator, p)
    got = sum(P.f * v for P, v in vals.items())
    if got != expected:
        raise ArithmeticError(f"norm bookkeeping failed at p={p}: {got} != {expected}")
    return vals


def factor_element(x, K: NumberField, extra_primes: Iterable[int] = ()) -> dict[PrimeIdeal, int]:
    """Prime ideal factorisation of (x); rational primes come from factoring the norm."""
    if isinstance(x, tuple):
        n = x[0].norm() / x[1].norm()
    else:
        n = K(x).norm()
    ps = set(prime_factors(abs(n.numerator))) | set(prime_factors(n.denominator)) | set(extra_primes)
    out = {}
    for p in sorted(ps):
        for P, v in valuations_above(x, K, p).items():
            if v:
                out[P] = v
    return out


def residue_map(x, P: PrimeIdeal) -> FqElem:
    return P.residue(x)


def prime_from_generator(K: NumberField, x: RingElement) -> PrimeIdeal:
    """The prime ideal (x); raises if (x) is not prime."""
    x = K(x)
    n = abs(x.norm())
    if n.denominator != 1:
        raise ValueError(f"{x} is not integral")
    fac = factorint(int(n))
    if len(fac) != 1:
        raise ValueError(f"N({x}) = {n} is not a prime power")
    (p, k), = fac.items()
    for P in split_prime(K, p):
        if P.f == k and x in P:
            return P
    raise ValueError(f"({x}) is not a prime ideal")


def primes_by_norm(K: NumberField, max_norm: int, skip_index: bool = True) -> list[PrimeIdeal]:
    """All primes of norm <= max_norm, sorted by (norm, p, hnf)."""
    out = []
    for p in primes_upto(max_norm):
        if K.index % p == 0:
            if skip_index and not getattr(K, "index_splittings", {}).get(p):
                continue
        for P in split_prime(K, p):
            if P.norm <= max_norm:
                out.append(P)
    out.sort(key=lambda P: (P.norm, P.p, P.hnf))
    return out


def iter_primes_by_norm(K: NumberField, start_bound: int = 64):
    """Primes of O_K in nondecreasing norm, without an upper limit."""
    lo, hi = 0, start_bound
    while True:
        for P in primes_by_norm(K, hi):
            if P.norm > lo:
                yield P
        lo, hi = hi, hi * 4


def degree_one_primes(K: NumberField, start: int = 3):
    """Degree-one primes (p, r) with P = (p, a - r), p odd and prime to the index, by increasing p."""
    from .intutil import iter_primes
    c0, c1, c2 = K.poly
    for p in iter_primes(start):
        if p == 2 or K.index % p == 0:
            continue
        F = FiniteField(p)
        for r in sorted({int(z) for z in roots_deg_le3([c0, c1, c2, 1], F)}):
            yield p, r


def modulus_unit_count(m_f: Sequence[tuple[PrimeIdeal, int]]) -> int:
    """r = #(O_K/m_f)^x."""
    r = 1
    for P, k in m_f:
        if k < 1:
            raise ValueError("exponents must be >= 1")
        r *= P.norm ** (k - 1) * (P.norm - 1)
    return r


def _pow_mod_ideal(x: RingElement, n: int, I: Ideal) -> RingElement:
    K = x.field
    result = K.one
    base = I.reduce(x)
    while n:
        if n & 1:
            result = I.reduce(result * base)
        n >>= 1
        if n:
            base = I.reduce(base * base)
    return result


def unit_order_mod(u: RingElement, m_f: Sequence[tuple[PrimeIdeal, int]]) -> int:
    """Smallest k >= 1 with u^k = 1 modulo every P^e in m_f."""
    k = 1
    for P, e in m_f:
        if P.residue(u).is_zero():
            raise ValueError(f"unit not coprime to {P}")
        I = P.power(e)
        order = P.norm ** (e - 1) * (P.norm - 1)
        for ell, mult in factorint(order).items():
            for _ in range(mult):
                if order % ell == 0 and (_pow_mod_ideal(u, order // ell, I) - 1) in I:
                    order //= ell
                else:
                    break
        k = k * order // gcd(k, order)
    return k
