"""Half-Borel l-adic certification for curves over Q with a rational l-torsion point.

A Frobenius at p is recorded by its trace a_p; the characteristic polynomial
T^2 - a_p T + p is inspected mod l and mod l^2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .certify import (CERTIFIED, FAILED, PER_REFERENCE, UNDETERMINED, Certificate, Condition,
                      transcript)
from .ellcurve import ReducedCurve, count_points, full_l_torsion_exhaustive
from .finitefield import FiniteField
from .intutil import is_prime, prime_factors, primes_upto


@dataclass(frozen=True)
class QCurve:
    """Weierstrass model over Z."""
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    @property
    def ainvs(self) -> tuple[int, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def disc(self) -> int:
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = a1 * a3 + 2 * a4
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def reduce(self, p: int) -> ReducedCurve:
        F = FiniteField(p)
        return ReducedCurve(F, *(F(a) for a in self.ainvs))

    def to_json(self) -> dict:
        return {"ainvs": [str(a) for a in self.ainvs]}


@dataclass(frozen=True)
class FrobQDatum:
    p: int
    a_p: int

    def __post_init__(self):
        if self.a_p * self.a_p > 4 * self.p:
            raise ValueError(f"|a_p| > 2 sqrt(p) at p = {self.p}")

    @classmethod
    def from_curve(cls, E: QCurve, p: int) -> "FrobQDatum":
        if E.disc % p == 0:
            raise ValueError(f"bad reduction at {p}")
        return cls(p, p + 1 - count_points(E.reduce(p)))

    def to_json(self) -> dict:
        return {"p": self.p, "a_p": self.a_p}


def roots_mod(a: int, p: int, m: int) -> list[int]:
    """Roots of T^2 - a T + p in Z/m, by scanning."""
    return [x for x in range(m) if (x * x - a * x + p) % m == 0]


def _distinct_lifts(d: FrobQDatum, ell: int) -> Optional[tuple[int, int]]:
    """Roots mod l^2 lifting two distinct roots mod l, or None."""
    m = ell * ell
    r1 = roots_mod(d.a_p, d.p, ell)
    if len(r1) != 2:
        return None
    lifts = []
    for r in r1:
        hits = [x for x in range(r, m, ell) if (x * x - d.a_p * x + d.p) % m == 0]
        if len(hits) != 1:
            return None
        lifts.append(hits[0])
    return lifts[0], lifts[1]


def step1_witness(d: FrobQDatum, ell: int) -> bool:
    if d.p % ell == 0:
        raise ValueError("l divides p")
    lam = _distinct_lifts(d, ell)
    if lam is None:
        return False
    m = ell * ell
    return pow(lam[0], ell - 1, m) != pow(lam[1], ell - 1, m)


def step2_witness(d: FrobQDatum, ell: int) -> bool:
    if d.p % ell == 0:
        raise ValueError("l divides p")
    lam = _distinct_lifts(d, ell)
    if lam is None:
        return False
    m = ell * ell
    return pow(lam[0], ell - 1, m) == pow(lam[1], ell - 1, m)


def unipotent_mod(d: FrobQDatum, ell: int) -> bool:
    """T^2 - a_p T + p = (T - 1)^2 mod l."""
    return (d.a_p - 2) % ell == 0 and (d.p - 1) % ell == 0


def cartan_discriminator(d: FrobQDatum, ell: int) -> bool:
    """l^2 | 1 + p - a_p. False rules out the half split Cartan."""
    if not unipotent_mod(d, ell):
        raise ValueError("characteristic polynomial is not (T - 1)^2 mod l")
    return (1 + d.p - d.a_p) % (ell * ell) == 0


def step3_polynomial(d: FrobQDatum, ell: int) -> tuple[int, int]:
    """(s, n) with T^2 - s T + n the rescaled polynomial mod l."""
    if not unipotent_mod(d, ell) or (1 + d.p - d.a_p) % (ell * ell):
        raise ValueError("divisibility preconditions fail")
    return ((d.a_p - 2) // ell) % ell, ((1 + d.p - d.a_p) // (ell * ell)) % ell


def _irreducible_quadratic(s: int, n: int, ell: int) -> bool:
    disc = (s * s - 4 * n) % ell
    if disc == 0:
        return False
    return pow(disc, (ell - 1) // 2, ell) == ell - 1


def step3_witness(d: FrobQDatum, ell: int, E: QCurve, ceiling: int = 1 << 20) -> bool:
    s, n = step3_polynomial(d, ell)
    if not _irreducible_quadratic(s, n, ell):
        return False
    return full_l_torsion_exhaustive(E.reduce(d.p), ell, ceiling)


# --- rational torsion --------------------------------------------------------

def _q_add(E: QCurve, P, Q):
    if P is None:
        return Q
    if Q is None:
        return P
    a1, a2, a3, a4, a6 = E.ainvs
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == 0:
            return None
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    return (x3, -(lam + a1) * x3 - nu - a3)


def point_order(E: QCurve, P, bound: int = 16) -> Optional[int]:
    """Order of P if at most bound, else None."""
    Q = P
    for n in range(1, bound + 1):
        if Q is None:
            return n
        Q = _q_add(E, Q, P)
    return None


def rational_torsion_point(E: QCurve, ell: int, x_bound: int = 5000):
    """An integral point of exact order l with |x| <= x_bound, or None."""
    a1, a2, a3, a4, a6 = E.ainvs
    for x in sorted(range(-x_bound, x_bound + 1), key=abs):
        lin = a1 * x + a3
        rhs = x**3 + a2 * x * x + a4 * x + a6
        disc = lin * lin + 4 * rhs
        if disc < 0:
            continue
        s = math.isqrt(disc)
        if s * s != disc or (s - lin) % 2:
            continue
        P = (Fraction(x), Fraction((s - lin) // 2))
        if point_order(E, P, ell) == ell:
            return P
    return None


def torsion_compatible(E: QCurve, ell: int, primes: Iterable[int]) -> list[int]:
    """Good primes p != l where l fails to divide #E(F_p); empty means compatible."""
    bad = []
    for p in primes:
        if p == ell or E.disc % p == 0:
            continue
        if count_points(E.reduce(p)) % ell:
            bad.append(p)
    return bad


# --- certificate -------------------------------------------------------------

def _scan(E: QCurve, ell: int, test, hints: Iterable[int], search_bound: int, skip: set):
    """First prime among hints, then p < search_bound, whose datum passes test."""
    seen = set()
    tried = 0
    candidates = list(hints) + primes_upto(search_bound)
    for p in candidates:
        if p in seen or p in skip or not is_prime(p):
            continue
        seen.add(p)
        if E.disc % p == 0:
            continue
        tried += 1
        d = FrobQDatum.from_curve(E, p)
        if test(d):
            return d, tried
    return None, tried


def certify_half_borel(E: QCurve, ell: int = 7, search_bound: int = 20000,
                       hints: dict | None = None) -> Certificate:
    hints = hints or {}
    cert = Certificate(E.to_json(), kind="half_borel")
    skip = {ell} | set(prime_factors(abs(E.disc)))

    P = rational_torsion_point(E, ell)
    bad = torsion_compatible(E, ell, primes_upto(200))
    if P is not None and not bad:
        cert.add(Condition("rational_l_torsion", CERTIFIED, [], {"point": [str(P[0]), str(P[1])], "ell": ell}))
    else:
        cert.add(Condition("rational_l_torsion", FAILED if bad else UNDETERMINED, [],
                           {"incompatible_primes": bad}, note="no rational point of order l found"))

    def record(cid, test, hint_key):
        d, tried = _scan(E, ell, test, hints.get(hint_key, []), search_bound, skip)
        if d is None:
            return cert.add(Condition(cid, UNDETERMINED, [], {"tried": tried}))
        transcript.info("%s witness p=%d a_p=%d", cid, d.p, d.a_p)
        return cert.add(Condition(cid, CERTIFIED, [d.to_json()], {"tried": tried}))

    record("step1", lambda d: step1_witness(d, ell), "step1")
    record("step2", lambda d: step2_witness(d, ell), "step2")
    record("cartan_ruled_out",
           lambda d: unipotent_mod(d, ell) and not cartan_discriminator(d, ell), "cartan")
    record("step3",
           lambda d: unipotent_mod(d, ell) and cartan_discriminator(d, ell) and step3_witness(d, ell, E),
           "step3")

    steps_ok = all(cert.get(c).status == CERTIFIED for c in ("step1", "step2", "step3"))
    cert.add(Condition("step4_conjugation", CERTIFIED if steps_ok else UNDETERMINED, [], {},
                       note="automatic once steps 1-3 hold"))
    cert.add(Condition("adelic_assembly", PER_REFERENCE if cert.verdict == CERTIFIED else UNDETERMINED,
                       [], {}, required=False,
                       note="abelianization of the half-Borel product taken from the reference argument"))
    return cert
