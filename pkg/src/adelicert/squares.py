"""Squareness in K: Euler non-residue witnesses at degree-one primes, exact roots via embeddings."""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Optional

import mpmath

from .ideals import PrimeIdeal, degree_one_primes, split_prime
from .numberfield import NumberField, RingElement

log = logging.getLogger(__name__)

NON_SQUARE = "NonSquare"
SQUARE = "Square"
UNDETERMINED = "Undetermined"

DEFAULT_WITNESS_BUDGET = 48


@dataclass(frozen=True)
class Witness:
    """Degree-one prime (p, a - r)."""
    p: int
    r: int

    def prime(self, K: NumberField) -> PrimeIdeal:
        for P in split_prime(K, self.p):
            if P.f == 1 and P.gen_poly == ((-self.r) % self.p, 1):
                return P
        raise LookupError(f"no prime (p={self.p}, a-{self.r})")

    def to_json(self) -> dict:
        return {"p": self.p, "g": [(-self.r) % self.p, 1], "e": 1, "f": 1}


@dataclass
class SquarenessVerdict:
    status: str
    witness: Optional[Witness] = None
    root: Optional[RingElement] = None
    witnesses_tried: int = 0

    @property
    def is_nonsquare(self) -> bool:
        return self.status == NON_SQUARE

    def to_json(self) -> dict:
        d = {"status": self.status, "witnesses_tried": self.witnesses_tried}
        if self.witness is not None:
            d["witness"] = self.witness.to_json()
        if self.root is not None:
            d["root"] = self.root.to_json()
        return d


def _witness_list(K: NumberField, n: int) -> list[tuple[int, int]]:
    cache = K.__dict__.setdefault("_deg1_cache", [])
    if len(cache) < n:
        gen = K.__dict__.get("_deg1_iter")
        if gen is None:
            gen = degree_one_primes(K)
            K.__dict__["_deg1_iter"] = gen
        while len(cache) < n:
            cache.append(next(gen))
    return cache


def _residue_deg1(y: RingElement, p: int, r: int) -> int:
    a0, a1, a2 = y.num
    v = (a0 + r * (a1 + r * a2)) % p
    if y.den % p == 0:
        raise ValueError("denominator not invertible")
    return v * pow(y.den, -1, p) % p


def legendre_at(y: RingElement, w: Witness) -> int:
    """Legendre symbol of y modulo the degree-one prime w (0 if y lies in it)."""
    v = _residue_deg1(y, w.p, w.r)
    if v == 0:
        return 0
    return 1 if pow(v, (w.p - 1) // 2, w.p) == 1 else -1


def find_nonsquare_witness(y: RingElement, budget: int) -> tuple[Optional[Witness], int]:
    K = y.field
    tried = 0
    for p, r in _witness_list(K, budget * 2 + 16):
        if y.den % p == 0:
            continue
        v = _residue_deg1(y, p, r)
        if v == 0:
            continue
        tried += 1
        if pow(v, (p - 1) // 2, p) != 1:
            return Witness(p, r), tried
        if tried >= budget:
            break
    return None, tried


def _real_system(K: NumberField, prec: int):
    basis = K.basis_elements()
    vals = [w.embedding_values(prec) for w in basis]
    r1, r2 = K.signature
    rows = []
    for i in range(r1):
        rows.append([mpmath.re(vals[j][i]) for j in range(3)])
    for i in range(r1, r1 + r2):
        rows.append([mpmath.re(vals[j][i]) for j in range(3)])
        rows.append([mpmath.im(vals[j][i]) for j in range(3)])
    return rows, r1, r2


def exact_sqrt(y: RingElement, max_prec: int = 4096) -> Optional[RingElement]:
    """A root z in O_K with z^2 = y (y integral), found by rounding an embedding solve."""
    K = y.field
    prec = 128
    while prec <= max_prec:
        with mpmath.workprec(prec):
            rows, r1, r2 = _real_system(K, prec)
            A = mpmath.matrix(rows)
            yv = y.embedding_values(prec)
            roots = [mpmath.sqrt(v) for v in yv]
            for signs in itertools.product((1, -1), repeat=r1 + r2 - 1):
                signs = (1,) + signs
                rhs = []
                for i in range(r1):
                    rhs.append(mpmath.re(signs[i] * roots[i]))
                for i in range(r1, r1 + r2):
                    z = signs[i] * roots[i]
                    rhs += [mpmath.re(z), mpmath.im(z)]
                try:
                    sol = mpmath.lu_solve(A, mpmath.matrix(rhs))
                except ZeroDivisionError:
                    continue
                coords = [int(mpmath.nint(c)) for c in sol]
                cand = K.from_basis(coords)
                if cand * cand == y:
                    return cand
        prec *= 2
    return None


def is_square_in_K(x, budget: int = DEFAULT_WITNESS_BUDGET, max_prec: int = 4096) -> SquarenessVerdict:
    """Decide whether x (element or (num, den) pair) is a square in K."""
    if isinstance(x, tuple):
        num, den = x
        if num.is_zero() or den.is_zero():
            raise ValueError("zero")
        base = num / den
    else:
        if x.is_zero():
            raise ValueError("zero")
        base = x
    D = base.basis_denominator()
    y = base * (D * D) if D != 1 else base
    w, tried = find_nonsquare_witness(y, budget)
    if w is not None:
        return SquarenessVerdict(NON_SQUARE, witness=w, witnesses_tried=tried)
    z = exact_sqrt(y, max_prec)
    if z is not None:
        root = z / D if D != 1 else z
        assert root * root == base
        return SquarenessVerdict(SQUARE, root=root, witnesses_tried=tried)
    log.info("squareness undetermined after %d witnesses", tried)
    return SquarenessVerdict(UNDETERMINED, witnesses_tried=tried)


def replay_nonsquare(x, w: Witness) -> bool:
    """Re-derive a NonSquare verdict from its recorded witness alone."""
    base = x[0] / x[1] if isinstance(x, tuple) else x
    D = base.basis_denominator()
    y = base * (D * D) if D != 1 else base
    return legendre_at(y, w) == -1


def same_square_class(x: RingElement, y: RingElement, **kw) -> SquarenessVerdict:
    """Verdict on x / y being a square."""
    return is_square_in_K((x, y), **kw)
