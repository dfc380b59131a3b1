"""Weierstrass models over O_K: invariants, local reduction, point counting, torsion tests."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import isqrt
from typing import Optional

import numpy as np

from .finitefield import (
    FiniteField,
    FqElem,
    all_elements_array,
    const_array,
    euler_is_square,
    fq_sqrt,
    roots_deg_le3,
    square_table,
    vec_add,
    vec_encode,
    vec_mul,
)
from .ideals import PrimeIdeal, valuation
from .numberfield import NumberField, RingElement

DEFAULT_COUNT_CEILING = 1 << 26
INF = 10**9

GOOD = "good"
MULTIPLICATIVE = "multiplicative"
ADDITIVE_POT_GOOD = "additive_pot_good"
ADDITIVE_POT_MULT = "additive_pot_mult"
UNCLASSIFIED = "unclassified"


class SingularCurveError(ValueError):
    pass


class BadReductionError(ValueError):
    pass


class CurveModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over K."""

    def __init__(self, field: NumberField, a1=0, a2=0, a3=0, a4=0, a6=0, roots=None):
        self.field = field
        self.a1, self.a2, self.a3, self.a4, self.a6 = (field(v) for v in (a1, a2, a3, a4, a6))
        self.roots = tuple(field(e) for e in roots) if roots is not None else None
        if invariants(self).disc.is_zero():
            raise SingularCurveError("discriminant is zero")

    @classmethod
    def from_roots(cls, field: NumberField, e1, e2, e3) -> "CurveModel":
        e1, e2, e3 = field(e1), field(e2), field(e3)
        return cls(field, 0, -(e1 + e2 + e3), 0, e1 * e2 + e1 * e3 + e2 * e3, -(e1 * e2 * e3),
                   roots=(e1, e2, e3))

    @property
    def ainvs(self) -> tuple[RingElement, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def to_json(self) -> dict:
        d = {k: v.to_json() for k, v in zip(("a1", "a2", "a3", "a4", "a6"), self.ainvs)}
        if self.roots is not None:
            d.update({f"e{i + 1}": e.to_json() for i, e in enumerate(self.roots)})
        return d

    def __repr__(self):
        return f"CurveModel({', '.join(map(str, self.ainvs))})"

    def change_coords(self, u, r=0, s=0, t=0) -> "CurveModel":
        """Model for x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""
        K = self.field
        u, r, s, t = K(u), K(r), K(s), K(t)
        a1, a2, a3, a4, a6 = self.ainvs
        ui = u.inverse()
        b1 = (a1 + 2 * s) * ui
        b2 = (a2 - s * a1 + 3 * r - s * s) * ui**2
        b3 = (a3 + r * a1 + 2 * t) * ui**3
        b4 = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) * ui**4
        b6 = (a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1) * ui**6
        roots = None
        if self.roots is not None and s.is_zero() and t.is_zero() and a1.is_zero() and a3.is_zero():
            roots = tuple((e - r) * ui**2 for e in self.roots)
        return CurveModel(K, b1, b2, b3, b4, b6, roots=roots)


@dataclass(frozen=True)
class Invariants:
    b2: RingElement
    b4: RingElement
    b6: RingElement
    b8: RingElement
    c4: RingElement
    c6: RingElement
    disc: RingElement

    @property
    def j(self) -> RingElement:
        return self.c4**3 / self.disc


def invariants(E: CurveModel) -> Invariants:
    a1, a2, a3, a4, a6 = E.ainvs
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -b2**3 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    if disc.is_zero():
        raise SingularCurveError("singular model: discriminant is zero")
    assert c4**3 - c6 * c6 == 1728 * disc, "c4^3 - c6^2 != 1728 disc"
    return Invariants(b2, b4, b6, b8, c4, c6, disc)


def _v(x: RingElement, P: PrimeIdeal) -> int:
    return INF if x.is_zero() else valuation(x, P)


@dataclass
class ReductionInfo:
    type: str
    v_delta_min: int
    v_c4: int
    v_j: int
    N_v: int
    t_v: Optional[int] = None
    prime: Optional[PrimeIdeal] = None
    model: Optional[CurveModel] = dc_field(default=None, repr=False)

    @property
    def semistable(self) -> bool:
        return self.type in (GOOD, MULTIPLICATIVE)

    @property
    def additive(self) -> bool:
        return self.type in (ADDITIVE_POT_GOOD, ADDITIVE_POT_MULT)

    def to_json(self) -> dict:
        d = {"type": self.type, "v_delta_min": self.v_delta_min, "v_c4": self.v_c4,
             "v_j": self.v_j, "N_v": str(self.N_v)}
        if self.t_v is not None:
            d["t_v"] = str(self.t_v)
        if self.prime is not None:
            d["prime"] = self.prime.to_json()
        return d


def _type_from(v_dmin: int, v_c4_min: int, v_j: int) -> str:
    if v_dmin == 0:
        return GOOD
    if v_c4_min == 0:
        return MULTIPLICATIVE
    return ADDITIVE_POT_MULT if v_j < 0 else ADDITIVE_POT_GOOD


def _reps_mod(P: PrimeIdeal, k: int) -> list[RingElement]:
    """Complete residue system of O_K / P^k read off the HNF diagonal."""
    I = P.power(k)
    d = [I.hnf[i][i] for i in range(3)]
    K = P.field
    return [K.from_basis((a, b, c)) for a in range(d[0]) for b in range(d[1]) for c in range(d[2])]


def _integral_at(E: CurveModel, P: PrimeIdeal) -> CurveModel:
    pi = P.uniformizer
    worst = 0
    for i, a in zip((1, 2, 3, 4, 6), E.ainvs):
        if not a.is_zero():
            v = valuation(a, P)
            if v < 0:
                worst = max(worst, -(-(-v) // i))
    if worst:
        E = E.change_coords(pi.inverse() ** worst)
    return E


def _descend_once(E: CurveModel, P: PrimeIdeal, ceiling: int) -> CurveModel | None:
    """A model with u = uniformizer that is still P-integral, or None if E is minimal at P.

    Only r mod P^2, s mod P, t mod P^3 matter, and the conditions on (s, r, t) are
    checked stage by stage.
    """
    p = P.p
    pi = P.uniformizer
    a1, a2, a3, a4, a6 = E.ainvs
    if P.norm**3 > ceiling:
        raise OverflowError("minimality search exceeds ceiling")
    if p == 2:
        if not _in(a1, P, 1):
            return None
        s_cands = _reps_mod(P, 1)
    else:
        s_cands = [-a1 * ((p**3 + 1) // 2)]
    for s in s_cands:
        if not _in(a1 + 2 * s, P, 1):
            continue
        c2 = a2 - s * a1 - s * s
        if p == 3:
            r_cands = [r for r in _reps_mod(P, 2) if _in(c2 + 3 * r, P, 2)]
        else:
            inv3 = pow(3, -1, p**6)
            r_cands = [-c2 * inv3]
        for r in r_cands:
            if not _in(c2 + 3 * r, P, 2):
                continue
            c3 = a3 + r * a1
            if p == 2:
                t_cands = [t for t in _reps_mod(P, 3) if _in(c3 + 2 * t, P, 3)]
            else:
                t_cands = [-c3 * ((p**6 + 1) // 2)]
            for t in t_cands:
                if not _in(c3 + 2 * t, P, 3):
                    continue
                c4_ = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
                if not _in(c4_, P, 4):
                    continue
                c6_ = a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1
                if not _in(c6_, P, 6):
                    continue
                return E.change_coords(pi, r, s, t)
    return None


def _in(x: RingElement, P: PrimeIdeal, k: int) -> bool:
    """v_P(x) >= k."""
    if x.is_zero():
        return True
    if x.is_integral():
        return x in P.power(k)
    return valuation(x, P) >= k


def minimal_model_at(E: CurveModel, P: PrimeIdeal, ceiling: int = 1 << 21) -> CurveModel:
    """A P-minimal model obtained by explicit substitutions with powers of the uniformizer."""
    E = _integral_at(E, P)
    while True:
        inv = invariants(E)
        if valuation(inv.disc, P) < 12:
            return E
        nxt = _descend_once(E, P, ceiling)
        if nxt is None:
            return E
        E = nxt


def classify_reduction(E: CurveModel, P: PrimeIdeal, uniformizer: RingElement | None = None,
                       ceiling: int = 1 << 21) -> ReductionInfo:
    """Reduction type of E at P."""
    if uniformizer is not None:
        P.__dict__["uniformizer"] = P.field(uniformizer)
    inv = invariants(E)
    vd, vc4, vc6 = _v(inv.disc, P), _v(inv.c4, P), _v(inv.c6, P)
    vj = 3 * vc4 - vd if vc4 < INF else INF
    if P.p in (2, 3):
        try:
            Em = minimal_model_at(E, P, ceiling)
        except OverflowError:
            return ReductionInfo(UNCLASSIFIED, vd, vc4, vj, P.norm, prime=P)
        im = invariants(Em)
        vdm, vc4m = _v(im.disc, P), _v(im.c4, P)
        return ReductionInfo(_type_from(vdm, vc4m, vj), vdm, vc4m, vj, P.norm, prime=P, model=Em)
    k = min(vc4 // 4, vc6 // 6, vd // 12)
    vdm = vd - 12 * k
    vc4m = vc4 - 4 * k if vc4 < INF else INF
    model = E
    if k != 0:
        pi = P.uniformizer
        # c4/c6 short model scaled by pi^k
        model = CurveModel(E.field, 0, 0, 0, -27 * inv.c4 * pi.inverse() ** (4 * k),
                           -54 * inv.c6 * pi.inverse() ** (6 * k))
    return ReductionInfo(_type_from(vdm, vc4m, vj), vdm, vc4m, vj, P.norm, prime=P, model=model)


# --- reduced curves -------------------------------------------------------

class ReducedCurve:
    """Weierstrass curve over a finite field."""

    def __init__(self, F: FiniteField, a1, a2, a3, a4, a6):
        self.F = F
        self.a1, self.a2, self.a3, self.a4, self.a6 = (F(v) if not isinstance(v, FqElem) else v
                                                         for v in (a1, a2, a3, a4, a6))

    @property
    def q(self) -> int:
        return self.F.q

    @property
    def ainvs(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + a2 * 4
        b4 = a4 * 2 + a1 * a3
        b6 = a3 * a3 + a6 * 4
        b8 = a1 * a1 * a6 + a2 * a6 * 4 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    def discriminant(self) -> FqElem:
        b2, b4, b6, b8 = self.b_invariants()
        return -(b2 * b2 * b8) - b4 * b4 * b4 * 8 - b6 * b6 * 27 + b2 * b4 * b6 * 9

    def is_smooth(self) -> bool:
        return not self.discriminant().is_zero()

    def rhs(self, x: FqElem) -> FqElem:
        return ((x + self.a2) * x + self.a4) * x + self.a6

    def two_division_cubic(self):
        """Coefficients [c0, c1, c2, 1] of x^3 + (b2/4)x^2 + (b4/2)x + b6/4 (odd p)."""
        b2, b4, b6, _ = self.b_invariants()
        F = self.F
        i4, i2 = F(4).inverse(), F(2).inverse()
        return [b6 * i4, b4 * i2, b2 * i4, F.one]

    def __repr__(self):
        return f"ReducedCurve(F_{self.q}: {[str(a) for a in self.ainvs]})"


def reduce_at(E: CurveModel, P: PrimeIdeal, info: ReductionInfo | None = None) -> ReducedCurve:
    info = info or classify_reduction(E, P)
    if info.type != GOOD:
        raise BadReductionError(f"E has {info.type} reduction at {P}")
    model = info.model or E
    return ReducedCurve(P.residue_field, *(P.residue(a) for a in model.ainvs))


def count_points(C: ReducedCurve, ceiling: int = DEFAULT_COUNT_CEILING, chunk: int = 1 << 20) -> int:
    """#C(F_q), projective point included."""
    F = C.F
    q = F.q
    if q > ceiling:
        raise OverflowError(f"q = {q} exceeds point-count ceiling {ceiling}")
    if F.p == 2:
        n = count_points_exhaustive(C)
    else:
        g = C.two_division_cubic()
        table = square_table(F)
        total = 0
        for start in range(0, q, chunk):
            stop = min(q, start + chunk)
            X = all_elements_array(F, start, stop)
            size = stop - start
            acc = const_array(F, g[2], size)
            acc = vec_add(X, acc, F)
            acc = vec_add(vec_mul(acc, X, F), const_array(F, g[1], size), F)
            acc = vec_add(vec_mul(acc, X, F), const_array(F, g[0], size), F)
            enc = vec_encode(acc, F)
            nonzero = enc != 0
            sq = table[enc]
            total += int(np.count_nonzero(sq)) - int(np.count_nonzero(nonzero & ~sq))
        n = q + 1 + total
    t = q + 1 - n
    assert t * t <= 4 * q, f"Hasse bound violated: t={t}, q={q}"
    return n


def count_points_exhaustive(C: ReducedCurve) -> int:
    """Oracle: enumerate every affine (x, y)."""
    F = C.F
    els = list(F.elements())
    n = 1
    for x in els:
        lhs_lin = C.a1 * x + C.a3
        r = C.rhs(x)
        for y in els:
            if y * y + lhs_lin * y == r:
                n += 1
    return n


def trace_of_frobenius(C: ReducedCurve, **kw) -> int:
    return C.q + 1 - count_points(C, **kw)


# --- group law (affine, None = identity) ----------------------------------

def _neg(C, P):
    if P is None:
        return None
    x, y = P
    return (x, -y - C.a1 * x - C.a3)


def _add(C, P, Q):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    a1, a2, a3, a4, a6 = C.ainvs
    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == C.F.zero:
            return None
        lam = (x1 * x1 * 3 + a2 * x1 * 2 + a4 - a1 * y1) / (y1 * 2 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return (x3, y3)


def _mul(C, n, P):
    R = None
    while n:
        if n & 1:
            R = _add(C, R, P)
        P = _add(C, P, P)
        n >>= 1
    return R


def points(C: ReducedCurve):
    """All affine points (odd p via square roots; p = 2 by enumeration)."""
    F = C.F
    els = list(F.elements())
    if F.p == 2:
        for x in els:
            lin = C.a1 * x + C.a3
            r = C.rhs(x)
            for y in els:
                if y * y + lin * y == r:
                    yield (x, y)
        return
    half = F(2).inverse()
    for x in els:
        lin = C.a1 * x + C.a3
        disc = lin * lin + C.rhs(x) * 4
        if disc.is_zero():
            yield (x, -lin * half)
            continue
        s = fq_sqrt(disc)
        if s is not None:
            yield (x, (s - lin) * half)
            yield (x, (-s - lin) * half)


def torsion_count_exhaustive(C: ReducedCurve, n: int, ceiling: int = 1 << 20) -> int:
    """#{P in C(F_q) : nP = O} by enumeration."""
    if C.q > ceiling:
        raise OverflowError(f"q = {C.q} exceeds enumeration ceiling {ceiling}")
    return 1 + sum(1 for P in points(C) if _mul(C, n, P) is None)


def full_l_torsion_exhaustive(C: ReducedCurve, ell: int, ceiling: int = 1 << 20) -> bool:
    if ell == 1:
        return True
    return torsion_count_exhaustive(C, ell, ceiling) == ell * ell


def full_four_torsion(C: ReducedCurve) -> bool:
    """Halving criterion: every 2-torsion point is divisible by 2 over F_q."""
    F = C.F
    if F.p == 2:
        return torsion_count_exhaustive(C, 4) == 16
    roots = roots_deg_le3(C.two_division_cubic(), F)
    if len(roots) != 3 or len(set(roots)) != 3:
        return False
    for i in range(3):
        for j in range(3):
            if i != j and not euler_is_square(roots[i] - roots[j]):
                return False
    return True


def full_four_torsion_exhaustive(C: ReducedCurve) -> bool:
    return torsion_count_exhaustive(C, 4) == 16


def hasse_bound_ok(t: int, q: int) -> bool:
    return t * t <= 4 * q


def isqrt_ceil(n: int) -> int:
    r = isqrt(n)
    return r if r * r == n else r + 1
