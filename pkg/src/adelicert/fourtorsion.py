"""4-torsion field data for full-2-torsion curves and the cyclotomic-intersection tests."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .ellcurve import CurveModel, invariants
from .ideals import split_prime, valuation
from .intutil import prime_factors
from .numberfield import RingElement
from .squares import NON_SQUARE, SQUARE, UNDETERMINED, is_square_in_K

TRUE, FALSE, UNKNOWN = True, False, None


@dataclass
class HalvingData:
    d1: RingElement
    d2: RingElement
    d3: RingElement
    d4: RingElement

    @property
    def T(self) -> list[RingElement]:
        return [self.d1, self.d2, self.d3, self.d4]


@dataclass
class CheckResult:
    """value is True, False or None (undetermined)."""
    value: Optional[bool]
    evidence: list = field(default_factory=list)
    note: str = ""

    def to_json(self) -> dict:
        return {"value": self.value, "evidence": self.evidence, "note": self.note}


def halving_discriminants(e1: RingElement, e2: RingElement, e3: RingElement) -> HalvingData:
    if e1 == e2 or e1 == e3 or e2 == e3:
        raise ValueError("repeated roots")
    d1 = (e1 - e2) * (e1 - e3)
    d2 = (e2 - e1) * (e2 - e3)
    d3 = (e3 - e1) * (e3 - e2)
    d4 = 4 * (e1 - e2) * (e1 - e3) * (e2 - e3)
    E = CurveModel.from_roots(e1.field, e1, e2, e3)
    assert d4 * d4 == invariants(E).disc, "d4^2 != disc"
    return HalvingData(d1, d2, d3, d4)


def subset_products(items: list, one=1) -> list:
    """Products of all nonempty subsets, ordered by subset bitmask."""
    out = []
    n = len(items)
    for mask in range(1, 1 << n):
        prod = one
        for i in range(n):
            if mask >> i & 1:
                prod = prod * items[i]
        out.append(prod)
    return out


def subset_labels(names: list[str]) -> list[str]:
    n = len(names)
    return ["*".join(names[i] for i in range(n) if mask >> i & 1) for mask in range(1, 1 << n)]


@dataclass
class ProductSets:
    S: list[int]
    P_S: list[int]
    T: list[RingElement]
    P_T: list[RingElement]
    P_T_labels: list[str]


def bad_rational_primes(E: CurveModel) -> list[int]:
    """Rational primes below primes dividing 2*disc."""
    disc = invariants(E).disc
    n = (2 * disc).norm()
    return sorted(set(prime_factors(n.numerator)) | set(prime_factors(n.denominator)) | {2})


def product_sets(E: CurveModel, hd: HalvingData | None = None) -> ProductSets:
    if hd is None:
        hd = halving_discriminants(*_roots(E))
    S = bad_rational_primes(E)
    K = E.field
    return ProductSets(S, subset_products(S), hd.T, subset_products(hd.T, K.one),
                       subset_labels(["d1", "d2", "d3", "d4"]))


def _roots(E: CurveModel):
    if E.roots is None:
        raise ValueError("curve must be given in factored full-2-torsion form")
    return E.roots


def mod4_degree_is_16(E: CurveModel, budget: int = 48) -> CheckResult:
    """All 15 products of d1..d4 are non-squares, so [K(E[4]):K] = 16."""
    hd = halving_discriminants(*_roots(E))
    K = E.field
    evidence = []
    value = True
    for label, t in zip(subset_labels(["d1", "d2", "d3", "d4"]), subset_products(hd.T, K.one)):
        v = is_square_in_K(t, budget=budget)
        evidence.append({"t": label, **v.to_json()})
        if v.status == SQUARE:
            value = False
        elif v.status == UNDETERMINED and value is not False:
            value = None
    return CheckResult(value, evidence)


def _fast_path(E: CurveModel, ps: ProductSets) -> CheckResult | None:
    """For every p in S find P | p with odd e and every v_P(d_i) even; then no t/s is a square."""
    K = E.field
    evidence = []
    for p in ps.S:
        hit = None
        for P in split_prime(K, p):
            if P.e % 2 == 0:
                continue
            vals = [valuation(d, P) for d in ps.T]
            if all(v % 2 == 0 for v in vals):
                hit = {"p": p, "prime": P.to_json(), "valuations": vals}
                break
        if hit is None:
            return None
        evidence.append(hit)
    return CheckResult(True, evidence, note="parity")


def cyclotomic_intersection_ok(E: CurveModel, budget: int = 48, fast_path: bool = False) -> CheckResult:
    """Every t/s (s in P_S, t in P_T) is a non-square, so K(E[4]) meets K^cyc only in K(i)."""
    ps = product_sets(E)
    if fast_path:
        res = _fast_path(E, ps)
        if res is not None:
            return res
    K = E.field
    evidence = []
    value = True
    squares = 0
    for s in ps.P_S:
        ks = K(s)
        for label, t in zip(ps.P_T_labels, ps.P_T):
            v = is_square_in_K((t, ks), budget=budget)
            ent = {"s": str(s), "t": label, "status": v.status}
            if v.witness is not None:
                ent["witness_prime"] = v.witness.to_json()
            evidence.append(ent)
            if v.status == SQUARE:
                squares += 1
                value = False
            elif v.status == UNDETERMINED and value is True:
                value = None
    note = f"{len(evidence)} pairs, {squares} square ratios"
    if value is False:
        # the criterion is one-directional: a square ratio only makes the test inconclusive
        value = None
        note += "; inconclusive"
    return CheckResult(value, evidence, note=note)


def sqrt_disc_in_cyclotomic(E: CurveModel, budget: int = 48) -> CheckResult:
    """True if disc/s is a square for some s in P_S (so sqrt(disc) lies in K^cyc)."""
    disc = invariants(E).disc
    v0 = is_square_in_K(disc, budget=budget)
    if v0.status == SQUARE:
        raise ValueError("discriminant is a square in K")
    if v0.status == UNDETERMINED:
        return CheckResult(None, [{"s": "1", **v0.to_json()}], note="disc squareness undetermined")
    S = bad_rational_primes(E)
    K = E.field
    evidence = []
    value = False
    for s in subset_products(S):
        v = is_square_in_K((disc, K(s)), budget=budget)
        evidence.append({"s": str(s), **v.to_json()})
        if v.status == SQUARE:
            return CheckResult(True, evidence)
        if v.status == UNDETERMINED:
            value = None
    return CheckResult(value, evidence, note=f"S={S}")
