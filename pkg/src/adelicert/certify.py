"""Certification pipelines: exclusion of bad l, Serre-style witnesses, mod-8/mod-9 witnesses, assembly."""
from __future__ import annotations

import datetime
import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Iterator, Optional

from . import __version__
from .ellcurve import (ADDITIVE_POT_GOOD, ADDITIVE_POT_MULT, GOOD, MULTIPLICATIVE, CurveModel,
                       ReducedCurve, ReductionInfo, classify_reduction, count_points, full_four_torsion,
                       invariants, reduce_at)
from .finitefield import FiniteField, legendre, roots_deg_le3, trace_extend
from .fourtorsion import cyclotomic_intersection_ok, mod4_degree_is_16, sqrt_disc_in_cyclotomic
from .ideals import (PrimeIdeal, factor_element, iter_primes_by_norm, modulus_unit_count,
                     prime_from_generator, split_prime, unit_order_mod, valuation)
from .intutil import prime_factors
from .numberfield import NumberField, RingElement, galois_group_is_S3, totally_positive
from .squares import NON_SQUARE, SQUARE, is_square_in_K

log = logging.getLogger(__name__)
transcript = logging.getLogger("adelicert.transcript")

CERTIFIED = "certified"
PER_REFERENCE = "certified-per-reference"
FAILED = "failed"
UNDETERMINED = "undetermined"
OK_STATUSES = (CERTIFIED, PER_REFERENCE)

FULL2TORS = "full2tors"
GENERAL = "general"


class HypothesisError(ValueError):
    """A precondition of a criterion is not met or not flagged."""


# --- class data and moduli ------------------------------------------------

@dataclass
class ClassData:
    d: int
    u: RingElement
    k_override: Optional[int] = None
    ray_class_orders: dict = field(default_factory=dict)
    trivial_narrow_class: bool = False
    unit_u_minus_1_unit: bool = False

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("narrow class number must be positive")
        if abs(self.u.norm()) != 1 or not self.u.is_integral():
            raise ValueError(f"{self.u} is not a unit")
        if not totally_positive(self.u):
            raise ValueError(f"{self.u} is not totally positive")
        if self.trivial_narrow_class and self.d != 1:
            raise ValueError("trivial_narrow_class flagged with d != 1")

    @classmethod
    def from_json(cls, K: NumberField, obj: dict) -> "ClassData":
        flags = obj.get("flags", {})
        k = obj.get("unit_order_k_override")
        return cls(d=int(obj["narrow_class_number"]), u=K.element(obj["fundamental_unit"]),
                   k_override=int(k) if k is not None else None,
                   ray_class_orders={str(a): int(b) for a, b in obj.get("ray_class_orders", {}).items()},
                   trivial_narrow_class=bool(flags.get("trivial_narrow_class", False)),
                   unit_u_minus_1_unit=bool(flags.get("unit_u_minus_1_unit", False)))

    def to_json(self) -> dict:
        d = {"narrow_class_number": self.d, "fundamental_unit": self.u.to_json(),
             "ray_class_orders": {k: str(v) for k, v in self.ray_class_orders.items()},
             "flags": {"trivial_narrow_class": self.trivial_narrow_class,
                       "unit_u_minus_1_unit": self.unit_u_minus_1_unit}}
        if self.k_override is not None:
            d["unit_order_k_override"] = self.k_override
        return d


@dataclass
class ConductorModulus:
    finite_part: list  # (PrimeIdeal, exponent >= 1)
    mode: str
    includes_all_real_places: bool = True
    exponents: list = field(default_factory=list)  # per bad prime, including zeros

    @property
    def r(self) -> int:
        return modulus_unit_count(self.finite_part)

    @property
    def label(self) -> str:
        if not self.finite_part:
            return "inf"
        return "*".join(f"({P.p},{','.join(P.gen.to_json())})^{i}" for P, i in self.finite_part) + "*inf"

    def divides_at(self, P: PrimeIdeal) -> bool:
        return any(Q == P for Q, _ in self.finite_part)

    def to_json(self) -> dict:
        return {"mode": self.mode, "label": self.label, "r": str(self.r),
                "finite_part": [{"prime": P.to_json(), "exponent": i} for P, i in self.finite_part],
                "exponents": self.exponents, "includes_all_real_places": self.includes_all_real_places}


@dataclass
class UnitBound:
    B: int
    d: int
    r: int
    k: int
    k_source: str
    length: int
    factor_norms: list
    primes: list

    def to_json(self) -> dict:
        return {"B": str(self.B), "d": self.d, "r": str(self.r), "k": str(self.k), "k_source": self.k_source,
                "dr_over_k": self.length, "factor_norms": [str(n) for n in self.factor_norms],
                "primes": [str(p) for p in self.primes]}


# --- Frobenius data ---------------------------------------------------------

@dataclass
class FrobeniusDatum:
    prime: PrimeIdeal
    N: int
    t: int

    def __post_init__(self):
        if self.t * self.t > 4 * self.N:
            raise ArithmeticError(f"Hasse bound fails: t={self.t}, N={self.N}")

    @property
    def count(self) -> int:
        return self.N + 1 - self.t

    def count_ext(self, n: int) -> int:
        return self.N**n + 1 - trace_extend(self.t, self.N, n)

    def to_json(self) -> dict:
        return {"prime": self.prime.to_json(), "N": str(self.N), "t": str(self.t), "count": str(self.count)}


def parse_prime(K: NumberField, obj) -> PrimeIdeal:
    """A prime from {"p", "gen"} (two-element form) or a bare generator of a principal prime."""
    if isinstance(obj, dict):
        p = int(obj["p"])
        gen = K.element(obj["gen"])
        for P in split_prime(K, p):
            if gen in P and (("f" not in obj) or P.f == int(obj["f"])):
                return P
        raise ValueError(f"no prime above {p} contains {gen}")
    return prime_from_generator(K, K.element(obj))


class CurveData:
    """A curve with cached bad-prime classification and Frobenius data."""

    def __init__(self, E: CurveModel, count_ceiling: int = 1 << 26):
        for a in E.ainvs:
            if not a.is_integral():
                raise ValueError("curve coefficients must be integral")
        self.E = E
        self.K = E.field
        self.inv = invariants(E)
        self.count_ceiling = count_ceiling
        self._frob: dict = {}
        self._reductions: dict | None = None
        self._local: dict = {}

    @property
    def reductions(self) -> dict[PrimeIdeal, ReductionInfo]:
        """Classification at every prime dividing the discriminant of the model."""
        if self._reductions is None:
            out = {}
            for P in factor_element(self.inv.disc, self.K):
                out[P] = classify_reduction(self.E, P)
                transcript.info("reduction at %s: %s", P, out[P].to_json())
            self._reductions = out
        return self._reductions

    def bad_primes(self) -> dict[PrimeIdeal, ReductionInfo]:
        return {P: i for P, i in self.reductions.items() if i.type != GOOD}

    def is_semistable(self) -> bool:
        return all(i.semistable for i in self.reductions.values())

    def local_info(self, P: PrimeIdeal) -> Optional[ReductionInfo]:
        """Classification at P, or None when P does not divide the model discriminant.

        Avoids factoring the whole discriminant, which matters for large family members.
        """
        if self._reductions is not None:
            return self._reductions.get(P)
        if P not in self._local:
            self._local[P] = classify_reduction(self.E, P) if valuation(self.inv.disc, P) > 0 else None
        return self._local[P]

    def reduced(self, P: PrimeIdeal) -> Optional[ReducedCurve]:
        info = self.local_info(P)
        if info is not None:
            if info.type != GOOD:
                return None
            return reduce_at(self.E, P, info)
        return ReducedCurve(P.residue_field, *(P.residue(a) for a in self.E.ainvs))

    def frobenius(self, P: PrimeIdeal) -> Optional[FrobeniusDatum]:
        if P in self._frob:
            return self._frob[P]
        C = self.reduced(P)
        fd = None
        if C is not None:
            n = count_points(C, ceiling=self.count_ceiling)
            fd = FrobeniusDatum(P, P.norm, P.norm + 1 - n)
            transcript.info("count at %s: N=%d #E=%d t=%d", P, P.norm, n, fd.t)
        self._frob[P] = fd
        return fd

    def good_primes(self, max_norm: int, avoid: Iterable[int] = ()) -> Iterator[PrimeIdeal]:
        """Good primes by increasing norm, skipping residue characteristics in avoid."""
        avoid = set(avoid)
        bad = self.bad_primes()
        for P in iter_primes_by_norm(self.K):
            if P.norm > max_norm:
                return
            if P.p in avoid or P in bad:
                continue
            yield P


# --- certificate -----------------------------------------------------------

@dataclass
class Condition:
    id: str
    status: str
    witnesses: list = field(default_factory=list)
    values: dict = field(default_factory=dict)
    required: bool = True
    note: str = ""

    def to_json(self) -> dict:
        d = {"id": self.id, "status": self.status, "witnesses": self.witnesses, "values": self.values}
        if not self.required:
            d["required"] = False
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class Certificate:
    curve: dict
    conditions: list = field(default_factory=list)
    kind: str = ""

    def add(self, cond: Condition) -> Condition:
        transcript.info("condition %s: %s", cond.id, cond.status)
        self.conditions.append(cond)
        return cond

    def get(self, cid: str) -> Optional[Condition]:
        for c in self.conditions:
            if c.id == cid:
                return c
        return None

    @property
    def verdict(self) -> str:
        req = [c for c in self.conditions if c.required]
        if any(c.status == FAILED for c in req):
            return FAILED
        if all(c.status in OK_STATUSES for c in req):
            return CERTIFIED
        return UNDETERMINED

    def to_json(self, timestamp: bool = True) -> dict:
        d = {"kind": self.kind, "curve": self.curve, "conditions": [c.to_json() for c in self.conditions],
             "verdict": self.verdict, "tool_version": __version__}
        if timestamp:
            d["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
        return d


def exit_code(verdict: str) -> int:
    return {CERTIFIED: 0, UNDETERMINED: 1, FAILED: 2}[verdict]


# --- exclusion of l --------------------------------------------------------

@dataclass
class Exclusion:
    gcd: int
    special: set
    residual: set
    samples: list
    details: dict

    def to_json(self) -> dict:
        return {"gcd": str(self.gcd), "special": sorted(self.special), "residual": sorted(self.residual),
                "samples": [s.to_json() | {"counted": str(c)} for s, c in self.samples], **self.details}


def _ramified_primes(K: NumberField) -> set[int]:
    return set(prime_factors(abs(K.disc_K)))


def _gcd_residual(samples: list) -> tuple[int, set[int]]:
    """gcd of counts, and every l dividing all counts at samples not above l."""
    g = 0
    for _, c in samples:
        new = gcd(g, c)
        assert g == 0 or g % new == 0
        g = new
    out = set(prime_factors(g)) if g > 1 else set()
    for p in {fd.prime.p for fd, _ in samples}:
        gp = 0
        for fd, c in samples:
            if fd.prime.p != p:
                gp = gcd(gp, c)
        if gp == 0 or gp % p == 0:
            out.add(p)
    return g, out


def _sample(cd: CurveData, n_ext: int, hints: list, count: int, max_norm: int,
            skip=lambda P: False) -> list:
    samples = []
    seen = set()
    for P in hints:
        fd = cd.frobenius(P)
        if fd is None or skip(P):
            raise HypothesisError(f"sample prime {P} is bad or divides the modulus")
        samples.append((fd, fd.count_ext(n_ext)))
        seen.add(P)
    for P in cd.good_primes(max_norm):
        if len(samples) >= count:
            break
        if P in seen or skip(P):
            continue
        fd = cd.frobenius(P)
        samples.append((fd, fd.count_ext(n_ext)))
    if not samples:
        raise HypothesisError("no good sample primes")
    return samples


def _vj_primes(cd: CurveData, pot_mult: bool = False) -> tuple[int, list]:
    """gcd of v(j) over qualifying v with v(j) < 0, and those v."""
    quals = [(P, i) for P, i in cd.reductions.items()
             if i.v_j < 0 and (i.type == MULTIPLICATIVE or (pot_mult and i.type == ADDITIVE_POT_MULT))]
    if not quals:
        raise HypothesisError("no prime with v(j) < 0 of the required type")
    g = 0
    for _, i in quals:
        g = gcd(g, -i.v_j)
    return g, quals


def exclusion_set_semistable(cd: CurveData, class_data: ClassData, sample_count: int = 12,
                             hints: Iterable[PrimeIdeal] = (), max_norm: int = 10**5) -> Exclusion:
    """Semistable route with trivial narrow class group: surjective mod l unless l divides every count."""
    K = cd.K
    if K.signature[0] < 1:
        raise HypothesisError("K has no real embedding")
    if not class_data.trivial_narrow_class:
        raise HypothesisError("trivial narrow class group not flagged")
    if not galois_group_is_S3(K):
        raise HypothesisError("K meets Q^cyc nontrivially")
    if not cd.is_semistable():
        raise HypothesisError("curve is not semistable")
    ram = _ramified_primes(K)
    special = set(ram)
    side = {}
    mult = [i for i in cd.reductions.values() if i.type == MULTIPLICATIVE]
    for ell in (2, 3, 5):
        ok = [i.prime for i in mult if i.v_j % ell != 0]
        side[ell] = ok[0].to_json() if ok else None
        if not ok:
            special.add(ell)
    samples = _sample(cd, 1, list(hints), sample_count, max_norm)
    g, from_counts = _gcd_residual(samples)
    return Exclusion(g, special, special | from_counts, samples,
                     {"route": "semistable", "ramified": sorted(ram),
                      "vj_side_condition": {str(k): v for k, v in side.items()}})


def conductor_modulus(cd: CurveData, mode: str, assume_ramified_in_L: bool = True) -> ConductorModulus:
    K = cd.K
    ram = _ramified_primes(K)
    if 2 in ram or (mode == GENERAL and 3 in ram):
        raise HypothesisError("2 (or 3 in general mode) ramifies in K")
    if mode not in (FULL2TORS, GENERAL):
        raise ValueError(f"unknown mode {mode}")
    part, exps = [], []
    for P, info in sorted(cd.reductions.items(), key=lambda kv: (kv[0].norm, kv[0].hnf)):
        i = conductor_exponent(info, P, mode, assume_ramified_in_L)
        exps.append({"prime": P.to_json(), "type": info.type, "i": i})
        if i:
            part.append((P, i))
    return ConductorModulus(part, mode, True, exps)


def conductor_exponent(info: ReductionInfo, P: PrimeIdeal, mode: str, ramified_in_L: bool = True) -> int:
    if info.semistable:
        return 0
    pot_mult = info.type == ADDITIVE_POT_MULT
    if mode == FULL2TORS:
        if P.p != 2:
            if info.type == ADDITIVE_POT_GOOD and not ramified_in_L:
                return 0
            return 1
        r = 3 if (ramified_in_L or pot_mult) else 0
        s = 1 if (P.f == 1 and ramified_in_L and pot_mult) else 0
        return r + s
    if P.p == 3:
        return 2
    if P.p != 2:
        return 1
    r = 3 if pot_mult else 2
    return 2 + -(-r // P.f)


def unit_bound(class_data: ClassData, m_f: list) -> UnitBound:
    """B = |N(prod_{i=1}^{dr/k} (u^{ik} - 1))|, computed factor by factor."""
    u = class_data.u
    r = modulus_unit_count(m_f)
    if class_data.k_override is not None:
        k, src = class_data.k_override, "override"
    else:
        k, src = (unit_order_mod(u, m_f) if m_f else 1), "computed"
    if (class_data.d * r) % k:
        raise HypothesisError(f"k = {k} does not divide d*r = {class_data.d * r}")
    length = class_data.d * r // k
    norms = []
    B = 1
    uk = u**k
    power = uk
    for i in range(1, length + 1):
        x = power - 1
        if x.is_zero():
            raise HypothesisError(f"u^{i * k} = 1: u is torsion")
        n = abs(x.norm())
        assert n.denominator == 1
        norms.append(int(n))
        B *= int(n)
        power = power * uk
    primes = sorted({p for n in norms for p in prime_factors(n)})
    return UnitBound(B, class_data.d, r, k, src, length, norms, primes)


def ray_class_order(class_data: ClassData, mod: ConductorModulus) -> tuple[int, str]:
    """Supplied n, or d*r/k_u which is a multiple of #C^m by the exact sequence."""
    if mod.label in class_data.ray_class_orders:
        return class_data.ray_class_orders[mod.label], "supplied"
    if "default" in class_data.ray_class_orders:
        return class_data.ray_class_orders["default"], "supplied"
    k = unit_order_mod(class_data.u, mod.finite_part) if mod.finite_part else 1
    return class_data.d * mod.r // k, "d*r/k"


def exclusion_set_general(cd: CurveData, class_data: ClassData, mode: str, sample_count: int = 12,
                          hints: Iterable[PrimeIdeal] = (), max_norm: int = 10**5,
                          assume_ramified_in_L: bool = True, allow_pot_mult: bool = False) -> Exclusion:
    """Ray-class route: surjective mod l unless l is exceptional or divides every #E(l_v)."""
    K = cd.K
    if not galois_group_is_S3(K):
        raise HypothesisError("K is Galois over Q")
    ram = _ramified_primes(K)
    mod = conductor_modulus(cd, mode, assume_ramified_in_L)
    additive = sorted({P.p for P, i in cd.reductions.items() if i.additive})
    vj_gcd, quals = _vj_primes(cd, allow_pot_mult)
    ub = unit_bound(class_data, mod.finite_part)
    n, n_src = ray_class_order(class_data, mod)
    special = ram | set(additive) | set(prime_factors(vj_gcd)) | set(ub.primes)
    samples = _sample(cd, n, list(hints), sample_count, max_norm, skip=mod.divides_at)
    g, from_counts = _gcd_residual(samples)
    return Exclusion(g, special, special | from_counts, samples,
                     {"route": "general", "mode": mode, "ramified": sorted(ram), "additive_chars": additive,
                      "vj_gcd": vj_gcd, "vj_primes": [P.to_json() for P, _ in quals],
                      "modulus": mod.to_json(), "unit_bound": ub.to_json(), "n": str(n), "n_source": n_src})


# --- witnesses -------------------------------------------------------------

def serre_values(fd: FrobeniusDatum, ell: int) -> dict:
    N, t = fd.N % ell, fd.t % ell
    disc = (t * t - 4 * N) % ell
    u = t * t * pow(N, -1, ell) % ell
    return {"t2_minus_4N": disc, "t2_minus_4N2": (t * t - 4 * N * N) % ell,
            "legendre": legendre(disc, ell), "u": u, "u2_3u_1": (u * u - 3 * u + 1) % ell,
            "t_mod": t, "N_mod": N}


def _role(fd: FrobeniusDatum, ell: int) -> set[str]:
    v = serre_values(fd, ell)
    roles = set()
    if v["t_mod"] != 0:
        if v["legendre"] == -1:
            roles.add("s1")
        elif v["legendre"] == 1:
            roles.add("s2")
        if v["u"] not in (0, 1, 2, 4 % ell) and v["u2_3u_1"] != 0:
            roles.add("t")
    return roles


def prop19_certify(cd: CurveData, ell: int, search_bound: int = 2000,
                   hints: dict | None = None, max_norm: int = 10**6) -> Condition:
    """Find s1, s2, t in the Frobenius image showing the mod-l image contains SL2."""
    if ell < 5:
        raise HypothesisError("Serre's criterion needs l >= 5")
    found: dict[str, FrobeniusDatum] = {}
    for role, P in (hints or {}).items():
        fd = cd.frobenius(P)
        if fd is not None and P.p != ell and role in _role(fd, ell):
            found[role] = fd
    scanned = 0
    if len(found) < 3:
        for P in cd.good_primes(max_norm, avoid=(ell,)):
            fd = cd.frobenius(P)
            for role in sorted(_role(fd, ell) - set(found)):
                found[role] = fd
            scanned += 1
            if len(found) == 3 or scanned >= search_bound:
                break
    witnesses = [{"role": r, **found[r].to_json(), **{k: str(v) for k, v in serre_values(found[r], ell).items()}}
                 for r in ("s1", "s2", "t") if r in found]
    status = CERTIFIED if len(found) == 3 else UNDETERMINED
    return Condition(f"prop19_l{ell}", status, witnesses, {"ell": ell, "scanned": scanned})


def mod9_pattern(fd: FrobeniusDatum) -> bool:
    """Characteristic polynomial T^2 - tT + N = (T-7)(T-8) mod 9."""
    return fd.t % 9 == 15 % 9 and fd.N % 9 == 56 % 9


def mod9_certify(cd: CurveData, search_bound: int = 5000, hints: Iterable[PrimeIdeal] = (),
                 max_norm: int = 10**6) -> Condition:
    cands = list(hints)
    scanned = 0
    for P in cands:
        fd = cd.frobenius(P)
        if fd is not None and P.p != 3 and mod9_pattern(fd):
            return Condition("mod9", PER_REFERENCE, [fd.to_json()], {"pattern": "(T-7)(T-8) mod 9"})
    for P in cd.good_primes(max_norm, avoid=(3,)):
        if P.norm % 9 != 2:
            continue
        scanned += 1
        fd = cd.frobenius(P)
        if mod9_pattern(fd):
            return Condition("mod9", PER_REFERENCE, [fd.to_json()],
                             {"pattern": "(T-7)(T-8) mod 9", "scanned": scanned})
        if scanned >= search_bound:
            break
    return Condition("mod9", UNDETERMINED, [], {"scanned": scanned})


def mod8_witness_ok(cd: CurveData, P: PrimeIdeal) -> bool:
    if P.norm % 8 != 5:
        return False
    C = cd.reduced(P)
    return C is not None and full_four_torsion(C)


def mod8_certify(cd: CurveData, search_bound: int = 5000, hints: Iterable[PrimeIdeal] = (),
                 max_norm: int = 10**8) -> Condition:
    scanned = 0
    for P in hints:
        if mod8_witness_ok(cd, P):
            return Condition("mod8", CERTIFIED, [{"prime": P.to_json(), "N": str(P.norm), "full_four_torsion": True}],
                             {"N_mod_8": P.norm % 8})
    for P in cd.good_primes(max_norm, avoid=(2,)):
        if P.norm % 8 != 5:
            continue
        scanned += 1
        if mod8_witness_ok(cd, P):
            return Condition("mod8", CERTIFIED, [{"prime": P.to_json(), "N": str(P.norm), "full_four_torsion": True}],
                             {"N_mod_8": 5, "scanned": scanned})
        if scanned >= search_bound:
            break
    return Condition("mod8", UNDETERMINED, [], {"scanned": scanned})


def mod2_certify(cd: CurveData, budget: int = 200, max_norm: int = 10**5) -> Condition:
    """Surjective mod 2: 2-division cubic without roots mod some good odd prime and non-square disc."""
    v = is_square_in_K(cd.inv.disc)
    disc_ok = v.status == NON_SQUARE
    witness = None
    scanned = 0
    for P in cd.good_primes(max_norm, avoid=(2,)):
        C = cd.reduced(P)
        scanned += 1
        if not roots_deg_le3(C.two_division_cubic(), C.F):
            witness = P
            break
        if scanned >= budget:
            break
    values = {"disc_square_status": v.status, "scanned": scanned}
    wit = [{"irreducible_mod": witness.to_json()}] if witness else []
    if v.witness is not None:
        wit.append({"disc_nonsquare_mod": v.witness.to_json()})
    if witness is not None and disc_ok:
        return Condition("mod2", CERTIFIED, wit, values)
    if v.status == SQUARE:
        return Condition("mod2", FAILED, wit, values, note="discriminant is a square")
    return Condition("mod2", UNDETERMINED, wit, values)


# --- pipelines -------------------------------------------------------------

@dataclass
class SearchConfig:
    max_prime_norm: int = 10**5
    num_sample_primes: int = 12
    witness_budget: int = 48
    point_count_ceiling: int = 1 << 26
    prop19_bound: int = 2000
    mod8_max_norm: int = 10**8
    fast_path: bool = False

    @classmethod
    def from_json(cls, obj: dict | None) -> "SearchConfig":
        obj = obj or {}
        out = cls()
        for k in vars(out):
            if k in obj:
                setattr(out, k, type(getattr(out, k))(obj[k]))
        return out


@dataclass
class Hints:
    exclusion: list = field(default_factory=list)
    prop19: dict = field(default_factory=dict)
    mod9: list = field(default_factory=list)
    mod8: list = field(default_factory=list)

    @classmethod
    def from_json(cls, K: NumberField, obj: dict | None) -> "Hints":
        obj = obj or {}
        return cls([parse_prime(K, x) for x in obj.get("exclusion", [])],
                   {int(l): {r: parse_prime(K, x) for r, x in d.items()} for l, d in obj.get("prop19", {}).items()},
                   [parse_prime(K, x) for x in obj.get("mod9", [])],
                   [parse_prime(K, x) for x in obj.get("mod8", [])])


def _check_condition(cid: str, res, required: bool = True) -> Condition:
    status = {True: CERTIFIED, False: FAILED, None: UNDETERMINED}[res.value]
    return Condition(cid, status, res.evidence, {"note": res.note} if res.note else {}, required)


def _exclusion(cd: CurveData, class_data: ClassData, search: SearchConfig, hints: Hints, mode: str) -> tuple:
    route = "general"
    if mode == FULL2TORS and class_data.trivial_narrow_class and cd.is_semistable() and cd.K.signature[0] >= 1:
        route = "semistable"
    try:
        if route == "semistable":
            ex = exclusion_set_semistable(cd, class_data, search.num_sample_primes, hints.exclusion,
                                          search.max_prime_norm)
        else:
            ex = exclusion_set_general(cd, class_data, mode, search.num_sample_primes, hints.exclusion,
                                       search.max_prime_norm)
    except HypothesisError as e:
        return None, Condition("exclusion", UNDETERMINED, [], {}, note=str(e))
    return ex, Condition("exclusion", CERTIFIED, [s.to_json() for s, _ in ex.samples], ex.to_json())


def certify_full_2tors(E: CurveModel, class_data: ClassData, search: SearchConfig | None = None,
                       hints: Hints | None = None) -> Certificate:
    """Maximal image V1(2) x prod GL2(Z_l) for a curve with full 2-torsion."""
    search = search or SearchConfig()
    hints = hints or Hints()
    if E.roots is None:
        raise HypothesisError("curve must be given by its three 2-torsion roots")
    cert = Certificate(E.to_json(), kind="full2tors")
    K = E.field
    s3 = galois_group_is_S3(K)
    cert.add(Condition("cond3_K_cap_Qcyc", CERTIFIED if s3 else FAILED, [], {"disc_K": str(K.disc_K), "S3": s3}))
    cd = CurveData(E, search.point_count_ceiling)
    m4 = cert.add(_check_condition("mod4_degree_16", mod4_degree_is_16(E, search.witness_budget)))
    cert.add(_check_condition("cond2_E4_cap_Kcyc", cyclotomic_intersection_ok(E, search.witness_budget,
                                                                           fast_path=search.fast_path)))
    ex, cond = _exclusion(cd, class_data, search, hints, FULL2TORS)
    cert.add(cond)
    if ex is not None:
        for ell in sorted(l for l in ex.residual if l >= 5):
            cert.add(prop19_certify(cd, ell, search.prop19_bound, hints.prop19.get(ell), search.max_prime_norm * 10))
    cert.add(mod9_certify(cd, hints=hints.mod9, max_norm=search.max_prime_norm * 10))
    if m4.status == CERTIFIED:
        cert.add(mod8_certify(cd, hints=hints.mod8, max_norm=search.mod8_max_norm))
    else:
        cert.add(Condition("mod8", UNDETERMINED, [], {}, note="mod-4 image not certified maximal"))
    return cert


def certify_all_mod_l(E: CurveModel, class_data: ClassData, search: SearchConfig | None = None,
                      hints: Hints | None = None) -> Certificate:
    """Mod-l surjectivity for every l, plus the field conditions of the torsion-free criterion."""
    search = search or SearchConfig()
    hints = hints or Hints()
    cert = Certificate(E.to_json(), kind="all_mod_l")
    K = E.field
    s3 = galois_group_is_S3(K)
    cert.add(Condition("K_cap_Qcyc", CERTIFIED if s3 else FAILED, [], {"disc_K": str(K.disc_K), "S3": s3}))
    cd = CurveData(E, search.point_count_ceiling)
    sq = sqrt_disc_in_cyclotomic(E, search.witness_budget)
    status = {False: CERTIFIED, True: FAILED, None: UNDETERMINED}[sq.value]
    cert.add(Condition("sqrt_disc_not_in_Qcyc", status, sq.evidence, {"note": sq.note}))
    ex, cond = _exclusion(cd, class_data, search, hints, GENERAL)
    cert.add(cond)
    if ex is not None:
        for ell in sorted(l for l in ex.residual if l >= 5):
            cert.add(prop19_certify(cd, ell, search.prop19_bound, hints.prop19.get(ell), search.max_prime_norm * 10))
        if 3 in ex.residual:
            cert.add(Condition("mod3", UNDETERMINED, [], {}, note="3 not excluded and Serre's criterion needs l >= 5"))
    cert.add(mod2_certify(cd, max_norm=search.max_prime_norm))
    cert.add(Condition("adelic_assembly", PER_REFERENCE, [], {}, required=False,
                       note="2-adic and 3-adic lifting for torsion-free curves follows the reference argument"))
    return cert
