"""The congruence family E_{b,c}: y^2 = x(x - (a^2 + b a + c))(x - 16(a^2 + a + 1)) over Q(a), a^3 + a + 1 = 0."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import sympy

from .certify import CurveData, _role, mod8_witness_ok, mod9_pattern, serre_values
from .ellcurve import CurveModel, classify_reduction, invariants
from .finitefield import euler_is_square
from .fourtorsion import halving_discriminants, mod4_degree_is_16
from .ideals import Ideal, prime_from_generator, split_prime, valuation
from .intutil import crt_pair, factorint, prime_factors
from .numberfield import NumberField

SCAN_PRIMES = (3, 5, 11, 17, 31, 113, 787, 827)
ELIMINATION_CONSTANT = 618889059855

# excluded (b, c) residues per prime, as printed
PRINTED_EXCLUSIONS = {
    3: {(1, 1), (1, 2)}, 5: {(1, 1)}, 11: {(2, 5)}, 17: {(4, 5)},
    31: {(14, 11), (23, 6), (25, 9)}, 787: {(467, 91)}, 827: {(626, 280)},
}

# (condition, modulus, b, c) rows used for the CRT assembly
TABLE_ROWS = [
    ("semistable", 12, 5, 4),
    ("mod9", 47, 17, 4),
    ("mod4", 7 * 13 * 31, 3699, 4183),
    ("mod31", 3 * 5 * 11, 17, 4),
    ("mod8", 29, 17, 4),
    ("l-adic", 3, 2, 1),
    ("cyc3", 3, 2, 1),
    ("cyc5", 5, 2, 4),
    ("cyc11", 11, 6, 4),
    ("cyc17", 17, 0, 0),
    ("cyc31", 31, 10, 29),
    ("cyc787", 787, 0, 0),
    ("cyc827", 827, 0, 0),
]

TARGET_M = 2**2 * 3 * 5 * 7 * 11 * 13 * 17 * 29 * 31 * 47 * 787 * 827
TARGET_B = 17 * 37 * 257 * 509**2 * 787 * 827
TARGET_C = 2**4 * 17 * 787 * 827 * 4657 * 15649

# witness primes as generators in power coordinates
MOD4_WITNESSES = [("p1", (-3, 1, 0)), ("p2", (7, 0, 0)), ("p3", (-1, 3, -1)), ("p4", (-3, 4, 1))]
PRINTED_MOD4_MODULUS = 7 * 23 * 31
COUNT_PRIME = (2, 1, 1)        # a^2 + a + 2, over 3
MOD8_PRIME = (2, 0, 3)         # 3a^2 + 2, over 29
MOD9_PRIME = (4, 1, 2)         # 2a^2 + a + 4, over 47
MOD31_PRIMES = [(-3, 1, -5), (5, 0, 0), (2, 1, 1)]


@lru_cache(maxsize=1)
def family_field() -> NumberField:
    return NumberField((1, 1, 0), label="x^3+x+1")


def family_curve(b: int, c: int) -> CurveModel:
    K = family_field()
    return CurveModel.from_roots(K, K.zero, K.element([c, b, 1]), K.element([16, 16, 16]))


def semistable_congruence(b: int, c: int) -> bool:
    b, c = b % 12, c % 12
    return (b == 5 and c in (4, 8)) or (b == 9 and c == 4)


# --- exclusion scans --------------------------------------------------------

def _mul_mod(x, y, p):
    """Product in Z[a]/p with a^3 = -a - 1; x, y are (3, n) int64 arrays."""
    x0, x1, x2 = x
    y0, y1, y2 = y
    c0 = x0 * y0 % p
    c1 = (x0 * y1 + x1 * y0) % p
    c2 = (x0 * y2 + x1 * y1 + x2 * y0) % p
    c3 = (x1 * y2 + x2 * y1) % p
    c4 = x2 * y2 % p
    # a^3 = -a - 1, a^4 = -a^2 - a
    return np.stack([(c0 - c3) % p, (c1 - c3 - c4) % p, (c2 - c4) % p])


def delta_mod_p(p: int):
    """Power coordinates of Delta_{b,c} mod p for all 0 <= b, c < p, as arrays indexed [coord, b, c]."""
    if p > 3037:
        raise ValueError("p too large for an int64 scan")
    b, c = np.meshgrid(np.arange(p, dtype=np.int64), np.arange(p, dtype=np.int64), indexing="ij")
    b, c = b.ravel(), c.ravel()
    one = np.ones_like(b)
    A = np.stack([c % p, b % p, one])
    B = np.stack([16 * one % p, 16 * one % p, 16 * one % p])
    C = (A - B) % p
    ABC = _mul_mod(_mul_mod(A, B, p), C, p)
    D = _mul_mod(ABC, ABC, p) * 16 % p
    return D.reshape(3, p, p)


def intersection_exclusions(p: int) -> set[tuple[int, int]]:
    """(b, c) mod p with Delta_{b,c} in p O_K."""
    D = delta_mod_p(p)
    zero = (D[0] == 0) & (D[1] == 0) & (D[2] == 0)
    return {(int(b), int(c)) for b, c in zip(*np.nonzero(zero))}


def delta_in_pOK(b: int, c: int, p: int) -> bool:
    E = family_curve(b, c)
    d = invariants(E).disc
    return all(int(v) % p == 0 for v in d.integral_coords())


# --- symbolic elimination ---------------------------------------------------

def elimination_data() -> dict:
    """Checks the expansion of d3 in (x, y, z), the three linear combinations and the final constant.

    The printed x + y a + z a^2 is d3 / 4; the unit factor is irrelevant for divisibility by odd p.
    """
    a, b, c = sympy.symbols("a b c")
    f = a**3 + a + 1
    A = a**2 + b * a + c
    w = (b + c) * a**2 + (c - 2) * a + (c - b - 1)
    d3 = sympy.rem(sympy.expand(4 * A**2 - 64 * w), f, a)
    x = 16 + 14 * b - 16 * c + c**2
    y = 31 - 16 * c + 2 * b * c - 2 * b
    z = b**2 - 16 * b - 14 * c - 1
    expansion_ok = sympy.expand(d3 - 4 * (x + y * a + z * a**2)) == 0
    combos = [
        ((28, 8 - b, -2 + 2 * c), 698 + 377 * b - 550 * c),
        ((-2 * b + 16, c - 15, 28), -237 - 226 * b - 377 * c),
        ((-4 * z - 56 * c - 260, y - 28 * b + 586, 56 * b + 4), 15027 - 4844 * b - 6328 * c),
    ]
    combo_ok = [sympy.expand(cx * x + cy * y + cz * z - target) == 0 for (cx, cy, cz), target in combos]
    L = [t for _, t in combos]
    M = sympy.Matrix([[sympy.Poly(t, b, c).coeff_monomial(m) for m in (1, b, c)] for t in L])
    # p | L_i(1, b, c) for all i forces p | det, since (1, b, c) is nonzero mod p
    det = int(M.det())
    return {
        "expansion_ok": expansion_ok, "combinations_ok": combo_ok,
        "det": det, "det_primes": prime_factors(abs(det)),
        "det_divides_constant": ELIMINATION_CONSTANT % det == 0,
        "cofactor": ELIMINATION_CONSTANT // abs(det) if det else None,
        "constant_primes": prime_factors(ELIMINATION_CONSTANT),
    }


def linear_elimination_check() -> bool:
    d = elimination_data()
    return (d["expansion_ok"] and all(d["combinations_ok"]) and d["det_divides_constant"]
            and d["constant_primes"] == [3, 5, 11, 17, 113, 787, 827])


# --- CRT assembly -----------------------------------------------------------

class CRTClash(ValueError):
    pass


@dataclass
class CongruenceFamily:
    M: int
    b0: int
    c0: int
    components: list = field(default_factory=list)

    def reduces_to_components(self) -> bool:
        return all(self.b0 % m == b % m and self.c0 % m == c % m for _, m, b, c in self.components)

    def members(self, count: int) -> list[tuple[int, int]]:
        """The count smallest nonnegative (b, c) in the family, ordered by (b + c, b)."""
        out = []
        s = 0
        while len(out) < count:
            for i in range(s + 1):
                out.append((self.b0 + i * self.M, self.c0 + (s - i) * self.M))
            s += 1
        return sorted(out, key=lambda bc: (bc[0] + bc[1], bc[0]))[:count]

    def to_json(self) -> dict:
        return {"M": str(self.M), "b0": str(self.b0), "c0": str(self.c0),
                "components": [{"id": i, "modulus": str(m), "b": str(b % m), "c": str(c % m)}
                               for i, m, b, c in self.components]}


def crt_assemble(components) -> CongruenceFamily:
    """Combine (id, modulus, b, c) rows; clashes on a shared prime power raise CRTClash."""
    comps = [(i, int(m), int(b), int(c)) for i, m, b, c in components]
    if not comps:
        raise ValueError("no components")
    local: dict[int, tuple[int, int, int, str]] = {}
    for cid, m, b, c in comps:
        for p, k in factorint(m).items():
            q = p**k
            rb, rc = b % q, c % q
            if p in local:
                k0, b0, c0, id0 = local[p]
                lo = p ** min(k, k0)
                if b0 % lo != rb % lo or c0 % lo != rc % lo:
                    raise CRTClash(f"{cid} and {id0} disagree modulo {lo}")
                if k <= k0:
                    continue
            local[p] = (k, rb, rc, cid)
    M, b0, c0 = 1, 0, 0
    for p, (k, rb, rc, _) in sorted(local.items()):
        b0, M2 = crt_pair(b0, M, rb, p**k)
        c0, _ = crt_pair(c0, M, rc, p**k)
        M = M2
    return CongruenceFamily(M, b0, c0, comps)


def assemble_table() -> CongruenceFamily:
    return crt_assemble(TABLE_ROWS)


# --- per-member checks ------------------------------------------------------

def semistability_report(b: int, c: int) -> dict:
    """Semistability from the ideal (c4, Delta): only its primes can be additive."""
    E = family_curve(b, c)
    K = E.field
    inv = invariants(E)
    G = Ideal.from_generators(K, [inv.c4, inv.disc])
    primes = prime_factors(G.norm)
    types = {}
    for p in sorted(set(primes) | {2}):
        for P in split_prime(K, p):
            if valuation(inv.disc, P) > 0:
                types[f"{p}:{','.join(P.gen.to_json())}"] = classify_reduction(E, P).type
    ok = all(t in ("good", "multiplicative") for t in types.values())
    return {"ok": ok, "congruence": semistable_congruence(b, c), "gcd_norm_primes": primes, "types": types}


def mod4_witness_primes():
    K = family_field()
    return [prime_from_generator(K, K.element(g)) for _, g in MOD4_WITNESSES]


def mod4_transfer_modulus() -> int:
    """Product of the residue characteristics of the witness primes; b, c mod this fix every residue."""
    out = 1
    for p in sorted({P.p for P in mod4_witness_primes()}):
        out *= p
    return out


def mod4_matrix(b: int, c: int, witnesses=MOD4_WITNESSES) -> list[list[int]]:
    """Rows: witness primes; columns: d1..d4; entry 1 where d_j is a non-square mod the prime."""
    K = family_field()
    E = family_curve(b, c)
    hd = halving_discriminants(*E.roots)
    rows = []
    for _, g in witnesses:
        P = prime_from_generator(K, K.element(g))
        row = []
        for d in hd.T:
            r = P.residue(d)
            row.append(None if r.is_zero() else int(not euler_is_square(r)))
        rows.append(row)
    return rows


def _rank_f2(rows) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncol = len(m[0]) if m else 0
    for col in range(ncol):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                m[i] = [(u + v) % 2 for u, v in zip(m[i], m[rank])]
        rank += 1
    return rank


def mod4_witness_check(b: int, c: int, direct: bool = False) -> dict:
    """All 15 products of d1..d4 are non-squares modulo the fixed witness primes.

    Equivalent to the 4x4 non-square pattern having full rank over F_2. With direct=True the
    degree-16 question is also settled independently of the fixed primes.
    """
    rows = mod4_matrix(b, c)
    out = {"matrix": rows}
    if any(v is None for r in rows for v in r):
        out.update(ok=False, note="a d_i vanishes at a witness prime")
    else:
        out.update(rank=_rank_f2(rows))
        out["ok"] = out["rank"] == 4
    if direct:
        out["direct_degree_16"] = mod4_degree_is_16(family_curve(b, c)).value
    return out


def two_adic_bookkeeping(b: int, c: int) -> dict:
    """Valuations at (2) of the printed d1, d2, d3, d4 and of Delta.

    d4 = 2^6 * (a 2-unit) when b is odd, so Delta = d4^2 has valuation 12.
    """
    K = family_field()
    a = K.gen
    w = (b + c) * a**2 + (c - 2) * a + (c - b - 1)
    d1 = 64 * w
    d2 = 64 * (16 * (1 + a + a * a) ** 2 - w)
    A = a * a + b * a + c
    d3 = 4 * A * A - 64 * w
    P2 = split_prime(K, 2)[0]
    d4 = 64 * A * (a * a + a + 1) * (15 * a * a + (16 - b) * a + (16 - c))
    vals = [valuation(x, P2) for x in (d1, d2, d3, d4, invariants(family_curve(b, c)).disc)]
    return {"ok": vals == [6, 6, 2, 6, 12], "valuations": vals}


def cyc_check(b: int, c: int) -> dict:
    hits = {p: delta_in_pOK(b, c, p) for p in SCAN_PRIMES}
    return {"ok": not any(hits.values()), "delta_in_pOK": {str(p): v for p, v in hits.items()}}


def section34_checks(b: int, c: int) -> dict:
    K = family_field()
    cd = CurveData(family_curve(b, c))
    out = {}
    P3 = prime_from_generator(K, K.element(COUNT_PRIME))
    fd = cd.frobenius(P3)
    out["count_over_3"] = {"ok": fd is not None and fd.count == 8, "count": None if fd is None else fd.count}
    P29 = prime_from_generator(K, K.element(MOD8_PRIME))
    out["mod8_over_29"] = {"ok": mod8_witness_ok(cd, P29), "N": P29.norm}
    P47 = prime_from_generator(K, K.element(MOD9_PRIME))
    fd47 = cd.frobenius(P47)
    out["mod9_over_47"] = {"ok": fd47 is not None and mod9_pattern(fd47),
                           "t": None if fd47 is None else fd47.t}
    roles = set()
    data = []
    for g in MOD31_PRIMES:
        P = prime_from_generator(K, K.element(g))
        f = cd.frobenius(P)
        if f is not None:
            roles |= _role(f, 31)
            data.append({"N": f.N, "t": f.t, **serre_values(f, 31)})
    out["mod31"] = {"ok": roles >= {"s1", "s2", "t"}, "data": data}
    return out


def family_spot_check(fam: CongruenceFamily, count: int = 1, members=None) -> list[dict]:
    reports = []
    for b, c in (members or fam.members(count)):
        rep = {"b": str(b), "c": str(c)}
        rep["semistable"] = semistability_report(b, c)
        rep["mod4"] = mod4_witness_check(b, c, direct=True)
        rep["two_adic"] = two_adic_bookkeeping(b, c)
        rep["cyc"] = cyc_check(b, c)
        rep.update(section34_checks(b, c))
        rep["ok"] = all(v["ok"] for v in rep.values() if isinstance(v, dict))
        reports.append(rep)
    return reports
