"""Acceptance criteria 1-9. Each test records one PASS/FAIL line.

Criteria whose printed values disagree with exact recomputation are strict xfails:
they fail for real, and would turn red if the mismatch ever disappeared.
"""
import dataclasses
import subprocess
import sys
import time
from pathlib import Path

import pytest

from adelicert import family, glq
from adelicert.certify import (CERTIFIED, FULL2TORS, GENERAL, CurveData, certify_all_mod_l, certify_full_2tors,
                               conductor_modulus, exclusion_set_general, unit_bound)
from adelicert.ideals import prime_from_generator
from adelicert.intutil import prime_factors
from adelicert.seven import (FrobQDatum, QCurve, certify_half_borel, step1_witness, step2_witness,
                             step3_witness, unipotent_mod)

TESTS = Path(__file__).parent


# --- 1, 2: full 2-torsion example over x^3 + x + 1 -------------------------

@pytest.fixture(scope="module")
def run13(cfg13):
    t = time.perf_counter()
    cert = certify_full_2tors(cfg13.curve, cfg13.class_data, cfg13.search, cfg13.hints)
    return cert, time.perf_counter() - t


def test_criterion_1_example_full_2tors(cfg13, run13, acceptance):
    cert, elapsed = run13
    K = cfg13.field
    cd = CurveData(cfg13.curve)
    fd = cd.frobenius(prime_from_generator(K, K.element([1, -2, 0])))
    count_ok = fd.count == 16

    mod9 = cert.get("mod9")
    w9 = mod9.witnesses[0]
    P9 = prime_from_generator(K, K.element([2, 0, 3]))
    same9 = (w9["prime"]["p"], w9["prime"]["g"]) == (P9.p, P9.to_json()["g"])
    fd9 = cd.frobenius(P9)
    # (T-7)(T-8) = T^2 - 15T + 56
    mod9_ok = same9 and fd9.t % 9 == 15 % 9 and fd9.N % 9 == 56 % 9

    w8 = cert.get("mod8").witnesses[0]
    mod8_ok = (w8["prime"]["p"] == 157 and w8["N"] == "3869893" and 3869893 % 8 == 5
               and w8["full_four_torsion"] is True and cert.get("mod8").status == CERTIFIED)

    rows = {w["role"]: (int(w["t2_minus_4N"]), int(w["u"]), int(w["u2_3u_1"]))
            for w in cert.get("prop19_l31").witnesses}
    rows_ok = rows == {"s1": (3, 24, 9), "s2": (14, 17, 22), "t": (17, 19, 26)}

    ok = (cert.verdict == CERTIFIED and count_ok and mod9_ok and mod8_ok and rows_ok and elapsed <= 600)
    acceptance(1, ok, f"verdict={cert.verdict} count16={count_ok} mod9@29={mod9_ok} mod8@157={mod8_ok} "
                      f"l31 rows={rows_ok} ({elapsed:.1f}s)")
    assert ok


def test_criterion_2_cyclotomic_scan(run13, acceptance):
    cert, _ = run13
    cond = cert.get("cond2_E4_cap_Kcyc")
    pairs = len(cond.witnesses)
    closed = all(w["status"] == "NonSquare" and "witness_prime" in w for w in cond.witnesses)
    ok = cond.status == CERTIFIED and pairs == 465 and closed
    acceptance(2, ok, f"{pairs} pairs, all closed by a non-square witness: {closed}")
    assert ok


# --- 3: finite group checks -----------------------------------------------

def test_criterion_3_glq(acceptance):
    t = time.perf_counter()
    res = glq.verify_all()
    elapsed = time.perf_counter() - t
    v2 = len(glq.level_group(2, 3)) == 16
    ok = all(res.values()) and v2 and elapsed < 1.0
    acceptance(3, ok, f"{res} |V2/V3|=16: {v2} ({elapsed:.2f}s)")
    assert ok


# --- 4, 5: the congruence family ------------------------------------------

def test_criterion_4_family_machinery(acceptance):
    t = time.perf_counter()
    table_ok = True
    extras = {}
    for p in (3, 5, 11, 17, 31, 787, 827):
        got = family.intersection_exclusions(p)
        printed = family.PRINTED_EXCLUSIONS[p]
        extra = got - printed
        # every printed pair must appear; an extra pair must be confirmed by the direct exact check
        table_ok &= printed <= got and all(family.delta_in_pOK(b, c, p) for b, c in extra)
        if extra:
            extras[p] = sorted(extra)
    support = prime_factors(family.ELIMINATION_CONSTANT) == [3, 5, 11, 17, 113, 787, 827]
    fam = family.assemble_table()
    crt_ok = (fam.M == family.TARGET_M and fam.b0 == family.TARGET_B % fam.M
              and fam.c0 == family.TARGET_C % fam.M)
    rows_ok = fam.reduces_to_components() and fam.b0 % 12 == 5 and fam.c0 % 12 == 4
    elapsed = time.perf_counter() - t
    ok = table_ok and support and crt_ok and rows_ok and elapsed <= 300
    acceptance(4, ok, f"table={table_ok} (extra verified pairs {extras}) support={support} "
                      f"crt={crt_ok} rows={rows_ok} ({elapsed:.1f}s)")
    assert ok


@pytest.mark.xfail(strict=True, reason="the fixed mod-4 witness primes give F2 rank 3 for the smallest member")
def test_criterion_5_family_spot_check(acceptance):
    fam = family.assemble_table()
    rep = family.family_spot_check(fam, 1)[0]
    parts = {k: v["ok"] for k, v in rep.items() if isinstance(v, dict) and "ok" in v}
    wanted = ["semistable", "mod4", "count_over_3", "mod8_over_29", "mod9_over_47", "mod31"]
    ok = all(parts[k] for k in wanted)
    acceptance(5, ok, f"b={rep['b']} c={rep['c']} {parts} mod4 rank={rep['mod4'].get('rank')} "
                      f"direct degree 16={rep['mod4']['direct_degree_16']}")
    assert ok


# --- 6: l = 7 over Q -------------------------------------------------------

def test_criterion_6_seven(acceptance):
    t = time.perf_counter()
    E = QCurve(1, -1, 1, -19353, 958713)
    d = {p: FrobQDatum.from_curve(E, p) for p in (61, 971, 127, 19993)}
    checks = {
        61: step1_witness(d[61], 7),
        971: step2_witness(d[971], 7),
        127: unipotent_mod(d[127], 7) and (1 + 127 - d[127].a_p) % 49 != 0,
        19993: unipotent_mod(d[19993], 7) and (1 + 19993 - d[19993].a_p) % 49 == 0 and step3_witness(d[19993], 7, E),
    }
    cert = certify_half_borel(E, 7, 20000, {"step1": [61], "step2": [971], "cartan": [127], "step3": [19993]})
    found = {c: cert.get(c).witnesses[0]["p"] for c in ("step1", "step2", "cartan_ruled_out", "step3")}
    elapsed = time.perf_counter() - t
    ok = (all(checks.values()) and cert.verdict == CERTIFIED
          and found == {"step1": 61, "step2": 971, "cartan_ruled_out": 127, "step3": 19993} and elapsed <= 60)
    acceptance(6, ok, f"{checks} a_p={ {p: x.a_p for p, x in d.items()} } verdict={cert.verdict} ({elapsed:.1f}s)")
    assert ok


# --- 7: unit bound and residual set, semistable narrow class 2 example -----

@pytest.mark.xfail(strict=True, reason="exact norm of the unit-bound product is 847 = 7 * 11^2, not 539")
def test_criterion_7_unit_bound(cfg16, acceptance):
    K = cfg16.field
    b = K.gen
    norm = abs(((-b - 1) * (b * b - 1)).norm())
    ub = unit_bound(cfg16.class_data, conductor_modulus(CurveData(cfg16.curve), GENERAL).finite_part)
    cert = certify_all_mod_l(cfg16.curve, cfg16.class_data, cfg16.search, cfg16.hints)
    residual = cert.get("exclusion").values["residual"]
    closed = all(cert.get(f"prop19_l{l}").status == CERTIFIED for l in (7, 11, 1823))
    residual_ok = residual == [7, 11, 1823] and closed
    ok = norm == 539 and ub.B == 539 and residual_ok
    acceptance(7, ok, f"|N| = {norm} (B = {ub.B}, support {ub.primes}) residual {residual} closed={closed}")
    assert ok


# --- 8: non-semistable full 2-torsion example ------------------------------

PRINTED_EXCEPTIONS_15 = {2, 5, 17, 41, 73, 211, 503, 2143, 2269, 3907, 5449, 31741, 40471, 493333, 938251,
                         1225603, 1315849, 37012153}


def _exceptions_15(cfg, d):
    cls = dataclasses.replace(cfg.class_data, d=d, trivial_narrow_class=d == 1)
    ex = exclusion_set_general(CurveData(cfg.curve), cls, FULL2TORS, cfg.search.num_sample_primes,
                               cfg.hints.exclusion, cfg.search.max_prime_norm)
    return ex


@pytest.mark.xfail(strict=True, reason="with the narrow class number d = 1 the list has dr/k = 4 factors, not 8")
def test_criterion_8_exception_set(cfg15, acceptance):
    d = cfg15.class_data.d
    ex = _exceptions_15(cfg15, d)
    ub = ex.to_json()["unit_bound"]
    flagged = set(ex.special) | set(ex.residual)
    every_listed_flagged = PRINTED_EXCEPTIONS_15 <= flagged
    alt = _exceptions_15(cfg15, 2).residual == PRINTED_EXCEPTIONS_15
    ok = ex.residual == PRINTED_EXCEPTIONS_15 and every_listed_flagged
    acceptance(8, ok, f"d={d} dr/k={ub['dr_over_k']} computed={sorted(ex.residual)} "
                      f"missing={sorted(PRINTED_EXCEPTIONS_15 - ex.residual)}; dr/k=8 reproduces the list: {alt}")
    assert ok


# --- 9: property suites ----------------------------------------------------

def test_criterion_9_properties(acceptance):
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
                           str(TESTS / "test_properties.py")], capture_output=True, text=True)
    tail = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
    ok = proc.returncode == 0
    acceptance(9, ok, tail)
    assert ok, proc.stdout[-2000:]
