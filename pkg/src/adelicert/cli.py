"""Command-line front end. Every command prints one JSON document on stdout.

Exit codes: 0 certified or ok, 1 undetermined, 2 a condition failed, 3 bad input.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__, config as cfgmod, family, glq, seven
from .certify import (CurveData, HypothesisError, certify_all_mod_l, certify_full_2tors,
                      exit_code, parse_prime)
from .ellcurve import classify_reduction
from .ideals import split_prime

EXIT_OK, EXIT_UNDETERMINED, EXIT_FAILED, EXIT_INPUT = 0, 1, 2, 3
DEFAULT_CONFIG = "example_1_3.json"
SEVEN_CONFIG = "example_1_7.json"


class InputError(ValueError):
    pass


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=False, default=str)
    sys.stdout.write("\n")


def _raw_config(path: str | None, default: str) -> dict:
    if path is None:
        return cfgmod.bundled(default)
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise cfgmod.ConfigError(str(e)) from e


def _config(args) -> cfgmod.Config:
    return cfgmod.parse(_raw_config(args.config, DEFAULT_CONFIG))


def _prime_arg(K, text: str):
    """A prime as JSON: {"p": 13, "gen": [..]} or a generator list."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"prime must be JSON: {e}") from e
    try:
        return parse_prime(K, obj)
    except (ValueError, KeyError, TypeError) as e:
        raise InputError(str(e)) from e


def _curve(cfg: cfgmod.Config):
    if cfg.curve is None:
        raise InputError("config has no curve")
    return cfg.curve


# --- commands ----------------------------------------------------------------

def cmd_split(args) -> int:
    cfg = _config(args)
    _emit({"p": args.p, "primes": [P.to_json() for P in split_prime(cfg.field, args.p)]})
    return EXIT_OK


def cmd_reduce(args) -> int:
    cfg = _config(args)
    P = _prime_arg(cfg.field, args.prime)
    _emit({"prime": P.to_json(), "reduction": classify_reduction(_curve(cfg), P).to_json()})
    return EXIT_OK


def cmd_count(args) -> int:
    cfg = _config(args)
    P = _prime_arg(cfg.field, args.prime)
    cd = CurveData(_curve(cfg), cfg.search.point_count_ceiling)
    fd = cd.frobenius(P)
    if fd is None:
        _emit({"prime": P.to_json(), "error": "bad reduction"})
        return EXIT_INPUT
    out = fd.to_json()
    if args.ext > 1:
        out["ext"] = args.ext
        out["count_ext"] = str(fd.count_ext(args.ext))
    _emit(out)
    return EXIT_OK


def _certify(args, fn) -> int:
    cfg = _config(args)
    if cfg.class_data is None:
        raise InputError("config has no class_data")
    cert = fn(_curve(cfg), cfg.class_data, cfg.search, cfg.hints)
    _emit(cert.to_json(timestamp=not args.no_timestamp))
    return exit_code(cert.verdict)


def cmd_certify_2tors(args) -> int:
    return _certify(args, certify_full_2tors)


def cmd_certify_mod_l(args) -> int:
    return _certify(args, certify_all_mod_l)


def cmd_family(args) -> int:
    if args.action == "assemble":
        fam = family.assemble_table()
        _emit({**fam.to_json(), "matches_target": [fam.M == family.TARGET_M,
                                                    fam.b0 == family.TARGET_B % family.TARGET_M,
                                                    fam.c0 == family.TARGET_C % family.TARGET_M]})
        return EXIT_OK
    if args.action == "scan":
        if args.n is None:
            raise InputError("scan needs a prime")
        _emit({"p": args.n, "excluded": sorted(list(bc) for bc in family.intersection_exclusions(args.n))})
        return EXIT_OK
    count = args.n or 1
    reports = family.family_spot_check(family.assemble_table(), count)
    _emit({"members": reports})
    return EXIT_OK if all(r["ok"] for r in reports) else EXIT_FAILED


def cmd_seven(args) -> int:
    raw = _raw_config(args.config, SEVEN_CONFIG)
    try:
        E = seven.QCurve(*(int(a) for a in raw["curve_q"]["ainvs"]))
        ell = int(raw.get("ell", 7))
        bound = int(raw.get("search", {}).get("max_prime", 20000))
        hints = {k: [int(v)] for k, v in raw.get("hints", {}).items()}
    except (KeyError, TypeError, ValueError) as e:
        raise cfgmod.ConfigError(f"malformed config: {e!r}") from e
    cert = seven.certify_half_borel(E, ell, bound, hints)
    _emit(cert.to_json(timestamp=not args.no_timestamp))
    return exit_code(cert.verdict)


def cmd_glq(args) -> int:
    res = glq.verify_all()
    _emit(res)
    return EXIT_OK if all(res.values()) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="adelicert", description="Certify maximal Galois images of elliptic curves over cubic fields.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--config", help="config JSON (default: a bundled example)")
    ap.add_argument("--transcript", action="store_true", help="log every witness check to stderr")
    ap.add_argument("--no-timestamp", action="store_true", help="omit the certificate timestamp")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("split", help="primes of O_K above p")
    p.add_argument("p", type=int)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("reduce", help="reduction type at a prime")
    p.add_argument("prime", help='JSON, e.g. \'{"p": 13, "gen": [-7, 1, 0]}\'')
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("count", help="#E(k_v) at a prime of good reduction")
    p.add_argument("prime")
    p.add_argument("--ext", type=int, default=1, help="also count over the degree-n extension")
    p.set_defaults(func=cmd_count)

    sub.add_parser("certify-2tors", help="full 2-torsion criterion").set_defaults(func=cmd_certify_2tors)
    sub.add_parser("certify-mod-l", help="mod-l surjectivity for all l").set_defaults(func=cmd_certify_mod_l)

    p = sub.add_parser("family", help="the congruence family")
    p.add_argument("action", choices=["assemble", "scan", "spot-check"])
    p.add_argument("n", type=int, nargs="?")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("seven", help="half-Borel certification over Q")
    p.add_argument("action", choices=["certify"])
    p.set_defaults(func=cmd_seven)

    p = sub.add_parser("glq", help="finite group checks")
    p.add_argument("action", choices=["verify"])
    p.set_defaults(func=cmd_glq)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.transcript:
        h = logging.StreamHandler(sys.stderr)
        h.setFormatter(logging.Formatter("%(message)s"))
        tl = logging.getLogger("adelicert.transcript")
        tl.addHandler(h)
        tl.setLevel(logging.INFO)
    try:
        return args.func(args)
    except (cfgmod.ConfigError, InputError, HypothesisError) as e:
        _emit({"error": str(e)})
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
