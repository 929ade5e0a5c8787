"""Command-line interface; every command prints one canonical JSON report.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Any

from . import __version__
from .acm import (OutOfScope, check_dp9, classify_dp9, classify_general, classify_genus2,
                  classify_quartic_class)
from .enumeration import SliceQuery, enumerate_slice
from .geometry import is_ample
from .lattice import (LatticeError, LatticeSpec, NotTwoElementary, all_pairings_even, is_even,
                      load_lattice, scale, signature, two_elementary_invariants)
from .nikulin import builtin, builtin_lattices
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

TABLES = ("auto", "genus2", "quartic", "general", "dp9")


class InputError(Exception):
    pass


def canonical_json(obj: Any) -> str:
    """Sorted keys, compact separators, ASCII only; floats are rejected."""
    _reject_floats(obj)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"


def _reject_floats(obj: Any):
    if isinstance(obj, float):
        raise TypeError("reports must not contain floats")
    if isinstance(obj, dict):
        for v in obj.values():
            _reject_floats(v)
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            _reject_floats(v)


def open_lattice(spec: str) -> LatticeSpec:
    if spec.startswith("builtin:"):
        return builtin(spec.split(":", 1)[1])
    if not Path(spec).exists():
        raise InputError(f"no such lattice file: {spec}")
    return load_lattice(spec)


def parse_class(lat: LatticeSpec, text: str) -> tuple[int, ...]:
    """A named class (``X``, ``2*X``, ``-D1``) or comma-separated coordinates."""
    text = text.strip()
    if "," in text or text.lstrip("-").isdigit():
        try:
            coords = tuple(int(t) for t in text.split(","))
        except ValueError:
            raise InputError(f"cannot parse class {text!r}") from None
        return lat.check(coords)
    factor = 1
    if "*" in text:
        head, text = text.split("*", 1)
        try:
            factor = int(head)
        except ValueError:
            raise InputError(f"cannot parse multiplier in {head!r}") from None
    elif text.startswith("-"):
        factor, text = -1, text[1:]
    return scale(factor, lat.cls(text))


def fingerprint(lat: LatticeSpec) -> dict:
    out = {"name": lat.name, "rho": lat.rank, "a": None, "delta": None,
           "gram_sha256": lat.fingerprint()}
    try:
        inv = two_elementary_invariants(lat)
        out["a"], out["delta"] = inv.a, inv.delta
    except LatticeError:
        pass
    return out


def cmd_lattice_info(lat: LatticeSpec, args) -> tuple[dict, int]:
    result: dict[str, Any] = {
        "rank": lat.rank,
        "basis": list(lat.basis),
        "signature": list(signature(lat)),
        "even": is_even(lat),
        "all_pairings_even": all_pairings_even(lat),
    }
    try:
        inv = two_elementary_invariants(lat)
        result["two_elementary"] = {"rho": inv.rho, "a": inv.a, "delta": inv.delta}
    except NotTwoElementary as exc:
        result["two_elementary"] = {"error": str(exc)}
    except LatticeError as exc:
        result["two_elementary"] = {"error": str(exc)}
    if lat.ample_ref is not None:
        verdict = is_ample(lat, lat.ample_ref)
        result["ample_ref"] = {"class": list(lat.ample_ref), "ample": str(verdict), "reason": verdict.reason}
    result["classes"] = {k: list(v) for k, v in sorted(lat.classes.items())}
    return result, EXIT_OK


def cmd_enumerate(lat: LatticeSpec, args) -> tuple[dict, int]:
    if args.degree_class:
        H = parse_class(lat, args.degree_class)
    elif lat.ample_ref is not None:
        H = lat.ample_ref
    else:
        raise InputError("no degree class given and lattice has no ample_ref")
    if args.square is None and args.square_min is None:
        raise InputError("give --square or --square-min")
    q = SliceQuery(H, args.degree, args.square, args.square_min, args.square_max)
    found = enumerate_slice(lat, q)
    return {"degree_class": list(H), "degree": args.degree, "square": args.square,
            "square_min": args.square_min, "square_max": args.square_max,
            "count": len(found), "classes": [list(v) for v in found]}, EXIT_OK


def _polarization(lat: LatticeSpec, args) -> tuple[int, ...]:
    if args.polarization:
        return parse_class(lat, args.polarization)
    if "H" in lat.classes:
        return lat.classes["H"]
    if lat.ample_ref is None:
        raise InputError("no polarization given and lattice has no ample_ref")
    return lat.ample_ref


def _is_dp9(lat: LatticeSpec) -> bool:
    try:
        check_dp9(lat)
    except LatticeError:
        return False
    return True


def cmd_classify(lat: LatticeSpec, args) -> tuple[dict, int]:
    D = parse_class(lat, args.cls)
    attest = True if args.attest_very_ample else None
    table = args.table
    if table == "auto" and not args.polarization and _is_dp9(lat):
        table = "dp9"
    result: dict[str, Any] = {"class": list(D), "table": table}
    if table == "dp9":
        found = classify_dp9(lat, D)
        H = scale(3, lat.classes.get("X", lat.ample_ref))
        result["verdict"] = classify_genus2(lat, H, D, attest).to_json()
        result["structure"] = found.to_json() if found is not None else None
        return result, EXIT_OK
    H = _polarization(lat, args)
    h2 = lat.pair(H, H)
    if table == "auto":
        table = "genus2" if h2 == 18 else "quartic" if h2 == 4 else "general"
        result["table"] = table
    result["polarization"] = list(H)
    if table == "genus2":
        verdict = classify_genus2(lat, H, D, attest)
    elif table == "quartic":
        verdict = classify_quartic_class(lat, H, D, attest)
    else:
        verdict = classify_general(lat, H, D, attest)
    result["verdict"] = verdict.to_json()
    return result, EXIT_OK


def cmd_verify(lat: LatticeSpec, args) -> tuple[dict, int]:
    res = run_suite(args.suite, lat, max_degree=args.max_degree, n_max=args.n_max)
    return res.to_json(), EXIT_OK if res.passed else EXIT_FAIL


def render_table(payload: dict, prefix: str = "") -> list[str]:
    lines = []
    for key in sorted(payload):
        value = payload[key]
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            lines += render_table(value, name + ".")
        elif isinstance(value, list) and len(value) > 8:
            lines.append(f"{name}: [{len(value)} entries]")
        else:
            lines.append(f"{name}: {json.dumps(value)}")
    return lines


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="k3acm", description=__doc__.splitlines()[0])
    p.add_argument("--timing", action="store_true", help="add wall time in milliseconds to the report")
    p.add_argument("--format", choices=("json", "table"), default="json")
    sub = p.add_subparsers(dest="command", required=True)

    def lattice_arg(sp):
        sp.add_argument("lattice", help="lattice JSON file or builtin:NAME")

    sp = sub.add_parser("lattice-info", help="rank, signature, parity, 2-elementary invariants")
    lattice_arg(sp)

    sp = sub.add_parser("enumerate", help="list classes of given degree and square")
    lattice_arg(sp)
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--square", type=int)
    sp.add_argument("--square-min", type=int)
    sp.add_argument("--square-max", type=int)
    sp.add_argument("--degree-class", help="class defining the degree (default: ample_ref)")

    sp = sub.add_parser("classify", help="ACM and initialized classification of a class")
    lattice_arg(sp)
    sp.add_argument("--class", dest="cls", required=True, help="coordinates a,b,... or a class name")
    sp.add_argument("--table", choices=TABLES, default="auto")
    sp.add_argument("--polarization", help="polarization class (default: class H, else ample_ref)")
    sp.add_argument("--attest-very-ample", action="store_true",
                    help="trust that the polarization is very ample")

    sp = sub.add_parser("verify", help="run a verification suite")
    lattice_arg(sp)
    sp.add_argument("suite", choices=SUITES)
    sp.add_argument("--max-degree", type=int, default=8,
                    help="largest X-degree for dp9-equivalence (default 8, i.e. H.D <= 24)")
    sp.add_argument("--n-max", type=int, default=21, help="largest rank for the families suite")

    sp = sub.add_parser("builtin", help="print a builtin lattice as JSON")
    sp.add_argument("name", choices=sorted(builtin_lattices()))
    return p


COMMANDS = {
    "lattice-info": cmd_lattice_info,
    "enumerate": cmd_enumerate,
    "classify": cmd_classify,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "builtin":
        sys.stdout.write(canonical_json(builtin(args.name).to_json()))
        return EXIT_OK
    start = time.perf_counter()
    try:
        lat = open_lattice(args.lattice)
        result, code = COMMANDS[args.command](lat, args)
    except (InputError, LatticeError, OutOfScope, ValueError, OSError) as exc:
        sys.stderr.write(f"k3acm: error: {exc}\n")
        return EXIT_INPUT
    echo = {k: v for k, v in vars(args).items() if k not in ("timing", "format")}
    report = {
        "command": echo,
        "lattice": fingerprint(lat),
        "result": result,
        "version": __version__,
    }
    if args.timing:
        report["timing_ms"] = int((time.perf_counter() - start) * 1000)
    text = "\n".join(render_table(report)) + "\n" if args.format == "table" else canonical_json(report)
    try:
        sys.stdout.write(text)
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the interpreter's flush at exit
        sys.stdout = open(os.devnull, "w")
    return code


if __name__ == "__main__":
    sys.exit(main())
