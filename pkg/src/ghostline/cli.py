"""Command-line front end.

Every computation is reachable as a subcommand with machine-readable
output; rationals are always emitted as "num/den" strings and +infinity as
"inf", so downstream comparisons stay bit-exact.

Exit codes: 0 success, 1 failed verification, 2 parameter errors,
3 Newton-polygon certification failure after retries.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import List, Optional

from . import dimensions as dims
from . import ghost_series as ghost
from . import newton
from . import steinberg
from . import verify
from .weight_space import (
    GhostContext,
    format_rational,
    new_context,
    parse_point,
    parse_rational,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARAMS = 2
EXIT_CERTIFICATION = 3


class ParameterError(Exception):
    pass


def _context(args) -> GhostContext:
    try:
        return new_context(args.p, args.a, args.seps)
    except ValueError as exc:
        raise ParameterError(str(exc)) from exc


# --------------------------------------------------------------- payloads


def _payload_dims(args) -> dict:
    if args.kmax < 2:
        raise ParameterError("--kmax must be >= 2")
    p = args.p
    disks = []
    for s_eps in range(0, p - 1):
        ctx = new_context(p, args.a, s_eps)
        row = {
            "s_eps": s_eps,
            "k_eps": ctx.k_eps,
            "d_iw": [[k, dims.d_iw(ctx, k)] for k in range(2, args.kmax + 1)],
            "triples": [
                [k, dims.d_ur(ctx, k), dims.d_new(ctx, k)]
                for k in range(ctx.k_eps, args.kmax + 1, p - 1)
            ],
        }
        disks.append(row)
    return {"p": p, "a": args.a, "kmax": args.kmax, "disks": disks}


def _payload_ghost(args) -> dict:
    ctx = _context(args)
    if args.n < 0:
        raise ParameterError("--n must be >= 0")
    return ghost.coefficient(ctx, args.n).to_json_dict()


def _payload_np(args) -> dict:
    ctx = _context(args)
    try:
        point = parse_point(args.point)
    except ValueError as exc:
        raise ParameterError(str(exc)) from exc
    if args.nmax < 1:
        raise ParameterError("--nmax must be >= 1")
    np_, buffer_used = newton.np_of_ghost_auto(ctx, point, args.nmax, args.buffer)
    payload = {"point": args.point, "n_max": args.nmax, "buffer_used": buffer_used}
    payload.update(np_.to_json_dict())
    return payload


def _payload_delta(args) -> dict:
    ctx = _context(args)
    if not ctx.on_disk(args.k) or args.k < 2:
        raise ParameterError(
            f"--k must be >= 2 and congruent to k_eps = {ctx.k_eps} mod {ctx.p - 1}"
        )
    return steinberg.delta_profile(ctx, args.k).to_json_dict()


def _payload_ns(args) -> dict:
    ctx = _context(args)
    try:
        point = parse_point(args.point)
    except ValueError as exc:
        raise ParameterError(str(exc)) from exc
    if args.nmax < 1:
        raise ParameterError("--nmax must be >= 1")
    ranges = steinberg.near_steinberg_ranges(ctx, point, args.nmax)
    nested, witness = steinberg.check_nested(ranges)
    return {
        "point": args.point,
        "n_max": args.nmax,
        "ranges": [r.to_json_dict() for r in ranges],
        "nested": nested,
        "nest_witness": None
        if witness is None
        else [witness[0].to_json_dict(), witness[1].to_json_dict()],
    }


_BOUND_FLAGS = ("k_bullet_max", "k0_max", "ell_max", "n_max", "points", "seed",
                "k_prime_bullet_max")


def _bounds_from(args) -> dict:
    bounds = {}
    for name in _BOUND_FLAGS:
        val = getattr(args, name, None)
        if val is not None:
            bounds[name] = val
    return bounds


def _payload_verify(args) -> dict:
    ctx = _context(args)
    report = verify.run_suite(args.suite, ctx, **_bounds_from(args))
    return report.to_json_dict()


def _payload_scan(args) -> dict:
    ps = [int(x) for x in args.p_list.split(",")]
    suites = args.suites.split(",") if args.suites else sorted(verify.SUITES)
    reports = verify.run_grid(ps, suites, _bounds_from(args), workers=args.workers)
    failed = sum(1 for r in reports if r["status"] != "pass")
    return {"suites": suites, "p_list": ps, "failed": failed, "reports": reports}


# ------------------------------------------------------------- rendering


def _rows_for(payload: dict) -> List[List[str]]:
    """Flatten a payload into rows holding exactly the JSON's numbers."""
    rows: List[List[str]] = []

    def walk(prefix: str, obj) -> None:
        if isinstance(obj, dict):
            for key, val in obj.items():
                walk(f"{prefix}.{key}" if prefix else str(key), val)
        elif isinstance(obj, list):
            if obj and all(not isinstance(x, (dict, list)) for x in obj):
                rows.append([prefix] + [str(x) for x in obj])
            else:
                for i, val in enumerate(obj):
                    walk(f"{prefix}[{i}]", val)
        else:
            rows.append([prefix, str(obj)])

    walk("", payload)
    return rows


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2)
    rows = _rows_for(payload)
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerows(rows)
        return out.getvalue().rstrip("\n")
    if fmt == "table":
        width = max(len(r[0]) for r in rows) if rows else 0
        return "\n".join(f"{r[0]:<{width}}  " + "  ".join(r[1:]) for r in rows)
    raise ParameterError(f"unknown format {fmt!r}")


# -------------------------------------------------------------- argparse


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ghostline",
        description="Exact ghost-series computations: dimensions, coefficients, "
        "Newton polygons, duality profiles, near-Steinberg ranges, and "
        "verification suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, seps=True):
        sp.add_argument("--p", type=int, required=True, help="prime >= 5")
        sp.add_argument("--a", type=int, required=True, help="niveau parameter in [1, p-4]")
        if seps:
            sp.add_argument("--seps", type=int, required=True,
                            help="disk selector in [0, p-2]")
        sp.add_argument("--format", choices=("json", "csv", "table"), default="json")
        sp.add_argument("--out", default=None, help="output path (default stdout)")

    sp = sub.add_parser("dims", help="rank tables across all p-1 disks")
    common(sp, seps=False)
    sp.add_argument("--kmax", type=int, required=True)
    sp.set_defaults(payload=_payload_dims)

    sp = sub.add_parser("ghost", help="factored coefficient g_n")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(payload=_payload_ghost)

    sp = sub.add_parser("np", help="certified Newton polygon at a point")
    common(sp)
    sp.add_argument("--point", required=True,
                    help="classical:K | perturbed:K0:NUM/DEN | boundary:NUM/DEN")
    sp.add_argument("--nmax", type=int, required=True)
    sp.add_argument("--buffer", type=int, default=None)
    sp.set_defaults(payload=_payload_np)

    sp = sub.add_parser("delta", help="duality profile of one weight")
    common(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.set_defaults(payload=_payload_delta)

    sp = sub.add_parser("ns", help="near-Steinberg ranges with nestedness verdict")
    common(sp)
    sp.add_argument("--point", required=True)
    sp.add_argument("--nmax", type=int, required=True)
    sp.set_defaults(payload=_payload_ns)

    sp = sub.add_parser("verify", help="run one verification suite")
    common(sp)
    sp.add_argument("--suite", required=True, choices=sorted(verify.SUITES))
    for flag in _BOUND_FLAGS:
        sp.add_argument(f"--{flag.replace('_', '-')}", dest=flag, type=int, default=None)
    sp.set_defaults(payload=_payload_verify)

    sp = sub.add_parser("scan", help="suite grid over (p, a, s_eps) in parallel")
    sp.add_argument("--p-list", default="5,7", help="comma-separated primes")
    sp.add_argument("--suites", default=None, help="comma-separated suite names")
    sp.add_argument("--workers", type=int, default=None,
                    help="worker processes (default GHOSTLINE_WORKERS or cpu count)")
    for flag in _BOUND_FLAGS:
        sp.add_argument(f"--{flag.replace('_', '-')}", dest=flag, type=int, default=None)
    sp.add_argument("--format", choices=("json", "csv", "table"), default="json")
    sp.add_argument("--out", default=None)
    sp.set_defaults(payload=_payload_scan)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARAMS if exc.code not in (0, None) else 0
    try:
        payload = args.payload(args)
    except newton.CertificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATION
    except (ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS

    text = render(payload, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)

    if args.command == "verify" and payload.get("status") != "pass":
        return EXIT_VERIFY_FAILED
    if args.command == "scan" and payload.get("failed"):
        return EXIT_VERIFY_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
