"""Command-line front end.

Exit codes: 0 success/match, 1 audit mismatch or failed invariant,
2 invalid parameters.  ``json`` output is built completely before anything
is written, and is byte-identical across runs with the same arguments.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import charsum, tower
from .gf import FieldError, Poly3, build_field, is_primitive
from .seq import correlation_values, decimate, m_sequence
from .spectrum import (
    MAX_R,
    METHODS,
    VARIANTS,
    SpectrumReport,
    WeilParams,
    audit,
    closed_form_table,
    full_spectrum,
    moment_check,
    pointwise_values,
    report_to_csv,
    report_to_dict,
    tower_for,
)
from .tower import Case, Coords

WORKERS_ENV = "TERNXC_WORKERS"


def _cases(arg: str) -> list[Case]:
    return [Case.A, Case.B] if arg == "both" else [Case(arg)]


def _progress(label):
    if not sys.stderr.isatty():
        return None

    def cb(done, total):
        print(f"\r{label}: {done}/{total}", end="" if done < total else "\n", file=sys.stderr)

    return cb


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, exit_code)


def cmd_field(args):
    F = build_field(args.m, Poly3.parse(args.modulus) if args.modulus else None)
    return {
        "m": F.m,
        "size": F.size,
        "modulus": str(F.modulus),
        "generator": F.generator,
        "modulus_primitive": is_primitive(F.modulus),
    }, 0


def cmd_tower(args):
    out = []
    for case in _cases(args.case):
        ctx = tower_for(args.r, case)
        F = ctx.F
        out.append(
            {
                "r": ctx.r,
                "n": ctx.n,
                "case": case.value,
                "d": ctx.d,
                "subfield_modulus": str(F.modulus),
                "u": ctx.u,
                "c": ctx.c,
                "trace_c": F.trace(ctx.c),
                "generator": str(ctx.coords(ctx.generator)),
                "checks": {
                    "artin_schreier_irreducible": F.trace(ctx.c) != 0,
                    "frobenius_alpha_plus_one": ctx.pow(ctx.alpha, ctx.q) == ctx.join(1, 1, 0),
                    "generator_primitive": len(set(ctx.exp_table.tolist())) == ctx.order,
                },
            }
        )
    code = 0 if all(all(o["checks"].values()) for o in out) else 1
    return (out[0] if len(out) == 1 else out), code


def lemma_checks(r: int, case: Case, samples: int = 10_000, seed: int = 0) -> list[dict]:
    """Compare every closed trace form with direct computation in the tower."""
    ctx = tower_for(r, case)
    rng = np.random.default_rng(seed)
    xs = np.arange(ctx.size, dtype=np.int64)
    X = ctx.split(xs)
    xd = ctx.pow(xs, ctx.d)
    results = []

    def record(name, ok, count, mode):
        results.append({"identity": name, "ok": bool(ok), "count": int(count), "mode": mode})

    def pairs(exhaustive):
        if exhaustive:
            z, x = np.meshgrid(xs, xs, indexing="ij")
            return z.ravel(), x.ravel(), "exhaustive"
        return rng.integers(0, ctx.size, samples), rng.integers(0, ctx.size, samples), "random"

    if case is Case.A:
        ok = np.array_equal(tower.rel_trace_xd(ctx, X), ctx.rel_trace(xd))
        record("rel_trace_xd", ok, ctx.size, "exhaustive")
        z, x, mode = pairs(r == 1)
        ok = np.array_equal(tower.rel_trace_zx(ctx, ctx.split(z), ctx.split(x)), ctx.rel_trace(ctx.mul(z, x)))
        record("rel_trace_zx", ok, len(z), mode)
    ok = np.array_equal(tower.abs_trace_xd(ctx, X), ctx.trace_table[xd])
    record("abs_trace_xd", ok, ctx.size, "exhaustive")
    z, x, mode = pairs(r <= 2)
    ok = np.array_equal(tower.abs_trace_zx(ctx, ctx.split(z), ctx.split(x)), ctx.trace_table[ctx.mul(z, x)])
    record("abs_trace_zx", ok, len(z), mode)
    return results


def cmd_lemma_check(args):
    out = []
    for case in _cases(args.case):
        samples = args.samples if args.samples is not None else (10**5 if args.r >= 3 else 10**4)
        out.append({"r": args.r, "case": case.value, "checks": lemma_checks(args.r, case, samples, args.seed)})
    code = 0 if all(c["ok"] for o in out for c in o["checks"]) else 1
    return (out[0] if len(out) == 1 else out), code


def _z_index(ctx, text: str) -> int:
    if "," in text:
        return ctx.from_coords(Coords.parse(text))
    z = int(text)
    if not 0 <= z < ctx.size:
        raise FieldError(f"z index {z} outside E")
    return z


def cmd_weil(args):
    methods = METHODS if args.method == "all" else (args.method,)
    out = []
    for case in _cases(args.case):
        for m in methods:
            if args.r > MAX_R[m]:
                raise ValueError(f"method {m} is limited to r <= {MAX_R[m]}")
        ctx = tower_for(args.r, case)
        z = _z_index(ctx, args.z)
        vals = {}
        for m in methods:
            if m == "brute":
                vals[m] = charsum.weil_sum_bruteforce(ctx, z).as_integer()
            elif m == "reduced":
                vals[m] = charsum.weil_sum_reduced(ctx, ctx.coords(z), fast=args.fast)
            else:
                a = m_sequence(ctx)
                b = decimate(a, ctx.d)
                if z == 0:
                    s = charsum.EisensteinInt.from_counts(np.bincount((-b.symbols) % 3, minlength=3)) + 1
                else:
                    s = correlation_values(a, b, [int(ctx.log_table[z])])[0] + 1
                vals[m] = s.as_integer()
        out.append({"r": args.r, "case": case.value, "d": ctx.d, "z": str(ctx.coords(z)), "S": vals,
                    "agree": len(set(vals.values())) == 1})
    code = 0 if all(o["agree"] for o in out) else 1
    return (out[0] if len(out) == 1 else out), code


def _spectra(args) -> tuple[list[SpectrumReport], bool]:
    methods = METHODS if args.method == "all" else (args.method,)
    for m in methods:
        if args.r > MAX_R[m]:
            raise ValueError(f"method {m} is limited to r <= {MAX_R[m]}")
    reports = []
    agree = True
    for case in _cases(args.case):
        params = WeilParams(args.r, case)
        per_method = []
        for m in methods:
            rep = full_spectrum(params, m, args.domain, workers=args.workers,
                                progress=_progress(f"{m} r={args.r} case {case.value}"))
            per_method.append(rep)
        base = per_method[0].values
        agree &= all(np.array_equal(base, rep.values) for rep in per_method[1:])
        reports += per_method
    return reports, agree


def _emit_reports(reports, extra_by_report, timing):
    payload = [report_to_dict(rep, timing=timing, **extra) for rep, extra in zip(reports, extra_by_report)]
    return payload[0] if len(payload) == 1 else {"reports": payload}


def cmd_spectrum(args):
    reports, agree = _spectra(args)
    moments = [moment_check(rep) for rep in reports]
    payload = _emit_reports(reports, [{"moments": m} for m in moments], args.timing)
    if len(reports) > 1:
        payload["methods_agree"] = agree
    ok = agree and all(m.passed for m in moments)
    return payload, 0 if ok else 1, reports


def cmd_audit(args):
    if args.method is None:
        args.method = "brute" if args.r <= MAX_R["brute"] else "reduced"
    reports, agree = _spectra(args)
    variants = VARIANTS if args.variant == "both" else (args.variant,)
    extras, ok = [], agree
    for rep in reports:
        results = [audit(rep, closed_form_table(args.r, rep.params.case, v)) for v in variants]
        extras.append({"audits": results, "moments": moment_check(rep)})
        ok &= all(a.verdict == "match" for a in results)
    payload = _emit_reports(reports, extras, args.timing)
    return payload, 0 if ok else 1, reports


def cmd_seq(args):
    out = []
    for case in _cases(args.case):
        if args.r > MAX_R["sequence"]:
            raise ValueError(f"sequences are limited to r <= {MAX_R['sequence']}")
        ctx = tower_for(args.r, case)
        a = m_sequence(ctx)
        b = decimate(a, ctx.d)
        taus = [args.tau] if args.tau is not None else None
        vals = correlation_values(a, b, taus)
        taus = taus or list(range(a.period))
        out.append(
            {
                "r": args.r,
                "case": case.value,
                "d": ctx.d,
                "period": a.period,
                "a": a.to_string(),
                "b": b.to_string(),
                "correlation": [{"tau": t, "C": str(c), "S": str(c + 1)} for t, c in zip(taus, vals)],
            }
        )
    return (out[0] if len(out) == 1 else out), 0


# ---------------------------------------------------------------------------


def _text(payload, indent=0) -> str:
    pad = "  " * indent
    if isinstance(payload, dict):
        lines = []
        for k, v in payload.items():
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(payload, list):
        parts = []
        for v in payload:
            parts.append(_text(v, indent + 1) if isinstance(v, (dict, list)) else f"{pad}- {v}")
            if isinstance(v, dict):
                parts.append(f"{pad}-")
        return "\n".join(parts)
    return f"{pad}{payload}"


def _csv(payload, reports) -> str:
    if reports:
        if len(reports) == 1:
            return report_to_csv(reports[0]).rstrip("\n")
        lines = ["case,method,S,C,count"]
        for rep in reports:
            for s, c in rep.counts.items():
                lines.append(f"{rep.params.case.value},{rep.method},{s},{s - 1},{c}")
        return "\n".join(lines)
    items = payload if isinstance(payload, list) else [payload]
    if items and "correlation" in items[0]:
        lines = ["case,tau,C,S"]
        for it in items:
            lines += [f"{it['case']},{c['tau']},{c['C']},{c['S']}" for c in it["correlation"]]
        return "\n".join(lines)
    raise ValueError("csv output is available for spectrum, audit and seq only")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=int(os.environ.get(WORKERS_ENV, "1")))
    common.add_argument("--timing", action="store_true", help="include elapsed_ms (breaks byte-identity)")

    withr = argparse.ArgumentParser(add_help=False, parents=[common])
    withr.add_argument("--r", type=int, required=True)
    withr.add_argument("--case", choices=("A", "B", "both"), default="A")

    p = argparse.ArgumentParser(prog="ternxc", description="Cross-correlation spectra of ternary m-sequences.")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("field", parents=[common], help="build and describe GF(3^m)")
    f.add_argument("--m", type=int, required=True)
    f.add_argument("--modulus", help='comma-separated digits, constant first (e.g. "2,2,0,1")')

    sub.add_parser("tower", parents=[withr], help="build E = F(alpha) and report its checks")

    lc = sub.add_parser("lemma-check", parents=[withr], help="verify the closed trace forms")
    lc.add_argument("--samples", type=int, help="random (z, x) pairs where not exhaustive")

    w = sub.add_parser("weil", parents=[withr], help="evaluate one S_d(z)")
    w.add_argument("--z", required=True, help="tower index or coordinates x0,x1,x2")
    w.add_argument("--method", choices=(*METHODS, "all"), default="all")
    w.add_argument("--fast", action="store_true", help="closed-form inner sum for the reduced method")

    for name, helptext in (("spectrum", "full value distribution"), ("audit", "spectrum vs closed-form tables")):
        s = sub.add_parser(name, parents=[withr], help=helptext)
        s.add_argument("--method", choices=(*METHODS, "all"), default="reduced" if name == "spectrum" else None)
        s.add_argument("--domain", choices=("E", "E_star"), default="E")
        if name == "audit":
            s.add_argument("--variant", choices=(*VARIANTS, "both"), default="both")

    sq = sub.add_parser("seq", parents=[withr], help="m-sequence, decimation and correlation values")
    sq.add_argument("--tau", type=int)
    return p


COMMANDS = {
    "field": cmd_field,
    "tower": cmd_tower,
    "lemma-check": cmd_lemma_check,
    "weil": cmd_weil,
    "spectrum": cmd_spectrum,
    "audit": cmd_audit,
    "seq": cmd_seq,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if getattr(args, "r", 1) < 1 or args.workers < 1:
        print("error: --r and --workers must be positive", file=sys.stderr)
        return 2
    try:
        result = COMMANDS[args.command](args)
        payload, code = result[0], result[1]
        reports = result[2] if len(result) > 2 else None
        if args.format == "json":
            text = json.dumps(payload, indent=2)
        elif args.format == "csv":
            text = _csv(payload, reports)
        else:
            text = _text(payload)
    except (ValueError, FieldError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (AssertionError, ArithmeticError) as e:
        print(f"invariant failure: {e}", file=sys.stderr)
        return 1
    print(text)
    return code


def main():
    sys.exit(run())
