"""Compute spectra for r = 1..3 and audit both closed-form table variants.

Usage: python scripts/audit_tables.py [--max-r 3] [--method brute]
"""

import argparse
import json
from dataclasses import dataclass

from ternxc.spectrum import WeilParams, audit, closed_form_table, full_spectrum, moment_check
from ternxc.tower import Case


@dataclass(frozen=True)
class AuditConfig:
    max_r: int = 3
    method: str = "brute"
    variants: tuple[str, ...] = ("paper", "moment_consistent")


def main(cfg: AuditConfig) -> list[dict]:
    rows = []
    for r in range(1, cfg.max_r + 1):
        for case in Case:
            rep = full_spectrum(WeilParams(r, case), cfg.method)
            mc = moment_check(rep)
            for variant in cfg.variants:
                res = audit(rep, closed_form_table(r, case, variant))
                rows.append({
                    "r": r,
                    "case": case.value,
                    "d": rep.params.d,
                    "variant": variant,
                    "verdict": res.verdict,
                    "moments_ok": mc.passed,
                    "issues": res.issues,
                })
                print(f"r={r} case={case.value} d={rep.params.d:<4} {variant:<18} {res.verdict}")
    return rows


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-r", type=int, default=3)
    ap.add_argument("--method", default="brute", choices=["brute", "reduced", "sequence"])
    ap.add_argument("--json", action="store_true", help="dump rows as JSON instead of a summary")
    a = ap.parse_args()
    out = main(AuditConfig(a.max_r, a.method))
    if a.json:
        print(json.dumps(out, indent=2))
