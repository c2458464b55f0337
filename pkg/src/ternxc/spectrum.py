"""Weil-sum spectra, closed-form distribution tables, and audits between them.

Spectra are keyed by the Weil-sum value ``S``; the correlation value is
``C = S - 1``.  Three independent evaluation routes are available:

``brute``     sum over all of E for every z (``O(3^{6r})``)
``reduced``   the subfield-reduced sum after eliminating x0 (``O(3^{4r})``)
``sequence``  periodic cross-correlation of an m-sequence and its decimation
"""

from __future__ import annotations

import csv
import io
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .charsum import EisensteinInt, brute_values, reduced_values
from .gf import build_field
from .seq import correlation_values, decimate, m_sequence
from .tower import Case, TowerCtx, build_tower

METHODS = ("brute", "reduced", "sequence")
DOMAINS = ("E", "E_star")
VARIANTS = ("paper", "moment_consistent")
MAX_R = {"brute": 3, "sequence": 3, "reduced": 4}


class SpectrumLimitError(ValueError):
    pass


@dataclass(frozen=True)
class WeilParams:
    r: int
    case: Case

    def __post_init__(self):
        object.__setattr__(self, "case", Case(self.case))
        if not isinstance(self.r, int) or self.r < 1:
            raise ValueError(f"r must be a positive integer, got {self.r!r}")
        if math.gcd(self.d, 3**self.n - 1) != 1:
            raise AssertionError(f"d = {self.d} is not a permutation exponent")

    @property
    def n(self) -> int:
        return 3 * self.r

    @property
    def d(self) -> int:
        return self.case.d(self.r)


@lru_cache(maxsize=None)
def tower_for(r: int, case: Case | str) -> TowerCtx:
    return build_tower(build_field(r), Case(case))


def _brute_chunk(args):
    r, case, start, stop = args
    return brute_values(tower_for(r, case), range(start, stop))


def pointwise_values(params: WeilParams, method: str, workers: int = 1, progress=None) -> np.ndarray:
    """``S_d(z)`` for every z in E, indexed by tower index."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if params.r > MAX_R[method]:
        raise SpectrumLimitError(f"method {method} is limited to r <= {MAX_R[method]}")
    ctx = tower_for(params.r, params.case)
    N = ctx.order
    values = np.zeros(ctx.size, dtype=np.int64)
    if method == "reduced":
        return reduced_values(ctx)
    if method == "brute":
        nchunks = max(1, min(64, N // 256))
        bounds = np.linspace(0, N, nchunks + 1).astype(int)
        jobs = [(params.r, params.case, int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:])]
        if workers > 1:
            with ProcessPoolExecutor(workers) as pool:
                parts = []
                for i, part in enumerate(pool.map(_brute_chunk, jobs)):
                    parts.append(part)
                    if progress:
                        progress(i + 1, len(jobs))
        else:
            parts = []
            for i, job in enumerate(jobs):
                parts.append(_brute_chunk(job))
                if progress:
                    progress(i + 1, len(jobs))
        values[ctx.exp_table] = np.concatenate(parts)
        xs = np.arange(ctx.size, dtype=np.int64)
        counts = np.bincount((-ctx.trace_table[ctx.pow(xs, params.d)]) % 3, minlength=3)
        values[0] = EisensteinInt.from_counts(counts).as_integer()
        return values
    # sequence: S(g^tau) = C(tau) + 1, and S(0) = 1 + sum_t w^(-b_t)
    a = m_sequence(ctx)
    b = decimate(a, params.d)
    for tau, c in enumerate(correlation_values(a, b)):
        values[ctx.exp_table[tau]] = (c + 1).as_integer()
    zero = EisensteinInt.from_counts(np.bincount((-b.symbols) % 3, minlength=3)) + 1
    values[0] = zero.as_integer()
    return values


@dataclass
class SpectrumReport:
    params: WeilParams
    domain: str
    method: str
    counts: dict[int, int]
    elapsed: float = 0.0
    values: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.domain not in DOMAINS:
            raise ValueError(f"unknown domain {self.domain!r}")
        self.counts = dict(sorted(self.counts.items()))

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def m1(self) -> int:
        return sum(s * c for s, c in self.counts.items())

    @property
    def m2(self) -> int:
        return sum(s * s * c for s, c in self.counts.items())


def full_spectrum(
    params: WeilParams, method: str = "brute", domain: str = "E", workers: int = 1, progress=None
) -> SpectrumReport:
    if domain not in DOMAINS:
        raise ValueError(f"unknown domain {domain!r}")
    t0 = time.perf_counter()
    values = pointwise_values(params, method, workers=workers, progress=progress)
    counted = values if domain == "E" else values[1:]
    counts = Counter(counted.tolist())
    return SpectrumReport(params, domain, method, dict(counts), time.perf_counter() - t0, values)


# ---------------------------------------------------------------------------
# Closed-form tables


@dataclass(frozen=True)
class TableEntry:
    c_expr: str
    count_expr: str
    c_value: int
    count: Fraction

    @property
    def s_value(self) -> int:
        return self.c_value + 1


@dataclass(frozen=True)
class ClosedFormTable:
    r: int
    case: Case
    variant: str
    entries: tuple[TableEntry, ...]

    @property
    def domain_size(self) -> int:
        return 3 ** (3 * self.r)

    @property
    def is_integral(self) -> bool:
        return all(e.count.denominator == 1 for e in self.entries)

    @property
    def total(self) -> Fraction:
        return sum((e.count for e in self.entries), Fraction(0))

    def distribution(self) -> dict[int, Fraction]:
        """Counts keyed by S; entries whose values coincide (r = 1) are merged."""
        out: dict[int, Fraction] = {}
        for e in self.entries:
            out[e.s_value] = out.get(e.s_value, Fraction(0)) + e.count
        return dict(sorted(out.items()))

    @property
    def m1(self) -> Fraction:
        return sum((s * c for s, c in self.distribution().items()), Fraction(0))

    @property
    def m2(self) -> Fraction:
        return sum((s * s * c for s, c in self.distribution().items()), Fraction(0))

    def checks(self) -> dict[str, bool]:
        N = 3 ** (3 * self.r)
        return {
            "integral": self.is_integral,
            "total": self.total == N,
            "first_moment": self.m1 == N,
            "second_moment": self.m2 == N * N,
        }


def closed_form_table(r: int, case: Case | str = Case.A, variant: str = "moment_consistent") -> ClosedFormTable:
    """Distribution of ``C = S - 1`` from closed-form expressions.

    ``paper`` keeps the +/- count numerator as originally stated.  ``moment_consistent``
    uses ``3^(3r-1) - 3^(2r-1)`` as the numerator of the +/- counts, which
    makes the counts integral and sum to ``3^(3r)`` with the right moments.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if r < 1:
        raise ValueError("r must be positive")
    sign = "+" if variant == "paper" else "-"
    num = 3 ** (3 * r - 1) + 3 ** (2 * r - 1) if variant == "paper" else 3 ** (3 * r - 1) - 3 ** (2 * r - 1)
    num_expr = f"3^(3r-1) {sign} 3^(2r-1)"
    rows: list[tuple[str, int, str, Fraction]] = []
    if r % 2 == 0:
        h = 3 ** (3 * r // 2)
        rows.append(("-1", -1, "(3^(3r) + 3^(2r))/2 - 3^r", Fraction(3 ** (3 * r) + 3 ** (2 * r), 2) - 3**r))
        rows.append(("3^(2r) - 1", 3 ** (2 * r) - 1, "3^r", Fraction(3**r)))
        rows.append(("3^(3r/2) - 1", h - 1, f"({num_expr})/2", Fraction(num, 2)))
        rows.append(("-3^(3r/2) - 1", -h - 1, f"({num_expr})/2", Fraction(num, 2)))
        rows.append(("2*3^(3r/2) - 1", 2 * h - 1, f"({num_expr})/4", Fraction(num, 4)))
        rows.append(("-2*3^(3r/2) - 1", -2 * h - 1, f"({num_expr})/4", Fraction(num, 4)))
    else:
        h = 3 ** ((3 * r + 1) // 2)
        rows.append(("-1", -1, "2*3^(3r-1) + 3^(2r-1) - 3^r", Fraction(2 * 3 ** (3 * r - 1) + 3 ** (2 * r - 1) - 3**r)))
        rows.append(("3^(2r) - 1", 3 ** (2 * r) - 1, "3^r", Fraction(3**r)))
        rows.append(("3^((3r+1)/2) - 1", h - 1, f"({num_expr})/2", Fraction(num, 2)))
        rows.append(("-3^((3r+1)/2) - 1", -h - 1, f"({num_expr})/2", Fraction(num, 2)))
    entries = tuple(TableEntry(ce, cnt_e, cv, cnt) for ce, cv, cnt_e, cnt in rows)
    return ClosedFormTable(r, Case(case), variant, entries)


# ---------------------------------------------------------------------------
# Audits


@dataclass(frozen=True)
class Mismatch:
    s: int
    expected: Fraction
    observed: int

    def to_dict(self) -> dict:
        exp = self.expected
        return {
            "S": self.s,
            "C": self.s - 1,
            "expected": int(exp) if exp.denominator == 1 else str(exp),
            "observed": self.observed,
        }


@dataclass(frozen=True)
class AuditResult:
    variant: str
    verdict: str  # match | mismatch | table_inconsistent
    mismatches: tuple[Mismatch, ...]
    table_checks: dict
    issues: tuple[str, ...]

    @property
    def table_consistent(self) -> bool:
        return all(self.table_checks.values())

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "verdict": self.verdict,
            "table_consistent": self.table_consistent,
            "table_checks": dict(self.table_checks),
            "mismatches": [m.to_dict() for m in self.mismatches],
            "issues": list(self.issues),
        }


def audit(report: SpectrumReport, table: ClosedFormTable) -> AuditResult:
    """Compare a computed spectrum with a closed-form table.

    A non-integral table is ``table_inconsistent`` without looking at the
    data; otherwise any per-value or total disagreement is a ``mismatch``.
    """
    if report.params.r != table.r or report.params.case != table.case:
        raise ValueError("report and table are for different parameters")
    checks = table.checks()
    issues = []
    if not checks["integral"]:
        bad = [e for e in table.entries if e.count.denominator != 1]
        issues += [f"non-integral count {e.count} for C = {e.c_value}" for e in bad]
    if not checks["total"]:
        issues.append(f"table total {table.total} != 3^(3r) = {table.domain_size}")
    for key in ("first_moment", "second_moment"):
        if not checks[key]:
            issues.append(f"table fails the {key.replace('_', ' ')} identity")
    if not checks["integral"]:
        return AuditResult(table.variant, "table_inconsistent", (), checks, tuple(issues))

    expected = table.distribution()
    mismatches = []
    for s in sorted(set(expected) | set(report.counts)):
        e = expected.get(s, Fraction(0))
        o = report.counts.get(s, 0)
        if e != o:
            mismatches.append(Mismatch(s, e, o))
    if table.total != report.total:
        issues.append(f"total {report.total} computed vs {table.total} tabulated")
    verdict = "match" if not mismatches and table.total == report.total else "mismatch"
    return AuditResult(table.variant, verdict, tuple(mismatches), checks, tuple(issues))


@dataclass(frozen=True)
class MomentReport:
    m1: int
    m2: int
    expected_m1: int
    expected_m2: int
    peak_value: int
    peak_count: int
    expected_peak_count: int | None  # None when the peak collides with another value

    @property
    def checks(self) -> dict[str, bool | None]:
        peak = None if self.expected_peak_count is None else self.peak_count == self.expected_peak_count
        return {
            "first_moment": self.m1 == self.expected_m1,
            "second_moment": self.m2 == self.expected_m2,
            "peak_count": peak,
        }

    @property
    def passed(self) -> bool:
        return all(v is not False for v in self.checks.values())

    def to_dict(self) -> dict:
        return {
            "m1": self.m1,
            "m2": self.m2,
            "expected_m1": self.expected_m1,
            "expected_m2": self.expected_m2,
            "peak": {"S": self.peak_value, "count": self.peak_count, "expected": self.expected_peak_count},
            "checks": self.checks,
        }


def moment_check(report: SpectrumReport) -> MomentReport:
    """Check ``sum S = 3^n``, ``sum S^2 = 3^(2n)`` and that ``S = 3^(2r)`` occurs ``3^r`` times.

    Since ``S_d(0) = 0`` the moments are the same over E and E*.  At r = 1
    the peak ``3^(2r) = 3^((3r+1)/2)`` merges with another value, so the
    peak-count check is skipped there.
    """
    r, n = report.params.r, report.params.n
    peak = 3 ** (2 * r)
    expected_peak = None if r == 1 else 3**r
    return MomentReport(
        report.m1, report.m2, 3**n, 3 ** (2 * n), peak, report.counts.get(peak, 0), expected_peak
    )


# ---------------------------------------------------------------------------
# Serialisation


def report_to_dict(report: SpectrumReport, audits=(), moments: MomentReport | None = None, timing: bool = False) -> dict:
    p = report.params
    out = {
        "r": p.r,
        "n": p.n,
        "d": p.d,
        "case": p.case.value,
        "domain": report.domain,
        "method": report.method,
        "spectrum": [{"S": s, "C": s - 1, "count": c} for s, c in report.counts.items()],
        "moments": {"m1": report.m1, "m2": report.m2},
    }
    if moments is not None:
        out["moment_check"] = moments.to_dict()
    if audits:
        out["audit"] = [a.to_dict() for a in audits]
    if timing:
        out["elapsed_ms"] = round(report.elapsed * 1000, 3)
    return out


def report_to_csv(report: SpectrumReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["S", "C", "count"])
    for s, c in report.counts.items():
        w.writerow([s, s - 1, c])
    return buf.getvalue()
