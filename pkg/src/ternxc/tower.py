"""The cubic extension E = F(alpha) of F = GF(3^r), alpha^3 = alpha + c.

Elements of E are packed as ``x0 + q*x1 + q^2*x2`` (``q = 3^r``), where the
``x_i`` are F-indices and the element is ``x0 + x1*alpha + x2*alpha^2``.
Because F-indices are themselves base-3 digit vectors, E-addition is plain
digit-wise addition on ``3r`` digits.

Two decimations are supported:

* case ``A``: ``d = 3^r + 2``,    ``c = (u-1)^3`` with ``Tr(u-1) = 1``
* case ``B``: ``d = 3^{2r} + 2``, ``c = (1-u)^3`` with ``Tr(1-u) = 1``

In both cases ``Tr_F(c) = 1``, so ``x^3 - x - c`` is irreducible and the
``3^r``-Frobenius acts on coordinates as ``alpha -> alpha + 1``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .gf import FieldCtx, FieldError, _prime_factors, digit_add

MAX_R = 4


class Case(str, enum.Enum):
    A = "A"
    B = "B"

    def d(self, r: int) -> int:
        return 3**r + 2 if self is Case.A else 3 ** (2 * r) + 2


class UnsupportedCaseError(FieldError):
    pass


class Coords(NamedTuple):
    x0: int
    x1: int
    x2: int

    def __str__(self):
        return f"{self.x0},{self.x1},{self.x2}"

    @classmethod
    def parse(cls, text: str) -> "Coords":
        parts = [int(t) for t in text.split(",")]
        if len(parts) != 3:
            raise FieldError(f"coordinates need three subfield indices, got {text!r}")
        return cls(*parts)


def decimation(r: int, case: Case | str) -> int:
    return Case(case).d(r)


def find_u(F: FieldCtx, case: Case | str) -> int:
    """Smallest ``u`` (by index) with ``Tr(u-1) = 1`` (A) or ``Tr(1-u) = 1`` (B)."""
    case = Case(case)
    for u in range(F.size):
        v = F.sub(u, 1) if case is Case.A else F.sub(1, u)
        if F.trace(v) == 1:
            return u
    raise AssertionError("trace is not surjective")


@dataclass(eq=False, frozen=True)
class TowerCtx:
    F: FieldCtx
    case: Case
    u: int
    c: int
    generator: int
    exp_table: np.ndarray = field(repr=False)
    log_table: np.ndarray = field(repr=False)

    @property
    def r(self) -> int:
        return self.F.m

    @property
    def n(self) -> int:
        return 3 * self.F.m

    @property
    def q(self) -> int:
        return self.F.size

    @property
    def size(self) -> int:
        return self.F.size**3

    @property
    def order(self) -> int:
        return self.size - 1

    @property
    def d(self) -> int:
        return self.case.d(self.r)

    @property
    def alpha(self) -> int:
        return self.q

    # -- coordinates --------------------------------------------------------

    def split(self, e):
        q = self.q
        return e % q, (e // q) % q, e // (q * q)

    def join(self, x0, x1, x2):
        q = self.q
        return x0 + q * x1 + q * q * x2

    def coords(self, e: int) -> Coords:
        return Coords(*(int(v) for v in self.split(e)))

    def from_coords(self, c: Coords | tuple) -> int:
        x0, x1, x2 = c
        if not all(0 <= v < self.q for v in (x0, x1, x2)):
            raise FieldError(f"coordinate outside GF(3^{self.r}): {tuple(c)}")
        return self.join(x0, x1, x2)

    # -- arithmetic; ints or arrays -----------------------------------------

    def add(self, a, b):
        return digit_add(a, b, self.n)

    def mul(self, a, b):
        return _tower_mul(self.F, self.c, a, b)

    def pow(self, a, k: int):
        if np.isscalar(a):
            if a == 0:
                return 1 if k == 0 else 0
            return int(self.exp_table[(int(self.log_table[a]) * k) % self.order])
        a = np.asarray(a)
        p = self.exp_table[(self.log_table[a] * k) % self.order]
        return np.ones_like(a) if k == 0 else np.where(a == 0, 0, p)

    def frobenius(self, a, times: int = 1):
        return self.pow(a, 3**times)

    # -- traces computed directly in E --------------------------------------

    def rel_trace(self, a):
        """``Tr_r^n(a) = a + a^q + a^{q^2}`` as an F-index (asserts it lies in F)."""
        acc = a
        cur = a
        for _ in range(2):
            cur = self.pow(cur, self.q)
            acc = self.add(acc, cur)
        x0, x1, x2 = self.split(acc)
        assert np.all(x1 == 0) and np.all(x2 == 0), "relative trace left F"
        return x0

    @cached_property
    def trace_table(self) -> np.ndarray:
        """Absolute trace ``sum_{i<n} x^{3^i}`` of every element, by direct powering."""
        xs = np.arange(self.size, dtype=np.int64)
        acc = np.zeros_like(xs)
        cur = xs
        for _ in range(self.n):
            acc = self.add(acc, cur)
            cur = self.pow(cur, 3)
        assert np.all(acc < 3), "absolute trace left GF(3)"
        acc.flags.writeable = False
        return acc

    @cached_property
    def trace_of_power(self) -> np.ndarray:
        """``Tr(g^k)`` for ``k in [0, 3^n - 1)``: the m-sequence of the generator."""
        t = self.trace_table[self.exp_table]
        t.flags.writeable = False
        return t


def _tower_mul(F: FieldCtx, c: int, a, b):
    q = F.size
    a0, a1, a2 = a % q, (a // q) % q, a // (q * q)
    b0, b1, b2 = b % q, (b // q) % q, b // (q * q)
    mul, add = F.mul, F.add
    p0 = mul(a0, b0)
    p1 = add(mul(a0, b1), mul(a1, b0))
    p2 = add(add(mul(a0, b2), mul(a1, b1)), mul(a2, b0))
    p3 = add(mul(a1, b2), mul(a2, b1))
    p4 = mul(a2, b2)
    # alpha^3 = alpha + c, alpha^4 = alpha^2 + c*alpha
    r0 = add(p0, mul(c, p3))
    r1 = add(add(p1, p3), mul(c, p4))
    r2 = add(p2, p4)
    return r0 + q * r1 + q * q * r2


def _scalar_pow(F, c, a, k):
    result, base = 1, a
    while k:
        if k & 1:
            result = int(_tower_mul(F, c, result, base))
        base = int(_tower_mul(F, c, base, base))
        k >>= 1
    return result


def build_tower(F: FieldCtx, case: Case | str) -> TowerCtx:
    """Build E = F(alpha) for the given decimation case and verify it."""
    case = Case(case)
    r = F.m
    if r > MAX_R:
        raise FieldError(f"tower over GF(3^{r}) exceeds the table bound r <= {MAX_R}")
    u = find_u(F, case)
    base = F.sub(u, 1) if case is Case.A else F.sub(1, u)
    c = F.pow(base, 3)
    if F.trace(c) == 0:
        raise AssertionError("Artin-Schreier constant has zero trace")
    for y in range(F.size):
        if F.sub(F.sub(F.pow(y, 3), y), c) == 0:
            raise AssertionError(f"x^3 - x - c has the root {y} in F")

    q = F.size
    size = q**3
    order = size - 1
    qs = _prime_factors(order)
    generator = next(
        g for g in range(1, size) if all(_scalar_pow(F, c, g, order // p) != 1 for p in qs)
    )

    block = max(1, math.isqrt(order))
    first = np.empty(block, dtype=np.int64)
    cur = 1
    for j in range(block):
        first[j] = cur
        cur = int(_tower_mul(F, c, cur, generator))
    chunks = [first]
    total = block
    while total < order:
        chunks.append(_tower_mul(F, c, chunks[-1], cur))
        total += block
    exp_table = np.concatenate(chunks)[:order]
    log_table = np.full(size, -1, dtype=np.int64)
    log_table[exp_table] = np.arange(order, dtype=np.int64)
    if log_table[0] != -1 or np.any(log_table[1:] < 0):
        raise AssertionError("tower generator is not primitive")
    log_table[0] = 0
    exp_table.flags.writeable = False
    log_table.flags.writeable = False

    ctx = TowerCtx(F, case, u, c, generator, exp_table, log_table)
    if _scalar_pow(F, c, ctx.alpha, q) != ctx.join(1, 1, 0):
        raise AssertionError("Frobenius check alpha^(3^r) = alpha + 1 failed")
    return ctx


# ---------------------------------------------------------------------------
# Closed forms for the traces of x^d and z*x, evaluated in F


def rel_trace_xd(ctx: TowerCtx, x: Coords):
    """``Tr_r^n(x^d)`` for case A via the closed cubic form in the coordinates."""
    if ctx.case is not Case.A:
        raise UnsupportedCaseError("no relative-trace closed form for case B")
    F = ctx.F
    mul, add = F.mul, F.add
    x0, x1, x2 = x
    x2sq = mul(x2, x2)
    lead = add(F.pow(F.sub(ctx.u, 1), 3), 1)
    terms = [
        mul(lead, F.pow(x2, 3)),
        mul(x2sq, x1),
        mul(x2sq, x0),
        mul(2, mul(x2, mul(x1, x1))),
        mul(2, F.pow(x1, 3)),
    ]
    acc = terms[0]
    for t in terms[1:]:
        acc = add(acc, t)
    return acc


def rel_trace_zx(ctx: TowerCtx, z: Coords, x: Coords):
    """``Tr_r^n(z x) = 2(z2 + z0) x2 + 2 z1 x1 + 2 z2 x0`` (both cases)."""
    F = ctx.F
    mul, add = F.mul, F.add
    z0, z1, z2 = z
    x0, x1, x2 = x
    return mul(2, add(add(mul(add(z2, z0), x2), mul(z1, x1)), mul(z2, x0)))


def abs_trace_xd_arg(ctx: TowerCtx, x: Coords):
    """The F-element whose F-trace is ``Tr_1^n(x^d)``."""
    F = ctx.F
    mul, add = F.mul, F.add
    x0, x1, x2 = x
    x2sq = mul(x2, x2)
    if ctx.case is Case.A:
        # x2^2 x1 + x2^2 x0 + 2 x2 x1^2 + u x2 + 2 x1
        k21, k1 = 1, 2
    else:
        # 2 x2^2 x1 + x2^2 x0 + 2 x2 x1^2 + u x2 + x1
        k21, k1 = 2, 1
    acc = mul(k21, mul(x2sq, x1))
    for t in (mul(x2sq, x0), mul(2, mul(x2, mul(x1, x1))), mul(ctx.u, x2), mul(k1, x1)):
        acc = add(acc, t)
    return acc


def abs_trace_xd(ctx: TowerCtx, x: Coords):
    return ctx.F.trace(abs_trace_xd_arg(ctx, x))


def abs_trace_zx(ctx: TowerCtx, z: Coords, x: Coords):
    return ctx.F.trace(rel_trace_zx(ctx, z, x))


def frobenius_coords(ctx: TowerCtx, x: Coords) -> Coords:
    """Coordinates of ``x^(3^r)``: substitute ``alpha -> alpha + 1``."""
    F = ctx.F
    x0, x1, x2 = x
    return Coords(
        F.add(F.add(x0, x1), x2),
        F.add(x1, F.mul(2, x2)),
        x2,
    )
