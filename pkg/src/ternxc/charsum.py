"""Exact character sums with values in the Eisenstein integers Z[w].

Every sum here is accumulated as the counts ``(c0, c1, c2)`` of phases
0, 1, 2 and only then folded into ``a + b w`` with ``w^2 = -1 - w``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .gf import FieldCtx, sqrt_set
from .tower import Case, Coords, TowerCtx


@dataclass(frozen=True, order=True)
class EisensteinInt:
    """``a + b*w`` with ``w`` a primitive cube root of unity."""

    a: int
    b: int = 0

    @classmethod
    def from_counts(cls, counts) -> "EisensteinInt":
        c0, c1, c2 = (int(v) for v in counts)
        return cls(c0 - c2, c1 - c2)

    @classmethod
    def omega(cls, k: int = 1) -> "EisensteinInt":
        return (cls(1, 0), cls(0, 1), cls(-1, -1))[k % 3]

    @classmethod
    def parse(cls, text: str) -> "EisensteinInt":
        m = re.fullmatch(r"\s*(-?\d+)\s*([+-])\s*(\d+)\*w\s*", text)
        if m:
            b = int(m.group(3))
            return cls(int(m.group(1)), b if m.group(2) == "+" else -b)
        return cls(int(text))

    def __add__(self, other):
        other = _lift(other)
        return EisensteinInt(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return EisensteinInt(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        o = _lift(other)
        # (a + bw)(c + dw) = ac + (ad + bc)w + bd(-1 - w)
        return EisensteinInt(self.a * o.a - self.b * o.b, self.a * o.b + self.b * o.a - self.b * o.b)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = EisensteinInt(1)
        for _ in range(k):
            out = out * self
        return out

    def conj(self) -> "EisensteinInt":
        return EisensteinInt(self.a - self.b, -self.b)

    def norm(self) -> int:
        return self.a * self.a - self.a * self.b + self.b * self.b

    @property
    def is_integer(self) -> bool:
        return self.b == 0

    def as_integer(self) -> int:
        if self.b:
            raise ArithmeticError(f"{self} is not a rational integer")
        return self.a

    def __str__(self):
        return f"{self.a}{'+' if self.b >= 0 else '-'}{abs(self.b)}*w"


def _lift(x) -> EisensteinInt:
    if isinstance(x, EisensteinInt):
        return x
    if isinstance(x, (int, np.integer)):
        return EisensteinInt(int(x))
    raise TypeError(f"cannot lift {type(x).__name__} to Z[w]")


def phase_counts(phases) -> np.ndarray:
    return np.bincount(np.asarray(phases, dtype=np.int64) % 3, minlength=3)


def character_sum(F: FieldCtx, phase) -> EisensteinInt:
    """``sum_e w^phase(e)`` over all of F.

    ``phase`` is called once with the array of all element indices and must
    return the GF(3)-valued phases elementwise.
    """
    return EisensteinInt.from_counts(phase_counts(phase(np.arange(F.size, dtype=np.int64))))


def quadratic_weil_sum(F: FieldCtx, a: int, b: int) -> EisensteinInt:
    """``sum_{x in F} chi(a x^2 + b x)`` by enumeration."""
    return character_sum(F, lambda xs: F.trace(F.add(F.mul(a, F.mul(xs, xs)), F.mul(b, xs))))


def gauss_sum(F: FieldCtx) -> EisensteinInt:
    return quadratic_weil_sum(F, 1, 0)


def quadratic_char(F: FieldCtx, a: int) -> int:
    """``a^((q-1)/2)`` read as +1/-1 (0 for a = 0)."""
    if a == 0:
        return 0
    return 1 if F.pow(a, F.order // 2) == 1 else -1


def quadratic_weil_sum_closed(F: FieldCtx, a: int, b: int, G: EisensteinInt | None = None) -> EisensteinInt:
    """Completed-square evaluation: ``chi(-b^2/a) * eta(a) * G`` for ``a != 0``."""
    if a == 0:
        return EisensteinInt(F.size if b == 0 else 0)
    if G is None:
        G = gauss_sum(F)
    shift = F.trace(F.neg(F.mul(F.mul(b, b), F.inv(a))))
    return EisensteinInt.omega(shift) * quadratic_char(F, a) * G


# ---------------------------------------------------------------------------
# Weil sums S_d(z) = sum_{x in E} chi(z x - x^d)


def weil_sum_bruteforce(ctx: TowerCtx, z: int, d: int | None = None) -> EisensteinInt:
    """``S_d(z)`` by summing over all ``3^n`` elements of E.

    ``d`` defaults to the tower's decimation; any exponent is accepted
    (``d = 1`` is a sanity mode).
    """
    d = ctx.d if d is None else d
    xs = np.arange(ctx.size, dtype=np.int64)
    T = ctx.trace_table
    phases = T[ctx.mul(z, xs)] - T[ctx.pow(xs, d)]
    return EisensteinInt.from_counts(phase_counts(phases))


def _inner_coeffs(ctx: TowerCtx, x2, z0, z1, z2):
    """Coefficients (a, b, const) of the inner x1-quadratic after eliminating x0.

    Case A:  x2 x1^2 + (2 z1 - x2^2 + 1) x1 + (2 z2 + 2 z0 - u) x2
    Case B:  x2 x1^2 + (2 z1 + x2^2 + 2) x1 + (2 z2 + 2 z0 - u) x2
    """
    F = ctx.F
    x2sq = F.mul(x2, x2)
    if ctx.case is Case.A:
        b = F.add(F.sub(F.mul(2, z1), x2sq), 1)
    else:
        b = F.add(F.add(F.mul(2, z1), x2sq), 2)
    const = F.mul(F.sub(F.mul(2, F.add(z2, z0)), ctx.u), x2)
    return x2, b, const


def weil_sum_reduced(ctx: TowerCtx, z: Coords, fast: bool = False) -> int:
    """``S_d(z)`` from the subfield-reduced sum.

    Summing out x0 forces ``x2^2 = -z2``; what remains is
    ``3^r * sum_{x2 in M} sum_{x1 in F} chi_F(inner(x1))``.  With
    ``fast=True`` the x1-sum uses the completed-square closed form.
    """
    F = ctx.F
    z0, z1, z2 = z
    total = EisensteinInt(0)
    xs = np.arange(F.size, dtype=np.int64)
    G = gauss_sum(F) if fast else None
    for x2 in sorted(sqrt_set(F, F.neg(z2))):
        a, b, const = _inner_coeffs(ctx, x2, z0, z1, z2)
        if fast:
            inner = quadratic_weil_sum_closed(F, a, b, G) * EisensteinInt.omega(F.trace(const))
        else:
            arg = F.add(F.add(F.mul(a, F.mul(xs, xs)), F.mul(b, xs)), const)
            inner = EisensteinInt.from_counts(phase_counts(F.trace(arg)))
        total = total + inner
    return (total * F.size).as_integer()


def reduced_values(ctx: TowerCtx) -> np.ndarray:
    """``S_d(z)`` for every z in E (indexed by tower index) via the reduced sum.

    Vectorised over ``(z0, z1, x1)`` for each ``(z2, x2)``; cost is
    ``O(3^{3r})`` per square class rather than ``O(3^{6r})`` brute force.
    """
    F = ctx.F
    q = F.size
    counts = np.zeros((q, q, q, 3), dtype=np.int64)  # [z2, z1, z0, phase]
    z0 = np.arange(q, dtype=np.int64)[None, :, None]
    z1 = np.arange(q, dtype=np.int64)[:, None, None]
    x1 = np.arange(q, dtype=np.int64)[None, None, :]
    for z2 in range(q):
        for x2 in sorted(sqrt_set(F, F.neg(z2))):
            a, b, const = _inner_coeffs(ctx, x2, z0, z1, z2)
            arg = F.add(F.add(F.mul(a, F.mul(x1, x1)), F.mul(b, x1)), const)
            ph = F.trace(np.broadcast_to(arg, (q, q, q)))
            for k in range(3):
                counts[z2, :, :, k] += np.count_nonzero(ph == k, axis=2)
    re = counts[..., 0] - counts[..., 2]
    im = counts[..., 1] - counts[..., 2]
    if np.any(im):
        raise ArithmeticError("reduced Weil sum has a nonzero w-component")
    # counts is [z2, z1, z0]; flattening matches index z0 + q z1 + q^2 z2
    return (re * q).reshape(-1)


def brute_values(ctx: TowerCtx, lz_range: range | None = None, d: int | None = None) -> np.ndarray:
    """Brute-force ``S_d(z)`` for ``z = g^k``, ``k`` in ``lz_range``.

    Writing ``x = g^j``, the phase is ``Tr(g^(k+j)) - Tr(g^(dj))``; each z
    costs one pass over all ``3^n - 1`` nonzero x plus the ``x = 0`` term.
    """
    d = ctx.d if d is None else d
    N = ctx.order
    if lz_range is None:
        lz_range = range(N)
    tp = ctx.trace_of_power
    tp2 = np.concatenate([tp, tp])
    td = tp[(d * np.arange(N, dtype=np.int64)) % N]
    out = np.empty(len(lz_range), dtype=np.int64)
    for i, k in enumerate(lz_range):
        c = np.bincount((tp2[k : k + N] - td) % 3, minlength=3)
        c[0] += 1  # x = 0
        if c[1] != c[2]:
            raise ArithmeticError(f"S_d(g^{k}) has a nonzero w-component")
        out[i] = c[0] - c[2]
    return out
