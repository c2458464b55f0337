"""Ternary m-sequences, decimation and periodic cross-correlation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .charsum import EisensteinInt


class SequenceError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class TernarySeq:
    symbols: np.ndarray

    @property
    def period(self) -> int:
        return len(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def __getitem__(self, t):
        return int(self.symbols[t % self.period])

    def __eq__(self, other):
        return isinstance(other, TernarySeq) and np.array_equal(self.symbols, other.symbols)

    def to_string(self) -> str:
        return "".join(map(str, self.symbols.tolist()))

    @classmethod
    def from_string(cls, text: str) -> "TernarySeq":
        return cls(np.array([int(ch) for ch in text.strip()], dtype=np.int64))


def m_sequence(ctx, g: int | None = None) -> TernarySeq:
    """``a_t = Tr(g^t)`` over one period.

    ``ctx`` is anything with ``exp_table``, ``log_table``, ``trace_table``
    and ``order`` (a :class:`~ternxc.gf.FieldCtx` or a tower).
    """
    N = ctx.order
    lg = 1 if g is None else int(ctx.log_table[g])
    if g is not None and (g == 0 or math.gcd(lg, N) != 1):
        raise SequenceError(f"element {g} is not primitive")
    powers = ctx.exp_table[(lg * np.arange(N, dtype=np.int64)) % N]
    return TernarySeq(np.asarray(ctx.trace_table[powers], dtype=np.int64))


def decimate(s: TernarySeq, d: int) -> TernarySeq:
    N = s.period
    if math.gcd(d, N) != 1:
        raise SequenceError(f"gcd({d}, {N}) != 1")
    return TernarySeq(s.symbols[(d * np.arange(N, dtype=np.int64)) % N])


def cross_correlation(a: TernarySeq, b: TernarySeq, tau: int) -> EisensteinInt:
    """``C_{a,b}(tau) = sum_t w^(a_{t+tau} - b_t)``."""
    if a.period != b.period:
        raise SequenceError(f"period mismatch: {a.period} vs {b.period}")
    shifted = np.roll(a.symbols, -(tau % a.period))
    return EisensteinInt.from_counts(np.bincount((shifted - b.symbols) % 3, minlength=3))


def correlation_values(a: TernarySeq, b: TernarySeq, taus=None) -> list[EisensteinInt]:
    """``C_{a,b}(tau)`` for every ``tau`` in ``taus`` (default: a full period)."""
    if a.period != b.period:
        raise SequenceError(f"period mismatch: {a.period} vs {b.period}")
    N = a.period
    a2 = np.concatenate([a.symbols, a.symbols])
    out = []
    for tau in range(N) if taus is None else taus:
        tau %= N
        c = np.bincount((a2[tau : tau + N] - b.symbols) % 3, minlength=3)
        out.append(EisensteinInt.from_counts(c))
    return out
