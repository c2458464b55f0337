"""Table-driven arithmetic in GF(3) and GF(3^m).

Elements are packed base-3 digit vectors: the element
``c_0 + c_1 x + ... + c_{m-1} x^{m-1}`` of ``GF(3)[x]/(f)`` has index
``c_0 + 3 c_1 + ... + 3^{m-1} c_{m-1}``.  Every table in :class:`FieldCtx`
is indexed this way, and the vectorised helpers accept either ints or
numpy integer arrays.

Polynomials over GF(3) (:class:`Poly3`) are coefficient tuples, constant
term first, and serialise as comma-separated digits: ``x^3 - x - 1`` is
``"2,2,0,1"``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

MAX_DEGREE = 12


class FieldError(ValueError):
    """Invalid field parameter (bad degree, mismatched fields, ...)."""


class ReducibleModulusError(FieldError):
    def __init__(self, modulus: "Poly3", factor: "Poly3"):
        self.modulus = modulus
        self.factor = factor
        super().__init__(f"modulus {modulus} is reducible: divisible by {factor}")


# ---------------------------------------------------------------------------
# Polynomials over GF(3)


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmod(a, m):
    a = _trim(a)
    dm = len(m) - 1
    inv_lead = m[-1]  # 1^-1 = 1, 2^-1 = 2
    while len(a) - 1 >= dm and a:
        q = (a[-1] * inv_lead) % 3
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - q * mi) % 3
        a = _trim(a)
    return a


def _pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % 3
    return _trim(out)


def _psub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % 3 for x, y in zip(a, b)])


def _pgcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _pmod(a, b)
    if a and a[-1] == 2:
        a = [(2 * c) % 3 for c in a]
    return a


def _ppowmod(base, e, m):
    result = [1]
    base = _pmod(base, m)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base), m)
        base = _pmod(_pmul(base, base), m)
        e >>= 1
    return result


@dataclass(frozen=True)
class Poly3:
    """Polynomial over GF(3), coefficients constant term first."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(v) for v in self.coeffs)
        if any(v not in (0, 1, 2) for v in c):
            raise FieldError(f"coefficients must be base-3 digits, got {c}")
        object.__setattr__(self, "coeffs", tuple(_trim(c)))

    @classmethod
    def parse(cls, text: str) -> "Poly3":
        return cls(tuple(int(t) for t in text.split(",")))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __str__(self):
        return ",".join(str(c) for c in self.coeffs)

    def __call__(self, v: int) -> int:
        return sum(c * v**i for i, c in enumerate(self.coeffs)) % 3

    def __mul__(self, other: "Poly3") -> "Poly3":
        return Poly3(tuple(_pmul(self.coeffs, other.coeffs)))

    def __mod__(self, other: "Poly3") -> "Poly3":
        return Poly3(tuple(_pmod(self.coeffs, other.coeffs)))


def find_factor(p: Poly3) -> Poly3 | None:
    """Return a proper factor of ``p`` (monic), or None if ``p`` is irreducible.

    Uses distinct-degree splitting: ``gcd(p, x^(3^k) - x)`` collects every
    irreducible factor of degree dividing ``k``.
    """
    n = p.degree
    if n < 1:
        raise FieldError("irreducibility is undefined for constants")
    coeffs = list(p.coeffs)
    if n == 1:
        return None
    xpow = [0, 1]
    for k in range(1, n // 2 + 1):
        xpow = _ppowmod(xpow, 3, coeffs)
        g = _pgcd(coeffs, _psub(xpow, [0, 1]))
        if len(g) > 1:
            if len(g) - 1 < n:
                return Poly3(tuple(g))
            return _small_factor(coeffs)
    return None


def _small_factor(coeffs):
    # every factor has degree <= n/2 here; exhaustive monic divisor search
    n = len(coeffs) - 1
    for deg in range(1, n // 2 + 1):
        for low in itertools.product(range(3), repeat=deg):
            cand = list(low) + [1]
            if not _pmod(coeffs, cand):
                return Poly3(tuple(cand))
    raise AssertionError("no factor found for a reducible polynomial")


def is_irreducible(p: Poly3) -> bool:
    return find_factor(p) is None


def _prime_factors(n: int) -> list[int]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def is_primitive(p: Poly3) -> bool:
    """True iff ``p`` is irreducible and its root generates GF(3^deg)*."""
    n = p.degree
    if n > 1 and any(p(v) == 0 for v in range(3)):
        return False
    order = 3**n - 1
    coeffs = list(p.coeffs)
    x = _pmod([0, 1], coeffs)
    if not x or _ppowmod(x, order, coeffs) != [1]:
        return False
    if any(_ppowmod(x, order // q, coeffs) == [1] for q in _prime_factors(order)):
        return False
    return is_irreducible(p)


def _batch_x_pow(low: np.ndarray, e: int) -> np.ndarray:
    """``x^e mod p`` for a batch of monic ``p`` given by their low coefficients.

    ``low`` has shape (K, m); row k holds c_0..c_{m-1} of p_k.  Returns the
    residues as a (K, m) array.
    """
    K, m = low.shape
    neg = (-low) % 3  # x^m = neg . (1, x, ..., x^{m-1})

    def reduce(prod):
        prod = prod % 3
        for deg in range(prod.shape[1] - 1, m - 1, -1):
            top = prod[:, deg : deg + 1]
            prod[:, deg - m : deg] = (prod[:, deg - m : deg] + top * neg) % 3
            prod[:, deg] = 0
        return prod[:, :m]

    res = np.zeros((K, m), dtype=np.int64)
    res[:, 0] = 1
    for bit in bin(e)[2:]:
        sq = np.zeros((K, 2 * m - 1), dtype=np.int64)
        for i in range(m):
            sq[:, i : i + m] += res[:, i : i + 1] * res
        res = reduce(sq)
        if bit == "1":
            shifted = np.zeros((K, m + 1), dtype=np.int64)
            shifted[:, 1:] = res
            res = reduce(shifted)
    return res


def smallest_primitive_poly(m: int) -> Poly3:
    """Lexicographically smallest monic primitive polynomial of degree ``m``.

    Coefficient vectors ``(c_0, ..., c_{m-1}, 1)`` are compared constant
    term first.
    """
    order = 3**m - 1
    # the root's norm (-1)^m c_0 must generate GF(3)*, i.e. equal 2
    c0 = (2 * (-1) ** m) % 3
    if m == 1:
        return Poly3((c0, 1))
    one = np.zeros(m, dtype=np.int64)
    one[0] = 1
    rest = itertools.product(range(3), repeat=m - 1)
    while True:
        block = list(itertools.islice(rest, 243))
        if not block:
            break
        low = np.array([(c0,) + t for t in block], dtype=np.int64)
        ok = np.all(_batch_x_pow(low, order) == one, axis=1)
        for q in _prime_factors(order):
            ok &= ~np.all(_batch_x_pow(low, order // q) == one, axis=1)
        for row in low[ok]:
            p = Poly3(tuple(int(c) for c in row) + (1,))
            if is_irreducible(p):
                return p
    raise AssertionError(f"no primitive polynomial of degree {m}")


# ---------------------------------------------------------------------------
# Vectorised digit arithmetic on packed indices


def digit_add(a, b, m: int):
    """Digit-wise mod-3 sum of two packed base-3 vectors of length ``m``."""
    out = 0
    p = 1
    for _ in range(m):
        out = out + ((a // p) % 3 + (b // p) % 3) % 3 * p
        p *= 3
    return out


def digit_scale(a, k: int, m: int):
    """Multiply every digit by the GF(3) scalar ``k``."""
    k %= 3
    if k == 1:
        return a
    if k == 0:
        return a * 0
    out = 0
    p = 1
    for _ in range(m):
        out = out + ((2 * ((a // p) % 3)) % 3) * p
        p *= 3
    return out


def to_digits(e: int, m: int) -> tuple[int, ...]:
    return tuple((e // 3**i) % 3 for i in range(m))


def from_digits(digits) -> int:
    return sum(int(d) * 3**i for i, d in enumerate(digits))


# ---------------------------------------------------------------------------
# Field context


@dataclass(eq=False, frozen=True)
class FieldCtx:
    """GF(3^m) as ``GF(3)[x]/(modulus)`` with exp/log/trace tables.

    Build with :func:`build_field`.  Immutable; safe to share between
    worker processes.
    """

    m: int
    modulus: Poly3
    generator: int
    exp_table: np.ndarray = field(repr=False)
    log_table: np.ndarray = field(repr=False)
    trace_table: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return 3**self.m

    @property
    def order(self) -> int:
        return 3**self.m - 1

    # -- index-level arithmetic; ints or int64 arrays -----------------------

    def add(self, a, b):
        return digit_add(a, b, self.m)

    def neg(self, a):
        return digit_scale(a, 2, self.m)

    def sub(self, a, b):
        return digit_add(a, digit_scale(b, 2, self.m), self.m)

    def mul(self, a, b):
        if np.isscalar(a) and np.isscalar(b):
            if a == 0 or b == 0:
                return 0
            return int(self.exp_table[(self.log_table[a] + self.log_table[b]) % self.order])
        a = np.asarray(a)
        b = np.asarray(b)
        prod = self.exp_table[(self.log_table[a] + self.log_table[b]) % self.order]
        return np.where((a == 0) | (b == 0), 0, prod)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in GF(3^%d)" % self.m)
        return int(self.exp_table[(-self.log_table[a]) % self.order])

    def pow(self, a, k: int):
        if np.isscalar(a):
            if a == 0:
                if k < 0:
                    raise ZeroDivisionError("negative power of zero")
                return 1 if k == 0 else 0
            return int(self.exp_table[(int(self.log_table[a]) * k) % self.order])
        a = np.asarray(a)
        p = self.exp_table[(self.log_table[a] * k) % self.order]
        if k == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, p)

    def trace(self, a):
        """Absolute trace Tr_1^m, read from the table."""
        return self.trace_table[a] if not np.isscalar(a) else int(self.trace_table[a])

    def frobenius(self, a, times: int = 1):
        return self.pow(a, 3**times)

    def elt(self, value) -> "Elt":
        if isinstance(value, str):
            value = from_digits(int(t) for t in value.split(","))
        return Elt(self, int(value))

    def elements(self):
        return (Elt(self, i) for i in range(self.size))

    @cached_property
    def squares_mask(self) -> np.ndarray:
        mask = np.zeros(self.size, dtype=bool)
        mask[0] = True
        mask[self.exp_table[0 : self.order : 2]] = True
        return mask


def _times_x(arr, m, reduce_vec):
    top = arr // 3 ** (m - 1)
    low = (arr % 3 ** (m - 1)) * 3
    return digit_add(low, reduce_vec[top], m)


def _mul_fixed(arr, h, m, reduce_vec):
    """Multiply every entry of ``arr`` by the fixed element ``h`` (no tables)."""
    acc = np.zeros_like(arr)
    cur = arr
    for j, hj in enumerate(to_digits(h, m)):
        if hj:
            acc = digit_add(acc, digit_scale(cur, hj, m), m)
        if j < m - 1:
            cur = _times_x(cur, m, reduce_vec)
    return acc


def _pow_fixed(h, e, m, reduce_vec):
    result = np.array([1], dtype=np.int64)
    base = np.array([h], dtype=np.int64)
    while e:
        if e & 1:
            result = _mul_fixed(result, int(base[0]), m, reduce_vec)
        base = _mul_fixed(base, int(base[0]), m, reduce_vec)
        e >>= 1
    return int(result[0])


def build_field(m: int, modulus: Poly3 | str | None = None) -> FieldCtx:
    """Construct GF(3^m).

    Without ``modulus`` the lexicographically smallest primitive polynomial
    is used.  A supplied modulus must be irreducible but need not be
    primitive; the generator is then the primitive element of smallest
    index.
    """
    if not isinstance(m, int) or m < 1:
        raise FieldError(f"extension degree must be a positive integer, got {m!r}")
    if m > MAX_DEGREE:
        raise FieldError(f"degree {m} exceeds the table bound {MAX_DEGREE}")
    if modulus is None:
        modulus = smallest_primitive_poly(m)
    elif isinstance(modulus, str):
        modulus = Poly3.parse(modulus)
    if modulus.degree != m:
        raise FieldError(f"modulus degree {modulus.degree} != {m}")
    if modulus.coeffs[-1] != 1:
        modulus = Poly3(tuple((2 * c) % 3 for c in modulus.coeffs))
    factor = find_factor(modulus)
    if factor is not None:
        raise ReducibleModulusError(modulus, factor)

    size = 3**m
    order = size - 1
    # x^m = -(c_0 + ... + c_{m-1} x^{m-1}); reduce_vec[t] is t * x^m reduced
    neg_low = from_digits((-c) % 3 for c in modulus.coeffs[:-1])
    reduce_vec = np.array([0, neg_low, digit_scale(neg_low, 2, m)], dtype=np.int64)

    qs = _prime_factors(order)
    generator = None
    for cand in range(1, size):
        if all(_pow_fixed(cand, order // q, m, reduce_vec) != 1 for q in qs):
            generator = cand
            break
    assert generator is not None

    # powers in blocks: exp[kB + j] = g^(kB) * g^j
    block = max(1, int(order**0.5))
    first = np.empty(block, dtype=np.int64)
    cur = np.array([1], dtype=np.int64)
    for j in range(block):
        first[j] = cur[0]
        cur = _mul_fixed(cur, generator, m, reduce_vec)
    step = int(cur[0])
    chunks = [first]
    while sum(len(c) for c in chunks) < order:
        chunks.append(_mul_fixed(chunks[-1], step, m, reduce_vec))
    exp_table = np.concatenate(chunks)[:order]

    log_table = np.full(size, -1, dtype=np.int64)
    log_table[exp_table] = np.arange(order, dtype=np.int64)
    if log_table[0] != -1 or np.any(log_table[1:] < 0):
        raise AssertionError("generator is not primitive; exp table is not a bijection")
    log_table[0] = 0

    # trace is GF(3)-linear: tabulate Tr(x^i) on the basis, then extend
    basis_tr = []
    for i in range(m):
        e = 3**i
        acc = 0
        for _ in range(m):
            acc = digit_add(acc, e, m)
            e = int(exp_table[(int(log_table[e]) * 3) % order])
        assert acc < 3, "trace left the prime field"
        basis_tr.append(acc)
    idx = np.arange(size, dtype=np.int64)
    trace_table = np.zeros(size, dtype=np.int64)
    for i, t in enumerate(basis_tr):
        trace_table = (trace_table + ((idx // 3**i) % 3) * t) % 3

    for arr in (exp_table, log_table, trace_table):
        arr.flags.writeable = False
    return FieldCtx(m, modulus, generator, exp_table, log_table, trace_table)


# ---------------------------------------------------------------------------
# Element wrapper


@dataclass(frozen=True)
class Elt:
    """An element of a :class:`FieldCtx`, with operator overloads."""

    field: FieldCtx
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.field.size:
            raise FieldError(f"index {self.index} outside GF(3^{self.field.m})")

    @property
    def digits(self) -> tuple[int, ...]:
        return to_digits(self.index, self.field.m)

    def _other(self, other) -> int:
        if isinstance(other, Elt):
            if other.field is not self.field:
                raise FieldError("operands belong to different fields")
            return other.index
        if isinstance(other, int):
            return other % 3
        return NotImplemented

    def __add__(self, other):
        return Elt(self.field, self.field.add(self.index, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Elt(self.field, self.field.sub(self.index, self._other(other)))

    def __rsub__(self, other):
        return Elt(self.field, self.field.sub(self._other(other), self.index))

    def __neg__(self):
        return Elt(self.field, self.field.neg(self.index))

    def __mul__(self, other):
        return Elt(self.field, self.field.mul(self.index, self._other(other)))

    __rmul__ = __mul__

    def inv(self) -> "Elt":
        return Elt(self.field, self.field.inv(self.index))

    def __truediv__(self, other):
        return self * Elt(self.field, self.field.inv(self._other(other)))

    def __pow__(self, k: int):
        return Elt(self.field, self.field.pow(self.index, k))

    def __bool__(self):
        return self.index != 0

    def __str__(self):
        return ",".join(map(str, self.digits))


def trace(e: Elt, target_degree: int) -> Elt:
    """Relative trace of ``e`` down to the subfield of degree ``target_degree``.

    The result is returned as an element of ``e.field`` that is fixed by
    the ``3^target_degree`` Frobenius.
    """
    F = e.field
    if target_degree < 1 or F.m % target_degree:
        raise FieldError(f"{target_degree} does not divide {F.m}")
    acc = 0
    cur = e.index
    for _ in range(F.m // target_degree):
        acc = F.add(acc, cur)
        cur = F.frobenius(cur, target_degree)
    return Elt(F, acc)


def sqrt_set(F: FieldCtx, c: Elt | int) -> set[int]:
    """All ``y`` with ``y^2 = c``, as element indices."""
    c = c.index if isinstance(c, Elt) else int(c)
    if c == 0:
        return {0}
    k = int(F.log_table[c])
    if k % 2:
        return set()
    y = int(F.exp_table[k // 2])
    return {y, F.neg(y)}


def is_square(F: FieldCtx, c: int) -> bool:
    """Euler criterion: ``c^((q-1)/2) == 1``."""
    return c == 0 or F.pow(c, F.order // 2) == 1


def dlog(e: Elt) -> int:
    if e.index == 0:
        raise ValueError("discrete log of zero")
    return int(e.field.log_table[e.index])
