import numpy as np
import pytest

from ternxc.charsum import EisensteinInt, weil_sum_bruteforce
from ternxc.seq import (
    SequenceError,
    TernarySeq,
    correlation_values,
    cross_correlation,
    decimate,
    m_sequence,
)
from ternxc.spectrum import tower_for
from ternxc.tower import Case


@pytest.fixture(scope="module")
def t1():
    return tower_for(1, "A")


@pytest.mark.parametrize("r", [1, 2, 3])
def test_balance(r):
    a = m_sequence(tower_for(r, "A"))
    n = 3 * r
    assert a.period == 3**n - 1
    assert list(np.bincount(a.symbols, minlength=3)) == [3 ** (n - 1) - 1, 3 ** (n - 1), 3 ** (n - 1)]


def test_r1_sequence(t1):
    a = m_sequence(t1)
    assert len(a) == 26
    assert a[0] == 0  # Tr(1) = n mod 3


def test_shift_and_add(t1):
    a = m_sequence(t1)
    shifts = {tuple(np.roll(a.symbols, -k)) for k in range(26)}
    for tau in range(1, 26):
        diff = (np.roll(a.symbols, -tau) - a.symbols) % 3
        assert tuple(diff) in shifts


def test_other_generator_is_a_shift(t1):
    a = m_sequence(t1)
    g2 = int(t1.exp_table[5])  # gcd(5, 26) = 1
    b = m_sequence(t1, g2)
    assert sorted(c.a for c in correlation_values(a, decimate(a, 5))) == sorted(
        c.a for c in correlation_values(b, decimate(b, 5))
    )


def test_non_primitive_generator_rejected(t1):
    with pytest.raises(SequenceError):
        m_sequence(t1, int(t1.exp_table[2]))


def test_decimate_identities(t1):
    a = m_sequence(t1)
    assert decimate(a, 1) == a
    assert decimate(decimate(a, 5), 7) == decimate(a, 35 % 26)
    with pytest.raises(SequenceError):
        decimate(a, 2)


def test_decimation_spot_check(t1):
    b = decimate(m_sequence(t1), 5)
    for t in (0, 1, 2):
        assert b[t] == t1.trace_table[t1.pow(t1.pow(t1.generator, t), 5)]


def test_autocorrelation_peak(t1):
    a = m_sequence(t1)
    assert cross_correlation(a, a, 0) == EisensteinInt(26)


def test_sum_over_shifts(t1):
    a = m_sequence(t1)
    b = decimate(a, 5)
    total = sum(correlation_values(a, b), EisensteinInt(0))
    assert total == EisensteinInt(1)


def test_periodicity(t1):
    a = m_sequence(t1)
    b = decimate(a, 5)
    for tau in range(26):
        assert cross_correlation(a, b, tau) == cross_correlation(a, b, tau + 26)


def test_period_mismatch():
    a = TernarySeq(np.zeros(8, dtype=np.int64))
    b = TernarySeq(np.zeros(26, dtype=np.int64))
    with pytest.raises(SequenceError):
        cross_correlation(a, b, 0)


def test_string_round_trip(t1):
    a = m_sequence(t1)
    s = a.to_string()
    assert len(s) == 26 and set(s) <= set("012")
    assert TernarySeq.from_string(s) == a


@pytest.mark.parametrize("r", [1, 2])
@pytest.mark.parametrize("case", list(Case))
def test_bridge_identity_exhaustive(r, case):
    T = tower_for(r, case)
    a = m_sequence(T)
    b = decimate(a, T.d)
    for tau, c in enumerate(correlation_values(a, b)):
        z = T.pow(T.generator, tau)
        assert c + 1 == weil_sum_bruteforce(T, z)


@pytest.mark.parametrize("case", list(Case))
def test_bridge_identity_sampled_r3(case):
    T = tower_for(3, case)
    a = m_sequence(T)
    b = decimate(a, T.d)
    taus = np.random.default_rng(7).integers(0, T.order, 120).tolist()
    for tau, c in zip(taus, correlation_values(a, b, taus)):
        assert c + 1 == weil_sum_bruteforce(T, T.pow(T.generator, tau))
