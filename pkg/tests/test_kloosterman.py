import math

import numpy as np
import pytest

from tracelab import (TraceFn, kl_all, kl_brute, kl_values, kloosterman_s,
                      m_sum_direct, m_sum_formula, make_field, mconv)
from tracelab.errors import BadDivisibility, BadParam, OracleTooLarge
from tracelab.ffield import is_prime

PRIMES_31 = [p for p in range(2, 32) if is_prime(p)]


def test_kl1_is_additive_character(f5):
    vals = kl_all(1, f5).values
    assert np.abs(vals - f5.e_p).max() < 1e-15


def test_kl2_p5_examples(f5):
    # enumerate x + 1/x mod 5 over x in 1..4: {2, 0, 0, 3}
    vals = kl_all(2, f5).values
    expect_1 = (2 + 2 * math.cos(4 * math.pi / 5)) / math.sqrt(5)
    expect_4 = (2 + 2 * math.cos(2 * math.pi / 5)) / math.sqrt(5)
    assert abs(vals[1] - expect_1) < 1e-12
    assert abs(expect_1 - 0.1708204) < 1e-7
    assert abs(vals[4] - expect_4) < 1e-12
    assert abs(expect_4 - 1.1708204) < 1e-7


def test_kl_brute_guard(f5):
    with pytest.raises(OracleTooLarge):
        kl_brute(5, 1, f5)
    with pytest.raises(OracleTooLarge):
        kl_brute(2, 1, make_field(37))


def test_kl_brute_vs_recursion_exhaustive():
    for p in PRIMES_31:
        f = make_field(p)
        for k in range(1, 5):
            table = kl_all(k, f).values
            for n in range(p):
                assert abs(table[n] - kl_brute(k, n, f)) < 1e-10, (p, k, n)


def test_kl_zero_value_convention():
    for p in (5, 13, 31):
        f = make_field(p)
        for k in range(1, 7):
            expect = (-1) ** (k - 1) * p ** (-(k - 1) / 2)
            assert abs(kl_all(k, f).values[0] - expect) < 1e-9


def test_deligne_bound():
    for p in [q for q in range(3, 200) if is_prime(q)]:
        f = make_field(p)
        for k in range(1, 7):
            vals = kl_all(k, f).values
            assert np.abs(vals[1:]).max() <= k + 1e-9


def test_kl2_real():
    for p in [q for q in range(3, 500) if is_prime(q)]:
        f = make_field(p)
        assert np.abs(kl_all(2, f).values.imag).max() < 1e-10


def test_kl_consistent_with_mconv(f31):
    psi = TraceFn(f31, f31.e_p.copy())
    for k in range(2, 5):
        prev = TraceFn(f31, kl_values(k - 1, f31))
        via_conv = mconv(psi, prev).values
        table = kl_values(k, f31)
        assert np.abs(via_conv[1:] - table[1:]).max() < 1e-9


def test_kl_large_p_fft_route():
    # exercise the dlog/FFT path (p above the gather cutoff) against brute force
    f = make_field(2053)
    vals = kl_all(2, f).values
    for n in (1, 2, 1000):
        direct = sum(f.e_p[(x + n * f.inv[x]) % f.p] for x in range(1, f.p))
        assert abs(vals[n] - direct / math.sqrt(f.p)) < 1e-9


def test_kloosterman_s_examples():
    assert abs(kloosterman_s(0, 0, 6) - 2) < 1e-12          # phi(6) = 2
    assert abs(kloosterman_s(1, 1, 2) - 1) < 1e-12          # single term e(2/2) = 1
    assert abs(kloosterman_s(3, 5, 1) - 1) < 1e-12


def test_kloosterman_s_twisted_multiplicativity(rng):
    for _ in range(40):
        c1 = int(rng.integers(2, 16))
        c2 = int(rng.integers(2, 16))
        if math.gcd(c1, c2) != 1:
            continue
        m = int(rng.integers(0, 30))
        n = int(rng.integers(0, 30))
        c2b = pow(c2, -1, c1)
        c1b = pow(c1, -1, c2)
        lhs = kloosterman_s(m, n, c1 * c2)
        rhs = kloosterman_s(m * c2b, n * c2b, c1) * kloosterman_s(m * c1b, n * c1b, c2)
        assert abs(lhs - rhs) < 1e-9


def test_m_sum_trivial_modulus(f7):
    # c = 1: single empty phase times S(q^-1 r, q^-1 n; r) with r = n1 = 1
    val = m_sum_direct(2, 3, 1, 1, 1, 1, +1, f7)
    assert abs(val - 1) < 1e-12
    assert abs(m_sum_formula(2, 3, 1, 1, 1, 1, +1, f7) - 1) < 1e-12


def test_m_sum_spec_examples(f7):
    d = m_sum_direct(2, 3, 5, 1, 6, 1, +1, f7)
    g = m_sum_formula(2, 3, 5, 1, 6, 1, +1, f7)
    assert abs(d - g) < 1e-10
    d = m_sum_direct(1, 3, 3, 2, 4, 2, +1, f7)
    g = m_sum_formula(1, 3, 3, 2, 4, 2, +1, f7)
    assert abs(d - g) < 1e-10


def test_m_sum_bad_divisibility(f7):
    with pytest.raises(BadDivisibility):
        m_sum_direct(1, 1, 1, 1, 4, 3, +1, f7)


def test_m_sum_bad_params(f7):
    with pytest.raises(BadParam):
        m_sum_direct(1, 1, 2, 1, 4, 1, +1, f7)   # gcd(ell, c) > 1
    with pytest.raises(BadParam):
        m_sum_direct(1, 1, 1, 7, 2, 1, +1, f7)   # q | rc
    with pytest.raises(BadParam):
        m_sum_direct(1, 1, 1, 1, 2, 1, +2, f7)   # bad sign


def test_m_sum_seeded_grid():
    rng = np.random.default_rng(777)
    fields = {q: make_field(q) for q in (7, 11, 13)}
    checked = 0
    while checked < 200:
        q = int(rng.choice([7, 11, 13]))
        c = int(rng.integers(1, 31))
        r = int(rng.integers(1, 5))
        if math.gcd(q, r * c) != 1:
            continue
        divs = [d for d in range(1, r * c + 1) if (r * c) % d == 0]
        n1 = int(divs[rng.integers(0, len(divs))])
        ell = int(rng.integers(1, 40))
        if math.gcd(ell, c) != 1:
            continue
        m = int(rng.integers(0, 50))
        n = int(rng.integers(0, 50))
        sign = 1 if rng.integers(0, 2) else -1
        f = fields[q]
        d = m_sum_direct(m, n, ell, r, c, n1, sign, f)
        g = m_sum_formula(m, n, ell, r, c, n1, sign, f)
        assert abs(d - g) < 1e-8, (m, n, ell, r, c, n1, sign, q)
        checked += 1
