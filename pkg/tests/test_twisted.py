import math

import numpy as np
import pytest

from tracelab import (TraceFn, make_field, make_window, mellin_decompose_check,
                      parse_spec, realize, s_total, s_vr, scaling_experiment,
                      sym2_table)
from tracelab.errors import BadParam, TableTooSmall

from conftest import random_tracefn  # noqa: E402


@pytest.fixture(scope="module")
def gl3_small(gl2_small):
    return sym2_table(R=45, N=1100, gl2=gl2_small, bound=1100, validate=False)


def test_window_plain_values():
    V = make_window(1.0)
    assert V(1.5) == 1.0          # t = 0
    assert V(1.0) == 0.0
    assert V(2.0) == 0.0
    assert V(0.5) == 0.0 and V(3.0) == 0.0
    xs = np.linspace(1.01, 1.99, 101)
    assert np.all(V(xs) > 0)


def test_window_oscillated():
    V = make_window(8.0, "oscillated_bump")
    plain = make_window(8.0)
    xs = np.linspace(1.0, 2.0, 101)
    assert np.abs(V(xs) - plain(xs) * np.cos(8.0 * xs)).max() < 1e-15


def test_window_wide_plateau():
    U = make_window(1.0, wide=True)
    for x in (1.0, 1.5, 2.0):
        assert abs(U(x) - 1.0) < 1e-12
    assert U(0.009) == 0.0
    assert U(101.0) == 0.0
    assert 0 < U(0.5) < 1
    assert 0 < U(50.0) < 1


def test_window_bad_params():
    with pytest.raises(BadParam):
        make_window(0.5)
    with pytest.raises(BadParam):
        make_window(1.0, "boxcar")


def test_window_derivative_bounds():
    # constants measured on a 10^4-point grid and pinned; the plain bump's
    # raw derivative maxima are ~(4.35, 85, 4.1e3, 3.7e5), and at Z = 8 the
    # oscillated bump's scaled constants |V^(i)|/Z^i stay O(1)
    V = make_window(1.0)
    pins = {1: 4.5, 2: 90.0, 3: 4300.0, 4: 380000.0}
    for order, cap in pins.items():
        b = V.derivative_bound(order)
        assert b <= cap
        assert b >= 0.2 * cap  # the pin is tight, not vacuous
    W = make_window(8.0, "oscillated_bump")
    osc_pins = {1: 1.1, 2: 1.4, 3: 9.0, 4: 95.0}
    for order, cap in osc_pins.items():
        assert W.derivative_bound(order) <= cap


def test_s_vr_zero_window_and_zero_fn(f31, gl2_small, gl3_small):
    V = make_window(1.0)
    zero = TraceFn(f31, np.zeros(31))
    assert s_vr(zero, 100.0, 1, V, gl2_small, gl3_small) == 0


def test_s_vr_constant_k_oracle(f31, gl2_small, gl3_small):
    # K == 1, r = 1, X = 10: nine-term sum read straight off the tables
    V = make_window(1.0)
    ones = TraceFn(f31, np.ones(31))
    got = s_vr(ones, 10.0, 1, V, gl2_small, gl3_small)
    expect = sum(gl3_small.lam(1, n) * gl2_small.lam[n] * V(n / 10.0)
                 for n in range(11, 20))
    assert abs(got - expect) < 1e-12


def test_s_vr_regression_value(f31, gl2_small, gl3_small):
    V = make_window(1.0)
    K = realize(parse_spec("kl3"), f31)
    got = s_vr(K, 100.0, 2, V, gl2_small, gl3_small)
    assert abs(got - (1.105104493181616 + 2.653311118912665j)) < 1e-10


def test_s_vr_linear_in_k(f31, gl2_small, gl3_small, rng):
    V = make_window(1.0)
    K1 = random_tracefn(f31, rng)
    K2 = random_tracefn(f31, rng)
    a, b = 1.5 - 2j, 0.25j
    combo = TraceFn(f31, a * K1.values + b * K2.values)
    lhs = s_vr(combo, 200.0, 1, V, gl2_small, gl3_small)
    rhs = (a * s_vr(K1, 200.0, 1, V, gl2_small, gl3_small)
           + b * s_vr(K2, 200.0, 1, V, gl2_small, gl3_small))
    assert abs(lhs - rhs) < 1e-9


def test_s_vr_table_guard(f31, gl2_small, gl3_small):
    V = make_window(1.0)
    K = realize(parse_spec("kl3"), f31)
    with pytest.raises(TableTooSmall):
        s_vr(K, 5000.0, 1, V, gl2_small, gl3_small)


def test_s_total_empty_and_split(f31, gl2_small, gl3_small):
    V = make_window(1.0)
    K = realize(parse_spec("kl3"), f31)
    assert s_total(K, 0.5, V, gl2_small, gl3_small) == 0
    ones = TraceFn(f31, np.ones(31))
    total = s_total(ones, 10.0, V, gl2_small, gl3_small)
    parts = sum(s_vr(ones, 10.0 / r**2, r, V, gl2_small, gl3_small)
                for r in (1, 2, 3))
    assert abs(total - parts) < 1e-14


def test_s_total_regression(f31, gl2_small, gl3_small):
    V = make_window(1.0)
    K = realize(parse_spec("kl3"), f31)
    got = s_total(K, 500.0, V, gl2_small, gl3_small)
    assert abs(got - (13.567900950977439 + 13.006164012825147j)) < 1e-9


def test_s_total_determinism(f31, gl2_small, gl3_small):
    V = make_window(1.0)
    K = realize(parse_spec("kl3"), f31)
    a = s_total(K, 500.0, V, gl2_small, gl3_small)
    b = s_total(K, 500.0, V, gl2_small, gl3_small)
    assert a == b  # bit-identical


def test_mellin_decompose_check_examples(f13):
    # trivial-character indicator: both sides are 1 on the units
    vals = np.zeros(13, complex)
    vals[1:] = 1.0
    assert mellin_decompose_check(TraceFn(f13, vals), 3, 2) < 1e-12
    K = realize(parse_spec("kl2"), f13)
    assert mellin_decompose_check(K, 3, 2) < 1e-10
    with pytest.raises(BadParam):
        mellin_decompose_check(K, 13, 2)


def test_mellin_decompose_random_grid():
    for p in (13, 31, 101):
        f = make_field(p)
        rng = np.random.default_rng(5 * p)
        for _ in range(100):
            K = random_tracefn(f, rng)
            n = int(rng.integers(1, p))
            r = int(rng.integers(1, p))
            assert mellin_decompose_check(K, n, r, f) < 1e-9


def test_scaling_experiment_empty(gl2_small):
    V = make_window(1.0)
    report = scaling_experiment(parse_spec("kl3"), [], V, gl2_small)
    assert report.rows == []
    assert math.isnan(report.slope)


def test_scaling_experiment_small(gl2_small):
    # tiny primes keep X = p^3 within the small table
    V = make_window(1.0)
    report = scaling_experiment(parse_spec("kl3"), [5, 7], V, gl2_small)
    assert len(report.rows) == 2
    for row in report.rows:
        assert row.X == row.p ** 3
        assert row.abs_s <= row.envelope + 1e-9
    assert not math.isnan(report.slope)
