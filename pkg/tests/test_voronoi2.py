import math

import numpy as np
import pytest

from tracelab import bessel_j, make_window, tau_table, voronoi_check, vtransform
from tracelab.errors import BadParam, TableTooSmall
from tracelab.voronoi2 import (BesselEvaluator, _bessel_j_grid,
                               gauss_legendre_vtransform, vtransform_grid)

scipy_special = pytest.importorskip("scipy.special")


@pytest.fixture(scope="module")
def gl2_voronoi():
    return tau_table(40000, validate=False)


def test_bessel_small_values():
    assert bessel_j(0, 0.0) == 1.0
    for nu in range(1, 13):
        assert bessel_j(nu, 0.0) == 0.0
    # classical reference value, series route
    assert abs(bessel_j(0, 1.0) - 0.7651976865579666) < 1e-12


def test_bessel_vs_scipy_dense():
    for nu in (0, 1, 10, 11, 12):
        xs = np.concatenate([np.linspace(0.01, 29.9, 140),
                             np.linspace(30, 500, 120), [1e3, 5e3, 1e4]])
        err = max(abs(bessel_j(nu, float(x)) - scipy_special.jv(nu, x)) for x in xs)
        assert err < 1e-10, (nu, err)


def test_bessel_recurrence_oracle():
    # J_{nu-1}(x) + J_{nu+1}(x) = (2 nu / x) J_nu(x)
    for x in np.linspace(0.5, 100, 160):
        lhs = bessel_j(10, float(x)) + bessel_j(12, float(x))
        rhs = 2 * 11 / x * bessel_j(11, float(x))
        assert abs(lhs - rhs) < 1e-8


def test_bessel_overlap_band():
    ev = BesselEvaluator(order=11)
    for x in np.linspace(ev.switchpoint - 2, ev.switchpoint + 2, 41):
        assert abs(ev._series(float(x)) - ev._asymptotic(float(x))) < 1e-9


def test_bessel_rejects_negative():
    with pytest.raises(BadParam):
        bessel_j(3, -1.0)


def test_bessel_grid_route():
    rng = np.random.default_rng(42)
    args = rng.uniform(30, 2e4, 3000)
    err = np.abs(_bessel_j_grid(11, args) - scipy_special.jv(11, args)).max()
    assert err < 1e-10


def test_vtransform_zero_cases():
    V = make_window(1.0)
    assert vtransform(V, 0.0) == 0
    zero_like = vtransform(make_window(1.0, "oscillated_bump"), 0.0)
    assert zero_like == 0


def test_vtransform_two_quadratures_and_pin():
    V = make_window(1.0)
    a = vtransform(V, 4.0)
    b = gauss_legendre_vtransform(V, 4.0, nodes=192)
    assert abs(a - b) < 1e-9
    assert abs(a - (-0.018195492014656)) < 1e-10  # pinned after the two-route run


def test_vtransform_grid_matches_scalar():
    V = make_window(1.0)
    ys = np.array([0.5, 3.0, 8.0, 12.0, 60.0, 400.0, 1600.0])
    g = vtransform_grid(V, ys)
    s = np.array([vtransform(V, float(y)).real for y in ys])
    assert np.abs(g - s).max() < 1e-10


def test_voronoi_rejects_bad_pair(gl2_voronoi):
    V = make_window(1.0)
    with pytest.raises(BadParam):
        voronoi_check(4, 2, 50.0, V, gl2_voronoi)


def test_voronoi_table_guard():
    V = make_window(1.0)
    small = tau_table(100, validate=False)
    with pytest.raises(TableTooSmall):
        voronoi_check(3, 1, 500.0, V, small)


def test_voronoi_identity_fixed_truncation(gl2_voronoi):
    V = make_window(1.0)
    r = voronoi_check(2, 1, 20.0, V, gl2_voronoi, m_max=800)
    assert r.m_max == 800
    assert r.absdiff / max(abs(r.lhs), 1e-12) < 1e-3


def test_voronoi_identity_auto(gl2_voronoi):
    V = make_window(1.0)
    r = voronoi_check(3, 1, 50.0, V, gl2_voronoi)
    rel = r.absdiff / max(abs(r.lhs), 1e-12)
    assert rel < 1e-4
    # doubling the automatic cutoff moves the dual side negligibly
    r2 = voronoi_check(3, 1, 50.0, V, gl2_voronoi, m_max=2 * r.m_max)
    assert abs(r2.rhs - r.rhs) / max(abs(r.rhs), 1e-12) < 1e-6
