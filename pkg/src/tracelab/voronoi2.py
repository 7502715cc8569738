"""Rank-2 Voronoi summation check for the weight-12 level-1 form.

The summation formula exchanges

    sum_m lam_f(m) e(um/c) V(m/X)
      =  (X/c) sum_m lam_f(m) e(-m/(uc)) Vplus(m X / c^2),

    Vplus(y) = 2*pi * int_0^inf V(x) J_11(4*pi*sqrt(x y)) dx

(for holomorphic weight k the kernel is 2*pi*i^k*J_{k-1}; i^12 = 1 here, and
the opposite-sign Bessel branch vanishes identically).  The left side is a
finite sum; the right side converges superpolynomially because V is smooth,
and is truncated where sampling |Vplus| on a doubling grid shows the tail is
negligible.

J_nu is evaluated by the ascending power series below the switchpoint and by
the large-argument (Hankel) asymptotic expansion above it.  The series is
summed in fixed-point big-integer arithmetic: near x ~ 30 its terms reach
~1e9 before cancelling down to O(1), which plain doubles cannot survive at
the 1e-10 accuracy target.  The asymptotic side stops at its smallest term
(for moderate orders the terms first grow, then shrink to far below 1e-13
before true divergence sets in).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BadParam, TableTooSmall
from .hecke import HeckeGL2
from .twisted import Window

_SERIES_BITS = 320


@dataclass
class BesselEvaluator:
    """J_nu via ascending series (x < switchpoint) / Hankel expansion (x >=)."""

    order: int
    switchpoint: float = 30.0
    series_terms_cap: int = 400
    asymptotic_terms_cap: int = 80

    def __call__(self, x: float) -> float:
        if x < 0:
            raise BadParam("bessel_j defined here for x >= 0 only")
        if x == 0.0:
            return 1.0 if self.order == 0 else 0.0
        if x < self.switchpoint:
            return self._series(x)
        return self._asymptotic(x)

    def _series(self, x: float) -> float:
        # sum_m (-1)^m (x/2)^{2m+nu} / (m! (m+nu)!) in fixed point: the input
        # is a dyadic rational, so the term recurrence is exact up to one
        # truncated division per step.
        nu = self.order
        half = Fraction(x) / 2
        z = half * half
        t0 = half ** nu / math.factorial(nu)
        t = (t0.numerator << _SERIES_BITS) // t0.denominator
        zn, zd = z.numerator, z.denominator
        acc = 0
        m = 0
        while t != 0 and m < self.series_terms_cap:
            acc += t if m % 2 == 0 else -t
            t = (t * zn) // (zd * (m + 1) * (m + nu + 1))
            m += 1
        hi = _SERIES_BITS // 2
        return math.ldexp(float(acc >> hi), hi - _SERIES_BITS)

    def _asymptotic(self, x: float) -> float:
        nu = self.order
        mu = 4.0 * nu * nu
        c = 1.0
        P, Q = 1.0, 0.0
        prev = 1.0
        for k in range(1, self.asymptotic_terms_cap):
            c *= (mu - (2 * k - 1) ** 2) / (8.0 * x * k)
            if (2 * k - 1) ** 2 > mu and abs(c) >= prev:
                break  # smallest term reached; adding more only diverges
            r = k % 4
            if r == 1:
                Q += c
            elif r == 2:
                P -= c
            elif r == 3:
                Q -= c
            else:
                P += c
            if abs(c) < 1e-19:
                break
            prev = abs(c)
        om = x - (0.5 * nu + 0.25) * math.pi
        return math.sqrt(2.0 / (math.pi * x)) * (P * math.cos(om) - Q * math.sin(om))


_EVALUATORS: dict[int, BesselEvaluator] = {}


def bessel_j(nu: int, x: float) -> float:
    """J_nu(x) for x >= 0; absolute accuracy 1e-10 or better for x <= 1e4."""
    ev = _EVALUATORS.get(nu)
    if ev is None:
        ev = _EVALUATORS[nu] = BesselEvaluator(order=nu)
    return ev(x)


# --- vectorized large-argument path -------------------------------------
#
# In the Hankel form J_nu(x) = sqrt(2/(pi x)) (P cos w - Q sin w) the
# envelopes P and x*Q are plain (asymptotic) series in u = 1/x^2 with scalar
# coefficients, so they interpolate accurately from a dense precomputed
# grid; only the carrier cos/sin need per-point work.  Valid for x >= 30.

_GRID_MIN_X = 30.0
_PQ_GRID: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}


def _pq_reference(nu: int, npts: int = 1 << 16, terms: int = 19):
    mu = 4.0 * nu * nu
    u = np.linspace(0.0, 1.0 / (_GRID_MIN_X * _GRID_MIN_X), npts)
    a = [1.0]
    for k in range(1, 2 * terms + 1):
        a.append(a[-1] * (mu - (2 * k - 1) ** 2) / (8.0 * k))
    P = np.zeros(npts)
    Qx = np.zeros(npts)
    upow = np.ones(npts)
    for j in range(terms):
        sgn = -1.0 if j % 2 else 1.0
        P += sgn * a[2 * j] * upow
        Qx += sgn * a[2 * j + 1] * upow
        upow = upow * u
    return u, P, Qx


def _bessel_j_grid(nu: int, args: np.ndarray) -> np.ndarray:
    """J_nu at an array of arguments, all >= 30."""
    ref = _PQ_GRID.get(nu)
    if ref is None:
        ref = _PQ_GRID[nu] = _pq_reference(nu)
    ug, P_ref, Qx_ref = ref
    u = 1.0 / (args * args)
    P = np.interp(u, ug, P_ref)
    Qx = np.interp(u, ug, Qx_ref)
    w = args - (0.5 * nu + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * args)) * (P * np.cos(w) - (Qx / args) * np.sin(w))


def _adaptive_simpson(g, a: float, b: float, tol: float, depth: int = 24):
    fa, fm, fb = g(a), g((a + b) / 2, ), g(b)
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    return _simpson_rec(g, a, b, fa, fm, fb, whole, tol, depth)


def _simpson_rec(g, a, b, fa, fm, fb, whole, tol, depth):
    m = (a + b) / 2
    lm, rm = (a + m) / 2, (m + b) / 2
    flm, frm = g(lm), g(rm)
    left = (m - a) / 6 * (fa + 4 * flm + fm)
    right = (b - m) / 6 * (fm + 4 * frm + fb)
    if depth <= 0 or abs(left + right - whole) <= 15 * tol:
        return left + right + (left + right - whole) / 15
    return (_simpson_rec(g, a, m, fa, flm, fm, left, tol / 2, depth - 1)
            + _simpson_rec(g, m, b, fm, frm, fb, right, tol / 2, depth - 1))


def vtransform(V: Window, y: float, tol: float = 1e-10) -> complex:
    """Vplus(y) = 2*pi * integral of V(x) J_11(4*pi*sqrt(xy)) over the support.

    The kernel oscillates with total phase ~ 2*pi*sqrt(y) across the support,
    so the interval is pre-split into a few panels per period before the
    adaptive rule runs; otherwise the first Richardson comparison can accept
    an aliased answer at large y.
    """
    if y < 0:
        raise BadParam("vtransform defined for y >= 0")
    if y == 0.0:
        return 0j  # J_11(0) = 0
    c = 4.0 * math.pi * math.sqrt(y)

    def g(x):
        return float(V(x)) * bessel_j(11, c * math.sqrt(x))

    panels = min(4096, max(4, int(4.0 * math.sqrt(y))))
    edges = np.linspace(1.0, 2.0, panels + 1)
    val = 0.0
    ptol = tol / panels
    for a, b in zip(edges[:-1], edges[1:]):
        val += _adaptive_simpson(g, float(a), float(b), ptol)
    return complex(2.0 * math.pi * val)


def gauss_legendre_vtransform(V: Window, y: float, nodes: int = 96) -> complex:
    """Fixed-order Gauss-Legendre evaluation of the same integral (second route)."""
    if y == 0.0:
        return 0j
    x, w = np.polynomial.legendre.leggauss(nodes)
    xs = 1.5 + 0.5 * x
    c = 4.0 * math.pi * math.sqrt(y)
    vals = np.array([float(V(t)) * bessel_j(11, c * math.sqrt(t)) for t in xs])
    return complex(2.0 * math.pi * 0.5 * np.dot(w, vals))


def vtransform_grid(V: Window, ys: np.ndarray) -> np.ndarray:
    """Vplus at many frequencies at once.

    Frequencies below 8 go through the scalar adaptive rule; above, the
    kernel argument is uniformly >= 30, so one composite Gauss-Legendre grid
    (a period per panel, scaled to the block's largest frequency) serves a
    whole block through the interpolated Hankel form.
    """
    ys = np.asarray(ys, dtype=np.float64)
    out = np.empty(len(ys), dtype=np.float64)
    small = ys < 8.0
    for i in np.nonzero(small)[0]:
        out[i] = vtransform(V, float(ys[i])).real
    big_idx = np.nonzero(~small)[0]
    gx, gw = np.polynomial.legendre.leggauss(12)
    pos = 0
    while pos < len(big_idx):
        chunk = big_idx[pos:pos + 2048]
        y_hi = float(ys[chunk[-1]])
        periods = 5.206 * math.sqrt(y_hi) / (2 * math.pi)
        panels = max(4, int(periods) + 1)
        edges = np.linspace(1.0, 2.0, panels + 1)
        half = 0.5 * (edges[1] - edges[0])
        xs = (edges[:-1, None] + half * (gx[None, :] + 1.0)).ravel()
        ws = np.broadcast_to(gw * half, (panels, 12)).ravel()
        wv = ws * np.asarray(V(xs), dtype=np.float64)
        amp = 4.0 * math.pi * np.sqrt(xs)
        args = np.sqrt(ys[chunk])[:, None] * amp[None, :]
        out[chunk] = 2.0 * math.pi * (_bessel_j_grid(11, args) @ wv)
        pos += 2048
    return out


@dataclass
class VoronoiCheck:
    lhs: complex
    rhs: complex
    absdiff: float
    m_max: int


def voronoi_check(c: int, u: int, X: float, V: Window, gl2: HeckeGL2,
                  m_max: int | None = None, stability: float = 1e-7) -> VoronoiCheck:
    """Both sides of the summation formula and their absolute difference.

    With m_max unset, the dual sum is extended in doubling blocks until one
    more doubling moves it by at most `stability` relative (the transform's
    envelope decays too slowly for a useful per-term tail bound at this
    scale, but the signed sum stabilizes long before the envelope does).
    """
    if c < 1 or math.gcd(u, c) != 1:
        raise BadParam(f"need (u, c) = 1 and c >= 1, got u = {u}, c = {c}")
    n0, n1 = max(1, math.floor(X) + 1), math.ceil(2 * X) - 1
    if n1 > gl2.N:
        raise TableTooSmall(f"rank-2 table covers {gl2.N} < {n1}")
    ms = np.arange(n0, n1 + 1)
    lhs = complex(np.sum(gl2.lam[ms]
                         * np.exp(2j * np.pi * ((u * ms) % c) / c)
                         * V(ms / X)))

    ub = pow(u, -1, c)

    def dual_terms(m_lo: int, m_hi: int) -> complex:
        mm = np.arange(m_lo, m_hi + 1)
        if m_hi > gl2.N:
            raise TableTooSmall(f"dual side needs {m_hi} coefficients, table has {gl2.N}")
        vy = vtransform_grid(V, mm * X / (c * c))
        phases = np.exp(-2j * np.pi * ((ub * mm) % c) / c)
        return complex(np.sum(gl2.lam[mm] * phases * vy))

    if m_max is not None:
        rhs = (X / c) * dual_terms(1, m_max)
        return VoronoiCheck(lhs=lhs, rhs=rhs, absdiff=abs(lhs - rhs), m_max=m_max)

    m = 64
    partial = dual_terms(1, m)
    while True:
        nxt = partial + dual_terms(m + 1, 2 * m)
        change = abs(nxt - partial) / max(abs(nxt), 1e-12)
        partial, m = nxt, 2 * m
        if change <= stability:
            break
        if m > 1 << 20:
            raise BadParam("dual-side truncation did not converge")
    rhs = (X / c) * partial
    return VoronoiCheck(lhs=lhs, rhs=rhs, absdiff=abs(lhs - rhs), m_max=m)
