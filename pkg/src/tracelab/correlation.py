"""Complete-sum correlation calculus: L, Z, and the q-sum chain.

For a trace function K mod p and alpha, beta in F_p^x define

    L(u) = p^{-1/2} sum_{b, b+beta*u != 0} K^(b) e(alpha/(b+beta*u)/p)
         = p^{-1/2} sum_{a in F_p} K(a) Kl_2(alpha*a) e(-beta*a*u/p),

the second form following from opening K^ and evaluating the unit sum
(exact, including a = 0, with Kl_2(0) = -p^{-1/2}).  Its Fourier transform
satisfies L^(x) = K(x/beta) * Kl_2((alpha/beta) * x).

The correlation object is

    Z(v) = p^{-1/2} sum_{x != 0} K(xv) Kl_2(alpha*x*v) Kl_2(beta*x),

which is also fourier(mconv(M, L)) for M(u) = Kl_2(gamma*u) once beta here is
identified with beta*gamma there.  For good K the sums

    sum_v Z(v) conj(Z'(v - delta))

show square-root cancellation O(sqrt(p)) away from the diagonal and a main
term c*p (|c| = 1) on it; `sqrt_cancel_scan` measures this empirically.

`q_sum_check` verifies the complete chain: the direct triple sum

    FT(n) = p^{-1/2} sum_{u,u' != 0} L(u) conj(L'(u'))
            sum_v Kl_2(gamma*v/u) Kl_2(gamma'*v/u') e(v*n/(k*p))

equals sqrt(p) * sum_v Z(v) conj(Z'(v - delta)) with delta = n/k, where
Z = fourier(mconv(L, M)).  The convolution is taken with L as the *first*
argument: the two orders agree on F_p^x but differ at index 0, and only this
order makes the chain exact rather than exact-up-to-O(p^{-1/2}).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import BadParam, FieldMismatch
from .ffield import PrimeField
from .kloosterman import kl_values
from .xforms import TraceFn, fourier, mconv


def _check_unit(f: PrimeField, name: str, value: int) -> int:
    v = value % f.p
    if v == 0:
        raise BadParam(f"{name} must be nonzero mod {f.p}")
    return v


def l_func(K: TraceFn, alpha: int, beta: int, f: PrimeField | None = None) -> TraceFn:
    """L as a function of u, evaluated through the Kl_2-weighted form."""
    f = f or K.field
    alpha = _check_unit(f, "alpha", alpha)
    beta = _check_unit(f, "beta", beta)
    p = f.p
    kl2 = kl_values(2, f)
    a = np.arange(p)
    w = K.values * kl2[(alpha * a) % p]
    bb = f.inv[beta]
    w_re = w[(bb * a) % p]
    vals = np.fft.fft(w_re) / np.sqrt(p)
    return TraceFn(f, vals, label=f"L[{alpha},{beta}]({K.label})")


def l_func_direct(K: TraceFn, alpha: int, beta: int, f: PrimeField | None = None) -> TraceFn:
    """L through its defining sum over the Fourier side; O(p^2) oracle.

    Terms with b + beta*u = 0 mod p are omitted, exactly as in the defining
    coprimality condition.
    """
    f = f or K.field
    alpha = _check_unit(f, "alpha", alpha)
    beta = _check_unit(f, "beta", beta)
    p = f.p
    Khat = fourier(K).values
    u = np.arange(p)
    t = (np.arange(p)[None, :] + beta * u[:, None]) % p  # t[u, b]
    mask = t != 0
    phases = np.where(mask, f.e_p[(alpha * f.inv[t]) % p], 0.0)
    vals = phases @ Khat / np.sqrt(p)
    return TraceFn(f, vals, label=f"L_direct[{alpha},{beta}]({K.label})")


def l_hat_check(K: TraceFn, alpha: int, beta: int, f: PrimeField | None = None) -> float:
    """Max over x != 0 of |fourier(L)(x) - K(x/beta) Kl_2((alpha/beta) x)|.

    The x = 0 entry equals K(0) Kl_2(0) identically and is not compared.
    """
    f = f or K.field
    alpha = _check_unit(f, "alpha", alpha)
    beta = _check_unit(f, "beta", beta)
    p = f.p
    kl2 = kl_values(2, f)
    lhat = fourier(l_func(K, alpha, beta, f)).values
    x = np.arange(1, p)
    bb = f.inv[beta]
    rhs = K.values[(bb * x) % p] * kl2[(alpha * bb * x) % p]
    return float(np.abs(lhat[1:] - rhs).max())


def z_func(K: TraceFn, alpha: int, beta: int, f: PrimeField | None = None) -> TraceFn:
    """Z(v) = p^{-1/2} sum_{x != 0} K(xv) Kl_2(alpha x v) Kl_2(beta x)."""
    f = f or K.field
    alpha = _check_unit(f, "alpha", alpha)
    beta = _check_unit(f, "beta", beta)
    p = f.p
    kl2 = kl_values(2, f)
    xs = np.arange(1, p)
    w = kl2[(beta * xs) % p]
    idx = (np.arange(p)[:, None] * xs[None, :]) % p  # idx[v, x] = x*v
    vals = (K.values[idx] * kl2[(alpha * idx) % p]) @ w / np.sqrt(p)
    return TraceFn(f, vals, label=f"Z[{alpha},{beta}]({K.label})")


def z_func_plancherel(K: TraceFn, alpha: int, beta: int, gamma: int,
                      f: PrimeField | None = None) -> TraceFn:
    """The convolution route to Z: fourier(mconv(M, L)) with M = Kl_2(gamma .).

    Matches z_func(K, alpha, beta*gamma) at every v, index 0 included.
    """
    f = f or K.field
    gamma = _check_unit(f, "gamma", gamma)
    kl2 = kl_values(2, f)
    M = TraceFn(f, kl2[(gamma * np.arange(f.p)) % f.p], label=f"kl2.{gamma}")
    L = l_func(K, alpha, beta, f)
    return fourier(mconv(M, L))


def corr(Z: TraceFn, Zp: TraceFn, delta: int) -> complex:
    """sum_v Z(v) conj(Z'(v - delta))."""
    if Z.field.p != Zp.field.p:
        raise FieldMismatch("correlation operands live over different fields")
    p = Z.field.p
    idx = (np.arange(p) - delta) % p
    return complex(np.sum(Z.values * np.conj(Zp.values[idx])))


@dataclass
class QSumParams:
    """Parameters of the q-sum: K with (alpha, beta, gamma), primed copies,
    phase divisor k and frequency n."""

    K: TraceFn
    Kp: TraceFn
    alpha: int
    beta: int
    gamma: int
    alphap: int
    betap: int
    gammap: int
    k: int
    n: int


def q_sum_check(params: QSumParams, f: PrimeField | None = None):
    """Direct triple sum vs the correlation route; returns (direct, via, |diff|)."""
    f = f or params.K.field
    p = f.p
    if params.K.field.p != p or params.Kp.field.p != p:
        raise FieldMismatch("q-sum operands live over different fields")
    al = _check_unit(f, "alpha", params.alpha)
    be = _check_unit(f, "beta", params.beta)
    ga = _check_unit(f, "gamma", params.gamma)
    alp = _check_unit(f, "alpha'", params.alphap)
    bep = _check_unit(f, "beta'", params.betap)
    gap = _check_unit(f, "gamma'", params.gammap)
    kk = _check_unit(f, "k", params.k)
    delta = (f.inv[kk] * params.n) % p

    kl2 = kl_values(2, f)
    L = l_func(params.K, al, be, f)
    Lp = l_func(params.Kp, alp, bep, f)

    # direct: FT(n) = p^{-1/2} sum_{u,u'} L(u) conj(L'(u')) V(u, u'),
    # V(u,u') = sum_v kl2(gamma v/u) kl2(gamma' v/u') e(delta v / p)
    us = np.arange(1, p)
    v = np.arange(p)
    s = (ga * f.inv[us]) % p
    sp = (gap * f.inv[us]) % p
    A = kl2[(s[:, None] * v[None, :]) % p] * f.e_p[(delta * v) % p][None, :]
    B = kl2[(sp[:, None] * v[None, :]) % p]
    V = A @ B.T
    direct = complex(L.values[1:] @ V @ np.conj(Lp.values[1:]) / np.sqrt(p))

    # correlation route, with the exact index-0 convention: Z = fourier(L * M)
    M = TraceFn(f, kl2[(ga * np.arange(p)) % p])
    Mp = TraceFn(f, kl2[(gap * np.arange(p)) % p])
    Z = fourier(mconv(L, M))
    Zp = fourier(mconv(Lp, Mp))
    via = np.sqrt(p) * corr(Z, Zp, int(delta))
    return direct, via, abs(direct - via)


@dataclass
class ScanRow:
    delta: int
    alpha: int
    beta: int
    alphap: int
    betap: int
    value: complex
    ratio_sqrtp: float
    diagonal: bool
    c_fit: complex = 0j


@dataclass
class ScanReport:
    p: int
    kind: str
    rows: list[ScanRow] = dc_field(default_factory=list)
    max_offdiag_ratio: float = 0.0
    max_diag_dev: float = 0.0
    threshold: float = 10.0

    @property
    def offdiag_ok(self) -> bool:
        return self.max_offdiag_ratio <= self.threshold

    def worst_offdiag(self) -> ScanRow | None:
        rows = [r for r in self.rows if not r.diagonal]
        return max(rows, key=lambda r: r.ratio_sqrtp) if rows else None


def sqrt_cancel_scan(K: TraceFn, Kp: TraceFn, rng: np.random.Generator,
                     n_offdiag: int = 50, n_diag: int = 5,
                     threshold: float = 10.0) -> ScanReport:
    """Empirical square-root-cancellation scan.

    Draws n_offdiag random tuples (delta != 0, alpha, beta, alpha', beta')
    and n_diag matched diagonal tuples (delta = 0, alpha' = alpha,
    beta' = beta) and records sum_v Z Z-bar' for each.  Z tables are cached
    per (alpha, beta).  Off-diagonal values are reported as |corr|/sqrt(p);
    diagonal ones against the fitted unimodular main term c*p.
    """
    f = K.field
    if Kp.field.p != f.p:
        raise FieldMismatch("scan operands live over different fields")
    p = f.p
    report = ScanReport(p=p, kind=f"{K.label}|{Kp.label}", threshold=threshold)
    z_cache: dict[tuple[int, int, int], TraceFn] = {}

    def ztab(which: int, fn: TraceFn, a: int, b: int) -> TraceFn:
        key = (which, a, b)
        if key not in z_cache:
            z_cache[key] = z_func(fn, a, b, f)
        return z_cache[key]

    def draw_unit() -> int:
        return int(rng.integers(1, p))

    for _ in range(n_offdiag):
        d = draw_unit()
        a, b, ap_, bp_ = (draw_unit() for _ in range(4))
        val = corr(ztab(0, K, a, b), ztab(1, Kp, ap_, bp_), d)
        report.rows.append(ScanRow(d, a, b, ap_, bp_, val,
                                   abs(val) / np.sqrt(p), diagonal=False))
    for _ in range(n_diag):
        a, b = draw_unit(), draw_unit()
        val = corr(ztab(0, K, a, b), ztab(1, Kp, a, b), 0)
        c_fit = val / abs(val) if abs(val) > 0 else 1.0
        row = ScanRow(0, a, b, a, b, val, abs(val) / np.sqrt(p),
                      diagonal=True, c_fit=complex(c_fit))
        report.rows.append(row)

    off = [r.ratio_sqrtp for r in report.rows if not r.diagonal]
    diag = [abs(r.value - r.c_fit * p) for r in report.rows if r.diagonal]
    report.max_offdiag_ratio = max(off) if off else 0.0
    report.max_diag_dev = max(diag) if diag else 0.0
    return report
