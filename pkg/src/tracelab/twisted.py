"""Smooth windows and the twisted coefficient sums they cut out.

The basic window is the bump

    V(x) = exp(1 - 1/(1 - t^2)),  t = 2x - 3,   supported on (1, 2),

optionally modulated by cos(Z*x) so that derivatives grow like Z^i
(|V^(i)| <= C_i Z^i with constants measured by finite differences and pinned
by the tests).  A widened plateau variant (support (0.01, 100), identically 1
on [1, 2]) is available behind a constructor flag.

The twisted sums are

    s_vr(K, X, r)   = sum_n lam(r, n) lam_f(n) K(n r^2 mod p) V(n / X)
    s_total(K, X)   = sum_r s_vr(K, X / r^2, r)

with the eigenvalues from `hecke` and K any trace function.  On the
multiplicative side, K(n r^2) expands exactly through the Mellin
coefficients (`mellin_decompose_check`).

`scaling_experiment` evaluates |s_total| at X = p^3 across a list of primes
and fits the slope of log |S| against log p.  The report is descriptive, not
a pass/fail criterion: the asymptotic exponent is far out of reach at desk
scale, and the experiment's (X, Z) generally sit outside the regime where
the sharpest bounds apply.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import BadParam, TableTooSmall
from .ffield import PrimeField
from .hecke import HeckeGL2, HeckeGL3, sym2_table
from .tracezoo import TraceSpec, realize
from .xforms import TraceFn, mellin, mellin_invert

WINDOW_KINDS = ("plain_bump", "oscillated_bump")


@dataclass
class Window:
    """Smooth compactly supported test function with oscillation parameter Z."""

    Z: float
    kind: str
    wide: bool = False

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        out = self._plateau(x) if self.wide else self._bump(x)
        if self.kind == "oscillated_bump":
            out = out * np.cos(self.Z * x)
        return out if out.shape else float(out)

    @staticmethod
    def _bump(x):
        t = 2.0 * x - 3.0
        inside = np.abs(t) < 1.0
        out = np.zeros_like(x)
        tt = t[inside]
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - tt * tt))
        return out

    @staticmethod
    def _smoothstep(t):
        # f(t)/(f(t)+f(1-t)) with f(t) = exp(-1/t): 0 for t <= 0, 1 for t >= 1
        t = np.clip(t, 0.0, 1.0)
        with np.errstate(divide="ignore", over="ignore"):
            f = np.where(t > 0, np.exp(-1.0 / np.maximum(t, 1e-300)), 0.0)
            g = np.where(t < 1, np.exp(-1.0 / np.maximum(1.0 - t, 1e-300)), 0.0)
        return f / (f + g)

    def _plateau(self, x):
        rise = self._smoothstep((x - 0.01) / 0.99)
        fall = self._smoothstep((100.0 - x) / 98.0)
        return rise * fall

    def derivative_bound(self, order: int, grid_points: int = 10001) -> float:
        """max |V^(order)| / Z^order measured by central differences."""
        lo, hi = (0.005, 101.0) if self.wide else (0.9, 2.1)
        xs = np.linspace(lo, hi, grid_points)
        vals = self(xs)
        h = xs[1] - xs[0]
        for _ in range(order):
            vals = np.gradient(vals, h)
        return float(np.abs(vals).max()) / self.Z ** order


def make_window(Z: float, kind: str = "plain_bump", wide: bool = False) -> Window:
    if Z < 1:
        raise BadParam(f"oscillation parameter Z must be >= 1, got {Z}")
    if kind not in WINDOW_KINDS:
        raise BadParam(f"window kind must be one of {WINDOW_KINDS}")
    return Window(Z=float(Z), kind=kind, wide=wide)


def _n_range(X: float) -> tuple[int, int]:
    # V vanishes outside (1, 2), so only X < n < 2X contributes
    n0 = max(1, math.floor(X) + 1)
    n1 = math.ceil(2 * X) - 1
    return n0, n1


def s_vr(K: TraceFn, X: float, r: int, V: Window, gl2: HeckeGL2, gl3: HeckeGL3,
         with_envelope: bool = False):
    """sum_n lam(r, n) lam_f(n) K(n r^2 mod p) V(n / X).

    The sum is finite because V is supported on (1, 2); n runs over
    [X, 2X].  With with_envelope=True also returns the trivial bound
    sup|K| * sum |lam lam_f V|.
    """
    if X < 1:
        return (0j, 0.0) if with_envelope else 0j
    f = K.field
    n0, n1 = _n_range(X)
    if n1 < n0:
        return (0j, 0.0) if with_envelope else 0j
    if n1 > gl2.N:
        raise TableTooSmall(f"rank-2 table covers {gl2.N} < {n1}")
    if r > gl3.R or n1 > gl3.N or r * r * n1 > gl3.bound:
        raise TableTooSmall(f"rank-3 table does not cover (r, n) = ({r}, {n1})")
    ns = np.arange(n0, n1 + 1)
    w = V(ns / X)
    lamf = gl2.lam[ns]
    lam3 = gl3.lam_row(r, ns)
    kv = K.values[(ns * (r * r % f.p)) % f.p]
    terms = lam3 * lamf * kv * w
    total = complex(np.sum(terms))
    if with_envelope:
        env = K.sup_norm * float(np.sum(np.abs(lam3 * lamf * w)))
        return total, env
    return total


def s_total(K: TraceFn, X: float, V: Window, gl2: HeckeGL2, gl3: HeckeGL3,
            r_max: int | None = None, with_envelope: bool = False):
    """sum_r s_vr(K, X / r^2, r) over r with X / r^2 >= 1."""
    total = 0j
    env = 0.0
    r = 1
    while r * r <= X and (r_max is None or r <= r_max):
        part = s_vr(K, X / (r * r), r, V, gl2, gl3, with_envelope=with_envelope)
        if with_envelope:
            total += part[0]
            env += part[1]
        else:
            total += part
        r += 1
    return (total, env) if with_envelope else total


def mellin_decompose_check(K: TraceFn, n: int, r: int, f: PrimeField | None = None) -> float:
    """|K(n r^2) - (p-1)^{-1/2} sum_chi K~(chi) chi(n r^2)| for (nr, p) = 1."""
    f = f or K.field
    p = f.p
    if (n * r) % p == 0:
        raise BadParam(f"need n*r coprime to p = {p}")
    a = (n % p) * (r % p) ** 2 % p
    lhs = K.values[a]
    rhs = mellin_invert(mellin(K)).values[a]
    return float(abs(lhs - rhs))


@dataclass
class ScalingRow:
    p: int
    X: int
    abs_s: float
    ratio: float       # |S| / X
    log_ratio: float   # log |S| / log p
    envelope: float


@dataclass
class ScalingReport:
    kind: str
    Z: float
    rows: list[ScalingRow] = dc_field(default_factory=list)
    slope: float = float("nan")
    note: str = ("descriptive report; the asymptotic exponent is not "
                 "reproducible at this scale and X = p^3 may sit outside "
                 "the validity range of the sharpest bounds")


def scaling_experiment(spec: TraceSpec, primes: list[int], V: Window,
                       gl2: HeckeGL2, make_field_fn=None) -> ScalingReport:
    """|s_total| at X = p^3 across primes, with the fitted log-log slope."""
    from .ffield import make_field as _mf
    make_field_fn = make_field_fn or _mf
    report = ScalingReport(kind=spec.to_text(), Z=V.Z)
    for p in primes:
        f = make_field_fn(p)
        K = realize(spec, f)
        X = p ** 3
        gl3 = sym2_table(R=math.isqrt(2 * X) + 1, N=2 * X, gl2=gl2, bound=2 * X)
        val, env = s_total(K, float(X), V, gl2, gl3, with_envelope=True)
        a = abs(val)
        report.rows.append(ScalingRow(p=p, X=X, abs_s=a, ratio=a / X,
                                      log_ratio=math.log(max(a, 1e-300)) / math.log(p),
                                      envelope=env))
    if len(report.rows) >= 2:
        lp = np.log([row.p for row in report.rows])
        ls = np.log([max(row.abs_s, 1e-300) for row in report.rows])
        report.slope = float(np.polyfit(lp, ls, 1)[0])
    return report
