"""Constructors for the standard menagerie of trace functions.

A TraceSpec is a small expression tree naming a function on F_p:

    psi:a          additive character  x -> e(ax/p)
    chi:k          multiplicative character chi_k (0 at x = 0)
    klK            hyper-Kloosterman sum of rank K, e.g. kl3
    ap:a           indicator of the residue class x = a
    sym:k,lam      Chebyshev-U_k of Kl_2(lam*x)/2  (symmetric-power function)
    scale:lam(S)   pullback x -> S(lam*x)
    invscale:b(S)  pullback x -> S(b/x)  (0 at x = 0)
    prod(S,T)      pointwise product

The same text form is accepted by the command-line driver.  `realize` turns a
spec into a dense TraceFn; `torus_detect` scans for the scaling symmetries
lam with K(lam*x) = c*K(x) for a unimodular constant c.  Proportionality of
trace values is a computable surrogate for geometric isomorphism of the
underlying sheaves: necessary in general, and sufficient for the characters
and Kloosterman sums exercised here, but a heuristic, not a proof.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from .errors import BadParam
from .ffield import PrimeField
from .kloosterman import kl_values
from .xforms import TraceFn

_LEAF_KINDS = {"additive_char", "mult_char", "kloosterman", "indicator_ap", "sym_power"}
_KINDS = _LEAF_KINDS | {"pullback_scale", "pullback_invscale", "product"}


@dataclass
class TraceSpec:
    """Expression tree for a named trace function."""

    kind: str
    a: int = 0                 # character/AP parameter or rank
    lam: int = 1               # scaling for pullbacks and sym powers
    k: int = 0                 # symmetric-power degree
    inner: Optional["TraceSpec"] = None
    right: Optional["TraceSpec"] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise BadParam(f"unknown trace spec kind {self.kind!r}")

    def to_text(self) -> str:
        k = self.kind
        if k == "additive_char":
            return f"psi:{self.a}"
        if k == "mult_char":
            return f"chi:{self.a}"
        if k == "kloosterman":
            return f"kl{self.a}"
        if k == "indicator_ap":
            return f"ap:{self.a}"
        if k == "sym_power":
            return f"sym:{self.k},{self.lam}"
        if k == "pullback_scale":
            return f"scale:{self.lam}({self.inner.to_text()})"
        if k == "pullback_invscale":
            return f"invscale:{self.lam}({self.inner.to_text()})"
        return f"prod({self.inner.to_text()},{self.right.to_text()})"


def parse_spec(text: str) -> TraceSpec:
    """Parse the canonical text form, e.g. 'kl3' or 'prod(kl2,chi:1)'."""
    spec, rest = _parse(text.strip())
    if rest:
        raise BadParam(f"trailing input {rest!r} in trace spec {text!r}")
    return spec


def _parse(s: str) -> tuple[TraceSpec, str]:
    if s.startswith("prod("):
        left, rest = _parse(s[len("prod("):])
        if not rest.startswith(","):
            raise BadParam(f"expected ',' in prod(...) near {rest!r}")
        right, rest = _parse(rest[1:])
        if not rest.startswith(")"):
            raise BadParam(f"expected ')' in prod(...) near {rest!r}")
        return TraceSpec("product", inner=left, right=right), rest[1:]
    for prefix, kind in (("scale:", "pullback_scale"), ("invscale:", "pullback_invscale")):
        if s.startswith(prefix):
            body = s[len(prefix):]
            i = body.index("(")
            lam = int(body[:i])
            inner, rest = _parse(body[i + 1:])
            if not rest.startswith(")"):
                raise BadParam(f"expected ')' after {prefix}{lam}(...")
            return TraceSpec(kind, lam=lam, inner=inner), rest[1:]
    if s.startswith("kl"):
        num, rest = _take_int(s[2:])
        return TraceSpec("kloosterman", a=num), rest
    for prefix, kind in (("psi:", "additive_char"), ("chi:", "mult_char"), ("ap:", "indicator_ap")):
        if s.startswith(prefix):
            num, rest = _take_int(s[len(prefix):])
            return TraceSpec(kind, a=num), rest
    if s.startswith("sym:"):
        k, rest = _take_int(s[len("sym:"):])
        if not rest.startswith(","):
            raise BadParam("sym spec needs 'sym:k,lam'")
        lam, rest = _take_int(rest[1:])
        return TraceSpec("sym_power", k=k, lam=lam), rest
    raise BadParam(f"cannot parse trace spec near {s!r}")


def _take_int(s: str) -> tuple[int, str]:
    i = 0
    if i < len(s) and s[i] == "-":
        i += 1
    while i < len(s) and s[i].isdigit():
        i += 1
    if i == 0 or s[:i] == "-":
        raise BadParam(f"expected integer at {s!r}")
    return int(s[:i]), s[i:]


def realize(spec: TraceSpec, f: PrimeField) -> TraceFn:
    """Evaluate a TraceSpec to a dense TraceFn over f."""
    return TraceFn(f, _eval(spec, f), label=spec.to_text())


def _eval(spec: TraceSpec, f: PrimeField) -> np.ndarray:
    p = f.p
    kind = spec.kind
    if kind == "additive_char":
        return f.e_p[(spec.a * np.arange(p)) % p]
    if kind == "mult_char":
        if not 0 <= spec.a <= p - 2:
            raise BadParam(f"character exponent {spec.a} outside 0..{p - 2}")
        vals = np.zeros(p, dtype=np.complex128)
        vals[f.pows] = np.exp(2j * np.pi * spec.a * np.arange(p - 1) / (p - 1))
        return vals
    if kind == "kloosterman":
        if spec.a < 1:
            raise BadParam("Kloosterman rank must be >= 1")
        return kl_values(spec.a, f).copy()
    if kind == "indicator_ap":
        vals = np.zeros(p, dtype=np.complex128)
        vals[spec.a % p] = 1.0
        return vals
    if kind == "sym_power":
        return _sym_power(spec.k, spec.lam, f)
    if kind == "pullback_scale":
        if spec.lam % p == 0:
            raise BadParam("scaling parameter must be nonzero mod p")
        inner = _eval(spec.inner, f)
        return inner[(spec.lam * np.arange(p)) % p]
    if kind == "pullback_invscale":
        if spec.lam % p == 0:
            raise BadParam("inversion parameter must be nonzero mod p")
        inner = _eval(spec.inner, f)
        vals = np.zeros(p, dtype=np.complex128)
        vals[1:] = inner[(spec.lam * f.inv[1:]) % p]
        return vals
    # product
    return _eval(spec.inner, f) * _eval(spec.right, f)


def _sym_power(k: int, lam: int, f: PrimeField) -> np.ndarray:
    """sin((k+1)theta)/sin(theta) with 2cos(theta) = Kl_2(lam*x), i.e. the
    Chebyshev polynomial U_k evaluated at Kl_2(lam*x)/2.  The recurrence is
    continuous through theta = 0 where the value is k + 1."""
    if k < 0:
        raise BadParam("symmetric-power degree must be >= 0")
    if lam % f.p == 0:
        raise BadParam("sym power scaling must be nonzero mod p")
    p = f.p
    kl2 = kl_values(2, f)
    xs = np.arange(1, p)
    c = kl2[(lam * xs) % p].real / 2.0
    if np.abs(c).max() > 1.0 + 1e-9:
        raise BadParam("Kl_2 values exceed the bound 2; cannot form angles")
    np.clip(c, -1.0, 1.0, out=c)
    u_prev = np.ones_like(c)
    u_cur = 2.0 * c
    if k == 0:
        u = u_prev
    elif k == 1:
        u = u_cur
    else:
        for _ in range(k - 1):
            u_prev, u_cur = u_cur, 2.0 * c * u_cur - u_prev
        u = u_cur
    vals = np.zeros(p, dtype=np.complex128)
    vals[1:] = u
    return vals


def torus_detect(K: TraceFn, tol: float | None = None) -> list[int]:
    """All lam in F_p^x with K(lam*x) = c*K(x) on F_p^x for unimodular c.

    c is estimated as the ratio at the first x where |K(x)| > tol
    (default tol = 1e-6 * sup norm).  The returned set is verified to be a
    subgroup of F_p^x.
    """
    f = K.field
    p = f.p
    if tol is None:
        tol = 1e-6 * max(K.sup_norm, 1e-300)
    xs = np.arange(1, p)
    vals = K.values
    big = np.nonzero(np.abs(vals[xs]) > tol)[0]
    if len(big) == 0:
        raise BadParam("trace function vanishes identically on the units")
    x0 = int(xs[big[0]])
    lams = np.arange(1, p)
    grid = vals[(lams[:, None] * xs[None, :]) % p]
    c = grid[:, x0 - 1] / vals[x0]
    dev = np.abs(grid - c[:, None] * vals[xs][None, :]).max(axis=1)
    ok = (dev <= tol) & (np.abs(np.abs(c) - 1.0) <= max(tol, 1e-8))
    found = [int(l) for l in lams[ok]]
    _assert_subgroup(found, p)
    return found


def _assert_subgroup(lams: list[int], p: int) -> None:
    s = set(lams)
    if 1 not in s:
        raise BadParam("scaling-symmetry set does not contain 1")
    for a in lams:
        if pow(a, -1, p) not in s:
            raise BadParam(f"scaling-symmetry set not closed under inverse at {a}")
        for b in lams:
            if (a * b) % p not in s:
                raise BadParam(f"scaling-symmetry set not closed under product at ({a},{b})")
