"""Hyper-Kloosterman sums and related complete exponential sums.

The normalized hyper-Kloosterman sum of rank k is

    Kl_k(n; p) = p^{-(k-1)/2} * sum_{x_1...x_k = n, x_i in F_p^x}
                 e((x_1 + ... + x_k)/p),

computed here by the convolution recursion

    Kl_1 = e(./p),   Kl_k(a) = p^{-1/2} sum_{x != 0} e(x/p) Kl_{k-1}(a/x).

At n = 0 the recursion yields Kl_k(0) = (-1)^{k-1} p^{-(k-1)/2}; this is the
value the dual-transform identities in `dual6` require (equivalently, it is
the sum over k-1 free unit variables with the last coordinate allowed to hit
0), and `kl_brute` uses the same parametrization so oracle and recursion
agree at every n.

Deligne's bound |Kl_k(n; p)| <= k holds for n != 0, and Kl_2 is real: the
substitution x -> n/x conjugates each term.

Also here: the classical sum S(m, n; c) for arbitrary modulus c >= 1, and the
Ramanujan-type complete sums that arise when a product of two coprime-modulus
Kloosterman sums is summed against unit phases (`m_sum_direct` against its
evaluated divisor-sum form `m_sum_formula`).
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import BadDivisibility, BadParam, OracleTooLarge, TooLarge
from .ffield import PrimeField

# kl_all switches from O(p^2) gathers to dlog/FFT convolution above this p
_GATHER_LIMIT = 2048

_TABLE_CACHE: dict[tuple[int, int], np.ndarray] = {}

M_SUM_MODULUS_CAP = 10**4


@dataclass
class KloostermanTable:
    """Dense table values[n] = Kl_k(n; p) for n = 0..p-1."""

    field: PrimeField
    k: int
    values: np.ndarray


def kl_all(k: int, f: PrimeField) -> KloostermanTable:
    """Table of Kl_k(n; p) for all n, via the rank-lowering recursion."""
    if k < 1:
        raise BadParam("rank k must be >= 1")
    return KloostermanTable(f, k, kl_values(k, f).copy())


def kl_values(k: int, f: PrimeField) -> np.ndarray:
    """Cached Kl_k value vector (do not mutate)."""
    key = (f.p, k)
    if key not in _TABLE_CACHE:
        if k == 1:
            _TABLE_CACHE[key] = f.e_p.copy()
        else:
            prev = kl_values(k - 1, f)
            _TABLE_CACHE[key] = _kl_step(prev, f)
    return _TABLE_CACHE[key]


def _kl_step(prev: np.ndarray, f: PrimeField) -> np.ndarray:
    p = f.p
    if p <= _GATHER_LIMIT:
        idx = (np.arange(p)[:, None] * f.inv[None, 1:]) % p
        return prev[idx] @ f.e_p[1:] / np.sqrt(p)
    # dlog reindexing: (psi * prev)(g^j) is a cyclic convolution of length p-1
    a = f.e_p[f.pows]
    b = prev[f.pows]
    conv = np.fft.ifft(np.fft.fft(a) * np.fft.fft(b))
    out = np.zeros(p, dtype=np.complex128)
    out[f.pows] = conv / np.sqrt(p)
    out[0] = -prev[0] / np.sqrt(p)
    return out


def kl_brute(k: int, n: int, f: PrimeField) -> complex:
    """Kl_k(n; p) by direct enumeration of the k-1 free unit variables.

    Cost O(p^{k-1}); guarded to k <= 4 and p <= 31.
    """
    if k > 4 or f.p > 31:
        raise OracleTooLarge(f"kl_brute guarded to k <= 4, p <= 31 (got k={k}, p={f.p})")
    if k < 1:
        raise BadParam("rank k must be >= 1")
    p = f.p
    n %= p
    if k == 1:
        return complex(f.e_p[n])
    total = 0.0 + 0.0j
    xs = np.arange(1, p)
    inv_ = f.inv
    ep = f.e_p
    for prefix in itertools.product(range(1, p), repeat=k - 2):
        s = sum(prefix) % p
        pr = math.prod(prefix) % p
        last = (n * inv_[(pr * xs) % p]) % p
        total += ep[(s + xs + last) % p].sum()
    return complex(total / p ** ((k - 1) / 2))


def kloosterman_s(m: int, n: int, c: int) -> complex:
    """Classical Kloosterman sum S(m, n; c) = sum_{x mod c, (x,c)=1} e((mx+n/x)/c)."""
    if c < 1:
        raise BadParam("modulus c must be >= 1")
    if c == 1:
        return 1 + 0j
    w = 2j * math.pi / c
    total = 0.0 + 0.0j
    for x in range(1, c + 1):
        if math.gcd(x, c) != 1:
            continue
        xb = pow(x, -1, c)
        total += cmath.exp(w * ((m * x + n * xb) % c))
    return total


def _mobius(n: int) -> int:
    res = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            res = -res
        d += 1
    if n > 1:
        res = -res
    return res


def _check_m_sum_params(m, n, ell, r, c, n1, sign, q):
    if r * c % n1 != 0:
        raise BadDivisibility(f"n1 = {n1} does not divide r*c = {r * c}")
    if r * c > M_SUM_MODULUS_CAP:
        raise TooLarge(f"modulus r*c = {r * c} exceeds cap {M_SUM_MODULUS_CAP}")
    if math.gcd(ell, c) != 1:
        raise BadParam(f"need (ell, c) = 1, got gcd({ell},{c}) > 1")
    if math.gcd(q, r * c) != 1:
        raise BadParam(f"need the auxiliary prime q coprime to rc, got gcd({q},{r * c}) > 1")
    if sign not in (1, -1):
        raise BadParam("sign must be +1 or -1")


def m_sum_direct(m: int, n: int, ell: int, r: int, c: int, n1: int,
                 sign: int, f: PrimeField) -> complex:
    """Unit-phase-weighted Kloosterman sum

        sum_{u mod c, (u,c)=1} e(sign * m / (u ell q) mod c / c)
                               * S(r/(qu), sign*n/q; rc/n1).

    All inverses of q are reductions of the single inverse of q mod rc, which
    is what makes this agree exactly with `m_sum_formula`; r/(qu) is well
    defined mod rc/n1 because the inverse of u mod c is multiplied by r.
    """
    q = f.p
    _check_m_sum_params(m, n, ell, r, c, n1, sign, q)
    k = r * c // n1
    qb = pow(q, -1, r * c)
    lb = pow(ell, -1, c) if c > 1 else 0
    total = 0.0 + 0.0j
    w = 2j * math.pi / c if c > 1 else 0.0
    for u in range(1, c + 1):
        if math.gcd(u, c) != 1:
            continue
        ub = pow(u, -1, c)
        phase = cmath.exp(w * ((sign * ub * lb * qb * m) % c)) if c > 1 else 1.0
        total += phase * kloosterman_s((qb * r * ub) % k, (sign * qb * n) % k, k)
    return total


def m_sum_formula(m: int, n: int, ell: int, r: int, c: int, n1: int,
                  sign: int, f: PrimeField) -> complex:
    """Evaluated form of the same sum:

        sum_{d | c} d mu(c/d) sum_{x mod rc/n1, (x, rc/n1)=1,
                                   ell*n1*x = -sign*m mod d}
                    e(sign * n / (q x) mod (rc/n1) / (rc/n1)).
    """
    q = f.p
    _check_m_sum_params(m, n, ell, r, c, n1, sign, q)
    k = r * c // n1
    qb = pow(q, -1, r * c)
    w = 2j * math.pi / k if k > 1 else 0.0
    total = 0.0 + 0.0j
    for d in range(1, c + 1):
        if c % d:
            continue
        mu = _mobius(c // d)
        if mu == 0:
            continue
        sub = 0.0 + 0.0j
        for x in range(k):
            if math.gcd(x, k) != 1:
                continue
            if (ell * n1 * x + sign * m) % d != 0:
                continue
            xb = pow(x, -1, k) if k > 1 else 0
            sub += cmath.exp(w * ((sign * qb * n * xb) % k)) if k > 1 else 1.0
        total += d * mu * sub
    return total
