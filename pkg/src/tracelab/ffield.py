"""Prime-field arithmetic with precomputed tables.

A PrimeField bundles everything the rest of the library needs to evaluate
complete exponential sums mod p:

  * the smallest primitive root g and the power table g^j,
  * discrete logs (dlog[g^j] = j), giving a group isomorphism
    (F_p^x, *) ~ (Z/(p-1), +) used to turn multiplicative convolutions
    into cyclic ones,
  * the inverse table x -> x^{-1} mod p,
  * the additive character table e_p[a] = e(a/p) = exp(2*pi*i*a/p).

Fields are immutable after construction and safe to share across workers.
Tables are O(p), so construction is capped (default 10^6).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotPrime, TooLarge, ZeroInverse, ZeroLog

DEFAULT_P_CAP = 10**6


def is_prime(n: int) -> bool:
    """Deterministic primality test by trial division (fine for n <= 10^12)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def smallest_primitive_root(p: int) -> int:
    """Smallest g generating F_p^x; deterministic so runs are reproducible."""
    if p == 2:
        return 1
    qs = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise NotPrime(f"no primitive root mod {p}; {p} is not prime")


@dataclass(frozen=True)
class PrimeField:
    """Prime modulus p plus its generator, inverse/dlog and e(a/p) tables."""

    p: int
    g: int
    pows: np.ndarray   # pows[j] = g^j mod p, j = 0..p-2
    dlog: np.ndarray   # dlog[pows[j]] = j; dlog[0] = -1 sentinel
    inv: np.ndarray    # x * inv[x] = 1 mod p; inv[0] = 0 sentinel
    e_p: np.ndarray    # e_p[a] = exp(2*pi*i*a/p)
    _hash: int = field(default=0, repr=False)

    def __hash__(self):
        return hash(self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def psi(self, a: int) -> complex:
        """Additive character e(a/p)."""
        return complex(self.e_p[a % self.p])


def make_field(p: int, cap: int = DEFAULT_P_CAP) -> PrimeField:
    """Construct the PrimeField for prime p, building all O(p) tables."""
    if p > cap:
        raise TooLarge(f"p = {p} exceeds the field cap {cap}")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    g = smallest_primitive_root(p)
    pows = np.zeros(p - 1, dtype=np.int64)
    dlog = np.full(p, -1, dtype=np.int64)
    cur = 1
    for j in range(p - 1):
        pows[j] = cur
        dlog[cur] = j
        cur = (cur * g) % p
    inv = np.zeros(p, dtype=np.int64)
    # g^j has inverse g^{p-1-j}
    inv[pows] = pows[(p - 1 - np.arange(p - 1)) % (p - 1)]
    e_p = np.exp(2j * np.pi * np.arange(p) / p)
    return PrimeField(p=p, g=g, pows=pows, dlog=dlog, inv=inv, e_p=e_p)


def inv(f: PrimeField, x: int) -> int:
    """y with x*y = 1 mod p.  Raises ZeroInverse at x = 0."""
    x %= f.p
    if x == 0:
        raise ZeroInverse("0 has no inverse")
    return int(f.inv[x])


def dlog(f: PrimeField, x: int) -> int:
    """Exponent j with g^j = x mod p.  Raises ZeroLog at x = 0."""
    x %= f.p
    if x == 0:
        raise ZeroLog("0 has no discrete log")
    return int(f.dlog[x])
