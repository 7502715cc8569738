"""Exact Hecke eigenvalue tables: weight-12 level-1 and its symmetric square.

The weight-12 coefficients tau(n) come from the 24th power of the Dedekind
eta series, computed over exact integers: eta^3 is the sparse Jacobi series
sum_k (-1)^k (2k+1) q^{k(k+1)/2}, and three truncated squarings give eta^24
with tau(n) the coefficient of q^{n-1}.  Squaring is done by Kronecker
substitution (pack coefficients into one big integer, square, unpack), with
gmpy2 used when available; plain Python integers otherwise.  Normalized
eigenvalues lam_f(n) = tau(n)/n^{11/2} satisfy |lam_f(n)| <= d(n).

The rank-3 table is the symmetric-square lift: at a prime p the Satake
parameters are {a^2, 1, a^{-2}} with a + 1/a = lam_f(p), so the degree-3
eigenvalues are Schur polynomials in those parameters.  With
u = lam_f(p)^2 - 1 and the complete homogeneous symmetric values h_j
(recursion h_j = u h_{j-1} - u h_{j-2} + h_{j-3}) one gets

    lam(p^a, p^b) = h_{a+b} h_b - h_{a+b+1} h_{b-1},

extended to all (r, n) by multiplicativity.  The table is self-dual
(lam(r, n) = lam(n, r)) and satisfies the degree-3 Hecke relation

    lam(1, m) lam(r, n) = sum_{d0 d1 d2 = m, d1 | r, d2 | n}
                          lam(r d2 / d1, n d0 / d2),

which `validate` checks exhaustively on small tables (and on a seeded sample
when the range makes exhaustive checking unreasonable).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import OutOfRange, TableTooSmall, TooLarge

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _mpz = int

TAU_CAP = 10**7
_GL3_EXHAUSTIVE_LIMIT = 20000


def _poly_sqr_trunc(coeffs: list[int], n: int) -> list[int]:
    """First n coefficients of the square of an integer polynomial.

    Kronecker substitution with the positive/negative parts split so slots
    stay nonnegative; slot width is taken from the exact coefficient bound,
    so unpacking needs no carry handling.
    """
    m = len(coeffs)
    amax = max(abs(c) for c in coeffs) or 1
    bound = min(m, n) * amax * amax
    slot_bytes = (bound.bit_length() + 2 + 7) // 8
    pos = bytearray(m * slot_bytes)
    neg = bytearray(m * slot_bytes)
    for i, v in enumerate(coeffs):
        if v > 0:
            pos[i * slot_bytes:i * slot_bytes + (v.bit_length() + 7) // 8] = \
                v.to_bytes((v.bit_length() + 7) // 8, "little")
        elif v < 0:
            w = -v
            neg[i * slot_bytes:i * slot_bytes + (w.bit_length() + 7) // 8] = \
                w.to_bytes((w.bit_length() + 7) // 8, "little")
    P = _mpz(int.from_bytes(bytes(pos), "little"))
    Q = _mpz(int.from_bytes(bytes(neg), "little"))
    plus = int(P * P + Q * Q)   # slotwise pos*pos + neg*neg
    minus = int(2 * P * Q)      # slotwise cross terms
    width = 2 * m * slot_bytes + 16
    bp = plus.to_bytes(width, "little")
    bm = minus.to_bytes(width, "little")
    out = []
    for i in range(n):
        a = int.from_bytes(bp[i * slot_bytes:(i + 1) * slot_bytes], "little")
        b = int.from_bytes(bm[i * slot_bytes:(i + 1) * slot_bytes], "little")
        out.append(a - b)
    return out


def _eta24(n_terms: int) -> list[int]:
    e3 = [0] * n_terms
    k = 0
    while k * (k + 1) // 2 < n_terms:
        e3[k * (k + 1) // 2] = (2 * k + 1) if k % 2 == 0 else -(2 * k + 1)
        k += 1
    e6 = _poly_sqr_trunc(e3, n_terms)
    e12 = _poly_sqr_trunc(e6, n_terms)
    return _poly_sqr_trunc(e12, n_terms)


def _spf_sieve(n: int) -> np.ndarray:
    """Smallest-prime-factor table for 0..n."""
    spf = np.zeros(n + 1, dtype=np.int64)
    spf[1:] = np.arange(1, n + 1)
    for p in range(2, int(math.isqrt(n)) + 1):
        if spf[p] == p:
            sl = spf[p * p::p]
            sl[sl == np.arange(p * p, n + 1, p)] = p
    return spf


def _divisor_counts(n: int) -> np.ndarray:
    d = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        d[i::i] += 1
    return d


@dataclass
class HeckeGL2:
    """Exact tau(1..N) and the normalized eigenvalues lam_f(n) = tau(n)/n^{11/2}."""

    N: int
    tau: list  # tau[n], index 0 unused
    lam: np.ndarray  # lam[n], index 0 unused

    def validate(self) -> None:
        """Exhaustive multiplicativity, prime-power recursion and |lam| <= d(n).

        Checking tau(n) = tau(p^v) tau(n / p^v) at the smallest prime power
        of every n, plus the recursion at every prime power, pins down full
        multiplicativity by induction.
        """
        spf = _spf_sieve(self.N)
        tau = self.tau
        for n in range(2, self.N + 1):
            p = int(spf[n])
            pe, m = p, n // p
            while m % p == 0:
                pe *= p
                m //= p
            if m > 1 and tau[n] != tau[pe] * tau[m]:
                raise AssertionError(f"tau multiplicativity fails at n = {n}")
        p = 2
        while p <= self.N:
            if int(spf[p]) == p:
                pk = p * p
                prev, cur = tau[1], tau[p]
                while pk <= self.N:
                    nxt = tau[p] * cur - p**11 * prev
                    if tau[pk] != nxt:
                        raise AssertionError(f"tau Hecke recursion fails at {pk}")
                    prev, cur = cur, nxt
                    pk *= p
            p += 1
        d = _divisor_counts(self.N)
        if not np.all(np.abs(self.lam[1:]) <= d[1:] + 1e-12):
            raise AssertionError("Deligne bound |lam_f(n)| <= d(n) fails")


def tau_table(N: int, validate: bool = True) -> HeckeGL2:
    """Exact tau(1..N); validates its defining invariants unless told not to."""
    if N > TAU_CAP:
        raise TooLarge(f"tau table size {N} exceeds cap {TAU_CAP}")
    if N < 1:
        raise OutOfRange("need N >= 1")
    e24 = _eta24(N)
    tau = [0] + e24[:N]
    ns = np.arange(N + 1, dtype=np.float64)
    lam = np.zeros(N + 1)
    lam[1:] = np.array([float(t) for t in tau[1:]]) / ns[1:] ** 5.5
    table = HeckeGL2(N=N, tau=tau, lam=lam)
    if validate:
        table.validate()
    return table


def _hseq(u: float, top: int) -> list[float]:
    h = [1.0, u, u * u - u]
    while len(h) <= top + 1:
        h.append(u * h[-1] - u * h[-2] + h[-3])
    return h


@dataclass
class HeckeGL3:
    """Symmetric-square eigenvalues lam(r, n) for r <= R, n <= N, r^2 n <= bound."""

    R: int
    N: int
    bound: int
    gl2: HeckeGL2
    _spf: np.ndarray = dc_field(repr=False, default=None)
    _schur: dict = dc_field(repr=False, default_factory=dict)
    _lam1: np.ndarray = dc_field(repr=False, default=None)

    def __post_init__(self):
        need = max(self.R, self.N)
        if self.gl2.N < need:
            raise TableTooSmall(f"rank-2 table covers {self.gl2.N} < {need}")
        self._spf = _spf_sieve(need)

    def _schur_pp(self, p: int, a: int, b: int) -> float:
        key = (p, a, b)
        val = self._schur.get(key)
        if val is None:
            lf = self.gl2.lam[p]
            h = _hseq(lf * lf - 1.0, a + b + 1)
            val = h[a + b] * h[b] - (h[a + b + 1] * h[b - 1] if b >= 1 else 0.0)
            self._schur[key] = val
        return val

    def covers(self, r: int, n: int) -> bool:
        return 1 <= r <= self.R and 1 <= n <= self.N and r * r * n <= self.bound

    def relation_covered(self, m: int, r: int, n: int) -> bool:
        """True when every entry referenced by the Hecke relation at (m, r, n)
        lies inside the table.  Tables with R >= sqrt(bound) and N = bound
        cover every admissible triple."""
        if not (self.covers(1, m) and self.covers(r, n)):
            return False
        for d1 in _divisors(m):
            if r % d1:
                continue
            for d2 in _divisors(m // d1):
                if n % d2:
                    continue
                d0 = m // (d1 * d2)
                if not self.covers(r * d2 // d1, n * d0 // d2):
                    return False
        return True

    def lam(self, r: int, n: int) -> float:
        """lam(r, n) by multiplicativity over the primes dividing r*n."""
        if not self.covers(r, n):
            raise OutOfRange(f"(r, n) = ({r}, {n}) outside the table range")
        out = 1.0
        spf = self._spf
        while r > 1 or n > 1:
            p = int(spf[r]) if r > 1 else int(spf[n])
            if r > 1 and n > 1:
                p = min(int(spf[r]), int(spf[n]))
            a = 0
            while r % p == 0:
                r //= p
                a += 1
            b = 0
            while n % p == 0:
                n //= p
                b += 1
            out *= self._schur_pp(p, a, b)
        return out

    def lam1_array(self, m: int) -> np.ndarray:
        """Vector of lam(1, n) for n = 0..m (index 0 unused), sieved in one pass."""
        if m > self.N:
            raise OutOfRange(f"lam1 range {m} exceeds table N = {self.N}")
        if self._lam1 is not None and len(self._lam1) > m:
            return self._lam1[:m + 1]
        full = self.N
        out = np.zeros(full + 1)
        out[1] = 1.0
        spf = self._spf
        for n in range(2, full + 1):
            p = int(spf[n])
            b, rest = 0, n
            while rest % p == 0:
                rest //= p
                b += 1
            out[n] = self._schur_pp(p, 0, b) * out[rest]
        self._lam1 = out
        return out[:m + 1]

    def lam_row(self, r: int, ns: np.ndarray) -> np.ndarray:
        """lam(r, n) for a contiguous block of n, using the lam(1, .) sieve."""
        lam1 = self.lam1_array(int(ns.max()))
        if r == 1:
            return lam1[ns]
        rest_r = r
        rp: list[tuple[int, int]] = []
        spf = self._spf
        while rest_r > 1:
            p = int(spf[rest_r])
            a = 0
            while rest_r % p == 0:
                rest_r //= p
                a += 1
            rp.append((p, a))
        out = np.empty(len(ns))
        for i, n in enumerate(ns):
            n = int(n)
            acc = 1.0
            rest = n
            for p, a in rp:
                b = 0
                while rest % p == 0:
                    rest //= p
                    b += 1
                acc *= self._schur_pp(p, a, b)
            out[i] = acc * lam1[rest]
        return out

    def entries(self):
        """Iterate (r, n) over the table triangle in lexicographic order."""
        for r in range(1, self.R + 1):
            top = min(self.N, self.bound // (r * r))
            for n in range(1, top + 1):
                yield r, n

    def validate(self, rng: np.random.Generator | None = None) -> None:
        """Self-duality, the Ramanujan bound at primes, and the Hecke relation.

        The relation is checked over every admissible triple when the range
        is small, otherwise over a seeded 500-triple sample.
        """
        spf = self._spf
        for p in range(2, min(self.N, self.R) + 1):
            if int(spf[p]) != p:
                continue
            if abs(self._schur_pp(p, 0, 1)) > 3.0 + 1e-12:
                raise AssertionError(f"|lam(1, {p})| exceeds the Ramanujan bound 3")
        if self.bound <= _GL3_EXHAUSTIVE_LIMIT:
            pairs = self.entries()
        else:
            srng = np.random.default_rng(40229)
            pairs = ((int(srng.integers(1, min(self.R, 100) + 1)),
                      int(srng.integers(1, 100 + 1))) for _ in range(500))
        for r, n in pairs:
            if n <= self.R and r <= self.N and n * n * r <= self.bound and r * r * n <= self.bound:
                if abs(self.lam(r, n) - self.lam(n, r)) > 1e-9 * max(1.0, abs(self.lam(r, n))):
                    raise AssertionError(f"self-duality fails at ({r}, {n})")
        if self.bound <= _GL3_EXHAUSTIVE_LIMIT:
            triples = list(hecke_relation_triples(self.bound))
        else:
            rng = rng or np.random.default_rng(20229)
            triples = []
            while len(triples) < 500:
                m = int(rng.integers(1, 60))
                r = int(rng.integers(1, 6))
                n = int(rng.integers(1, max(2, self.bound // (60 * r * r))))
                if m * r * r * n <= self.bound:
                    triples.append((m, r, n))
        for m, r, n in triples:
            if not self.relation_covered(m, r, n):
                continue
            dev = self.hecke_relation_dev(m, r, n)
            if dev > 1e-9:
                raise AssertionError(f"Hecke relation fails at (m,r,n)=({m},{r},{n}): {dev}")

    def hecke_relation_dev(self, m: int, r: int, n: int) -> float:
        """|lam(1,m) lam(r,n) - sum_{d0 d1 d2 = m, d1|r, d2|n} lam(r d2/d1, n d0/d2)|."""
        lhs = self.lam(1, m) * self.lam(r, n)
        rhs = 0.0
        for d1 in _divisors(m):
            if r % d1:
                continue
            for d2 in _divisors(m // d1):
                if n % d2:
                    continue
                d0 = m // (d1 * d2)
                rhs += self.lam(r * d2 // d1, n * d0 // d2)
        return abs(lhs - rhs)


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def hecke_relation_triples(bound: int):
    """All (m, r, n) with m r^2 n <= bound."""
    for m in range(1, bound + 1):
        for r in range(1, int(math.isqrt(bound // m)) + 1):
            top = bound // (m * r * r)
            for n in range(1, top + 1):
                yield m, r, n


def sym2_table(R: int, N: int, gl2: HeckeGL2 | None = None,
               bound: int | None = None, validate: bool = True) -> HeckeGL3:
    """Symmetric-square table for r <= R, n <= N with r^2 n <= bound (default N)."""
    bound = bound if bound is not None else N
    gl2 = gl2 if gl2 is not None else tau_table(max(R, N), validate=False)
    table = HeckeGL3(R=R, N=N, bound=bound, gl2=gl2)
    if validate:
        table.validate()
    return table


def rs_partial(gl2: HeckeGL2, gl3: HeckeGL3, X: int) -> tuple[float, float]:
    """Mean-square partial sums: (sum_{n<=X} lam_f(n)^2 / X,
    sum_{m^2 n <= X} lam(n, m)^2 m / X)."""
    if X < 1 or X > gl2.N:
        raise OutOfRange(f"X = {X} outside the rank-2 table range")
    if X > gl3.bound:
        raise OutOfRange(f"X = {X} outside the rank-3 table bound")
    g2 = float((gl2.lam[1:X + 1] ** 2).sum()) / X
    total = 0.0
    lam1 = gl3.lam1_array(X)
    total += float((lam1[1:X + 1] ** 2).sum())
    m = 2
    while m * m <= X:
        top = X // (m * m)
        ns = np.arange(1, top + 1)
        row = gl3.lam_row(m, ns)  # lam(m, n) = lam(n, m) by self-duality
        total += m * float((row ** 2).sum())
        m += 1
    return g2, total / X
