"""Normalized transforms on functions over F_p.

Three transforms carry the whole calculus:

  Fourier      K^(b)  = p^{-1/2} * sum_a K(a) e(ab/p)           (unitary)
  Mellin       K~(k)  = (p-1)^{-1/2} * sum_{x!=0} K(x) conj(chi_k(x))
  mult. conv.  (M*L)(v) = p^{-1/2} * sum_{u!=0} M(u) L(v/u)

with chi_k(g^j) = e(kj/(p-1)) on the fixed generator g.  The sign convention
e(+ab/p) in the Fourier kernel matters: the dual-transform identities and the
L-function calculus in `correlation` depend on it.

Index 0 conventions: the Mellin transform never sees K(0); mconv ignores
M(0) (u runs over units) and its output at v = 0 is the defining sum
p^{-1/2} * (sum_u M(u)) * L(0), which uses the stored L(0).  This exact v = 0
value is what makes the Plancherel chain in `correlation.q_sum_check` an
identity rather than an approximation, so mconv(M, L) and mconv(L, M) agree
on F_p^x but intentionally differ at index 0.

Fast paths: the Fourier transform is a plain length-p DFT; mconv reindexes
through discrete logs to a cyclic convolution of length p-1 evaluated by an
exact-length DFT (pocketfft handles arbitrary lengths).  The direct O(p^2)
sums remain available as oracles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FieldMismatch
from .ffield import PrimeField


@dataclass
class TraceFn:
    """A complex-valued function on F_p, stored densely by residue."""

    field: PrimeField
    values: np.ndarray
    label: str = ""
    sup_norm: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if len(self.values) != self.field.p:
            raise ValueError(f"need {self.field.p} values, got {len(self.values)}")
        self.sup_norm = float(np.abs(self.values).max()) if self.field.p else 0.0

    def l2_norm_sq(self) -> float:
        return float((np.abs(self.values) ** 2).sum())


@dataclass
class MellinTable:
    """Mellin coefficients of a trace function, indexed by character exponent."""

    field: PrimeField
    coeffs: np.ndarray  # length p-1, coeffs[k] = K~(chi_k)


def fourier(K: TraceFn) -> TraceFn:
    """Normalized Fourier transform K^(b) = p^{-1/2} sum_a K(a) e(ab/p).

    Unitary: Parseval holds exactly up to roundoff, and applying it twice
    reflects the argument, K^^(a) = K(-a mod p).
    """
    p = K.field.p
    vals = np.sqrt(p) * np.fft.ifft(K.values)
    return TraceFn(K.field, vals, label=f"fourier({K.label})")


def mellin(K: TraceFn) -> MellinTable:
    """Mellin transform against the characters chi_k(g^j) = e(kj/(p-1)).

    K(0) is ignored; only the restriction to F_p^x enters.
    """
    f = K.field
    m = K.values[f.pows]
    coeffs = np.fft.fft(m) / np.sqrt(f.p - 1)
    return MellinTable(f, coeffs)


def mellin_invert(M: MellinTable) -> TraceFn:
    """Inverse Mellin transform; the result is 0 at index 0 by construction."""
    f = M.field
    vals = np.zeros(f.p, dtype=np.complex128)
    vals[f.pows] = np.sqrt(f.p - 1) * np.fft.ifft(M.coeffs)
    return TraceFn(f, vals, label="mellin_invert")


def mconv(M: TraceFn, L: TraceFn) -> TraceFn:
    """Normalized multiplicative convolution (M*L)(v) = p^{-1/2} sum_u M(u) L(v/u).

    Evaluated on F_p^x by discrete-log reindexing to an exact cyclic
    convolution of length p-1; the v = 0 entry is the defining sum
    p^{-1/2} (sum_u M(u)) L(0).  Note the asymmetry at v = 0: mconv(M, L)
    and mconv(L, M) agree on F_p^x but not there.
    """
    f = _same_field(M, L)
    a = M.values[f.pows]
    b = L.values[f.pows]
    conv = np.fft.ifft(np.fft.fft(a) * np.fft.fft(b))
    out = np.zeros(f.p, dtype=np.complex128)
    out[f.pows] = conv / np.sqrt(f.p)
    out[0] = a.sum() * L.values[0] / np.sqrt(f.p)
    return TraceFn(f, out, label=f"mconv({M.label},{L.label})")


def mconv_direct(M: TraceFn, L: TraceFn) -> TraceFn:
    """O(p^2) two-loop evaluation of the same convolution; the test oracle."""
    f = _same_field(M, L)
    p = f.p
    idx = (np.arange(p)[:, None] * f.inv[None, 1:]) % p
    out = L.values[idx] @ M.values[1:] / np.sqrt(p)
    return TraceFn(f, out, label=f"mconv_direct({M.label},{L.label})")


def fourier_direct(K: TraceFn) -> TraceFn:
    """O(p^2) double-sum Fourier transform, kept as the oracle route."""
    p = K.field.p
    ab = (np.arange(p)[:, None] * np.arange(p)[None, :]) % p
    vals = K.field.e_p[ab] @ K.values / np.sqrt(p)
    return TraceFn(K.field, vals, label=f"fourier_direct({K.label})")


def mellin_direct(K: TraceFn) -> MellinTable:
    """O(p^2) Mellin transform oracle."""
    f = K.field
    p = f.p
    j = np.arange(p - 1)
    chars = np.exp(-2j * np.pi * np.outer(np.arange(p - 1), j) / (p - 1))
    coeffs = chars @ K.values[f.pows] / np.sqrt(p - 1)
    return MellinTable(f, coeffs)


def _same_field(M: TraceFn, L: TraceFn) -> PrimeField:
    if M.field.p != L.field.p:
        raise FieldMismatch(f"fields mod {M.field.p} and {L.field.p} differ")
    return M.field
