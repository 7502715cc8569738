"""Binary disk cache for the expensive tables.

Layout (little-endian throughout):

    magic   "TLAB"
    u16     version = 1
    u8      kind: 1 = tau, 2 = kl, 3 = sym2
    u64     p (kl) or N (tau) or triangle bound (sym2)
    u8      k: Kloosterman rank, 0 when not applicable
    payload
    u32     CRC32 of the payload

Payloads: tau stores length-prefixed signed big integers (u32 byte length,
sign byte, little-endian magnitude) since tau(n) outgrows 64 bits quickly;
kl stores p little-endian f64 (re, im) pairs; sym2 stores f64 values in the
canonical lexicographic order of sym2_entries(bound).

Readers raise CacheCorrupt on magic/CRC mismatch and CacheVersion on a
version they do not understand; high-level loaders fall back to recomputing.
"""

from __future__ import annotations

import math
import struct
import zlib
from pathlib import Path

import numpy as np

from .errors import CacheCorrupt, CacheVersion

MAGIC = b"TLAB"
VERSION = 1
KIND_TAU, KIND_KL, KIND_SYM2 = 1, 2, 3


def _write(path: Path, kind: int, p_or_n: int, k: int, payload: bytes) -> None:
    head = MAGIC + struct.pack("<HBQB", VERSION, kind, p_or_n, k)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(head)
        fh.write(payload)
        fh.write(struct.pack("<I", zlib.crc32(payload) & 0xFFFFFFFF))
    tmp.replace(path)


def _read(path: Path) -> tuple[int, int, int, bytes]:
    data = Path(path).read_bytes()
    if len(data) < 20 or data[:4] != MAGIC:
        raise CacheCorrupt(f"{path}: bad magic or truncated header")
    version, kind, p_or_n, k = struct.unpack("<HBQB", data[4:16])
    if version != VERSION:
        raise CacheVersion(f"{path}: file version {version}, reader version {VERSION}")
    payload, (crc,) = data[16:-4], struct.unpack("<I", data[-4:])
    if zlib.crc32(payload) & 0xFFFFFFFF != crc:
        raise CacheCorrupt(f"{path}: payload CRC mismatch")
    return kind, p_or_n, k, payload


def write_tau(path, tau: list) -> None:
    """tau[0] unused; records tau(1..N)."""
    n = len(tau) - 1
    parts = []
    for v in tau[1:]:
        mag = abs(int(v))
        blob = mag.to_bytes((mag.bit_length() + 7) // 8 or 1, "little")
        parts.append(struct.pack("<IB", len(blob), 1 if v < 0 else 0) + blob)
    _write(Path(path), KIND_TAU, n, 0, b"".join(parts))


def read_tau(path) -> list:
    kind, n, _, payload = _read(Path(path))
    if kind != KIND_TAU:
        raise CacheCorrupt(f"{path}: expected tau payload, found kind {kind}")
    out = [0]
    off = 0
    for _ in range(n):
        if off + 5 > len(payload):
            raise CacheCorrupt(f"{path}: truncated tau record")
        ln, sign = struct.unpack_from("<IB", payload, off)
        off += 5
        if off + ln > len(payload):
            raise CacheCorrupt(f"{path}: truncated tau record body")
        mag = int.from_bytes(payload[off:off + ln], "little")
        off += ln
        out.append(-mag if sign else mag)
    if off != len(payload):
        raise CacheCorrupt(f"{path}: trailing bytes in tau payload")
    return out


def write_kl(path, p: int, k: int, values: np.ndarray) -> None:
    vals = np.asarray(values, dtype=np.complex128)
    payload = np.column_stack([vals.real, vals.imag]).astype("<f8").tobytes()
    _write(Path(path), KIND_KL, p, k, payload)


def read_kl(path) -> tuple[int, int, np.ndarray]:
    kind, p, k, payload = _read(Path(path))
    if kind != KIND_KL:
        raise CacheCorrupt(f"{path}: expected kl payload, found kind {kind}")
    flat = np.frombuffer(payload, dtype="<f8")
    if len(flat) != 2 * p:
        raise CacheCorrupt(f"{path}: kl payload length {len(flat)} != 2p")
    return p, k, flat[0::2] + 1j * flat[1::2]


def sym2_entries(bound: int):
    """Canonical (r, n) order for sym2 payloads: r ascending, n ascending."""
    for r in range(1, math.isqrt(bound) + 1):
        for n in range(1, bound // (r * r) + 1):
            yield r, n


def write_sym2(path, bound: int, values: np.ndarray) -> None:
    payload = np.asarray(values, dtype="<f8").tobytes()
    _write(Path(path), KIND_SYM2, bound, 0, payload)


def read_sym2(path) -> tuple[int, np.ndarray]:
    kind, bound, _, payload = _read(Path(path))
    if kind != KIND_SYM2:
        raise CacheCorrupt(f"{path}: expected sym2 payload, found kind {kind}")
    vals = np.frombuffer(payload, dtype="<f8")
    expect = sum(1 for _ in sym2_entries(bound))
    if len(vals) != expect:
        raise CacheCorrupt(f"{path}: sym2 payload length {len(vals)} != {expect}")
    return bound, vals


def load_or_build_tau(N: int, cache_dir) -> list:
    """tau(1..N) from cache when intact, rebuilding (and rewriting) otherwise."""
    from .hecke import tau_table

    path = Path(cache_dir) / f"tau_{N}.tlab"
    if path.exists():
        try:
            return read_tau(path)
        except (CacheCorrupt, CacheVersion):
            pass  # recompute below
    tau = tau_table(N, validate=False).tau
    write_tau(path, tau)
    return tau
