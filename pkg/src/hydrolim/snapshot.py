"""Binary field snapshots (PEQS1 format).

Layout, little-endian throughout:

    offset  size  content
    0       5     magic "PEQS1"
    5       1     u8 parity: 0 = even in z, 1 = odd in z
    6       4     u32 nh (horizontal modes per direction)
    10      4     u32 nz (largest vertical mode; the array has nz + 1 slots)
    14      ...   coefficients as (real, imag) f64 pairs, row-major over
                  (kx, ky, m) with kx, ky in FFT index order

Body size is nh * nh * (nz + 1) * 16 bytes.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .spectral import Grid, Parity, SpectralScalar

__all__ = ["MAGIC", "SnapshotFormatError", "write_snapshot", "read_snapshot"]

MAGIC = b"PEQS1"
_HEADER = struct.Struct("<5sBII")


class SnapshotFormatError(ValueError):
    """The file is not a valid field snapshot."""


def write_snapshot(path, f: SpectralScalar) -> None:
    if not f.is_finite():
        raise ValueError("refusing to write non-finite coefficients")
    parity_code = 0 if f.parity is Parity.EVEN_Z else 1
    header = _HEADER.pack(MAGIC, parity_code, f.grid.nh, f.grid.nz)
    body = np.ascontiguousarray(f.coeffs, dtype="<c16").tobytes()
    Path(path).write_bytes(header + body)


def read_snapshot(path, grid: Grid | None = None) -> SpectralScalar:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise SnapshotFormatError(f"{path}: truncated header")
    magic, parity_code, nh, nz = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise SnapshotFormatError(f"{path}: bad magic {magic!r}")
    if parity_code not in (0, 1):
        raise SnapshotFormatError(f"{path}: bad parity byte {parity_code}")
    expected = _HEADER.size + nh * nh * (nz + 1) * 16
    if len(raw) != expected:
        raise SnapshotFormatError(
            f"{path}: expected {expected} bytes for nh={nh}, nz={nz}, got {len(raw)}"
        )
    if grid is None:
        try:
            grid = Grid(nh, nz)
        except ValueError as exc:
            raise SnapshotFormatError(f"{path}: {exc}") from exc
    elif grid.nh != nh or grid.nz != nz:
        raise SnapshotFormatError(
            f"{path}: snapshot is {nh}x{nh}x{nz}, expected {grid.nh}x{grid.nh}x{grid.nz}"
        )
    coeffs = np.frombuffer(raw, dtype="<c16", offset=_HEADER.size).reshape(
        grid.spectral_shape
    )
    parity = Parity.EVEN_Z if parity_code == 0 else Parity.ODD_Z
    f = SpectralScalar(grid, parity, coeffs.astype(np.complex128))
    if not f.is_finite():
        raise SnapshotFormatError(f"{path}: non-finite coefficients")
    return f
