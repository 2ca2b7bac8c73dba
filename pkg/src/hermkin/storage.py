"""Binary on-disk formats: the collision-tensor cache and field snapshots.

Both containers share the same envelope: a four-byte magic, a little-
endian header, the payload, and a trailing CRC32 of every preceding
byte.  Loads verify the checksum first and then the header fields, so
truncation, bit corruption, and kernel mismatches all fail loudly.
"""

from __future__ import annotations

import struct
import zlib
from pathlib import Path

import numpy as np

from .frames import Frame
from .indexing import index_count, layout
from .kernels import KernelSpec
from .solver import CellField, Grid
from .tensor import CollisionTensor

TENSOR_MAGIC = b"BHSC"
SNAPSHOT_MAGIC = b"BHSF"
_VERSION = 1


class CacheError(RuntimeError):
    """Unreadable or mismatched binary container."""


def _finish(payload: bytearray) -> bytes:
    crc = zlib.crc32(bytes(payload)) & 0xFFFFFFFF
    return bytes(payload) + struct.pack("<I", crc)


def _open_checked(path, magic: bytes) -> bytes:
    blob = Path(path).read_bytes()
    if len(blob) < len(magic) + 4:
        raise CacheError(f"{path}: truncated container")
    body, stored = blob[:-4], struct.unpack("<I", blob[-4:])[0]
    if zlib.crc32(body) & 0xFFFFFFFF != stored:
        raise CacheError(f"{path}: checksum mismatch")
    if body[:4] != magic:
        raise CacheError(
            f"{path}: bad magic {body[:4]!r}, expected {magic!r}"
        )
    return body[4:]


def save_tensor(tensor: CollisionTensor, path) -> None:
    """Write the BHSC cache: header, packed index triples, values, CRC."""
    kid, p0, p1, p2 = tensor.kernel.fingerprint()
    out = bytearray()
    out += TENSOR_MAGIC
    out += struct.pack("<I", _VERSION)
    out += struct.pack("<B", kid)
    out += struct.pack("<3d", p0, p1, p2)
    out += struct.pack("<I", tensor.m0)
    out += struct.pack("<d", tensor.threshold)
    out += struct.pack("<Q", len(tensor))
    lay = tensor.layout
    alphas = lay.alphas
    comps = np.concatenate(
        [
            alphas[tensor.alpha_idx],
            alphas[tensor.beta_idx],
            alphas[tensor.gamma_idx],
        ],
        axis=1,
    ).astype(np.uint8)
    for row, value in zip(comps, tensor.values):
        out += row.tobytes()
        out += struct.pack("<d", value)
    Path(path).write_bytes(_finish(out))


def load_tensor(path, expect_kernel: KernelSpec | None = None) -> CollisionTensor:
    """Read a BHSC cache; optionally enforce a kernel fingerprint."""
    body = _open_checked(path, TENSOR_MAGIC)
    off = 0

    def take(fmt):
        nonlocal off
        size = struct.calcsize(fmt)
        vals = struct.unpack_from("<" + fmt, body, off)
        off += size
        return vals if len(vals) > 1 else vals[0]

    version = take("I")
    if version != _VERSION:
        raise CacheError(f"{path}: unsupported version {version}")
    kid = take("B")
    params = take("3d")
    m0 = take("I")
    threshold = take("d")
    count = take("Q")
    variant = {0: "hs", 1: "vhs", 2: "ipl"}.get(kid)
    if variant is None:
        raise CacheError(f"{path}: unknown kernel id {kid}")
    nparams = {"hs": 1, "vhs": 3, "ipl": 2}[variant]
    kernel = KernelSpec(variant, tuple(params[:nparams]))
    if expect_kernel is not None and kernel.fingerprint() != expect_kernel.fingerprint():
        raise CacheError(
            f"{path}: cache kernel {kernel} does not match requested "
            f"{expect_kernel}"
        )
    record = 9 + 8
    if len(body) - off != count * record:
        raise CacheError(f"{path}: truncated entry table")
    raw = np.frombuffer(body, dtype=np.uint8, count=count * record, offset=off)
    raw = raw.reshape(count, record)
    comps = raw[:, :9].astype(np.int64)
    values = raw[:, 9:].copy().view("<f8").ravel()
    lay = layout(m0)
    if comps.size and comps.reshape(-1, 3).sum(axis=1).max() > m0:
        raise CacheError(f"{path}: entry degree exceeds header truncation")
    ranks = np.empty((count, 3), dtype=np.int64)
    for col in range(3):
        ranks[:, col] = [
            lay.rank(tuple(c)) for c in comps[:, 3 * col : 3 * col + 3]
        ]
    return CollisionTensor(
        kernel, m0, threshold, ranks[:, 0], ranks[:, 1], ranks[:, 2], values
    )


def save_snapshot(field: CellField, path) -> None:
    """Write a BHSF field snapshot (frame, grid metadata, raw values)."""
    out = bytearray()
    out += SNAPSHOT_MAGIC
    out += struct.pack("<I", _VERSION)
    out += struct.pack("<I", field.m)
    grid = field.grid
    out += struct.pack("<I", grid.dims)
    shape = tuple(grid.shape) + (1,) * (2 - grid.dims)
    spacing = tuple(grid.spacing) + (0.0,) * (2 - grid.dims)
    origin = tuple(grid.origin) + (0.0,) * (2 - grid.dims)
    out += struct.pack("<2I", *shape)
    out += struct.pack("<2d", *spacing)
    out += struct.pack("<2d", *origin)
    out += struct.pack("<3d", *field.frame.u)
    out += struct.pack("<d", field.frame.theta)
    out += struct.pack("<d", field.time)
    out += np.ascontiguousarray(field.values, dtype="<f8").tobytes()
    Path(path).write_bytes(_finish(out))


def load_snapshot(path, walls: dict | None = None) -> CellField:
    """Read a BHSF snapshot; wall specs are not stored and may be
    reattached by the caller."""
    body = _open_checked(path, SNAPSHOT_MAGIC)
    off = 0

    def take(fmt):
        nonlocal off
        size = struct.calcsize(fmt)
        vals = struct.unpack_from("<" + fmt, body, off)
        off += size
        return vals if len(vals) > 1 else vals[0]

    version = take("I")
    if version != _VERSION:
        raise CacheError(f"{path}: unsupported version {version}")
    m = take("I")
    dims = take("I")
    shape = take("2I")
    spacing = take("2d")
    origin = take("2d")
    u = take("3d")
    theta = take("d")
    time = take("d")
    n = index_count(m)
    cells = shape[0] * (shape[1] if dims == 2 else 1)
    expected = cells * n * 8
    if len(body) - off != expected:
        raise CacheError(f"{path}: payload size mismatch")
    values = np.frombuffer(body, dtype="<f8", offset=off).copy()
    grid = Grid(
        tuple(shape[:dims]), tuple(spacing[:dims]), tuple(origin[:dims]),
        walls or {},
    )
    values = values.reshape(tuple(shape[:dims]) + (n,))
    return CellField(grid, Frame(u, theta), m, values, time)
