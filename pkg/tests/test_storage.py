import numpy as np
import pytest

from hermkin.frames import Frame, maxwellian_coeffs
from hermkin.kernels import KernelSpec
from hermkin.solver import CellField, Grid
from hermkin.storage import (
    CacheError,
    load_snapshot,
    load_tensor,
    save_snapshot,
    save_tensor,
)
from hermkin.tensor import assemble_tensor


def test_tensor_round_trip(tmp_path, vhs1_m3):
    path = tmp_path / "t.bhsc"
    save_tensor(vhs1_m3, path)
    back = load_tensor(path)
    assert back.m0 == vhs1_m3.m0
    assert back.threshold == vhs1_m3.threshold
    assert np.array_equal(back.values, vhs1_m3.values)
    assert np.array_equal(back.alpha_idx, vhs1_m3.alpha_idx)
    assert np.array_equal(back.beta_idx, vhs1_m3.beta_idx)
    assert np.array_equal(back.gamma_idx, vhs1_m3.gamma_idx)
    assert back.kernel.fingerprint() == vhs1_m3.kernel.fingerprint()


def test_tensor_file_byte_deterministic(tmp_path, vhs1_m3):
    p1, p2 = tmp_path / "a.bhsc", tmp_path / "b.bhsc"
    save_tensor(vhs1_m3, p1)
    save_tensor(vhs1_m3, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_tensor_corruption_detected(tmp_path, vhs1_m3):
    path = tmp_path / "t.bhsc"
    save_tensor(vhs1_m3, path)
    blob = bytearray(path.read_bytes())
    blob[len(blob) // 2] ^= 0x40
    path.write_bytes(bytes(blob))
    with pytest.raises(CacheError, match="checksum"):
        load_tensor(path)


def test_tensor_truncation_detected(tmp_path, vhs1_m3):
    path = tmp_path / "t.bhsc"
    save_tensor(vhs1_m3, path)
    blob = path.read_bytes()
    path.write_bytes(blob[: len(blob) // 2])
    with pytest.raises(CacheError):
        load_tensor(path)


def test_tensor_bad_magic(tmp_path, vhs1_m3):
    path = tmp_path / "t.bhsc"
    save_tensor(vhs1_m3, path)
    blob = bytearray(path.read_bytes())
    blob[0:4] = b"NOPE"
    # keep the trailing checksum consistent so the magic check fires
    import struct
    import zlib

    body = bytes(blob[:-4])
    path.write_bytes(body + struct.pack("<I", zlib.crc32(body) & 0xFFFFFFFF))
    with pytest.raises(CacheError, match="magic"):
        load_tensor(path)


def test_tensor_fingerprint_mismatch(tmp_path, vhs1_m3):
    path = tmp_path / "t.bhsc"
    save_tensor(vhs1_m3, path)
    with pytest.raises(CacheError, match="kernel"):
        load_tensor(path, expect_kernel=KernelSpec.ipl(10.0))
    with pytest.raises(CacheError, match="kernel"):
        load_tensor(path, expect_kernel=KernelSpec.vhs(1.0, 1.0, 0.5))
    assert load_tensor(path, expect_kernel=vhs1_m3.kernel) is not None


def test_tensor_contraction_survives_round_trip(tmp_path, vhs1_m3, rng):
    from hermkin.collision import quadratic_rhs

    path = tmp_path / "t.bhsc"
    save_tensor(vhs1_m3, path)
    back = load_tensor(path)
    h = rng.standard_normal(vhs1_m3.layout.size)
    assert np.array_equal(quadratic_rhs(h, back), quadratic_rhs(h, vhs1_m3))


def _field():
    frame = Frame((1.0, -2.0, 0.0), 52345.0)
    grid = Grid((5,), (0.25,), (-0.625,))
    state = maxwellian_coeffs(2e-5, (3.0, 0.0, 0.0), 48000.0, frame, 4)
    vals = np.tile(state.values, (5, 1)) * np.linspace(1, 1.5, 5)[:, None]
    return CellField(grid, frame, 4, vals, time=3.25e-6)


def test_snapshot_round_trip(tmp_path):
    fld = _field()
    path = tmp_path / "s.bhsf"
    save_snapshot(fld, path)
    back = load_snapshot(path)
    assert back.m == fld.m
    assert back.grid.shape == fld.grid.shape
    assert back.grid.spacing == fld.grid.spacing
    assert back.grid.origin == fld.grid.origin
    assert back.frame.u == fld.frame.u
    assert back.frame.theta == fld.frame.theta
    assert back.time == fld.time
    assert np.array_equal(back.values, fld.values)


def test_snapshot_2d_round_trip(tmp_path):
    frame = Frame((0.0, 0.0, 0.0), 40000.0)
    grid = Grid((3, 4), (0.1, 0.2))
    vals = np.arange(3 * 4 * 10, dtype=float).reshape(3, 4, 10)
    fld = CellField(grid, frame, 2, vals)
    path = tmp_path / "s2.bhsf"
    save_snapshot(fld, path)
    back = load_snapshot(path)
    assert back.grid.shape == (3, 4)
    assert np.array_equal(back.values, vals)


def test_snapshot_corruption_detected(tmp_path):
    path = tmp_path / "s.bhsf"
    save_snapshot(_field(), path)
    blob = bytearray(path.read_bytes())
    blob[30] ^= 0x01
    path.write_bytes(bytes(blob))
    with pytest.raises(CacheError, match="checksum"):
        load_snapshot(path)


def test_snapshot_rejects_tensor_magic(tmp_path, vhs1_m3):
    path = tmp_path / "c.bhsc"
    save_tensor(vhs1_m3, path)
    with pytest.raises(CacheError, match="magic"):
        load_snapshot(path)


def test_tensor_header_byte_layout(tmp_path):
    import struct

    kernel = KernelSpec.ipl(10.0, 2.5)
    tensor = assemble_tensor(kernel, 2)
    path = tmp_path / "layout.bhsc"
    save_tensor(tensor, path)
    blob = path.read_bytes()
    assert blob[0:4] == b"BHSC"
    assert struct.unpack_from("<I", blob, 4)[0] == 1          # version
    assert blob[8] == 2                                        # kernel id: ipl
    params = struct.unpack_from("<3d", blob, 9)
    assert params == (10.0, 2.5, 0.0)
    assert struct.unpack_from("<I", blob, 33)[0] == 2          # m0
    threshold = struct.unpack_from("<d", blob, 37)[0]
    assert threshold == tensor.threshold
    count = struct.unpack_from("<Q", blob, 45)[0]
    assert count == len(tensor)
    # records: 9 packed component bytes then the little-endian value
    rec0 = blob[53:53 + 17]
    comps = tuple(rec0[:9])
    lay = tensor.layout
    assert comps[:3] == lay.unrank(int(tensor.alpha_idx[0]))
    assert comps[3:6] == lay.unrank(int(tensor.beta_idx[0]))
    assert comps[6:9] == lay.unrank(int(tensor.gamma_idx[0]))
    assert struct.unpack("<d", rec0[9:])[0] == tensor.values[0]
    assert len(blob) == 53 + 17 * count + 4                    # trailing crc
