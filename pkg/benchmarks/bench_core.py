"""Benchmark of the compiled hot kernels against the pure-NumPy fallback.

Times the frame-change recursion, the sparse quadratic contraction, and
the full per-cell collision pipeline at solver-typical sizes, then prints
a comparison table.  Run from the repository root:

    python benchmarks/bench_core.py
"""

import time

import numpy as np

from hermkin._core import _kernels_py

try:
    from hermkin._core import _kernels as _compiled
except ImportError:
    _compiled = None

from hermkin.collision import CollisionModel, collision_source_single
from hermkin.frames import Frame, maxwellian_coeffs
from hermkin.indexing import layout
from hermkin.kernels import KernelSpec, argon
from hermkin.tensor import assemble_tensor


def timeit(func, *args, repeat=2000):
    best = float("inf")
    for _ in range(3):
        start = time.perf_counter()
        for _ in range(repeat):
            func(*args)
        best = min(best, (time.perf_counter() - start) / repeat)
    return best


def bench_change_frame(backend, m):
    lay = layout(m)
    rng = np.random.default_rng(0)
    values = rng.standard_normal(lay.size)
    out = np.empty_like(values)
    du = (12.0, -5.0, 3.0)
    return timeit(
        backend.change_frame_core,
        values, lay.shift_down, lay.shift_down2, du, 4000.0, m, out,
    )


def bench_contract(backend, tensor):
    rng = np.random.default_rng(1)
    row_ptr, ib, ig, vals = tensor.contraction_arrays()
    h = rng.standard_normal(tensor.layout.size)
    out = np.empty(tensor.layout.size)
    return timeit(backend.quadratic_contract, row_ptr, ib, ig, vals, h, out)


def bench_pipeline(m, tensor, gas):
    frame = Frame((0.0, 0.0, 0.0), gas.kb * 273.15 / gas.mass)
    state = maxwellian_coeffs(9.282e-6, (10.0, -40.0, 5.0),
                              1.1 * frame.theta, frame, m)
    rng = np.random.default_rng(2)
    values = state.values * (1 + 0.02 * rng.standard_normal(state.values.size))
    model = CollisionModel(tensor, gas)
    lay = layout(m)
    return timeit(collision_source_single, values, lay, frame, model,
                  repeat=500)


def main():
    gas = argon()
    tensor = assemble_tensor(KernelSpec.ipl(10.0), 5)
    rows = []
    for m in (5, 9):
        t_py = bench_change_frame(_kernels_py, m)
        t_c = bench_change_frame(_compiled, m) if _compiled else float("nan")
        rows.append((f"frame change (m={m})", t_py, t_c))
    t_py = bench_contract(_kernels_py, tensor)
    t_c = bench_contract(_compiled, tensor) if _compiled else float("nan")
    rows.append((f"contraction ({len(tensor)} entries)", t_py, t_c))

    import hermkin._core as core

    rows.append((f"collision pipeline (m=9, backend={core.BACKEND})",
                 float("nan"), bench_pipeline(9, tensor, gas)))

    print(f"{'kernel':<42}{'python [us]':>14}{'compiled [us]':>15}{'speedup':>9}")
    for name, t_py, t_c in rows:
        ratio = t_py / t_c if t_c == t_c and t_py == t_py else float("nan")
        print(
            f"{name:<42}{t_py * 1e6:>14.1f}{t_c * 1e6:>15.1f}{ratio:>9.1f}"
        )
    if _compiled is None:
        print("compiled extension unavailable; showing fallback only")


if __name__ == "__main__":
    main()
