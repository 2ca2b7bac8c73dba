"""Pure-NumPy implementations of the per-cell hot kernels.

Signature-compatible with the compiled extension in ``_kernels.pyx``;
selected automatically when the extension is unavailable.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def change_frame_core(values, shift_down, shift_down2, du, dtheta, max_degree, out):
    """Triangular frame-change recursion for a single coefficient vector.

    ``du`` is (source - target) velocity, ``dtheta`` the matching
    temperature-parameter difference.  Work is O(max_degree * N).
    """
    out[:] = values
    cur = values.copy()
    nxt = np.empty_like(values)
    for k in range(1, max_degree + 1):
        nxt[:] = 0.0
        for d in range(3):
            if du[d] != 0.0:
                idx = shift_down[d]
                g = cur[idx]
                g[idx < 0] = 0.0
                nxt += du[d] * g
            if dtheta != 0.0:
                idx2 = shift_down2[d]
                g2 = cur[idx2]
                g2[idx2 < 0] = 0.0
                nxt += 0.5 * dtheta * g2
        nxt /= k
        out += nxt
        cur, nxt = nxt, cur
    return out


def quadratic_contract(row_ptr, beta_idx, gamma_idx, values, h, out):
    """out[a] = sum over the a-th entry group of value * h[beta] * h[gamma]."""
    prod = values * h[beta_idx] * h[gamma_idx]
    n = out.shape[0]
    if prod.size == 0:
        out[:] = 0.0
        return out
    # reduceat needs start indices < len and repeats segments for empty
    # groups; clamp and mask those afterwards
    starts = np.minimum(row_ptr[:-1], prod.size - 1)
    sums = np.add.reduceat(prod, starts)
    empty = row_ptr[1:] == row_ptr[:-1]
    sums[empty] = 0.0
    out[:] = sums
    return out
