"""Coefficient vectors, the basis-change recursion, and moment extraction.

A :class:`CoeffVector` stores the Hermite expansion coefficients of one
distribution function together with the expansion :class:`Frame` (shift
velocity and temperature parameter).  Changing frames is a triangular
recursion: the new degree-d coefficients depend only on source degrees
<= d, so round trips invert exactly on the truncated space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._core import change_frame_core
from .indexing import IndexLayout, layout


@dataclass(frozen=True)
class Frame:
    """Expansion parameters: shift velocity and temperature in m^2/s^2."""

    u: tuple[float, float, float]
    theta: float

    def __post_init__(self):
        if self.theta <= 0:
            raise ValueError("frame temperature parameter must be positive")
        object.__setattr__(self, "u", tuple(float(x) for x in self.u))

    @property
    def u_array(self) -> np.ndarray:
        return np.array(self.u)

    def close_to(self, other: "Frame", rtol: float = 1e-12) -> bool:
        du = max(abs(a - b) for a, b in zip(self.u, other.u))
        scale = math.sqrt(self.theta)
        return du <= rtol * scale and abs(self.theta - other.theta) <= rtol * self.theta


class InadmissibleState(ValueError):
    """Raised when a coefficient vector has no physical density or
    temperature."""


@dataclass(frozen=True)
class MomentSet:
    """Macroscopic fields derived from coefficients of degree <= 3."""

    rho: float
    momentum: np.ndarray
    energy: float
    u: np.ndarray
    theta: float
    sigma: np.ndarray
    q: np.ndarray
    temperature: float | None = None

    @property
    def pressure(self) -> float:
        return self.rho * self.theta


class CoeffVector:
    """Dense expansion coefficients attached to a frame.

    ``values[i]`` is the coefficient of the rank-i basis function in the
    graded layout of degree ``m``; values are never mutated in place by
    the public operations.
    """

    __slots__ = ("frame", "m", "values", "layout")

    def __init__(self, frame: Frame, m: int, values: np.ndarray):
        self.frame = frame
        self.m = int(m)
        self.layout = layout(self.m)
        values = np.asarray(values, dtype=float)
        if values.shape != (self.layout.size,):
            raise ValueError(
                f"expected {self.layout.size} coefficients for degree {m}, "
                f"got shape {values.shape}"
            )
        self.values = values

    def copy(self) -> "CoeffVector":
        return CoeffVector(self.frame, self.m, self.values.copy())

    def __getitem__(self, alpha) -> float:
        return float(self.values[self.layout.rank(alpha)])


def change_frame(c: CoeffVector, target: Frame) -> CoeffVector:
    """Project the expansion onto a new frame without changing the
    represented distribution (exactly, on the truncated space)."""
    if c.frame.close_to(target, rtol=0.0):
        return CoeffVector(target, c.m, c.values.copy())
    out = np.empty_like(c.values)
    du = tuple(a - b for a, b in zip(c.frame.u, target.u))
    dtheta = c.frame.theta - target.theta
    change_frame_core(
        np.ascontiguousarray(c.values),
        c.layout.shift_down,
        c.layout.shift_down2,
        du,
        dtheta,
        c.m,
        out,
    )
    return CoeffVector(target, c.m, out)


def change_frame_batch(values: np.ndarray, lay: IndexLayout, du, dtheta: float) -> np.ndarray:
    """Vectorized frame change for an array of coefficient vectors.

    ``values`` has shape (..., N); ``du``/``dtheta`` either scalars per
    the whole batch or arrays broadcasting over the leading axes.
    """
    flat = values.reshape(-1, values.shape[-1])
    nbatch = flat.shape[0]
    du = np.broadcast_to(np.asarray(du, dtype=float), (nbatch, 3))
    dtheta = np.broadcast_to(np.asarray(dtheta, dtype=float), (nbatch,))
    out = flat.copy()
    cur = flat.copy()
    for k in range(1, lay.max_degree + 1):
        nxt = np.zeros_like(cur)
        for d in range(3):
            idx = lay.shift_down[d]
            valid = idx >= 0
            nxt[:, valid] += du[:, d : d + 1] * cur[:, idx[valid]]
            idx2 = lay.shift_down2[d]
            valid2 = idx2 >= 0
            nxt[:, valid2] += (0.5 * dtheta)[:, None] * cur[:, idx2[valid2]]
        nxt /= k
        out += nxt
        cur = nxt
    return out.reshape(values.shape)


def maxwellian_coeffs(rho: float, u, theta: float, frame: Frame, m: int) -> CoeffVector:
    """Expansion of the equilibrium rho * M_{u, theta} in ``frame``.

    In its own frame the series is (rho, 0, 0, ...); the general case is
    that vector projected by the frame-change recursion.
    """
    if rho <= 0 or theta <= 0:
        raise InadmissibleState("Maxwellian needs rho > 0 and theta > 0")
    vals = np.zeros(layout(m).size)
    vals[0] = rho
    self_frame = Frame(tuple(float(x) for x in u), float(theta))
    return change_frame(CoeffVector(self_frame, m, vals), frame)


def moments(c: CoeffVector, gas=None) -> MomentSet:
    """Exact macroscopic moments from coefficients of degree <= 3.

    Needs m >= 2 for temperature and m >= 3 for the heat flux; raises
    InadmissibleState for non-positive density or temperature.
    """
    lay = c.layout
    u_bar = c.frame.u_array
    theta_bar = c.frame.theta
    rho = float(c.values[0])
    if rho <= 0 or not np.isfinite(rho):
        raise InadmissibleState(f"non-physical density {rho}")
    e = np.eye(3, dtype=int)
    f1 = np.array([c[tuple(e[d])] for d in range(3)]) if c.m >= 1 else np.zeros(3)
    momentum = rho * u_bar + f1
    f2_diag = np.array([c[tuple(2 * e[d])] for d in range(3)]) if c.m >= 2 else np.zeros(3)
    energy = (
        float(momentum @ u_bar)
        - 0.5 * rho * float(u_bar @ u_bar)
        + 1.5 * rho * theta_bar
        + float(f2_diag.sum())
    )
    u = momentum / rho
    theta = (2.0 * energy - rho * float(u @ u)) / (3.0 * rho)
    if theta <= 0 or not np.isfinite(theta):
        raise InadmissibleState(f"non-physical temperature parameter {theta}")

    du = u_bar - u
    sigma = np.zeros((3, 3))
    if c.m >= 2:
        for i in range(3):
            for j in range(3):
                fij = c[tuple(e[i] + e[j])]
                sigma[i, j] = (
                    (2.0 if i == j else 1.0) * fij
                    + (rho * (theta_bar - theta) if i == j else 0.0)
                    - rho * du[i] * du[j]
                )
    q = np.zeros(3)
    if c.m >= 3:
        for i in range(3):
            total = 2.0 * c[tuple(3 * e[i])]
            total += du[i] * c[tuple(2 * e[i])]
            total += float(du @ du) * f1[i]
            for k in range(3):
                total += c[tuple(2 * e[k] + e[i])]
                total += du[k] * c[tuple(e[k] + e[i])]
                total += du[i] * c[tuple(2 * e[k])]
            q[i] = total
    temperature = None
    if gas is not None:
        temperature = gas.mass / gas.kb * theta
    return MomentSet(rho, momentum, energy, u, theta, sigma, q, temperature)


def nondimensionalize(c: CoeffVector) -> tuple[np.ndarray, float]:
    """Scale out density and the frame temperature: h[alpha] =
    f[alpha] / (rho * theta_bar^(|alpha|/2)).  Returns (h, rho)."""
    rho = float(c.values[0])
    if rho <= 0:
        raise InadmissibleState(f"non-physical density {rho}")
    scale = c.frame.theta ** (-0.5 * c.layout.degrees)
    return c.values * scale / rho, rho


def redimensionalize(h: np.ndarray, rho: float, frame: Frame, m: int) -> CoeffVector:
    """Inverse of :func:`nondimensionalize` (exact round trip)."""
    lay = layout(m)
    scale = frame.theta ** (0.5 * lay.degrees)
    return CoeffVector(frame, m, rho * np.asarray(h, dtype=float) * scale)
