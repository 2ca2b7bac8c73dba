"""Molecular interaction models: hard sphere, variable hard sphere, and
inverse power law, with the deflection-angle machinery and viscosity laws.

The inverse-power-law deflection angle is an improper integral with an
inverse-square-root endpoint singularity; substituting W = W1 sin(t)
makes the integrand bounded and analytic, after which fixed-order
Gauss-Legendre quadrature converges to ~1e-13.  The angle is tabulated
once per exponent on a graded grid and interpolated with a monotone
spline for reuse inside coefficient quadratures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq
from scipy.special import gamma as gamma_fn

BOLTZMANN_CONSTANT = 1.380658e-23


@dataclass(frozen=True)
class KernelSpec:
    """Collision kernel selector.

    variant 'hs' uses params (d,); 'vhs' uses (d_ref, g_ref, exponent nu
    in (0, 1]); 'ipl' uses (eta > 3, kappa potential strength).
    """

    variant: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.variant == "hs":
            if len(self.params) != 1 or self.params[0] <= 0:
                raise ValueError("hard-sphere kernel needs a positive diameter")
        elif self.variant == "vhs":
            if len(self.params) != 3:
                raise ValueError("vhs kernel needs (d_ref, g_ref, nu)")
            if not (0.0 < self.params[2] <= 1.0):
                raise ValueError("vhs exponent must lie in (0, 1]")
        elif self.variant == "ipl":
            if len(self.params) != 2:
                raise ValueError("ipl kernel needs (eta, kappa)")
            if self.params[0] <= 3.0:
                raise ValueError("ipl exponent eta must exceed 3")
        else:
            raise ValueError(f"unsupported kernel variant {self.variant!r}")

    @staticmethod
    def hard_sphere(d: float) -> "KernelSpec":
        return KernelSpec("hs", (float(d),))

    @staticmethod
    def vhs(d_ref: float, g_ref: float, nu: float) -> "KernelSpec":
        return KernelSpec("vhs", (float(d_ref), float(g_ref), float(nu)))

    @staticmethod
    def ipl(eta: float, kappa: float = 1.0) -> "KernelSpec":
        return KernelSpec("ipl", (float(eta), float(kappa)))

    def fingerprint(self) -> tuple[int, float, float, float]:
        """(kernel id, three params padded with zeros) for cache headers."""
        kid = {"hs": 0, "vhs": 1, "ipl": 2}[self.variant]
        p = list(self.params) + [0.0, 0.0]
        return kid, float(p[0]), float(p[1]), float(p[2])


@dataclass(frozen=True)
class GasSpec:
    """Single-species gas: molecule mass, kernel, and reference data for
    the viscosity law.  ``mu_ref`` overrides the diameter-based reference
    viscosity when a benchmark pins it directly."""

    mass: float
    kernel: KernelSpec
    d_ref: float | None = None
    t_ref: float | None = None
    kb: float = BOLTZMANN_CONSTANT
    mu_ref: float | None = None

    def __post_init__(self):
        if self.mass <= 0:
            raise ValueError("molecule mass must be positive")


def argon(eta: float = 10.0) -> GasSpec:
    """Argon reference gas used by the benchmark scenarios."""
    return GasSpec(
        mass=6.63e-26,
        kernel=KernelSpec.ipl(eta),
        d_ref=4.17e-10,
        t_ref=273.15,
    )


def ipl_turning_point(w0: float, eta: float) -> float:
    """Closest-approach parameter W1 in (0, 1): the unique positive root of
    1 - W1^2 - (2/(eta-1)) (W1/w0)^(eta-1)."""
    if w0 <= 0:
        raise ValueError("impact parameter must be positive")
    c = 2.0 / (eta - 1.0)

    def residual(w):
        return 1.0 - w * w - c * (w / w0) ** (eta - 1.0)

    # steepness at the root is ~(eta+1)/W1, so drive the bracket to
    # relative machine precision rather than absolute xtol
    root = brentq(residual, 0.0, 1.0, xtol=1e-30, rtol=8.9e-16, maxiter=200)
    if abs(residual(root)) > 1e-13 * (eta + 1.0):
        raise ArithmeticError("turning-point root did not converge")
    return root


_GL64 = np.polynomial.legendre.leggauss(64)


def ipl_deflection(w0: float, eta: float) -> float:
    """Deflection angle chi(W0) in [0, pi] for an inverse-power potential.

    The integrand is regularized by W = W1 sin(t); the resulting smooth
    integral over [0, pi/2] is evaluated by 64-point Gauss-Legendre.
    """
    w1 = ipl_turning_point(w0, eta)
    c = 2.0 / (eta - 1.0)
    t, wt = _GL64
    tt = 0.25 * math.pi * (t + 1.0)
    s = np.sin(tt)
    w = w1 * s
    bracket = 1.0 - w * w - c * (w / w0) ** (eta - 1.0)
    # cos(t) / sqrt(bracket) stays bounded; guard roundoff at the endpoint
    bracket = np.maximum(bracket, 1e-300)
    integrand = w1 * np.cos(tt) / np.sqrt(bracket)
    integral = 0.25 * math.pi * float(integrand @ wt)
    chi = math.pi - 2.0 * integral
    return min(max(chi, 0.0), math.pi)


class DeflectionTable:
    """chi(W0) tabulated on a graded grid with monotone interpolation.

    Grid points concentrate near zero where chi varies fastest; direct
    quadrature values are reproduced to ~1e-10 in between nodes.
    """

    def __init__(self, eta: float, w_max: float = 40.0, n: int = 30000):
        self.eta = float(eta)
        self.w_max = float(w_max)
        u = np.linspace(0.0, 1.0, n)
        grid = self.w_max * u**2
        grid[0] = 0.5 * grid[1]
        chi = np.array([ipl_deflection(w, self.eta) for w in grid])
        self._interp = PchipInterpolator(grid, chi, extrapolate=False)
        self._w_min = grid[0]

    def __call__(self, w0):
        w0 = np.asarray(w0, dtype=float)
        inner = np.clip(w0, self._w_min, self.w_max)
        out = np.where(w0 >= self.w_max, 0.0, self._interp(inner))
        return out if out.ndim else float(out)


@lru_cache(maxsize=None)
def deflection_table(eta: float) -> DeflectionTable:
    return DeflectionTable(eta)


def kernel_eval(spec: KernelSpec, g: float, chi: float) -> float:
    """Dimensional collision kernel B(g, chi) >= 0.

    For the IPL variant the angular factor W0 |dW0/dchi| is implicit; the
    value returned here carries only the explicit speed power and the
    potential prefactor is dimensionless-unit based (kappa/m scaling is
    applied by callers that need dimensional output).
    """
    if g < 0 or not (0.0 <= chi <= math.pi):
        raise ValueError("need g >= 0 and chi in [0, pi]")
    if spec.variant == "hs":
        (d,) = spec.params
        return 0.25 * d * d * g * math.sin(chi)
    if spec.variant == "vhs":
        d_ref, g_ref, nu = spec.params
        return 0.25 * d_ref * d_ref * g_ref ** (2 * nu) * g ** (1 - 2 * nu) * math.sin(chi)
    if spec.variant == "ipl":
        eta, _ = spec.params
        exponent = (eta - 5.0) / (eta - 1.0)
        return g**exponent
    raise ValueError(f"unsupported kernel variant {spec.variant!r}")


def ipl_g_exponent(eta: float) -> float:
    """Speed exponent (eta-5)/(eta-1); zero for Maxwell molecules."""
    return (eta - 5.0) / (eta - 1.0)


def a2_eta(eta: float, rtol: float = 1e-8) -> float:
    """Momentum-transfer integral of W0 sin^2(chi) over all impact
    parameters, evaluated at two resolutions that must agree to rtol."""
    table = deflection_table(eta)

    def quad(n):
        # graded substitution W0 = w_max u^2 clusters nodes near zero
        t, wt = np.polynomial.legendre.leggauss(n)
        u = 0.5 * (t + 1.0)
        w0 = table.w_max * u * u
        jac = 2.0 * table.w_max * u * 0.5
        chi = table(w0)
        return float(((w0 * np.sin(chi) ** 2) * jac) @ wt)

    lo, hi = quad(200), quad(400)
    if abs(hi - lo) > rtol * max(abs(hi), 1.0):
        raise ArithmeticError("momentum-transfer integral did not converge")
    return hi


def viscosity_reference(gas: GasSpec) -> float:
    """Reference-temperature viscosity of the DSMC-matching power law."""
    if gas.mu_ref is not None:
        return gas.mu_ref
    if gas.d_ref is None or gas.t_ref is None:
        raise ValueError("viscosity law needs d_ref and T_ref")
    eta = _ipl_exponent(gas)
    if math.isinf(eta):
        shape = 1.0 / 3.0
    else:
        shape = (eta - 1.0) ** 2 / ((eta - 2.0) * (3.0 * eta - 5.0))
    num = (15.0 / 16.0) * shape * math.sqrt(gas.mass * gas.kb * gas.t_ref / math.pi)
    return num / gas.d_ref**2


def viscosity(gas: GasSpec, temperature: float, law: str = "dsmc") -> float:
    """Dynamic viscosity mu(T).

    law='dsmc' (default): hard-sphere-diameter-referenced power law with
    temperature exponent (eta+3)/(2(eta-1)).  law='ipl': the kinetic-theory
    closed form using the potential strength kappa and A_2(eta).
    """
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    eta = _ipl_exponent(gas)
    omega = 0.5 if math.isinf(eta) else 0.5 * (eta + 3.0) / (eta - 1.0)
    if law == "dsmc":
        if gas.t_ref is None:
            raise ValueError("viscosity law needs T_ref")
        return viscosity_reference(gas) * (temperature / gas.t_ref) ** omega
    if law == "ipl":
        if gas.kernel.variant != "ipl":
            raise ValueError("kinetic-theory law needs an ipl kernel")
        _, kappa = gas.kernel.params
        theta = gas.kb * temperature / gas.mass
        a2 = a2_eta(eta)
        return (
            5.0
            * gas.mass
            * math.sqrt(theta / math.pi)
            * (2.0 * gas.mass * theta / kappa) ** (2.0 / (eta - 1.0))
            / (8.0 * a2 * gamma_fn(4.0 - 2.0 / (eta - 1.0)))
        )
    raise ValueError(f"unknown viscosity law {law!r}")


def viscosity_batch(gas: GasSpec, temperature) -> np.ndarray:
    """DSMC-matching viscosity law, vectorized over temperatures."""
    temperature = np.asarray(temperature, dtype=float)
    eta = _ipl_exponent(gas)
    omega = 0.5 if math.isinf(eta) else 0.5 * (eta + 3.0) / (eta - 1.0)
    if gas.t_ref is None:
        raise ValueError("viscosity law needs T_ref")
    return viscosity_reference(gas) * (temperature / gas.t_ref) ** omega


def _ipl_exponent(gas: GasSpec) -> float:
    if gas.kernel.variant == "ipl":
        return gas.kernel.params[0]
    if gas.kernel.variant == "vhs":
        # nu = 2/(eta-1) inverts to the matched repulsion exponent
        return 1.0 + 2.0 / gas.kernel.params[2]
    # hard sphere: the eta -> infinity limit of the power laws
    return math.inf


def mean_free_path(gas: GasSpec, rho: float) -> float:
    """Hard-sphere mean free path at mass density rho, using d_ref."""
    if gas.d_ref is None:
        raise ValueError("mean free path needs d_ref")
    n = rho / gas.mass
    return 1.0 / (math.sqrt(2.0) * math.pi * gas.d_ref**2 * n)
