"""Orthogonal-polynomial toolkit: Hermite, Laguerre, Legendre, and the
harmonic (Ikenberry) polynomials, plus the weighted Hermite basis functions.

All evaluations use stable three-term recurrences rather than expanded
coefficients; this stays accurate for degrees well beyond what the solver
needs (~80).  Hermite polynomials follow the probabilists' convention
(weight exp(-x^2/2)), fixed by the derivative rule d/dx He_n = n He_{n-1}.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .indexing import MultiIndex


def hermite_eval(n: int, x):
    """Degree-n probabilists' Hermite polynomial He_n(x).

    Recurrence He_{n+1} = x He_n - n He_{n-1}; accepts scalars or arrays.
    """
    if n < 0:
        raise ValueError("degree must be >= 0")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = x.copy()
    for k in range(1, n):
        prev, cur = cur, x * cur - k * prev
    return cur if cur.ndim else float(cur)


def hermite_eval_all(n: int, x) -> np.ndarray:
    """He_0..He_n stacked along the leading axis."""
    x = np.asarray(x, dtype=float)
    out = np.empty((n + 1,) + x.shape, dtype=float)
    out[0] = 1.0
    if n >= 1:
        out[1] = x
    for k in range(1, n):
        out[k + 1] = x * out[k] - k * out[k - 1]
    return out


def hermite_roots(n: int) -> np.ndarray:
    """Roots of He_n, strictly increasing and symmetric about zero.

    Computed as eigenvalues of the symmetric tridiagonal recurrence
    matrix (off-diagonal sqrt(k)); symmetry is enforced exactly.
    """
    if n < 1:
        raise ValueError("degree must be >= 1")
    if n == 1:
        return np.zeros(1)
    diag = np.zeros(n)
    off = np.sqrt(np.arange(1.0, n))
    roots = np.linalg.eigvalsh(np.diag(diag) + np.diag(off, 1) + np.diag(off, -1))
    roots.sort()
    roots = 0.5 * (roots - roots[::-1])
    # two Newton polishes, then require the Newton correction (the value
    # scaled by the local derivative) to sit at roundoff level
    for _ in range(2):
        roots -= hermite_eval(n, roots) / (n * hermite_eval(n - 1, roots))
    correction = np.abs(hermite_eval(n, roots) / (n * hermite_eval(n - 1, roots)))
    if correction.max() > 1e-10 * (1.0 + np.abs(roots).max()):
        raise ArithmeticError(f"Hermite root refinement failed at degree {n}")
    roots = 0.5 * (roots - roots[::-1])
    return roots


def max_hermite_root(n: int) -> float:
    return float(hermite_roots(n)[-1])


def laguerre_eval(m: int, a: float, x):
    """Generalized Laguerre polynomial L_m^(a)(x), standard normalization."""
    if m < 0:
        raise ValueError("degree must be >= 0")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if m == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + a - x
    for k in range(1, m):
        prev, cur = cur, ((2 * k + 1 + a - x) * cur - (k + a) * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def legendre_eval(k: int, x):
    """Legendre polynomial P_k(x) by the Bonnet recurrence."""
    if k < 0:
        raise ValueError("degree must be >= 0")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if k == 0:
        return prev if prev.ndim else float(prev)
    cur = x.copy()
    for j in range(1, k):
        prev, cur = cur, ((2 * j + 1) * x * cur - j * prev) / (j + 1)
    return cur if cur.ndim else float(cur)


@lru_cache(maxsize=None)
def legendre_coefficients(k: int) -> tuple[Fraction, ...]:
    """Exact monomial coefficients (c_0..c_k) of P_k."""
    coeffs = [Fraction(0)] * (k + 1)
    for i in range(k // 2 + 1):
        c = (
            Fraction((-1) ** i)
            * math.comb(k, i)
            * math.comb(2 * k - 2 * i, k)
            / Fraction(2**k)
        )
        coeffs[k - 2 * i] = c
    return tuple(coeffs)


def hermite_product_eval(alpha: MultiIndex, v: np.ndarray) -> np.ndarray:
    """Tensor-product Hermite polynomial He_a1(v1) He_a2(v2) He_a3(v3).

    ``v`` has shape (..., 3); broadcasts over leading axes.
    """
    v = np.asarray(v, dtype=float)
    out = np.ones(v.shape[:-1])
    for d in range(3):
        out = out * hermite_eval(alpha[d], v[..., d])
    return out


def maxwellian(mass: float, u, theta: float, v) -> np.ndarray:
    """Equilibrium weight exp(-|v-u|^2 / 2 theta) / (mass (2 pi theta)^{3/2})."""
    v = np.asarray(v, dtype=float)
    u = np.asarray(u, dtype=float)
    r2 = ((v - u) ** 2).sum(axis=-1)
    norm = mass * (2.0 * math.pi * theta) ** 1.5
    return np.exp(-0.5 * r2 / theta) / norm


def basis_eval(alpha: MultiIndex, u_bar, theta_bar: float, mass: float, v):
    """Weighted Hermite basis function evaluated at velocity points.

    theta_bar^{-|alpha|/2} He_alpha((v - u_bar)/sqrt(theta_bar)) times the
    Maxwellian weight for (u_bar, theta_bar); carries the 1/mass factor.
    """
    v = np.asarray(v, dtype=float)
    u_bar = np.asarray(u_bar, dtype=float)
    xi = (v - u_bar) / math.sqrt(theta_bar)
    deg = alpha[0] + alpha[1] + alpha[2]
    poly = hermite_product_eval(alpha, xi)
    return theta_bar ** (-0.5 * deg) * poly * maxwellian(mass, u_bar, theta_bar, v)


@lru_cache(maxsize=None)
def _ikenberry_terms(kappa: MultiIndex) -> tuple[tuple[MultiIndex, int, float], ...]:
    """Monomial expansion of the harmonic polynomial Y^kappa.

    Y^kappa is the harmonic projection of the monomial v^kappa, normalized
    so the leading v^kappa coefficient is one.  Expanded exactly as a sum
    of terms coeff * v^a * |v|^(2p) via the Legendre generating identity.
    """
    k = sum(kappa)
    if k == 0:
        return (((0, 0, 0), 0, 1.0),)
    coeffs = legendre_coefficients(k)
    pref = Fraction(
        math.factorial(kappa[0]) * math.factorial(kappa[1]) * math.factorial(kappa[2]),
        _double_factorial(2 * k - 1),
    )
    terms: dict[tuple[MultiIndex, int], Fraction] = {}
    for j in range(k % 2, k + 1, 2):
        cj = coeffs[j]
        if cj == 0:
            continue
        p = (k - j) // 2
        # a + 2c = kappa with |a| = j; the |w|^{2p} factor spreads over c
        for c1 in range(kappa[0] // 2 + 1):
            for c2 in range(kappa[1] // 2 + 1):
                for c3 in range(kappa[2] // 2 + 1):
                    a = (kappa[0] - 2 * c1, kappa[1] - 2 * c2, kappa[2] - 2 * c3)
                    if a[0] + a[1] + a[2] != j:
                        continue
                    if c1 + c2 + c3 != p:
                        continue
                    w = (
                        cj
                        * Fraction(math.factorial(j))
                        / (
                            math.factorial(a[0])
                            * math.factorial(a[1])
                            * math.factorial(a[2])
                        )
                        * Fraction(math.factorial(p))
                        / (
                            math.factorial(c1)
                            * math.factorial(c2)
                            * math.factorial(c3)
                        )
                    )
                    key = (a, p)
                    terms[key] = terms.get(key, Fraction(0)) + pref * w
    return tuple(
        (a, p, float(c)) for (a, p), c in sorted(terms.items()) if c != 0
    )


def _double_factorial(n: int) -> int:
    if n <= 0:
        return 1
    return math.prod(range(n, 0, -2))


def ikenberry_eval(kappa: MultiIndex, v) -> np.ndarray:
    """Homogeneous harmonic polynomial Y^kappa at points of shape (..., 3)."""
    v = np.asarray(v, dtype=float)
    r2 = (v**2).sum(axis=-1)
    out = np.zeros(v.shape[:-1])
    for a, p, c in _ikenberry_terms(tuple(int(x) for x in kappa)):
        term = np.full(v.shape[:-1], c)
        for d in range(3):
            if a[d]:
                term = term * v[..., d] ** a[d]
        if p:
            term = term * r2**p
        out = out + term
    return out if out.ndim else float(out)


def gauss_hermite_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for the weight exp(-x^2/2) on the real line."""
    x, w = np.polynomial.hermite_e.hermegauss(n)
    return x, w
