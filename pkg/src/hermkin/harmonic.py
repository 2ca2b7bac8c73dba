"""Coefficient algebra shared by the collision-tensor assembly.

Three exact building blocks:

* ``pair_coeff`` re-expands a product of two Hermite polynomials in the
  center-of-mass / relative variables (per-axis, degree conserving).
* ``hermite_to_harmonic`` splits a tensor-product Hermite polynomial into
  radial Laguerre factors times harmonic polynomials.
* ``sphere_integral`` integrates a product of two harmonic polynomials
  over the unit sphere (exact rational multiple of pi).

Everything is computed with exact integer/rational arithmetic and cached;
floats appear only at the boundary.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .indexing import MultiIndex
from .polynomials import _double_factorial, legendre_coefficients


@lru_cache(maxsize=None)
def _pair_coeff_exact(k: int, l: int, kp: int, lp: int) -> tuple[Fraction, int]:
    """Exact value as (rational, s) meaning rational * 2**(s/2)."""
    if kp + lp != k + l or min(k, l, kp, lp) < 0:
        return Fraction(0), 0
    total = Fraction(0)
    for i in range(max(0, kp - l), min(k, kp) + 1):
        j = kp - i
        total += (
            Fraction(math.comb(k, i) * math.comb(l, j)) * (-1) ** ((l - j) % 2)
        )
    # prefactor 2**((kp - lp)/2 - kp)
    s = kp - lp - 2 * kp
    return total, s


def pair_coeff(k: int, l: int, kp: int, lp: int) -> float:
    """Re-expansion coefficient linking He_k(v) He_l(w) to the
    center-of-mass pair He_kp(sqrt(2) h) He_lp(g / sqrt(2)).

    Zero unless kp + lp == k + l (per-axis degree conservation).
    """
    frac, s = _pair_coeff_exact(k, l, kp, lp)
    return float(frac) * 2.0 ** (0.5 * s)


class PairTable:
    """Dense per-axis table a[k, l, kp] (lp implied by degree conservation)."""

    def __init__(self, max_pair_degree: int):
        self.max_pair_degree = max_pair_degree
        n = max_pair_degree + 1
        self._table = {}
        for k in range(n):
            for l in range(n - k):
                for kp in range(k + l + 1):
                    v = pair_coeff(k, l, kp, k + l - kp)
                    if v != 0.0:
                        self._table[(k, l, kp)] = v

    def get(self, k: int, l: int, kp: int) -> float:
        return self._table.get((k, l, kp), 0.0)


@lru_cache(maxsize=None)
def hermite_to_harmonic(
    kappa: MultiIndex,
) -> tuple[tuple[MultiIndex, float], ...]:
    """Split He^kappa into radial Laguerre times harmonic components.

    Returns tuples (m, coeff) such that

        He^kappa(v) = sum_m coeff * L_{|m|}^{(k - 2|m| + 1/2)}(|v|^2 / 2)
                               * Y^{kappa - 2m}(v),

    with k = |kappa|.  The list is exact and finite (m <= kappa/2
    componentwise).
    """
    k1, k2, k3 = (int(x) for x in kappa)
    k = k1 + k2 + k3
    out = []
    for m1 in range(k1 // 2 + 1):
        for m2 in range(k2 // 2 + 1):
            for m3 in range(k3 // 2 + 1):
                m = m1 + m2 + m3
                c = Fraction(
                    (-1) ** (m % 2)
                    * math.factorial(m)
                    * _double_factorial(2 * k - 4 * m + 1),
                    _double_factorial(2 * (k - m) + 1),
                )
                for ki, mi in ((k1, m1), (k2, m2), (k3, m3)):
                    c *= Fraction(
                        math.factorial(ki),
                        math.factorial(mi) * math.factorial(ki - 2 * mi),
                    )
                out.append(((m1, m2, m3), float(c)))
    return tuple(out)


@lru_cache(maxsize=None)
def _sphere_integral_exact(kappa: MultiIndex, lam: MultiIndex) -> Fraction:
    """Integral of Y^kappa Y^lam over the unit sphere, divided by pi."""
    k = sum(kappa)
    l = sum(lam)
    if k != l:
        return Fraction(0)
    for a, b in zip(kappa, lam):
        if (a - b) % 2:
            return Fraction(0)
    coeffs = legendre_coefficients(k)
    total = Fraction(0)
    # coefficient of v^kappa w^lam in (|v||w|)^k P_k(v.w / |v||w|)
    for j in range(k % 2, k + 1, 2):
        cj = coeffs[j]
        if cj == 0:
            continue
        p = (k - j) // 2
        for a1 in range(min(kappa[0], lam[0]) + 1):
            if (kappa[0] - a1) % 2 or (lam[0] - a1) % 2:
                continue
            for a2 in range(min(kappa[1], lam[1]) + 1):
                if (kappa[1] - a2) % 2 or (lam[1] - a2) % 2:
                    continue
                a3 = j - a1 - a2
                if a3 < 0 or a3 > min(kappa[2], lam[2]):
                    continue
                if (kappa[2] - a3) % 2 or (lam[2] - a3) % 2:
                    continue
                b = tuple((kappa[d] - (a1, a2, a3)[d]) // 2 for d in range(3))
                c = tuple((lam[d] - (a1, a2, a3)[d]) // 2 for d in range(3))
                if sum(b) != p or sum(c) != p:
                    continue
                w = (
                    cj
                    * Fraction(
                        math.factorial(j),
                        math.factorial(a1) * math.factorial(a2) * math.factorial(a3),
                    )
                    * Fraction(
                        math.factorial(p),
                        math.prod(math.factorial(x) for x in b),
                    )
                    * Fraction(
                        math.factorial(p),
                        math.prod(math.factorial(x) for x in c),
                    )
                )
                total += w
    kap_fact = math.prod(math.factorial(x) for x in kappa)
    lam_fact = math.prod(math.factorial(x) for x in lam)
    dd = _double_factorial(2 * k - 1)
    return Fraction(4, 2 * k + 1) * Fraction(kap_fact * lam_fact, dd * dd) * total


def sphere_integral(kappa: MultiIndex, lam: MultiIndex) -> float:
    """Exact integral of Y^kappa Y^lam over the unit sphere.

    Zero whenever the degrees differ or any component pair has mixed
    parity; otherwise a rational multiple of pi.
    """
    kappa = tuple(int(x) for x in kappa)
    lam = tuple(int(x) for x in lam)
    return float(_sphere_integral_exact(kappa, lam)) * math.pi
