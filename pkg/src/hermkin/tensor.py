"""Assembly of the quadratic collision tensor in the Hermite basis.

The Galerkin coefficients A[alpha; beta, gamma] of the dimensionless
collision operator are built in three stages:

1. per-axis re-expansion of Hermite products in center-of-mass /
   relative variables (``harmonic.pair_coeff``),
2. radial-angular integrals over the relative velocity, reduced to
   one-dimensional generalized Gauss-Laguerre quadratures against exact
   sphere integrals of harmonic polynomials (``gamma_coeff``),
3. a contraction over all compatible index splits (``assemble_tensor``).

Entries are exact zeros unless every axis satisfies the parity rule
alpha_s + beta_s + gamma_s even; the assembly enumerates compatible
splits directly so those zeros are never touched.  Iteration order is
fixed (graded-lexicographic), making assembly bit-deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_genlaguerre

from .harmonic import PairTable, hermite_to_harmonic, sphere_integral
from .indexing import MultiIndex, layout
from .kernels import KernelSpec, ipl_deflection, ipl_g_exponent
from .polynomials import laguerre_eval, legendre_eval

_ASSEMBLY_CONSTANT = 1.0 / (8.0 * math.pi**1.5)


class RadialTable:
    """Cached radial collision integrals for one dimensionless kernel.

    ``value(r, m, n)`` returns the weighted integral over relative speed
    of the two Laguerre factors of radial orders m, n attached to angular
    degree r, including the angular kernel moment (for hard-sphere and
    variable-hard-sphere kernels that moment is -1/2 independent of r;
    for inverse-power-law kernels it is an impact-parameter integral of
    P_r(cos chi(W0)) - 1).
    """

    def __init__(self, kernel: KernelSpec):
        self.kernel = kernel
        self._cache: dict[tuple[int, int, int], float] = {}
        self._angular_cache: dict[int, float] = {}
        if kernel.variant == "ipl":
            eta = kernel.params[0]
            self._g_power = ipl_g_exponent(eta)
            self._w0_nodes, self._w0_weights, self._cos_chi = _ipl_angle_grid(eta)
        elif kernel.variant == "vhs":
            self._g_power = 1.0 - 2.0 * kernel.params[2]
        else:  # hard sphere
            self._g_power = 1.0

    def angular_moment(self, r: int) -> float:
        """Integral of the angular kernel factor against P_r(cos chi) - 1."""
        if r == 0:
            return 0.0
        if self.kernel.variant in ("hs", "vhs"):
            return -0.5
        got = self._angular_cache.get(r)
        if got is None:
            p = legendre_eval(r, self._cos_chi) - 1.0
            got = float((self._w0_nodes * p) @ self._w0_weights)
            self._angular_cache[r] = got
        return got

    def value(self, r: int, m: int, n: int) -> float:
        if r == 0:
            return 0.0
        key = (r, m, n)
        got = self._cache.get(key)
        if got is None:
            got = self._compute(r, m, n)
            self._cache[key] = got
        return got

    def _compute(self, r: int, m: int, n: int) -> float:
        q = self._g_power
        # t = g^2/4 exposes the exp(-t) weight; the speed power goes into
        # the Gauss-Laguerre order so the remaining integrand is polynomial
        alpha = r + 0.5 * (q + 1.0)
        prefactor = 2.0 ** (r + 2 + q) * self.angular_moment(r)
        lag_order = r + 0.5

        def quad(nq: int) -> float:
            t, w = roots_genlaguerre(nq, alpha)
            vals = laguerre_eval(m, lag_order, t) * laguerre_eval(n, lag_order, t)
            return float(vals @ w)

        n_exact = (m + n) // 2 + 2
        lo, hi = quad(n_exact), quad(2 * n_exact)
        if abs(hi - lo) > 1e-10 * max(1.0, abs(hi)):
            raise ArithmeticError("radial collision integral did not converge")
        return prefactor * hi


@lru_cache(maxsize=None)
def _ipl_angle_grid(eta: float, n: int = 800, w_max: float = 40.0):
    """Shared impact-parameter quadrature grid with cos(chi) evaluated once."""
    u, wu = np.polynomial.legendre.leggauss(n)
    u = 0.5 * (u + 1.0)
    wu = 0.5 * wu
    w0 = w_max * u**3
    jac = 3.0 * w_max * u**2
    w0[0] = max(w0[0], 1e-10)
    chi = np.array([ipl_deflection(float(x), eta) for x in w0])
    return w0, wu * jac, np.cos(chi)


@lru_cache(maxsize=None)
def _gamma_terms(kappa: MultiIndex, lam: MultiIndex):
    """Kernel-independent part of gamma_coeff: (r, m, n, weight) tuples."""
    k = sum(kappa)
    l = sum(lam)
    if (k - l) % 2:
        return ()
    out = []
    for m_idx, cm in hermite_to_harmonic(kappa):
        mbar = sum(m_idx)
        r = k - 2 * mbar
        if r < 1:
            continue
        for n_idx, cn in hermite_to_harmonic(lam):
            nbar = sum(n_idx)
            if l - 2 * nbar != r:
                continue
            si = sphere_integral(
                tuple(kappa[d] - 2 * m_idx[d] for d in range(3)),
                tuple(lam[d] - 2 * n_idx[d] for d in range(3)),
            )
            if si == 0.0:
                continue
            out.append((r, mbar, nbar, 2.0 * math.pi * cm * cn * si))
    return tuple(out)


def gamma_coeff(radial: RadialTable, kappa: MultiIndex, lam: MultiIndex) -> float:
    """Relative-velocity collision integral for a pair of Hermite indices.

    Splits both Hermite polynomials into radial Laguerre times harmonic
    factors; the sphere integral collapses the angular product and the
    radial table supplies the speed integral.  Exact zero when the two
    degrees have different parity or no harmonic component survives.
    """
    kappa = tuple(int(x) for x in kappa)
    lam = tuple(int(x) for x in lam)
    total = 0.0
    for r, mbar, nbar, w in _gamma_terms(kappa, lam):
        total += w * radial.value(r, mbar, nbar)
    return total


@dataclass
class LinearizedMatrix:
    """Dense linearization of the quadratic operator around equilibrium."""

    matrix: np.ndarray
    nu: float


class CollisionTensor:
    """Sparse Galerkin table of the quadratic collision operator.

    Entries are stored flat as (alpha_rank, beta_rank, gamma_rank, value)
    sorted lexicographically by rank; ranks refer to the graded layout of
    degree ``m0``.
    """

    def __init__(
        self,
        kernel: KernelSpec,
        m0: int,
        threshold: float,
        alpha_idx: np.ndarray,
        beta_idx: np.ndarray,
        gamma_idx: np.ndarray,
        values: np.ndarray,
    ):
        self.kernel = kernel
        self.m0 = int(m0)
        self.threshold = float(threshold)
        self.alpha_idx = np.ascontiguousarray(alpha_idx, dtype=np.int64)
        self.beta_idx = np.ascontiguousarray(beta_idx, dtype=np.int64)
        self.gamma_idx = np.ascontiguousarray(gamma_idx, dtype=np.int64)
        self.values = np.ascontiguousarray(values, dtype=np.float64)
        self.layout = layout(self.m0)
        self._linearized: LinearizedMatrix | None = None
        self._c_constant: float | None = None
        self._row_cache = None

    def __len__(self) -> int:
        return self.values.size

    def max_abs(self) -> float:
        return float(np.abs(self.values).max()) if len(self) else 0.0

    def dense(self) -> np.ndarray:
        n = self.layout.size
        out = np.zeros((n, n, n))
        out[self.alpha_idx, self.beta_idx, self.gamma_idx] = self.values
        return out

    def entry(self, alpha: MultiIndex, beta: MultiIndex, gamma: MultiIndex) -> float:
        ia = self.layout.rank(alpha)
        ib = self.layout.rank(beta)
        ig = self.layout.rank(gamma)
        mask = (self.alpha_idx == ia) & (self.beta_idx == ib) & (self.gamma_idx == ig)
        hits = self.values[mask]
        return float(hits[0]) if hits.size else 0.0

    def symmetrized_entry(self, alpha, beta, gamma) -> float:
        return self.entry(alpha, beta, gamma) + self.entry(alpha, gamma, beta)

    @property
    def linearized(self) -> LinearizedMatrix:
        if self._linearized is None:
            self._linearized = linearized_matrix(self)
        return self._linearized

    @property
    def nu(self) -> float:
        return self.linearized.nu

    @property
    def c_constant(self) -> float:
        """Normalization pinning the collision frequency to theta rho / mu."""
        if self._c_constant is None:
            s = self.symmetrized_entry((1, 1, 0), (0, 0, 0), (1, 1, 0))
            if s >= 0.0:
                raise ArithmeticError("stress mode is not damped; tensor invalid")
            self._c_constant = -1.0 / s
        return self._c_constant

    def contraction_arrays(self):
        """(row_ptr, beta_idx, gamma_idx, values) grouped by alpha rank."""
        if self._row_cache is None:
            n = self.layout.size
            counts = np.bincount(self.alpha_idx, minlength=n)
            row_ptr = np.zeros(n + 1, dtype=np.int64)
            np.cumsum(counts, out=row_ptr[1:])
            self._row_cache = (row_ptr, self.beta_idx, self.gamma_idx, self.values)
        return self._row_cache


def conservation_defect(tensor: CollisionTensor) -> float:
    """Largest violation of the mass/momentum/energy identities, scaled by
    the largest entry magnitude.

    Checked on the beta-gamma symmetrization: the density row and the
    three momentum rows must vanish pairwise, and the trace of the three
    second-degree axis rows must vanish.
    """
    lay = tensor.layout
    scale = tensor.max_abs()
    if scale == 0.0:
        return 0.0
    n = lay.size
    worst = 0.0
    sym_rows = {}
    for alpha in [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1),
                  (2, 0, 0), (0, 2, 0), (0, 0, 2)]:
        ia = lay.rank(alpha)
        mask = tensor.alpha_idx == ia
        row = np.zeros((n, n))
        np.add.at(row, (tensor.beta_idx[mask], tensor.gamma_idx[mask]),
                  tensor.values[mask])
        sym_rows[alpha] = row + row.T
    for alpha in [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]:
        worst = max(worst, float(np.abs(sym_rows[alpha]).max()))
    energy = sym_rows[(2, 0, 0)] + sym_rows[(0, 2, 0)] + sym_rows[(0, 0, 2)]
    worst = max(worst, float(np.abs(energy).max()))
    return worst / scale


def equilibrium_defect(tensor: CollisionTensor) -> float:
    """max_alpha |A[alpha; 0, 0]| / max |A| (vanishes for a Maxwellian)."""
    scale = tensor.max_abs()
    if scale == 0.0:
        return 0.0
    mask = (tensor.beta_idx == 0) & (tensor.gamma_idx == 0)
    if not mask.any():
        return 0.0
    return float(np.abs(tensor.values[mask]).max()) / scale


def assemble_tensor(
    kernel: KernelSpec,
    m0: int,
    threshold: float | None = None,
    workers: int = 1,
    progress=None,
) -> CollisionTensor:
    """Build the collision tensor for all index triples of degree <= m0.

    ``threshold`` defaults to 1e-14 times the largest assembled entry;
    pass 0.0 to keep every assembled value.  Rows (fixed alpha) are
    independent, so ``workers`` > 1 distributes them over processes; the
    merge happens in rank order and the result is bit-identical for any
    worker count.
    """
    if m0 < 2:
        raise ValueError("tensor truncation needs m0 >= 2")
    lay = layout(m0)
    ctx = _AssemblyContext(kernel, m0)
    if workers > 1:
        import multiprocessing as mp

        with mp.get_context("spawn").Pool(
            workers, initializer=_worker_init, initargs=(kernel, m0)
        ) as pool:
            rows = pool.map(_worker_row, range(lay.size), chunksize=4)
    else:
        rows = []
        for ia in range(lay.size):
            rows.append(_assemble_row(ctx, ia))
            if progress is not None:
                progress(ia + 1, lay.size)

    ia_list, ib_list, ig_list, val_list = [], [], [], []
    for ia, (ib, ig, vals) in enumerate(rows):
        ia_list.append(np.full(ib.size, ia, dtype=np.int64))
        ib_list.append(ib)
        ig_list.append(ig)
        val_list.append(vals)
    ia_all = np.concatenate(ia_list) if ia_list else np.zeros(0, dtype=np.int64)
    ib_all = np.concatenate(ib_list) if ib_list else np.zeros(0, dtype=np.int64)
    ig_all = np.concatenate(ig_list) if ig_list else np.zeros(0, dtype=np.int64)
    val_all = np.concatenate(val_list) if val_list else np.zeros(0)

    max_abs = float(np.abs(val_all).max()) if val_all.size else 0.0
    if threshold is None:
        threshold = 1e-14 * max_abs
    if threshold > 0.0:
        keep = np.abs(val_all) >= threshold
        ia_all, ib_all, ig_all, val_all = (
            ia_all[keep], ib_all[keep], ig_all[keep], val_all[keep],
        )
    return CollisionTensor(kernel, m0, threshold, ia_all, ib_all, ig_all, val_all)


class _AssemblyContext:
    """Shared caches for one assembly run: pair table, radial integrals,
    and the per-split beta/gamma scatter blocks."""

    def __init__(self, kernel: KernelSpec, m0: int):
        self.kernel = kernel
        self.m0 = m0
        self.lay = layout(m0)
        self.pair = PairTable(2 * m0)
        self.radial = RadialTable(kernel)
        self._blocks: dict = {}

    def pair_block(self, k_idx: MultiIndex, j_idx: MultiIndex):
        """(beta ranks, gamma ranks, weights) for beta + gamma = K + J."""
        key = (k_idx, j_idx)
        got = self._blocks.get(key)
        if got is not None:
            return got
        s_idx = tuple(k_idx[d] + j_idx[d] for d in range(3))
        axis_w = []
        for d in range(3):
            st, k = s_idx[d], k_idx[d]
            axis_w.append(
                np.array([self.pair.get(b, st - b, k) for b in range(st + 1)])
            )
        b1, b2, b3 = np.meshgrid(
            np.arange(s_idx[0] + 1),
            np.arange(s_idx[1] + 1),
            np.arange(s_idx[2] + 1),
            indexing="ij",
        )
        bdeg = b1 + b2 + b3
        sdeg = sum(s_idx)
        valid = (bdeg <= self.m0) & (sdeg - bdeg <= self.m0)
        w1 = (axis_w[0][b1] * axis_w[1][b2] * axis_w[2][b3])[valid]
        nz = w1 != 0.0
        b1v, b2v, b3v = b1[valid][nz], b2[valid][nz], b3[valid][nz]
        w1 = w1[nz]
        beta_ranks = np.array(
            [self.lay.rank((x, y, z)) for x, y, z in zip(b1v, b2v, b3v)],
            dtype=np.int64,
        )
        gamma_ranks = np.array(
            [
                self.lay.rank((s_idx[0] - x, s_idx[1] - y, s_idx[2] - z))
                for x, y, z in zip(b1v, b2v, b3v)
            ],
            dtype=np.int64,
        )
        got = (beta_ranks, gamma_ranks, w1)
        self._blocks[key] = got
        return got


def _assemble_row(ctx: _AssemblyContext, ia: int):
    """All entries A[alpha; beta, gamma] for one alpha rank."""
    lay = ctx.lay
    alpha = lay.unrank(ia)
    adeg = sum(alpha)
    n = lay.size
    row = np.zeros(n * n)
    pref = _ASSEMBLY_CONSTANT * 2.0 ** (-0.5 * adeg)
    for k1 in range(alpha[0] + 1):
        for k2 in range(alpha[1] + 1):
            for k3 in range(alpha[2] + 1):
                k_idx = (k1, k2, k3)
                l_idx = (alpha[0] - k1, alpha[1] - k2, alpha[2] - k3)
                kdeg = k1 + k2 + k3
                lfact = (
                    math.factorial(l_idx[0])
                    * math.factorial(l_idx[1])
                    * math.factorial(l_idx[2])
                )
                for j_idx in layout(2 * ctx.m0 - kdeg):
                    # per-axis parity must match for a nonzero integral
                    if any((j_idx[d] - l_idx[d]) % 2 for d in range(3)):
                        continue
                    g = gamma_coeff(ctx.radial, j_idx, l_idx)
                    if g == 0.0:
                        continue
                    br, gr, w1 = ctx.pair_block(k_idx, j_idx)
                    if w1.size:
                        row[br * n + gr] += (pref * g / lfact) * w1
    cols = np.nonzero(row)[0]
    return cols // n, cols % n, row[cols]


_WORKER_CTX: _AssemblyContext | None = None


def _worker_init(kernel: KernelSpec, m0: int) -> None:
    global _WORKER_CTX
    _WORKER_CTX = _AssemblyContext(kernel, m0)


def _worker_row(ia: int):
    return _assemble_row(_WORKER_CTX, ia)


def sparsify(tensor: CollisionTensor, eps: float) -> CollisionTensor:
    """Drop entries below eps in magnitude; reject eps if the conservation
    identities degrade beyond 10 eps relative to the largest entry."""
    if eps < 0:
        raise ValueError("threshold must be >= 0")
    keep = np.abs(tensor.values) >= eps
    out = CollisionTensor(
        tensor.kernel, tensor.m0, max(eps, tensor.threshold),
        tensor.alpha_idx[keep], tensor.beta_idx[keep],
        tensor.gamma_idx[keep], tensor.values[keep],
    )
    if len(out):
        defect = conservation_defect(out) * out.max_abs()
        if defect > 10.0 * eps and defect > 1e-8 * out.max_abs():
            raise ValueError(
                f"threshold {eps:g} violates conservation (defect {defect:g})"
            )
    return out


def linearized_matrix(tensor: CollisionTensor) -> LinearizedMatrix:
    """Dense matrix A[alpha; 0, beta] + A[alpha; beta, 0] with its decay
    rate (the spectral radius over the truncated space)."""
    n = tensor.layout.size
    mat = np.zeros((n, n))
    zero_b = tensor.beta_idx == 0
    zero_g = tensor.gamma_idx == 0
    np.add.at(mat, (tensor.alpha_idx[zero_b], tensor.gamma_idx[zero_b]),
              tensor.values[zero_b])
    np.add.at(mat, (tensor.alpha_idx[zero_g], tensor.beta_idx[zero_g]),
              tensor.values[zero_g])
    return LinearizedMatrix(mat, decay_rate(mat))


def decay_rate(matrix: np.ndarray) -> float:
    """Spectral radius of the linearized operator; positive because the
    non-conserved modes are damped."""
    eig = np.linalg.eigvals(matrix)
    nu = float(np.abs(eig).max())
    if nu <= 0.0:
        raise ArithmeticError("linearized collision matrix has empty spectrum")
    return nu
