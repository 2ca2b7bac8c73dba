"""Multi-index bookkeeping for the tensor-product Hermite basis.

Every coefficient array in the package is addressed through an
:class:`IndexLayout`: the set of exponent triples ``(a1, a2, a3)`` with
``a1 + a2 + a3 <= M``, ranked first by total degree and then
lexicographically inside each degree.  The graded order makes truncation
to a lower degree a prefix slice.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

MultiIndex = tuple[int, int, int]


def index_count(max_degree: int) -> int:
    """Number of exponent triples with total degree <= max_degree."""
    if max_degree < 0:
        raise ValueError(f"max_degree must be >= 0, got {max_degree}")
    m = max_degree
    return (m + 1) * (m + 2) * (m + 3) // 6


def indices_of_degree(degree: int) -> list[MultiIndex]:
    """All triples of a given total degree, lexicographically ascending."""
    out = []
    for a1 in range(degree + 1):
        for a2 in range(degree - a1 + 1):
            out.append((a1, a2, degree - a1 - a2))
    out.sort()
    return out


class IndexLayout:
    """Graded-lexicographic rank table for the triples of degree <= M.

    Precomputes the shift tables used by recursions: ``shift_down[d][i]``
    is the rank of ``alpha - e_d`` (or -1 when the component underflows),
    and analogously ``shift_up`` and ``shift_down2``.  All arrays are
    immutable after construction; instances are cached and shared.
    """

    def __init__(self, max_degree: int):
        self.max_degree = int(max_degree)
        self.size = index_count(self.max_degree)
        tuples: list[MultiIndex] = []
        for deg in range(self.max_degree + 1):
            tuples.extend(indices_of_degree(deg))
        self._tuples = tuples
        self._rank = {t: i for i, t in enumerate(tuples)}
        self.alphas = np.array(tuples, dtype=np.int64)
        self.degrees = self.alphas.sum(axis=1)
        self.degree_start = np.array(
            [index_count(d - 1) if d > 0 else 0 for d in range(self.max_degree + 2)],
            dtype=np.int64,
        )
        self.shift_up = self._build_shift(+1)
        self.shift_down = self._build_shift(-1)
        self.shift_down2 = self._build_shift(-2)

    def _build_shift(self, step: int) -> np.ndarray:
        table = np.full((3, self.size), -1, dtype=np.int64)
        for i, t in enumerate(self._tuples):
            for d in range(3):
                shifted = list(t)
                shifted[d] += step
                if shifted[d] < 0:
                    continue
                j = self._rank.get(tuple(shifted))
                if j is not None:
                    table[d, i] = j
        return table

    def rank(self, alpha: MultiIndex) -> int:
        a = (int(alpha[0]), int(alpha[1]), int(alpha[2]))
        if min(a) < 0:
            raise ValueError(f"negative multi-index component in {alpha}")
        try:
            return self._rank[a]
        except KeyError:
            raise ValueError(
                f"degree of {alpha} exceeds layout maximum {self.max_degree}"
            ) from None

    def unrank(self, i: int) -> MultiIndex:
        return self._tuples[i]

    def __iter__(self):
        return iter(self._tuples)

    def __len__(self) -> int:
        return self.size


@lru_cache(maxsize=None)
def layout(max_degree: int) -> IndexLayout:
    """Shared, cached layout for a given maximum degree."""
    return IndexLayout(max_degree)
