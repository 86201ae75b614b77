"""Multi-index combinatorics on homogeneous polynomial levels.

A multi-index is a plain tuple of d nonnegative integers.  Level n in d
variables is spanned by the monomials z^alpha with |alpha| = n, ordered
graded-lexicographically with z_1 > z_2 > ... > z_d; that order is fixed once
so every block matrix in the toolkit is reproducible entry for entry.

The structure maps built here are pure coefficient matrices in the monomial
basis: no inner product enters at this layer.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np


def level_dimension(d, n):
    """Number of monomials of degree n in d variables: C(n+d-1, d-1)."""
    if d < 1:
        raise ValueError("need at least one variable")
    if n < 0:
        raise ValueError("degree must be nonnegative")
    return comb(n + d - 1, d - 1)


def _descending_lex(d, n):
    if d == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _descending_lex(d - 1, n - first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _basis_cached(d, n):
    return tuple(_descending_lex(d, n))


@dataclass(frozen=True)
class LevelBasis:
    """Ordered monomial basis of one homogeneous level."""

    d: int
    n: int
    monomials: tuple

    def index(self, alpha):
        return self.monomials.index(tuple(alpha))

    def __len__(self):
        return len(self.monomials)


def monomial_basis(d, n):
    """LevelBasis for degree n in d variables, in descending lexicographic order."""
    if d < 1:
        raise ValueError("need at least one variable")
    if n < 0:
        raise ValueError("degree must be nonnegative")
    return LevelBasis(d, n, _basis_cached(d, n))


@lru_cache(maxsize=None)
def _index_map(d, n):
    return {alpha: i for i, alpha in enumerate(_basis_cached(d, n))}


def mult_structure_map(k, d, n):
    """Coefficient matrix of multiplication by z_k from level n to level n+1.

    ``k`` is the 1-based variable index.  The matrix is 0/1: monomial alpha
    maps to alpha + e_k.
    """
    if not 1 <= k <= d:
        raise ValueError("variable index out of range")
    src = _basis_cached(d, n)
    dst_index = _index_map(d, n + 1)
    out = np.zeros((level_dimension(d, n + 1), len(src)))
    for col, alpha in enumerate(src):
        beta = list(alpha)
        beta[k - 1] += 1
        out[dst_index[tuple(beta)], col] = 1.0
    return out


def derivative_structure_map(k, d, n):
    """Coefficient matrix of d/dz_k from level n to level n-1.

    The column of alpha carries the coefficient alpha_k at alpha - e_k and is
    zero when alpha_k = 0.  Requires n >= 1.
    """
    if not 1 <= k <= d:
        raise ValueError("variable index out of range")
    if n < 1:
        raise ValueError("nothing to differentiate at level 0")
    src = _basis_cached(d, n)
    dst_index = _index_map(d, n - 1)
    out = np.zeros((level_dimension(d, n - 1), len(src)))
    for col, alpha in enumerate(src):
        if alpha[k - 1] == 0:
            continue
        beta = list(alpha)
        beta[k - 1] -= 1
        out[dst_index[tuple(beta)], col] = float(alpha[k - 1])
    return out
