"""Dense rank-revealing helpers shared by all block computations.

Everything here is a thin, deterministic wrapper around numpy's SVD with the
project-wide relative rank tolerance.  Subspaces are always represented by
matrices whose columns are orthonormal; an empty subspace is a (dim, 0) array.
"""

import numpy as np

from .config import RANK_TOL_FACTOR


def _as_complex(a):
    return np.asarray(a, dtype=complex)


def numerical_rank(a, rtol=RANK_TOL_FACTOR):
    """Rank of a dense matrix, counting singular values above rtol * sigma_max."""
    a = _as_complex(a)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rtol * s[0]))


def orthonormal_columns(a, rtol=RANK_TOL_FACTOR, floor=0.0):
    """Orthonormal basis for the column span of ``a``.

    Returns a (rows, rank) matrix with orthonormal columns.  The zero matrix
    (or a matrix with no columns) yields a (rows, 0) result.  ``floor`` is an
    absolute singular-value cutoff for callers whose input is the image of a
    map and may be roundoff junk of a true zero (a relative tolerance alone
    would keep such columns).
    """
    a = _as_complex(a)
    if a.ndim != 2:
        raise ValueError("expected a matrix")
    if a.shape[1] == 0 or a.shape[0] == 0:
        return np.zeros((a.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] <= floor:
        return np.zeros((a.shape[0], 0), dtype=complex)
    rank = int(np.count_nonzero(s > max(rtol * s[0], floor)))
    return u[:, :rank]


def nullspace(a, rtol=RANK_TOL_FACTOR, floor=0.0):
    """Orthonormal basis of the kernel of ``a`` as a (cols, nullity) matrix.

    ``floor`` is an absolute singular-value cutoff for callers passing a
    composition that may be roundoff junk of a true zero map (e.g. a
    complement projection applied to a map whose range it contains), where a
    purely relative tolerance would manufacture spurious rank.
    """
    a = _as_complex(a)
    if a.ndim != 2:
        raise ValueError("expected a matrix")
    n = a.shape[1]
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    if a.shape[0] == 0:
        return np.eye(n, dtype=complex)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    if s.size == 0 or s[0] <= floor:
        rank = 0
    else:
        rank = int(np.count_nonzero(s > max(rtol * s[0], floor)))
    return vh[rank:, :].conj().T


def complement_basis(basis):
    """Orthonormal basis of the orthocomplement of span(basis) in its ambient space."""
    basis = _as_complex(basis)
    return nullspace(basis.conj().T)


def projector(basis):
    """Orthogonal projection onto span(basis); basis columns must be orthonormal."""
    basis = _as_complex(basis)
    return basis @ basis.conj().T


def opnorm(a):
    """Spectral norm, with the convention that empty blocks have norm 0."""
    a = _as_complex(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def containment_residual(inner, outer):
    """How far span(inner) sticks out of span(outer): ||(I - P_outer) inner||_2.

    Both arguments are orthonormal-column matrices in the same ambient space.
    Zero-dimensional ``inner`` is contained in everything.
    """
    inner = _as_complex(inner)
    outer = _as_complex(outer)
    if inner.shape[1] == 0:
        return 0.0
    return opnorm(inner - outer @ (outer.conj().T @ inner))


def subspace_distance(a, b):
    """Symmetric gap between two subspaces given by orthonormal-column matrices.

    Equals the sine of the largest principal angle when dimensions agree and
    1.0 when they differ.
    """
    a = _as_complex(a)
    b = _as_complex(b)
    if a.shape[1] != b.shape[1]:
        return 1.0
    return max(containment_residual(a, b), containment_residual(b, a))


def orthonormality_residual(basis):
    """|| basis* basis - I ||_2 : how orthonormal the columns actually are."""
    basis = _as_complex(basis)
    m = basis.shape[1]
    if m == 0:
        return 0.0
    return opnorm(basis.conj().T @ basis - np.eye(m))


def schatten_norm(a, p):
    """Schatten p-norm of a dense matrix (p >= 1); p = inf is the spectral norm."""
    a = _as_complex(a)
    if a.size == 0:
        return 0.0
    s = np.linalg.svd(a, compute_uv=False)
    if np.isinf(p):
        return float(s[0]) if s.size else 0.0
    return float(np.sum(s**p) ** (1.0 / p))
