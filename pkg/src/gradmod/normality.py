"""Essential-normality diagnostics for graded operator tuples.

The self-commutators of a degree-1 tuple are degree-0, so they decompose
exactly into level blocks; their singular values therefore give exact
per-level Schatten contributions, and only the top truncation level (whose
commutator would touch level N+1) is ever excluded.  Cumulative p-sums are
reported with a trend classification, never with a convergence verdict.

Also here: the compression identities relating ambient, submodule and
quotient commutators; the rectangular-contour resolvent integral for the
range projection of a gapped positive matrix, with its commutator transform
and norm bound; and the weighted-shift similarity pair showing that graded
isomorphism does not preserve essential normality.
"""

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .config import QUAD_DEFAULT_NODES, QUAD_MAX_NODES, QUAD_REFINE_FLOOR
from .operators import GradedOperator, commutator
from .trends import classify_trend


def self_commutator(ops, j, k):
    """[T_j*, T_k] = T_j* T_k - T_k T_j* as a degree-0 graded operator.

    Exact on levels 0..N-1; level N is omitted because one factor would need
    the unstored block into level N+1.
    """
    tj, tk = ops[j - 1], ops[k - 1]
    blocks = {}
    for n in sorted(tj.blocks):
        term = tj.blocks[n].conj().T @ tk.blocks[n]
        if n - 1 in tk.blocks:
            term = term - tk.blocks[n - 1] @ tj.blocks[n - 1].conj().T
        blocks[n] = term
    return GradedOperator(0, blocks)


@dataclass(frozen=True)
class SchattenReport:
    """Exact per-level Schatten data for the self-commutators of a tuple."""

    pairs: tuple
    levels: np.ndarray
    level_sums: dict          # p -> per-level sum over pairs of sigma_i^p
    cumulative: dict          # p -> running partial sums
    trends: dict              # p -> TrendReport
    singular_values: dict = field(repr=False)   # (j, k) -> list of arrays
    note: str = ""


def schatten_report(ops, p_values, note=""):
    """Per-level singular values and cumulative p-sums of all self-commutators."""
    d = len(ops)
    p_values = [float(p) for p in p_values]
    if any(p < 1 for p in p_values):
        raise ValueError("Schatten exponents must be at least 1")
    pairs = [(j, k) for j in range(1, d + 1) for k in range(1, d + 1)]
    comms = {pair: self_commutator(ops, *pair) for pair in pairs}
    levels = sorted(next(iter(comms.values())).blocks)
    sigma = {pair: [] for pair in pairs}
    for n in levels:
        for pair in pairs:
            block = comms[pair].blocks[n]
            sigma[pair].append(
                np.linalg.svd(block, compute_uv=False) if block.size
                else np.zeros(0))
    level_arr = np.asarray(levels, dtype=float)
    level_sums, cumulative, trends = {}, {}, {}
    for p in p_values:
        per_level = np.array([
            sum(float(np.sum(sigma[pair][i] ** p)) for pair in pairs)
            for i in range(len(levels))])
        level_sums[p] = per_level
        cumulative[p] = np.cumsum(per_level)
        trends[p] = classify_trend(level_arr + 1.0, per_level)
    return SchattenReport(tuple(pairs), level_arr, level_sums,
                          cumulative, trends, sigma, note)


def quotient_en_report(quotient, p_values):
    """Schatten trends for the compressed tuple of a quotient module.

    Labeled as evidence: a converging trend at finite truncation does not
    prove essential normality of the quotient.
    """
    return schatten_report(quotient.coordinate_tuple(), p_values,
                           note="evidence, not proof")


# -- compression identities ------------------------------------------------


def compression_identity_residuals(module, submodule, j, k, level):
    """Residuals of the two exact compression identities at one interior level.

    First: [B_j, B_k*] P = -[P, T_j][P, T_k]* + P [T_j, T_k*] P with
    B_i = T_i restricted to M and P = P_M.
    Second: [C_j, C_k*] P' = [P, T_k]*[P, T_j] + P' [T_j, T_k*] P' with
    C_i the compression of T_i to the orthocomplement and P' = 1 - P.
    Both hold as exact finite-matrix identities on levels 1..N-1.
    """
    n = int(level)
    window = min(submodule.window, module.top_level)
    if not 1 <= n <= window - 1:
        raise ValueError(f"level {n} is not interior (1..{window - 1})")
    ts = module.coordinate_tuple()
    tj, tk = ts[j - 1], ts[k - 1]
    p = submodule.projection_operator()
    dims = {m: module.level_dim(m) for m in range(window + 1)}
    pperp = GradedOperator.identity(dims) - p

    amb_comm = commutator(tj, tk.adjoint())  # [T_j, T_k*]

    lhs1 = (tj @ p @ tk.adjoint() @ p) - (p @ tk.adjoint() @ tj @ p)
    rhs1 = -(commutator(p, tj) @ commutator(p, tk).adjoint()) \
        + (p @ amb_comm @ p)
    res1 = float(np.linalg.norm((lhs1 - rhs1).block(n), 2))

    cj = pperp @ tj @ pperp
    ck = pperp @ tk @ pperp
    lhs2 = (cj @ ck.adjoint() - ck.adjoint() @ cj) @ pperp
    rhs2 = (commutator(p, tk).adjoint() @ commutator(p, tj)) \
        + (pperp @ amb_comm @ pperp)
    res2 = float(np.linalg.norm((lhs2 - rhs2).block(n), 2))
    return res1, res2


# -- resolvent-integral projection -----------------------------------------


@dataclass(frozen=True)
class BoundCheck:
    """Contour-length norm bound for one transformed commutator."""

    p: float
    measured: float     # || [Y, P] ||_{2p}
    bound: float        # (4||B|| + 4 eps) / (pi eps^2) * || [Y, B] ||_{2p}
    slack: float


@dataclass(frozen=True)
class ResolventReport:
    projection: np.ndarray
    nodes: int
    converged: bool
    successive_difference: float
    eigenvalue_gap: tuple
    commutator_transforms: list
    bound_checks: list


def _contour_nodes(b_norm, gap, total_nodes):
    """Trapezoid nodes and weights on the rectangle enclosing sigma(B) \\ {0}.

    Corners (gap/2, +-gap/2) and (||B|| + gap/2, +-gap/2), counter-clockwise.
    Node counts are allocated per side proportionally to length.
    """
    a, b, h = gap / 2.0, b_norm + gap / 2.0, gap / 2.0
    corners = [a - 1j * h, b - 1j * h, b + 1j * h, a + 1j * h]
    lengths = [abs(corners[(i + 1) % 4] - corners[i]) for i in range(4)]
    perimeter = sum(lengths)
    nodes, weights = [], []
    for i in range(4):
        start, end = corners[i], corners[(i + 1) % 4]
        m = max(2, int(round(total_nodes * lengths[i] / perimeter)))
        ts = np.linspace(0.0, 1.0, m + 1)
        pts = start + (end - start) * ts
        dz = (end - start) / m
        w = np.full(m + 1, dz, dtype=complex)
        w[0] *= 0.5
        w[-1] *= 0.5
        nodes.append(pts)
        weights.append(w)
    return np.concatenate(nodes), np.concatenate(weights)


def resolvent_quadrature(b, gap, nodes, transforms=()):
    """One fixed-node contour evaluation of P = (2 pi i)^{-1} int R_lambda dlambda.

    ``transforms`` are matrices Y; for each one the same quadrature is applied
    to R_lambda [Y, B] R_lambda, the contour-integral form of [Y, P].
    """
    b = np.asarray(b, dtype=complex)
    dim = b.shape[0]
    pts, weights = _contour_nodes(float(np.linalg.norm(b, 2)), gap, nodes)
    eye = np.eye(dim, dtype=complex)
    proj = np.zeros_like(b)
    comms = [y @ b - b @ y for y in transforms]
    transformed = [np.zeros_like(b) for _ in transforms]
    for lam, w in zip(pts, weights):
        res = np.linalg.solve(lam * eye - b, eye)
        proj += w * res
        for out, c in zip(transformed, comms):
            out += w * (res @ c @ res)
    factor = 1.0 / (2.0j * np.pi)
    return factor * proj, [factor * t for t in transformed]


def resolvent_projection(b, gap, nodes=QUAD_DEFAULT_NODES, transforms=(),
                         p_values=(1.0,), refine_floor=QUAD_REFINE_FLOOR):
    """Range projection of a gapped psd matrix by adaptive contour quadrature.

    The spectrum must split as {0-cluster} union [gap, inf): eigenvalues in
    between raise ValueError.  Node counts double until successive estimates
    agree to ``refine_floor``.  For each transform Y the report carries the
    quadrature value of [Y, P] and the Schatten-norm bound check
    ||[Y, P]||_{2p} <= (4||B|| + 4 eps)/(pi eps^2) ||[Y, B]||_{2p}.
    """
    b = np.asarray(b, dtype=complex)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError("B must be square")
    herm = float(np.linalg.norm(b - b.conj().T, 2))
    scale = max(float(np.linalg.norm(b, 2)), 1.0)
    if herm > 1e-12 * scale:
        raise ValueError("B must be Hermitian")
    if gap <= 0:
        raise ValueError("gap must be positive")
    eigs = np.linalg.eigvalsh(b)
    zero_cut = 1e-10 * scale
    inside = [float(e) for e in eigs if zero_cut < e < gap * (1 - 1e-9)]
    if inside:
        raise ValueError(
            f"no spectral gap (0, {gap:g}): eigenvalues {inside[:4]} inside")

    prev, _ = resolvent_quadrature(b, gap, nodes)
    n_used = nodes
    diff = float("inf")
    while n_used * 2 <= QUAD_MAX_NODES:
        n_used *= 2
        cur, _ = resolvent_quadrature(b, gap, n_used)
        diff = float(np.linalg.norm(cur - prev, 2))
        prev = cur
        if diff < refine_floor:
            break
    proj, transformed = resolvent_quadrature(b, gap, n_used, transforms)

    b_norm = float(np.linalg.norm(b, 2))
    const = (4.0 * b_norm + 4.0 * gap) / (np.pi * gap**2)
    checks = []
    for y, ty in zip(transforms, transformed):
        yb = y @ b - b @ y
        for p in p_values:
            q = 2.0 * float(p)
            measured = linalg.schatten_norm(ty, q)
            bound = const * linalg.schatten_norm(yb, q)
            checks.append(BoundCheck(float(p), measured, bound,
                                     bound - measured))
    gap_pair = (float(eigs[eigs <= zero_cut].max(initial=0.0)),
                float(eigs[eigs > zero_cut].min(initial=np.inf)))
    return ResolventReport(proj, n_used, diff < refine_floor, diff,
                           gap_pair, transformed, checks)


def spectral_projection_oracle(b, gap):
    """Eigendecomposition route to the same projection (the independent oracle)."""
    b = np.asarray(b, dtype=complex)
    eigs, vecs = np.linalg.eigh(b)
    scale = max(float(np.abs(eigs).max(initial=0.0)), 1.0)
    keep = eigs > min(gap / 2.0, 1e-10 * scale) if gap > 0 else eigs > 1e-10 * scale
    v = vecs[:, keep]
    return v @ v.conj().T


# -- similarity counterexample ----------------------------------------------


@dataclass(frozen=True)
class CounterexampleReport:
    """Similar graded pair (A, B) with LA = BL where only A is essentially normal."""

    u: np.ndarray
    shift_a: GradedOperator
    shift_b: GradedOperator
    intertwiner_diag: np.ndarray
    flagged_indices: np.ndarray          # n with (u_n, u_{n+1}) = (0, 1)
    intertwining_residual: float         # max |(LA - BL) e_n|, exactly 0
    a_commutator_rank: int
    b_commutator_diag: np.ndarray        # e^{2 u_{n+1}} - e^{2 u_n}
    b_ratio_diag: np.ndarray             # e^{2 (u_{n+1} - u_n)}
    max_partial_sum: float
    intertwiner_extremes: tuple


def alternating_block_sequence(length):
    """Default admissible u: period-4 pattern 0, 1, 0, -1, ...

    Hits (u_n, u_{n+1}) = (0, 1) at every n = 0 mod 4 and keeps all partial
    sums in {0, 1}.
    """
    base = np.array([0.0, 1.0, 0.0, -1.0])
    reps = int(np.ceil(length / 4.0))
    return np.tile(base, reps)[:length]


def similarity_counterexample(u, levels, require_flag=True):
    """Construct the weighted-shift pair A e_n = e_{n+1}, B e_n = e^{u_{n+1}} e_{n+1}.

    ``u`` must provide u_0..u_levels and, unless ``require_flag`` is False,
    hit (u_n, u_{n+1}) = (0, 1) somewhere on the window (the indices where
    B's self-commutator refuses to decay).  The intertwiner
    L e_n = lambda_n e_n is built by the recursion
    lambda_{n+1} = e^{u_{n+1}} lambda_n, which makes LA = BL hold bitwise in
    floating point.  ``require_flag=False`` admits degenerate sequences such
    as u = 0, where the construction collapses to A = B, L = I.
    """
    u = np.asarray(u, dtype=float)
    n_levels = int(levels)
    if u.size < n_levels + 1:
        raise ValueError(f"need u_0..u_{n_levels}")
    u = u[: n_levels + 1]
    flagged = np.array([n for n in range(n_levels)
                        if u[n] == 0.0 and u[n + 1] == 1.0], dtype=int)
    if require_flag and flagged.size == 0:
        raise ValueError("u never hits (u_n, u_{n+1}) = (0, 1) on the window")

    b_weights = np.exp(u[1:])
    lam = np.empty(n_levels + 1)
    lam[0] = np.exp(u[0])
    for n in range(n_levels):
        lam[n + 1] = b_weights[n] * lam[n]

    a_op = GradedOperator(1, {n: np.array([[1.0]]) for n in range(n_levels)})
    b_op = GradedOperator(1, {n: np.array([[b_weights[n]]])
                              for n in range(n_levels)})
    resid = max(abs(lam[n + 1] * 1.0 - b_weights[n] * lam[n])
                for n in range(n_levels))

    sc_a = self_commutator([a_op], 1, 1)
    sc_b = self_commutator([b_op], 1, 1)
    a_diag = np.array([float(sc_a.blocks[n].real[0, 0]) for n in range(n_levels)])
    rank_a = int(np.count_nonzero(np.abs(a_diag) > 1e-14))
    b_diag = np.array([float(sc_b.blocks[n].real[0, 0]) for n in range(n_levels)])
    ratio = np.exp(2.0 * (u[1:] - u[:-1]))[:n_levels]
    partial = np.cumsum(u)
    return CounterexampleReport(
        u, a_op, b_op, lam, flagged, float(resid), rank_a, b_diag, ratio,
        float(np.max(np.abs(partial))), (float(lam.min()), float(lam.max())))
