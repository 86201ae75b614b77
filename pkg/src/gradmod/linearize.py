"""Row operator, pullbacks, iterated linearization, and degree-1 structure.

The row operator L sends (xi_1, ..., xi_d) in d.S to Z_1 xi_1 + ... + Z_d xi_d.
Its kernel is a degree-1 submodule; pulling a degree-n submodule M back
through L drops the degree by one, and iterating reduces any determinable
degree >= 2 to a degree-1 submodule in a higher-multiplicity ambient module.

Degree-1 submodules of Z_1 S + ... + Z_d S are in bijection with subspaces
V of d.E: M is the orthocomplement of the space E_V of polynomials whose
stacked adjoint image (equivalently, for maximally symmetric completions,
whose gradient) lies pointwise in V.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .completion import StandardModule
from .submodules import GradedSubmodule, QuotientModule, parse_complex


class WindowExhausted(RuntimeError):
    """Raised when a degree is not determinable within the stored truncation."""


def _unit_row(i, d):
    row = np.zeros((1, d))
    row[0, i - 1] = 1.0
    return row


class RowOperator:
    """L: d.S -> S, with exact blocks L_n: (d.S)_n -> S_{n+1}.

    The domain d.S is realized as the standard module of multiplicity d*r
    over the same completion, with d.E coordinates ordered copy-major
    ((zeta_1, ..., zeta_d) with zeta_i in E).
    """

    def __init__(self, module):
        self.module = module
        self.domain = StandardModule(module.weights, module.d,
                                     module.multiplicity * module.d,
                                     levels=module.top_level)
        self._blocks = {}

    def block(self, n):
        if n not in self._blocks:
            if not 0 <= n <= self.module.top_level - 1:
                raise ValueError(f"no row block at level {n}")
            r = self.module.multiplicity
            d = self.module.d
            self._blocks[n] = sum(
                np.kron(self.module.scalar_block(i, n),
                        np.kron(_unit_row(i, d), np.eye(r)))
                for i in range(1, d + 1)).astype(complex)
        return self._blocks[n]

    def surjectivity_defect(self, n):
        """dim S_{n+1} - rank L_n; zero because S_{n+1} = sum_k Z_k S_n."""
        return self.module.level_dim(n + 1) - linalg.numerical_rank(self.block(n))


def kernel_levels(module, window=None):
    """The kernel K = ker L as a graded submodule of d.S (degree 1, K_0 = 0)."""
    row = RowOperator(module)
    if window is None:
        window = module.top_level - 1
    if window > module.top_level - 1 or window < 1:
        raise ValueError("kernel window must lie in 1..N-1")
    bases = {n: linalg.nullspace(row.block(n)) for n in range(window + 1)}
    return GradedSubmodule(row.domain, bases, window=window)


def pullback(submodule):
    """M' = {zeta in d.S : L zeta in M}, levelwise, for deg M >= 2.

    M'_k is the nullspace of (I - P_{M_{k+1}}) L_k; it contains ker L and
    satisfies L(M'_k) = M_{k+1}.  The stored window shrinks by one level.
    """
    report = submodule.degree_report()
    if not report.determined:
        raise WindowExhausted(
            "degree of M not determinable within the stored window")
    if report.degree < 2:
        raise ValueError("pullback reduction applies to submodules of degree >= 2")
    module = submodule.module
    row = RowOperator(module)
    window = min(submodule.window - 1, module.top_level - 1)
    bases = {}
    for k in range(window + 1):
        target = submodule.basis(k + 1)
        block = row.block(k)
        proj_out = block - target @ (target.conj().T @ block)
        # floor: when M_{k+1} contains ran L_k the composition is a true zero
        bases[k] = linalg.nullspace(proj_out, floor=1e-10 * linalg.opnorm(block))
    return GradedSubmodule(row.domain, bases, window=window)


def pullback_span_residual(submodule, pulled):
    """max_k principal-angle distance between L(M'_k) and M_{k+1} (should be 0)."""
    row = RowOperator(submodule.module)
    worst = 0.0
    for k in range(pulled.window + 1):
        block = row.block(k)
        # absolute floor: kernel directions map to roundoff junk, not rank
        image = linalg.orthonormal_columns(block @ pulled.basis(k),
                                           floor=1e-10 * linalg.opnorm(block))
        worst = max(worst, linalg.subspace_distance(image, submodule.basis(k + 1)))
    return worst


def kernel_containment_residual(module, pulled):
    """How far ker L sticks out of the pullback of a submodule of ``module`` (should be 0)."""
    kernel = kernel_levels(module, window=max(pulled.window, 1))
    worst = 0.0
    for n in range(min(pulled.window, kernel.window) + 1):
        worst = max(worst, linalg.containment_residual(
            kernel.basis(n), pulled.basis(n)))
    return worst


def shift_quotient(quotient):
    """The left shift of a quotient module, realized as (d.S) / pullback(M).

    Level n of the result matches level n+1 of the input; the induced map
    diagnostics certify the levelwise isomorphism.
    """
    pulled = pullback(quotient.submodule)
    return QuotientModule(pulled)


def induced_map_report(quotient, shifted):
    """Condition numbers of the level maps induced by L between the two quotients."""
    row = RowOperator(quotient.submodule.module)
    out = {}
    for n in range(shifted.window + 1):
        if n + 1 > quotient.window:
            break
        mat = quotient.basis(n + 1).conj().T @ row.block(n) @ shifted.basis(n)
        if mat.size == 0:
            out[n] = (0.0, True)
            continue
        s = np.linalg.svd(mat, compute_uv=False)
        full = mat.shape[0] == mat.shape[1] and s[-1] > 0
        out[n] = (float(s[0] / s[-1]) if full else float("inf"), bool(full))
    return out


@dataclass(frozen=True)
class LinearizationStep:
    multiplicity: int
    degree: int
    window: int
    level_dims: tuple


@dataclass(frozen=True)
class LinearizationResult:
    """Outcome of iterating the pullback until the degree reaches 1."""

    steps: tuple
    final: GradedSubmodule
    complete: bool
    reason: str
    span_residuals: tuple = ()      # L(M'_k) vs M_{k+1}, one per pullback
    kernel_residuals: tuple = ()    # ker L containment in M', one per pullback


def linearize_full(submodule, max_ambient_dim=200_000):
    """Iterate pullbacks until a degree-1 submodule is reached.

    Each step multiplies the ambient multiplicity by d and consumes one level
    of the truncation window.  Returns a partial result (``complete=False``)
    when the window is exhausted before the degree drops to 1, or when the
    ambient dimension would exceed ``max_ambient_dim``.
    """
    current = submodule
    steps = []
    span_residuals = []
    kernel_residuals = []

    def record(sub, deg):
        steps.append(LinearizationStep(
            sub.module.multiplicity, deg, sub.window, tuple(sub.dims())))

    def result(complete, reason):
        return LinearizationResult(tuple(steps), current, complete, reason,
                                   tuple(span_residuals), tuple(kernel_residuals))

    while True:
        report = current.degree_report()
        if not report.determined:
            return result(False, "window exhausted before the degree was determinable")
        record(current, report.degree)
        if report.degree <= 1:
            return result(True, "degree 1 reached" if report.degree == 1
                          else "degree 0 input")
        next_dim = sum(current.module.level_dim(n) * current.module.d
                       for n in range(current.window))
        if next_dim > max_ambient_dim:
            return result(False, "ambient dimension budget exceeded")
        pulled = pullback(current)
        span_residuals.append(pullback_span_residual(current, pulled))
        kernel_residuals.append(kernel_containment_residual(current.module, pulled))
        current = pulled


# -- degree-1 submodules and the E_V spaces --------------------------------


@dataclass(frozen=True)
class SubspaceV:
    """Subspace V of d.E: orthonormal basis plus its complement projector."""

    ambient_dim: int
    basis: np.ndarray

    @classmethod
    def from_matrix(cls, module, raw):
        raw = np.asarray(raw, dtype=complex)
        dim = module.d * module.multiplicity
        if raw.shape[0] != dim:
            raise ValueError(f"V must live in d.E of dimension {dim}")
        return cls(dim, linalg.orthonormal_columns(raw))

    @property
    def dim(self):
        return self.basis.shape[1]

    def complement_projector(self):
        return np.eye(self.ambient_dim, dtype=complex) - linalg.projector(self.basis)


def parse_subspace(text, module):
    """Read V from a text grid: one row of complex entries per d.E coordinate."""
    rows = []
    for line in text.splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        rows.append([parse_complex(tok) for tok in line.split()])
    if not rows:
        return SubspaceV.from_matrix(module,
                                     np.zeros((module.d * module.multiplicity, 0)))
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValueError("ragged subspace matrix")
    return SubspaceV.from_matrix(module, np.array(rows, dtype=complex))


def ev_space(module, v, window=None, use_gradient=False):
    """Levelwise bases of E_V and its orthocomplement M = E_V^perp.

    E_V(n) is the nullspace of (1 (x) Q) composed with the stacked adjoint
    blocks (Z_1*, ..., Z_d*) on level n, Q being the projection onto V^perp.
    With ``use_gradient=True`` the stacked blocks are the level gradients
    instead; for maximally symmetric completions the two agree levelwise (the
    adjoints are positive multiples of the gradients).

    Returns (dict level -> E_V basis, GradedSubmodule M).
    """
    if window is None:
        window = module.top_level
    row = RowOperator(module)
    q = v.complement_projector()
    ev = {0: np.eye(module.level_dim(0), dtype=complex)}
    for n in range(1, window + 1):
        if use_gradient:
            d_blocks = [module.gradient_block(i, n) for i in range(1, module.d + 1)]
            stacked = sum(
                np.kron(np.eye(module.scalar_dim(n - 1)),
                        np.kron(_unit_row(i + 1, module.d).T,
                                np.eye(module.multiplicity))) @ blk
                for i, blk in enumerate(d_blocks))
        else:
            stacked = row.block(n - 1).conj().T
        qfull = np.kron(np.eye(module.scalar_dim(n - 1)), q)
        # floor: for V = d.E the composition is a true zero map
        ev[n] = linalg.nullspace(qfull @ stacked,
                                 floor=1e-10 * linalg.opnorm(stacked))
    complements = {n: linalg.complement_basis(ev[n]) for n in ev}
    m = GradedSubmodule(module, complements, window=window)
    return ev, m


def ev_quotient(module, v, window=None):
    """The quotient H_V = S / E_V^perp, realized on the E_V level bases."""
    ev, m = ev_space(module, v, window=window)
    return QuotientModule(m, coquotient_bases=ev)


def recover_subspace(module, m1_basis):
    """V from a degree-1 submodule's level-1 data: W = L_0^{-1}(M_1), V = W^perp.

    The level-0 row block is injective on d.E, so W and hence V are uniquely
    determined.
    """
    row = RowOperator(module)
    l0 = row.block(0)
    m1 = np.asarray(m1_basis, dtype=complex)
    proj_out = l0 - m1 @ (m1.conj().T @ l0)
    w = linalg.nullspace(proj_out, floor=1e-10 * linalg.opnorm(l0))
    v_basis = linalg.complement_basis(w)
    return SubspaceV(module.d * module.multiplicity, v_basis)
