"""Weight families, Fock weights, exact blocks, and scalar diagnostics.

The Fock monomial weights produced by the projection-identity recursion are
checked against the factorial closed form; Bergman weights against exact
normalized volume integrals over the ball (both via rational arithmetic).
"""

from fractions import Fraction
from math import factorial

import numpy as np
import pytest

import gradmod as gm
from gradmod.completion import fock_level_weights
from gradmod.linalg import opnorm


# -- weight families -------------------------------------------------------


def test_dshift_weights():
    w = gm.make_weights("dshift", 5)
    np.testing.assert_array_equal(w.values, np.ones(5))
    assert w.bounds == (1.0, 1.0)


def test_hardy_weights():
    w = gm.make_weights("hardy", 6, d=2)
    assert w.values[0] == pytest.approx(np.sqrt(0.5), abs=1e-15)
    k = np.arange(6)
    np.testing.assert_allclose(w.values, np.sqrt((k + 1) / (k + 2)), atol=1e-15)


def test_sinsqrt_weights():
    w = gm.make_weights("sinsqrt", 4, r1=1.0, r2=4.0)
    # sin 0 = 0, so rho_0^2 = r1 + (r2 - r1)/2
    assert w.values[0] ** 2 == pytest.approx(2.5, abs=1e-15)


def ball_monomial_integral(d, alpha):
    """Exact normalized volume integral of |z^alpha|^2 over the unit ball."""
    n = sum(alpha)
    num = Fraction(factorial(d))
    for a in alpha:
        num *= factorial(a)
    return num / factorial(d + n)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_bergman_weights_match_ball_integrals(d):
    # derived oracle: c_n = ||z^alpha||_ball^2 / nu_alpha is constant on the
    # level, and rho_k = sqrt(c_{k+1} / c_k)
    w = gm.make_weights("bergman", 10, d=d)
    for k in range(9):
        c_k = ball_monomial_integral(d, (k,) + (0,) * (d - 1)) \
            / Fraction(factorial(k), factorial(k))
        c_k1 = ball_monomial_integral(d, (k + 1,) + (0,) * (d - 1))
        assert w.values[k] ** 2 == pytest.approx(float(c_k1 / c_k), rel=1e-14)
        assert w.values[k] ** 2 == pytest.approx((k + 1) / (k + d + 1), rel=1e-14)


def test_weight_validation():
    with pytest.raises(ValueError):
        gm.make_weights("sinsqrt", 5, r1=4.0, r2=1.0)
    with pytest.raises(ValueError):
        gm.make_weights("sinsqrt", 5, r1=-1.0, r2=2.0)
    with pytest.raises(ValueError):
        gm.make_weights("hardy", 5)
    with pytest.raises(ValueError):
        gm.make_weights("nosuch", 5)
    with pytest.raises(ValueError):
        gm.make_weights("custom", 3, values=[1.0, -1.0, 2.0])


# -- Fock weights and monomial norms ----------------------------------------


@pytest.mark.parametrize("d", [1, 2, 3])
def test_fock_weights_match_factorial_closed_form(d):
    levels = fock_level_weights(d, 8)
    for n in range(9):
        basis = gm.monomial_basis(d, n)
        for i, alpha in enumerate(basis.monomials):
            closed = Fraction(1, factorial(n))
            for a in alpha:
                closed *= factorial(a)
            assert levels[n][i] == pytest.approx(float(closed), rel=1e-13)


def test_monomial_norms():
    w = gm.make_weights("hardy", 8, d=2)
    mod = gm.StandardModule(w, d=2)
    assert mod.monomial_norms(0)[0] == pytest.approx(1.0)          # ||1||^2 = 1
    assert mod.monomial_norms(1)[0] == pytest.approx(0.5)          # rho_0^2
    h2 = gm.StandardModule(gm.make_weights("dshift", 8), d=2)
    idx = gm.monomial_basis(2, 2).index((1, 1))
    assert h2.monomial_norms(2)[idx] == pytest.approx(0.5)         # ||z1 z2||^2


# -- blocks ------------------------------------------------------------------


def test_one_variable_dshift_blocks_are_unit():
    mod = gm.StandardModule(gm.make_weights("dshift", 6), d=1)
    for n in range(5):
        np.testing.assert_allclose(mod.coordinate_block(1, n), [[1.0]], atol=1e-15)


def all_test_modules(n_levels=8):
    yield gm.StandardModule(gm.make_weights("dshift", n_levels), d=2)
    yield gm.StandardModule(gm.make_weights("hardy", n_levels, d=2), d=2)
    yield gm.StandardModule(gm.make_weights("bergman", n_levels, d=3), d=3, multiplicity=2)
    yield gm.StandardModule(gm.make_weights("sinsqrt", n_levels, r1=1.0, r2=4.0), d=2)


def test_row_sum_identity_all_families():
    for mod in all_test_modules():
        for n in range(mod.top_level):
            assert gm.row_sum_residual(mod, n) <= 1e-12


def test_coordinate_blocks_commute():
    for mod in all_test_modules():
        assert gm.commutation_residual(mod.coordinate_tuple()) <= 1e-13


def test_level_zero_column_is_scaled_unit_vector():
    # Z_k 1 = z_k has norm rho_0; after the coordinate normalization (divide
    # by rho_0) it is the k-th level-1 basis vector.
    w = gm.make_weights("hardy", 6, d=2)
    mod = gm.StandardModule(w, d=2)
    for k in (1, 2):
        col = mod.coordinate_block(k, 0)[:, 0]
        assert np.linalg.norm(col) == pytest.approx(w.values[0], abs=1e-15)
        unit = col / w.values[0]
        expected = np.zeros(2, complex)
        expected[k - 1] = 1.0
        np.testing.assert_allclose(unit, expected, atol=1e-15)


def test_adjoint_blocks():
    for mod in all_test_modules():
        with pytest.raises(ValueError):
            mod.adjoint_block(1, 0)       # Z_k* annihilates level 0
        for n in range(1, mod.top_level):
            np.testing.assert_array_equal(
                mod.adjoint_block(1, n), mod.coordinate_block(1, n - 1).conj().T)


def test_adjoint_proportional_to_derivative():
    """Z_k*|_{level n} = u(n) * (d/dz_k in orthonormal coordinates).

    Oracle built from scratch: factorial Fock weights, cumulative level
    scales, and the raw derivative structure map.
    """
    for mod in all_test_modules():
        rho = mod.rho
        c = np.concatenate(([1.0], np.cumprod(rho**2)))
        for n in range(1, mod.top_level):
            nu_hi = np.array([
                np.prod([factorial(a) for a in alpha]) / factorial(n)
                for alpha in gm.monomial_basis(mod.d, n).monomials])
            nu_lo = np.array([
                np.prod([factorial(a) for a in alpha]) / factorial(n - 1)
                for alpha in gm.monomial_basis(mod.d, n - 1).monomials])
            w_hi = np.sqrt(c[n] * nu_hi)
            w_lo = np.sqrt(c[n - 1] * nu_lo)
            u = rho[n - 1] ** 2 / n
            for k in range(1, mod.d + 1):
                raw = gm.derivative_structure_map(k, mod.d, n)
                normalized = w_lo[:, None] * raw / w_hi[None, :]
                oracle = u * np.kron(normalized, np.eye(mod.multiplicity))
                assert opnorm(mod.adjoint_block(k, n) - oracle) <= 1e-12
                assert opnorm(mod.adjoint_block(k, n)
                              - mod.adjoint_scalar(n) * mod.gradient_block(k, n)) <= 1e-12


def test_adjoint_h2_scalars():
    # Z_1*(z_1) = 1 on the d-shift module; the level-2 scalar is 1/2.
    mod = gm.StandardModule(gm.make_weights("dshift", 6), d=2)
    adj = mod.adjoint_block(1, 1)
    np.testing.assert_allclose(adj, [[1.0, 0.0]], atol=1e-15)
    assert mod.adjoint_scalar(1) == pytest.approx(1.0)
    assert mod.adjoint_scalar(2) == pytest.approx(0.5)


def test_out_of_window_blocks_raise():
    mod = gm.StandardModule(gm.make_weights("dshift", 4), d=2)
    with pytest.raises(ValueError):
        mod.coordinate_block(1, 4)
    with pytest.raises(ValueError):
        mod.level_dim(5)


# -- appendix commutator decomposition --------------------------------------


def test_decomposition_dshift_reduces_to_fock_commutator():
    # Dt^2 - D^2 = 0 on levels >= 1 when all weights are 1
    mod = gm.StandardModule(gm.make_weights("dshift", 8), d=2)
    for n in range(1, 7):
        assert gm.commutator_decomposition_residual(mod, 1, 2, n) <= 1e-14


def test_decomposition_hardy():
    mod = gm.StandardModule(gm.make_weights("hardy", 12, d=2), d=2)
    for n in range(1, 11):
        for j in (1, 2):
            for k in (1, 2):
                assert gm.commutator_decomposition_residual(mod, j, k, n) <= 1e-12
    with pytest.raises(ValueError):
        gm.commutator_decomposition_residual(mod, 1, 2, 0)


def test_unilateral_shift_self_commutator():
    # d = 1 shift: [Z*, Z] is the rank-one projection onto the constants
    mod = gm.StandardModule(gm.make_weights("dshift", 6), d=1)
    comm = gm.self_commutator(mod.coordinate_tuple(), 1, 1)
    np.testing.assert_allclose(comm.block(0), [[1.0]], atol=1e-15)
    for n in range(1, 6):
        assert comm.level_norm(n) <= 1e-15


# -- scalar diagnostics ------------------------------------------------------


def test_oscillation_dshift():
    rep = gm.oscillation_report(gm.make_weights("dshift", 100), 50)
    assert rep.tail_max == 0.0
    assert rep.slope is None


def test_oscillation_hardy_decay():
    rep = gm.oscillation_report(gm.make_weights("hardy", 400, d=2), 200)
    assert rep.slope is not None and rep.slope <= -1.5
    assert rep.tail_max < 1e-4


def test_oscillation_sinsqrt_decay():
    w = gm.make_weights("sinsqrt", 2000, r1=1.0, r2=4.0)
    rep = gm.oscillation_report(w, 1000)
    assert -0.7 < rep.slope < -0.3


def test_summability_dshift_is_zero():
    for p in (1.0, 2.0, 5.0):
        rep = gm.summability_report(gm.make_weights("dshift", 50), 2, p)
        assert np.all(rep.partial_sums == 0.0)
        assert rep.trend.trend == "converging"


def test_summability_sinsqrt_threshold():
    # p-essential normality threshold p > 2d at d = 2
    w = gm.make_weights("sinsqrt", 2000, r1=1.0, r2=4.0)
    assert gm.summability_report(w, 2, 5).trend.trend == "converging"
    assert gm.summability_report(w, 2, 3).trend.trend == "diverging"


def test_number_trace_threshold():
    # (N+1)^{-1} is p-summable exactly when p > d
    for d in (1, 2, 3):
        assert gm.number_trace_report(d, d + 1, 500).trend.trend == "converging"
        assert gm.number_trace_report(d, d, 500).trend.trend == "diverging"
