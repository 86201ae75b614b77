import numpy as np
import pytest

import gradmod as gm


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_generators(rng, d, r, degree, count):
    """Homogeneous generators with complex Gaussian coefficients."""
    basis = gm.monomial_basis(d, degree)
    gens = []
    for _ in range(count):
        terms = []
        for alpha in basis.monomials:
            for comp in range(r):
                c = rng.normal() + 1j * rng.normal()
                terms.append((alpha, comp, complex(c)))
        gens.append(gm.VectorPolynomial(degree, tuple(terms)))
    return gens


def random_subspace(rng, module, dim):
    """Random dim-dimensional subspace of d.E."""
    ambient = module.d * module.multiplicity
    raw = rng.normal(size=(ambient, dim)) + 1j * rng.normal(size=(ambient, dim))
    return gm.SubspaceV.from_matrix(module, raw)
