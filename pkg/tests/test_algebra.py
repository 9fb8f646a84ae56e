"""Multimatrix algebras: commutants, central structure, states, expectations."""

import numpy as np
import pytest

from kacgalois import algebra as ag
from kacgalois import linalg as la


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def matrix_unit_basis(d):
    out = []
    for i in range(d):
        for j in range(d):
            m = np.zeros((d, d), dtype=complex)
            m[i, j] = 1.0
            out.append(m)
    return out


def block_diag(*mats):
    n = sum(m.shape[0] for m in mats)
    out = np.zeros((n, n), dtype=complex)
    pos = 0
    for m in mats:
        k = m.shape[0]
        out[pos : pos + k, pos : pos + k] = m
        pos += k
    return out


@pytest.fixture
def sample_multimatrix():
    """M₂⊗1₂ ⊕ ℂ·1₃ inside M₇: blocks (2, mult 2) and (1, mult 3)."""
    basis = []
    for u in matrix_unit_basis(2):
        basis.append(block_diag(np.kron(u, np.eye(2)), np.zeros((3, 3))))
    basis.append(block_diag(np.zeros((4, 4)), np.eye(3, dtype=complex)))
    return ag.from_span(basis, 7)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_commutant_of_full_matrix_algebra_is_scalars(d):
    alg = ag.from_span(matrix_unit_basis(d), d)
    comm = ag.commutant(alg)
    assert comm.dim == 1
    assert la.span_residual(np.eye(d, dtype=complex), comm.onb()) < 1e-10


def test_commutant_of_diagonal_is_diagonal():
    diag = ag.from_span([np.diag(r).astype(complex) for r in np.eye(4)], 4)
    comm = ag.commutant(diag)
    assert comm.dim == 4
    for b in comm.onb():
        np.testing.assert_allclose(b, np.diag(np.diag(b)), atol=1e-10)


def test_double_commutant_is_identity_on_multimatrix(sample_multimatrix):
    alg = sample_multimatrix
    bicomm = ag.commutant(ag.commutant(alg))
    assert bicomm.dim == alg.dim
    assert la.span_distance(alg.onb(), bicomm.onb()) < 1e-9


def test_commutant_always_contains_unit(sample_multimatrix):
    comm = ag.commutant(sample_multimatrix)
    assert comm.contains_unit
    assert comm.dim == 2 * 2 + 3 * 3  # M₂(ℂ)′ ∩ ... = 1₂⊗M₂ ⊕ M₃


def test_central_decomposition_block_structure(sample_multimatrix):
    projs, blocks = sample_multimatrix.central_decomposition()
    assert sorted(blocks) == [(1, 3), (2, 2)]
    total = sum(p for p in projs)
    np.testing.assert_allclose(total, sample_multimatrix.unit, atol=1e-9)
    for p in projs:
        np.testing.assert_allclose(p @ p, p, atol=1e-9)
        np.testing.assert_allclose(p, la.dagger(p), atol=1e-9)


def test_central_decomposition_rejects_non_unital_span():
    # span{e01, e00-e11} has no commuting element at all, so no center exists
    e01 = np.zeros((2, 2), dtype=complex)
    e01[0, 1] = 1.0
    sz = np.diag([1.0, -1.0]).astype(complex)
    bad = ag.MMAlgebra(ambient_dim=2, basis=(e01, sz), unit=np.eye(2, dtype=complex))
    with pytest.raises(ag.SubalgebraError):
        bad.central_decomposition()


def test_mm_from_generators_closes_to_full_algebra():
    e01 = np.zeros((2, 2), dtype=complex)
    e01[0, 1] = 1.0
    gen = ag.mm_from_generators([e01], 2)
    assert gen.dim == 4


def test_matrix_units_satisfy_relations(sample_multimatrix):
    for block in ag.matrix_units(sample_multimatrix):
        m = len(block.units)
        for i in range(m):
            for j in range(m):
                for k in range(m):
                    for l in range(m):
                        prod = block.units[i][j] @ block.units[k][l]
                        expect = block.units[i][l] if j == k else 0.0 * prod
                        np.testing.assert_allclose(prod, expect, atol=1e-9)
        diag_sum = sum(block.units[i][i] for i in range(m))
        np.testing.assert_allclose(diag_sum, block.projection, atol=1e-9)


def test_gns_representation_is_star_homomorphism(sample_multimatrix):
    alg = sample_multimatrix
    rng = np.random.default_rng(0)
    rho = la.herm_power(random_complex(rng, 7, 7), 1.0) + np.eye(7)
    rho = alg.project(rho)
    rho = (rho + la.dagger(rho)) / 2.0
    phi = ag.StateData(density=rho / np.trace(rho).real)
    g = ag.gns(alg, phi)
    assert all(v < 1e-9 for v in g.residuals.values())
    x, y = alg.element(random_complex(rng, alg.dim)), alg.element(random_complex(rng, alg.dim))
    np.testing.assert_allclose(g.rep(x @ y), g.rep(x) @ g.rep(y), atol=1e-8)
    np.testing.assert_allclose(g.rep(la.dagger(x)), la.dagger(g.rep(x)), atol=1e-8)
    # cyclicity: {rep(x)Ω} spans the space
    cols = np.stack([g.rep(b) @ g.cyclic for b in alg.onb()], axis=1)
    assert np.linalg.matrix_rank(cols) == g.space_dim
    # J is an antiunitary involution
    v = random_complex(rng, g.space_dim)
    np.testing.assert_allclose(g.conj_j(g.conj_j(v)), v, atol=1e-9)
    np.testing.assert_allclose(np.linalg.norm(g.conj_j(v)), np.linalg.norm(v), atol=1e-9)


def test_modular_flow_is_state_preserving_automorphism(sample_multimatrix):
    alg = sample_multimatrix
    rng = np.random.default_rng(1)
    rho = alg.project(np.diag(np.linspace(1.0, 2.0, 7)).astype(complex))
    rho = (rho + la.dagger(rho)) / 2.0
    phi = ag.StateData(density=rho / np.trace(rho).real)
    flow = ag.modular_flow(phi, alg, 0.7)
    x = alg.element(random_complex(rng, alg.dim))
    y = alg.element(random_complex(rng, alg.dim))
    np.testing.assert_allclose(flow(x @ y), flow(x) @ flow(y), atol=1e-8)
    assert alg.residual(flow(x)) < 1e-8
    assert abs(phi.value(flow(x)) - phi.value(x)) < 1e-8


def test_conditional_expectation_properties(sample_multimatrix):
    big = sample_multimatrix
    center = ag.from_span(
        [p.astype(complex) for p in big.central_projections], 7
    )
    phi = ag.StateData(density=np.eye(7, dtype=complex) / 7.0)
    exp = ag.conditional_expectation(big, center, phi)
    rep = exp.validate()
    assert rep["idempotent"] < 1e-9
    assert rep["unital"] < 1e-9
    assert rep["bimodule"] < 1e-9
    assert rep["min_positivity_eig"] > -1e-10
    assert rep.get("state_preserving", 0.0) < 1e-9


def test_intersect_of_algebras():
    diag = ag.from_span([np.diag(r).astype(complex) for r in np.eye(3)], 3)
    full = ag.from_span(matrix_unit_basis(3), 3)
    meet = ag.intersect(full, diag)
    assert meet.dim == 3
    scalars = ag.from_span([np.eye(3, dtype=complex)], 3)
    assert ag.intersect(diag, scalars).dim == 1
