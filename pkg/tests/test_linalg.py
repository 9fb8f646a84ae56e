"""Dense linear-algebra helpers: kernels, spans, powers, tensor-leg maps."""

import numpy as np
import pytest

from kacgalois import linalg as la


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
@pytest.mark.parametrize("m,n,rank", [(6, 4, 2), (5, 8, 3), (7, 7, 0), (9, 5, 5)])
def test_null_space_matches_constructed_rank(seed, m, n, rank):
    rng = np.random.default_rng(seed)
    a = random_complex(rng, m, rank) @ random_complex(rng, rank, n) if rank else np.zeros((m, n))
    ns = la.null_space(a)
    assert ns.shape == (n, n - rank)
    if ns.shape[1]:
        np.testing.assert_allclose(a @ ns, 0, atol=1e-10)
        np.testing.assert_allclose(la.dagger(ns) @ ns, np.eye(n - rank), atol=1e-10)


@pytest.mark.parametrize("seed", [0, 5])
def test_null_space_survives_svd_nonconvergence(monkeypatch, seed):
    # Regression: when the SVD driver gives up, the Gram-matrix fallback must
    # still find the full kernel despite its squared (hence tiny) spectrum.
    rng = np.random.default_rng(seed)
    m, n, rank = 8, 12, 5
    a = random_complex(rng, m, rank) @ random_complex(rng, rank, n)

    real_svd = np.linalg.svd

    def raising_svd(*args, **kwargs):
        if kwargs.get("compute_uv", True):
            raise np.linalg.LinAlgError("SVD did not converge")
        return real_svd(*args, **kwargs)

    monkeypatch.setattr(np.linalg, "svd", raising_svd)
    ns = la.null_space(a)
    assert ns.shape[1] == n - rank
    np.testing.assert_allclose(a @ ns, 0, atol=1e-8)


def test_null_space_of_scaled_matrix_keeps_relative_cutoff():
    rng = np.random.default_rng(11)
    a = random_complex(rng, 6, 3) @ random_complex(rng, 3, 9)
    for scale in (1e-8, 1.0, 1e8):
        assert la.null_space(scale * a).shape[1] == 6


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_orthonormalize_spans_the_same_space(seed):
    rng = np.random.default_rng(seed)
    mats = [random_complex(rng, 4, 4) for _ in range(3)]
    mats.append(mats[0] + 2.0 * mats[1])  # dependent
    onb = la.orthonormalize(mats)
    assert len(onb) == 3
    gram = np.array([[la.hs_inner(x, y) for y in onb] for x in onb])
    np.testing.assert_allclose(gram, np.eye(3), atol=1e-10)
    for m in mats:
        assert la.span_residual(m, onb) < 1e-9


@pytest.mark.parametrize("seed", [3, 4])
def test_intersect_spans_recovers_common_subspace(seed):
    rng = np.random.default_rng(seed)
    common = [random_complex(rng, 5, 5) for _ in range(2)]
    left = la.orthonormalize(common + [random_complex(rng, 5, 5)])
    right = la.orthonormalize(common + [random_complex(rng, 5, 5)])
    meet = la.intersect_spans(left, right)
    assert len(meet) == 2
    for m in meet:
        assert la.span_residual(m, la.orthonormalize(common)) < 1e-8


def test_span_projector_and_distance():
    rng = np.random.default_rng(7)
    onb = la.orthonormalize([random_complex(rng, 3, 3) for _ in range(2)])
    p = la.span_projector(onb)
    np.testing.assert_allclose(p @ p, p, atol=1e-10)
    np.testing.assert_allclose(p, la.dagger(p), atol=1e-10)
    assert la.span_distance(onb, onb) < 1e-12
    x = random_complex(rng, 3, 3)
    proj = la.project_span(x, onb)
    # The projection is the closest span element: the residual is orthogonal.
    for b in onb:
        assert abs(la.hs_inner(b, x - proj)) < 1e-10


@pytest.mark.parametrize("seed", [0, 1])
def test_herm_power_laws(seed):
    rng = np.random.default_rng(seed)
    x = random_complex(rng, 4, 4)
    h = x @ la.dagger(x) + 0.1 * np.eye(4)
    root = la.herm_power(h, 0.5)
    np.testing.assert_allclose(root @ root, h, atol=1e-9)
    np.testing.assert_allclose(la.herm_power(h, 1.0), h, atol=1e-10)
    np.testing.assert_allclose(la.herm_power(h, -1.0) @ h, np.eye(4), atol=1e-9)
    u = la.herm_power(h, 0.7j)
    np.testing.assert_allclose(la.dagger(u) @ u, np.eye(4), atol=1e-9)


def test_vec_unvec_round_trip():
    rng = np.random.default_rng(2)
    x = random_complex(rng, 3, 5)
    np.testing.assert_allclose(la.unvec(la.vec(x), (3, 5)), x)


def test_flip_operator_swaps_tensor_legs():
    rng = np.random.default_rng(4)
    a = random_complex(rng, 3, 3)
    b = random_complex(rng, 2, 2)
    f = la.flip_operator(3, 2)
    np.testing.assert_allclose(f @ np.kron(a, b), np.kron(b, a) @ f, atol=1e-12)
    f_sq = la.flip_operator(3)
    np.testing.assert_allclose(f_sq @ f_sq, np.eye(9), atol=1e-12)


def test_embed_leg_places_factor():
    rng = np.random.default_rng(9)
    x = random_complex(rng, 2, 2)
    dims = [3, 2, 2]
    emb = la.embed_leg(x, dims, 1)
    expect = np.kron(np.kron(np.eye(3), x), np.eye(2))
    np.testing.assert_allclose(emb, expect, atol=1e-12)


def test_solve_gram_reconstructs_coefficients():
    rng = np.random.default_rng(12)
    basis = [random_complex(rng, 3, 3) for _ in range(4)]
    coeffs = random_complex(rng, 4)
    target = sum(c * b for c, b in zip(coeffs, basis))
    solved = la.solve_gram(basis, target)
    recon = sum(c * b for c, b in zip(solved, basis))
    np.testing.assert_allclose(recon, target, atol=1e-9)


def test_matrix_json_round_trip():
    rng = np.random.default_rng(3)
    x = random_complex(rng, 4, 4)
    np.testing.assert_allclose(la.json_to_mat(la.mat_to_json(x)), x)
    v = random_complex(rng, 6)
    np.testing.assert_allclose(la.json_to_vec(la.vec_to_json(v)), v)
