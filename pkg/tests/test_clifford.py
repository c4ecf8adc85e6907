from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from tensordirac.clifford import (
    DIRAC_TO_CHIRAL,
    GammaSet,
    Similarity,
    alpha_anticommutator_metric,
    alpha_from_gamma,
    build_gamma_for_metric,
    check_anticommutation,
    chiral_representation,
    dirac_representation,
    index_transform,
    random_similarity,
    similarity_transform,
    solve_intertwiner,
    tensor_transform,
)
from tensordirac.errors import (
    DimensionNotOne,
    NoEtaFactorization,
    NoIntertwiner,
    NotGaussian,
    RelaxedCondition,
    SingularMap,
    SingularS,
)
from tensordirac.metric import (
    ETA,
    IDENTITY_MAP,
    AffineMap,
    eta_to_g_map,
    random_admissible_metric,
    random_affine_map,
    validate_metric,
)

# Dirac matrices written out entry by entry
G0 = np.diag([1, 1, -1, -1]).astype(complex)
G1 = np.array([[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]], dtype=complex)
G2 = np.array([[0, 0, 0, -1j], [0, 0, 1j, 0], [0, 1j, 0, 0], [-1j, 0, 0, 0]], dtype=complex)
G3 = np.array([[0, 0, 1, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, 1, 0, 0]], dtype=complex)


def test_dirac_matrices_explicit():
    gs = dirac_representation()
    for got, want in zip(gs.gammas, (G0, G1, G2, G3)):
        np.testing.assert_array_equal(got, want)


@pytest.mark.parametrize("factory", [dirac_representation, chiral_representation])
def test_representations_anticommute(factory):
    gs = factory()
    assert check_anticommutation(gs) == 0.0
    np.testing.assert_array_equal(gs.gammas[0] @ gs.gammas[0], np.eye(4))
    np.testing.assert_array_equal(gs.gammas[1] @ gs.gammas[1], -np.eye(4))


def test_chiral_gamma0_offdiagonal():
    g0 = chiral_representation().gammas[0]
    assert np.all(np.diag(g0) == 0)
    assert abs(np.linalg.det(g0)) == pytest.approx(1.0)


def test_gammaset_rejects_bad_shape():
    with pytest.raises(ValueError):
        GammaSet(np.zeros((3, 4, 4)), dirac_representation().metric)


def test_dirac_to_chiral_similarity():
    s = Similarity.from_matrix(DIRAC_TO_CHIRAL)
    mapped = similarity_transform(dirac_representation(), s)
    np.testing.assert_allclose(mapped.gammas, chiral_representation().gammas, atol=1e-15)


def test_intertwiner_self_is_identity():
    gs = dirac_representation()
    it = solve_intertwiner(gs, gs)
    assert it.dimension == 1
    np.testing.assert_allclose(it.similarity.S, np.eye(4), atol=1e-12)


def test_intertwiner_dirac_chiral():
    it = solve_intertwiner(dirac_representation(), chiral_representation())
    assert it.dimension == 1
    assert it.residual <= 1e-12
    ratio = it.similarity.S @ np.linalg.inv(DIRAC_TO_CHIRAL)
    np.testing.assert_allclose(ratio, ratio[0, 0] * np.eye(4), atol=1e-12)


@pytest.mark.parametrize("s", range(5))
def test_intertwiner_recovers_random_similarity(s):
    s0 = random_similarity(s)
    gs = dirac_representation()
    it = solve_intertwiner(gs, similarity_transform(gs, s0))
    ratio = it.similarity.S @ s0.S_inv
    np.testing.assert_allclose(ratio, ratio[0, 0] * np.eye(4), atol=1e-10)


def test_intertwiner_rejects_mismatched_sets():
    a = dirac_representation()
    b = GammaSet(np.array([G0, G1, G2, -G3 @ G0]), a.metric)
    with pytest.raises((NoIntertwiner, DimensionNotOne)):
        solve_intertwiner(a, b)


def test_build_for_minkowski_is_identity():
    gs = build_gamma_for_metric(validate_metric(ETA.ravel()))
    np.testing.assert_array_equal(gs.gammas, dirac_representation().gammas)


def test_build_for_scaled_time():
    m = validate_metric(np.diag([4.0, -1, -1, -1]).ravel())
    gs = build_gamma_for_metric(m)
    np.testing.assert_allclose(gs.gammas[0], G0 / 2, atol=1e-15)
    np.testing.assert_allclose(gs.gammas[1:], np.array([G1, G2, G3]), atol=1e-15)
    assert check_anticommutation(gs) <= 1e-13


@pytest.mark.parametrize("scheme", ["index", "tensor"])
@pytest.mark.parametrize("s", range(10))
def test_build_general_metric(scheme, s):
    m = random_admissible_metric(s)
    gs = build_gamma_for_metric(m, scheme=scheme)
    assert check_anticommutation(gs) <= 1e-12
    assert abs(np.linalg.det(gs.gammas[0])) > 1e-6


def test_build_inadmissible_needs_factor():
    m = validate_metric(np.diag([-1.0, 1, -1, -1]).ravel())
    with pytest.raises(NoEtaFactorization):
        build_gamma_for_metric(m)
    swap = np.eye(4)[[1, 0, 2, 3]]
    gs = build_gamma_for_metric(m, factor=swap)
    assert check_anticommutation(gs) == 0.0


def test_build_rejects_wrong_factor():
    m = random_admissible_metric(0)
    with pytest.raises(NoEtaFactorization):
        build_gamma_for_metric(m, factor=np.eye(4))


def test_tensor_transform_identity():
    gs = dirac_representation()
    np.testing.assert_allclose(tensor_transform(gs, IDENTITY_MAP).gammas, gs.gammas, atol=1e-15)


@seed(7)
@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 10_000))
def test_tensor_transform_covariance(ms, ls):
    gs = build_gamma_for_metric(random_admissible_metric(ms))
    out = tensor_transform(gs, random_affine_map(ls, orientation=0))
    assert check_anticommutation(out) <= 1e-11


def test_tensor_transform_composes():
    gs = build_gamma_for_metric(random_admissible_metric(2))
    a, b = random_affine_map(3), random_affine_map(4)
    twice = tensor_transform(tensor_transform(gs, a), b)
    once = tensor_transform(gs, b.compose(a))
    np.testing.assert_allclose(twice.gammas, once.gammas, atol=1e-11)


def test_schemes_related_by_map():
    m = random_admissible_metric(5)
    amap = eta_to_g_map(m)
    idx = build_gamma_for_metric(m, scheme="index")
    ten = build_gamma_for_metric(m, scheme="tensor")
    conj = np.einsum("ab,mbc,cd->mad", amap.M, idx.gammas, amap.L)
    np.testing.assert_allclose(conj, ten.gammas, atol=1e-12)


def test_index_transform_matches_constructor():
    m = random_admissible_metric(6)
    amap = eta_to_g_map(m).inverse()
    out = index_transform(dirac_representation(), amap)
    np.testing.assert_allclose(out.metric.g_inv, m.g_inv, atol=1e-12)


def test_similarity_preserves_anticommutation():
    for s in range(5):
        sim = random_similarity(s)
        assert check_anticommutation(similarity_transform(chiral_representation(), sim)) <= 1e-13 * sim.condition**2


def test_similarity_rejects_inconsistent_inverse():
    with pytest.raises(SingularS):
        similarity_transform(dirac_representation(), Similarity(np.eye(4), 2 * np.eye(4), 1.0))


def test_alpha_dirac():
    als = alpha_from_gamma(dirac_representation())
    np.testing.assert_array_equal(als.alphas[0], G0)
    np.testing.assert_array_equal(als.alphas[1], G0 @ G1)
    for a in als.alphas:
        np.testing.assert_array_equal(a, a.conj().T)


def test_alpha_scaled_time():
    gs = build_gamma_for_metric(validate_metric(np.diag([4.0, -1, -1, -1]).ravel()))
    als = alpha_from_gamma(gs)
    np.testing.assert_allclose(als.alphas[0], 4 * gs.gammas[0], atol=1e-15)


@pytest.mark.parametrize("s", range(10))
def test_alpha0_inverts_gamma0(s):
    gs = build_gamma_for_metric(random_admissible_metric(s), scheme="tensor")
    als = alpha_from_gamma(gs)
    np.testing.assert_allclose(als.alphas[0] @ gs.gammas[0], np.eye(4), atol=1e-13)


def test_alpha_metric_minkowski():
    am = alpha_anticommutator_metric(alpha_from_gamma(dirac_representation()))
    np.testing.assert_array_equal(am.h, np.eye(4))
    assert am.residual == 0.0
    assert am.positive_definite


def test_alpha_metric_scaled_time():
    gs = build_gamma_for_metric(validate_metric(np.diag([4.0, -1, -1, -1]).ravel()))
    am = alpha_anticommutator_metric(alpha_from_gamma(gs))
    np.testing.assert_allclose(am.h, 4 * np.eye(4), atol=1e-14)
    assert am.residual <= 1e-12


@pytest.mark.parametrize("s", range(10))
def test_alpha_metric_gaussian(s):
    m = random_admissible_metric(s, gaussian=True)
    am = alpha_anticommutator_metric(alpha_from_gamma(build_gamma_for_metric(m)))
    assert am.residual <= 1e-12
    assert am.positive_definite


@pytest.mark.parametrize("s", range(10))
def test_alpha_metric_rejects_non_gaussian(s):
    m = random_admissible_metric(s)
    gs = build_gamma_for_metric(m, scheme="tensor")
    with pytest.raises(NotGaussian) as info:
        alpha_anticommutator_metric(alpha_from_gamma(gs))
    assert info.value.expected_residual <= 1e-12
    # mixed anticommutators are far from any multiple of the identity
    for raw in info.value.raw:
        assert np.max(np.abs(raw - np.trace(raw) / 4 * np.eye(4))) > 1e-3


def test_random_similarity_deterministic():
    a, b = random_similarity(0), random_similarity(0)
    np.testing.assert_array_equal(a.S, b.S)


@pytest.mark.parametrize("s", range(100))
def test_random_similarity_bounds(s):
    sim = random_similarity(s, max_condition=100)
    assert np.linalg.cond(sim.S) <= 100
    assert np.max(np.abs(sim.S @ sim.S_inv - np.eye(4))) <= 1e-12


def test_random_similarity_relaxes_with_warning():
    with pytest.warns(RelaxedCondition):
        sim = random_similarity(0, max_condition=1.0001, max_tries=5)
    assert sim.condition > 1.0001


def test_tensor_transform_rejects_inconsistent_map():
    with pytest.raises(SingularMap):
        tensor_transform(dirac_representation(), AffineMap(np.eye(4), 2 * np.eye(4)))
