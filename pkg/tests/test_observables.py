from __future__ import annotations

import warnings

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tensordirac.clifford import (
    alpha_from_gamma,
    build_gamma_for_metric,
    chiral_representation,
    dirac_representation,
    random_similarity,
    similarity_transform,
    tensor_transform,
)
from tensordirac.errors import ImaginaryResidue, WrongSignature, ZeroScalar
from tensordirac.hermitize import solve_hermitizing, tensor_transport_A, transport_A, transport_B
from tensordirac.metric import Metric, random_admissible_metric, random_affine_map
from tensordirac.observables import (
    charge_conjugation_residual,
    current,
    gamma5,
    hestenes_fields,
    inner_a,
    inner_b,
    levi_civita_tensor,
    solve_charge_conjugation,
    tau,
)

G0 = np.diag([1.0, 1, -1, -1]).astype(complex)
ANTI_IDENTITY = np.block([[np.zeros((2, 2)), np.eye(2)], [np.eye(2), np.zeros((2, 2))]])

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
spinors = arrays(np.float64, (8,), elements=finite).map(lambda x: x[:4] + 1j * x[4:])


def _rand_spinor(rng):
    return rng.normal(size=4) + 1j * rng.normal(size=4)


@pytest.mark.parametrize("u, value", [((1, 0, 0, 0), 1.0), ((0, 0, 1, 0), -1.0)])
def test_inner_a_basis(u, value):
    assert inner_a(u, u, G0) == value


def test_inner_b_identity_is_dot():
    rng = np.random.default_rng(0)
    u, v = _rand_spinor(rng), _rand_spinor(rng)
    assert inner_b(u, v, np.eye(4)) == pytest.approx(np.vdot(u, v))


@seed(99)
@settings(max_examples=50, deadline=None)
@given(spinors, spinors)
def test_gammas_hermitian_under_a_product(u, v):
    gs = build_gamma_for_metric(random_admissible_metric(1), scheme="tensor")
    A = solve_hermitizing(gs).A
    assert inner_a(u, v, A) == pytest.approx(np.conj(inner_a(v, u, A)), abs=1e-9)
    for g in gs.gammas:
        assert inner_a(g @ u, v, A) == pytest.approx(inner_a(u, g @ v, A), abs=1e-9)


@pytest.mark.parametrize("s", range(5))
def test_alphas_hermitian_under_b_product(s):
    gs = build_gamma_for_metric(random_admissible_metric(s))
    B = solve_hermitizing(gs).B
    rng = np.random.default_rng(s)
    u, v = _rand_spinor(rng), _rand_spinor(rng)
    for a in alpha_from_gamma(gs).alphas:
        assert inner_b(a @ u, v, B) == pytest.approx(inner_b(u, a @ v, B), abs=1e-10)


def test_b_product_positive():
    rng = np.random.default_rng(1)
    B = solve_hermitizing(build_gamma_for_metric(random_admissible_metric(2), scheme="tensor")).B
    values = [inner_b(u, u, B).real for u in (_rand_spinor(rng) for _ in range(1000))]
    assert min(values) > 0


def test_rest_current():
    j = current([1, 0, 0, 0], dirac_representation(), G0)
    np.testing.assert_array_equal(j.j, [1.0, 0, 0, 0])


@pytest.mark.parametrize("s", range(10))
def test_current_real_and_density(s):
    gs = build_gamma_for_metric(random_admissible_metric(s), scheme="tensor" if s % 2 else "index")
    pair = solve_hermitizing(gs)
    psi = _rand_spinor(np.random.default_rng(s))
    j = current(psi, gs, pair.A)
    assert j.imag_residue <= 1e-12
    assert j.j[0] == pytest.approx(inner_b(psi, psi, pair.B).real, rel=1e-12)
    assert j.j[0] > 0


def test_current_rejects_wrong_a():
    with pytest.raises(ImaginaryResidue):
        current([1, 1j, 0.5, 0], dirac_representation(), np.diag([1.0, 2, 3, 4]) @ dirac_representation().gammas[1])


@pytest.mark.parametrize("s", range(20))
def test_current_similarity_invariance(s):
    gs = build_gamma_for_metric(random_admissible_metric(s))
    A = solve_hermitizing(gs).A
    sim = random_similarity(500 + s)
    twin = similarity_transform(gs, sim)
    rng = np.random.default_rng(s)
    psi, phi = _rand_spinor(rng), _rand_spinor(rng)
    j = current(psi, gs, A).j
    j_t = current(sim.S @ psi, twin, transport_A(A, sim)).j
    assert np.max(np.abs(j - j_t)) <= 1e-10 * sim.condition * max(1.0, np.max(np.abs(j)))
    B = solve_hermitizing(gs).B
    ip = inner_b(psi, phi, B)
    ip_t = inner_b(sim.S @ psi, sim.S @ phi, transport_B(B, sim))
    assert abs(ip - ip_t) <= 1e-10 * sim.condition * max(1.0, abs(ip))


def test_current_json_labels():
    data = current([1, 0, 0, 0], dirac_representation(), G0).to_json()
    assert data["labels"] == ["j0", "j1", "j2", "j3"]


def test_charge_conjugation_dirac():
    cc = solve_charge_conjugation(dirac_representation())
    assert cc.solution_dim == 1
    assert cc.residual <= 1e-12
    assert np.max(np.abs(cc.C)) == 1.0


@pytest.mark.parametrize("s", range(5))
def test_charge_conjugation_similarity(s):
    gs = chiral_representation()
    C = solve_charge_conjugation(gs).C
    sim = random_similarity(s)
    twin = similarity_transform(gs, sim)
    transported = sim.S @ C @ np.linalg.inv(sim.S.conj())
    assert charge_conjugation_residual(transported, twin.gammas) <= 1e-11 * sim.condition**2
    fresh = solve_charge_conjugation(twin).C
    ratio = fresh.ravel() @ transported.ravel().conj() / np.vdot(transported, transported)
    np.testing.assert_allclose(fresh, ratio * transported, atol=1e-9)


@pytest.mark.parametrize("s", range(5))
def test_charge_conjugation_commutes_with_coordinates(s):
    gs = build_gamma_for_metric(random_admissible_metric(s))
    cc = solve_charge_conjugation(gs, amap=random_affine_map(s))
    assert cc.transform_residual <= 1e-11


def test_levi_civita_minkowski():
    e = levi_civita_tensor(np.diag([1.0, -1, -1, -1]))
    assert e[0, 1, 2, 3] == 1.0 and e[1, 0, 2, 3] == -1.0 and e[0, 0, 2, 3] == 0.0


def test_gamma5_dirac():
    gs = dirac_representation()
    g5 = gamma5(gs)
    np.testing.assert_allclose(g5, ANTI_IDENTITY, atol=1e-15)
    g = gs.gammas
    np.testing.assert_allclose(g5, 1j * g[0] @ g[1] @ g[2] @ g[3], atol=1e-15)


@pytest.mark.parametrize("s", range(10))
def test_gamma5_general(s):
    gs = build_gamma_for_metric(random_admissible_metric(s), scheme="tensor")
    g5 = gamma5(gs)
    np.testing.assert_allclose(g5 @ g5, np.eye(4), atol=1e-12)
    for g in gs.gammas:
        assert np.max(np.abs(g5 @ g + g @ g5)) <= 1e-12


@pytest.mark.parametrize("s", range(10))
def test_gamma5_tensor_covariance(s):
    gs = build_gamma_for_metric(random_admissible_metric(s))
    amap = random_affine_map(s, orientation=1)
    primed = gamma5(tensor_transform(gs, amap))
    np.testing.assert_allclose(primed, amap.L @ gamma5(gs) @ amap.M, atol=1e-11)


def test_gamma5_rejects_positive_determinant():
    g = np.diag([1.0, 1, -1, -1])
    gs = dirac_representation()
    with pytest.raises(WrongSignature):
        gamma5(type(gs)(gs.gammas, Metric(g, g)))


def _setup(s):
    gs = build_gamma_for_metric(random_admissible_metric(s), scheme="tensor" if s % 2 else "index")
    A = solve_hermitizing(gs).A
    C = solve_charge_conjugation(gs).C
    return gs, A, C, gamma5(gs)


@pytest.mark.parametrize("s", range(10))
def test_hestenes_j0_is_current(s):
    gs, A, C, g5 = _setup(s)
    psi = _rand_spinor(np.random.default_rng(s))
    f = hestenes_fields(psi, gs, A, C, g5)
    np.testing.assert_allclose(f.J[0], current(psi, gs, A).j, atol=1e-12 * np.max(np.abs(f.J)))
    assert f.tetrad_defined
    np.testing.assert_allclose(f.e, f.J / abs(f.s), rtol=1e-15)


@pytest.mark.parametrize("s", range(20))
def test_hestenes_covariance(s):
    gs, A, C, g5 = _setup(s)
    amap = random_affine_map(1000 + s, orientation=1)
    psi = _rand_spinor(np.random.default_rng(s))
    f = hestenes_fields(psi, gs, A, C, g5)
    primed = tensor_transform(gs, amap)
    f_p = hestenes_fields(amap.L @ psi, primed, tensor_transport_A(A, amap), amap.L @ C @ amap.M, gamma5(primed))
    scale = max(1.0, np.max(np.abs(f.J)))
    assert abs(f_p.s - f.s) <= 1e-10 * scale
    np.testing.assert_allclose(f_p.J, f.J @ amap.L.T, atol=1e-10 * scale)


@pytest.mark.parametrize("k", range(4))
def test_tau_commutes_with_real_maps(k):
    gs, A, C, g5 = _setup(3)
    amap = random_affine_map(3)
    psi = _rand_spinor(np.random.default_rng(7))
    primed = tensor_transform(gs, amap)
    lhs = tau(k, amap.L @ psi, amap.L @ C @ amap.M, gamma5(primed))
    np.testing.assert_allclose(lhs, amap.L @ tau(k, psi, C, g5), atol=1e-11)


def test_hestenes_scalar_imaginary_part():
    # (psi, gamma5 psi) is purely imaginary under a hermitizing product
    gs, A, C, g5 = _setup(0)
    for s in range(10):
        psi = _rand_spinor(np.random.default_rng(s))
        assert abs(inner_a(psi, g5 @ psi, A).real) <= 1e-12 * np.vdot(psi, psi).real * np.max(np.abs(A))


def test_hestenes_zero_scalar():
    gs, A, C, g5 = _setup(0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        f = hestenes_fields(np.zeros(4), gs, A, C, g5)
    assert not f.tetrad_defined
    with pytest.raises(ZeroScalar):
        hestenes_fields(np.zeros(4), gs, A, C, g5, strict=True)


def test_hestenes_json():
    gs, A, C, g5 = _setup(1)
    data = hestenes_fields([1, 0, 0, 0], gs, A, C, g5).to_json()
    assert len(data["labels"]) == len(data["values"])
    assert data["labels"][:2] == ["s.re", "s.im"]
