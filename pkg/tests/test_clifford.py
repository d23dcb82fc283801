import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinc_lab.clifford import (
    Spinor,
    TwoForm,
    build_clifford_rep,
    charge_conjugation,
    clifford_mul,
    clifford_residuals,
    grading_conjugate,
    hermitian,
    kahler_nonnegativity_eigs,
    kahler_splitting,
    restrict_clifford,
    two_form_action,
)
from spinc_lab.errors import ExcludedRegimeError

reals = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_relations_and_skew_adjointness(n):
    res = clifford_residuals(build_clifford_rep(n))
    assert res["clifford"] < 1e-12
    assert res["skew_adjoint"] < 1e-12


@pytest.mark.parametrize("n", [2, 3, 4])
def test_relations_brute_force(n):
    rep = build_clifford_rep(n)
    eye = rep.identity
    for i, j in itertools.product(range(n), repeat=2):
        anti = rep.gammas[i] @ rep.gammas[j] + rep.gammas[j] @ rep.gammas[i]
        np.testing.assert_allclose(anti, -2.0 * (i == j) * eye, atol=1e-14)


@pytest.mark.parametrize("n, dim", [(2, 2), (3, 2), (4, 4)])
def test_spinor_dimension(n, dim):
    assert build_clifford_rep(n).dim == dim


def test_volume_element_conventions():
    # odd n: the volume element is +Id on the chosen rep
    np.testing.assert_allclose(build_clifford_rep(3).volume_element(), np.eye(2), atol=1e-14)
    for n in (2, 4):
        w = build_clifford_rep(n).volume_element()
        np.testing.assert_allclose(w @ w, np.eye(w.shape[0]), atol=1e-14)
        np.testing.assert_allclose(w, w.conj().T, atol=1e-14)
        assert abs(np.trace(w)) < 1e-14  # balanced half-spinor splitting


@pytest.mark.parametrize("n", [1, 5, 0])
def test_unsupported_dimension(n):
    with pytest.raises(ValueError, match="2, 3, 4"):
        build_clifford_rep(n)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.data())
def test_vector_square_is_minus_norm(n, data):
    v = np.array(data.draw(st.lists(reals, min_size=n, max_size=n)))
    rep = build_clifford_rep(n)
    m = rep.vector(v)
    np.testing.assert_allclose(m @ m, -(v @ v) * rep.identity, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.data())
def test_hermitian_product_invariance(n, data):
    rep = build_clifford_rep(n)
    v = np.array(data.draw(st.lists(reals, min_size=n, max_size=n)))
    z = data.draw(st.lists(reals, min_size=2 * rep.dim, max_size=2 * rep.dim))
    w = data.draw(st.lists(reals, min_size=2 * rep.dim, max_size=2 * rep.dim))
    psi = Spinor(np.array(z[::2]) + 1j * np.array(z[1::2]), rep)
    phi = Spinor(np.array(w[::2]) + 1j * np.array(w[1::2]), rep)
    # <X.psi, phi> = -<psi, X.phi>
    lhs = clifford_mul(v, psi).inner(phi)
    rhs = -psi.inner(clifford_mul(v, phi))
    assert abs(lhs - rhs) < 1e-10
    # Re<X.psi, psi> = 0
    assert abs(clifford_mul(v, psi).inner(psi).real) < 1e-10


def test_hermitian_is_linear_in_first_slot():
    u, v = np.array([1, 1j]), np.array([2, 0])
    assert hermitian(1j * u, v) == pytest.approx(1j * hermitian(u, v))


def test_two_form_action_matches_sum_over_pairs():
    rep = build_clifford_rep(3)
    omega = TwoForm.from_components(3, {(0, 1): 0.7, (1, 2): -1.3})
    psi = Spinor(np.array([0.3 + 0.1j, -0.5j]), rep)
    g = rep.gammas
    expected = (0.7 * g[0] @ g[1] - 1.3 * g[1] @ g[2]) @ psi.components
    np.testing.assert_allclose(two_form_action(omega, psi).components, expected, atol=1e-14)


def test_two_form_rejects_symmetric():
    with pytest.raises(ValueError):
        TwoForm(np.eye(3))


def test_kahler_nonnegativity():
    eigs = kahler_nonnegativity_eigs(4.0)
    np.testing.assert_allclose(eigs, [0, 4, 4, 8], atol=1e-12)
    assert eigs.min() >= -1e-12
    with pytest.raises(ExcludedRegimeError):
        kahler_nonnegativity_eigs(-1.0)


def test_kahler_splitting_ranks():
    parts = kahler_splitting(2)
    assert [p[2].shape[1] for p in parts] == [1, 2, 1]
    assert [p[1] for p in parts] == [2j, 0j, -2j]


def test_charge_conjugation_commutes_with_real_clifford():
    rep = build_clifford_rep(3)
    psi = Spinor(np.array([0.2 - 0.4j, 1.1 + 0.3j]), rep)
    v = np.array([0.3, -1.0, 2.0])
    lhs = charge_conjugation(clifford_mul(v, psi)).components
    rhs = clifford_mul(v, charge_conjugation(psi)).components
    np.testing.assert_allclose(lhs, rhs, atol=1e-14)
    jj = charge_conjugation(charge_conjugation(psi)).components
    np.testing.assert_allclose(jj, -psi.components, atol=1e-14)


def test_grading_conjugate_anticommutes_with_vectors():
    rep = build_clifford_rep(2)
    psi = Spinor(np.array([1.0, 2j]), rep)
    v = np.array([0.4, -0.9])
    lhs = grading_conjugate(clifford_mul(v, psi)).components
    rhs = -clifford_mul(v, grading_conjugate(psi)).components
    np.testing.assert_allclose(lhs, rhs, atol=1e-14)


@pytest.mark.parametrize("n, normal", [(3, 2), (4, 3), (4, np.array([0.6, 0.0, 0.8, 0.0]))])
def test_restriction_is_clifford_module(n, normal):
    induced = restrict_clifford(build_clifford_rep(n), normal)
    assert len(induced.generators()) == n - 1
    assert induced.residual() < 1e-12


def test_restriction_rejects_normal_direction():
    induced = restrict_clifford(build_clifford_rep(4), 3)
    with pytest.raises(ValueError):
        induced.matrix([0, 0, 0, 1.0])
    with pytest.raises(ValueError):
        restrict_clifford(build_clifford_rep(4), np.array([1.0, 1.0, 0, 0]))


def test_json_layout():
    rows = build_clifford_rep(2).to_json()
    assert len(rows) == 2
    assert all(len(m) == 2 and len(m[0]) == 2 and len(m[0][0]) == 2 for m in rows)
