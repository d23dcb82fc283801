import math
from fractions import Fraction

import numpy as np
import pytest

from oracles import laplacian_rank_dimension
from spinc_lab import berger
from spinc_lab.berger import (
    FRAME_X1,
    FRAME_X2,
    HOPF_FIELD,
    apply_field,
    berger_dirac_spectrum,
    first_positive_eigenvalue,
    harmonic_basis,
    hopf_operator,
    invariant_dirac_matrix,
    invariant_dirac_spectrum,
    laplacian,
    sphere_moment,
    tanno_eigenvalues,
    tanno_operator,
    vertical_weights,
)
from spinc_lab.errors import ExcludedRegimeError

KS = range(7)


def gamma_moment(m):
    # mean of x^m on S^3 from the Gaussian-integral formula
    if any(e % 2 for e in m):
        return 0.0
    num = math.prod(math.gamma((e + 1) / 2) for e in m) / math.gamma(0.5) ** 4
    return num * math.gamma(2) / math.gamma((sum(m) + 4) / 2)


@pytest.mark.parametrize("m", [(0, 0, 0, 0), (2, 0, 0, 0), (2, 2, 0, 0), (4, 0, 2, 0), (2, 2, 2, 2), (1, 1, 0, 0)])
def test_sphere_moments(m):
    assert float(sphere_moment(m)) == pytest.approx(gamma_moment(m), rel=1e-14)


@pytest.mark.parametrize("k", KS)
def test_harmonic_dimension(k):
    space = harmonic_basis(k)
    assert space.dim == (k + 1) ** 2 == laplacian_rank_dimension(k)
    assert np.linalg.matrix_rank(space.coefficient_matrix()) == space.dim


@pytest.mark.parametrize("k", KS)
def test_basis_is_exactly_harmonic(k):
    for h in harmonic_basis(k).basis:
        assert laplacian(h) == {}
        assert all(isinstance(c, Fraction) for c in h.values())


def test_ceiling(monkeypatch):
    with pytest.raises(ValueError, match="SPINC_LAB_KMAX_CEILING"):
        harmonic_basis(9)
    monkeypatch.setenv("SPINC_LAB_KMAX_CEILING", "3")
    with pytest.raises(ValueError):
        harmonic_basis(4)
    with pytest.raises(ValueError):
        berger_dirac_spectrum(4, 0.3)


def commutator(a, b, poly):
    ab = apply_field(a, apply_field(b, poly))
    ba = apply_field(b, apply_field(a, poly))
    keys = set(ab) | set(ba)
    return {m: ab.get(m, 0) - ba.get(m, 0) for m in keys if ab.get(m, 0) != ba.get(m, 0)}


@pytest.mark.parametrize("a, b, c", [(FRAME_X1, FRAME_X2, 2 * HOPF_FIELD),
                                     (FRAME_X2, HOPF_FIELD, 2 * FRAME_X1),
                                     (HOPF_FIELD, FRAME_X1, 2 * FRAME_X2)])
def test_field_brackets(a, b, c):
    # with e3 = xi / tau these are the E(4, tau) brackets [e1, e2] = 2 tau e3, ...
    poly = {(1, 2, 0, 1): Fraction(3), (0, 1, 1, 2): Fraction(-2), (4, 0, 0, 0): Fraction(1)}
    assert commutator(a, b, poly) == apply_field(c, poly)


@pytest.mark.parametrize("field", [HOPF_FIELD, FRAME_X1, FRAME_X2])
def test_fields_are_unit_killing(field):
    assert np.array_equal(field.T, -field)
    assert np.array_equal(field.T @ field, np.eye(4, dtype=int))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_hopf_operator_skew(k):
    xi = hopf_operator(harmonic_basis(k))
    np.testing.assert_allclose(xi, -xi.T, atol=1e-12)


@pytest.mark.parametrize("k", KS)
def test_round_laplacian_casimir(k):
    # X1^2 + X2^2 + xi^2 = -k(k+2) on H_k
    space = harmonic_basis(k)
    cas = sum(space.orthonormal_operator(f) @ space.orthonormal_operator(f) for f in (FRAME_X1, FRAME_X2, HOPF_FIELD))
    np.testing.assert_allclose(cas, -k * (k + 2) * np.eye(space.dim), atol=1e-10)


@pytest.mark.parametrize("k", KS)
def test_vertical_weights(k):
    weights = vertical_weights(k)
    for p, s, mult in weights:
        assert s == (k - 2 * p) ** 2
        assert mult == (k + 1) * (1 if k == 2 * p else 2)
    assert sum(m for *_, m in weights) == (k + 1) ** 2


@pytest.mark.parametrize("k", [2, 3, 4])
@pytest.mark.parametrize("theta", [0.4, 1.3])
def test_rotated_hopf_field_same_vertical_spectrum(k, theta):
    # cos(t) xi + sin(t) X1 is another unit left-invariant field
    space = harmonic_basis(k)
    x = np.cos(theta) * space.orthonormal_operator(HOPF_FIELD) + np.sin(theta) * space.orthonormal_operator(FRAME_X1)
    expected = sorted(s for _, s, m in vertical_weights(k) for _ in range(m))
    np.testing.assert_allclose(np.linalg.eigvalsh(-(x @ x)), expected, atol=1e-9)


@pytest.mark.parametrize("k", KS)
@pytest.mark.parametrize("tau", [0.2, 0.5, 0.8])
def test_tanno_assembled_equals_closed_form(k, tau):
    got = np.linalg.eigvalsh(tanno_operator(harmonic_basis(k), tau))
    expected = sorted(v for v, m, _ in tanno_eigenvalues(k, tau) for _ in range(m))
    np.testing.assert_allclose(got, expected, atol=1e-10)


def test_tanno_sign_convention():
    # vertical directions are stretched by 1/tau: the xi-heavy harmonics go up
    vals = dict((p, v) for v, _, p in tanno_eigenvalues(2, 0.5))
    assert vals[0] == pytest.approx(8 + 3 * 4)
    assert vals[1] == pytest.approx(8)


@pytest.mark.parametrize("structure", ["canonical", "induced"])
def test_dirac_matrix_hermitian(structure):
    d = invariant_dirac_matrix(2, 0.3, structure)
    np.testing.assert_allclose(d, d.conj().T, atol=1e-12)


@pytest.mark.parametrize("tau", [0.2, 0.5, -0.4])
def test_canonical_realized_branches(tau):
    entries = berger_dirac_spectrum(3, tau, "canonical")
    assert all(e.certainty == "realized" for e in entries if e.k > 0)
    # degree 0: only the Killing spinor value -3 tau / 2 occurs
    k0 = {e.certainty: e.value for e in entries if e.k == 0}
    assert k0["realized"] == pytest.approx(-1.5 * tau)
    assert k0["eigen_of_squared"] == pytest.approx(tau / 2)


def test_squared_entries_are_shifted_laplace_eigenvalues():
    tau = 0.3
    for e in berger_dirac_spectrum(3, tau, "canonical", witness=False):
        assert (e.value + tau / 2) ** 2 == pytest.approx(e.squared)
        assert e.multiplicity > 0


@pytest.mark.parametrize("tau", [0.1, 0.15, 0.2, 0.3, 0.4])
def test_induced_first_eigenvalue_is_three_halves_H(tau):
    target = (1 - 4 * tau**2) / (2 * tau)
    assert first_positive_eigenvalue(tau) == pytest.approx(target, abs=1e-10)
    # independent of the candidate list: smallest positive eigenvalue of the full operator
    true_min = min(v for k in range(7) for v in invariant_dirac_spectrum(k, tau, "induced") if v > 1e-12)
    assert true_min == pytest.approx(target, abs=1e-10)


def test_unconfirmed_candidates_undercut_bound_for_small_tau():
    # the shifted square has a (k=2, p=1) root below (3/2) H once tau < 1/6
    assert first_positive_eigenvalue(0.1, include_unconfirmed=True) < 4.8 - 1
    assert first_positive_eigenvalue(0.2, include_unconfirmed=True) == pytest.approx(2.1)


def test_k_max_too_small():
    with pytest.raises(ValueError, match="k_max"):
        first_positive_eigenvalue(0.3, "canonical", k_max=0)


@pytest.mark.parametrize("tau", [0.0, 1.0, 1.5, -1.0])
def test_berger_regime(tau):
    with pytest.raises(ExcludedRegimeError):
        berger_dirac_spectrum(2, tau)


def test_spectrum_sorted_and_complete():
    entries = berger_dirac_spectrum(4, 0.3, "induced")
    assert entries == sorted(entries, key=lambda e: (e.k, e.value))
    for k in range(5):
        assert sum(e.multiplicity for e in entries if e.k == k) == 2 * (k + 1) ** 2


def test_module_constants():
    assert berger.STRUCTURES == ("canonical", "induced")
