import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nqlab import qcore
from nqlab.qcore import (
    SIGMA_1,
    SIGMA_2,
    SIGMA_3,
    BlochVector,
    InvalidStateError,
    bloch_to_density,
    density_to_bloch,
)

UP = np.array([1, 0], dtype=complex)
DOWN = np.array([0, 1], dtype=complex)


def rotated(diag, seed):
    """Density matrix with the given spectrum in a random eigenbasis."""
    rng = np.random.default_rng(seed)
    d = len(diag)
    q, _ = np.linalg.qr(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
    return q @ np.diag(diag) @ q.conj().T


seeds = st.integers(0, 2**32 - 1)
dims = st.integers(2, 4)


def ginibre(seed, dim):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


class TestValidation:
    def test_density_matrix_accepts_valid(self):
        qcore.as_density_matrix(np.eye(3) / 3)

    @pytest.mark.parametrize(
        "bad",
        [
            np.array([[1, 0.1], [0, 0]]),  # not Hermitian
            np.eye(2),  # trace 2
            np.diag([1.5, -0.5]),  # negative eigenvalue
            np.zeros((0, 0)),
        ],
    )
    def test_density_matrix_rejects(self, bad):
        with pytest.raises(InvalidStateError):
            qcore.as_density_matrix(bad)

    def test_state_vector_norm(self):
        qcore.as_state_vector(UP)
        with pytest.raises(InvalidStateError):
            qcore.as_state_vector([1.0, 1.0])

    def test_validated_arrays_are_read_only(self):
        rho = qcore.as_density_matrix(np.eye(2) / 2)
        with pytest.raises(ValueError):
            rho[0, 0] = 1.0

    def test_projector(self):
        assert qcore.is_projector(qcore.projector_onto(UP))
        assert not qcore.is_projector(np.eye(2) / 2)

    def test_weight_range(self):
        with pytest.raises(ValueError):
            qcore.check_weight(1.5)


class TestPurity:
    def test_pure(self):
        assert qcore.purity(qcore.projector_onto(UP)) == pytest.approx(1.0, abs=1e-15)

    def test_maximally_mixed(self):
        assert qcore.purity(np.eye(2) / 2) == pytest.approx(0.5, abs=1e-15)

    def test_equal_mixture_with_quarter_overlap(self):
        psi = UP
        phi = np.array([0.5, math.sqrt(3) / 2], dtype=complex)
        assert qcore.overlap_sq(psi, phi) == pytest.approx(0.25)
        rho = 0.5 * qcore.projector_onto(psi) + 0.5 * qcore.projector_onto(phi)
        # 1/2 + |<psi|phi>|^2 / 2
        assert qcore.purity(rho) == pytest.approx(0.625, abs=1e-14)

    def test_rejects_empty(self):
        with pytest.raises(InvalidStateError):
            qcore.purity(np.zeros((0, 0)))


class TestEntropy:
    def test_pure(self):
        assert qcore.von_neumann_entropy(qcore.projector_onto(DOWN)) == pytest.approx(0.0, abs=1e-14)

    def test_maximally_mixed(self):
        assert qcore.von_neumann_entropy(np.eye(2) / 2) == pytest.approx(math.log(2), abs=1e-14)

    def test_three_quarters(self):
        expected = -(0.75 * math.log(0.75) + 0.25 * math.log(0.25))
        assert qcore.von_neumann_entropy(rotated([0.75, 0.25], 1)) == pytest.approx(expected, abs=1e-13)

    def test_tiny_negative_eigenvalue_clipped(self):
        assert qcore.von_neumann_entropy(np.diag([1 + 5e-11, -5e-11])) == pytest.approx(0.0, abs=1e-9)

    def test_negative_eigenvalue_rejected(self):
        with pytest.raises(InvalidStateError):
            qcore.von_neumann_entropy(np.diag([1.1, -0.1]))

    @given(seeds, dims)
    def test_zero_iff_pure(self, seed, dim):
        rng = np.random.default_rng(seed)
        pure = qcore.projector_onto(qcore.random_state_vector(rng, dim))
        assert qcore.von_neumann_entropy(pure) < 1e-10
        mixed = ginibre(seed, dim)
        assert (qcore.von_neumann_entropy(mixed) < 1e-10) == (abs(qcore.purity(mixed) - 1) < 1e-10)


class TestOverlap:
    def test_identical(self):
        v = qcore.normalize([1, 1j])
        assert qcore.overlap_sq(v, v) == pytest.approx(1.0, abs=1e-15)

    def test_orthogonal(self):
        assert qcore.overlap_sq(UP, DOWN) == 0.0

    def test_hadamard_axis(self):
        lam, vecs = np.linalg.eigh((SIGMA_1 + SIGMA_3) / math.sqrt(2))
        plus = vecs[:, np.argmax(lam)]
        assert qcore.overlap_sq(UP, plus) == pytest.approx(math.cos(math.pi / 8) ** 2, abs=1e-14)
        assert qcore.overlap_sq(UP, plus) == pytest.approx(0.853553, abs=1e-6)

    def test_mismatch(self):
        with pytest.raises(qcore.DimensionMismatchError):
            qcore.overlap_sq(UP, np.ones(3) / math.sqrt(3))

    @given(seeds, dims)
    def test_symmetric(self, seed, dim):
        rng = np.random.default_rng(seed)
        a, b = qcore.random_state_vector(rng, dim), qcore.random_state_vector(rng, dim)
        assert abs(qcore.overlap_sq(a, b) - qcore.overlap_sq(b, a)) <= 1e-14


class TestMixture:
    def test_p_one(self, rng):
        r1 = qcore.random_density_matrix(rng, 3)
        r2 = qcore.random_density_matrix(rng, 3)
        np.testing.assert_array_equal(qcore.mixture(r1, r2, 1.0), r1)

    def test_up_down_half(self):
        mix = qcore.mixture(qcore.projector_onto(UP), qcore.projector_onto(DOWN), 0.5)
        np.testing.assert_allclose(mix, np.eye(2) / 2, atol=1e-15)

    def test_mismatch(self):
        with pytest.raises(qcore.DimensionMismatchError):
            qcore.mixture(np.eye(2) / 2, np.eye(3) / 3, 0.5)

    @given(seeds, dims, st.floats(0, 1))
    def test_purity_does_not_exceed_branches(self, seed, dim, p):
        rng = np.random.default_rng(seed)
        r1, r2 = ginibre(seed, dim), qcore.random_density_matrix(rng, dim)
        mix = qcore.mixture(r1, r2, p)
        qcore.as_density_matrix(mix)
        assert qcore.purity(mix) <= max(qcore.purity(r1), qcore.purity(r2)) + 1e-10


class TestSpectral:
    def test_pure(self):
        terms = qcore.spectral_decompose(qcore.projector_onto(qcore.normalize([1, 2j])))
        assert len(terms) == 1
        assert terms[0].weight == pytest.approx(1.0)

    def test_maximally_mixed(self):
        weights = [t.weight for t in qcore.spectral_decompose(np.eye(2) / 2)]
        np.testing.assert_allclose(weights, [0.5, 0.5], atol=1e-15)

    def test_bloch_x(self):
        # eigenvalues (1 +- |s|) / 2
        weights = [t.weight for t in qcore.spectral_decompose(bloch_to_density(BlochVector(0.6, 0, 0)))]
        np.testing.assert_allclose(weights, [0.8, 0.2], atol=1e-14)

    @given(seeds, dims)
    def test_reconstruction(self, seed, dim):
        rho = ginibre(seed, dim)
        terms = qcore.spectral_decompose(rho)
        weights = np.array([t.weight for t in terms])
        assert np.all(weights > 0)
        assert np.all(np.diff(weights) <= 0)
        assert abs(weights.sum() - 1) <= 1e-10
        vecs = np.array([t.vector for t in terms]).T
        np.testing.assert_allclose(vecs.conj().T @ vecs, np.eye(len(terms)), atol=1e-10)
        np.testing.assert_allclose(qcore.reconstruct(terms), rho, atol=1e-10)


class TestBloch:
    def test_up(self):
        np.testing.assert_allclose(bloch_to_density(BlochVector(0, 0, 1)), qcore.projector_onto(UP))

    def test_origin(self):
        np.testing.assert_allclose(bloch_to_density(BlochVector(0, 0, 0)), np.eye(2) / 2)

    def test_rejects_long_vector(self):
        with pytest.raises(InvalidStateError):
            BlochVector(1, 1, 0)

    def test_rejects_non_qubit(self):
        with pytest.raises(qcore.DimensionMismatchError):
            density_to_bloch(np.eye(3) / 3)

    @given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
    def test_round_trip(self, a, b, c):
        n = math.sqrt(a * a + b * b + c * c)
        if n > 1:
            a, b, c = a / n, b / n, c / n
        s = BlochVector(a, b, c)
        back = density_to_bloch(bloch_to_density(s))
        np.testing.assert_allclose(back.as_array(), s.as_array(), atol=1e-12)
        rho = bloch_to_density(s)
        for k, sig in enumerate((SIGMA_1, SIGMA_2, SIGMA_3)):
            assert qcore.expectation(sig, rho) == pytest.approx(s.as_array()[k], abs=1e-12)


class TestExpectation:
    def test_identity(self, rng):
        assert qcore.expectation(np.eye(3), qcore.random_density_matrix(rng, 3)) == pytest.approx(1.0)

    def test_sigma3_up(self):
        assert qcore.expectation(SIGMA_3, qcore.projector_onto(UP)) == pytest.approx(1.0)

    def test_absent_component(self):
        r = 1 / math.sqrt(2)
        assert qcore.expectation(SIGMA_2, bloch_to_density(BlochVector(r, 0, r))) == pytest.approx(0.0, abs=1e-15)

    def test_rejects_non_hermitian(self):
        with pytest.raises(InvalidStateError):
            qcore.expectation(np.array([[0, 1], [0, 0]]), np.eye(2) / 2)

    @given(seeds, dims)
    def test_projector_mean_in_unit_interval(self, seed, dim):
        rng = np.random.default_rng(seed)
        proj = qcore.projector_onto(qcore.random_state_vector(rng, dim))
        v = qcore.expectation(proj, ginibre(seed, dim))
        assert -1e-10 <= v <= 1 + 1e-10


class TestPartialTrace:
    def test_product(self, rng):
        a = qcore.random_density_matrix(rng, 2)
        b = qcore.random_density_matrix(rng, 3)
        ab = np.kron(a, b)
        np.testing.assert_allclose(qcore.partial_trace(ab, (2, 3), keep=0), a, atol=1e-15)
        np.testing.assert_allclose(qcore.partial_trace(ab, (2, 3), keep=1), b, atol=1e-15)

    def test_explicit_sum(self, rng):
        big = ginibre(3, 6)
        expected = np.zeros((2, 2), dtype=complex)
        for i in range(2):
            for j in range(2):
                expected[i, j] = sum(big[i * 3 + r, j * 3 + r] for r in range(3))
        np.testing.assert_allclose(qcore.partial_trace(big, (2, 3), keep=0), expected, atol=1e-15)


def test_trace_distance_is_half_bloch_distance():
    a, b = BlochVector(0.5, 0, 0.5), BlochVector(-0.5, 0, 0.5)
    d = qcore.trace_distance(bloch_to_density(a), bloch_to_density(b))
    assert d == pytest.approx(0.5 * np.linalg.norm(a.as_array() - b.as_array()), abs=1e-15)
