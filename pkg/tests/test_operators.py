import numpy as np
import pytest
from hypothesis import given

from qrenyi.config import Config
from qrenyi.errors import DimensionMismatch, NonHermitian, NotPSD
from qrenyi.operators import (dagger, distinct_eigenvalue_count, log_on_support, partial_trace,
                              pinch, pinching_from, positive_part, power_on_support, psd_leq,
                              spectral_decompose, support_meet, support_projection, tensor,
                              tensor_power)
from qrenyi.sampling import random_contraction, random_hermitian, random_psd, random_state

from strategies import hermitians, psds

# 4x4 Hermitian and its eigenvalues from a 40-digit mpmath solver
# (tests/oracles/generate_oracles.py)
HERM4 = np.array([[2, 1 - 1j, 0.5j, 0],
                  [1 + 1j, -1, 0.25, 2j],
                  [-0.5j, 0.25, 0.5, 1 - 0.5j],
                  [0, -2j, 1 + 0.5j, 3]])
HERM4_EIGS = [-2.4002259555362553, 0.3622967296286349, 2.2417360209203827, 4.296193204987238]


class TestSpectralDecompose:
    def test_identity_single_cluster(self):
        dec = spectral_decompose(np.eye(2))
        assert np.allclose(dec.eigenvalues, [1])
        assert np.allclose(dec.projectors[0], np.eye(2))

    def test_degenerate_diagonal(self):
        dec = spectral_decompose(np.diag([3.0, 1.0, 1.0]), cluster_tol=1e-9)
        assert np.allclose(dec.eigenvalues, [3, 1])
        ranks = [round(np.trace(P).real) for P in dec.projectors]
        assert ranks == [1, 2]

    def test_matches_high_precision_oracle(self):
        dec = spectral_decompose(HERM4)
        assert np.allclose(sorted(dec.eigenvalues), HERM4_EIGS, atol=1e-12)
        assert np.max(np.abs(dec.reconstruct() - HERM4)) < 1e-10

    def test_descending_order(self, rng):
        dec = spectral_decompose(random_hermitian(5, rng))
        assert np.all(np.diff(dec.eigenvalues) < 0)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NonHermitian):
            spectral_decompose(np.array([[1, 1], [0, 1]]))

    @given(hermitians())
    def test_projectors_resolve_identity(self, A):
        dec = spectral_decompose(A)
        d = A.shape[0]
        assert np.max(np.abs(sum(dec.projectors) - np.eye(d))) < 1e-9
        for i, P in enumerate(dec.projectors):
            for Q in dec.projectors[i + 1:]:
                assert np.max(np.abs(P @ Q)) < 1e-9
        assert np.max(np.abs(dec.reconstruct() - A)) <= 1e-10 * max(1, np.max(np.abs(A)))

    def test_reconstruction_random_dims(self, rng):
        for d in range(2, 9):
            A = random_hermitian(d, rng)
            err = np.max(np.abs(spectral_decompose(A).reconstruct() - A))
            assert err <= 1e-10 * np.linalg.norm(A, 2)


class TestSupportCalculus:
    def test_support_projection_examples(self):
        assert np.allclose(support_projection(np.diag([1.0, 0.0])), np.diag([1, 0]))
        assert np.allclose(support_projection(np.diag([0.3, 0.7])), np.eye(2))
        plus = 0.5 * np.ones((2, 2))
        assert np.allclose(support_projection(plus), plus)

    def test_support_projection_rejects_non_psd(self):
        with pytest.raises(NotPSD):
            support_projection(np.diag([1.0, -0.5]))

    def test_cutoff_is_relative(self):
        # 1e-12 relative to 1 is below the cutoff, so it counts as kernel
        P = support_projection(np.diag([1.0, 1e-12]))
        assert np.allclose(P, np.diag([1, 0]))
        P = support_projection(np.diag([1e-12, 1e-13]))
        assert np.allclose(P, np.eye(2))

    def test_power_examples(self):
        assert np.allclose(power_on_support(np.diag([4.0, 0.0]), 0.5), np.diag([2, 0]))
        assert np.allclose(power_on_support(np.diag([4.0, 0.0]), -1), np.diag([0.25, 0]))

    def test_power_square_matches_product(self, rng):
        A = random_psd(4, rng)
        assert np.allclose(power_on_support(A, 2), A @ A)

    @given(psds())
    def test_power_identities(self, A):
        assert np.allclose(power_on_support(A, 1), A, atol=1e-10)
        assert np.allclose(power_on_support(A, 0), support_projection(A))
        prod = power_on_support(A, 0.7) @ power_on_support(A, -0.7)
        assert np.allclose(prod, support_projection(A), atol=1e-8)

    def test_power_on_rank_deficient(self, rng):
        A = random_state(4, rank=2, rng=rng)
        prod = power_on_support(A, 1.5) @ power_on_support(A, -1.5)
        assert np.allclose(prod, support_projection(A), atol=1e-8)

    def test_log_examples(self):
        assert np.allclose(log_on_support(np.eye(3)), 0)
        assert np.allclose(log_on_support(np.diag([np.e, 0.0])), np.diag([1, 0]))
        assert np.allclose(log_on_support(np.eye(2) / 2), -np.log(2) * np.eye(2))

    def test_positive_part_examples(self, rng):
        assert np.allclose(positive_part(np.diag([1.0, -1.0])), np.diag([1, 0]))
        A = random_psd(3, rng)
        assert np.allclose(positive_part(A), A)

    def test_positive_part_trace_bound(self, rng):
        A = random_hermitian(3, rng)
        Ap = positive_part(A)
        assert np.linalg.eigvalsh(Ap)[0] >= -1e-12
        for _ in range(100):
            D = random_contraction(3, rng)
            assert np.trace(Ap).real >= np.trace(A @ D).real - 1e-12

    def test_positive_part_rejects_non_hermitian(self):
        with pytest.raises(NonHermitian):
            positive_part(np.array([[0, 1], [0, 0]]))


class TestSupportMeet:
    def test_identity_and_orthogonal(self):
        assert np.allclose(support_meet(np.eye(2), np.eye(2) * 3), np.eye(2))
        assert np.allclose(support_meet(np.diag([1.0, 0]), np.diag([0, 1.0])), 0)

    def test_rank_two_planes_in_dim_three(self, rng):
        A = random_state(3, rank=2, rng=rng)
        B = random_state(3, rank=2, rng=rng)
        P = support_meet(A, B)
        assert round(np.trace(P).real) == 1
        # oracle: the intersection is the orthocomplement of the two kernels together
        kA = np.linalg.eigh(A)[1][:, :1]
        kB = np.linalg.eigh(B)[1][:, :1]
        K = np.hstack([kA, kB])
        _, _, vh = np.linalg.svd(dagger(K))
        v = vh[-1].conj()
        assert np.allclose(P, np.outer(v, v.conj()), atol=1e-8)

    def test_meet_with_self(self, rng):
        A = random_state(4, rank=2, rng=rng)
        assert np.allclose(support_meet(A, A), support_projection(A), atol=1e-9)


class TestPinching:
    def test_identity_sigma_is_identity_map(self, rng):
        X = random_hermitian(3, rng)
        assert np.allclose(pinch(pinching_from(np.eye(3) / 3), X), X)

    def test_plus_state_pinched_by_diagonal(self):
        X = 0.5 * np.ones((2, 2))
        assert np.allclose(pinch(pinching_from(np.diag([0.2, 0.8])), X), np.eye(2) / 2)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            pinch(pinching_from(np.eye(2)), np.eye(3))

    @given(psds(dim=3), psds(dim=3))
    def test_pinching_properties(self, sigma, X):
        E = pinching_from(sigma)
        Y = pinch(E, X)
        assert abs(np.trace(Y - X)) <= 1e-12 * 3 * max(1, np.trace(X).real)
        assert np.allclose(pinch(E, Y), Y, atol=1e-12)
        assert np.max(np.abs(Y @ sigma - sigma @ Y)) < 1e-9
        v = distinct_eigenvalue_count(sigma)
        assert np.linalg.eigvalsh(v * Y - X)[0] >= -1e-10

    def test_pinching_inequality_degenerate(self, rng):
        U = np.linalg.qr(rng.standard_normal((4, 4)))[0]
        sigma = U @ np.diag([0.1, 0.1, 0.4, 0.4]) @ U.T
        E = pinching_from(sigma)
        assert E.block_count == 2
        for _ in range(20):
            X = random_psd(4, rng)
            assert np.linalg.eigvalsh(2 * pinch(E, X) - X)[0] >= -1e-10


class TestDistinctCount:
    def test_examples(self):
        assert distinct_eigenvalue_count(np.eye(4)) == 1
        assert distinct_eigenvalue_count(np.diag([1.0, 2.0, 2.0])) == 2

    def test_tensor_powers_of_generic_qubit(self, rng):
        sigma = random_state(2, rng=rng)
        for n in range(1, 6):
            v = distinct_eigenvalue_count(tensor_power(sigma, n))
            # binomial spectrum: eigenvalues p^k q^(n-k), k = 0..n
            assert v == n + 1
            assert v <= (n + 1) ** (2 - 1)

    def test_cluster_tol_override(self):
        A = np.diag([1.0, 1.0 + 1e-6])
        assert distinct_eigenvalue_count(A) == 2
        assert distinct_eigenvalue_count(A, cluster_tol=1e-5) == 1
        assert distinct_eigenvalue_count(A, config=Config(cluster_tol=1e-5)) == 1


class TestTensorPlumbing:
    def test_tensor_power_one(self, rng):
        rho = random_state(3, rng=rng)
        assert np.allclose(tensor_power(rho, 1), rho)

    def test_trace_of_product(self, rng):
        rho, sigma = random_psd(2, rng), random_psd(3, rng)
        full = partial_trace(tensor(rho, sigma), [2, 3], [])
        assert np.isclose(full[0, 0], np.trace(rho) * np.trace(sigma))

    def test_partial_traces_of_product(self, rng):
        rho, sigma = random_state(2, rng=rng), random_state(3, rng=rng)
        X = tensor(rho, sigma)
        assert np.allclose(partial_trace(X, [2, 3], [0]), rho)
        assert np.allclose(partial_trace(X, [2, 3], [1]), sigma)

    def test_partial_trace_three_factors(self, rng):
        a, b, c = (random_state(d, rng=rng) for d in (2, 3, 2))
        X = tensor(a, b, c)
        assert np.allclose(partial_trace(X, [2, 3, 2], [0, 2]), tensor(a, c))

    def test_partial_trace_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            partial_trace(np.eye(4), [2, 3], [0])


class TestPsdOrder:
    def test_examples(self, rng):
        A = random_psd(3, rng)
        assert psd_leq(A, A)
        assert not psd_leq(np.diag([1.0, 0]), np.diag([0, 1.0]))
        assert not psd_leq(np.diag([0, 1.0]), np.diag([1.0, 0]))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            psd_leq(np.eye(2), np.eye(3))

    @given(psds(), psds())
    def test_sum_dominates(self, A, B):
        if A.shape == B.shape:
            assert psd_leq(A, A + B)
