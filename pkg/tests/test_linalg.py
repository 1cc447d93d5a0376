import numpy as np
import pytest

import diracszego as dz
from diracszego.errors import NotHermitian, NotPositiveDefinite, RankMismatch


def random_hpd(rng, n, shift=0.5):
    M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return M @ M.conj().T + shift * np.eye(n)


class TestSignatureContext:
    def test_signature_matrices(self):
        for p in (1, 2, 3):
            ctx = dz.SignatureContext(p=p)
            assert ctx.m == 2 * p
            assert np.array_equal(ctx.j @ ctx.j, np.eye(2 * p))
            assert np.array_equal(ctx.J @ ctx.J, np.eye(2 * p))
            # K is unitary and rotates j onto J
            assert np.allclose(ctx.K @ ctx.K.conj().T, np.eye(2 * p), atol=1e-15)
            assert np.allclose(ctx.K @ ctx.j @ ctx.K.conj().T, ctx.J, atol=1e-15)

    def test_rejects_nonpositive_block_size(self):
        with pytest.raises(ValueError):
            dz.SignatureContext(p=0)


class TestHermitianSqrt:
    def test_squares_back(self, rng):
        M = random_hpd(rng, 5)
        R = dz.hermitian_sqrt(M)
        assert np.linalg.norm(R @ R - M) < 1e-12 * np.linalg.norm(M)
        assert np.linalg.norm(R - R.conj().T) < 1e-13

    def test_identity(self):
        assert np.allclose(dz.hermitian_sqrt(np.eye(3)), np.eye(3))

    def test_rejects_non_hermitian(self, rng):
        M = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        with pytest.raises(NotHermitian):
            dz.hermitian_sqrt(M)

    def test_rejects_indefinite(self):
        with pytest.raises(NotPositiveDefinite):
            dz.hermitian_sqrt(np.diag([1.0, -1.0]))


class TestRankPFactor:
    def test_recovers_gram_matrix(self, rng):
        for p in (1, 2):
            b = rng.standard_normal((p, 2 * p)) + 1j * rng.standard_normal((p, 2 * p))
            G = b.conj().T @ b
            f = dz.rank_p_factor(G, p)
            assert f.shape == (p, 2 * p)
            assert np.linalg.norm(f.conj().T @ f - G) < 1e-12 * np.linalg.norm(G)

    def test_deterministic_phase(self, rng):
        b = rng.standard_normal((2, 4)) + 1j * rng.standard_normal((2, 4))
        G = b.conj().T @ b
        f1 = dz.rank_p_factor(G, 2)
        f2 = dz.rank_p_factor(G.copy(), 2)
        assert np.array_equal(f1, f2)

    def test_rejects_wrong_rank(self):
        with pytest.raises(RankMismatch):
            dz.rank_p_factor(np.eye(4), 2)  # rank 4, not 2
        with pytest.raises(RankMismatch):
            dz.rank_p_factor(np.diag([1.0, 0, 0, 0]), 2)  # rank 1

    def test_rejects_negative(self):
        with pytest.raises(NotPositiveDefinite):
            dz.rank_p_factor(np.diag([1.0, 1.0, -0.5, 0.0]), 2)


class TestBlockToeplitz:
    def test_scalar_structure(self):
        S = dz.block_toeplitz([np.array([[2.0 + 1j]]), np.array([[0.5j]]),
                               np.array([[0.1]])])
        expect = np.array([
            [4.0, -0.5j, 0.1],
            [0.5j, 4.0, -0.5j],
            [0.1, 0.5j, 4.0],
        ], dtype=complex)
        assert np.allclose(S, expect, atol=1e-15)

    def test_hermitian(self, rng):
        alpha = [rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
                 for _ in range(4)]
        S = dz.block_toeplitz(alpha)
        assert np.linalg.norm(S - S.conj().T) == 0.0

    def test_constant_block_diagonals(self, rng):
        p = 2
        alpha = [rng.standard_normal((p, p)) + 1j * rng.standard_normal((p, p))
                 for _ in range(5)]
        S = dz.block_toeplitz(alpha)
        for k in range(4):
            a = S[k * p:(k + 1) * p, (k + 1) * p:(k + 2) * p]
            b = S[(k + 1) * p:(k + 2) * p, (k + 2) * p:(k + 3) * p] if k < 3 else None
            if b is not None:
                assert np.array_equal(a, b)


class TestSolvers:
    def test_pd_solve_matches_dense(self, rng):
        S = random_hpd(rng, 6)
        B = rng.standard_normal((6, 2)) + 1j * rng.standard_normal((6, 2))
        X = dz.pd_solve(S, B)
        assert np.linalg.norm(S @ X - B) < 1e-12 * np.linalg.norm(B)

    def test_pd_solve_rejects_indefinite(self, rng):
        with pytest.raises(NotPositiveDefinite):
            dz.pd_solve(np.diag([1.0, -1.0]), np.ones((2, 1)))

    def test_levinson_matches_pd_solve(self, rng):
        for p, n in ((1, 8), (2, 6)):
            # Hermitian PD Toeplitz symbol: diagonally dominant alpha_0
            alpha = [np.eye(p) * (2.0 + 0.5j)]
            alpha += [0.2 * (rng.standard_normal((p, p))
                             + 1j * rng.standard_normal((p, p)))
                      for _ in range(n - 1)]
            S = dz.block_toeplitz(alpha)
            assert dz.linalg.min_eig(S) > 0
            B = rng.standard_normal((n * p, 3)) + 1j * rng.standard_normal((n * p, 3))
            x_dense = dz.pd_solve(S, B)
            x_lev = dz.block_levinson_solve(alpha, B)
            assert np.linalg.norm(x_dense - x_lev) < 1e-9 * np.linalg.norm(x_dense)

    def test_levinson_vector_rhs(self, rng):
        alpha = [np.array([[3.0]]), np.array([[0.4 - 0.1j]]), np.array([[0.2j]])]
        b = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        x = dz.block_levinson_solve(alpha, b)
        assert np.linalg.norm(dz.block_toeplitz(alpha) @ x - b[:, None]) < 1e-12
