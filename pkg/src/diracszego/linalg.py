"""Dense complex linear-algebra primitives and the fixed signature matrices.

Everything here operates on plain ``numpy`` complex arrays. The Hermitian
eigendecomposition (``numpy.linalg.eigh``) is the single low-level dependency
point; all higher modules go through the helpers below.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import NotHermitian, NotPositiveDefinite, RankMismatch
from .policy import DEFAULT_POLICY, NumericPolicy

__all__ = [
    "SignatureContext",
    "hermitian_sqrt",
    "rank_p_factor",
    "block_toeplitz",
    "pd_solve",
    "block_levinson_solve",
    "herm_residual",
    "min_eig",
]


def herm_residual(M: np.ndarray) -> float:
    """Frobenius norm of the anti-Hermitian part of ``M``."""
    return float(np.linalg.norm(M - M.conj().T))


def min_eig(M: np.ndarray) -> float:
    """Smallest eigenvalue of the Hermitian part of ``M``."""
    return float(np.linalg.eigvalsh((M + M.conj().T) / 2)[0])


@dataclass(frozen=True)
class SignatureContext:
    """Block size ``p`` together with the fixed m x m matrices (m = 2p).

    ``j`` is diag(I_p, -I_p); ``J`` has identity off-diagonal blocks; ``K`` is
    the unitary rotation with K j K* = J.
    """

    p: int
    j: np.ndarray = field(init=False, repr=False, compare=False)
    J: np.ndarray = field(init=False, repr=False, compare=False)
    K: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("block size must be a positive integer")
        p = self.p
        eye = np.eye(p)
        zero = np.zeros((p, p))
        j = np.block([[eye, zero], [zero, -eye]]).astype(complex)
        J = np.block([[zero, eye], [eye, zero]]).astype(complex)
        K = np.block([[eye, -eye], [eye, eye]]).astype(complex) / np.sqrt(2.0)
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "K", K)

    @property
    def m(self) -> int:
        return 2 * self.p


def hermitian_sqrt(M: np.ndarray, policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Principal square root of a Hermitian positive-definite matrix.

    Returns the unique Hermitian PD ``R`` with ``R @ R == M``, computed from
    the spectral decomposition.
    """
    M = np.asarray(M, dtype=complex)
    scale = max(np.linalg.norm(M), 1.0)
    if herm_residual(M) > policy.tau_herm * scale:
        raise NotHermitian(f"asymmetry {herm_residual(M):.3e} exceeds tolerance")
    w, V = np.linalg.eigh((M + M.conj().T) / 2)
    if w[0] <= policy.tau_pd * scale:
        raise NotPositiveDefinite(f"min eigenvalue {w[0]:.3e} not positive")
    R = (V * np.sqrt(w)) @ V.conj().T
    return (R + R.conj().T) / 2


def rank_p_factor(G: np.ndarray, p: int, policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Rank-``p`` factor of a PSD 2p x 2p matrix: returns beta with beta* beta = G.

    The factor is built from the top-``p`` eigenpairs as Lambda^{1/2} V*. To make
    the result deterministic the eigenvalues are ordered descending and each
    eigenvector's phase is fixed so its first nonzero entry is real positive.
    """
    G = np.asarray(G, dtype=complex)
    m = G.shape[0]
    if m != 2 * p:
        raise ValueError(f"expected a {2 * p} x {2 * p} matrix, got {G.shape}")
    scale = max(np.linalg.norm(G), 1.0)
    if herm_residual(G) > policy.tau_herm * scale:
        raise NotPositiveDefinite("matrix is not Hermitian")
    w, V = np.linalg.eigh((G + G.conj().T) / 2)
    if w[0] < -policy.tau_pd * scale:
        raise NotPositiveDefinite(f"min eigenvalue {w[0]:.3e} is negative")
    w, V = w[::-1], V[:, ::-1]  # descending
    cut = policy.tau_rank * max(w[0], 1e-300)
    if w[p - 1] <= cut or (m > p and w[p] >= cut):
        raise RankMismatch(
            f"numerical rank is not {p}: eigenvalues {w[p - 1]:.3e}, {w[p]:.3e} vs cut {cut:.3e}"
        )
    V = V[:, :p].copy()
    for col in range(p):
        v = V[:, col]
        nz = np.flatnonzero(np.abs(v) > 1e-12 * np.abs(v).max())
        phase = v[nz[0]] / abs(v[nz[0]])
        V[:, col] = v / phase
    return (np.sqrt(w[:p])[:, None]) * V.conj().T


def block_toeplitz(alpha: list[np.ndarray] | np.ndarray) -> np.ndarray:
    """Hermitian block Toeplitz matrix with symbol blocks ``alpha``.

    Block (k, j) equals s_{j-k} with s_{-r} = alpha_r, s_r = alpha_r* for r > 0
    and s_0 = alpha_0 + alpha_0*.
    """
    blocks = [np.asarray(a, dtype=complex) for a in alpha]
    p = blocks[0].shape[0]
    n = len(blocks)
    s = {0: blocks[0] + blocks[0].conj().T}
    for r in range(1, n):
        s[-r] = blocks[r]
        s[r] = blocks[r].conj().T
    S = np.zeros((n * p, n * p), dtype=complex)
    for k in range(n):
        for col in range(n):
            S[k * p:(k + 1) * p, col * p:(col + 1) * p] = s[col - k]
    return S


def pd_solve(S: np.ndarray, B: np.ndarray, policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Solve S X = B for Hermitian positive-definite ``S`` via Cholesky."""
    S = np.asarray(S, dtype=complex)
    B = np.asarray(B, dtype=complex)
    try:
        c, low = scipy.linalg.cho_factor(S, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(f"Cholesky breakdown: {exc}") from exc
    except scipy.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(f"Cholesky breakdown: {exc}") from exc
    return scipy.linalg.cho_solve((c, low), B, check_finite=False)


def block_levinson_solve(alpha: list[np.ndarray], B: np.ndarray) -> np.ndarray:
    """Solve ``block_toeplitz(alpha) @ X = B`` by block Levinson recursion.

    Exploits the constant-block-diagonal structure: O(N^2 p^3) instead of the
    O(N^3 p^3) dense factorization. Output agrees with ``pd_solve`` on the
    assembled matrix; this path is a performance alternative only.
    """
    blocks = [np.asarray(a, dtype=complex) for a in alpha]
    p = blocks[0].shape[0]
    n = len(blocks)
    B = np.asarray(B, dtype=complex)
    if B.ndim == 1:
        B = B[:, None]

    def s(r):
        if r == 0:
            return blocks[0] + blocks[0].conj().T
        if r < 0:
            return blocks[-r]
        return blocks[r].conj().T

    s0_inv = np.linalg.inv(s(0))
    F = [s0_inv.copy()]          # T F = [I; 0; ...]
    Bk = [s0_inv.copy()]         # T Bk = [0; ...; I]
    X = [s0_inv @ B[:p]]
    for k in range(1, n):
        ef = sum(s(j - k) @ F[j] for j in range(k))          # last-row residual of [F; 0]
        eb = sum(s(j + 1) @ Bk[j] for j in range(k))         # first-row residual of [0; B]
        a = np.linalg.inv(np.eye(p) - eb @ ef)
        d = np.linalg.inv(np.eye(p) - ef @ eb)
        b = -ef @ a
        g = -eb @ d
        F_new = [F[j] @ a for j in range(k)] + [np.zeros((p, p), dtype=complex)]
        for j in range(1, k + 1):
            F_new[j] = F_new[j] + Bk[j - 1] @ b
        B_new = [F[j] @ g for j in range(k)] + [np.zeros((p, p), dtype=complex)]
        for j in range(1, k + 1):
            B_new[j] = B_new[j] + Bk[j - 1] @ d
        F, Bk = F_new, B_new
        ex = sum(s(j - k) @ X[j] for j in range(k))
        corr = B[k * p:(k + 1) * p] - ex
        X = [X[j] + Bk[j] @ corr for j in range(k)] + [Bk[k] @ corr]
    return np.vstack(X)
