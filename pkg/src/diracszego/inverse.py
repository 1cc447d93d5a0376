"""General direct and inverse spectral problems.

Direct: potentials -> Taylor coefficients of the Weyl function in the Cayley
variable, through the lower-triangular V_- recursion. Inverse: coefficients ->
potentials, through inversion of the induced Hermitian block Toeplitz matrices.
Also houses the structural Lyapunov self-test, Toeplitz positivity, FFT-based
coefficient extraction for rational Weyl functions, and the two-system
uniqueness check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AnalyticityViolation,
    InvariantViolated,
    Phi1Mismatch,
    RankMismatch,
    SingularLeadingBlock,
    SingularVMinus,
    ToeplitzNotPD,
)
from .linalg import SignatureContext, block_toeplitz, min_eig, pd_solve, rank_p_factor
from .policy import DEFAULT_POLICY, NumericPolicy
from .pseudoexp import BdtParameters, WeylRealization, explicit_weyl
from .system import PotentialSequence, herglotz_map
from .szego import cayley_lambda_of_z

__all__ = [
    "TaylorSequence",
    "BetaSequence",
    "structured_a",
    "beta_from_potentials",
    "taylor_from_beta",
    "direct_taylor",
    "inverse_potentials",
    "lyapunov_residual",
    "toeplitz_positivity",
    "rational_taylor",
    "borg_marchenko_check",
    "taylor_pi",
]


@dataclass(frozen=True)
class TaylorSequence:
    """Blocks alpha_0..alpha_N of the Weyl function in the Cayley variable."""

    p: int
    alpha: tuple = field(repr=False)

    def __post_init__(self):
        alpha = tuple(np.atleast_2d(np.asarray(a, dtype=complex)) for a in self.alpha)
        for k, a in enumerate(alpha):
            if a.shape != (self.p, self.p):
                raise ValueError(f"alpha_{k} has shape {a.shape}, expected ({self.p}, {self.p})")
        object.__setattr__(self, "alpha", alpha)

    @property
    def N(self) -> int:
        return len(self.alpha) - 1


@dataclass(frozen=True)
class BetaSequence:
    """J-normalized factors beta(k) (p x 2p) with beta J beta* = I_p."""

    ctx: SignatureContext
    beta: tuple = field(repr=False)

    def __post_init__(self):
        beta = tuple(np.asarray(b, dtype=complex) for b in self.beta)
        p, m = self.ctx.p, self.ctx.m
        for k, b in enumerate(beta):
            if b.shape != (p, m):
                raise ValueError(f"beta({k}) has shape {b.shape}, expected ({p}, {m})")
        object.__setattr__(self, "beta", beta)

    @property
    def N(self) -> int:
        return len(self.beta) - 1


def structured_a(num_blocks: int, p: int) -> np.ndarray:
    """Block lower triangular Toeplitz matrix with (i/2) I_p on the diagonal
    and i I_p strictly below."""
    n = num_blocks * p
    A = np.zeros((n, n), dtype=complex)
    for b in range(num_blocks):
        A[b * p:(b + 1) * p, b * p:(b + 1) * p] = 0.5j * np.eye(p)
        for c in range(b):
            A[b * p:(b + 1) * p, c * p:(c + 1) * p] = 1j * np.eye(p)
    return A


def beta_from_potentials(sys: PotentialSequence,
                         policy: NumericPolicy = DEFAULT_POLICY) -> BetaSequence:
    """Factor each coefficient as C_k = 2 K* beta(k)* beta(k) K - j.

    beta(k) is the canonical rank-p factor of (C_k + j)/2 rotated by K*; the
    J-normalization beta J beta* = I_p follows from C j C = j and is asserted,
    not imposed.
    """
    ctx = sys.ctx
    betas = []
    for k, C in enumerate(sys.C):
        G = (C + ctx.j) / 2
        try:
            bhat = rank_p_factor(G, ctx.p, policy)
        except RankMismatch as exc:
            raise RankMismatch(f"C_{k} is not a valid potential: {exc}") from exc
        b = bhat @ ctx.K.conj().T
        resid = np.linalg.norm(b @ ctx.J @ b.conj().T - np.eye(ctx.p))
        if resid > policy.tau_identity:
            raise InvariantViolated(
                f"beta({k}) J-normalization residual {resid:.3e}: invalid potential")
        betas.append(b)
    return BetaSequence(ctx=ctx, beta=tuple(betas))


def taylor_from_beta(beta: BetaSequence,
                     policy: NumericPolicy = DEFAULT_POLICY) -> TaylorSequence:
    """Taylor coefficients through the V_- recursion.

    Builds the block lower triangular V_-(N) whose inverse maps the stack of
    beta(k) onto [Phi_1 Phi_2]; the first block column must come out as a stack
    of identities (internal consistency assertion) and the second carries the
    partial sums psi_k of the coefficients.
    """
    ctx = beta.ctx
    p, J = ctx.p, ctx.J
    N = beta.N
    b = beta.beta
    beta1 = [x[:, :p] for x in b]
    if np.linalg.cond(beta1[0]) > policy.cond_limit:
        raise SingularLeadingBlock("first block of beta(0) is numerically singular")
    V = beta1[0].copy()
    v_prev = beta1[0]
    eye = np.eye(p, dtype=complex)
    for k in range(1, N + 1):
        v_k = b[k] @ J @ b[k - 1].conj().T @ v_prev
        if np.linalg.cond(v_k) > policy.cond_limit:
            raise SingularVMinus(f"v_-({k}) is numerically singular")
        stack = np.hstack([b[l].conj().T for l in range(k)])  # 2p x kp
        M = b[k] @ J @ stack @ V                              # p x kp
        if k > 1:
            core = structured_a(k - 1, p) + 0.5j * np.eye((k - 1) * p)
            ones_row = np.hstack([eye] * (k - 1))
            Xt = 1j * (M[:, : (k - 1) * p] - v_k @ ones_row) @ np.linalg.inv(core)
            X0 = beta1[k] - v_k - Xt @ np.vstack([eye] * (k - 1))
            X = np.hstack([X0, Xt])
        else:
            X = beta1[1] - v_k
        V = np.block([
            [V, np.zeros((k * p, p), dtype=complex)],
            [X, v_k],
        ])
        v_prev = v_k
    B = np.vstack(b)
    Pi = np.linalg.solve(V, B)
    phi1 = Pi[:, :p]
    target = np.vstack([eye] * (N + 1))
    mismatch = np.linalg.norm(phi1 - target)
    if mismatch > policy.tau_identity * (N + 1):
        raise Phi1Mismatch(f"first block column deviates from identity stack by {mismatch:.3e}")
    psi = [Pi[k * p:(k + 1) * p, p:] for k in range(N + 1)]
    alpha = [psi[0]] + [psi[k] - psi[k - 1] for k in range(1, N + 1)]
    return TaylorSequence(p=p, alpha=tuple(alpha))


def direct_taylor(sys: PotentialSequence,
                  policy: NumericPolicy = DEFAULT_POLICY) -> TaylorSequence:
    """Direct spectral problem: potentials to Weyl Taylor coefficients."""
    return taylor_from_beta(beta_from_potentials(sys, policy), policy)


def taylor_pi(alpha: TaylorSequence, r: int) -> np.ndarray:
    """The (r+1)p x 2p matrix [Phi_1 Phi_2] of cumulative coefficient sums."""
    p = alpha.p
    eye = np.eye(p, dtype=complex)
    phi2 = np.cumsum(np.stack(alpha.alpha[: r + 1]), axis=0)
    return np.hstack([np.vstack([eye] * (r + 1)), phi2.reshape((r + 1) * p, p)])


def inverse_potentials(alpha: TaylorSequence,
                       policy: NumericPolicy = DEFAULT_POLICY) -> PotentialSequence:
    """Inverse spectral problem: Taylor coefficients to potentials.

    For each r the induced block Toeplitz matrix S(r) must be positive
    definite; the last-block-row compression of Pi(r)* S(r)^{-1} yields the
    Gram matrix beta(r)* beta(r), and C_r = 2 K* G K - j. The J-normalization
    of G is asserted at every step.
    """
    ctx = SignatureContext(p=alpha.p)
    p, J, K, j = alpha.p, ctx.J, ctx.K, ctx.j
    C = []
    for r in range(alpha.N + 1):
        S = block_toeplitz(alpha.alpha[: r + 1])
        lo = min_eig(S)
        if lo <= policy.tau_pd * max(np.linalg.norm(S), 1.0):
            raise ToeplitzNotPD(
                f"block Toeplitz matrix S({r}) is not positive definite (min eig {lo:.3e})",
                failing_index=r)
        Pi = taylor_pi(alpha, r)
        Sinv_Pi = pd_solve(S, Pi, policy)
        last = slice(r * p, (r + 1) * p)
        core = Sinv_Pi[last, :]                       # P S^{-1} Pi, p x 2p
        Sinv_P = pd_solve(S, np.vstack([np.zeros((r * p, p)), np.eye(p)]).astype(complex), policy)
        small = Sinv_P[last, :]                       # P S^{-1} P*, p x p
        G = core.conj().T @ np.linalg.solve(small, core)
        jn = np.linalg.norm(core @ J @ core.conj().T - small)
        if jn > policy.tau_identity * max(np.linalg.norm(small), 1e-300):
            raise InvariantViolated(f"J-normalization residual {jn:.3e} at r={r}")
        Cr = 2 * K.conj().T @ G @ K - j
        C.append((Cr + Cr.conj().T) / 2)
    return PotentialSequence(ctx=ctx, C=tuple(C))


def lyapunov_residual(alpha: TaylorSequence) -> float:
    """Norm of A S - S A* - i Pi J Pi* for the structured lower-triangular A,
    the induced block Toeplitz S, and the cumulative-sum Pi.

    An algebraic identity of the construction: small for any Hermitian-symbol
    input, positive definiteness not required.
    """
    p = alpha.p
    N = alpha.N
    ctx = SignatureContext(p=p)
    S = block_toeplitz(alpha.alpha)
    A = structured_a(N + 1, p)
    Pi = taylor_pi(alpha, N)
    return float(np.linalg.norm(A @ S - S @ A.conj().T - 1j * Pi @ ctx.J @ Pi.conj().T))


def toeplitz_positivity(alpha: TaylorSequence) -> list[float]:
    """Minimum eigenvalue of each nested block Toeplitz matrix S(0)..S(N)."""
    return [min_eig(block_toeplitz(alpha.alpha[: r + 1])) for r in range(alpha.N + 1)]


def rational_taylor(source, N: int, radius: float = 0.5, samples: int = 512,
                    policy: NumericPolicy = DEFAULT_POLICY) -> TaylorSequence:
    """Taylor coefficients of a rational Weyl function by circle sampling.

    ``source`` is either parameter matrices or a realization; its
    identity-convention Weyl function is evaluated on |z| = radius, mapped to
    the K convention, and the blocks of i phi_K(lambda(z)) are extracted by
    discrete Fourier sums. The magnitude of the (N+1)-th block times the
    radius estimates the truncation error.
    """
    if isinstance(source, BdtParameters):
        p = source.ctx.p
        phi_i = lambda lam: explicit_weyl(source, lam, policy)
    elif isinstance(source, WeylRealization):
        p = source.ctx.p
        phi_i = source.value
    else:
        raise TypeError("source must be BdtParameters or WeylRealization")
    vals = np.empty((samples, p, p), dtype=complex)
    for mth in range(samples):
        z = radius * np.exp(2j * np.pi * mth / samples)
        lam = cayley_lambda_of_z(z)
        try:
            f = 1j * herglotz_map(phi_i(lam), policy)
        except Exception as exc:
            raise AnalyticityViolation(
                f"Weyl function could not be evaluated at sample z={z}: {exc}") from exc
        if not np.all(np.isfinite(f)):
            raise AnalyticityViolation(f"pole detected on the sample circle at z={z}")
        vals[mth] = f
    spectrum = np.fft.fft(vals, axis=0) / samples  # coefficient k at index k
    alpha = [spectrum[k] / radius**k for k in range(N + 1)]
    tail = np.linalg.norm(spectrum[N + 1] / radius ** (N + 1)) * radius
    out = TaylorSequence(p=p, alpha=tuple(alpha))
    object.__setattr__(out, "truncation_estimate", float(tail))
    return out


def borg_marchenko_check(sysA: PotentialSequence, sysB: PotentialSequence, N: int,
                         coeff_tol: float = 1e-8,
                         policy: NumericPolicy = DEFAULT_POLICY):
    """Uniqueness check: coefficient agreement to order N forces potential
    agreement up to index N.

    Returns (agree, max_potential_deviation, first_mismatch). ``agree`` is
    True when the first N+1 Taylor blocks of the two systems coincide within
    ``coeff_tol``; in that case the reported deviation is over C_0..C_N. When
    they do not, ``first_mismatch`` is the first differing coefficient index.
    """
    if N > min(sysA.N, sysB.N):
        raise ValueError("N exceeds one of the sequence lengths")
    ta = direct_taylor(PotentialSequence(ctx=sysA.ctx, C=sysA.C[: N + 1]), policy)
    tb = direct_taylor(PotentialSequence(ctx=sysB.ctx, C=sysB.C[: N + 1]), policy)
    first_mismatch = None
    for k in range(N + 1):
        if np.linalg.norm(ta.alpha[k] - tb.alpha[k]) > coeff_tol:
            first_mismatch = k
            break
    if first_mismatch is not None:
        return False, None, first_mismatch
    dev = max(float(np.linalg.norm(sysA.C[k] - sysB.C[k])) for k in range(N + 1))
    return True, dev, None
