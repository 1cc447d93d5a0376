"""Explicit machinery for rational Weyl functions: generation of
pseudo-exponential potentials from finite-dimensional parameter triples,
the transfer matrix function, the explicit fundamental solution, the explicit
Weyl function, recovery from a realization, and the scalar closed-form family
used as an oracle throughout the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    IdentityViolated,
    InvariantViolated,
    LambdaZero,
    ModulusMismatch,
    NotPositiveDefinite,
    ResolventSingular,
    SingularS,
    SingularW0,
)
from .linalg import SignatureContext, herm_residual, hermitian_sqrt, min_eig, pd_solve
from .policy import DEFAULT_POLICY, NumericPolicy
from .system import PotentialSequence

__all__ = [
    "BdtParameters",
    "BdtState",
    "WeylRealization",
    "generate",
    "normalize",
    "transfer",
    "explicit_fundamental",
    "explicit_weyl",
    "explicit_partial_sum",
    "realization_to_params",
    "example41",
    "example41_params",
    "random_bdt_parameters",
]


@dataclass(frozen=True)
class BdtParameters:
    """Parameter triple (A, S0, Pi0) with A S0 - S0 A* = i Pi0 j Pi0*.

    ``A`` is n x n invertible, ``S0`` n x n Hermitian, ``Pi0`` n x 2p.
    """

    ctx: SignatureContext
    A: np.ndarray = field(repr=False)
    S0: np.ndarray = field(repr=False)
    Pi0: np.ndarray = field(repr=False)

    def __post_init__(self):
        A = np.asarray(self.A, dtype=complex)
        S0 = np.asarray(self.S0, dtype=complex)
        Pi0 = np.asarray(self.Pi0, dtype=complex)
        n = A.shape[0]
        if A.shape != (n, n) or S0.shape != (n, n) or Pi0.shape != (n, self.ctx.m):
            raise ValueError("inconsistent parameter shapes")
        if np.linalg.svd(A, compute_uv=False)[-1] < 1e-12 * max(np.linalg.norm(A), 1.0):
            raise ValueError("A must be invertible")
        scale = max(np.linalg.norm(A) * np.linalg.norm(S0), np.linalg.norm(Pi0) ** 2, 1.0)
        if herm_residual(S0) > 1e-10 * scale:
            raise IdentityViolated("S0 must be Hermitian")
        resid = np.linalg.norm(A @ S0 - S0 @ A.conj().T - 1j * Pi0 @ self.ctx.j @ Pi0.conj().T)
        if resid > 1e-9 * scale:
            raise IdentityViolated(f"parameter identity residual {resid:.3e}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "S0", S0)
        object.__setattr__(self, "Pi0", Pi0)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def Phi(self) -> np.ndarray:
        return self.Pi0[:, : self.ctx.p]

    @property
    def Psi(self) -> np.ndarray:
        return self.Pi0[:, self.ctx.p:]

    @property
    def s0_positive(self) -> bool:
        return min_eig(self.S0) > 0


@dataclass(frozen=True)
class BdtState:
    """Snapshot (k, Pi_k, S_k) of the generating recursion."""

    k: int
    Pi: np.ndarray
    S: np.ndarray


def _s_solve(S: np.ndarray, B: np.ndarray, pd_path: bool,
             policy: NumericPolicy) -> np.ndarray:
    """Apply S^{-1}: Cholesky when S > 0, LU with condition monitoring else."""
    if pd_path:
        return pd_solve(S, B, policy)
    if np.linalg.cond(S) > policy.cond_limit:
        raise SingularS("S_k is numerically singular")
    return np.linalg.solve(S, B)


def _states(params: BdtParameters, count: int,
            policy: NumericPolicy = DEFAULT_POLICY) -> list[BdtState]:
    """Run the recursion, returning states for k = 0..count-1 and re-verifying
    the step identity A S_k - S_k A* = i Pi_k j Pi_k* at every step."""
    A, j = params.A, params.ctx.j
    Ainv = np.linalg.inv(A)
    Pi, S = params.Pi0, params.S0
    pd_path = params.s0_positive
    out = []
    for k in range(count):
        resid = np.linalg.norm(A @ S - S @ A.conj().T - 1j * Pi @ j @ Pi.conj().T)
        scale = max(np.linalg.norm(S) * np.linalg.norm(A), 1.0)
        if resid > 1e-9 * scale:
            raise IdentityViolated(f"step identity residual {resid:.3e} at k={k}")
        if pd_path and min_eig(S) <= 0:
            raise SingularS(f"S_{k} lost positive definiteness")
        out.append(BdtState(k=k, Pi=Pi, S=(S + S.conj().T) / 2))
        Pi_next = Pi + 1j * Ainv @ Pi @ j
        S_next = S + Ainv @ S @ Ainv.conj().T + Ainv @ (Pi @ Pi.conj().T) @ Ainv.conj().T
        Pi, S = Pi_next, (S_next + S_next.conj().T) / 2
    return out


def generate(params: BdtParameters, N: int,
             policy: NumericPolicy = DEFAULT_POLICY):
    """Pseudo-exponential potentials C_0..C_N with their recursion states.

    C_k = I + Pi_k* S_k^{-1} Pi_k - Pi_{k+1}* S_{k+1}^{-1} Pi_{k+1}. With
    S0 > 0 every S_k and C_k is positive definite and the output passes
    ``system.validate``.
    """
    states = _states(params, N + 2, policy)
    pd_path = params.s0_positive
    m = params.ctx.m
    terms = [st.Pi.conj().T @ _s_solve(st.S, st.Pi, pd_path, policy) for st in states]
    C = []
    for k in range(N + 1):
        Ck = np.eye(m, dtype=complex) + terms[k] - terms[k + 1]
        C.append((Ck + Ck.conj().T) / 2)
    return PotentialSequence(ctx=params.ctx, C=tuple(C)), states


def normalize(params: BdtParameters, policy: NumericPolicy = DEFAULT_POLICY) -> BdtParameters:
    """Equivalent parameters with S0 = I: (S0^{-1/2} A S0^{1/2}, I, S0^{-1/2} Pi0)."""
    root = hermitian_sqrt(params.S0, policy)
    root_inv = np.linalg.inv(root)
    return BdtParameters(
        ctx=params.ctx,
        A=root_inv @ params.A @ root,
        S0=np.eye(params.n, dtype=complex),
        Pi0=root_inv @ params.Pi0,
    )


def transfer(params: BdtParameters, state: BdtState, lam: complex,
             policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Transfer matrix function w_A(k, lambda) = I - i j Pi_k* S_k^{-1} (A - lambda I)^{-1} Pi_k."""
    A = params.A
    n = params.n
    res = A - lam * np.eye(n, dtype=complex)
    if np.linalg.cond(res) > policy.cond_limit:
        raise ResolventSingular(f"lambda={lam} is too close to the spectrum of A")
    X = np.linalg.solve(res, state.Pi)
    Y = _s_solve(state.S, X, params.s0_positive, policy)
    return np.eye(params.ctx.m, dtype=complex) - 1j * params.ctx.j @ state.Pi.conj().T @ Y


def explicit_fundamental(params: BdtParameters, k: int, lam: complex,
                         states=None, policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Closed-form fundamental solution
    W_k(lambda) = w_A(k, lambda) (I - (i/lambda) j)^k w_A(0, lambda)^{-1}."""
    if lam == 0:
        raise LambdaZero("lambda must be nonzero")
    if k < 1:
        raise ValueError("explicit representation starts at k = 1")
    if states is None:
        states = _states(params, k + 1, policy)
    p = params.ctx.p
    w_k = transfer(params, states[k], lam, policy)
    w_0 = transfer(params, states[0], lam, policy)
    if np.linalg.cond(w_0) > policy.cond_limit:
        raise SingularW0("w_A(0, lambda) is numerically singular")
    mid = np.diag(np.concatenate([
        np.full(p, (1 - 1j / lam) ** k),
        np.full(p, (1 + 1j / lam) ** k),
    ])).astype(complex)
    return w_k @ mid @ np.linalg.inv(w_0)


def explicit_weyl(params: BdtParameters, lam: complex,
                  policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Identity-convention Weyl function of the generated system:

        phi_I(lambda) = -i Phi* S0^{-1} (A_x - lambda I)^{-1} Psi,
        A_x = A + i Psi Psi* S0^{-1}.

    Requires S0 > 0; strictly contractive in the open lower half-plane.
    """
    if not params.s0_positive:
        raise NotPositiveDefinite("the Weyl function requires S0 > 0")
    n = params.n
    S0_inv = np.linalg.inv(params.S0)
    Across = params.A + 1j * params.Psi @ params.Psi.conj().T @ S0_inv
    res = Across - lam * np.eye(n, dtype=complex)
    if np.linalg.cond(res) > policy.cond_limit:
        raise ResolventSingular(f"lambda={lam} is a pole of the Weyl function")
    return -1j * params.Phi.conj().T @ S0_inv @ np.linalg.solve(res, params.Psi)


def explicit_partial_sum(params: BdtParameters, lam: complex, r: int,
                         states=None, policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Partial Weyl sum of the generated system with its own Weyl function,
    evaluated through the transfer matrix instead of step-by-step propagation.

    Telescoping the one-step j-relation collapses the sum to boundary terms:

        sum_{k<=r} q^k u_k* C_k u_k
            = c (q^{r+1} u_{r+1}* j u_{r+1} - (phi* phi - I)),
        u_k = W_k [phi; I],   c = (|lambda|^2 + 1) / (i (lambda - conj(lambda))),

    and the remaining j-form has the closed expression

        q^{r+1} u_{r+1}* j u_{r+1}
            = rho^{r+1} d^{-*} [0 I] w_A(r+1)* j w_A(r+1) [0; I] d^{-1},
        rho = |lambda + i|^2 / (|lambda|^2 + 1),   d = lower-right block of w_A(0).

    Step-by-step accumulation mixes the decaying column u_k with the growing
    solution at roundoff level, which overwhelms the sum for large r; this
    form stays accurate for arbitrary r and is the one to use when checking
    the half-plane Weyl bound deep into the sequence.
    """
    if lam.imag >= 0:
        raise ValueError("partial Weyl sums are evaluated in the open lower half-plane")
    if not params.s0_positive:
        raise NotPositiveDefinite("the Weyl function requires S0 > 0")
    if states is None:
        states = _states(params, r + 2, policy)
    p = params.ctx.p
    j = params.ctx.j
    phi = explicit_weyl(params, lam, policy)
    w0 = transfer(params, states[0], lam, policy)
    d = w0[p:, p:]
    if np.linalg.cond(d) > policy.cond_limit:
        raise SingularW0("the lower-right block of w_A(0, lambda) is numerically singular")
    w_next = transfer(params, states[r + 1], lam, policy)
    col = np.linalg.solve(d, np.eye(p, dtype=complex))
    v = w_next[:, p:] @ col
    rho = abs(lam + 1j) ** 2 / (abs(lam) ** 2 + 1)
    c = (abs(lam) ** 2 + 1) / (1j * (lam - np.conj(lam)))
    tail = rho ** (r + 1) * (v.conj().T @ j @ v)
    out = c * (tail - (phi.conj().T @ phi - np.eye(p, dtype=complex)))
    return (out + out.conj().T) / 2


@dataclass(frozen=True)
class WeylRealization:
    """State-space data (theta, PhiT, PsiT) of a rational, strictly proper
    matrix function contractive in the lower half-plane."""

    ctx: SignatureContext
    theta: np.ndarray = field(repr=False)
    PhiT: np.ndarray = field(repr=False)
    PsiT: np.ndarray = field(repr=False)

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=complex)
        PhiT = np.asarray(self.PhiT, dtype=complex)
        PsiT = np.asarray(self.PsiT, dtype=complex)
        n = theta.shape[0]
        p = self.ctx.p
        if theta.shape != (n, n) or PhiT.shape != (n, p) or PsiT.shape != (n, p):
            raise ValueError("inconsistent realization shapes")
        scale = max(np.linalg.norm(theta), np.linalg.norm(PhiT) ** 2,
                    np.linalg.norm(PsiT) ** 2, 1.0)
        resid = np.linalg.norm(
            theta - theta.conj().T
            - 1j * (PhiT @ PhiT.conj().T + PsiT @ PsiT.conj().T))
        if resid > 1e-8 * scale:
            raise InvariantViolated(f"realization identity residual {resid:.3e}")
        A = theta - 1j * PsiT @ PsiT.conj().T
        if np.linalg.svd(A, compute_uv=False)[-1] < 1e-12 * max(np.linalg.norm(A), 1.0):
            raise InvariantViolated("theta - i PsiT PsiT* must be invertible")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "PhiT", PhiT)
        object.__setattr__(self, "PsiT", PsiT)

    @property
    def n(self) -> int:
        return self.theta.shape[0]

    def value(self, lam: complex) -> np.ndarray:
        """The realized function -i PhiT* (theta - lambda I)^{-1} PsiT."""
        res = self.theta - lam * np.eye(self.n, dtype=complex)
        return -1j * self.PhiT.conj().T @ np.linalg.solve(res, self.PsiT)


def realization_to_params(rz: WeylRealization) -> BdtParameters:
    """Inverse problem from a realization: A = theta - i PsiT PsiT*, S0 = I,
    Pi0 = [PhiT PsiT]. The generated system has Weyl function ``rz.value``."""
    return BdtParameters(
        ctx=rz.ctx,
        A=rz.theta - 1j * rz.PsiT @ rz.PsiT.conj().T,
        S0=np.eye(rz.n, dtype=complex),
        Pi0=np.hstack([rz.PhiT, rz.PsiT]),
    )


def example41_params(a: float, Phi: complex, Psi: complex) -> BdtParameters:
    """Scalar oracle parameters: n = p = 1, A = a, S0 = 1, Pi0 = [Phi Psi]."""
    if a == 0 or a != np.real(a):
        raise ValueError("a must be real and nonzero")
    if abs(abs(Phi) - abs(Psi)) > 1e-12 * max(abs(Phi), 1.0):
        raise ModulusMismatch("|Phi| must equal |Psi|")
    return BdtParameters(
        ctx=SignatureContext(p=1),
        A=np.array([[a]], dtype=complex),
        S0=np.array([[1.0]], dtype=complex),
        Pi0=np.array([[Phi, Psi]], dtype=complex),
    )


def example41(a: float, Phi: complex, Psi: complex, k: int):
    """Closed-form oracle for the scalar one-dimensional parameter family.

    Returns (C_k, phi) where C_k is the 2 x 2 coefficient at step ``k`` and
    ``phi`` evaluates the identity-convention Weyl function
    i conj(Phi) Psi / (lambda - a - i |Psi|^2).
    """
    if a == 0 or a != np.real(a):
        raise ValueError("a must be real and nonzero")
    if abs(abs(Phi) - abs(Psi)) > 1e-12 * max(abs(Phi), 1.0):
        raise ModulusMismatch("|Phi| must equal |Psi|")
    zeta = 2 * abs(Phi) ** 2 / (a ** 2 + 1)
    diag = 1 + zeta * abs(Phi) ** 2 / ((k * zeta + 1) * ((k + 1) * zeta + 1))
    ratio = (a + 1j) / (a - 1j)
    c21 = Phi * np.conj(Psi) * (ratio ** k / (k * zeta + 1)
                                - ratio ** (k + 1) / ((k + 1) * zeta + 1))
    C = np.array([[diag, np.conj(c21)], [c21, diag]], dtype=complex)

    def phi(lam: complex) -> complex:
        return 1j * np.conj(Phi) * Psi / (lam - a - 1j * abs(Psi) ** 2)

    return C, phi


def random_bdt_parameters(rng: np.random.Generator, n: int, p: int,
                          normalized: bool = False,
                          max_tries: int = 500) -> BdtParameters:
    """Random parameter triple with S0 > 0.

    S0 (positive definite) and Pi0 are drawn freely. Splitting A S0 into a
    Hermitian part X and the skew part (i/2) Pi0 j Pi0* makes the parameter
    identity hold by construction:

        A = (X + (i/2) Pi0 j Pi0*) S0^{-1},   X = X*,

    so A S0 - S0 A* = i Pi0 j Pi0* exactly, for every draw. The identity is
    invariant under (A, S0, Pi0) -> (c A, S0, sqrt(c) Pi0) for real c > 0;
    that freedom is used to pin the smallest singular value of A at 1, which
    keeps the generating recursion (driven by powers of A^{-1}) from blowing
    up over the step counts the tests use. Ill-conditioned draws are rejected.
    """
    ctx = SignatureContext(p=p)
    j = ctx.j
    for _ in range(max_tries):
        W = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        S0 = W @ W.conj().T + 0.5 * np.eye(n)
        X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        X = (X + X.conj().T) / 2
        Pi0 = 0.4 * (rng.standard_normal((n, 2 * p)) + 1j * rng.standard_normal((n, 2 * p)))
        A = (X + 0.5j * Pi0 @ j @ Pi0.conj().T) @ np.linalg.inv(S0)
        sv = np.linalg.svd(A, compute_uv=False)
        if sv[-1] < 1e-6 or sv[0] / sv[-1] > 20.0:
            continue
        c = 1.0 / sv[-1]
        params = BdtParameters(ctx=ctx, A=c * A, S0=(S0 + S0.conj().T) / 2,
                               Pi0=np.sqrt(c) * Pi0)
        return normalize(params) if normalized else params
    raise RuntimeError("could not draw a well-conditioned parameter matrix")
