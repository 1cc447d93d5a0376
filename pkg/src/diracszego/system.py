"""Discrete self-adjoint Dirac-type systems: validation, propagation, Weyl-disk
evaluation on an interval, and the Herglotz change of convention.

The system is the recursion W_{k+1} = (I - (i/lambda) j C_k) W_k with Hermitian
j-unitary coefficients C_k. All operations are pure functions over immutable
values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    LambdaZero,
    RealLambda,
    SingularDenominator,
    SingularShift,
)
from .linalg import SignatureContext, herm_residual, min_eig
from .policy import DEFAULT_POLICY, NumericPolicy

__all__ = [
    "PotentialSequence",
    "MoebiusPair",
    "StepReport",
    "ValidationReport",
    "validate",
    "propagate",
    "q_weight",
    "summation_residual",
    "weyl_disk_eval",
    "herglotz_map",
    "weyl_partial_sum",
]


@dataclass(frozen=True)
class PotentialSequence:
    """Sequence {C_k}, k = 0..N, of m x m Hermitian j-unitary coefficients."""

    ctx: SignatureContext
    C: tuple = field(repr=False)

    def __post_init__(self):
        C = tuple(np.asarray(c, dtype=complex) for c in self.C)
        if not C:
            raise ValueError("need at least one coefficient matrix")
        m = self.ctx.m
        for k, c in enumerate(C):
            if c.shape != (m, m):
                raise ValueError(f"C_{k} has shape {c.shape}, expected ({m}, {m})")
        object.__setattr__(self, "C", C)

    @property
    def N(self) -> int:
        return len(self.C) - 1

    @property
    def p(self) -> int:
        return self.ctx.p


@dataclass(frozen=True)
class MoebiusPair:
    """Constant nonsingular pair (R, Q) with the j-property
    R*R + Q*Q > 0 and R*R <= Q*Q."""

    R: np.ndarray
    Q: np.ndarray

    def __post_init__(self):
        R = np.asarray(self.R, dtype=complex)
        Q = np.asarray(self.Q, dtype=complex)
        if R.shape != Q.shape or R.shape[0] != R.shape[1]:
            raise ValueError("R and Q must be square of equal size")
        gram = R.conj().T @ R + Q.conj().T @ Q
        if min_eig(gram) <= 0:
            raise ValueError("pair is singular: R*R + Q*Q is not positive definite")
        if min_eig(Q.conj().T @ Q - R.conj().T @ R) < -1e-12 * np.linalg.norm(gram):
            raise ValueError("pair violates R*R <= Q*Q")
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "Q", Q)


@dataclass(frozen=True)
class StepReport:
    k: int
    herm_residual: float
    junitary_residual: float
    min_eig: float
    min_eig_plus_j: float
    min_eig_minus_j: float


@dataclass(frozen=True)
class ValidationReport:
    steps: tuple
    tau_herm: float
    tau_pd: float

    @property
    def passed(self) -> bool:
        return all(
            s.herm_residual <= self.tau_herm
            and s.junitary_residual <= self.tau_herm
            and s.min_eig > 0
            and s.min_eig_plus_j > -self.tau_pd
            and s.min_eig_minus_j > -self.tau_pd
            for s in self.steps
        )

    def failures(self) -> list[str]:
        out = []
        for s in self.steps:
            if s.herm_residual > self.tau_herm:
                out.append(f"C_{s.k}: Hermitian residual {s.herm_residual:.3e}")
            if s.junitary_residual > self.tau_herm:
                out.append(f"C_{s.k}: C j C - j residual {s.junitary_residual:.3e}")
            if s.min_eig <= 0:
                out.append(f"C_{s.k}: min eigenvalue {s.min_eig:.3e} not positive")
            if s.min_eig_plus_j <= -self.tau_pd:
                out.append(f"C_{s.k}: C + j has eigenvalue {s.min_eig_plus_j:.3e}")
            if s.min_eig_minus_j <= -self.tau_pd:
                out.append(f"C_{s.k}: C - j has eigenvalue {s.min_eig_minus_j:.3e}")
        return out


def validate(sys: PotentialSequence, policy: NumericPolicy = DEFAULT_POLICY) -> ValidationReport:
    """Per-step residual report for the structure relations C = C*, C j C = j,
    C > 0 and C +- j >= 0. Never raises; callers decide pass/fail."""
    j = sys.ctx.j
    steps = []
    for k, C in enumerate(sys.C):
        scale = max(np.linalg.norm(C), 1.0)
        steps.append(StepReport(
            k=k,
            herm_residual=herm_residual(C) / scale,
            junitary_residual=float(np.linalg.norm(C @ j @ C - j)) / scale,
            min_eig=min_eig(C),
            min_eig_plus_j=min_eig(C + j),
            min_eig_minus_j=min_eig(C - j),
        ))
    return ValidationReport(steps=tuple(steps), tau_herm=policy.tau_herm, tau_pd=policy.tau_pd)


def propagate(sys: PotentialSequence, lam: complex, k: int) -> np.ndarray:
    """Fundamental solution W_k(lambda) by left-multiplying one-step factors,
    normalized to W_0 = I."""
    if lam == 0:
        raise LambdaZero("the system has a pole at lambda = 0")
    if k < 0 or k > sys.N + 1:
        raise ValueError(f"step index {k} out of range 0..{sys.N + 1}")
    j = sys.ctx.j
    W = np.eye(sys.ctx.m, dtype=complex)
    for r in range(k):
        W = (np.eye(sys.ctx.m, dtype=complex) - (1j / lam) * j @ sys.C[r]) @ W
    return W


def q_weight(lam: complex) -> float:
    """The weight |lambda|^2 / (|lambda|^2 + 1) in (0, 1)."""
    if lam == 0:
        raise LambdaZero("lambda must be nonzero")
    a = abs(lam) ** 2
    return a / (a + 1.0)


def summation_residual(sys: PotentialSequence, lam: complex, r: int) -> float:
    """Norm of the defect in the summation formula

        sum_{k<=r} q^k W_k* C_k W_k
            = (|lambda|^2 + 1) / (i (lambda - conj(lambda)))
              * (q^{r+1} W_{r+1}* j W_{r+1} - j).

    Zero (to rounding) for every valid system; a large value flags either an
    invalid potential or a propagation defect.
    """
    if lam.imag == 0:
        raise RealLambda("summation formula requires Im(lambda) != 0")
    if r > sys.N:
        raise ValueError(f"r={r} exceeds sequence length N={sys.N}")
    j = sys.ctx.j
    q = q_weight(lam)
    m = sys.ctx.m
    lhs = np.zeros((m, m), dtype=complex)
    W = np.eye(m, dtype=complex)
    for k in range(r + 1):
        lhs = lhs + q**k * (W.conj().T @ sys.C[k] @ W)
        W = (np.eye(m, dtype=complex) - (1j / lam) * j @ sys.C[k]) @ W
    coef = (abs(lam) ** 2 + 1) / (1j * (lam - np.conj(lam)))
    rhs = coef * (q ** (r + 1) * (W.conj().T @ j @ W) - j)
    return float(np.linalg.norm(lhs - rhs))


def weyl_disk_eval(sys: PotentialSequence, pair: MoebiusPair, lam: complex,
                   policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Interval Weyl-disk point: the Moebius transform of the pair by the
    rotated fundamental solution cal-W(lambda) = K W_{N+1}(conj(lambda))*.

    Returns phi = i (W21 R + W22 Q)(W11 R + W12 Q)^{-1}.
    """
    if lam.imag > 0:
        raise ValueError("weyl_disk_eval is defined on the closed lower half-plane")
    p = sys.ctx.p
    Wfull = sys.ctx.K @ propagate(sys, np.conj(lam), sys.N + 1).conj().T
    W11, W12 = Wfull[:p, :p], Wfull[:p, p:]
    W21, W22 = Wfull[p:, :p], Wfull[p:, p:]
    den = W11 @ pair.R + W12 @ pair.Q
    if np.linalg.cond(den) > policy.cond_limit:
        raise SingularDenominator("Moebius denominator is numerically singular")
    num = W21 @ pair.R + W22 @ pair.Q
    return 1j * num @ np.linalg.inv(den)


def herglotz_map(phiI: np.ndarray, policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Change of convention phi_K = -i (I - phi_I)(I + phi_I)^{-1}."""
    phiI = np.atleast_2d(np.asarray(phiI, dtype=complex))
    p = phiI.shape[0]
    shift = np.eye(p, dtype=complex) + phiI
    if np.linalg.cond(shift) > policy.cond_limit:
        raise SingularShift("I + phi_I is numerically singular")
    return -1j * (np.eye(p, dtype=complex) - phiI) @ np.linalg.inv(shift)


def weyl_partial_sum(sys: PotentialSequence, phi, lam: complex, r: int,
                     convention: str = "identity") -> np.ndarray:
    """Partial Weyl sum at lambda in the lower half-plane.

    ``phi`` is a callable lambda -> p x p array (scalars are promoted). The
    identity convention sums [phi* I] q^k W_k* C_k W_k [phi; I]; the K
    convention sums [i phi* I] q^k K W_k* C_k W_k K* [-i phi; I]. The result
    is Hermitian and monotone nondecreasing in ``r``.
    """
    if lam.imag >= 0:
        raise ValueError("partial Weyl sums are evaluated in the open lower half-plane")
    if convention not in ("identity", "K"):
        raise ValueError(f"unknown convention {convention!r}")
    if r > sys.N:
        raise ValueError(f"r={r} exceeds sequence length N={sys.N}")
    p, m = sys.ctx.p, sys.ctx.m
    j = sys.ctx.j
    val = np.atleast_2d(np.asarray(phi(lam), dtype=complex))
    if convention == "identity":
        col = np.vstack([val, np.eye(p, dtype=complex)])
        rot = np.eye(m, dtype=complex)
    else:
        col = np.vstack([-1j * val, np.eye(p, dtype=complex)])
        rot = sys.ctx.K
    q = q_weight(lam)
    acc = np.zeros((p, p), dtype=complex)
    W = np.eye(m, dtype=complex)
    for k in range(r + 1):
        Ck = sys.C[k]
        mid = rot @ W.conj().T @ Ck @ W @ rot.conj().T
        acc = acc + q**k * (col.conj().T @ mid @ col)
        W = (np.eye(m, dtype=complex) - (1j / lam) * j @ Ck) @ W
    return (acc + acc.conj().T) / 2
