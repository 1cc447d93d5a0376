"""Shared numeric tolerances.

A single policy value is passed explicitly wherever a tolerance decision is
made, so callers can tighten or relax checks without touching module code.
All matrix tolerances are relative to the norm of the matrix being checked
unless noted otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class NumericPolicy:
    tau_herm: float = 1e-10      # relative asymmetry allowed in Hermitian checks
    tau_pd: float = 1e-10        # relative min-eigenvalue threshold for PD checks
    tau_rank: float = 1e-9       # relative eigenvalue cut for numerical rank
    tau_solve: float = 1e-12     # relative residual allowed in linear solves
    tau_identity: float = 1e-8   # internal structural assertions (Phi1, J-normalization)
    cond_limit: float = 1e12     # resolvents and leading blocks beyond this are singular


DEFAULT_POLICY = NumericPolicy()
