"""Shared fixtures and helpers for the test suite."""

import numpy as np
import pytest

import diracszego as dz


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def ex41_params():
    return dz.example41_params(1.0, 1.0, 1.0)


@pytest.fixture
def ex41_system(ex41_params):
    sys_out, _ = dz.generate(ex41_params, 12)
    return sys_out


@pytest.fixture
def trivial_system():
    ctx = dz.SignatureContext(p=1)
    return dz.PotentialSequence(ctx=ctx, C=tuple(np.eye(2) for _ in range(8)))


def random_schur(rng, N, max_modulus=0.6):
    """Random scalar Schur coefficients with moduli bounded away from 1."""
    mod = rng.uniform(0, max_modulus, N + 1)
    arg = rng.uniform(0, 2 * np.pi, N + 1)
    return dz.SchurCoefficients(rho=tuple(mod * np.exp(1j * arg)))


def disk_taylor(sys, pair, N, radius=0.5, samples=256):
    """Taylor blocks of i * phi(lambda(z)) on |z| = radius for the disk
    Weyl function produced by ``pair``."""
    p = sys.ctx.p
    vals = np.empty((samples, p, p), dtype=complex)
    for m in range(samples):
        z = radius * np.exp(2j * np.pi * m / samples)
        lam = dz.cayley_lambda_of_z(z)
        vals[m] = 1j * dz.weyl_disk_eval(sys, pair, lam)
    spectrum = np.fft.fft(vals, axis=0) / samples
    return [spectrum[k] / radius**k for k in range(N + 1)]


def max_block_dev(seq_a, seq_b):
    return max(float(np.abs(np.asarray(a) - np.asarray(b)).max())
               for a, b in zip(seq_a, seq_b))
