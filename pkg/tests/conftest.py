from functools import lru_cache

import numpy as np
import pytest

from floquet_pxp import DriveParams, decompose, enumerate_basis, one_period_propagator


@lru_cache(maxsize=None)
def cached_propagator(L, h, omega_d, steps=512):
    return one_period_propagator(enumerate_basis(L), DriveParams(h, omega_d), steps)


@lru_cache(maxsize=None)
def cached_decomposition(L, h, omega_d, steps=512):
    return decompose(cached_propagator(L, h, omega_d, steps))


@pytest.fixture(scope="session")
def propagator():
    return cached_propagator


@pytest.fixture(scope="session")
def decomposition():
    return cached_decomposition


def brute_force_patterns(L):
    """All blockaded patterns by filtering every integer below 2**L."""
    return [s for s in range(1 << L) if s & (s >> 1) == 0]


PAULI = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    # ordering (|0>, |1>): <1|Y|0> = i
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([-1.0, 1.0]).astype(complex),
    "N": np.diag([0.0, 1.0]).astype(complex),
    "P": np.diag([1.0, 0.0]).astype(complex),
    "I": np.eye(2, dtype=complex),
}


def full_site_operator(L, ops):
    """Kronecker product on 2**L states; ``ops`` maps site -> label, index bit b = site b+1."""
    out = np.array([[1.0 + 0j]])
    # integer index s = sum bit_b 2**b, so the most significant factor is site L
    for site in range(L, 0, -1):
        out = np.kron(out, PAULI[ops.get(site, "I")])
    return out


def restrict(full, L):
    """Sandwich a full-space operator with the blockaded projector, in basis order."""
    idx = np.array(brute_force_patterns(L))
    return full[np.ix_(idx, idx)]
