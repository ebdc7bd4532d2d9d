import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from floquet_pxp import (
    DriveParams, NoArcError, build_pxp, decompose, dominant_spacing, enumerate_basis,
    fold_quasi_energy, neel, one_period_propagator, overlaps, polarized, revival_index,
    stroboscopic_orbit, theta_plus,
)
from floquet_pxp.floquet import FloquetDecomposition, OverlapProfile, dominant_levels
from floquet_pxp.propagation import unitarity_error


def test_fold_examples():
    w = 5.0
    assert fold_quasi_energy(0.6 * w, w) == pytest.approx(-0.4 * w, abs=1e-12)
    assert fold_quasi_energy(0.5 * w, w) == pytest.approx(0.5 * w)
    assert fold_quasi_energy(-0.5 * w, w) == pytest.approx(0.5 * w)
    assert fold_quasi_energy(0.1, w) == pytest.approx(0.1, abs=1e-15)


@given(st.floats(-1e3, 1e3), st.floats(0.5, 20.0))
def test_fold_idempotent_and_in_zone(e, w):
    once = fold_quasi_energy(e, w)
    assert -w / 2 <= once <= w / 2
    assert fold_quasi_energy(once, w) == pytest.approx(once, abs=1e-9)


def check_invariants(dec, U):
    assert np.max(np.abs(np.abs(dec.eigenvalues) - 1)) < 1e-8
    assert np.max(np.abs(dec.eigenvalues - np.exp(-1j * dec.quasi_energies * dec.period))) < 1e-8
    assert unitarity_error(dec.eigenvectors) < 1e-8
    assert np.all(np.diff(dec.quasi_energies) >= 0)
    w = dec.omega_d
    assert np.all(dec.quasi_energies > -w / 2) and np.all(dec.quasi_energies <= w / 2)
    assert np.max(np.abs(dec.reconstruct() - U)) < 1e-7


@pytest.mark.parametrize("h, omega_d", [(0.0, 5.0), (2.4, 5.0), (12.024, 5.0), (6.0, 2.0)])
def test_decomposition_invariants(h, omega_d, propagator):
    U = propagator(8, h, omega_d)
    check_invariants(decompose(U), U.U)


def test_decomposition_invariants_l12(decomposition, propagator):
    check_invariants(decomposition(12, 2.4, 5.0), propagator(12, 2.4, 5.0).U)


def test_static_limit_quasi_energies(propagator):
    omega_d = 5.0
    E = np.linalg.eigvalsh(build_pxp(enumerate_basis(8)).toarray().real)
    expected = np.sort(fold_quasi_energy(E, omega_d))
    dec = decompose(propagator(8, 0.0, omega_d))
    assert np.max(np.abs(dec.quasi_energies - expected)) < 1e-8


def summed_by_level(energies, weights, digits=6):
    out = {}
    for e, w in zip(np.round(energies, digits), weights):
        out[e] = out.get(e, 0.0) + w
    return out


def test_static_limit_overlap_oracle(propagator):
    omega_d = 10.0  # zone wider than the L = 8 spectrum, so folding is the identity
    basis = enumerate_basis(8)
    E, V = np.linalg.eigh(build_pxp(basis).toarray().real)
    oracle = summed_by_level(E, np.abs(V.T @ neel(basis).amplitudes.real) ** 2)
    prof = overlaps(decompose(propagator(8, 0.0, omega_d)), neel(basis))
    ours = summed_by_level(*prof.levels())
    assert oracle.keys() == ours.keys()
    for k in oracle:
        assert ours[k] == pytest.approx(oracle[k], abs=1e-8)


def test_bare_matrix_needs_period():
    with pytest.raises(ValueError):
        decompose(np.eye(3))
    dec = decompose(np.diag(np.exp(-1j * np.array([0.1, -0.2, 0.3]))), period=1.0)
    assert np.allclose(dec.quasi_energies, [-0.2, 0.1, 0.3])


def test_overlaps_of_eigenstate_and_completeness(decomposition):
    dec = decomposition(8, 4.0, 5.0)
    prof = overlaps(dec, dec.eigenvectors[:, 7])
    assert prof.weights[7] == pytest.approx(1.0, abs=1e-12)
    assert np.sum(np.delete(prof.weights, 7)) < 1e-12
    for psi in (neel(enumerate_basis(8)), theta_plus(enumerate_basis(8), 0.3)):
        assert abs(overlaps(dec, psi).weights.sum() - 1) < 1e-10


def test_levels_merge_degenerate_weights():
    prof = OverlapProfile(np.array([-1.0, 0.0, 1e-12, 0.5]), np.sqrt([0.1, 0.2, 0.3, 0.4]))
    eps, w = prof.levels()
    assert np.allclose(eps, [-1.0, 5e-13, 0.5])
    assert np.allclose(w, [0.1, 0.5, 0.4])


def test_toy_dominant_spacing():
    prof = OverlapProfile(np.array([0.0, 0.5]), np.sqrt([0.5, 0.5]))
    assert dominant_spacing(prof, eta=0.1) == 0.5
    lone = OverlapProfile(np.array([0.0, 0.5]), np.array([1.0, 0.0]))
    with pytest.raises(NoArcError):
        dominant_spacing(lone, eta=0.1)
    with pytest.raises(ValueError):
        dominant_spacing(prof, eta=1.5)


def test_dominant_spacing_picks_zero_state_neighbour():
    eps = np.array([-0.9, -0.3, -0.05, 0.02, 0.35, 0.6])
    weights = np.array([0.2, 0.2, 0.01, 0.3, 0.25, 0.04])
    prof = OverlapProfile(eps, np.sqrt(weights))
    # 0.02 is the near-zero dominant state; -0.05 and 0.6 are below threshold
    assert dominant_spacing(prof, eta=0.2) == pytest.approx(0.32)
    kept, _ = dominant_levels(prof, eta=0.2)
    assert kept.tolist() == [-0.9, -0.3, 0.02, 0.35]


def test_revival_index():
    assert revival_index(0.625, 5.0) == 8.0
    assert revival_index(0.0, 5.0) == math.inf
    with pytest.raises(ValueError):
        revival_index(-1.0, 5.0)


@pytest.mark.parametrize("h", [0.7, 5.5, 11.0])
def test_stroboscopic_reconstruction_l8(h, propagator, decomposition):
    basis = enumerate_basis(8)
    for psi0 in (neel(basis), polarized(basis), theta_plus(basis, 0.9)):
        orbit = stroboscopic_orbit(propagator(8, h, 5.0), psi0, 200)
        direct = np.abs(np.array([s.amplitudes for s in orbit]) @ psi0.amplitudes.conj()) ** 2
        prof = overlaps(decomposition(8, h, 5.0), psi0)
        assert np.max(np.abs(prof.fidelity(np.arange(201), 2 * np.pi / 5.0) - direct)) < 1e-8


def test_neel_arc_above_bulk(decomposition):
    L = 12
    basis = enumerate_basis(L)
    for h in (2.45, 2.85):
        _, w = overlaps(decomposition(L, h, 5.0), neel(basis)).levels()
        top = np.sort(w)[::-1][: math.ceil(L / 2) + 1]
        assert np.all(top >= 10 * np.median(w))
