"""Time evolution under ``H(t) = H_PXP - h sin(omega_d t) N``.

Each substep of length ``dt`` uses a symmetric (Strang) splitting: a
diagonal drive phase over the first half, the static kernel
``exp(-i H_PXP dt)``, and the drive phase over the second half. The drive
phase integrates ``h sin(omega_d t)`` analytically, so only the splitting
error of order ``dt**2`` remains. Consecutive half-step phases are merged,
which leaves one dense product per substep.

The kernel depends on ``(L, omega_rabi, dt)`` only, so it is cached and
reused across drive amplitudes, columns and periods.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .basis import BlockadedBasis, enumerate_basis
from .exceptions import IntegrationError, InvalidStateError
from .operators import DriveParams, build_number_diagonal, build_pxp
from .states import StateVector
from .validation import check_steps

DEFAULT_STEPS = 512
NORM_DRIFT_LIMIT = 1e-6


@lru_cache(maxsize=8)
def pxp_spectrum(L: int, omega_rabi: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and orthonormal eigenvectors of the dense PXP Hamiltonian."""
    H = build_pxp(enumerate_basis(L), omega_rabi).toarray().real
    energies, vectors = np.linalg.eigh(H)
    energies.flags.writeable = False
    vectors.flags.writeable = False
    return energies, vectors


@lru_cache(maxsize=16)
def static_kernel(L: int, dt: float, omega_rabi: float = 1.0) -> np.ndarray:
    """``exp(-i H_PXP dt)`` from the cached spectral decomposition."""
    energies, vectors = pxp_spectrum(L, omega_rabi)
    K = (vectors * np.exp(-1j * energies * dt)) @ vectors.T
    K.flags.writeable = False
    return K


def _drive_integral(h, omega_d: float, ta: float, tb: float):
    """``integral_{ta}^{tb} h sin(omega_d t) dt``; ``h`` may be an array."""
    return np.asarray(h, dtype=float) * (np.cos(omega_d * ta) - np.cos(omega_d * tb)) / omega_d


def evolve(
    amplitudes: np.ndarray,
    L: int,
    t0: float,
    t1: float,
    h,
    omega_d: float,
    steps: int,
    omega_rabi: float = 1.0,
) -> np.ndarray:
    """Raw split-step evolution of a vector or of a matrix of column states.

    ``h`` is either a scalar or an array with one amplitude per column of
    ``amplitudes``, which lets a single kernel sweep many drive amplitudes
    at once. No norm checks are performed here.
    """
    psi = np.array(amplitudes, dtype=complex)
    if t1 == t0:
        return psi
    dt = (t1 - t0) / steps
    K = static_kernel(L, dt, omega_rabi)
    numbers = build_number_diagonal(enumerate_basis(L))
    h = np.asarray(h, dtype=float)
    batched = h.ndim == 1
    if batched and (psi.ndim != 2 or psi.shape[1] != h.size):
        raise ValueError("batched h needs one column of amplitudes per drive amplitude")

    def phase(ta, tb):
        # H contains -V(t) N, so the drive factor is exp(+i N integral V)
        angle = _drive_integral(h, omega_d, ta, tb)
        if batched:
            return np.exp(1j * np.outer(numbers, angle))
        factor = np.exp(1j * numbers * angle)
        return factor if psi.ndim == 1 else factor[:, None]

    half = 0.5 * dt
    psi *= phase(t0, t0 + half)
    for k in range(steps):
        psi = K @ psi
        t_mid = t0 + k * dt + half
        t_next = t1 if k == steps - 1 else t_mid + dt
        psi *= phase(t_mid, t_next)
    return psi


def propagate(
    state: StateVector,
    t0: float,
    t1: float,
    params: DriveParams,
    steps: int = DEFAULT_STEPS,
) -> StateVector:
    """Evolve ``state`` from ``t0`` to ``t1`` with ``steps`` split-step substeps.

    Raises:
        IntegrationError: if the norm drifts by more than ``1e-6``.
    """
    if t1 < t0:
        raise ValueError("t1 must not precede t0")
    steps = check_steps(steps)
    if t1 == t0:
        return state
    psi = evolve(
        state.amplitudes, state.basis.L, t0, t1, params.h, params.omega_d, steps,
        params.omega_rabi,
    )
    drift = abs(np.linalg.norm(psi) - 1.0)
    if drift > NORM_DRIFT_LIMIT:
        raise IntegrationError(f"norm drift {drift:.3e} after propagation")
    # renormalize away round-off so the result satisfies the StateVector contract
    return StateVector(state.basis, psi / np.linalg.norm(psi), state.label)


@dataclass(frozen=True, eq=False)
class PropagatorMatrix:
    """Dense one-period Floquet operator ``U(T, 0)``."""

    basis: BlockadedBasis
    U: np.ndarray
    params: DriveParams
    steps: int

    @property
    def dim(self) -> int:
        return self.basis.size

    def unitarity_error(self) -> float:
        return unitarity_error(self.U)


def unitarity_error(U: np.ndarray) -> float:
    """``max |U^dagger U - 1|``."""
    return float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))


def one_period_propagator(
    basis: BlockadedBasis, params: DriveParams, steps: int = DEFAULT_STEPS
) -> PropagatorMatrix:
    """Propagate every basis vector over one drive period.

    Raises:
        IntegrationError: if the result is not unitary to ``1e-6``.
    """
    steps = check_steps(steps, minimum=16)
    U = evolve(
        np.eye(basis.size, dtype=complex), basis.L, 0.0, params.period, params.h,
        params.omega_d, steps, params.omega_rabi,
    )
    err = unitarity_error(U)
    if err > NORM_DRIFT_LIMIT:
        raise IntegrationError(f"propagator unitarity violated by {err:.3e}")
    return PropagatorMatrix(basis, U, params, steps)


def orbit_amplitudes(U: np.ndarray, psi0: np.ndarray, n_max: int) -> np.ndarray:
    """Rows ``U**n psi0`` for ``n = 0..n_max`` by repeated application."""
    out = np.empty((n_max + 1, len(psi0)), dtype=complex)
    out[0] = psi0
    for n in range(1, n_max + 1):
        out[n] = U @ out[n - 1]
    return out


def stroboscopic_orbit(
    U: PropagatorMatrix, psi0: StateVector, n_max: int
) -> list[StateVector]:
    """States at ``t = nT`` for ``n = 0..n_max``."""
    if psi0.basis.L != U.basis.L:
        raise InvalidStateError("state and propagator live on different bases")
    amps = orbit_amplitudes(U.U, psi0.amplitudes, n_max)
    drift = np.max(np.abs(np.linalg.norm(amps, axis=1) - 1.0))
    if drift > NORM_DRIFT_LIMIT:
        raise IntegrationError(f"stroboscopic norm drift {drift:.3e}")
    return [StateVector(psi0.basis, a / np.linalg.norm(a), psi0.label) for a in amps]


def batched_fidelities(
    L: int,
    psi0: np.ndarray,
    h_values,
    omega_d: float,
    n_max: int,
    steps: int = DEFAULT_STEPS,
    omega_rabi: float = 1.0,
) -> tuple[np.ndarray, np.ndarray]:
    """``F(nT)`` for every drive amplitude plus the final norm drift per amplitude.

    Returns ``(fidelity, drift)`` with shapes ``(len(h_values), n_max + 1)``
    and ``(len(h_values),)``. All amplitudes share the static kernel, so each
    substep is a single ``dim x dim`` by ``dim x len(h_values)`` product.
    """
    h_values = np.atleast_1d(np.asarray(h_values, dtype=float))
    period = 2.0 * np.pi / omega_d
    psi0 = np.asarray(psi0, dtype=complex)
    psi = np.repeat(psi0[:, None], h_values.size, axis=1)
    out = np.empty((h_values.size, n_max + 1))
    out[:, 0] = np.abs(psi0.conj() @ psi) ** 2
    for n in range(1, n_max + 1):
        # drive is T-periodic, so every period reuses the window [0, T]
        psi = evolve(psi, L, 0.0, period, h_values, omega_d, steps, omega_rabi)
        out[:, n] = np.abs(psi0.conj() @ psi) ** 2
    drift = np.abs(np.linalg.norm(psi, axis=0) - 1.0)
    return out, drift


def stroboscopic_fidelities(L, psi0, h_values, omega_d, n_max, steps=DEFAULT_STEPS, omega_rabi=1.0):
    """Like :func:`batched_fidelities` but raises on norm drift instead of reporting it."""
    out, drift = batched_fidelities(L, psi0, h_values, omega_d, n_max, steps, omega_rabi)
    if np.max(drift) > NORM_DRIFT_LIMIT:
        raise IntegrationError(f"norm drift {np.max(drift):.3e} in fidelity sweep")
    return out
