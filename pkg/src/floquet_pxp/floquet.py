"""Floquet spectrum of the one-period propagator and derived revival scales."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import DecompositionError, NoArcError
from .propagation import PropagatorMatrix
from .states import StateVector

DEFAULT_ETA = 0.2
RECONSTRUCTION_TOL = 1e-7
DEGENERACY_TOL = 1e-8


def fold_quasi_energy(energy, omega_d: float):
    """Map energies into the Floquet zone ``(-omega_d/2, omega_d/2]``."""
    half = 0.5 * omega_d
    return half - np.mod(half - np.asarray(energy, dtype=float), omega_d)


@dataclass(frozen=True, eq=False)
class FloquetDecomposition:
    """Eigenpairs ``U |m> = exp(-i eps_m T) |m>`` sorted by quasi-energy.

    Attributes:
        quasi_energies: Ascending, inside ``(-omega_d/2, omega_d/2]``.
        eigenvalues: Unit-modulus eigenvalues aligned with ``quasi_energies``.
        eigenvectors: Unitary matrix, column ``m`` is Floquet state ``m``.
        period: Drive period ``T``.
    """

    quasi_energies: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    period: float

    @property
    def omega_d(self) -> float:
        return 2.0 * math.pi / self.period

    @property
    def bandwidth(self) -> float:
        return float(self.quasi_energies[-1] - self.quasi_energies[0])

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


def _orthonormalize_clusters(phases: np.ndarray, vectors: np.ndarray, gap: float = 1e-10):
    order = np.argsort(phases)
    start = 0
    for stop in range(1, len(order) + 1):
        if stop == len(order) or phases[order[stop]] - phases[order[stop - 1]] > gap:
            if stop - start > 1:
                cols = order[start:stop]
                q, _ = np.linalg.qr(vectors[:, cols])
                vectors[:, cols] = q
            start = stop
    return vectors


def decompose(U: PropagatorMatrix | np.ndarray, period: float | None = None) -> FloquetDecomposition:
    """Diagonalize a unitary propagator through its complex Schur form.

    For a normal matrix the Schur factor is diagonal up to round-off, so the
    Schur vectors are already an orthonormal eigenbasis. Near-degenerate
    clusters are re-orthonormalized anyway to guard against round-off.

    Raises:
        DecompositionError: if ``V diag(lambda) V^dagger`` misses ``U`` by
            more than ``1e-7``.
    """
    if isinstance(U, PropagatorMatrix):
        period = U.params.period
        matrix = U.U
    else:
        matrix = np.asarray(U, dtype=complex)
        if period is None:
            raise ValueError("period is required when decomposing a bare matrix")
    T, Z = scipy.linalg.schur(matrix, output="complex")
    lam = np.diag(T).copy()
    phase = np.angle(lam)
    # np.angle lies in (-pi, pi]; move +pi to -pi so that eps = -phase/T ends in (-w/2, w/2]
    phase[phase >= math.pi] -= 2.0 * math.pi
    Z = _orthonormalize_clusters(phase, Z)
    omega_d = 2.0 * math.pi / period
    eps = fold_quasi_energy(-phase / period, omega_d)
    order = np.argsort(eps, kind="stable")
    decomp = FloquetDecomposition(eps[order], lam[order], Z[:, order], period)
    err = float(np.max(np.abs(decomp.reconstruct() - matrix)))
    if err > RECONSTRUCTION_TOL:
        raise DecompositionError(f"eigen-reconstruction error {err:.3e}")
    return decomp


@dataclass(frozen=True, eq=False)
class OverlapProfile:
    """Weights ``|c_m|^2`` of an initial state on the Floquet states."""

    quasi_energies: np.ndarray
    coefficients: np.ndarray
    label: str = ""

    @property
    def weights(self) -> np.ndarray:
        return np.abs(self.coefficients) ** 2

    def levels(self, tol: float = DEGENERACY_TOL) -> tuple[np.ndarray, np.ndarray]:
        """Distinct quasi-energies with the weights of degenerate states summed.

        Degenerate Floquet states (e.g. the PXP zero modes) span a subspace
        whose basis is arbitrary, so only the summed weight is meaningful.
        """
        eps = self.quasi_energies
        w = self.weights
        starts = np.concatenate([[0], np.flatnonzero(np.diff(eps) > tol) + 1])
        merged_w = np.add.reduceat(w, starts)
        merged_eps = np.array([eps[a:b].mean() for a, b in zip(starts, np.append(starts[1:], eps.size))])
        return merged_eps, merged_w

    def fidelity(self, n, period: float) -> np.ndarray:
        """Stroboscopic fidelity ``|sum_m |c_m|^2 exp(-i eps_m n T)|^2``."""
        n = np.atleast_1d(np.asarray(n, dtype=float))
        phases = np.exp(-1j * np.outer(n, self.quasi_energies) * period)
        return np.abs(phases @ self.weights) ** 2


def overlaps(decomp: FloquetDecomposition, psi0: StateVector | np.ndarray, label: str | None = None) -> OverlapProfile:
    """Coefficients ``c_m = <psi0|eps_m>``."""
    vec = psi0.amplitudes if isinstance(psi0, StateVector) else np.asarray(psi0)
    if vec.shape[0] != decomp.eigenvectors.shape[0]:
        raise ValueError("state and decomposition dimensions differ")
    if label is None:
        label = psi0.label if isinstance(psi0, StateVector) else ""
    c = vec.conj() @ decomp.eigenvectors
    return OverlapProfile(decomp.quasi_energies, c, label)


def dominant_levels(profile: OverlapProfile, eta: float = DEFAULT_ETA) -> tuple[np.ndarray, np.ndarray]:
    """Quasi-energies and weights of the levels holding at least ``eta`` of the largest weight."""
    if not 0.0 < eta < 1.0:
        raise ValueError(f"eta must lie in (0, 1), got {eta}")
    eps, w = profile.levels()
    keep = w >= eta * w.max()
    return eps[keep], w[keep]


def dominant_spacing(profile: OverlapProfile, eta: float = DEFAULT_ETA) -> float:
    """Gap between the dominant state closest to zero quasi-energy and its nearest dominant neighbour.

    Raises:
        NoArcError: if fewer than two states pass the ``eta`` threshold.
    """
    eps, _ = dominant_levels(profile, eta)
    if eps.size < 2:
        raise NoArcError(f"only {eps.size} dominant Floquet level(s) at eta={eta}")
    center = int(np.argmin(np.abs(eps)))
    others = np.delete(eps, center)
    return float(np.min(np.abs(others - eps[center])))


def revival_index(delta_eps: float, omega_d: float) -> float:
    """``omega_d / delta_eps``; a vanishing spacing gives ``inf`` (no finite revival)."""
    if delta_eps < 0:
        raise ValueError("delta_eps must be non-negative")
    if delta_eps == 0:
        return math.inf
    return omega_d / delta_eps
