"""Single-site Bloch vectors, ergodic references and trace distances.

The ergodic reference is the uniform mixture over the blockaded basis, whose
single-site reduction has Bloch vector ``(0, 0, Z_j^erg)``. Time averages are
discrete means over stroboscopic samples ``n = 1..N``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BlockadedBasis, fibonacci
from .operators import build_site_operator
from .propagation import PropagatorMatrix, orbit_amplitudes
from .states import StateVector
from .validation import check_site


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))


def _amplitudes(state) -> np.ndarray:
    return state.amplitudes if isinstance(state, StateVector) else np.asarray(state)


def site_expectations(basis: BlockadedBasis, amplitudes: np.ndarray) -> np.ndarray:
    """``<X_j>, <Y_j>, <Z_j>`` for every site.

    Args:
        basis: Basis of the amplitudes.
        amplitudes: One state ``(dim,)`` or a stack ``(records, dim)``.

    Returns:
        Array of shape ``(..., L, 3)``.
    """
    A = np.atleast_2d(amplitudes)
    prob = np.abs(A) ** 2
    z = prob @ (2.0 * basis.occupations() - 1.0)
    out = np.empty((A.shape[0], basis.L, 3))
    out[:, :, 2] = z
    for site in range(1, basis.L + 1):
        for axis, which in ((0, "X"), (1, "Y")):
            op = build_site_operator(basis, site, which)
            vals = np.sum(A[:, op.rows].conj() * op.values * A[:, op.cols], axis=1)
            out[:, site - 1, axis] = vals.real
    return out[0] if np.ndim(amplitudes) == 1 else out


def bloch_vector(basis: BlockadedBasis, state, site: int) -> BlochVector:
    check_site(site, basis.L)
    psi = _amplitudes(state)
    comps = []
    for which in ("X", "Y", "Z"):
        comps.append(build_site_operator(basis, site, which).expectation(psi).real)
    return BlochVector(*comps)


def ergodic_z(j: int, L: int) -> float:
    """``(F_j F_{L-j+1} - F_{j+1} F_{L-j+2}) / F_{L+2}``."""
    check_site(j, L)
    F = fibonacci
    return (F(j) * F(L - j + 1) - F(j + 1) * F(L - j + 2)) / F(L + 2)


def ergodic_bloch(j: int, L: int) -> BlochVector:
    return BlochVector(0.0, 0.0, ergodic_z(j, L))


def instantaneous_distance(r, r_erg) -> float:
    """Trace distance of two qubit states given by Bloch vectors: half their Euclidean gap."""
    a = r.as_array() if isinstance(r, BlochVector) else np.asarray(r, dtype=float)
    b = r_erg.as_array() if isinstance(r_erg, BlochVector) else np.asarray(r_erg, dtype=float)
    return 0.5 * float(np.linalg.norm(a - b))


def reduced_single_site(basis: BlockadedBasis, state, j: int) -> np.ndarray:
    """Single-site density matrix in the ``(|1>, |0>)`` ordering.

    Built as ``(1 + x X + y Y + z Z) / 2`` from the site's Bloch vector.
    """
    r = bloch_vector(basis, state, j)
    return 0.5 * np.array(
        [[1.0 + r.z, r.x + 1j * r.y], [r.x - 1j * r.y, 1.0 - r.z]], dtype=complex
    )


def signal_std(values) -> float:
    """Population standard deviation of a non-empty sequence."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("signal_std needs at least one value")
    return float(np.std(arr))


@dataclass(frozen=True, eq=False)
class ThermalizationTrace:
    """Stroboscopic record of single-site Bloch vectors.

    Attributes:
        n: Stroboscopic indices ``0..n_max``.
        t: Times ``n * T``.
        bloch: ``(n_max + 1, L, 3)`` per-site Bloch vectors.
        ergodic: ``(L, 3)`` ergodic Bloch vectors.
    """

    n: np.ndarray
    t: np.ndarray
    bloch: np.ndarray
    ergodic: np.ndarray

    @property
    def L(self) -> int:
        return self.bloch.shape[1]

    def __len__(self) -> int:
        return len(self.n)

    @property
    def chain_average(self) -> np.ndarray:
        """``(X(t), Y(t), Z(t))`` per record, shape ``(n_max + 1, 3)``."""
        return self.bloch.mean(axis=1)

    @property
    def chain_ergodic(self) -> np.ndarray:
        return self.ergodic.mean(axis=0)

    @property
    def running_mean(self) -> np.ndarray:
        """Mean Bloch vectors over samples ``1..n``; row ``0`` is NaN."""
        out = np.full_like(self.bloch, np.nan)
        if len(self) > 1:
            csum = np.cumsum(self.bloch[1:], axis=0)
            out[1:] = csum / np.arange(1, len(self))[:, None, None]
        return out

    @property
    def d_inst(self) -> np.ndarray:
        return 0.5 * np.linalg.norm(self.bloch - self.ergodic[None], axis=-1)

    @property
    def d_avg(self) -> np.ndarray:
        return 0.5 * np.linalg.norm(self.running_mean - self.ergodic[None], axis=-1)


def thermalization_trace(U: PropagatorMatrix, psi0: StateVector, n_max: int) -> ThermalizationTrace:
    """Record Bloch vectors of every site at ``t = nT`` for ``n = 0..n_max``."""
    basis = U.basis
    amps = orbit_amplitudes(U.U, psi0.amplitudes, n_max)
    bloch = site_expectations(basis, amps)
    ergodic = np.array([ergodic_bloch(j, basis.L).as_array() for j in range(1, basis.L + 1)])
    n = np.arange(n_max + 1)
    return ThermalizationTrace(n, n * U.params.period, bloch, ergodic)


def time_averaged_distance(trace: ThermalizationTrace, site: int, n: int) -> float:
    """Distance of the mean Bloch vector over samples ``1..n`` from the ergodic one."""
    check_site(site, trace.L)
    if n < 1:
        raise ValueError("time average needs n >= 1")
    if n >= len(trace):
        raise ValueError(f"trace holds samples up to n={len(trace) - 1}")
    mean = trace.bloch[1 : n + 1, site - 1].mean(axis=0)
    return instantaneous_distance(mean, trace.ergodic[site - 1])
