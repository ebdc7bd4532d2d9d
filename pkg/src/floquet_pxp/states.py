"""Initial states on the blockaded basis and the fidelity between two states."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import BlockadedBasis, enumerate_basis
from .exceptions import InvalidStateError

NORM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized amplitudes over a :class:`BlockadedBasis`."""

    basis: BlockadedBasis
    amplitudes: np.ndarray
    label: str = ""

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.basis.size,):
            raise InvalidStateError(
                f"expected {self.basis.size} amplitudes, got shape {amps.shape}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidStateError(f"state norm {norm!r} differs from 1")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.basis.size


def _basis_state(basis: BlockadedBasis, pattern: int, label: str) -> StateVector:
    amps = np.zeros(basis.size, dtype=complex)
    amps[basis.index_map[pattern]] = 1.0
    return StateVector(basis, amps, label)


def neel_pattern(L: int) -> int:
    """Integer pattern with sites 1, 3, 5, ... excited."""
    return sum(1 << b for b in range(0, L, 2))


def polarized(basis: BlockadedBasis) -> StateVector:
    return _basis_state(basis, 0, "polarized")


def neel(basis: BlockadedBasis) -> StateVector:
    return _basis_state(basis, neel_pattern(basis.L), "neel")


def product_state(basis: BlockadedBasis, site_amplitudes, label: str = "product") -> StateVector:
    """Project a product state onto the blockaded subspace and renormalize.

    Args:
        basis: Target basis.
        site_amplitudes: ``(L, 2)`` array of ``(alpha_j, beta_j)``, the
            amplitudes of ``|0>`` and ``|1>`` on site ``j``.
        label: Name stored on the returned state.

    Raises:
        InvalidStateError: if a site is not normalized or nothing survives the
            projection.
    """
    amps = np.asarray(site_amplitudes, dtype=complex)
    if amps.shape != (basis.L, 2):
        raise InvalidStateError(f"site amplitudes must have shape ({basis.L}, 2)")
    site_norms = np.sum(np.abs(amps) ** 2, axis=1)
    if np.any(np.abs(site_norms - 1.0) > NORM_TOL):
        raise InvalidStateError("every site must satisfy |alpha|^2 + |beta|^2 = 1")
    occ = basis.occupations()
    picked = np.where(occ, amps[:, 1][None, :], amps[:, 0][None, :])
    vec = np.prod(picked, axis=1)
    norm2 = float(np.sum(np.abs(vec) ** 2))
    if norm2 < 1e-12:
        raise InvalidStateError("product state has no weight in the blockaded subspace")
    return StateVector(basis, vec / math.sqrt(norm2), label)


def theta_plus(basis: BlockadedBasis, theta: float) -> StateVector:
    """``|theta+> (x) |0> (x) |theta+> (x) |0> ...`` with ``|theta+> = cos|0> + sin|1>``.

    Odd sites carry ``|theta+>`` and even sites are empty, so for odd ``L``
    the chain ends on a ``|theta+>`` site. The support never violates the
    blockade and the state is returned without renormalization.
    """
    if not 0.0 <= theta <= math.pi / 2:
        raise ValueError(f"theta must lie in [0, pi/2], got {theta}")
    # cos(pi/2) is 6e-17 in floating point; pin the endpoints exactly
    c, s = {0.0: (1.0, 0.0), math.pi / 2: (0.0, 1.0)}.get(theta, (math.cos(theta), math.sin(theta)))
    occ = basis.occupations()
    odd = np.zeros(basis.L, dtype=bool)
    odd[0::2] = True
    allowed = ~np.any(occ[:, ~odd], axis=1)
    n_exc = occ[:, odd].sum(axis=1)
    n_odd = int(odd.sum())
    vec = np.where(allowed, s**n_exc * c ** (n_odd - n_exc), 0.0).astype(complex)
    return StateVector(basis, vec, f"theta:{theta!r}")


def fidelity(a: StateVector | np.ndarray, b: StateVector | np.ndarray) -> float:
    """Squared modulus of the overlap of two states."""
    va = a.amplitudes if isinstance(a, StateVector) else np.asarray(a)
    vb = b.amplitudes if isinstance(b, StateVector) else np.asarray(b)
    if va.shape != vb.shape:
        raise InvalidStateError(f"dimension mismatch: {va.shape} vs {vb.shape}")
    return float(abs(np.vdot(va, vb)) ** 2)


def parse_state(spec: str, basis: BlockadedBasis | int) -> StateVector:
    """Build a state from ``"polarized"``, ``"neel"`` or ``"theta:<radians>"``."""
    if isinstance(basis, int):
        basis = enumerate_basis(basis)
    key = spec.strip().lower()
    if key == "polarized":
        return polarized(basis)
    if key == "neel":
        return neel(basis)
    if key.startswith("theta:"):
        try:
            theta = float(key.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"malformed state {spec!r}") from None
        return theta_plus(basis, theta)
    raise ValueError(f"unknown state {spec!r}; use polarized, neel or theta:<radians>")
