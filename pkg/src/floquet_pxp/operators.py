"""PXP Hamiltonian, drive generator and single-site Pauli operators.

Every operator acts on a :class:`~floquet_pxp.basis.BlockadedBasis`; matrix
elements that would leave the blockaded subspace are dropped, which is the
restriction ``P O P`` of the full ``2**L`` operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .basis import BlockadedBasis
from .validation import check_site

PAULI_LABELS = ("X", "Y", "Z", "N")


@dataclass(frozen=True)
class DriveParams:
    """Parameters of ``H(t) = H_PXP - h sin(omega_d t) N`` in units of the Rabi frequency."""

    h: float
    omega_d: float
    omega_rabi: float = 1.0

    def __post_init__(self):
        if not self.omega_d > 0:
            raise ValueError(f"omega_d must be positive, got {self.omega_d}")
        if not math.isfinite(self.h):
            raise ValueError(f"h must be finite, got {self.h}")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega_d


@dataclass(frozen=True, eq=False)
class SparseOperator:
    """Triplet-format operator with entries sorted row-major."""

    dim: int
    rows: np.ndarray
    cols: np.ndarray
    values: np.ndarray
    hermitian: bool = True

    @classmethod
    def from_triplets(cls, dim, rows, cols, values, hermitian=True):
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        values = np.asarray(values, dtype=complex)
        order = np.lexsort((cols, rows))
        return cls(dim, rows[order], cols[order], values[order], hermitian)

    @property
    def nnz(self) -> int:
        return len(self.values)

    def entries(self) -> list[tuple[int, int, complex]]:
        return list(zip(self.rows.tolist(), self.cols.tolist(), self.values.tolist()))

    def tocsr(self) -> sp.csr_matrix:
        return sp.csr_matrix((self.values, (self.rows, self.cols)), shape=(self.dim, self.dim))

    def toarray(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        np.add.at(out, (self.rows, self.cols), self.values)
        return out

    def is_hermitian_closed(self) -> bool:
        """Exact check that ``(r, c, v)`` present implies ``(c, r, conj v)`` present."""
        forward = {(r, c): v for r, c, v in self.entries()}
        return all(forward.get((c, r)) == np.conj(v) for (r, c), v in forward.items())

    def expectation(self, amplitudes: np.ndarray) -> complex:
        psi = np.asarray(amplitudes)
        return complex(np.sum(np.conj(psi[self.rows]) * self.values * psi[self.cols]))


def _flips(basis: BlockadedBasis, bit: int) -> tuple[np.ndarray, np.ndarray]:
    """Ordinal pairs ``(source, target)`` for a single flip of ``bit`` inside the subspace."""
    targets = basis.states ^ np.int64(1 << bit)
    idx = np.searchsorted(basis.states, targets)
    idx = np.minimum(idx, len(basis.states) - 1)
    inside = basis.states[idx] == targets
    return np.flatnonzero(inside), idx[inside]


def build_pxp(basis: BlockadedBasis, omega_rabi: float = 1.0) -> SparseOperator:
    """Open-chain PXP Hamiltonian ``(omega_rabi / 2) sum_j P X_j P``.

    A flip of site ``j`` is allowed exactly when its neighbours are empty, which
    is the same as the flipped pattern remaining in the blockaded basis.
    """
    rows, cols = [], []
    for bit in range(basis.L):
        src, dst = _flips(basis, bit)
        rows.append(dst)
        cols.append(src)
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    values = np.full(len(rows), 0.5 * omega_rabi, dtype=complex)
    return SparseOperator.from_triplets(basis.size, rows, cols, values)


def build_number_diagonal(basis: BlockadedBasis) -> np.ndarray:
    """Total excitation number of every basis pattern."""
    return basis.occupations().sum(axis=1).astype(float)


def build_site_operator(basis: BlockadedBasis, site: int, which: str) -> SparseOperator:
    """Pauli ``X``, ``Y``, ``Z`` or occupation ``N`` on ``site`` (1-based).

    ``Y`` has ``<s'|Y|s> = +i`` when the flip excites the site and ``-i``
    when it de-excites it.
    """
    check_site(site, basis.L)
    which = which.upper()
    if which not in PAULI_LABELS:
        raise ValueError(f"unknown site operator {which!r}; expected one of {PAULI_LABELS}")
    bit = site - 1
    occupied = (basis.states >> bit) & 1
    if which in ("Z", "N"):
        diag = 2.0 * occupied - 1.0 if which == "Z" else occupied.astype(float)
        k = np.arange(basis.size)
        return SparseOperator.from_triplets(basis.size, k, k, diag)
    src, dst = _flips(basis, bit)
    if which == "X":
        values = np.ones(len(src), dtype=complex)
    else:
        values = np.where(occupied[src] == 0, 1j, -1j)
    return SparseOperator.from_triplets(basis.size, dst, src, values)
