"""Rydberg-blockaded computational basis of an open chain.

Site ``j`` (1-based) is stored in bit ``j - 1`` of an integer pattern, so the
least significant bit is the left edge of the chain.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidStateError, SizeError

#: Largest chain length accepted by :func:`enumerate_basis`.
MAX_SITES = 26


def fibonacci(n: int) -> int:
    """Return the n-th Fibonacci number with ``F(1) = F(2) = 1``."""
    if n < 1:
        raise SizeError(f"fibonacci index must be >= 1, got {n}")
    if n > 92:
        # F(93) no longer fits a signed 64-bit integer
        raise SizeError(f"fibonacci({n}) exceeds the int64 range")
    a, b = 1, 1
    for _ in range(n - 1):
        a, b = b, a + b
    return a


def is_blockaded(pattern: int) -> bool:
    return pattern & (pattern >> 1) == 0


@dataclass(frozen=True, eq=False)
class BlockadedBasis:
    """Ascending list of length-``L`` bit patterns without adjacent excitations.

    Attributes:
        L: Number of sites.
        states: Sorted ``int64`` array of admissible patterns.
        index_map: Pattern -> ordinal lookup.
    """

    L: int
    states: np.ndarray
    index_map: dict[int, int] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.states)

    def __len__(self) -> int:
        return len(self.states)

    def lookup(self, pattern: int) -> int:
        """Ordinal of ``pattern`` or ``-1`` when it is not a basis member."""
        return self.index_map.get(int(pattern), -1)

    def occupations(self) -> np.ndarray:
        """Boolean array ``(size, L)``; column ``j - 1`` is the occupation of site ``j``."""
        bits = np.arange(self.L, dtype=np.int64)
        return ((self.states[:, None] >> bits) & 1).astype(bool)

    def dump(self) -> str:
        """Debug listing, one ``ordinal,bits`` line per state (site 1 first)."""
        lines = []
        for k, s in enumerate(self.states):
            bits = "".join("1" if (int(s) >> b) & 1 else "0" for b in range(self.L))
            lines.append(f"{k},{bits}")
        return "\n".join(lines) + "\n"


def enumerate_basis(L: int) -> BlockadedBasis:
    """Enumerate the blockaded subspace of an ``L``-site open chain.

    Patterns are generated recursively (append ``0`` always, append ``1`` only
    after a ``0``), so the cost scales with ``F(L+2)`` rather than ``2**L``.
    """
    if not isinstance(L, (int, np.integer)) or L < 1 or L > MAX_SITES:
        raise SizeError(f"L must be an integer in [1, {MAX_SITES}], got {L!r}")
    L = int(L)
    # ending0 / ending1: patterns over the first k sites whose site k is 0 / 1
    ending0 = np.array([0], dtype=np.int64)
    ending1 = np.array([1], dtype=np.int64)
    for k in range(1, L):
        ending0, ending1 = (
            np.concatenate([ending0, ending1]),
            ending0 | np.int64(1 << k),
        )
    states = np.sort(np.concatenate([ending0, ending1]))
    index_map = {int(s): k for k, s in enumerate(states)}
    return BlockadedBasis(L=L, states=states, index_map=index_map)


def index_of(basis: BlockadedBasis, pattern: int) -> int:
    """Ordinal of a valid blockaded ``pattern``; raises for anything else."""
    pattern = int(pattern)
    if pattern < 0 or pattern >> basis.L:
        raise InvalidStateError(f"pattern {pattern:#b} does not fit in {basis.L} sites")
    if not is_blockaded(pattern):
        raise InvalidStateError(f"pattern {pattern:#b} has adjacent excitations")
    return basis.index_map[pattern]
