"""Entangled channel pairs and the Bell change-of-basis matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "NORM_WARN_TOL",
    "EntangledPair",
    "Channel",
    "bell_transform",
    "bell_state",
    "pair_determinant",
    "concurrence",
    "validate_pair",
]

# Pairs whose norm deviates from 1 by more than this get renormalized
# with a warning instead of silently.
NORM_WARN_TOL = 1e-6

# Rows are the four Bell states expressed over |00>, |01>, |10>, |11>,
# with the common 1/sqrt(2) prefactor left off so every entry is 0 or +-1.
_BELL_ROWS = np.array(
    [
        [1, 0, 0, 1],
        [1, 0, 0, -1],
        [0, 1, 1, 0],
        [0, 1, -1, 0],
    ],
    dtype=np.float64,
)


@dataclass(frozen=True)
class EntangledPair:
    """One two-qubit channel pair: coefficients of |00>, |01>, |10>, |11>."""

    y: np.ndarray

    def __post_init__(self) -> None:
        y = np.asarray(self.y, dtype=np.complex128).reshape(-1)
        if y.size != 4:
            raise ValueError(f"a pair needs exactly 4 coefficients, got {y.size}")
        if not np.all(np.isfinite(y.view(np.float64))):
            raise ValueError("pair coefficients must be finite")
        object.__setattr__(self, "y", y)

    def amplitude_matrix(self) -> np.ndarray:
        """Coefficients as a 2x2 matrix, first qubit indexing rows."""
        return self.y.reshape(2, 2)

    def squared_norm(self) -> float:
        return float(np.vdot(self.y, self.y).real)

    def norm(self) -> float:
        return float(np.linalg.norm(self.y))


@dataclass(frozen=True)
class Channel:
    """Ordered collection of the pairs shared between sender and receiver."""

    pairs: tuple[EntangledPair, ...]

    def __post_init__(self) -> None:
        pairs = tuple(self.pairs)
        if len(pairs) < 1:
            raise ValueError("a channel needs at least one pair")
        if not all(isinstance(p, EntangledPair) for p in pairs):
            raise ValueError("channel pairs must be EntangledPair instances")
        object.__setattr__(self, "pairs", pairs)

    def __len__(self) -> int:
        return len(self.pairs)


def bell_transform() -> np.ndarray:
    """4x4 change of basis between the Bell basis and |00>,|01>,|10>,|11>.

    The 1/sqrt(2) prefactor is deliberately left out (callers track it),
    so the matrix satisfies T @ T.T == 2*I exactly.
    """
    return _BELL_ROWS.copy()


def bell_state(index: int) -> np.ndarray:
    """Unit-norm Bell state ``index`` (1..4) as a 4-amplitude vector."""
    if index not in (1, 2, 3, 4):
        raise ValueError(f"Bell state index must be in 1..4, got {index}")
    return _BELL_ROWS[index - 1].astype(np.complex128) / np.sqrt(2.0)


def pair_determinant(pair: EntangledPair) -> complex:
    """Determinant of the pair's 2x2 coefficient matrix.

    Nonzero determinant is exactly the condition under which the recovery
    transforms exist; for a normalized pair 2*|det| is the concurrence.
    """
    y = pair.y
    return complex(y[0] * y[3] - y[1] * y[2])


def concurrence(pair: EntangledPair) -> float:
    """2*|det| of the coefficient matrix; the usual measure for normalized pairs."""
    return 2.0 * abs(pair_determinant(pair))


def validate_pair(pair: EntangledPair, tol: float = NORM_WARN_TOL) -> tuple[EntangledPair, bool]:
    """Rescale a pair to unit norm.

    Returns the normalized pair and a flag that is True when the input norm
    deviated from 1 by more than ``tol`` (the caller should surface that as
    a warning).  A zero pair is rejected outright.
    """
    n = pair.norm()
    if n == 0.0:
        raise ValueError("channel pair must not be the zero vector")
    warned = abs(n - 1.0) > tol
    return EntangledPair(pair.y / n), warned
