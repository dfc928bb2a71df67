"""Per-pair 2x2 blocks of the teleportation map, their tensor products and inverses.

When the sender measures each (input qubit, channel-pair half) pair in the
Bell basis, the receiver's register collapses to a tensor product of 2x2
blocks applied to the input amplitudes, one block per channel pair, selected
by that pair's measurement result.  This module builds those blocks.

For a pair with coefficients (Y1, Y2, Y3, Y4) over |00>,|01>,|10>,|11> and
Bell result r with transform row (t1, t2, t3, t4), the block under the
"receiver holds the first qubit of each pair" convention is

    [[t1*Y1 + t2*Y2,  t3*Y1 + t4*Y2],
     [t1*Y3 + t2*Y4,  t3*Y3 + t4*Y4]]

which for the four results spells out to

    r=1: [[Y1, Y2], [Y3, Y4]]      r=2: [[Y1, -Y2], [Y3, -Y4]]
    r=3: [[Y2, Y1], [Y4, Y3]]      r=4: [[Y2, -Y1], [Y4, -Y3]]

Under the "receiver holds the second qubit" convention the same expression
holds with Y2 and Y3 exchanged.  For a maximally entangled pair
(1/sqrt2, 0, 0, 1/sqrt2) the four blocks reduce to the identity, Z, X and
-iY, each divided by sqrt(2), so recovery is a scaled Pauli.

The common (1/sqrt2)^N prefactor of the collapsed state is NOT folded into
these blocks; the protocol module applies it once.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .channel import Channel, EntangledPair, bell_transform, pair_determinant
from .tensor import tensor_product

__all__ = [
    "DEFAULT_INVERTIBILITY_TOL",
    "PairingConvention",
    "NotInvertibleError",
    "BellOutcome",
    "validate_outcome",
    "sub_matrix",
    "DecompositionMatrix",
    "decomposition_matrix",
    "inverse_sub_matrix",
    "is_proportional_to_unitary",
]

# A pair whose |det| falls at or below this is treated as non-invertible.
DEFAULT_INVERTIBILITY_TOL = 1e-9

# Bell measurement result for each pair, entries in 1..4.
BellOutcome = tuple[int, ...]

_T = bell_transform()


class PairingConvention(Enum):
    """Which qubit of each channel pair the receiver keeps.

    The sender always measures her input qubit against the other half.
    Swapping convention exchanges the two middle pair coefficients, which
    transposes every block.
    """

    BOB_HOLDS_FIRST = "bob-holds-first"
    BOB_HOLDS_SECOND = "bob-holds-second"


class NotInvertibleError(ValueError):
    """Raised when a recovery transform does not exist for some pair(s)."""

    def __init__(self, message: str, pair_indices: Iterable[int] = ()):
        super().__init__(message)
        self.pair_indices = tuple(pair_indices)


def validate_outcome(outcome: Sequence[int], num_pairs: int) -> BellOutcome:
    """Coerce to a tuple of ints and check length and 1..4 range."""
    out = tuple(int(a) for a in outcome)
    if len(out) != num_pairs:
        raise ValueError(f"outcome length {len(out)} does not match {num_pairs} pair(s)")
    if any(a < 1 or a > 4 for a in out):
        raise ValueError(f"Bell results must be in 1..4, got {out}")
    return out


def sub_matrix(pair: EntangledPair, bell_index: int, convention: PairingConvention) -> np.ndarray:
    """2x2 block the receiver's qubit picks up for one pair and one Bell result."""
    if bell_index not in (1, 2, 3, 4):
        raise ValueError(f"Bell result must be in 1..4, got {bell_index}")
    row = _T[bell_index - 1]
    y = pair.y
    if convention is PairingConvention.BOB_HOLDS_FIRST:
        a, b, c, d = y[0], y[1], y[2], y[3]
    elif convention is PairingConvention.BOB_HOLDS_SECOND:
        a, b, c, d = y[0], y[2], y[1], y[3]
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return np.array(
        [
            [row[0] * a + row[1] * b, row[2] * a + row[3] * b],
            [row[0] * c + row[1] * d, row[2] * c + row[3] * d],
        ]
    )


@dataclass(frozen=True)
class DecompositionMatrix:
    """Tensor product of per-pair blocks for one full measurement outcome."""

    matrix: np.ndarray
    outcome: BellOutcome
    convention: PairingConvention


def decomposition_matrix(
    channel: Channel, outcome: Sequence[int], convention: PairingConvention
) -> DecompositionMatrix:
    """Build the 2^N x 2^N map as the tensor product of per-pair blocks.

    Factor i acts on the receiver's qubit from pair i, the first factor on
    the most significant bit.
    """
    out = validate_outcome(outcome, len(channel.pairs))
    blocks = [sub_matrix(p, a, convention) for p, a in zip(channel.pairs, out)]
    return DecompositionMatrix(reduce(tensor_product, blocks), out, convention)


def inverse_sub_matrix(
    pair: EntangledPair,
    bell_index: int,
    convention: PairingConvention,
    tol: float = DEFAULT_INVERTIBILITY_TOL,
) -> np.ndarray:
    """Exact 2x2 inverse of ``sub_matrix``.

    Every block of a pair has determinant +-(Y1*Y4 - Y2*Y3), so a single
    near-zero check on the pair determinant covers all four results.  The
    inverse is generally NOT unitary; it is a scaled unitary exactly when
    the pair is maximally entangled.
    """
    if abs(pair_determinant(pair)) <= tol:
        raise NotInvertibleError(
            f"pair determinant magnitude {abs(pair_determinant(pair)):.3e} is <= {tol:.3e}; "
            "no recovery transform exists"
        )
    m = sub_matrix(pair, bell_index, convention)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]) / det


def is_proportional_to_unitary(
    m: np.ndarray, tol: float = 1e-10
) -> tuple[bool, float | None]:
    """Whether a 2x2 block is a scalar multiple of a unitary.

    True exactly when both singular values agree within ``tol``; the second
    element is then that common singular value (the scale), otherwise None.
    """
    s = np.linalg.svd(np.asarray(m, dtype=np.complex128), compute_uv=False)
    if abs(s[0] - s[1]) <= tol:
        return True, float(s.mean())
    return False, None
