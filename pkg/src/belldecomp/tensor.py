"""Dense state vectors and the small tensor utilities everything else builds on.

Bit-ordering convention used across the package: qubit 1 is the most
significant bit of an amplitude index and qubit M the least significant.
For a 3-qubit register ``amps[1]`` is therefore the coefficient of |001>.

All operations here are pure functions on immutable values; none of them
mutate their arguments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "DEFAULT_EQ_TOL",
    "NORMALIZATION_TOL",
    "StateVector",
    "QubitPermutation",
    "tensor_product",
    "permute_qubits",
    "fidelity",
]

# Max-abs entry difference used by equality-style checks package-wide.
DEFAULT_EQ_TOL = 1e-10

# A state counts as normalized when |sum(|amp|^2) - 1| stays below this.
NORMALIZATION_TOL = 1e-9


def _finite(arr: np.ndarray) -> bool:
    return bool(np.all(np.isfinite(arr.view(np.float64))))


@dataclass(frozen=True)
class StateVector:
    """Pure state of ``num_qubits`` qubits as a flat array of 2**num_qubits amplitudes."""

    num_qubits: int
    amps: np.ndarray

    def __post_init__(self) -> None:
        if self.num_qubits < 1:
            raise ValueError(f"num_qubits must be >= 1, got {self.num_qubits}")
        amps = np.asarray(self.amps, dtype=np.complex128).reshape(-1)
        expected = 1 << self.num_qubits
        if amps.size != expected:
            raise ValueError(
                f"expected {expected} amplitudes for {self.num_qubits} qubit(s), got {amps.size}"
            )
        if not _finite(amps):
            raise ValueError("amplitudes must be finite")
        object.__setattr__(self, "amps", amps)

    def squared_norm(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def is_normalized(self, tol: float = NORMALIZATION_TOL) -> bool:
        return abs(self.squared_norm() - 1.0) <= tol

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize a zero state")
        return StateVector(self.num_qubits, self.amps / n)


@dataclass(frozen=True)
class QubitPermutation:
    """Reordering of qubit positions.

    ``perm`` is 1-based: after applying, output qubit position k carries
    whatever input qubit position ``perm[k]`` carried.
    """

    perm: tuple[int, ...]

    def __post_init__(self) -> None:
        perm = tuple(int(p) for p in self.perm)
        if sorted(perm) != list(range(1, len(perm) + 1)):
            raise ValueError(f"permutation must be a bijection on 1..{len(perm)}, got {perm}")
        object.__setattr__(self, "perm", perm)

    def __len__(self) -> int:
        return len(self.perm)

    def inverse(self) -> "QubitPermutation":
        inv = [0] * len(self.perm)
        for k, p in enumerate(self.perm, start=1):
            inv[p - 1] = k
        return QubitPermutation(tuple(inv))

    @classmethod
    def identity(cls, num_qubits: int) -> "QubitPermutation":
        return cls(tuple(range(1, num_qubits + 1)))


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two dense matrices.

    Entry ((i1*rows(b) + i2), (j1*cols(b) + j2)) of the result equals
    a[i1, j1] * b[i2, j2].
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError("tensor_product expects 2-D matrices")
    return np.kron(a, b)


def permute_qubits(state: StateVector, permutation: QubitPermutation) -> StateVector:
    """Reindex a state so output qubit k carries input qubit ``perm[k]``.

    Pure reindexing: the multiset of amplitudes, and hence the norm, is
    preserved exactly.
    """
    n = state.num_qubits
    if len(permutation) != n:
        raise ValueError(f"permutation length {len(permutation)} does not match {n} qubit(s)")
    axes = [p - 1 for p in permutation.perm]
    amps = state.amps.reshape((2,) * n).transpose(axes).reshape(-1).copy()
    return StateVector(n, amps)


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2 with both sides normalized; raises on zero-norm input."""
    if a.num_qubits != b.num_qubits:
        raise ValueError(f"qubit count mismatch: {a.num_qubits} vs {b.num_qubits}")
    na2 = a.squared_norm()
    nb2 = b.squared_norm()
    if na2 == 0.0 or nb2 == 0.0:
        raise ValueError("fidelity is undefined for a zero-norm state")
    overlap = np.vdot(a.amps, b.amps)
    return min(1.0, float(abs(overlap) ** 2 / (na2 * nb2)))
