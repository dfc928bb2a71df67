"""End-to-end teleportation semantics for one input state and one channel.

Everything here is phrased per measurement outcome: the unnormalized
collapsed state of the receiver's register, its squared norm as the Born
probability, the recovery transform, and enumeration or sampling over all
4^N outcomes.  Enumeration order is lexicographic in the per-pair results
and independent of evaluation strategy.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import Channel, EntangledPair, concurrence, pair_determinant
from .decomposition import (
    DEFAULT_INVERTIBILITY_TOL,
    BellOutcome,
    NotInvertibleError,
    PairingConvention,
    inverse_sub_matrix,
    is_proportional_to_unitary,
    sub_matrix,
    validate_outcome,
)
from .tensor import StateVector, fidelity

__all__ = [
    "ENUMERATION_CAP",
    "TeleportationInstance",
    "OutcomeRecord",
    "PairDiagnostics",
    "ChannelReport",
    "collapsed_state",
    "outcome_probability",
    "recover",
    "channel_criterion",
    "enumerate_outcomes",
    "sample_outcome",
    "random_state",
    "random_pair",
    "random_channel",
    "random_instance",
]

# Enumerating 4^N outcomes beyond this is refused rather than attempted.
ENUMERATION_CAP = 8


@dataclass(frozen=True)
class TeleportationInstance:
    """An input state plus the channel it is sent through."""

    input_state: StateVector
    channel: Channel
    convention: PairingConvention

    def __post_init__(self) -> None:
        if self.input_state.num_qubits != len(self.channel.pairs):
            raise ValueError(
                f"input has {self.input_state.num_qubits} qubit(s) but channel has "
                f"{len(self.channel.pairs)} pair(s)"
            )

    @property
    def num_qubits(self) -> int:
        return self.input_state.num_qubits


def _apply_pair_blocks(blocks: Sequence[np.ndarray], amps: np.ndarray, n: int) -> np.ndarray:
    """Apply the tensor product of 2x2 blocks to a 2^n vector.

    Block i acts on qubit i (most significant bit first), without ever
    materializing the full 2^n x 2^n matrix.
    """
    t = amps.reshape((2,) * n)
    for axis, block in enumerate(blocks):
        t = np.moveaxis(np.tensordot(block, t, axes=(1, axis)), 0, axis)
    return t.reshape(-1)


def collapsed_state(inst: TeleportationInstance, outcome: Sequence[int]) -> StateVector:
    """Receiver's register right after the given measurement outcome, unnormalized.

    Equals (1/sqrt2)^N times the outcome's block tensor product applied to the
    input amplitudes; its squared norm is the Born probability of the outcome.
    """
    n = inst.num_qubits
    out = validate_outcome(outcome, n)
    blocks = [sub_matrix(p, a, inst.convention) for p, a in zip(inst.channel.pairs, out)]
    amps = _apply_pair_blocks(blocks, inst.input_state.amps, n) * math.sqrt(0.5) ** n
    return StateVector(n, amps)


def outcome_probability(inst: TeleportationInstance, outcome: Sequence[int]) -> float:
    return collapsed_state(inst, outcome).squared_norm()


def _non_invertible_pairs(channel: Channel, tol: float) -> tuple[int, ...]:
    return tuple(
        i for i, p in enumerate(channel.pairs, start=1) if abs(pair_determinant(p)) <= tol
    )


def recover(
    collapsed: StateVector,
    inst: TeleportationInstance,
    outcome: Sequence[int],
    tol: float = DEFAULT_INVERTIBILITY_TOL,
) -> tuple[StateVector, float]:
    """Undo the outcome's blocks, renormalize, and report fidelity to the input.

    Raises NotInvertibleError naming the offending pair(s) when any pair
    determinant magnitude is at or below ``tol``.
    """
    n = inst.num_qubits
    out = validate_outcome(outcome, n)
    if collapsed.num_qubits != n:
        raise ValueError(f"collapsed state has {collapsed.num_qubits} qubit(s), expected {n}")
    bad = _non_invertible_pairs(inst.channel, tol)
    if bad:
        raise NotInvertibleError(
            f"pair(s) {', '.join(map(str, bad))} have determinant magnitude <= {tol:.3e}; "
            "recovery transform does not exist",
            pair_indices=bad,
        )
    blocks = [
        inverse_sub_matrix(p, a, inst.convention, tol)
        for p, a in zip(inst.channel.pairs, out)
    ]
    recovered = StateVector(n, _apply_pair_blocks(blocks, collapsed.amps, n)).normalized()
    return recovered, fidelity(recovered, inst.input_state)


@dataclass(frozen=True)
class PairDiagnostics:
    """Invertibility and entanglement figures for one pair (1-based index)."""

    index: int
    determinant: complex
    concurrence: float
    invertible: bool
    unitary_proportional: bool
    unitary_scale: float | None


@dataclass(frozen=True)
class ChannelReport:
    """Per-pair diagnostics plus the overall go/no-go verdict.

    ``success`` is True when every pair is invertible, the necessary
    condition for completing the protocol.  ``unitary_proportional`` is
    informational: recovery exists but is non-unitary when it is False.
    """

    pairs: tuple[PairDiagnostics, ...]
    success: bool
    failed_pairs: tuple[int, ...]


def channel_criterion(
    channel: Channel,
    tol: float = DEFAULT_INVERTIBILITY_TOL,
    unitary_tol: float = 1e-10,
) -> ChannelReport:
    """Evaluate whether teleportation through this channel can succeed.

    The block singular values do not depend on the Bell result or the
    pairing convention, so the unitary-proportionality flag is computed
    once per pair from its coefficient matrix.
    """
    diags = []
    for i, p in enumerate(channel.pairs, start=1):
        det = pair_determinant(p)
        unitary, scale = is_proportional_to_unitary(p.amplitude_matrix(), unitary_tol)
        diags.append(
            PairDiagnostics(
                index=i,
                determinant=det,
                concurrence=concurrence(p),
                invertible=abs(det) > tol,
                unitary_proportional=unitary,
                unitary_scale=scale,
            )
        )
    failed = tuple(d.index for d in diags if not d.invertible)
    return ChannelReport(tuple(diags), success=not failed, failed_pairs=failed)


@dataclass(frozen=True)
class OutcomeRecord:
    """One enumerated outcome.

    ``collapsed`` is normalized when the probability is positive and the zero
    vector otherwise; ``recovered_fidelity`` is None instead of NaN when the
    outcome has zero probability or the channel is not invertible.
    """

    outcome: BellOutcome
    probability: float
    collapsed: StateVector
    recovered_fidelity: float | None
    invertible: bool


def enumerate_outcomes(
    inst: TeleportationInstance,
    cap: int = ENUMERATION_CAP,
    tol: float = DEFAULT_INVERTIBILITY_TOL,
    compute_recovery: bool = True,
) -> list[OutcomeRecord]:
    """All 4^N outcome records in lexicographic order of the per-pair results.

    For a normalized instance the probabilities sum to 1 up to float error.
    """
    n = inst.num_qubits
    if n > cap:
        raise ValueError(f"refusing to enumerate 4**{n} outcomes (cap is {cap} qubits)")
    invertible = not _non_invertible_pairs(inst.channel, tol)
    records = []
    for out in itertools.product((1, 2, 3, 4), repeat=n):
        c = collapsed_state(inst, out)
        p = c.squared_norm()
        if p > 0.0:
            collapsed = StateVector(n, c.amps / math.sqrt(p))
        else:
            collapsed = StateVector(n, np.zeros(1 << n, dtype=np.complex128))
        fid = None
        if compute_recovery and invertible and p > 0.0:
            _, fid = recover(collapsed, inst, out, tol)
        records.append(OutcomeRecord(out, p, collapsed, fid, invertible))
    return records


def sample_outcome(inst: TeleportationInstance, seed: int) -> BellOutcome:
    """Draw one outcome from the Born distribution, deterministically per seed.

    Zero-probability outcomes are never produced: the draw inverts the
    cumulative distribution, and empty intervals cannot contain it.
    """
    records = enumerate_outcomes(inst, compute_recovery=False)
    cum = np.cumsum([r.probability for r in records])
    u = np.random.default_rng(seed).random() * cum[-1]
    idx = min(int(np.searchsorted(cum, u, side="right")), len(records) - 1)
    return records[idx].outcome


def random_state(num_qubits: int, rng: np.random.Generator) -> StateVector:
    """Haar-ish normalized state with independent complex normal amplitudes."""
    dim = 1 << num_qubits
    amps = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector(num_qubits, amps).normalized()


def random_pair(rng: np.random.Generator) -> EntangledPair:
    y = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    return EntangledPair(y / np.linalg.norm(y))


def random_channel(num_pairs: int, rng: np.random.Generator) -> Channel:
    return Channel(tuple(random_pair(rng) for _ in range(num_pairs)))


def random_instance(
    num_qubits: int, rng: np.random.Generator, convention: PairingConvention
) -> TeleportationInstance:
    return TeleportationInstance(
        random_state(num_qubits, rng), random_channel(num_qubits, rng), convention
    )
