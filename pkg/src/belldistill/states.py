"""Bell-diagonal states as dense probability tables over binary labels.

A mixture of tensor products of Bell states on n pairs is fully described by
one weight per 2n-bit label.  The table index of a label is its packed
integer value (see :mod:`belldistill.gf2` for the bit convention), which
makes label-level operations plain array permutations.

States are immutable after construction; weights are validated and
renormalized exactly once, at construction, and any later drift beyond
1e-9 is treated as a bug and raised, never hidden.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import gf2
from .gf2 import BinaryMatrix, BinaryVector

_SUM_TOLERANCE = 1e-9
_NEGATIVE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class PairDistribution:
    """Bell-basis weights of a single pair, in label order 00, 01, 10, 11.

    The first index bit is the phase (plus/minus), the second the parity
    (correlated/anticorrelated), so weights[0] is the target-state weight.
    """

    weights: tuple[float, float, float, float]

    def __post_init__(self) -> None:
        w = tuple(float(x) for x in self.weights)
        if len(w) != 4:
            raise ValueError("a pair distribution has exactly four weights")
        if min(w) < -_NEGATIVE_TOLERANCE:
            raise ValueError(f"negative weight in pair distribution: {min(w)}")
        total = sum(w)
        if abs(total - 1.0) > _SUM_TOLERANCE:
            raise ValueError(f"pair weights sum to {total}, expected 1")
        object.__setattr__(self, "weights",
                           tuple(max(x, 0.0) / total for x in w))

    def weight(self, phase: int, parity: int) -> float:
        return self.weights[2 * (phase & 1) + (parity & 1)]

    @property
    def fidelity(self) -> float:
        return self.weights[0]

    def as_matrix(self) -> np.ndarray:
        """2x2 array indexed [phase][parity]."""
        return np.array(self.weights, dtype=float).reshape(2, 2)


def werner(fidelity: float) -> PairDistribution:
    """Pair with the given target weight and the rest spread evenly.

    Below fidelity 1/4 the pair carries no distillable structure for the
    protocols here, so that range is accepted only with a warning.
    """
    if not 0.0 <= fidelity <= 1.0:
        raise ValueError(f"fidelity {fidelity} outside [0, 1]")
    if fidelity < 0.25:
        warnings.warn("Werner fidelity below 1/4: state is not distillable",
                      stacklevel=2)
    rest = (1.0 - fidelity) / 3.0
    return PairDistribution((fidelity, rest, rest, rest))


class BellDiagonalState:
    """Probability distribution over the 4**n labels of n Bell pairs."""

    __slots__ = ("n", "probs")

    def __init__(self, n: int, probs: Sequence[float] | np.ndarray):
        if not 0 <= n <= gf2.MAX_PAIRS:
            raise ValueError(f"pair count {n} outside supported range 0..{gf2.MAX_PAIRS}")
        arr = np.array(probs, dtype=float)
        if arr.shape != (1 << (2 * n),):
            raise ValueError(f"expected {1 << (2 * n)} weights for n={n}, got {arr.shape}")
        if arr.min(initial=0.0) < -_NEGATIVE_TOLERANCE:
            raise ValueError(f"negative weight in distribution: {arr.min()}")
        np.clip(arr, 0.0, None, out=arr)
        total = arr.sum()
        if abs(total - 1.0) > _SUM_TOLERANCE:
            raise ValueError(f"weights sum to {total}, drifted beyond 1e-9 from 1")
        arr /= total
        arr.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "probs", arr)

    def __setattr__(self, name, value):  # immutability guard
        raise AttributeError("BellDiagonalState is immutable")

    @classmethod
    def _trusted(cls, n: int, arr: np.ndarray) -> "BellDiagonalState":
        """Internal constructor for exact permutations of validated tables."""
        state = object.__new__(cls)
        arr.setflags(write=False)
        object.__setattr__(state, "n", n)
        object.__setattr__(state, "probs", arr)
        return state

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_pairs(cls, pairs: Sequence[PairDistribution]) -> "BellDiagonalState":
        """Product state of independent pairs: p_x = prod_i pair_i(x_i, x_{n+i})."""
        if not pairs:
            raise ValueError("need at least one pair distribution")
        n = len(pairs)
        tensor = np.array([1.0])
        for pair in pairs:
            tensor = np.multiply.outer(tensor, pair.as_matrix())
        tensor = tensor.reshape((2,) * (2 * n))
        # axes currently (phase_1, parity_1, phase_2, ...): regroup halves
        order = [2 * i for i in range(n)] + [2 * i + 1 for i in range(n)]
        return cls(n, tensor.transpose(order).reshape(-1))

    @classmethod
    def point_mass(cls, n: int, label: BinaryVector | None = None) -> "BellDiagonalState":
        probs = np.zeros(1 << (2 * n))
        probs[label.value if label is not None else 0] = 1.0
        return cls(n, probs)

    # -- queries -----------------------------------------------------------

    @property
    def fidelity(self) -> float:
        """Weight of the all-zero label (the all-target Bell product)."""
        return float(self.probs[0])

    def prob(self, label: BinaryVector) -> float:
        if label.length != 2 * self.n:
            raise ValueError("label length does not match pair count")
        return float(self.probs[label.value])

    def as_pair(self) -> PairDistribution:
        if self.n != 1:
            raise ValueError("as_pair needs a single-pair state")
        return PairDistribution(tuple(self.probs))

    # -- label-level local operations ---------------------------------------

    def pauli_shift(self, a: BinaryVector) -> "BellDiagonalState":
        """Relabel x -> x + a (one side applies the Pauli with label a)."""
        if a.length != 2 * self.n:
            raise ValueError("shift label length does not match pair count")
        if a.value == 0:
            return self
        idx = np.arange(len(self.probs), dtype=np.int64)
        return BellDiagonalState._trusted(self.n, self.probs[idx ^ np.int64(a.value)])

    def permute(self, matrix: BinaryMatrix, offset: BinaryVector | None = None
                ) -> "BellDiagonalState":
        """Relabel x -> A x + b for a symplectic A.

        Non-symplectic matrices are refused: only maps preserving the
        commutation structure (A^T P A = P) are realizable by local
        unitaries acting on the two sides.
        """
        two_n = 2 * self.n
        if matrix.shape != (two_n, two_n):
            raise ValueError("matrix shape does not match pair count")
        if not gf2.is_symplectic(matrix):
            raise ValueError(
                "matrix is not symplectic (A^T P A != P): "
                "this label map is not realizable by local unitaries")
        b = 0 if offset is None else offset.value
        if offset is not None and offset.length != two_n:
            raise ValueError("offset length does not match pair count")
        image = _affine_index_map(matrix, b)
        out = np.empty_like(self.probs)
        out[image] = self.probs
        return BellDiagonalState._trusted(self.n, out)

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {"n": self.n, "probs": [float(p) for p in self.probs]}

    @classmethod
    def from_dict(cls, data: dict) -> "BellDiagonalState":
        return cls(int(data["n"]), data["probs"])

    def __repr__(self) -> str:
        return f"BellDiagonalState(n={self.n}, fidelity={self.fidelity:.6g})"


def _affine_index_map(matrix: BinaryMatrix, offset_value: int) -> np.ndarray:
    """Array y with y[x] = A x + b over all packed labels x."""
    length = matrix.ncols
    x = np.arange(1 << length, dtype=np.int64)
    y = np.full(1 << length, offset_value, dtype=np.int64)
    for j, col in enumerate(matrix.column_values()):
        y ^= ((x >> (length - 1 - j)) & 1) * np.int64(col)
    return y


def from_pairs(pairs: Sequence[PairDistribution]) -> BellDiagonalState:
    return BellDiagonalState.from_pairs(pairs)


def fidelity(state: BellDiagonalState) -> float:
    return state.fidelity


def pauli_shift(state: BellDiagonalState, a: BinaryVector) -> BellDiagonalState:
    return state.pauli_shift(a)


def permute(state: BellDiagonalState, matrix: BinaryMatrix,
            offset: BinaryVector | None = None) -> BellDiagonalState:
    return state.permute(matrix, offset)


def random_bell_diagonal(n: int, rng: np.random.Generator) -> BellDiagonalState:
    """Random normalized weight table (for verification suites)."""
    raw = rng.random(1 << (2 * n)) + 1e-12
    return BellDiagonalState(n, raw / raw.sum())
