"""Distillation by symplectic relabeling followed by pairwise parity checks.

The protocol relabels the joint Bell-product label by an affine symplectic
map x -> A x + b, measures both qubits of each of the last n-m pairs in the
computational basis, and compares the two sides.  At the label level every
branch statistic is an exact sum of input weights over a coset:

* the branch outcome t keeps the labels in one coset of the symplectic
  complement of the measured subspace, and
* each surviving logical label y collects one coset of the measured
  subspace inside that branch.

Both the coset path (`run`) and an independent dense marginalization path
(`run_direct`) are provided; they must agree to full precision, which the
test suite enforces.

Conditional outputs are renormalized to total weight one.  The literal
coset-ratio expression additionally carries a 2**(n-m) branching factor
that would push the trace above one; that quantity is preserved separately
as `unnormalized_fidelity` for auditing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .gf2 import BinaryMatrix, BinaryVector, Coset, Subspace
from .states import BellDiagonalState, PairDistribution


@dataclass(frozen=True)
class PermutationProtocol:
    """n-to-m protocol: symplectic matrix, affine offset, and the split n/m."""

    n: int
    m: int
    matrix: BinaryMatrix
    offset: BinaryVector

    def __post_init__(self) -> None:
        two_n = 2 * self.n
        if not 0 <= self.m <= self.n:
            raise ValueError("need 0 <= m <= n")
        if self.matrix.shape != (two_n, two_n):
            raise ValueError("matrix must be 2n x 2n")
        if self.offset.length != two_n:
            raise ValueError("offset must have length 2n")
        if not gf2.is_symplectic(self.matrix):
            raise ValueError("protocol matrix is not symplectic (A^T P A != P)")

    @classmethod
    def linear(cls, n: int, m: int, matrix: BinaryMatrix) -> "PermutationProtocol":
        return cls(n, m, matrix, BinaryVector.zeros(2 * n))


@dataclass(frozen=True)
class ProtocolOutcome:
    """One measurement branch: outcome bits, statistics, chosen correction."""

    t: BinaryVector
    prob: float
    output: BellDiagonalState
    correction: BinaryVector
    fidelity: float
    unnormalized_fidelity: float
    accepted: bool


def measured_subspace(proto: PermutationProtocol) -> Subspace:
    """Span of rows n+m+1 .. 2n of A*P (isotropic by symplecticity of A).

    Labels whose difference lies in this subspace are merged by the final
    parity measurement, so its cosets carry all branch statistics.
    """
    ap = proto.matrix @ gf2.symplectic_form(proto.n)
    rows = [ap.row(i) for i in range(proto.n + proto.m, 2 * proto.n)]
    return Subspace.from_vectors(rows, length=2 * proto.n)


def embed_label(y: BinaryVector, t: BinaryVector, n: int, m: int) -> BinaryVector:
    """Spread a logical label y and outcome bits t over the full 2n positions.

    Layout: y's phase bits, then n-m zeros (phases of measured pairs), then
    y's parity bits, then the n-m outcome bits.
    """
    if y.length != 2 * m:
        raise ValueError("logical label must have length 2m")
    if t.length != n - m:
        raise ValueError("outcome must have length n-m")
    return BinaryVector(_embed_value(y.value, t.value, n, m), 2 * n)


def _embed_value(y: int, t: int, n: int, m: int) -> int:
    y_phase = y >> m
    y_parity = y & ((1 << m) - 1)
    return (y_phase << (2 * n - m)) | (y_parity << (n - m)) | t


def optimal_correction(cond: np.ndarray) -> BinaryVector:
    """Logical label of maximal weight; ties break to the smallest label.

    Shifting the conditional distribution by the returned label moves its
    largest weight onto the zero label.
    """
    cond = np.asarray(cond)
    if cond.size == 0:
        raise ValueError("empty conditional distribution")
    size = cond.size
    two_m = (size - 1).bit_length()
    if size != 1 << two_m or two_m % 2:
        raise ValueError("conditional distribution must have 4**m entries")
    return BinaryVector(int(np.argmax(cond)), two_m)


def _effective_table(state: BellDiagonalState, proto: PermutationProtocol,
                     inverse: BinaryMatrix) -> np.ndarray:
    """Input table with a nonzero offset absorbed: q_x = p_{x + A^{-1} b}.

    Running the linear-part coset formulas on q reproduces the full affine
    protocol exactly.
    """
    if proto.offset.value == 0:
        return state.probs
    shift = (inverse @ proto.offset).value
    idx = np.arange(len(state.probs), dtype=np.int64)
    return state.probs[idx ^ np.int64(shift)]


def run(state: BellDiagonalState, proto: PermutationProtocol,
        threshold: float | None = None) -> list[ProtocolOutcome]:
    """Evaluate every parity-outcome branch of the protocol exactly.

    Per branch t: the branch probability is the input-weight sum over one
    coset of the complement of the measured subspace; the conditional
    output weight at logical label y is the sum over one coset of the
    measured subspace, renormalized.  Branches of probability zero are
    never produced.  `threshold` defaults to the input fidelity
    (acceptance requires non-degradation).
    """
    if state.n != proto.n:
        raise ValueError("state and protocol disagree on the pair count")
    if threshold is None:
        threshold = state.fidelity
    n, m = proto.n, proto.m
    k = n - m
    inverse = gf2.symplectic_inverse(proto.matrix)  # equals P A^T P
    q = _effective_table(state, proto, inverse)
    sub = measured_subspace(proto)
    perp = gf2.orthogonal_complement(sub)

    outcomes = []
    for t in range(1 << k):
        off0 = inverse @ BinaryVector(_embed_value(0, t, n, m), 2 * n)
        prob_t = gf2.coset_sum(q, Coset(perp, off0))
        if prob_t == 0.0:
            continue
        weights = np.empty(1 << (2 * m))
        for y in range(1 << (2 * m)):
            offset = inverse @ BinaryVector(_embed_value(y, t, n, m), 2 * n)
            weights[y] = gf2.coset_sum(q, Coset(sub, offset))
        output = BellDiagonalState(m, weights / weights.sum())
        correction = optimal_correction(output.probs)
        fid = float(output.probs[correction.value])
        unnormalized = (1 << k) * float(weights[correction.value]) / prob_t
        outcomes.append(ProtocolOutcome(
            t=BinaryVector(t, k),
            prob=prob_t,
            output=output,
            correction=correction,
            fidelity=fid,
            unnormalized_fidelity=unnormalized,
            accepted=fid >= threshold,
        ))
    return outcomes


def run_direct(state: BellDiagonalState, proto: PermutationProtocol,
               threshold: float | None = None) -> list[ProtocolOutcome]:
    """Same branches via dense marginalization, bypassing coset machinery.

    Relabels all 4**n weights, fixes the parity bits of the measured pairs
    to each outcome, and sums over their phase bits.  Serves as an exact
    independent check of `run`.
    """
    if state.n != proto.n:
        raise ValueError("state and protocol disagree on the pair count")
    if threshold is None:
        threshold = state.fidelity
    n, m = proto.n, proto.m
    k = n - m
    permuted = state.permute(proto.matrix, proto.offset)
    tensor = permuted.probs.reshape((2,) * (2 * n))

    outcomes = []
    for t in range(1 << k):
        indexer: list = [slice(None)] * (2 * n)
        for i in range(k):
            indexer[n + m + i] = (t >> (k - 1 - i)) & 1
        branch = tensor[tuple(indexer)]
        if k:
            branch = branch.sum(axis=tuple(range(m, n)))
        weights = branch.reshape(-1)
        prob_t = float(weights.sum())
        if prob_t == 0.0:
            continue
        output = BellDiagonalState(m, weights / prob_t)
        correction = optimal_correction(output.probs)
        fid = float(output.probs[correction.value])
        unnormalized = (1 << k) * float(weights[correction.value]) / prob_t
        outcomes.append(ProtocolOutcome(
            t=BinaryVector(t, k),
            prob=prob_t,
            output=output,
            correction=correction,
            fidelity=fid,
            unnormalized_fidelity=unnormalized,
            accepted=fid >= threshold,
        ))
    return outcomes


def unnormalized_fidelity(state: BellDiagonalState, proto: PermutationProtocol,
                          t: BinaryVector) -> float:
    """Literal coset-ratio fidelity expression including its 2**(n-m) factor.

    Evaluates 2**(n-m) * (best numerator coset sum) / (branch coset sum)
    without renormalizing, so the value generally exceeds one; it equals
    the normalized branch fidelity times 2**(n-m).  Raises for branches of
    probability zero.
    """
    if t.length != proto.n - proto.m:
        raise ValueError("outcome length must be n-m")
    n, m = proto.n, proto.m
    inverse = gf2.symplectic_inverse(proto.matrix)
    q = _effective_table(state, proto, inverse)
    sub = measured_subspace(proto)
    perp = gf2.orthogonal_complement(sub)
    off0 = inverse @ BinaryVector(_embed_value(0, t.value, n, m), 2 * n)
    denom = gf2.coset_sum(q, Coset(perp, off0))
    if denom == 0.0:
        raise ValueError(f"branch {t} has probability zero")
    best = max(
        gf2.coset_sum(q, Coset(sub, inverse @ BinaryVector(
            _embed_value(y, t.value, n, m), 2 * n)))
        for y in range(1 << (2 * m))
    )
    return (1 << (n - m)) * best / denom


@dataclass(frozen=True)
class RoundReport:
    """One recurrence round: what went in, what came out, what survives."""

    round_index: int
    input_fidelity: float
    branch: BinaryVector
    fidelity: float
    accept_prob: float
    cumulative_yield: float
    accepted: bool
    improved: bool
    output_pair: PairDistribution


def recurrence_sweep(pair: PairDistribution, proto: PermutationProtocol,
                     rounds: int, threshold: float | None = None) -> list[RoundReport]:
    """Iterate the protocol, feeding the surviving pair back in each round.

    Each round builds n identical pairs from the current distribution, runs
    the protocol, and continues from the corrected single-pair output of
    the best accepted branch (requires m = 1).  With no explicit threshold
    a branch is accepted when it does not degrade the current pair
    fidelity.  The cumulative yield multiplies (m/n) times the acceptance
    probability per round.  A non-improving round is reported, not raised;
    if no branch is accepted the sweep continues from the best branch with
    the yield zeroed.
    """
    if proto.m != 1:
        raise ValueError("recurrence mode needs an n -> 1 protocol")
    if rounds < 1:
        raise ValueError("need at least one round")
    reports = []
    current = pair
    cumulative_yield = 1.0
    for round_index in range(1, rounds + 1):
        state = BellDiagonalState.from_pairs([current] * proto.n)
        round_threshold = current.fidelity if threshold is None else threshold
        outcomes = run(state, proto, round_threshold)
        accepted = [o for o in outcomes if o.accepted]
        pool = accepted if accepted else outcomes
        best = max(pool, key=lambda o: (o.fidelity, -o.t.value))
        accept_prob = sum(o.prob for o in accepted)
        cumulative_yield *= (proto.m / proto.n) * accept_prob
        corrected = best.output.pauli_shift(best.correction)
        next_pair = corrected.as_pair()
        reports.append(RoundReport(
            round_index=round_index,
            input_fidelity=current.fidelity,
            branch=best.t,
            fidelity=best.fidelity,
            accept_prob=accept_prob,
            cumulative_yield=cumulative_yield,
            accepted=bool(accepted),
            improved=best.fidelity > current.fidelity,
            output_pair=next_pair,
        ))
        current = next_pair
    return reports
