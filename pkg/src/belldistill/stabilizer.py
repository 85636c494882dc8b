"""Distillation driven by commuting generator measurements and syndrome recovery.

Both sides measure the n-m commuting Pauli observables named by the
generator labels (one side the elementwise complex conjugate); only the
XOR s of the two outcome strings is informative.  At the label level:

* the chance of observing s is the input-weight sum over the coset of the
  generators' symplectic complement selected by s, and
* recovery picks the heaviest coset of the generator span inside it.

Logical output labels need a basis choice inside the complement; the
completed symplectic matrix from :func:`belldistill.gf2.complete_to_symplectic`
fixes it, so the outputs line up entry-by-entry with the permutation engine
built from the same completion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .gf2 import BinaryMatrix, BinaryVector, Coset, Subspace
from .permutation import _embed_value
from .states import BellDiagonalState

_PAULI_TO_BITS = {"I": (0, 0), "X": (0, 1), "Z": (1, 0), "Y": (1, 1)}
_BITS_TO_PAULI = {bits: letter for letter, bits in _PAULI_TO_BITS.items()}


def parse_pauli_string(text: str) -> BinaryVector:
    """Pauli word like "XIZ" to its label: phase half then parity half."""
    phase = parity = 0
    for ch in text:
        try:
            z, x = _PAULI_TO_BITS[ch]
        except KeyError:
            raise ValueError(f"invalid Pauli letter {ch!r} in {text!r}") from None
        phase = (phase << 1) | z
        parity = (parity << 1) | x
    k = len(text)
    return BinaryVector((phase << k) | parity, 2 * k)


def to_pauli_string(label: BinaryVector) -> str:
    """Inverse of :func:`parse_pauli_string`."""
    k = label.pair_count
    return "".join(_BITS_TO_PAULI[(label.bit(i), label.bit(k + i))] for i in range(k))


@dataclass(frozen=True)
class StabilizerProtocol:
    """n pairs, m survivors, and n-m independent commuting generator labels."""

    n: int
    m: int
    generators: tuple[BinaryVector, ...]

    def __post_init__(self) -> None:
        if not 0 <= self.m <= self.n:
            raise ValueError("need 0 <= m <= n")
        if len(self.generators) != self.n - self.m:
            raise ValueError("generator count must equal n - m")
        if self.generators:
            if gf2._check_generators(self.generators) != self.n:
                raise ValueError("generator length does not match the pair count")

    @classmethod
    def from_pauli_strings(cls, strings: "list[str] | tuple[str, ...]",
                           m: int | None = None) -> "StabilizerProtocol":
        gens = tuple(parse_pauli_string(s) for s in strings)
        if not gens:
            raise ValueError("need at least one generator string")
        n = gens[0].pair_count
        return cls(n, n - len(gens) if m is None else m, gens)


@dataclass(frozen=True)
class SyndromeBranch:
    """One syndrome: its probability, representative, recovery, and output."""

    s: BinaryVector
    prob: float
    v: BinaryVector
    u: BinaryVector
    output: BellDiagonalState
    fidelity: float
    unnormalized_fidelity: float
    accepted: bool


def syndrome_of_error(generators: "tuple[BinaryVector, ...] | list[BinaryVector]",
                      error: BinaryVector) -> BinaryVector:
    """Commutation pattern of an error label against each generator."""
    bits = [gf2.sympl_inner(error, g) for g in generators]
    return BinaryVector.from_bits(bits)


def generator_span(proto: StabilizerProtocol) -> Subspace:
    return Subspace.from_vectors(proto.generators, length=2 * proto.n)


def syndrome_distribution(state: BellDiagonalState,
                          proto: StabilizerProtocol) -> np.ndarray:
    """Probability of each syndrome, indexed by its packed integer value.

    Only the XOR of the two sides' outcome strings is modelled: one side's
    raw outcomes are uniform and carry no information (the dense oracle
    demonstrates this).
    """
    if state.n != proto.n:
        raise ValueError("state and protocol disagree on the pair count")
    k = proto.n - proto.m
    perp = gf2.orthogonal_complement(generator_span(proto))
    out = np.empty(1 << k)
    for s in range(1 << k):
        v = _syndrome_representative(proto, BinaryVector(s, k))
        out[s] = gf2.coset_sum(state.probs, Coset(perp, v))
    return out


def _syndrome_representative(proto: StabilizerProtocol,
                             s: BinaryVector) -> BinaryVector:
    if not proto.generators:
        return BinaryVector.zeros(2 * proto.n)
    return gf2.solve_commutation(proto.generators, s)


def _logical_complement(span: Subspace, perp: Subspace) -> list[int]:
    """Extend the generator span's basis to a basis of its complement."""
    rows, pivots = list(span.basis), list(span.pivots)
    extension = []
    for b in perp.basis:
        reduced = gf2._reduce_by(b, rows, pivots, span.length)
        if reduced:
            rows, pivots = gf2._rref(rows + [reduced], span.length)
            extension.append(b)
    return extension


def optimal_recovery(state: BellDiagonalState, proto: StabilizerProtocol,
                     s: BinaryVector) -> BinaryVector:
    """Representative of the heaviest generator-span coset for syndrome s.

    Scans the 4**m cosets of the generator span inside the syndrome's
    complement coset; ties break toward the lexicographically smallest
    coset representative.  Raises for syndromes of probability zero.
    """
    if state.n != proto.n:
        raise ValueError("state and protocol disagree on the pair count")
    span = generator_span(proto)
    perp = gf2.orthogonal_complement(span)
    v = _syndrome_representative(proto, s)
    if gf2.coset_sum(state.probs, Coset(perp, v)) == 0.0:
        raise ValueError(f"syndrome {s} has probability zero")
    extension = _logical_complement(span, perp)
    best_weight = -1.0
    best_rep = 0
    for combo in range(1 << len(extension)):
        rep = v.value
        for i, d in enumerate(extension):
            if (combo >> i) & 1:
                rep ^= d
        coset = Coset(span, BinaryVector(rep, 2 * proto.n))
        weight = gf2.coset_sum(state.probs, coset)
        canonical = coset.offset.value
        if weight > best_weight or (weight == best_weight and canonical < best_rep):
            best_weight = weight
            best_rep = canonical
    return BinaryVector(best_rep, 2 * proto.n)


def run(state: BellDiagonalState, proto: StabilizerProtocol,
        threshold: float | None = None,
        basis: BinaryMatrix | None = None) -> list[SyndromeBranch]:
    """Evaluate every syndrome branch of the protocol exactly.

    `basis` is a symplectic completion of the generators used to name the
    logical output labels; by default the deterministic completion is
    used.  The branch fidelity is the recovery coset's weight over the
    branch weight (the literal expression times 2**(n-m) is reported
    alongside as `unnormalized_fidelity`).  Zero-probability syndromes are
    never produced.  `threshold` defaults to the input fidelity.
    """
    if state.n != proto.n:
        raise ValueError("state and protocol disagree on the pair count")
    if threshold is None:
        threshold = state.fidelity
    n, m = proto.n, proto.m
    k = n - m
    if basis is None:
        basis = gf2.complete_to_symplectic(proto.generators, n, m)
    else:
        if basis.shape != (2 * n, 2 * n) or not gf2.is_symplectic(basis):
            raise ValueError("logical basis must be a symplectic 2n x 2n matrix")
        for i, g in enumerate(proto.generators):
            if basis.column(m + i) != g:
                raise ValueError("logical basis must carry generator i in column m+i")
    span = generator_span(proto)
    perp = gf2.orthogonal_complement(span)

    branches = []
    for s in range(1 << k):
        s_vec = BinaryVector(s, k)
        v = _syndrome_representative(proto, s_vec)
        prob_s = gf2.coset_sum(state.probs, Coset(perp, v))
        if prob_s == 0.0:
            continue
        weights = np.empty(1 << (2 * m))
        for y in range(1 << (2 * m)):
            offset = basis @ BinaryVector(_embed_value(y, s, n, m), 2 * n)
            weights[y] = gf2.coset_sum(state.probs, Coset(span, offset))
        output = BellDiagonalState(m, weights / weights.sum())
        u = optimal_recovery(state, proto, s_vec)
        fid = gf2.coset_sum(state.probs, Coset(span, u)) / prob_s
        branches.append(SyndromeBranch(
            s=s_vec,
            prob=prob_s,
            v=v,
            u=u,
            output=output,
            fidelity=fid,
            unnormalized_fidelity=(1 << k) * fid,
            accepted=fid >= threshold,
        ))
    return branches


__all__ = [
    "StabilizerProtocol", "SyndromeBranch", "parse_pauli_string",
    "to_pauli_string", "syndrome_of_error", "generator_span",
    "syndrome_distribution", "optimal_recovery", "run",
]
