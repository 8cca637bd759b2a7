"""Seedable i.i.d. X-error sampling and syndrome extraction.

Error patterns are uint8 bit-vectors over data qubits; syndromes are
sorted arrays of flipped-ancilla indices.  RNG streams are counter-based
(Philox keyed on (master seed, stream id)), so trial `t` draws the same
pattern whether trials run serially, out of order, or in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import Lattice


@dataclass(frozen=True)
class RngSeed:
    """A (master seed, stream id) pair naming one independent RNG stream."""

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=[self.seed, self.stream]))

    def substream(self, offset: int) -> "RngSeed":
        return RngSeed(self.seed, self.stream + offset)

    def tagged(self, tag: int) -> "RngSeed":
        """Disjoint stream for a side purpose (trial ids stay below 2^48)."""
        return RngSeed(self.seed, self.stream + (tag << 48))


def sample_errors(lat: Lattice, p: float, rng: RngSeed) -> np.ndarray:
    """Flip each data qubit independently with probability p."""
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"error probability must be in [0, 1], got {p}")
    g = rng.generator()
    return (g.random(lat.num_data_qubits) < p).astype(np.uint8)


def extract_syndrome(lat: Lattice, errors: np.ndarray) -> np.ndarray:
    """Sorted indices of ancillas with an odd number of incident errors."""
    errors = np.asarray(errors, dtype=np.uint8)
    if errors.shape != (lat.num_data_qubits,):
        raise ValueError(
            f"error pattern length {errors.shape} does not match lattice "
            f"({lat.num_data_qubits})"
        )
    flipped_qubits = np.flatnonzero(errors)
    hits = np.bincount(lat._end_a[flipped_qubits], minlength=lat.num_syndromes)
    second = lat._end_b[flipped_qubits]
    hits += np.bincount(second[second >= 0], minlength=lat.num_syndromes)
    return np.flatnonzero(hits % 2 == 1).astype(np.int64)
