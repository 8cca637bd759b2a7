"""Turn matchings into data-qubit corrections and classify trials."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import ohq, solvers, some
from .lattice import EXCLUDED, Lattice, ancilla_coord, logical_cut_parity
from .noise import RngSeed, extract_syndrome, sample_errors

DECODERS = ("some", "anneal", "exact")


@dataclass(frozen=True)
class TrialResult:
    success: bool
    logical_failure: bool
    infeasible: bool
    decode_nanos: int
    n_flipped: int
    n_vars_some: int
    n_vars_ohq: int


def path_correction(lat: Lattice, a: int, b: int, rng) -> np.ndarray:
    """Flip the data qubits of one minimal chain with syndrome exactly {a, b}.

    For a == b this is the boundary stub.  When the two L-shaped minimal
    paths between a bulk pair are distinct, an unbiased coin picks the
    horizontal-first or vertical-first orientation.  rng may be an
    RngSeed or an already-open numpy Generator.
    """
    g = rng.generator() if isinstance(rng, RngSeed) else rng
    d = lat.d
    correction = np.zeros(lat.num_data_qubits, dtype=np.uint8)

    if a == b:
        row, col = ancilla_coord(d, a)
        if row == 0:
            correction[lat.top_stub(col)] = 1
        elif row == d:
            correction[lat.bottom_stub(col)] = 1
        else:
            raise ValueError(f"ancilla {a} has no boundary match")
        return correction

    if lat.pair_distance(a, b) is EXCLUDED:
        raise ValueError(f"ancilla pair ({a}, {b}) is not matchable")
    r1, c1 = ancilla_coord(d, a)
    r2, c2 = ancilla_coord(d, b)
    horizontal_first = True
    if r1 != r2 and c1 != c2:
        horizontal_first = bool(g.integers(2))
    if horizontal_first:
        corner_r, corner_c = r1, c2
    else:
        corner_r, corner_c = r2, c1
    # horizontal leg at row corner_r, vertical leg at column corner_c
    for j in range(min(c1, c2), max(c1, c2)):
        correction[lat.horizontal_qubit(corner_r, j)] ^= 1
    for i in range(min(r1, r2), max(r1, r2)):
        correction[lat.vertical_qubit(i, corner_c)] ^= 1
    return correction


def _decode_with(decoder: str, wm: ohq.WeightMatrix, rng: RngSeed, seed_cap: int):
    """Run one decoder; returns (vector or None, feasible)."""
    if decoder == "some":
        outcome = some.decode(wm, seed_cap=seed_cap)
        return outcome.vector, outcome.feasible
    q = ohq.build_qubo(wm, wm.d)
    if decoder == "exact":
        if q.num_variables > solvers.MAX_EXHAUSTIVE_VARS:
            return None, False
        result = solvers.solve_exhaustive(q)
    elif decoder == "anneal":
        result = solvers.solve_anneal(q, solvers.AnnealSchedule(seed=rng.tagged(2)))
    else:
        raise ValueError(f"unknown decoder {decoder!r}")
    vector = ohq.matching_from_assignment(q, result.assignment)
    return vector, vector is not None


def run_trial(
    lat: Lattice,
    p: float,
    decoder: str,
    rng: RngSeed,
    seed_cap: int = some.DEFAULT_SEED_CAP,
) -> TrialResult:
    """Sample, decode, correct, and classify one Monte Carlo trial.

    Timing covers weight-matrix construction plus the decode step only.
    Infeasible decodes (including invalid annealer assignments) are
    recorded as logical failures, never raised.
    """
    errors = sample_errors(lat, p, rng)
    return classify_pattern(lat, errors, decoder, rng, seed_cap=seed_cap)


def classify_pattern(
    lat: Lattice,
    errors: np.ndarray,
    decoder: str,
    rng: RngSeed,
    seed_cap: int = some.DEFAULT_SEED_CAP,
) -> TrialResult:
    """Decode and classify a fixed error pattern."""
    syndrome = extract_syndrome(lat, errors)
    n = int(syndrome.size)

    t0 = time.perf_counter_ns()
    wm = ohq.build_weight_matrix(lat, syndrome)
    vector, feasible = _decode_with(decoder, wm, rng, seed_cap)
    decode_nanos = time.perf_counter_ns() - t0

    n_vars_ohq = wm.num_variables

    if not feasible:
        return TrialResult(
            success=False,
            logical_failure=True,
            infeasible=True,
            decode_nanos=decode_nanos,
            n_flipped=n,
            n_vars_some=n,
            n_vars_ohq=n_vars_ohq,
        )

    correction = np.zeros(lat.num_data_qubits, dtype=np.uint8)
    coin = rng.tagged(1).generator()
    for i in range(n):
        j = int(vector[i])
        if j < i:
            continue
        correction ^= path_correction(lat, int(syndrome[i]), int(syndrome[j]), coin)

    residual = errors ^ correction
    if extract_syndrome(lat, residual).size != 0:
        # a feasible matching always cancels the syndrome; anything else
        # is uncorrectable and counted against the decoder
        return TrialResult(False, True, True, decode_nanos, n, n, n_vars_ohq)

    failure = logical_cut_parity(lat, residual) == 1
    return TrialResult(
        success=not failure,
        logical_failure=failure,
        infeasible=False,
        decode_nanos=decode_nanos,
        n_flipped=n,
        n_vars_some=n,
        n_vars_ohq=n_vars_ohq,
    )
