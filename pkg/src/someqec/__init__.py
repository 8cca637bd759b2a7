"""Surface-code decoding via one-hot QUBO matching and the SOME greedy elector."""

from .correct import TrialResult, path_correction, run_trial
from .lattice import EXCLUDED, Lattice, build_lattice, chain_weight, logical_cut_parity
from .noise import RngSeed, extract_syndrome, sample_errors
from .ohq import (
    QuboInstance,
    WeightMatrix,
    build_qubo,
    build_weight_matrix,
    energy,
    export_qubo,
    parse_qubo,
)
from .solvers import AnnealSchedule, solve_anneal, solve_exhaustive, solve_involutions
from .some import DecodeOutcome, RankedPairs, decode, is_involution, outcome_energy, rank_pairs

__version__ = "0.1.0"

__all__ = [
    "EXCLUDED",
    "AnnealSchedule",
    "DecodeOutcome",
    "Lattice",
    "QuboInstance",
    "RankedPairs",
    "RngSeed",
    "TrialResult",
    "WeightMatrix",
    "build_lattice",
    "build_qubo",
    "build_weight_matrix",
    "chain_weight",
    "decode",
    "energy",
    "export_qubo",
    "extract_syndrome",
    "is_involution",
    "logical_cut_parity",
    "outcome_energy",
    "parse_qubo",
    "path_correction",
    "rank_pairs",
    "run_trial",
    "sample_errors",
    "solve_anneal",
    "solve_exhaustive",
    "solve_involutions",
]
