"""SOME: greedy multi-seed construction of self-inverse permutation vectors.

A matching over n flipped syndromes is an involution v with v[v[i]] = i;
v[i] = i is a boundary self-match.  All candidate pairs are ranked by
full chain cost (off-diagonal pairs compare by w_ij + w_ji = k, diagonal
by w_ii = k), ascending, with ties broken off-diagonal first and then
lexicographically.  Each minimum-weight pair seeds one greedy candidate;
the lowest-energy candidate wins.

Indices left without any finite partner take a sentinel self-match of
weight d^2 and the outcome is flagged infeasible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ohq import _X2, WeightMatrix

DEFAULT_SEED_CAP = 64


@dataclass(frozen=True)
class RankedPairs:
    """Finite-weight upper-triangle pairs in deterministic greedy order."""

    i: np.ndarray
    j: np.ndarray
    cost2: np.ndarray  # doubled full chain cost per pair

    def __len__(self) -> int:
        return self.i.size

    def __getitem__(self, t: int) -> tuple[int, int, Fraction]:
        return int(self.i[t]), int(self.j[t]), Fraction(int(self.cost2[t]), 2)


@dataclass(frozen=True)
class DecodeOutcome:
    vector: np.ndarray
    energy: Fraction
    seeds_tried: int
    feasible: bool


def rank_pairs(wm: WeightMatrix) -> RankedPairs:
    """Sort all matchable pairs ascending by full cost, off-diagonal first."""
    w2 = wm.doubled
    finite = (w2 != _X2) & (w2.T != _X2)
    iu, ju = np.triu_indices(wm.n)
    keep = finite[iu, ju]
    iu, ju = iu[keep], ju[keep]
    offdiag = iu != ju
    cost2 = np.where(offdiag, w2[iu, ju] + w2[ju, iu], w2[iu, ju]).astype(np.int64)
    order = np.lexsort((ju, iu, ~offdiag, cost2))
    return RankedPairs(iu[order].astype(np.int64), ju[order].astype(np.int64), cost2[order])


def is_involution(v: np.ndarray) -> bool:
    v = np.asarray(v)
    n = v.size
    return bool(np.all((v >= 0) & (v < n)) and np.all(v[v] == np.arange(n)))


def outcome_energy(wm: WeightMatrix, v: np.ndarray) -> Fraction:
    """Sum of W[i][v[i]]; excluded entries count at the sentinel weight d^2."""
    v = np.asarray(v, dtype=np.int64)
    if v.size != wm.n or not is_involution(v):
        raise ValueError("vector is not an involution over the matrix indices")
    sent2 = 2 * wm.d * wm.d
    entries = wm.doubled[np.arange(wm.n), v]
    e2 = int(np.where(entries == _X2, sent2, entries).sum())
    return Fraction(e2, 2)


def decode(wm: WeightMatrix, seed_cap: int = DEFAULT_SEED_CAP) -> DecodeOutcome:
    """Multi-seed greedy matching with diagonal-swap refinement."""
    if seed_cap < 1:
        raise ValueError("seed_cap must be at least 1")
    n = wm.n
    if n == 0:
        return DecodeOutcome(np.zeros(0, dtype=np.int64), Fraction(0), 0, True)
    pairs = rank_pairs(wm)
    sent2 = 2 * wm.d * wm.d
    if len(pairs) == 0:
        v = np.arange(n, dtype=np.int64)
        return DecodeOutcome(v, Fraction(n * sent2, 2), 0, False)
    w_min = int(pairs.cost2[0])
    multiplicity = int(np.searchsorted(pairs.cost2, w_min, side="right"))
    nseeds = min(multiplicity, seed_cap)
    v, e2, feasible = _kernel(
        pairs.i, pairs.j, np.ascontiguousarray(wm.doubled), n, nseeds, sent2
    )
    return DecodeOutcome(v, Fraction(int(e2), 2), nseeds, bool(feasible))


def _greedy_elect(pi, pj, w2, n, nseeds, sent2):
    """Algorithm core; compiled with numba when available.

    pi, pj: sorted pair endpoints; w2: doubled weight matrix with -1 for
    excluded entries; returns (vector, doubled energy, feasible).
    """
    npairs = pi.size
    best_v = np.empty(n, dtype=np.int64)
    best_e2 = np.int64(0)
    best_feasible = False
    have_best = False

    v = np.empty(n, dtype=np.int64)
    used = np.empty(n, dtype=np.bool_)

    for s in range(nseeds):
        for t in range(n):
            v[t] = -1
            used[t] = False
        r, c = pi[s], pj[s]
        v[r] = c
        v[c] = r
        used[r] = True
        used[c] = True
        remaining = n - 1 if r == c else n - 2

        for t in range(npairs):
            if remaining == 0:
                break
            i, j = pi[t], pj[t]
            if used[i] or used[j]:
                continue
            v[i] = j
            v[j] = i
            used[i] = True
            used[j] = True
            remaining -= 1 if i == j else 2

        for t in range(n):
            if v[t] == -1:
                v[t] = t  # sentinel self-match unless a swap repairs it

        # best-improvement swaps among self-matched indices, to fixed point
        while True:
            best_delta = np.int64(0)
            best_a = -1
            best_b = -1
            for a in range(n):
                if v[a] != a:
                    continue
                cost_a = w2[a, a] if w2[a, a] != -1 else sent2
                for b in range(a + 1, n):
                    if v[b] != b:
                        continue
                    if w2[a, b] == -1 or w2[b, a] == -1:
                        continue
                    cost_b = w2[b, b] if w2[b, b] != -1 else sent2
                    delta = (w2[a, b] + w2[b, a]) - (cost_a + cost_b)
                    if delta < best_delta:
                        best_delta = delta
                        best_a = a
                        best_b = b
            if best_a < 0:
                break
            v[best_a] = best_b
            v[best_b] = best_a

        e2 = np.int64(0)
        feasible_now = True
        for t in range(n):
            w = w2[t, v[t]]
            if w == -1:
                e2 += sent2
                feasible_now = False
            else:
                e2 += w

        if not have_best or e2 < best_e2:
            have_best = True
            best_e2 = e2
            best_feasible = feasible_now
            for t in range(n):
                best_v[t] = v[t]

    return best_v, best_e2, best_feasible


try:
    from numba import njit

    _kernel = njit(cache=True, nogil=True)(_greedy_elect)
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    _kernel = _greedy_elect
