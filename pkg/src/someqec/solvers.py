"""Reference minimizers for OHQ instances.

solve_exhaustive enumerates every assignment (the ground-truth QUBO
oracle), solve_involutions enumerates every matching in the valid
solution space, and solve_anneal is a local simulated-annealing stand-in
for an external annealing service.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .noise import RngSeed
from .ohq import _X2, QuboInstance, WeightMatrix

MAX_EXHAUSTIVE_VARS = 24
MAX_INVOLUTION_SYNDROMES = 12

_BLOCK_BITS = 18


@dataclass(frozen=True)
class SolveResult:
    assignment: np.ndarray
    energy: Fraction
    optimal: bool


@dataclass(frozen=True)
class MatchingResult:
    vector: np.ndarray
    energy: Fraction
    feasible: bool  # True when no sentinel (excluded) entry is used


@dataclass(frozen=True)
class AnnealSchedule:
    sweeps: int = 200
    beta_start: float = 0.05
    beta_end: float = 5.0
    restarts: int = 8
    seed: RngSeed = RngSeed(0, 0)

    def __post_init__(self):
        if self.sweeps < 1:
            raise ValueError("sweeps must be >= 1")
        if not self.beta_start < self.beta_end:
            raise ValueError("beta_start must be < beta_end")


def _dense_doubled(q: QuboInstance) -> tuple[np.ndarray, np.ndarray]:
    """Linear vector and strictly-upper quadratic matrix, doubled units."""
    m = q.num_variables
    quad = np.zeros((m, m), dtype=np.int64)
    for (u, v), c2 in q.quad2.items():
        quad[u, v] = c2
    return q.linear2.astype(np.int64), quad


def solve_exhaustive(q: QuboInstance) -> SolveResult:
    """Global minimum by enumeration; ties go to the lowest binary value.

    Variable 0 is the least-significant bit of the enumerated integer.
    """
    m = q.num_variables
    if m > MAX_EXHAUSTIVE_VARS:
        raise ValueError(f"{m} variables exceed the exhaustive limit ({MAX_EXHAUSTIVE_VARS})")
    if m == 0:
        return SolveResult(np.zeros(0, dtype=np.uint8), Fraction(q.const2, 2), True)
    l2, quad = _dense_doubled(q)
    bits = np.arange(m, dtype=np.uint64)
    best_e2 = None
    best_code = 0
    block = 1 << min(_BLOCK_BITS, m)
    for start in range(0, 1 << m, block):
        codes = np.arange(start, start + block, dtype=np.uint64)
        x = ((codes[:, None] >> bits) & 1).astype(np.int64)
        e2 = q.const2 + x @ l2 + np.einsum("bu,uv,bv->b", x, quad, x)
        idx = int(np.argmin(e2))
        if best_e2 is None or e2[idx] < best_e2:
            best_e2 = int(e2[idx])
            best_code = start + idx
    assignment = ((best_code >> bits) & 1).astype(np.uint8)
    return SolveResult(assignment, Fraction(best_e2, 2), True)


def solve_involutions(wm: WeightMatrix) -> MatchingResult:
    """Exact minimum matching cost over all involutions of size n.

    Entries excluded in the weight matrix cost the sentinel weight d^2
    per endpoint, matching some.outcome_energy; the result is feasible
    only when the optimum avoids every sentinel entry.
    """
    n = wm.n
    if n > MAX_INVOLUTION_SYNDROMES:
        raise ValueError(
            f"{n} syndromes exceed the involution-enumeration limit "
            f"({MAX_INVOLUTION_SYNDROMES})"
        )
    if n == 0:
        return MatchingResult(np.zeros(0, dtype=np.int64), Fraction(0), True)

    w2 = wm.doubled
    sent2 = 2 * wm.d * wm.d

    def self_cost2(i: int) -> int:
        return int(w2[i, i]) if w2[i, i] != _X2 else sent2

    def pair_cost2(i: int, j: int) -> int:
        a = int(w2[i, j]) if w2[i, j] != _X2 else sent2
        b = int(w2[j, i]) if w2[j, i] != _X2 else sent2
        return a + b

    best = {"e2": None, "v": None}
    v = np.full(n, -1, dtype=np.int64)

    def recurse(cost2: int) -> None:
        if best["e2"] is not None and cost2 >= best["e2"]:
            return
        i = -1
        for t in range(n):
            if v[t] == -1:
                i = t
                break
        if i == -1:
            best["e2"] = cost2
            best["v"] = v.copy()
            return
        v[i] = i
        recurse(cost2 + self_cost2(i))
        for j in range(i + 1, n):
            if v[j] != -1:
                continue
            v[i] = j
            v[j] = i
            recurse(cost2 + pair_cost2(i, j))
            v[j] = -1
        v[i] = -1

    recurse(0)
    vec = best["v"]
    entries = w2[np.arange(n), vec]
    feasible = bool(np.all(entries != _X2))
    return MatchingResult(vec, Fraction(best["e2"], 2), feasible)


def solve_anneal(q: QuboInstance, sched: AnnealSchedule | None = None) -> SolveResult:
    """Single-bit-flip Metropolis annealing with a geometric beta schedule."""
    if sched is None:
        sched = AnnealSchedule()
    m = q.num_variables
    if m == 0:
        return SolveResult(np.zeros(0, dtype=np.uint8), Fraction(q.const2, 2), True)
    l2, quad = _dense_doubled(q)
    sym = quad + quad.T

    if sched.sweeps == 1:
        betas = np.asarray([sched.beta_start])
    else:
        ratio = sched.beta_end / sched.beta_start
        betas = sched.beta_start * ratio ** (np.arange(sched.sweeps) / (sched.sweeps - 1))

    best_e2 = None
    best_x = None
    for restart in range(sched.restarts):
        g = sched.seed.substream(restart).generator()
        x = g.integers(0, 2, size=m, dtype=np.int64)
        e2 = int(q.const2 + x @ l2 + x @ quad @ x)
        run_best_e2, run_best_x = e2, x.copy()
        for beta in betas:
            accept_draws = g.random(m)
            for v in range(m):
                sign = 1 - 2 * int(x[v])
                delta2 = sign * int(l2[v] + sym[v] @ x)
                if delta2 <= 0 or accept_draws[v] < math.exp(-beta * delta2 / 2.0):
                    x[v] ^= 1
                    e2 += delta2
                    if e2 < run_best_e2:
                        run_best_e2 = e2
                        run_best_x = x.copy()
        if best_e2 is None or run_best_e2 < best_e2:
            best_e2 = run_best_e2
            best_x = run_best_x
    return SolveResult(best_x.astype(np.uint8), Fraction(best_e2, 2), False)
