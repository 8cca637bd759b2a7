"""One-Hot QUBO construction over flipped syndromes.

Weights count physical errors along minimal chains: a boundary
self-match (diagonal) carries the full chain length k, a pair match
splits it as k/2 per off-diagonal entry.  Pairs whose chain length
exceeds (d-1)/2 are excluded outright: they get no variable at all, so
the minimizer cannot pick them up at zero cost.

All weights are half-integers and are stored as doubled integers, so
every energy in this module is exact (returned as Fraction).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .lattice import EXCLUDED, _INF, Lattice

# doubled-integer sentinel mirroring EXCLUDED inside numpy tables
_X2 = -1


@dataclass(frozen=True)
class WeightMatrix:
    """n x n match costs over flipped syndromes (doubled-integer storage)."""

    d: int
    n: int
    syndrome_ids: np.ndarray  # matrix index -> ancilla index
    doubled: np.ndarray = field(repr=False)  # 2*w, _X2 where excluded

    def weight(self, i: int, j: int):
        v = int(self.doubled[i, j])
        return EXCLUDED if v == _X2 else Fraction(v, 2)

    def is_finite(self, i: int, j: int) -> bool:
        return self.doubled[i, j] != _X2

    @property
    def num_variables(self) -> int:
        """Count of upper-triangle (incl. diagonal) non-excluded entries."""
        finite = self.doubled != _X2
        # a pair needs both directions finite to be matchable
        both = finite & finite.T
        return int(np.count_nonzero(np.triu(both)))


def build_weight_matrix(lat: Lattice, syndrome: np.ndarray) -> WeightMatrix:
    """Match costs for one syndrome set, with exclusion applied."""
    ids = np.asarray(syndrome, dtype=np.int64)
    n = ids.size
    cutoff = (lat.d - 1) // 2
    if n == 0:
        return WeightMatrix(lat.d, 0, ids, np.zeros((0, 0), dtype=np.int64))
    k = lat.pair_distance_block(ids)  # _INF where unreachable
    doubled = np.where((k != _INF) & (k <= cutoff), k, _X2)  # off-diag: 2*(k/2) = k
    b = lat.boundary_distance_block(ids)
    diag = np.where((b != _INF) & (b <= cutoff), 2 * b, _X2)
    np.fill_diagonal(doubled, diag)
    return WeightMatrix(lat.d, n, ids, doubled.astype(np.int64))


@dataclass(frozen=True)
class QuboInstance:
    """Expanded QUBO for H = X (.) W + penalty * sum_i (row_i - 1)^2.

    One variable per non-excluded unordered pair (i, j), i <= j; the
    symmetric entries x_ij and x_ji share it.  Coefficients are stored
    doubled so energies stay exact.
    """

    n_syndromes: int
    penalty: int
    variables: tuple[tuple[int, int], ...]
    linear2: np.ndarray = field(repr=False)
    quad2: dict = field(repr=False)  # {(a, b): doubled coeff}, a < b
    const2: int = field(repr=False)

    @property
    def num_variables(self) -> int:
        return len(self.variables)


def build_qubo(wm: WeightMatrix, d: int) -> QuboInstance:
    """Expand the one-hot energy into explicit QUBO coefficients; penalty = d^2."""
    penalty = d * d
    finite = (wm.doubled != _X2) & (wm.doubled.T != _X2)
    variables = [(i, j) for i in range(wm.n) for j in range(i, wm.n) if finite[i, j]]
    var_of = {v: idx for idx, v in enumerate(variables)}

    linear2 = np.zeros(len(variables), dtype=np.int64)
    for idx, (i, j) in enumerate(variables):
        if i == j:
            # w_ii - penalty
            linear2[idx] = int(wm.doubled[i, i]) - 2 * penalty
        else:
            # (w_ij + w_ji) - 2 * penalty, one penalty per covered row
            linear2[idx] = int(wm.doubled[i, j]) + int(wm.doubled[j, i]) - 4 * penalty

    rows: list[list[int]] = [[] for _ in range(wm.n)]
    for idx, (i, j) in enumerate(variables):
        rows[i].append(idx)
        if j != i:
            rows[j].append(idx)
    quad2: dict[tuple[int, int], int] = {}
    for members in rows:
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                key = (members[a], members[b]) if members[a] < members[b] else (members[b], members[a])
                quad2[key] = quad2.get(key, 0) + 4 * penalty

    return QuboInstance(
        n_syndromes=wm.n,
        penalty=penalty,
        variables=tuple(variables),
        linear2=linear2,
        quad2=quad2,
        const2=2 * penalty * wm.n,
    )


def energy(q: QuboInstance, assignment) -> Fraction:
    """Exact H value for a 0/1 assignment over q's variables."""
    a = np.asarray(assignment, dtype=np.int64)
    if a.shape != (q.num_variables,):
        raise ValueError(
            f"assignment length {a.shape} does not match instance ({q.num_variables})"
        )
    e2 = q.const2 + int(a @ q.linear2)
    for (u, v), c2 in q.quad2.items():
        if a[u] and a[v]:
            e2 += c2
    return Fraction(e2, 2)


def matching_from_assignment(q: QuboInstance, assignment) -> np.ndarray | None:
    """Permutation vector encoded by a one-hot assignment, or None if invalid."""
    a = np.asarray(assignment, dtype=np.int64)
    v = np.full(q.n_syndromes, -1, dtype=np.int64)
    for idx, (i, j) in enumerate(q.variables):
        if not a[idx]:
            continue
        if v[i] != -1 or (j != i and v[j] != -1):
            return None  # a row matched twice
        v[i] = j
        v[j] = i
    if np.any(v == -1):
        return None  # a row left unmatched
    return v


def export_qubo(q: QuboInstance) -> str:
    """Serialize to the plain-text exchange format (LF endings, ASCII)."""
    lines = [f"q ohq {q.n_syndromes} {q.num_variables} {q.penalty}"]
    for idx, (i, j) in enumerate(q.variables):
        lines.append(f"v {idx} {i} {j}")
    for idx in range(q.num_variables):
        c = Fraction(int(q.linear2[idx]), 2)
        lines.append(f"c {idx} {idx} {c.numerator}/{c.denominator}")
    for (u, v) in sorted(q.quad2):
        c = Fraction(q.quad2[(u, v)], 2)
        lines.append(f"c {u} {v} {c.numerator}/{c.denominator}")
    return "\n".join(lines) + "\n"


def parse_qubo(text: str) -> QuboInstance:
    """Inverse of export_qubo; raises ValueError with line numbers."""
    n_syndromes = penalty = n_vars = None
    variables: list[tuple[int, int]] = []
    linear2: list[int] = []
    quad2: dict[tuple[int, int], int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "q":
                if parts[1] != "ohq":
                    raise ValueError("unknown format tag")
                n_syndromes, n_vars, penalty = int(parts[2]), int(parts[3]), int(parts[4])
                linear2 = [0] * n_vars
            elif parts[0] == "v":
                idx, i, j = int(parts[1]), int(parts[2]), int(parts[3])
                if idx != len(variables) or not (0 <= i <= j):
                    raise ValueError("bad variable record")
                variables.append((i, j))
            elif parts[0] == "c":
                a, b = int(parts[1]), int(parts[2])
                num, den = parts[3].split("/")
                c2 = Fraction(int(num), int(den)) * 2
                if c2.denominator != 1:
                    raise ValueError("coefficient is not a half-integer")
                if a == b:
                    linear2[a] += int(c2)
                else:
                    a, b = min(a, b), max(a, b)
                    quad2[(a, b)] = quad2.get((a, b), 0) + int(c2)
            else:
                raise ValueError(f"unknown record type {parts[0]!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None

    if n_syndromes is None:
        raise ValueError("missing header line")
    if len(variables) != n_vars:
        raise ValueError(f"expected {n_vars} variables, found {len(variables)}")
    return QuboInstance(
        n_syndromes=n_syndromes,
        penalty=penalty,
        variables=tuple(variables),
        linear2=np.asarray(linear2, dtype=np.int64),
        quad2=quad2,
        const2=2 * penalty * n_syndromes,
    )
