"""Planar surface-code geometry for X-error / Z-syndrome decoding.

Ancillas live on a (d+1) x d grid, indexed row-major: A(row, col) with
row in 0..d and col in 0..d-1.  Data qubits come in four families:

  top stubs      T(j)          flip only A(0, j)
  bottom stubs   B(j)          flip only A(d, j)
  vertical       V(i, j)       flip A(i, j) and A(i+1, j),  i in 1..d-2
  horizontal     H(i, j)       flip A(i, j) and A(i, j+1),  i in 1..d-1

Totals: 2d + d(d-2) + (d-1)^2 = d^2 + (d-1)^2 data qubits and d(d+1)
ancillas.  The bulk rows 1..d-1 form a complete grid graph; the top and
bottom ancilla rows are reachable only through their stubs, so they
self-match to the boundary at cost 1 and are never pair-matched.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path


class _Excluded:
    """Sentinel for forbidden matches. Never compares equal to a number."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "EXCLUDED"


EXCLUDED = _Excluded()

# Integer stand-in for EXCLUDED inside numpy distance tables.
_INF = -1

# Largest d for which the all-pairs BFS table is precomputed. Beyond it
# pair distances fall back to the verified grid formula (see
# _pair_distance_formula and the equivalence test in test_lattice).
_DENSE_LIMIT = 31


def ancilla_index(d: int, row: int, col: int) -> int:
    """Row-major index of ancilla A(row, col)."""
    if not (0 <= row <= d and 0 <= col < d):
        raise IndexError(f"ancilla coordinate ({row}, {col}) out of range for d={d}")
    return row * d + col


def ancilla_coord(d: int, index: int) -> tuple[int, int]:
    """Inverse of ancilla_index."""
    if not (0 <= index < d * (d + 1)):
        raise IndexError(f"ancilla index {index} out of range for d={d}")
    return divmod(index, d)


@dataclass(frozen=True)
class Lattice:
    """Immutable geometry; build with build_lattice()."""

    d: int
    num_data_qubits: int
    num_syndromes: int
    # incidence[q] is a tuple of 1 or 2 ancilla indices flipped by qubit q
    incidence: tuple[tuple[int, ...], ...]
    # per-qubit ancilla endpoints for vectorized syndrome extraction;
    # second endpoint is -1 for stubs
    _end_a: np.ndarray = field(repr=False)
    _end_b: np.ndarray = field(repr=False)
    # dense all-pairs chain length over the pair graph (no boundary
    # routing), entries _INF where unreachable; None for large d
    _pair_table: np.ndarray | None = field(repr=False)
    # per-ancilla chain length to the boundary, _INF where unreachable
    _boundary: np.ndarray = field(repr=False)
    # horizontal cut sets (frozensets of data-qubit indices)
    cuts: tuple[frozenset[int], ...] = field(repr=False)
    # cut membership as a bool matrix for fast parity checks
    _cut_mask: np.ndarray = field(repr=False)

    # ----- qubit indexing -----------------------------------------------

    def top_stub(self, j: int) -> int:
        return j

    def bottom_stub(self, j: int) -> int:
        return self.d + j

    def vertical_qubit(self, i: int, j: int) -> int:
        d = self.d
        if not (1 <= i <= d - 2 and 0 <= j < d):
            raise IndexError(f"no vertical qubit at ({i}, {j}) for d={d}")
        return 2 * d + (i - 1) * d + j

    def horizontal_qubit(self, i: int, j: int) -> int:
        d = self.d
        if not (1 <= i <= d - 1 and 0 <= j < d - 1):
            raise IndexError(f"no horizontal qubit at ({i}, {j}) for d={d}")
        return 2 * d + d * (d - 2) + (i - 1) * (d - 1) + j

    # ----- distances ----------------------------------------------------

    def pair_distance(self, a: int, b: int):
        """Minimal error-chain length flipping exactly {a, b}; EXCLUDED if none.

        Chains may not route through the boundary, so e.g. two top-row
        ancillas are an EXCLUDED pair even though each self-matches at 1.
        """
        self._check_ancilla(a)
        self._check_ancilla(b)
        if a == b:
            return 0
        if self._pair_table is not None:
            k = int(self._pair_table[a, b])
        else:
            k = self._pair_distance_formula(a, b)
        return EXCLUDED if k == _INF else k

    def boundary_distance(self, a: int):
        """Minimal error-chain length flipping exactly {a}; EXCLUDED if none."""
        self._check_ancilla(a)
        k = int(self._boundary[a])
        return EXCLUDED if k == _INF else k

    def pair_distance_block(self, ancillas: np.ndarray) -> np.ndarray:
        """Pairwise chain lengths for a set of ancillas, _INF where excluded."""
        ancillas = np.asarray(ancillas, dtype=np.int64)
        if self._pair_table is not None:
            return self._pair_table[np.ix_(ancillas, ancillas)].astype(np.int64)
        d = self.d
        rows, cols = np.divmod(ancillas, d)
        bulk = (rows >= 1) & (rows <= d - 1)
        dist = np.abs(rows[:, None] - rows[None, :]) + np.abs(cols[:, None] - cols[None, :])
        out = np.where(bulk[:, None] & bulk[None, :], dist, _INF)
        np.fill_diagonal(out, 0)
        return out.astype(np.int64)

    def boundary_distance_block(self, ancillas: np.ndarray) -> np.ndarray:
        return self._boundary[np.asarray(ancillas, dtype=np.int64)].astype(np.int64)

    def _pair_distance_formula(self, a: int, b: int) -> int:
        # Bulk rows 1..d-1 form a complete grid, so BFS distance reduces
        # to the Manhattan distance; boundary rows are pair-isolated.
        d = self.d
        ra, ca = divmod(a, d)
        rb, cb = divmod(b, d)
        if 1 <= ra <= d - 1 and 1 <= rb <= d - 1:
            return abs(ra - rb) + abs(ca - cb)
        return _INF

    def _check_ancilla(self, a: int) -> None:
        if not (0 <= a < self.num_syndromes):
            raise IndexError(f"ancilla index {a} out of range")


def build_lattice(d: int) -> Lattice:
    """Construct the distance-d planar lattice. d must be odd and >= 3."""
    if not isinstance(d, (int, np.integer)) or isinstance(d, bool):
        raise TypeError(f"code distance must be an integer, got {d!r}")
    if d < 3 or d % 2 == 0:
        raise ValueError(f"code distance must be odd and >= 3, got {d}")

    num_syn = d * (d + 1)
    incidence: list[tuple[int, ...]] = []

    for j in range(d):  # top stubs
        incidence.append((ancilla_index(d, 0, j),))
    for j in range(d):  # bottom stubs
        incidence.append((ancilla_index(d, d, j),))
    for i in range(1, d - 1):  # vertical connectors
        for j in range(d):
            incidence.append((ancilla_index(d, i, j), ancilla_index(d, i + 1, j)))
    for i in range(1, d):  # horizontal connectors
        for j in range(d - 1):
            incidence.append((ancilla_index(d, i, j), ancilla_index(d, i, j + 1)))

    num_data = len(incidence)
    assert num_data == d * d + (d - 1) * (d - 1)

    end_a = np.fromiter((inc[0] for inc in incidence), dtype=np.int64, count=num_data)
    end_b = np.fromiter(
        (inc[1] if len(inc) == 2 else -1 for inc in incidence), dtype=np.int64, count=num_data
    )

    pair_table = _bfs_pair_table(num_syn, incidence) if d <= _DENSE_LIMIT else None
    boundary = _bfs_boundary(num_syn, incidence)

    lat = object.__new__(Lattice)
    cuts, cut_mask = _build_cuts(d, num_data)
    object.__setattr__(lat, "d", int(d))
    object.__setattr__(lat, "num_data_qubits", num_data)
    object.__setattr__(lat, "num_syndromes", num_syn)
    object.__setattr__(lat, "incidence", tuple(incidence))
    object.__setattr__(lat, "_end_a", end_a)
    object.__setattr__(lat, "_end_b", end_b)
    object.__setattr__(lat, "_pair_table", pair_table)
    object.__setattr__(lat, "_boundary", boundary)
    object.__setattr__(lat, "cuts", cuts)
    object.__setattr__(lat, "_cut_mask", cut_mask)
    return lat


def _bfs_pair_table(num_syn: int, incidence) -> np.ndarray:
    """All-pairs BFS over the matching graph, boundary stubs excluded."""
    rows, cols = [], []
    for inc in incidence:
        if len(inc) == 2:
            rows.append(inc[0])
            cols.append(inc[1])
    data = np.ones(len(rows), dtype=np.int8)
    adj = csr_matrix((data, (rows, cols)), shape=(num_syn, num_syn))
    dist = shortest_path(adj, method="D", directed=False, unweighted=True)
    table = np.where(np.isinf(dist), _INF, dist).astype(np.int32)
    return table


def _bfs_boundary(num_syn: int, incidence) -> np.ndarray:
    """Multi-source BFS from the boundary: stub edges cost 1, then pair edges."""
    neighbors: list[list[int]] = [[] for _ in range(num_syn)]
    seeds = []
    for inc in incidence:
        if len(inc) == 1:
            seeds.append(inc[0])
        else:
            a, b = inc
            neighbors[a].append(b)
            neighbors[b].append(a)
    dist = np.full(num_syn, _INF, dtype=np.int32)
    frontier = []
    for a in seeds:
        if dist[a] == _INF:
            dist[a] = 1
            frontier.append(a)
    while frontier:
        nxt = []
        for a in frontier:
            for b in neighbors[a]:
                if dist[b] == _INF:
                    dist[b] = dist[a] + 1
                    nxt.append(b)
        frontier = nxt
    return dist


def _build_cuts(d: int, num_data: int) -> tuple[tuple[frozenset[int], ...], np.ndarray]:
    """Horizontal cuts separating the top boundary from the bottom."""
    cut_lists: list[list[int]] = []
    cut_lists.append(list(range(d)))  # top stubs
    for i in range(1, d - 1):
        base = 2 * d + (i - 1) * d
        cut_lists.append(list(range(base, base + d)))  # vertical row i
    cut_lists.append(list(range(d, 2 * d)))  # bottom stubs
    mask = np.zeros((len(cut_lists), num_data), dtype=bool)
    for c, qubits in enumerate(cut_lists):
        mask[c, qubits] = True
    return tuple(frozenset(c) for c in cut_lists), mask


def chain_weight(lat: Lattice, a: int, b: int):
    """Minimal error count whose syndrome is exactly {a, b} ({a} when a == b)."""
    if a == b:
        return lat.boundary_distance(a)
    return lat.pair_distance(a, b)


def logical_cut_parity(lat: Lattice, residual: np.ndarray, require_empty_syndrome: bool = True) -> int:
    """Parity of a residual error pattern across the horizontal cuts.

    Odd parity means the residual is in the nontrivial logical class.
    For empty-syndrome residuals the parity is cut-independent; pass
    require_empty_syndrome=False to evaluate raw chains.
    """
    residual = np.asarray(residual, dtype=np.uint8)
    if residual.shape != (lat.num_data_qubits,):
        raise ValueError(
            f"residual length {residual.shape} does not match lattice ({lat.num_data_qubits})"
        )
    if require_empty_syndrome:
        hits = np.bincount(lat._end_a[residual != 0], minlength=lat.num_syndromes)
        second = lat._end_b[residual != 0]
        hits += np.bincount(second[second >= 0], minlength=lat.num_syndromes)
        if np.any(hits % 2 != 0):
            raise ValueError("residual has nonempty syndrome")
    return int(np.count_nonzero(residual[lat._cut_mask[0]]) % 2)
