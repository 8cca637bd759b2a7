import itertools
from fractions import Fraction

import numpy as np
import pytest

from someqec import (
    EXCLUDED,
    build_qubo,
    build_weight_matrix,
    energy,
    export_qubo,
    extract_syndrome,
    parse_qubo,
    sample_errors,
    solve_exhaustive,
    solve_involutions,
)
from someqec.lattice import ancilla_index
from someqec.noise import RngSeed
from someqec.ohq import _X2, WeightMatrix, matching_from_assignment


def make_wm(d, doubled):
    doubled = np.asarray(doubled, dtype=np.int64)
    return WeightMatrix(d, doubled.shape[0], np.arange(doubled.shape[0]), doubled)


def test_empty_syndrome(lat5):
    wm = build_weight_matrix(lat5, np.zeros(0, dtype=np.int64))
    assert wm.n == 0
    assert wm.num_variables == 0
    q = build_qubo(wm, 5)
    assert q.num_variables == 0
    assert energy(q, []) == 0


def test_two_bulk_flips_at_distance_two(lat5):
    syndrome = np.array([ancilla_index(5, 2, 1), ancilla_index(5, 2, 3)])
    wm = build_weight_matrix(lat5, syndrome)
    assert wm.weight(0, 1) == Fraction(1)  # k/2 with k=2
    assert wm.weight(1, 0) == Fraction(1)
    assert wm.weight(0, 0) is EXCLUDED
    assert wm.weight(1, 1) is EXCLUDED


def test_two_top_row_flips(lat5):
    syndrome = np.array([ancilla_index(5, 0, 0), ancilla_index(5, 0, 3)])
    wm = build_weight_matrix(lat5, syndrome)
    assert wm.weight(0, 0) == 1
    assert wm.weight(1, 1) == 1
    assert wm.weight(0, 1) is EXCLUDED


def test_exclusion_beyond_half_distance(lat5):
    # Manhattan distance 3 > (5-1)/2 = 2 is excluded even though reachable
    syndrome = np.array([ancilla_index(5, 1, 0), ancilla_index(5, 1, 3)])
    wm = build_weight_matrix(lat5, syndrome)
    assert wm.weight(0, 1) is EXCLUDED
    assert wm.num_variables == 0


def test_variable_count_is_upper_triangle_minus_excluded(lat9):
    for t in range(30):
        syndrome = extract_syndrome(lat9, sample_errors(lat9, 0.05, RngSeed(31, t)))
        wm = build_weight_matrix(lat9, syndrome)
        manual = sum(
            1
            for i in range(wm.n)
            for j in range(i, wm.n)
            if wm.weight(i, j) is not EXCLUDED and wm.weight(j, i) is not EXCLUDED
        )
        assert wm.num_variables == manual == build_qubo(wm, 9).num_variables


def test_penalty_and_energy_examples():
    # n=2, only the off-diagonal pair is finite with k=2
    wm = make_wm(5, [[_X2, 2], [2, _X2]])
    q = build_qubo(wm, 5)
    assert q.penalty == 25
    assert q.num_variables == 1
    assert energy(q, [0]) == 2 * 25  # two violated row constraints
    assert energy(q, [1]) == 2  # w01 + w10 = k


def test_energy_sums_chain_weights(lat9):
    # two matched pairs with k=1 and k=3
    syndrome = np.array(
        [
            ancilla_index(9, 2, 1),
            ancilla_index(9, 2, 2),
            ancilla_index(9, 5, 5),
            ancilla_index(9, 7, 6),
        ]
    )
    wm = build_weight_matrix(lat9, syndrome)
    assert wm.weight(0, 1) == Fraction(1, 2)
    assert wm.weight(2, 3) == Fraction(3, 2)
    q = build_qubo(wm, 9)
    assignment = [0] * q.num_variables
    assignment[q.variables.index((0, 1))] = 1
    assignment[q.variables.index((2, 3))] = 1
    assert energy(q, assignment) == 4


def test_double_matching_is_penalized():
    # n=3, all pairs finite with k=2, diagonals finite with k=1
    doubled = np.full((3, 3), 2, dtype=np.int64)
    np.fill_diagonal(doubled, 2)
    wm = make_wm(5, doubled)
    q = build_qubo(wm, 5)
    a = [0] * q.num_variables
    a[q.variables.index((0, 1))] = 1
    a[q.variables.index((0, 2))] = 1
    # rows: row0 sums to 2, rows 1 and 2 to 1 -> penalty 25
    cost = Fraction(2 + 2)  # both pairs at k=2
    assert energy(q, a) == cost + 25


def test_energy_rejects_length_mismatch():
    wm = make_wm(5, [[2]])
    q = build_qubo(wm, 5)
    with pytest.raises(ValueError):
        energy(q, [1, 0])


def test_energy_decomposition(lat9):
    # energy = matching cost + d^2 * constraint residual, for any assignment
    g = RngSeed(77, 0).generator()
    for t in range(20):
        syndrome = extract_syndrome(lat9, sample_errors(lat9, 0.04, RngSeed(77, t)))
        wm = build_weight_matrix(lat9, syndrome)
        q = build_qubo(wm, 9)
        if q.num_variables == 0:
            continue
        for _ in range(20):
            a = (g.random(q.num_variables) < 0.5).astype(int)
            x = np.zeros((wm.n, wm.n), dtype=np.int64)
            for idx, (i, j) in enumerate(q.variables):
                x[i, j] = x[j, i] = a[idx]
            cost = sum(
                Fraction(int(wm.doubled[i, j]), 2)
                for i in range(wm.n)
                for j in range(wm.n)
                if x[i, j] and wm.doubled[i, j] != _X2
            )
            residual = sum((int(x[i].sum()) - 1) ** 2 for i in range(wm.n))
            assert energy(q, a) == cost + 81 * residual
            satisfied = residual == 0
            assert satisfied == all(x[i].sum() == 1 for i in range(wm.n))


def test_exhaustive_minimum_matches_involution_minimum(lat5):
    checked = 0
    t = 0
    while checked < 100:
        syndrome = extract_syndrome(lat5, sample_errors(lat5, 0.03, RngSeed(55, t)))
        t += 1
        if not (1 <= syndrome.size <= 4):
            continue
        wm = build_weight_matrix(lat5, syndrome)
        q = build_qubo(wm, 5)
        assert solve_exhaustive(q).energy == solve_involutions(wm).energy
        checked += 1


def test_matching_from_assignment():
    wm = make_wm(5, [[2, 2], [2, 2]])
    q = build_qubo(wm, 5)
    pair = [0] * q.num_variables
    pair[q.variables.index((0, 1))] = 1
    v = matching_from_assignment(q, pair)
    assert v.tolist() == [1, 0]
    overmatched = [1] * q.num_variables
    assert matching_from_assignment(q, overmatched) is None
    assert matching_from_assignment(q, [0] * q.num_variables) is None


class TestQuboFormat:
    def test_empty_instance_is_header_only(self):
        wm = make_wm(5, np.zeros((0, 0)))
        text = export_qubo(build_qubo(wm, 5))
        assert text == "q ohq 0 0 25\n"
        q = parse_qubo(text)
        assert q.num_variables == 0
        assert energy(q, []) == 0

    def test_small_instance_round_trip(self):
        wm = make_wm(5, [[_X2, 2], [2, _X2]])
        q = build_qubo(wm, 5)
        text = export_qubo(q)
        assert text.endswith("\n") and "\r" not in text
        back = parse_qubo(text)
        for bits in itertools.product([0, 1], repeat=q.num_variables):
            assert energy(q, bits) == energy(back, bits)

    def test_exhaustive_round_trip(self, lat9):
        t = 0
        done = 0
        while done < 10:
            syndrome = extract_syndrome(lat9, sample_errors(lat9, 0.02, RngSeed(88, t)))
            t += 1
            wm = build_weight_matrix(lat9, syndrome)
            q = build_qubo(wm, 9)
            if not (1 <= q.num_variables <= 12):
                continue
            back = parse_qubo(export_qubo(q))
            assert back.variables == q.variables
            for bits in itertools.product([0, 1], repeat=q.num_variables):
                assert energy(q, bits) == energy(back, bits)
            done += 1

    def test_parse_reports_line_numbers(self):
        with pytest.raises(ValueError, match="line 2"):
            parse_qubo("q ohq 1 1 25\nv 0 0\n")
        with pytest.raises(ValueError, match="line 1"):
            parse_qubo("x nonsense\n")
        with pytest.raises(ValueError, match="missing header"):
            parse_qubo("")
