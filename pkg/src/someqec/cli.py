"""Command-line experiment harness.

Subcommands: sweep, vars, bench, decode, export-qubo, oracle-check.
Aggregate output is CSV with a fixed column order; single-instance
output is JSON.  For a fixed (config, seed) the sweep CSV is
byte-identical regardless of --threads: every trial owns RNG stream
`trial index` and aggregation order is fixed.  Timing columns are zero
unless --timing is given (bench implies it), since wall-clock values
cannot be deterministic.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import ohq, solvers, some
from .correct import DECODERS, path_correction, run_trial
from .lattice import Lattice, ancilla_index, build_lattice
from .noise import RngSeed, extract_syndrome, sample_errors

CSV_COLUMNS = (
    "d,p,trials,logicalFailures,logicalErrorRate,meanFlipped,meanVarsSome,"
    "meanVarsOhq,meanDecodeNanos,p50DecodeNanos,p99DecodeNanos"
)
VARS_COLUMNS = "d,p,trials,meanFlipped,meanVarsSome,meanVarsOhq"


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".6g")


def parse_rates(text: str) -> list[float]:
    """Comma list ('0.01,0.05') or inclusive triple ('0.04:0.12:0.01')."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"rate triple must be start:end:step, got {text!r}")
        start, end, step = (float(v) for v in parts)
        if step <= 0:
            raise ValueError("rate step must be positive")
        count = int(round((end - start) / step)) + 1
        rates = [round(start + i * step, 12) for i in range(count) if start + i * step <= end + step / 2]
    else:
        rates = [float(v) for v in text.split(",") if v]
    for p in rates:
        if not (0.0 <= p <= 1.0):
            raise ValueError(f"error rate {p} outside [0, 1]")
    return rates


def parse_distances(text: str) -> list[int]:
    ds = [int(v) for v in text.split(",") if v]
    if not ds:
        raise ValueError("empty distance list")
    return ds


def run_cell(
    lat: Lattice,
    p: float,
    trials: int,
    decoder: str,
    seed: int,
    threads: int = 1,
    skip_trivial: bool = False,
) -> dict:
    """Monte Carlo aggregate for one (d, p) cell; thread-count invariant."""
    fails = np.zeros(trials, dtype=bool)
    flipped = np.zeros(trials, dtype=np.int64)
    vars_ohq = np.zeros(trials, dtype=np.int64)
    nanos = np.zeros(trials, dtype=np.int64)

    def work(lo: int, hi: int) -> None:
        for t in range(lo, hi):
            r = run_trial(lat, p, decoder, RngSeed(seed, t))
            fails[t] = not r.success
            flipped[t] = r.n_flipped
            vars_ohq[t] = r.n_vars_ohq
            nanos[t] = r.decode_nanos

    if threads <= 1:
        work(0, trials)
    else:
        chunk = max(1, (trials + threads - 1) // threads)
        bounds = [(lo, min(lo + chunk, trials)) for lo in range(0, trials, chunk)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda b: work(*b), bounds))

    timed = nanos[flipped > 0] if skip_trivial else nanos
    if timed.size == 0:
        timed = np.zeros(1, dtype=np.int64)
    n_fail = int(fails.sum())
    return {
        "d": lat.d,
        "p": p,
        "trials": trials,
        "logicalFailures": n_fail,
        "logicalErrorRate": n_fail / trials,
        "meanFlipped": float(flipped.mean()),
        "meanVarsSome": float(flipped.mean()),
        "meanVarsOhq": float(vars_ohq.mean()),
        "meanDecodeNanos": float(timed.mean()),
        "p50DecodeNanos": float(np.percentile(timed, 50)),
        "p99DecodeNanos": float(np.percentile(timed, 99)),
    }


def vars_cell(lat: Lattice, p: float, trials: int, seed: int) -> dict:
    """Variable-count statistics only; no decoding."""
    n_sum = 0
    ohq_sum = 0
    for t in range(trials):
        syndrome = extract_syndrome(lat, sample_errors(lat, p, RngSeed(seed, t)))
        n_sum += syndrome.size
        ohq_sum += ohq.build_weight_matrix(lat, syndrome).num_variables
    return {
        "d": lat.d,
        "p": p,
        "trials": trials,
        "meanFlipped": n_sum / trials,
        "meanVarsSome": n_sum / trials,
        "meanVarsOhq": ohq_sum / trials,
    }


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _rows_to_csv(header: str, rows: list[dict]) -> str:
    columns = header.split(",")
    lines = [header]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in columns))
    return "\n".join(lines) + "\n"


def cmd_sweep(args) -> int:
    rows = []
    for d in args.d:
        lat = build_lattice(d)
        for p in args.p:
            row = run_cell(lat, p, args.trials, args.decoder, args.seed,
                           threads=args.threads, skip_trivial=args.skip_trivial)
            if not args.timing:
                row["meanDecodeNanos"] = 0
                row["p50DecodeNanos"] = 0
                row["p99DecodeNanos"] = 0
            rows.append(row)
    _write(args.out, _rows_to_csv(CSV_COLUMNS, rows))
    return 0


def cmd_vars(args) -> int:
    rows = []
    for d in args.d:
        lat = build_lattice(d)
        for p in args.p:
            rows.append(vars_cell(lat, p, args.trials, args.seed))
    _write(args.out, _rows_to_csv(VARS_COLUMNS, rows))
    return 0


def cmd_bench(args) -> int:
    if args.decoder not in ("some", "anneal"):
        print("someqec: error: bench supports --decoder some|anneal", file=sys.stderr)
        raise SystemExit(2)
    rows = []
    for d in args.d:
        lat = build_lattice(d)
        for p in args.p:
            for t in range(args.warmup):  # warm caches and JIT
                run_trial(lat, p, args.decoder, RngSeed(args.seed, t).tagged(3))
            rows.append(run_cell(lat, p, args.trials, args.decoder, args.seed,
                                 threads=1, skip_trivial=args.skip_trivial))
    _write(args.out, _rows_to_csv(CSV_COLUMNS, rows))
    return 0


def parse_syndrome_file(text: str) -> tuple[int, list[int]]:
    """Lines: 'd <distance>' then 's <ancilla_row> <ancilla_col>'."""
    d = None
    coords: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "d":
                if d is not None:
                    raise ValueError("duplicate distance line")
                d = int(parts[1])
            elif parts[0] == "s":
                if d is None:
                    raise ValueError("syndrome before distance line")
                coords.append((int(parts[1]), int(parts[2])))
            else:
                raise ValueError(f"unknown record {parts[0]!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if d is None:
        raise ValueError("missing distance line")
    indices = sorted(ancilla_index(d, r, c) for r, c in coords)
    if len(set(indices)) != len(indices):
        raise ValueError("duplicate syndrome entries")
    return d, indices


def cmd_decode(args) -> int:
    with open(args.input) as fh:
        d, indices = parse_syndrome_file(fh.read())
    lat = build_lattice(d)
    syndrome = np.asarray(indices, dtype=np.int64)
    wm = ohq.build_weight_matrix(lat, syndrome)
    rng = RngSeed(args.seed, 0)

    result: dict = {
        "d": d,
        "decoder": args.decoder,
        "syndromes": indices,
        "numVarsSome": int(wm.n),
        "numVarsOhq": wm.num_variables,
    }
    if args.decoder == "some":
        outcome = some.decode(wm)
        vector, feasible = outcome.vector, outcome.feasible
        result["seedsTried"] = outcome.seeds_tried
        energy = outcome.energy
    else:
        q = ohq.build_qubo(wm, d)
        if args.decoder == "exact":
            solved = solvers.solve_exhaustive(q)
        else:
            solved = solvers.solve_anneal(q, solvers.AnnealSchedule(seed=rng.tagged(2)))
        vector = ohq.matching_from_assignment(q, solved.assignment)
        feasible = vector is not None
        energy = solved.energy

    result["feasible"] = bool(feasible)
    result["energy"] = float(energy)
    result["energyExact"] = f"{energy.numerator}/{energy.denominator}"
    if feasible and args.decoder == "some":
        energy_check = some.outcome_energy(wm, vector)
        assert energy_check == energy
    if vector is not None:
        result["matching"] = [int(v) for v in vector]
        correction = np.zeros(lat.num_data_qubits, dtype=np.uint8)
        coin = rng.tagged(1).generator()
        if feasible:
            for i in range(wm.n):
                j = int(vector[i])
                if j < i or not wm.is_finite(i, j):
                    continue
                correction ^= path_correction(lat, indices[i], indices[j], coin)
        result["corrections"] = [int(qb) for qb in np.flatnonzero(correction)]
    else:
        result["matching"] = None
        result["corrections"] = []

    _write(args.out, json.dumps(result, indent=2) + "\n")
    return 0


def cmd_export_qubo(args) -> int:
    with open(args.input) as fh:
        d, indices = parse_syndrome_file(fh.read())
    lat = build_lattice(d)
    wm = ohq.build_weight_matrix(lat, np.asarray(indices, dtype=np.int64))
    _write(args.out, ohq.export_qubo(ohq.build_qubo(wm, d)))
    return 0


def cmd_oracle_check(args) -> int:
    report = []
    ok = True
    for d in args.d:
        lat = build_lattice(d)
        for p in args.p:
            checked = 0
            some_opt = 0
            some_bound_viol = 0
            exh_mismatch = 0
            exh_checked = 0
            sa_opt = 0
            for t in range(args.trials):
                syndrome = extract_syndrome(lat, sample_errors(lat, p, RngSeed(args.seed, t)))
                if syndrome.size == 0 or syndrome.size > args.max_n:
                    continue
                wm = ohq.build_weight_matrix(lat, syndrome)
                oracle = solvers.solve_involutions(wm)
                outcome = some.decode(wm)
                checked += 1
                if outcome.energy == oracle.energy:
                    some_opt += 1
                elif outcome.energy < oracle.energy:
                    some_bound_viol += 1
                q = ohq.build_qubo(wm, d)
                if q.num_variables <= solvers.MAX_EXHAUSTIVE_VARS:
                    exh_checked += 1
                    exact = solvers.solve_exhaustive(q)
                    if exact.energy != oracle.energy:
                        exh_mismatch += 1
                    sa = solvers.solve_anneal(
                        q, solvers.AnnealSchedule(seed=RngSeed(args.seed, t).tagged(2))
                    )
                    if sa.energy == exact.energy:
                        sa_opt += 1
            report.append(f"oracle-check d={d} p={_fmt(p)} trials={args.trials}")
            report.append(f"  instances checked (0 < n <= {args.max_n}): {checked}")
            if checked:
                report.append(f"  SOME optimal vs involution oracle: {some_opt / checked:.4f}")
                report.append(f"  SOME below oracle minimum (must be 0): {some_bound_viol}")
            if exh_checked:
                report.append(
                    f"  exhaustive-QUBO vs involution equality (must be 1): "
                    f"{(exh_checked - exh_mismatch) / exh_checked:.4f}"
                )
                report.append(f"  SA optimal vs exhaustive: {sa_opt / exh_checked:.4f}")
            if some_bound_viol or exh_mismatch:
                ok = False
    report.append("PASS" if ok else "FAIL")
    _write(args.out, "\n".join(report) + "\n")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="someqec",
        description="Surface-code decoding experiments with the OHQ/SOME toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, decoder=True):
        sp.add_argument("--d", type=parse_distances, required=True, help="code distances, comma list")
        sp.add_argument("--p", type=parse_rates, required=True,
                        help="error rates: comma list or start:end:step")
        sp.add_argument("--trials", type=int, default=10000)
        if decoder:
            sp.add_argument("--decoder", choices=DECODERS, default="some")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument("--skip-trivial", action="store_true",
                        help="exclude error-free trials from timing statistics")

    sp = sub.add_parser("sweep", help="logical error rate per (d, p)")
    add_common(sp)
    sp.add_argument("--timing", action="store_true",
                    help="fill timing columns (breaks byte-determinism)")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("vars", help="variable-count statistics per (d, p)")
    add_common(sp, decoder=False)
    sp.set_defaults(func=cmd_vars)

    sp = sub.add_parser("bench", help="decode-latency percentiles per (d, p)")
    add_common(sp)
    sp.add_argument("--warmup", type=int, default=100)
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("decode", help="decode one syndrome file to JSON")
    sp.add_argument("input", help="syndrome file: 'd <dist>' then 's <row> <col>' lines")
    sp.add_argument("--decoder", choices=DECODERS, default="some")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("export-qubo", help="emit the QUBO text format for a syndrome file")
    sp.add_argument("input")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_export_qubo)

    sp = sub.add_parser("oracle-check", help="cross-check SOME, SA, exhaustive and involution solvers")
    add_common(sp, decoder=False)
    sp.add_argument("--max-n", type=int, default=10,
                    help="largest syndrome count handed to the involution oracle")
    sp.set_defaults(func=cmd_oracle_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ValueError as exc:  # bad --d/--p values
        parser.error(str(exc))
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"someqec: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
