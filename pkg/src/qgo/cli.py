"""Command-line interface.

Subcommands: optimize (full flow), partition, synth, verify, simulate,
bench, stats. Exit codes: 0 success, 2 input error, 3 internal invariant
violation.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import benchgen, report as report_mod
from .circuit_ir import Circuit, QasmError, parse_qasm, write_qasm
from .noise_metrics import NoiseSpec, ideal_distribution, sample_noisy, tvd
from .partitioner import partition
from .pipeline import logical_infidelity, run_optimize
from .router import Layout, check_mapped, lower_swaps, route
from .simcore import random_state
from .synthesis import synthesize
from .topology import QubitGroup, Topology, load_topology

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INTERNAL = 3


def _load_topology_arg(spec: str) -> Topology:
    if os.path.isfile(spec):
        with open(spec) as fh:
            return load_topology(fh.read())
    return load_topology(spec)


def _read_circuit(path: str) -> Circuit:
    with open(path) as fh:
        return parse_qasm(fh.read())


def _write_text(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _write_json(doc: dict, path: str | None) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    _write_text(text, path)


def _cmd_optimize(args) -> int:
    topo = _load_topology_arg(args.topology)
    circuit = _read_circuit(args.input)
    result = run_optimize(
        circuit,
        topo,
        k=args.k,
        threshold=args.threshold,
        time_budget=args.time_budget,
        jobs=args.jobs,
        seed=args.seed,
        assume_mapped=args.assume_mapped,
    )
    _write_text(write_qasm(result.circuit), args.output)
    if args.report:
        _write_json(result.report, args.report)
    rep = result.report
    print(
        f"cnot {rep['cnot_before']} -> {rep['cnot_after']} "
        f"(reduction {rep['reduction_rate']:.1%}), {len(rep['blocks'])} blocks",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_partition(args) -> int:
    topo = _load_topology_arg(args.topology)
    circuit = _read_circuit(args.input)
    if args.assume_mapped:
        if not check_mapped(circuit, topo):
            raise ValueError("circuit is not mapped to the topology (--assume-mapped)")
        mapped = lower_swaps(Circuit(topo.num_qubits, list(circuit.gates), list(circuit.measurements)))
    else:
        mapped, _ = route(circuit, topo, args.seed)
    part = partition(mapped, topo, args.k)
    doc = {
        "schema": 1,
        "k": args.k,
        "num_gates": len(mapped.gates),
        "blocks": [
            {
                "group": list(b.group.qubits),
                "gates": list(b.gates),
                "score": b.cnot_count,
            }
            for b in part.blocks
        ],
    }
    _write_json(doc, args.dump_blocks)
    print(f"{len(part.blocks)} blocks over {len(mapped.gates)} gates", file=sys.stderr)
    return EXIT_OK


def _cmd_synth(args) -> int:
    topo = _load_topology_arg(args.topology)
    target = np.load(args.unitary)
    qubits = tuple(int(q) for q in args.group.split(","))
    result = synthesize(
        np.asarray(target, dtype=complex),
        QubitGroup(tuple(sorted(qubits))),
        topo,
        threshold=args.threshold,
        cnot_budget=args.cnot_budget,
        time_budget=args.time_budget,
        seed=args.seed,
    )
    _write_text(write_qasm(result.circuit), args.output)
    print(
        f"status={result.status.value} cnots={result.cnot_count} "
        f"distance={result.achieved_distance:.3e}",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_verify(args) -> int:
    original = _read_circuit(args.original)
    optimized = _read_circuit(args.optimized)
    if args.report:
        with open(args.report) as fh:
            rep = json.load(fh)
        layout = Layout(
            tuple(rep["layout"]["initial"]), tuple(rep["layout"]["final"])
        )
    else:
        if original.num_qubits != optimized.num_qubits:
            raise ValueError(
                f"qubit-count mismatch ({original.num_qubits} vs {optimized.num_qubits}); "
                "pass --report for routed circuits"
            )
        identity = tuple(range(optimized.num_qubits))
        layout = Layout(identity, identity)
    n = original.num_qubits
    if n > 16:
        raise ValueError(f"{n} qubits exceeds the verification guard (16)")
    doc = {"num_qubits": n, "infidelity": logical_infidelity(original, optimized, layout)}
    if n <= 6:
        worst = 0.0
        for i in range(args.trials):
            state = random_state(n, seed=1000 + i)
            worst = max(worst, logical_infidelity(original, optimized, layout, state))
        doc["max_infidelity_random_inputs"] = worst
        doc["trials"] = args.trials
    _write_json(doc, None)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    circuit = _read_circuit(args.input)
    if circuit.num_qubits > 16:
        raise ValueError(f"{circuit.num_qubits} qubits exceeds the noise-simulation guard (16)")
    noise = NoiseSpec(args.noise_p, args.single_qubit_p)
    dist = sample_noisy(circuit, noise, args.shots, args.seed)
    ideal = ideal_distribution(circuit)
    doc = {
        "schema": 1,
        "shots": args.shots,
        "seed": args.seed,
        "two_qubit_error_p": args.noise_p,
        "single_qubit_error_p": args.single_qubit_p,
        "tvd_to_ideal": tvd(dist, ideal),
        "distribution": dist,
    }
    _write_json(doc, args.output)
    return EXIT_OK


def _cmd_bench(args) -> int:
    if args.family == "qft":
        c = benchgen.gen_qft(args.n)
    elif args.family == "tfim":
        c = benchgen.gen_tfim(args.n, args.steps, args.dt)
    elif args.family == "qaoa":
        c = benchgen.gen_qaoa_maxcut(args.n, args.layers, args.graph_seed)
    elif args.family == "adder":
        c = benchgen.gen_adder(args.bits)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown family {args.family}")
    _write_text(write_qasm(c), args.output)
    return EXIT_OK


def _cmd_stats(args) -> int:
    reports = []
    for path in args.reports:
        with open(path) as fh:
            rep = json.load(fh)
        if rep.get("schema") != 1:
            raise ValueError(f"{path}: unsupported report schema {rep.get('schema')}")
        name = os.path.splitext(os.path.basename(path))[0]
        reports.append((name, rep))
    os.makedirs(args.out_dir, exist_ok=True)
    written = [os.path.join(args.out_dir, "summary.csv")]
    report_mod.write_summary_csv(reports, written[0])
    for name, rep in reports:
        written += report_mod.render_report(name, rep, args.out_dir)
    for path in written:
        print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qgo", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--topology", required=True,
                        help="preset (line-N, grid-RxC), JSON, or a file holding either")
        sp.add_argument("--k", type=int, default=3, help="block size (default 3)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--assume-mapped", action="store_true",
                        help="input is already hardware-compliant; skip routing")

    sp = sub.add_parser("optimize", help="route, partition, synthesize, compose")
    sp.add_argument("input")
    add_common(sp)
    sp.add_argument("--threshold", type=float, default=1e-10)
    sp.add_argument("--time-budget", type=float, default=60.0,
                    help="per-block synthesis budget in CPU seconds")
    sp.add_argument("--jobs", type=int, default=1, help="parallel synthesis workers")
    sp.add_argument("-o", "--output", help="optimized QASM path (default stdout)")
    sp.add_argument("--report", help="write the JSON report here")
    sp.set_defaults(func=_cmd_optimize)

    sp = sub.add_parser("partition", help="partition a mapped circuit into blocks")
    sp.add_argument("input")
    add_common(sp)
    sp.add_argument("--dump-blocks", help="write blocks JSON here (default stdout)")
    sp.set_defaults(func=_cmd_partition)

    sp = sub.add_parser("synth", help="synthesize one unitary (.npy) on a qubit group")
    sp.add_argument("unitary")
    sp.add_argument("--topology", required=True)
    sp.add_argument("--group", required=True, help="comma-separated qubit indices")
    sp.add_argument("--threshold", type=float, default=1e-10)
    sp.add_argument("--cnot-budget", type=int, default=None)
    sp.add_argument("--time-budget", type=float, default=60.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output", help="QASM path (default stdout)")
    sp.set_defaults(func=_cmd_synth)

    sp = sub.add_parser("verify", help="state infidelity between two circuits")
    sp.add_argument("original")
    sp.add_argument("optimized")
    sp.add_argument("--report", help="optimize report JSON carrying the layout")
    sp.add_argument("--trials", type=int, default=10,
                    help="random input states checked when n <= 6")
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("simulate", help="noisy sampling and tvd against ideal")
    sp.add_argument("input")
    sp.add_argument("--noise-p", type=float, default=0.0, help="two-qubit depolarizing p")
    sp.add_argument("--single-qubit-p", type=float, default=0.0)
    sp.add_argument("--shots", type=int, default=8192)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output", help="JSON path (default stdout)")
    sp.set_defaults(func=_cmd_simulate)

    sp = sub.add_parser("bench", help="generate a benchmark circuit as QASM")
    sp.add_argument("--family", required=True, choices=["qft", "tfim", "qaoa", "adder"])
    sp.add_argument("--n", type=int, default=5)
    sp.add_argument("--steps", type=int, default=3, help="tfim Trotter steps")
    sp.add_argument("--dt", type=float, default=0.1, help="tfim step size")
    sp.add_argument("--layers", type=int, default=2, help="qaoa layers")
    sp.add_argument("--graph-seed", type=int, default=0, help="qaoa graph/angle seed")
    sp.add_argument("--bits", type=int, default=2, help="adder operand width")
    sp.add_argument("-o", "--output", help="QASM path (default stdout)")
    sp.set_defaults(func=_cmd_bench)

    sp = sub.add_parser("stats", help="render report CSV tables and figures")
    sp.add_argument("reports", nargs="+", help="optimize report JSON files")
    sp.add_argument("--out-dir", default="qgo-stats")
    sp.set_defaults(func=_cmd_stats)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (QasmError, ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"qgo {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (RuntimeError, AssertionError) as exc:
        print(f"qgo {args.command}: internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
