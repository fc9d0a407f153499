"""Topology-aware quantum circuit optimizer.

Partitions a mapped circuit into connected k-qubit blocks, re-synthesizes
each block's unitary into a shorter CNOT sequence, and re-composes the
circuit, with fidelity metrics for judging the result.
"""

from .circuit_ir import (
    Circuit,
    DependencyDag,
    Gate,
    GateKind,
    QasmError,
    build_dag,
    merge_single_qubit_runs,
    parse_qasm,
    write_qasm,
)
from .composer import cnot_reduction, compose
from .noise_metrics import NoiseSpec, sample_noisy, success_rate, tvd
from .partitioner import Block, Partition, executable_gates, partition, score
from .pipeline import run_optimize
from .router import Layout, check_mapped, route
from .simcore import (
    block_unitary,
    circuit_unitary,
    distance,
    gate_matrix,
    simulate,
    state_infidelity,
)
from .synthesis import (
    SynthesisResult,
    SynthesisStatus,
    Template,
    instantiate,
    optimize_params,
    synthesize,
)
from .topology import QubitGroup, Topology, enumerate_valid_groups, is_valid_group, load_topology

__version__ = "0.1.0"

__all__ = [
    "Circuit", "DependencyDag", "Gate", "GateKind", "QasmError",
    "parse_qasm", "write_qasm", "build_dag", "merge_single_qubit_runs",
    "Topology", "QubitGroup", "load_topology", "is_valid_group",
    "enumerate_valid_groups",
    "Layout", "route", "check_mapped",
    "Block", "Partition", "partition", "executable_gates", "score",
    "gate_matrix", "block_unitary", "circuit_unitary", "distance",
    "simulate", "state_infidelity",
    "Template", "SynthesisResult", "SynthesisStatus",
    "instantiate", "optimize_params", "synthesize",
    "compose", "cnot_reduction",
    "NoiseSpec", "tvd", "sample_noisy", "success_rate",
    "run_optimize",
    "__version__",
]
