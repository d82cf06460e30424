"""Quantum causal inference from two-time coarse-grained measurements."""

from .choi import (
    CausalVerdict,
    ChoiReconstruction,
    Verdict,
    analyze_pdm,
    classify,
    extract_choi,
    infer_causal_structure,
)
from .linalg import (
    PauliString,
    anticommutator,
    hermitian_eigen,
    partial_trace,
    pauli_matrix,
    tensor,
    trace_norm,
)
from .model import (
    Channel,
    ScenarioConfig,
    apply_channel,
    choi_of_channel,
    lambda_plus_state,
    measure_prepare_channel,
    partial_swap_channel,
    partial_swap_unitary,
)
from .pdm import (
    PDM,
    ExpectationTable,
    build_pdm,
    generate_table,
    marginal_at_time,
    negativity,
    reduce_pdm,
    time_reverse,
    two_time_expectation,
)
from .tolerances import Tolerances

__version__ = "0.1.0"
