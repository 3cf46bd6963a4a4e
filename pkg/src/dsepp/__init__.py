"""dsepp: stabilizer-code entanglement purification for dual-species atom arrays.

Compiles arbitrary qubit stabilizer codes into the two-species gate set
(global Hadamard blocks plus CZ lists), schedules the CZ gates into minimal
parallel layers, simulates the resulting purification protocols under input
and circuit-level depolarizing noise, and evaluates closed-form fidelities
and asymptotic distillation rates.
"""

__version__ = "0.1.0"

from .f2 import BitMatrix, is_symplectic, matmul_f2, rank_f2, rref
from .stabilizer import (
    DETECTED,
    CodePreset,
    PauliString,
    StandardForm,
    Tableau,
    commutes,
    distance,
    five_one_three_preset,
    format_stabilizers,
    iceberg_preset,
    logical_class,
    parse_stabilizers,
    preset,
    random_tableau,
    standard_form,
    steane_preset,
)
from .compiler import (
    CompiledCircuit,
    CZLayer,
    GateProgram,
    GlobalH,
    MeasureZ,
    compile_circuit,
    encoded_stabilizers,
    propagate,
    propagate_program,
    swap_sequence,
    verify_encoding,
)
from .scheduler import (
    LayerAssignment,
    MultiGraph,
    build_multigraph,
    chromatic_index,
    verify_layers,
)
from .decoder import DecoderTable, generate_ml_decoder, table_513, table_713
from .sim import (
    BellClassDist,
    NoiseModel,
    SimResult,
    correlators,
    simulate_exact,
    simulate_mc,
)
from .rates import (
    BellDiag,
    epp_map,
    f_out_red,
    hashing_bound,
    hashing_yield,
    iceberg_fidelity,
    n_w,
    rains_bound,
    rate_LS,
    rate_Sh,
    rate_best,
    rate_sweep,
    recurrence_rates,
    undetected_prob,
)
from ._backend import KERNEL_NAME

__all__ = [name for name in dir() if not name.startswith("_")]
