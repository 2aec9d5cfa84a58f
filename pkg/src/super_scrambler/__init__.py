"""Classical simulation of operator scrambling in super-Clifford circuits."""

__version__ = "0.1.0"

from .model import (
    C3,
    OperatorProgram,
    ProgramError,
    SuperPauli,
    Swap,
    T,
    XYStringIndex,
    localize_c3,
    parse_program,
    format_program,
    reverse_from_state_space,
)
from .tableau import Region, SuperStabilizerTableau, TableauError
from .oracle import (
    GateTableReport,
    OperatorWavefunction,
    OracleError,
    verify_gate_tables,
)
from .experiments import (
    EntropySeries,
    ExperimentConfig,
    ExperimentError,
    build_ghz_program,
    estimate_saturation_time,
    fit_growth_rate,
    page_value,
    random_step,
    run_random_ensemble,
)
from .gf2 import gf2_rank, pack_bit_matrix, rank_of_bit_matrix

__all__ = [
    "C3",
    "EntropySeries",
    "ExperimentConfig",
    "ExperimentError",
    "GateTableReport",
    "OperatorProgram",
    "OperatorWavefunction",
    "OracleError",
    "ProgramError",
    "Region",
    "SuperPauli",
    "SuperStabilizerTableau",
    "Swap",
    "T",
    "TableauError",
    "XYStringIndex",
    "build_ghz_program",
    "estimate_saturation_time",
    "fit_growth_rate",
    "format_program",
    "gf2_rank",
    "localize_c3",
    "pack_bit_matrix",
    "page_value",
    "parse_program",
    "random_step",
    "rank_of_bit_matrix",
    "reverse_from_state_space",
    "run_random_ensemble",
    "verify_gate_tables",
]
