"""Symbol-level directional-modulation precoding for multi-user MIMO.

Designs per-symbol transmit vectors that induce M-PSK symbols directly on
user antennas (power-minimizing with fixed or relaxed phase, and
received-signal-level-minimizing), models zero-forcing / MMSE /
brute-force eavesdroppers plus a conventional ZF-precoding benchmark, and
runs seeded Monte Carlo scenarios with CSV/figure reporting.
"""

from .benchmark import bench_eve_mmse, bench_eve_zf, transmit, zf_transmit
from .channel import (
    awgn,
    draw_channel_set,
    rayleigh,
    ring_los,
    stack,
    ula_los,
)
from .eavesdropper import (
    EveObservation,
    LookupTable,
    brute_force_ml,
    build_lookup,
    complexity_estimate,
    estimate_c_w,
    lookup_table_size,
    mmse_estimate,
    zf_estimate,
)
from .errors import (
    CapabilityError,
    ConfigError,
    DirmodError,
    InfeasibleDesignError,
    InvalidOrderError,
    NumericalError,
    SingularPhaseError,
    TableSizeError,
)
from .modulation import (
    Constellation,
    build_constellation,
    detect,
    relaxed_region,
)
from .precoder import (
    DesignMode,
    DesignProblem,
    PrecoderSolution,
    check_feasibility,
    design,
    verify,
)
from .report import render_figures, write_csv
from .simulator import (
    ScenarioConfig,
    brute_force_timing,
    preset_configs,
    run_point,
    sweep,
    ula_scenario,
)
from .solvers import (
    PenaltyConfig,
    SolveTrace,
    ldp_solve,
    nnls_design_solve,
    oracle_solve,
    penalty_solve,
)

__version__ = "1.0.0"

__all__ = [
    "CapabilityError",
    "ConfigError",
    "Constellation",
    "DesignMode",
    "DesignProblem",
    "DirmodError",
    "EveObservation",
    "InfeasibleDesignError",
    "InvalidOrderError",
    "LookupTable",
    "NumericalError",
    "PenaltyConfig",
    "PrecoderSolution",
    "ScenarioConfig",
    "SingularPhaseError",
    "SolveTrace",
    "TableSizeError",
    "awgn",
    "bench_eve_mmse",
    "bench_eve_zf",
    "brute_force_ml",
    "brute_force_timing",
    "build_constellation",
    "build_lookup",
    "check_feasibility",
    "complexity_estimate",
    "design",
    "detect",
    "draw_channel_set",
    "estimate_c_w",
    "ldp_solve",
    "lookup_table_size",
    "mmse_estimate",
    "nnls_design_solve",
    "oracle_solve",
    "penalty_solve",
    "preset_configs",
    "rayleigh",
    "relaxed_region",
    "render_figures",
    "ring_los",
    "run_point",
    "stack",
    "sweep",
    "transmit",
    "ula_los",
    "ula_scenario",
    "verify",
    "write_csv",
    "zf_estimate",
    "zf_transmit",
    "__version__",
]
