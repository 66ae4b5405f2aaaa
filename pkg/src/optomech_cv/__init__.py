"""Stationary output-mode entanglement and CV dense-coding rates for a
driven two-cavity (membrane-in-the-middle) optomechanical system.

Pipeline: PhysicalParams -> derive/fixed_point -> build -> stability /
lyapunov_cm -> output_cm -> reduce_two_mode -> entanglement measures and
dense-coding rates.  See the README for conventions and CLI usage.
"""

from ._version import __version__
from .conventions import CONVENTIONS
from .densecoding import (
    RATE_CSV_COLUMNS,
    Capacities,
    RatePoint,
    bob_variance,
    capacities,
    conditional_variance,
    rate_om,
    rate_point,
)
from .dynamics import (
    LinearModel,
    StabilityReport,
    build,
    lyapunov_cm,
    stability,
)
from .errors import (
    BlockFormWarning,
    ConfigError,
    ConvergenceError,
    MultipleStableRootsWarning,
    ParameterDomainError,
    PhysicalityWarning,
    QuadratureError,
    UnstableModelError,
)
from .gaussian import (
    SymplecticPair,
    TwoModeBlock,
    duan_sum,
    log_negativity,
    pt_symplectic,
    reduce_two_mode,
    symplectic_eigs,
)
from .config import apply_overrides, read_params
from .emit import write_json, write_rate_csv, write_sweep_csv
from .params import (
    DerivedParams,
    PhysicalParams,
    derive,
    derive_any,
    drive_amplitude,
    effective_coupling,
    fixed_point,
    single_photon_coupling,
    thermal_occupancy,
)
from .presets import PRESET_IDS, FigureOutput, base_params, figure, get_preset
from .spectral import (
    FilterSpec,
    OutputCM,
    filter_ft,
    filters_from,
    output_cm,
    unfiltered_cm,
    upsilon,
)
from .sweep import (
    OBSERVABLES,
    Axis,
    SweepResult,
    SweepSpec,
    run_sweep,
)

__all__ = [
    "__version__",
    "CONVENTIONS",
    "RATE_CSV_COLUMNS",
    "Capacities",
    "RatePoint",
    "bob_variance",
    "capacities",
    "conditional_variance",
    "rate_om",
    "rate_point",
    "LinearModel",
    "StabilityReport",
    "build",
    "lyapunov_cm",
    "stability",
    "BlockFormWarning",
    "ConfigError",
    "ConvergenceError",
    "MultipleStableRootsWarning",
    "ParameterDomainError",
    "PhysicalityWarning",
    "QuadratureError",
    "UnstableModelError",
    "SymplecticPair",
    "TwoModeBlock",
    "duan_sum",
    "log_negativity",
    "pt_symplectic",
    "reduce_two_mode",
    "symplectic_eigs",
    "DerivedParams",
    "PhysicalParams",
    "derive",
    "derive_any",
    "drive_amplitude",
    "effective_coupling",
    "fixed_point",
    "single_photon_coupling",
    "thermal_occupancy",
    "read_params",
    "apply_overrides",
    "write_json",
    "write_rate_csv",
    "write_sweep_csv",
    "PRESET_IDS",
    "FigureOutput",
    "base_params",
    "figure",
    "get_preset",
    "FilterSpec",
    "OutputCM",
    "filter_ft",
    "filters_from",
    "output_cm",
    "unfiltered_cm",
    "upsilon",
    "OBSERVABLES",
    "Axis",
    "SweepResult",
    "SweepSpec",
    "run_sweep",
]
