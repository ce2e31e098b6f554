"""Energy-preserving pseudo-spectral solver for the 1-D periodic semilinear
wave equation, with long-time momentum/action conservation diagnostics."""

from .spectral import (
    FrequencyTable,
    Grid,
    SymmetryError,
    build_frequencies,
    dft,
    double_prime_weights,
    idft,
    sobolev_norm,
    symmetry_residual,
)
from .system import (
    ResonantStepsizeError,
    State,
    SystemSpec,
    actions,
    apply_nonlinearity,
    drift_functionals,
    energy,
    epsilon_estimate,
    initial_state,
    modification_factor,
    modified_actions,
    modified_momentum,
    momentum,
)
from .integrator import (
    NonConvergenceError,
    PhiTable,
    StepperConfig,
    aavf_step,
    avf_integral,
    build_phi_table,
    exact_linear_step,
    integrate,
    phi,
    qp_relation_residual,
)
from .resonance import (
    EnumerationTooLargeError,
    KVector,
    ResonanceParams,
    check_numerical_nonres,
    check_pair_nonres,
    check_two_mode_nonres,
    near_resonant_set,
    resonance_report,
)
from .harness import DiagnosticRow, RunConfig, emit_csv, run_experiment, trend_test

__version__ = "0.1.0"
