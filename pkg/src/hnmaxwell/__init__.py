"""Completely-monotone second-order convolution quadrature for the
Havriliak-Negami kernel and an energy-decay-preserving 2D Maxwell solver."""

from .fem import (
    AssembledOperators,
    FieldVectors,
    MaxwellMesh,
    assemble,
    assemble_cell_load,
    assemble_edge_load,
    build_mesh,
    interpolate_E,
    interpolate_H,
    l2_error,
)
from .monotonicity import IndexReport, alternating_diff, index_k, indicator_rho, sweep_grid
from .prabhakar import (
    PrabhakarParams,
    SeriesConvergenceError,
    hn_kernel,
    ml3,
    prabhakar_integral_monomial,
)
from .quadrature import (
    CM2Constants,
    CQWeights,
    bdf_cq_weights,
    cm2_weights,
    delta_consistency_residual,
    generate_weights,
)
from .series import TruncatedSeries, binom_series, series_mul, series_pow
from .stepper import (
    EnergyTrace,
    ErrorReport,
    HNParams,
    SourceSet,
    StepperState,
    energy,
    energy_components,
    init_state,
    make_step_operator,
    manufactured_sources,
    observed_rates,
    run_convergence,
    run_energy,
    step,
)

__version__ = "0.1.0"
