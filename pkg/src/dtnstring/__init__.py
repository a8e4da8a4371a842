"""Degenerate elliptic strips and their non-local boundary operators.

The package realizes the two-way dictionary between strings (R, a, b) --
measure coefficients of a(dy) d_xx + 2 b(y) d_xy + d_yy on a half-plane or
strip -- and Fourier multipliers with completely monotone jump kernels:
exact propagation of the spectral ODE, Weyl functions with certified
truncation bounds, closed-form symbol evaluators, coefficient-form
conversions, and an FFT Dirichlet-to-Neumann map on periodic samples.
"""

from .errors import (
    ConversionError,
    DiscretizationError,
    DtnStringError,
    InvalidStringError,
    SymbolPoleError,
    TruncationBudgetError,
)
from .pieces import Piece, PiecewiseFn
from .strings import (
    DiscretizedString,
    GridPolicy,
    StringCoefficients,
    ValidationReport,
    cumulative_a,
    cumulative_B,
    discretize,
    validate,
)
from .propagator import (
    SolutionTrace,
    WeylResult,
    apply_mass,
    bounded_solution,
    energy_report,
    energy_residual,
    propagate_cell,
    solve_fundamental,
    trace_shape,
    weyl_fixed,
    weyl_fixed_batch,
    weyl_k,
    wronskian_deviation,
)
from .symbols import (
    ExponentialData,
    LevyTriplet,
    StieltjesData,
    exponential_symbol,
    gamma_complex,
    levy_symbol,
    log_gamma_complex,
    rogers_positivity_check,
    stieltjes_symbol,
)
from .transforms import (
    Conversion,
    DivergenceCoefficients,
    EKCoefficients,
    GeneralCoefficients,
    divergence_to_standard,
    ek_to_standard,
    reduce_general,
    standard_to_divergence,
    standard_to_ek,
)
from .extension import (
    DtnOperator,
    SampledFunction,
    apply_dtn,
    dtn_difference_quotient_check,
    harmonic_extend,
)
from .catalog import (
    CatalogEntry,
    complementary_symbol,
    default_catalog,
    dual_coefficients,
    example_constant,
    example_one_sided,
    example_power_law,
    example_zero,
    get_entry,
    power_law_constants,
    stable_weights,
)

__version__ = "0.1.0"
