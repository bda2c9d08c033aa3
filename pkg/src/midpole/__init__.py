"""midpole: dominant pole placement for single-delay retarded systems via
roots of maximal multiplicity.

The closed-form synthesis places a real root of multiplicity 2n that is
guaranteed dominant; the surrounding toolkit certifies the multiplicity,
counts and locates the remaining spectrum, simulates the time response,
and packages two worked control designs.
"""

from .quasipoly import (
    NormalizedQuasipolynomial,
    RetardedQuasipolynomial,
    StripCountBound,
    poly_exp_integral,
)
from .synthesis import (
    LinearSystemOracle,
    SynthesisResult,
    binomial_suite,
    build_linear_system,
    certify_multiplicity,
    denormalize,
    dominant_root_from_coeff,
    multiplicity_scale,
    normalize,
    normalized_coefficients,
    oracle_normalized_coefficients,
    synthesize,
)
from .hypergeom import (
    KummerParams,
    factored_delta,
    kummer_integral,
    kummer_m,
    normalized_mid_eval,
    normalized_mid_quasipolynomial,
    wynn_root_sides,
)
from .rootfinder import (
    DominanceReport,
    Rectangle,
    RootRecord,
    SpectrumReport,
    apriori_root_radius,
    count_roots,
    count_roots_in_strip,
    find_roots,
    spectral_abscissa,
    verify_dominance,
)
from .ddesim import (
    SCENARIO_NAMES,
    SimulationSpec,
    SimulationTrace,
    build_scenario,
    fit_decay_rate,
    simulate,
)
from .designs import (
    ControllerDesign,
    SecondOrderDesign,
    cubic_q,
    cubic_q_derivative,
    design_second_order,
    design_wind_tunnel,
    real_root_r0,
)
from . import errors

__version__ = "1.0.0"

__all__ = [
    "RetardedQuasipolynomial",
    "NormalizedQuasipolynomial",
    "StripCountBound",
    "poly_exp_integral",
    "SynthesisResult",
    "LinearSystemOracle",
    "synthesize",
    "normalize",
    "denormalize",
    "normalized_coefficients",
    "oracle_normalized_coefficients",
    "build_linear_system",
    "certify_multiplicity",
    "multiplicity_scale",
    "dominant_root_from_coeff",
    "binomial_suite",
    "KummerParams",
    "kummer_m",
    "kummer_integral",
    "factored_delta",
    "normalized_mid_quasipolynomial",
    "normalized_mid_eval",
    "wynn_root_sides",
    "Rectangle",
    "RootRecord",
    "SpectrumReport",
    "DominanceReport",
    "count_roots",
    "count_roots_in_strip",
    "find_roots",
    "spectral_abscissa",
    "verify_dominance",
    "apriori_root_radius",
    "SimulationSpec",
    "SimulationTrace",
    "simulate",
    "fit_decay_rate",
    "build_scenario",
    "SCENARIO_NAMES",
    "SecondOrderDesign",
    "ControllerDesign",
    "design_second_order",
    "design_wind_tunnel",
    "real_root_r0",
    "cubic_q",
    "cubic_q_derivative",
    "errors",
    "__version__",
]
