"""Exact generators for equidistributed-mod-1 sequences and their tests.

The library builds scalar streams beta_k = x_k(t) mod 1 from exact
rational or fixed-point arithmetic, windows them into d-dimensional
points, and checks simple/multiple/complete equidistribution through
Weyl sums, discrepancy bounds, and seed-averaged covariance diagnostics.
"""

from .arithmetic import (
    DEFAULT_MAX_POWER_STEPS,
    DEFAULT_MAX_WORK_BITS,
    DEFAULT_SEED_BITS,
    FixedPointReal,
    RationalSeed,
    SeedSampler,
    factorial_mod,
    fixed_point_pow,
    fixed_point_power_stream,
    is_probable_prime,
    modpow,
    sample_seed,
)
from .discrepancy import (
    DiscrepancyResult,
    etk_bound,
    extreme_discrepancy_1d,
    star_discrepancy_1d,
    star_discrepancy_oracle,
)
from .errors import (
    CompletenessError,
    EquidistError,
    IntervalWidthError,
    PrecisionBudgetError,
    StreamLengthError,
)
from .generators import (
    ArithmeticIndices,
    GeneratorSpec,
    UnitSample,
    WindowConfig,
    beta_stream,
    export_stream_csv,
    interleaved_vectors,
    read_index_file,
    residue_stream,
    residues_to_floats,
    stream_floats,
    unit_float,
    window_vectors,
    windows_array,
)
from .stochastic import (
    BytesBitSource,
    DecayFit,
    FarPairCheck,
    GammaStream,
    LagScan,
    MomentEstimate,
    MomentTarget,
    SeedBitSource,
    SllnDiagnostics,
    c_of_m_scan,
    default_bit_source,
    del_criterion,
    exact_frequency,
    exact_frequency_factorial,
    gamma_index,
    gamma_stream,
    lemma2_decay_fit,
    lemma3_check,
    mc_moment,
    wcud_check,
)
from .weyl import (
    MultiIndex,
    ScanResult,
    WeylSeries,
    canonical_half,
    checkpoint_grid,
    criterion_scan,
    degenerate_m_multiplicative,
    degenerate_m_weyl,
    multi_indices,
    scan_points,
    weyl_sum,
)

__version__ = "0.1.0"

__all__ = [
    "ArithmeticIndices",
    "BytesBitSource",
    "CompletenessError",
    "DecayFit",
    "DEFAULT_MAX_POWER_STEPS",
    "DEFAULT_MAX_WORK_BITS",
    "DEFAULT_SEED_BITS",
    "DiscrepancyResult",
    "EquidistError",
    "FarPairCheck",
    "FixedPointReal",
    "GammaStream",
    "GeneratorSpec",
    "IntervalWidthError",
    "LagScan",
    "MomentEstimate",
    "MomentTarget",
    "MultiIndex",
    "PrecisionBudgetError",
    "RationalSeed",
    "ScanResult",
    "SeedBitSource",
    "SeedSampler",
    "SllnDiagnostics",
    "StreamLengthError",
    "UnitSample",
    "WeylSeries",
    "WindowConfig",
    "beta_stream",
    "c_of_m_scan",
    "canonical_half",
    "checkpoint_grid",
    "criterion_scan",
    "default_bit_source",
    "degenerate_m_multiplicative",
    "degenerate_m_weyl",
    "del_criterion",
    "etk_bound",
    "exact_frequency",
    "exact_frequency_factorial",
    "export_stream_csv",
    "extreme_discrepancy_1d",
    "factorial_mod",
    "fixed_point_pow",
    "fixed_point_power_stream",
    "gamma_index",
    "gamma_stream",
    "interleaved_vectors",
    "is_probable_prime",
    "lemma2_decay_fit",
    "lemma3_check",
    "mc_moment",
    "modpow",
    "multi_indices",
    "read_index_file",
    "residue_stream",
    "residues_to_floats",
    "sample_seed",
    "scan_points",
    "star_discrepancy_1d",
    "star_discrepancy_oracle",
    "stream_floats",
    "unit_float",
    "wcud_check",
    "weyl_sum",
    "window_vectors",
    "windows_array",
    "__version__",
]
