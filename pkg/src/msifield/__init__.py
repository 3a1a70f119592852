"""msifield: two-dimensional multi-scale-invariant Gaussian random fields.

Simulation of (modulated) fractional Brownian sheets, spectral analysis of
periodically correlated lattice fields, Markov covariance propagation,
scale/Hurst estimation from strip series, and rectangle-level prediction
with MAPE scoring -- plus bundled case-study tables that tie it together.
"""

from .errors import MsiFieldError
from .model import (
    Axis,
    Breakpoints,
    GridField,
    HurstVector,
    MsiModel,
    ScaleVector,
    StripSeries,
    validate_model,
)
from .lamperti import (
    LatticeFunction,
    apply_dilation,
    inverse_quasi_lamperti,
    quasi_lamperti,
)
from .simulate import (
    FbsKernel,
    SfbsKernel,
    SimulationPlan,
    fbs_cov,
    sfbs_cov,
    simulate_gaussian,
    simulate_grid,
)
from .spectral import (
    DensityTable,
    PcCovarianceTable,
    PeriodLattice,
    RTable,
    density_from_r,
    density_h,
    harmonic_synthesize,
    msi_cov_from_pc,
    q_from_r,
    r_from_q,
    r_h_from_q,
)
from .markov import (
    FirstScaleStats,
    check_ratio_periodicity,
    cross_cov,
    dsi_cov,
    h_factor,
    mmsi_cov,
)
from .estimate import (
    QuadraticVariationTable,
    SubintervalLayout,
    assemble_model,
    detect_scale_intervals,
    hurst_from_ratio,
    hurst_prime_dyadic,
    quadratic_variation,
    scale_from_breakpoints,
)
from .predict import (
    LewisClass,
    PredictionReport,
    RectangleTotals,
    lewis_class,
    mape,
    predict_rect,
    prediction_report,
)
from .io import (
    load_grid,
    load_model,
    load_series,
    rect_sums,
    save_model,
    strip_sums,
)

__version__ = "0.1.0"

__all__ = [
    "MsiFieldError",
    "Axis", "Breakpoints", "GridField", "HurstVector", "MsiModel",
    "ScaleVector", "StripSeries", "validate_model",
    "LatticeFunction", "apply_dilation", "inverse_quasi_lamperti", "quasi_lamperti",
    "FbsKernel", "SfbsKernel", "SimulationPlan", "fbs_cov", "sfbs_cov",
    "simulate_gaussian", "simulate_grid",
    "DensityTable", "PcCovarianceTable", "PeriodLattice", "RTable",
    "density_from_r", "density_h", "harmonic_synthesize", "msi_cov_from_pc",
    "q_from_r", "r_from_q", "r_h_from_q",
    "FirstScaleStats", "check_ratio_periodicity", "cross_cov", "dsi_cov",
    "h_factor", "mmsi_cov",
    "QuadraticVariationTable", "SubintervalLayout", "assemble_model",
    "detect_scale_intervals", "hurst_from_ratio", "hurst_prime_dyadic",
    "quadratic_variation", "scale_from_breakpoints",
    "LewisClass", "PredictionReport", "RectangleTotals", "lewis_class",
    "mape", "predict_rect", "prediction_report",
    "load_grid", "load_model", "load_series", "rect_sums", "save_model",
    "strip_sums",
    "__version__",
]
