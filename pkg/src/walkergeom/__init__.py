"""Curvature engine and verification suites for neutral-signature Walker metrics."""

__version__ = "0.1.0"

from .affine import (
    AffineConnection2,
    AffineRicci,
    affine_curvature_at,
    affine_ricci_at,
    check_affine_osserman,
    pq_connection,
    riemannian_extension,
)
from .config import (
    MetricConfig,
    connection_from_config,
    load_config,
    metric_from_config,
    write_extended_config,
)
from .expr import derivative, eval_value, parse_field, ricci_flat_pq, to_source
from .jets import Jet2, active_backend, eval_jet2, fd_jet2_oracle
from .operators import (
    PointCurvature,
    WeylSplit,
    calibration_info,
    jacobi_at,
    jacobi_polarized_at,
    point_curvature,
    ricci_at,
    scalar_curvature_at,
    sd_vanishing_side,
    skew_curv_op_at,
    weyl_split_at,
)
from .properties import (
    PropertyReport,
    check_commuting,
    check_einstein,
    check_nilpotent_jacobi,
    check_osserman_sampled,
    check_ricci_flat,
    check_sd_asd,
    check_thm_conditions,
    evaluate_all_properties,
    implication_violations,
    pq_condition_residuals,
    spectrum_matches,
)
from .suites import SUITE_NAMES, SuiteReport, run_suite
from .walker import (
    CurvatureTensor,
    WalkerMetric,
    christoffel_at,
    curvature_at,
    curvature_table_restricted,
    inverse_metric_at,
    metric_at,
)

__all__ = [
    "__version__",
    "parse_field", "to_source", "derivative", "eval_value", "ricci_flat_pq",
    "Jet2", "eval_jet2", "fd_jet2_oracle", "active_backend",
    "WalkerMetric", "CurvatureTensor", "metric_at", "inverse_metric_at",
    "christoffel_at", "curvature_at", "curvature_table_restricted",
    "PointCurvature", "point_curvature", "ricci_at", "scalar_curvature_at",
    "jacobi_at", "jacobi_polarized_at", "skew_curv_op_at",
    "WeylSplit", "weyl_split_at", "sd_vanishing_side", "calibration_info",
    "PropertyReport", "check_einstein", "check_ricci_flat", "check_commuting",
    "check_nilpotent_jacobi", "check_osserman_sampled", "check_sd_asd",
    "check_thm_conditions", "evaluate_all_properties", "implication_violations",
    "pq_condition_residuals", "spectrum_matches",
    "AffineConnection2", "AffineRicci", "pq_connection", "affine_curvature_at",
    "affine_ricci_at", "check_affine_osserman", "riemannian_extension",
    "MetricConfig", "load_config", "metric_from_config",
    "connection_from_config", "write_extended_config",
    "SUITE_NAMES", "SuiteReport", "run_suite",
]
