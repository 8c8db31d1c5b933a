"""Asymptotic order statistics of non-central chi-square channel gains and
performance metrics of the k-th best selection-combining receiver."""

from .evt import (
    LinkEnsemble,
    NormConstants,
    OrderVerdict,
    finite_m_kth_max_cdf,
    finite_m_kth_max_pdf,
    finite_m_u,
    finite_m_u_prime,
    norm_constants,
    normalized_kth_max_cdf,
    normalized_kth_max_pdf,
    normalized_mgf,
    select_nu_tilde,
    stochastic_order_check,
    unnormalized_kth_max_cdf_asym,
)
from .metrics import (
    BepEstimate,
    MetricParams,
    QuadratureError,
    SeriesReport,
    avg_bep,
    avg_throughput,
    avg_throughput_quadrature,
    avg_throughput_series,
    effective_throughput,
    outage_probability,
)
from .oracle import (
    EmpiricalCdf,
    brute_force_kth_max_cdf,
    exact_kth_max_cdf,
    ks_distance,
    mc_metric,
    sample_kth_max,
    sample_order_stats,
)

__version__ = "0.1.0"

__all__ = [
    "LinkEnsemble",
    "NormConstants",
    "OrderVerdict",
    "MetricParams",
    "SeriesReport",
    "BepEstimate",
    "QuadratureError",
    "EmpiricalCdf",
    "select_nu_tilde",
    "norm_constants",
    "normalized_kth_max_cdf",
    "normalized_kth_max_pdf",
    "normalized_mgf",
    "unnormalized_kth_max_cdf_asym",
    "finite_m_u",
    "finite_m_u_prime",
    "finite_m_kth_max_cdf",
    "finite_m_kth_max_pdf",
    "stochastic_order_check",
    "outage_probability",
    "avg_throughput",
    "avg_throughput_series",
    "avg_throughput_quadrature",
    "effective_throughput",
    "avg_bep",
    "sample_kth_max",
    "sample_order_stats",
    "exact_kth_max_cdf",
    "brute_force_kth_max_cdf",
    "ks_distance",
    "mc_metric",
    "__version__",
]
