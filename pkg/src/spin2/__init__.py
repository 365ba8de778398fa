"""Partition functions of 2-spin systems on bounded-degree graphs: exact
enumeration, walk-tree and Taylor-interpolation approximation, and empirical
contraction certificates for complex parameter neighborhoods."""

__version__ = "0.1.0"

from .graphs import Graph, PinnedConfig, build_saw_tree, dist_to_set, is_feasible, parse_graph  # noqa: F401
from .params import Params, format_complex, parse_complex  # noqa: F401
from .exact import PolyCoeffs, lambda_coeffs, marginal_ratio_exact, partition_exact  # noqa: F401
from .roots import min_root_distance, poly_roots  # noqa: F401
from .certify import (  # noqa: F401
    ContractionCert,
    complex_contraction_probe,
    contraction_interval,
    estimate_delta,
    fixed_point,
    membership,
    real_contraction_margin,
    uniqueness_check,
)
from .weitz import WeitzResult, decay_fit, saw_ratio, ssm_probe, weitz_partition  # noqa: F401
from .barvinok import TaylorEstimate, choose_order, inverse_power_sums, low_order_coeffs, taylor_log_z  # noqa: F401
from .scan import ScanSpec, corpus, run_scan  # noqa: F401
