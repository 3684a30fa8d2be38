"""Correspondence analysis, taxicab correspondence analysis and log-ratio
analysis of power-transformed contingency tables."""

from .analyses import (
    balance_to_uniform,
    ca,
    convergence_sweep,
    covariance_analysis,
    lra,
    lra_incidence,
    mfca,
    tca,
    two_by_two_rho2,
    zero_column_ca_inertia,
    zero_column_tca_dispersion,
)
from .decomp import ca_reconstruct, lra_reconstruct, reconstruct, taxicab_svd, weighted_svd
from .interaction import (
    additive_center,
    covariance_residuals,
    first_order_approx,
    log_interaction,
    multiplicative_center,
    pearson_contrast,
)
from .io import read_table, write_decomposition
from .svgmap import emit_map
from .tables import (
    Axis,
    ContingencyTable,
    CorrespondenceMatrix,
    Decomposition,
    Triplet,
    WeightScheme,
    make_weights,
    normalize,
)
from .transform import (
    indicator,
    log_transform,
    merge_proportional,
    one_zero_column_reduction,
    power_transform,
    zero_stats,
)

__version__ = "0.1.0"
