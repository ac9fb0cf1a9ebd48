"""Tests for equality of distributions of compositional data.

The main entry points are :func:`permutation_test` (energy test on
alpha-transformed compositions) and :func:`rpbt_test` (random projections
with Kolmogorov-Smirnov tests).
"""

from .distributions import (
    DirichletParams,
    RngStream,
    SimplicialNormalParams,
    alr_inverse,
    generate_covariance,
    kl_dirichlet,
    kl_mvn,
    sample_dirichlet,
    sample_simplicial_normal,
)
from .energy import (
    TestResult,
    alpha_energy_statistic,
    e_distance,
    energy_statistic_euclidean,
    k_sample_statistic,
    permutation_test,
)
from .experiments import ExperimentRow, ScenarioConfig, run_power_scenario, run_type1_experiment
from .rpbt import combine_pvalues_bh, ks_two_sample, random_direction, rpbt_test, sqrt_map
from .simplex import CompositionalDataset, CompositionError, close, has_zeros, read_csv, validate_dataset
from .special import digamma, log_gamma
from .transforms import (
    alpha_metric,
    alpha_transform,
    clr,
    helmert_submatrix,
    ilr,
    pairwise_distance_matrix,
    power_transform,
    standardize_columns,
    w_alpha,
)

__version__ = "0.1.0"
