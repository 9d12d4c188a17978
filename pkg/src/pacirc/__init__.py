"""Simulator and exact analytics for preferential dynamic attachment circuits.

A circuit of index m grows by inserting one node per time step; the new
node picks m parents with replacement, each pick weighted by outdegree
plus one and seeing earlier picks of the same sample. The package grows
such circuits reproducibly, evaluates the closed-form moment and
degree-profile results about them in exact rational arithmetic, and
cross-verifies every formula against independent enumeration, dynamic
programming, and Monte Carlo oracles.
"""

from .degrees import (
    AsymptoticReport,
    DegreeMomentReport,
    RegimeSpec,
    degree_asymptotics,
    degree_moments,
    degree_pmf,
    polya_eggenberger_pmf,
    port_root_pmf,
    rising,
)
from .dist import DistTable
from .mc import CltCheck, SimConfig, SimReport, clt_check, run_sim
from .model import (
    CircuitState,
    ColorCounts,
    SampleTrace,
    color_counts,
    degree_of,
    insert_node,
    new_circuit,
)
from .moments import (
    CovMatrix,
    FormulaDomainError,
    MartingaleMatrices,
    MomentVector,
    SecondMoments,
    StepMoments,
    cond_step_moments,
    cov_limit,
    martingale_matrices,
    mean_y,
    sample_step_coefficients,
    second_moments,
)
from .oracle import (
    BudgetExceeded,
    MomentSet,
    dp_color_counts,
    dp_degree,
    enumerate_histories,
    enumerate_sample_step,
    history_count,
    recurrence_moments,
)
from .rng import RandomSource

__version__ = "0.1.0"

__all__ = [
    "AsymptoticReport",
    "BudgetExceeded",
    "CircuitState",
    "CltCheck",
    "ColorCounts",
    "CovMatrix",
    "DegreeMomentReport",
    "DistTable",
    "FormulaDomainError",
    "MartingaleMatrices",
    "MomentSet",
    "MomentVector",
    "RandomSource",
    "RegimeSpec",
    "SampleTrace",
    "SecondMoments",
    "SimConfig",
    "SimReport",
    "StepMoments",
    "clt_check",
    "color_counts",
    "cond_step_moments",
    "cov_limit",
    "degree_asymptotics",
    "degree_moments",
    "degree_of",
    "degree_pmf",
    "dp_color_counts",
    "dp_degree",
    "enumerate_histories",
    "enumerate_sample_step",
    "history_count",
    "insert_node",
    "martingale_matrices",
    "mean_y",
    "new_circuit",
    "polya_eggenberger_pmf",
    "port_root_pmf",
    "recurrence_moments",
    "rising",
    "run_sim",
    "sample_step_coefficients",
    "second_moments",
]
