"""Quality-diversity benchmarking: MAP-Elites on Rastrigin with reliability scoring."""

__version__ = "0.1.0"

from .archive import Elite, Grid, InsertOutcome
from .mapelites import Checkpoint, RunConfig, RunTrace, run, select_parent
from .objective import (
    RastriginObjective,
    domain_bounds,
    evaluate_rastrigin,
    evaluate_rastrigin_batch,
    extract_features,
)
from .reliability import (
    ReferenceGrid,
    ReliabilityReport,
    build_reference_analytic,
    build_reference_from_run,
    global_reliability,
    local_reliability,
    reference_from_grid,
    reliability_series,
)
from .variation import (
    OperatorConfig,
    mutate,
    mutate_batch,
    mutate_gaussian,
    mutate_polynomial_bounded,
    random_genome,
)

__all__ = [
    "Checkpoint",
    "Elite",
    "Grid",
    "InsertOutcome",
    "OperatorConfig",
    "RastriginObjective",
    "ReferenceGrid",
    "ReliabilityReport",
    "RunConfig",
    "RunTrace",
    "build_reference_analytic",
    "build_reference_from_run",
    "domain_bounds",
    "evaluate_rastrigin",
    "evaluate_rastrigin_batch",
    "extract_features",
    "global_reliability",
    "local_reliability",
    "mutate",
    "mutate_batch",
    "mutate_gaussian",
    "mutate_polynomial_bounded",
    "random_genome",
    "reference_from_grid",
    "reliability_series",
    "run",
    "select_parent",
]
