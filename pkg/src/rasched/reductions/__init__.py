"""Instance constructors, schedule builders/extractors, and embeddings."""

from .base import ALPHA_BETA, AlphaBeta, ReductionOutput
from .embed import (
    ra_to_rar_m,
    rai_to_rar2,
    rar_to_lrs,
    witness_rar2_not_rai,
    witness_rar_m,
)
from .from_cnf import model_rar4, reduce_graph_balancing
from .from_dm import model_rar6, reduce_lst, reduce_rar2, reduce_rar3
from .from_star import (
    build_schedule_rai,
    build_schedule_simple,
    extract_assignment_rai,
    extract_assignment_simple,
    reduce_rai,
    reduce_simple,
    RAI_TARGET,
    SIMPLE_TARGET,
)
from .lowrank import bhaskara_counterexample, build_bhaskara, counterexample_matching

__all__ = [
    "ALPHA_BETA",
    "AlphaBeta",
    "ReductionOutput",
    "RAI_TARGET",
    "SIMPLE_TARGET",
    "bhaskara_counterexample",
    "build_bhaskara",
    "build_schedule_rai",
    "build_schedule_simple",
    "counterexample_matching",
    "extract_assignment_rai",
    "extract_assignment_simple",
    "model_rar4",
    "model_rar6",
    "ra_to_rar_m",
    "rai_to_rar2",
    "rar_to_lrs",
    "reduce_graph_balancing",
    "reduce_lst",
    "reduce_rai",
    "reduce_rar2",
    "reduce_rar3",
    "reduce_simple",
    "witness_rar2_not_rai",
    "witness_rar_m",
]
