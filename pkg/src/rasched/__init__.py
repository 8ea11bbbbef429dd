"""Construction, solving and verification of restriction-based scheduling instances.

The package builds scheduling instances whose exact-load schedules encode
satisfiability or matching certificates, decides the schedule questions
exactly, and checks the structural properties tying the two sides together.
"""

from .core import (
    IneligibleAssignmentError,
    Job,
    LoadProfile,
    LRSInstance,
    RAIInstance,
    RAInstance,
    RARInstance,
    Rational,
    SchedError,
    Schedule,
    UnknownIdError,
    UnschedulableJobError,
    eligibility,
    eligible_set,
    evaluate,
    is_interval,
    lrs_processing_time,
    normalize,
    rai_from_ra,
    to_restricted_assignment,
    total_size_check,
)
from .claims import ClaimCheck, ClaimReport, check_claims
from .meta import GadgetMeta
from .solver import (
    DEFAULT_BUDGET,
    SolveBudget,
    SolveResult,
    Verdict,
    decide_exact_load,
    decide_makespan,
    decide_min_load,
    enumerate_exact,
)

__all__ = [
    "ClaimCheck",
    "ClaimReport",
    "DEFAULT_BUDGET",
    "GadgetMeta",
    "IneligibleAssignmentError",
    "Job",
    "LoadProfile",
    "LRSInstance",
    "RAIInstance",
    "RAInstance",
    "RARInstance",
    "Rational",
    "SchedError",
    "Schedule",
    "SolveBudget",
    "SolveResult",
    "UnknownIdError",
    "UnschedulableJobError",
    "Verdict",
    "check_claims",
    "decide_exact_load",
    "decide_makespan",
    "decide_min_load",
    "eligibility",
    "eligible_set",
    "enumerate_exact",
    "evaluate",
    "is_interval",
    "lrs_processing_time",
    "normalize",
    "rai_from_ra",
    "to_restricted_assignment",
    "total_size_check",
]
