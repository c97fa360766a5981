"""Stable matching under diversity constraints and regional quotas."""
from .feasibility import FeasibilityVerdict, check_feasible, check_feasible_hrq, check_feasible_scdc
from .model import (
    Doctor,
    Hospital,
    HrqInstance,
    InfeasibleOutcomeError,
    InvalidInstanceError,
    MasterList,
    Matching,
    RegionSpec,
    School,
    ScdcInstance,
    Student,
    UnknownContractError,
    ValidationReport,
    is_hierarchy,
    is_partition,
    validate_hrq,
    validate_scdc,
)
from .reductions import (
    CnfFormula,
    ReductionMap,
    SetCoverInstance,
    augment_with_null,
    eliminate_min_quotas,
    gadget_from_3sat,
    gadget_from_set_cover,
    lift_matching,
    outcome_from_assignment,
    reduce_scdc_to_hrq,
    restore_matching,
    set_cover_from_matching,
)
from .solvers import (
    SearchBudget,
    SearchResult,
    SearchStatus,
    enumerate_feasible,
    find_stable,
    order_regions_by_master_list,
    sd_school_choice,
    serial_dictatorship,
)
from .stability import (
    BlockingKind,
    BlockingWitness,
    check_fair_by_master_list,
    find_blocking_pairs,
    find_blocking_pairs_hrq,
    find_blocking_pairs_scdc,
    find_justified_envy,
    find_waste,
    is_individually_rational,
    is_stable,
    is_stable_hrq,
    is_stable_scdc,
)

__version__ = "0.1.0"
