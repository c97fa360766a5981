from .diversity import (
    ReductionMap,
    SchoolImage,
    distinct_type_vectors,
    lift_matching,
    reduce_scdc_to_hrq,
    restore_matching,
)
from .minquota import augment_with_null, eliminate_min_quotas
from .setcover import SetCoverInstance, gadget_from_set_cover, set_cover_from_matching
from .threesat import (
    CnfFormula,
    GadgetNames,
    gadget_from_3sat,
    outcome_from_assignment,
    variable_outcome,
)

__all__ = [
    "CnfFormula",
    "GadgetNames",
    "ReductionMap",
    "SchoolImage",
    "SetCoverInstance",
    "augment_with_null",
    "distinct_type_vectors",
    "eliminate_min_quotas",
    "gadget_from_3sat",
    "gadget_from_set_cover",
    "lift_matching",
    "outcome_from_assignment",
    "reduce_scdc_to_hrq",
    "restore_matching",
    "set_cover_from_matching",
    "variable_outcome",
]
