"""The polytope TCF_n of tail correlation matrices on n points."""

from .constructions import (
    cyclic_facet_partitions,
    cyclic_facet_points,
    cyclic_inequality,
    denominator_model,
    denominator_vertex,
    hyp_separation_point,
    star_point,
)
from .core import (
    AffineInequality,
    EmptySubset,
    InvalidParameters,
    NotAMember,
    TcfPoint,
    clique_partition_point,
    lift_inequality,
    lift_point,
    project_psi,
    relabel_inequality,
    restrict,
)
from .hypermetric import (
    AllSatisfied,
    Hypermetric,
    NotHypermetric,
    Violation,
    hypermetric_b_key,
    hypermetric_inequality,
    hypermetric_valid_check,
    is_pure,
    recognize_hypermetric,
)
from .membership import (
    MEMBER,
    NON_MEMBER,
    MembershipCertificate,
    Optimum,
    Realization,
    exit_facet,
    interior_point,
    is_member,
    is_valid,
    maximize,
    membership,
    membership_many,
    realize,
    realize_binary,
)
from .psd import PsdNo, PsdYes, is_psd, quadratic_form
from .spindle import Spindle, SpindleFacet, spindle_h_representation

__all__ = [name for name in dir() if not name.startswith("_")]
