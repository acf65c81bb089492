"""Boolean threshold functions, Post's clones and the B_l relational constraints."""

from .asummability import (
    AsummabilityWitness,
    equal_sums_witness,
    is_k_asummable,
    preserves_B_fast,
)
from .boolfn import (
    AND2,
    MAJ3,
    OR2,
    XNOR2,
    XOR2,
    BoolFn,
    MinorMap,
    canonical_form,
    dual,
    format_fn,
    identification_minor,
    minor,
    parse_fn,
)
from .clones import CloneId, catalogue, characterizing_constraints, is_member, membership_crosscheck
from .constraints import (
    Relation,
    RelationalConstraint,
    ViolationMatrix,
    make_A,
    make_B,
    minimal_forbidden_minors,
    pol_enumerate,
    preserves,
    violation_witness,
)
from .constructions import ConstructionTag, construct, transport_witness_down_gs, transport_witness_up
from .exceptions import (
    ConsistencyError,
    DimensionError,
    DomainError,
    EncodingError,
    ParseError,
    ResourceError,
    ThrCloneError,
    ValidationError,
)
from .reports import Budgets, VerificationReport, emit_report, run_suite
from .threshold import (
    ClassificationVerdict,
    ThresholdCertificate,
    ThresholdClassifier,
    classify_intersection,
    intersection_membership,
    is_minimally_non_threshold,
    is_threshold,
    verify_certificate,
)
from .tz import (
    TZInstance,
    a_matrix,
    build_tz,
    periodic_witness,
    phi,
    tz_check_B,
    tz_preserves_B,
    verify_row_col_lemma,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
