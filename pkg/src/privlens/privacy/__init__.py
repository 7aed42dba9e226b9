"""Privacy-risk quantification over post sequences."""

from .cohort import FULLY_IDENTIFIED, CohortReport, cohort_report
from .hmm import (
    DEFAULT_MAX_PATH_LEN,
    DEFAULT_MAX_PATHS,
    DEFAULT_TAU_SIM,
    START,
    UNSEEN,
    EventNode,
    HmmSet,
    LinkabilityResult,
    PreparedPost,
    PrivacyHmm,
    RiskTrace,
    StepRecord,
    build_hmm,
    linkability_prior,
    match_node,
    merge_hmms,
    sequence_privacy,
    step_factor,
)
from .oracle import (
    oracle_linkability,
    oracle_risk,
    oracle_sequence_privacy,
)
from .pii import Gazetteers, PiiAnnotation, PiiKind, detect_pii, has_pii
from .split import split_train_test

__all__ = [
    "DEFAULT_MAX_PATHS",
    "DEFAULT_MAX_PATH_LEN",
    "DEFAULT_TAU_SIM",
    "FULLY_IDENTIFIED",
    "CohortReport",
    "EventNode",
    "Gazetteers",
    "HmmSet",
    "LinkabilityResult",
    "PiiAnnotation",
    "PiiKind",
    "PreparedPost",
    "PrivacyHmm",
    "RiskTrace",
    "START",
    "StepRecord",
    "UNSEEN",
    "build_hmm",
    "cohort_report",
    "detect_pii",
    "has_pii",
    "linkability_prior",
    "match_node",
    "merge_hmms",
    "oracle_linkability",
    "oracle_risk",
    "oracle_sequence_privacy",
    "sequence_privacy",
    "split_train_test",
    "step_factor",
]
