"""Symbolic dynamics on finitely-branching labeled trees.

Shift spaces over the infinite d-ary tree: definitions (vertex, one-step,
forbidden-set, level-constant, sofic-image), decision procedures (emptiness,
admissibility, block counting), entropy estimation, mixing-property
checkers, and periodic-point search, with a JSON-file CLI.
"""

from .decision import (
    BlockCount,
    EssentialCore,
    core_symbols,
    count_blocks,
    enumerate_blocks,
    essential_core,
    extend_pattern,
    is_empty,
    locally_admissible,
    solve_labeling,
)
from .entropy import (
    EntropyEstimate,
    check_bg_entropy_bound,
    entropy_estimate,
    log_count_sequence,
)
from .errors import TreeShiftError
from .mixing import (
    PROPERTIES,
    Verdict,
    check_property,
    connect_through,
    enumerate_cpcs,
    hierarchy_report,
    verify_even_treeshift_usi,
)
from .patterns import (
    CompletePrefixCode,
    Pattern,
    block_from_levels,
    cpc_from_document,
    dumps_canonical,
    leaves_of,
    pattern_from_document,
    subtree_at,
    truncated_distance,
    uniform_code,
    validate_cpc,
)
from .periodic import (
    CertificateReport,
    NoneUpToBound,
    PeriodicSpec,
    periodic_from_cpc,
    search_periodic,
    sibling_distinct_certificate,
)
from .shifts import (
    ForbiddenSetShift,
    LevelConstantShift,
    OneStepTSFT,
    SlidingBlockCode,
    SoficImageShift,
    VertexTreeShift,
    apply_block_map,
    as_one_step,
    image_blocks,
    parse_shift,
    recode_to_vertex,
)

__version__ = "0.1.0"

__all__ = [
    "BlockCount",
    "CertificateReport",
    "CompletePrefixCode",
    "EntropyEstimate",
    "EssentialCore",
    "ForbiddenSetShift",
    "LevelConstantShift",
    "NoneUpToBound",
    "OneStepTSFT",
    "PROPERTIES",
    "Pattern",
    "PeriodicSpec",
    "SlidingBlockCode",
    "SoficImageShift",
    "TreeShiftError",
    "Verdict",
    "VertexTreeShift",
    "apply_block_map",
    "as_one_step",
    "block_from_levels",
    "check_bg_entropy_bound",
    "check_property",
    "connect_through",
    "core_symbols",
    "count_blocks",
    "cpc_from_document",
    "dumps_canonical",
    "entropy_estimate",
    "enumerate_blocks",
    "enumerate_cpcs",
    "essential_core",
    "extend_pattern",
    "hierarchy_report",
    "image_blocks",
    "is_empty",
    "leaves_of",
    "locally_admissible",
    "log_count_sequence",
    "parse_shift",
    "pattern_from_document",
    "periodic_from_cpc",
    "recode_to_vertex",
    "search_periodic",
    "sibling_distinct_certificate",
    "solve_labeling",
    "subtree_at",
    "truncated_distance",
    "uniform_code",
    "validate_cpc",
    "verify_even_treeshift_usi",
]
