"""Coinductive infinitary rewriting over rational terms.

Regular proof-tree certificates for infinitary reduction (ired), bi-infinite
reduction (ibi) and infinitary equality (ieq), their canonical rewrite
sequences, compression to omega-length form and bounded proof search.
"""

from .compression import (
    OredCert,
    OredNode,
    compress,
    format_ored,
    linearize,
    ored_equal,
    ored_from_json,
    ored_match_split,
    ored_to_json,
    validate_ored,
)
from .errors import (
    ArityMismatch,
    FormatError,
    InputError,
    InvalidPosition,
    InvalidWitness,
    IrewError,
    NoMatch,
    NotLeftLinear,
    NotOmega,
    NotProductive,
    NotValidated,
    ReplayError,
    ResourceExceeded,
    SubstMismatch,
    TermSyntaxError,
    UnboundBinder,
    UnknownSymbol,
    WrongKind,
)
from .proofs import (
    CertBuilder,
    ProofCert,
    ProofNode,
    Verdict,
    cert_equal,
    cert_fingerprint,
    cert_from_json,
    cert_to_json,
    check_valid,
    embed_ieq,
    forget_marks,
    is_canonical,
    mark_nesting_depth,
)
from .search import Exhausted, SearchBudget, search_proof
from .semantics import canonical_prefix, prefix_agreement, seq_is_finite, steps_at_depth
from .sequences import (
    PermutationWitness,
    ProjectionResult,
    RuleApplication,
    canonical_tree_of,
    corresponds_finite,
    interleavings,
    is_interleaving,
    permutation_equiv,
    permutation_equiv_bruteforce,
    permute_prefix,
    project,
    rulapp,
    seq_from_json,
    seq_to_json,
)
from .terms import (
    Signature,
    Term,
    bisimilar,
    first_difference,
    format_term,
    metric_distance,
    parallel,
    parse_term,
    positions,
    replace_at,
    subterm_at,
    substitute,
    truncation_equal,
)
from .trs import (
    FiniteReduction,
    Rule,
    Step,
    Trs,
    apply_step,
    format_trs,
    is_left_linear,
    make_trs,
    parse_trs,
    redexes_to_depth,
    replay,
    replay_terms,
)

__version__ = "0.1.0"

__all__ = [
    "ArityMismatch",
    "CertBuilder",
    "Exhausted",
    "FiniteReduction",
    "FormatError",
    "InputError",
    "InvalidPosition",
    "InvalidWitness",
    "IrewError",
    "NoMatch",
    "NotLeftLinear",
    "NotOmega",
    "NotProductive",
    "NotValidated",
    "OredCert",
    "OredNode",
    "PermutationWitness",
    "ProjectionResult",
    "ProofCert",
    "ProofNode",
    "ReplayError",
    "ResourceExceeded",
    "Rule",
    "RuleApplication",
    "SearchBudget",
    "Signature",
    "Step",
    "SubstMismatch",
    "Term",
    "TermSyntaxError",
    "Trs",
    "UnboundBinder",
    "UnknownSymbol",
    "Verdict",
    "WrongKind",
    "apply_step",
    "bisimilar",
    "canonical_tree_of",
    "cert_equal",
    "cert_fingerprint",
    "cert_from_json",
    "cert_to_json",
    "check_valid",
    "compress",
    "corresponds_finite",
    "embed_ieq",
    "first_difference",
    "forget_marks",
    "format_ored",
    "format_term",
    "format_trs",
    "interleavings",
    "is_canonical",
    "is_interleaving",
    "is_left_linear",
    "linearize",
    "make_trs",
    "mark_nesting_depth",
    "metric_distance",
    "ored_equal",
    "ored_from_json",
    "ored_match_split",
    "ored_to_json",
    "parallel",
    "parse_term",
    "parse_trs",
    "permutation_equiv",
    "permutation_equiv_bruteforce",
    "permute_prefix",
    "positions",
    "project",
    "redexes_to_depth",
    "replace_at",
    "replay",
    "replay_terms",
    "rulapp",
    "search_proof",
    "seq_from_json",
    "seq_to_json",
    "substitute",
    "subterm_at",
    "truncation_equal",
    "validate_ored",
]
