"""Graded order-sorted feature terms.

Sort hierarchies carry subsumption degrees in [0, 1]; record-like terms over
those hierarchies normalize, unify, and compare with degrees computed by
min/max arithmetic.  A finite model layer interprets terms as graded sets and
cross-checks the algebra's laws on randomized instances.
"""

from __future__ import annotations

from .lattice import (
    BOT,
    TOP,
    CycleDetected,
    DegreeOutOfRange,
    DroppedEdge,
    DuplicateName,
    NotALattice,
    OntologyError,
    SignatureMismatch,
    SortGraph,
    SortLattice,
    UnknownFeature,
    UnknownSort,
    build_similarity,
    build_sort_graph,
    enrich_from_similarity,
    format_ontology,
    load_ontology,
    validate_lattice,
)
from .terms import (
    Clause,
    EqualityConstraint,
    FeatureConstraint,
    NotNormalTerm,
    NotRooted,
    NotSolved,
    SortConstraint,
    Term,
    TermSyntaxError,
    check_normal,
    clause_to_term,
    format_clause,
    format_term,
    is_normal,
    parse_clause,
    parse_term,
    term_to_clause,
)
from .normalize import (
    Inconsistent,
    Normalized,
    canonical_normal_form,
    normalize,
    normalize_small_step,
    solved_part,
    step_bound,
)
from .graphs import (
    OsfGraph,
    apply_feature,
    canonical_form,
    clause_to_graphs,
    graph_equivalent,
    graph_isomorphic,
    graph_to_dot,
    graph_to_term,
    sort_membership,
    term_to_graph,
)
from .subsumption import (
    SubsumptionWitness,
    crisp_subsumes,
    fuzzy_subsumption_degree,
    subsumption_witness,
    syntactic_subsumes,
)
from .unify import UnifyResult, mutual_subsumption_via_unify, unify
from .semantics import (
    CanonicalAlgebra,
    Interpretation,
    Morphism,
    TheoremReport,
    approximation_degree,
    best_denotation,
    check_theorems,
    denote,
    find_morphism,
    generated_subalgebra,
    load_interpretation,
    morphism_max_beta,
    satisfaction_degree,
    satisfies,
    validate_interpretation,
)

__version__ = "0.1.0"

__all__ = [
    "BOT",
    "TOP",
    "CanonicalAlgebra",
    "Clause",
    "CycleDetected",
    "DegreeOutOfRange",
    "DroppedEdge",
    "DuplicateName",
    "EqualityConstraint",
    "FeatureConstraint",
    "Inconsistent",
    "Interpretation",
    "Morphism",
    "NotALattice",
    "NotNormalTerm",
    "NotRooted",
    "NotSolved",
    "Normalized",
    "OntologyError",
    "OsfGraph",
    "SignatureMismatch",
    "SortConstraint",
    "SortGraph",
    "SortLattice",
    "SubsumptionWitness",
    "Term",
    "TermSyntaxError",
    "TheoremReport",
    "UnifyResult",
    "UnknownFeature",
    "UnknownSort",
    "apply_feature",
    "approximation_degree",
    "best_denotation",
    "build_similarity",
    "build_sort_graph",
    "canonical_form",
    "canonical_normal_form",
    "check_normal",
    "check_theorems",
    "clause_to_graphs",
    "clause_to_term",
    "crisp_subsumes",
    "denote",
    "enrich_from_similarity",
    "find_morphism",
    "format_clause",
    "format_ontology",
    "format_term",
    "fuzzy_subsumption_degree",
    "generated_subalgebra",
    "graph_equivalent",
    "graph_isomorphic",
    "graph_to_dot",
    "graph_to_term",
    "is_normal",
    "load_interpretation",
    "load_ontology",
    "morphism_max_beta",
    "mutual_subsumption_via_unify",
    "normalize",
    "normalize_small_step",
    "parse_clause",
    "parse_term",
    "satisfaction_degree",
    "satisfies",
    "solved_part",
    "sort_membership",
    "step_bound",
    "subsumption_witness",
    "syntactic_subsumes",
    "term_to_clause",
    "term_to_graph",
    "unify",
    "validate_interpretation",
    "validate_lattice",
]
