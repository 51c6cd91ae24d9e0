from .forms import (
    Construction,
    Marker,
    NegationLexicon,
    PredicateForm,
    RelationTriple,
)
from .engine import (
    ExtractorConfig,
    detect_negation,
    dsnf_config,
    extract_bounded_dependencies,
    extract_covert_object_copula,
    extract_de_structures,
    extract_dsnf,
    extract_nominal_compound,
    extract_relations,
    extract_relative_clause,
)
from .select import select_representative

__all__ = [
    "Construction",
    "ExtractorConfig",
    "Marker",
    "NegationLexicon",
    "PredicateForm",
    "RelationTriple",
    "detect_negation",
    "dsnf_config",
    "extract_bounded_dependencies",
    "extract_covert_object_copula",
    "extract_de_structures",
    "extract_dsnf",
    "extract_nominal_compound",
    "extract_relations",
    "extract_relative_clause",
    "select_representative",
]
