"""ontogeo: geographic domain ontologies from structured documents, spatial
named-entity annotation of plain text, and thesaurus-driven enrichment."""

__version__ = "0.1.0"

from .ontology import (  # noqa: F401
    ISA,
    Ontology,
    Origin,
    PART_OF,
    RelationKind,
    TOP,
    deserialize,
    export_triples,
    named,
    serialize,
)
from .thesaurus import (  # noqa: F401
    EnrichmentOutcome,
    Thesaurus,
    VedetteEntry,
    current_term_list,
    enrich,
    geographic_sense_filter,
    leaf_clusters,
    normalize_term,
    parse_thesaurus,
    resolve_vedette,
)
