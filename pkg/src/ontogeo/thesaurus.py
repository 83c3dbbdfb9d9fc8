"""Controlled-vocabulary model and leaf-level ontology enrichment.

A vocabulary record carries one preferred term (the vedette), the
non-preferred terms it stands for ("employed for") and broader terms.
Enrichment matches the synonym ring of a qualifier term against clusters of
leaf concepts and attaches the qualifier as a new leaf under the cluster
representative with the best overlap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .ontology import ISA, Ontology, Origin, PART_OF, TOP


def normalize_term(text: str) -> str:
    """Case-fold, trim and strip a final French plural "s"/"x".

    The suffix is removed only when the remaining stem keeps at least three
    characters; diacritics are preserved.
    """
    term = text.strip().casefold()
    if term and term[-1] in "sx" and len(term) - 1 >= 3:
        term = term[:-1]
    return term


def normalize_words(text: str) -> tuple[str, ...]:
    """Per-word variant of normalize_term, for multiword comparisons."""
    return tuple(normalize_term(word) for word in text.split())


class ThesaurusError(Exception):
    pass


class MalformedRecordError(ThesaurusError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass
class VedetteEntry:
    label: str
    employed_for: set[str] = field(default_factory=set)
    generic_terms: set[str] = field(default_factory=set)
    geographic_subdivision: bool = False


@dataclass
class Thesaurus:
    """Vocabulary entries plus a normalized reverse index.

    The same term may reach several entries: homographs (glacier the ice
    mass, glacier the ice-cream maker) keep separate records.
    """

    entries: list[VedetteEntry] = field(default_factory=list)
    reverse_index: dict[str, list[int]] = field(default_factory=dict)

    def _index(self, term: str, position: int) -> None:
        slot = self.reverse_index.setdefault(normalize_term(term), [])
        if position not in slot:
            slot.append(position)

    def add(self, entry: VedetteEntry) -> None:
        position = len(self.entries)
        self.entries.append(entry)
        self._index(entry.label, position)
        for term in entry.employed_for:
            self._index(term, position)


def parse_thesaurus(data: bytes | str) -> Thesaurus:
    """Load blank-line separated records:

        V  <TAB> label <TAB> geo_flag(0|1)
        EP <TAB> term      (repeatable)
        TG <TAB> term      (repeatable)
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    thesaurus = Thesaurus()
    current: VedetteEntry | None = None
    for number, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            if current is not None:
                thesaurus.add(current)
                current = None
            continue
        if line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        record = fields[0].strip()
        if record == "V":
            if len(fields) != 3:
                raise MalformedRecordError("V record needs label and geo flag", number)
            if current is not None:
                thesaurus.add(current)
            label = fields[1].strip()
            flag = fields[2].strip()
            if not label:
                raise MalformedRecordError("empty vedette label", number)
            if flag not in ("0", "1"):
                raise MalformedRecordError(f"geo flag must be 0 or 1, got {flag!r}", number)
            current = VedetteEntry(label=label, geographic_subdivision=flag == "1")
        elif record in ("EP", "TG"):
            if current is None:
                raise MalformedRecordError(f"{record} record before any V record", number)
            if len(fields) != 2 or not fields[1].strip():
                raise MalformedRecordError(f"{record} record needs one term", number)
            term = fields[1].strip()
            if record == "EP":
                if term != current.label:
                    current.employed_for.add(term)
            else:
                current.generic_terms.add(term)
        else:
            raise MalformedRecordError(f"unrecognized record {record!r}", number)
    if current is not None:
        thesaurus.add(current)
    return thesaurus


def resolve_vedette(thesaurus: Thesaurus, qualifier: str) -> list[VedetteEntry]:
    """Entries whose label or employed-for terms carry the qualifier."""
    positions = thesaurus.reverse_index.get(normalize_term(qualifier), [])
    return [thesaurus.entries[i] for i in positions]


def current_term_list(entry: VedetteEntry) -> set[str]:
    """The synonym ring of an entry: its label plus employed-for terms, normalized."""
    terms = {normalize_term(entry.label)}
    terms.update(normalize_term(t) for t in entry.employed_for)
    return terms


# ------------------------------------------------------------- leaf clusters


@dataclass
class LeafCluster:
    """A parent concept plus its leaf children, the matching unit of enrichment."""

    representative: str
    leaves: tuple[str, ...]
    member_terms: frozenset[str]


def leaf_clusters(ontology: Ontology, include_associated_terms: bool = True) -> list[LeafCluster]:
    """One cluster per concept owning at least one leaf child (is-a or part-of).

    Member terms gather the normalized display names of the representative and
    its leaf children, plus their associated terms.  Output is sorted by
    representative id, so identical ontologies give byte-identical clusters.
    """
    children: dict[str, list[str]] = {}
    for relation in ontology.relations:
        if relation.kind in (ISA, PART_OF):
            children.setdefault(relation.target, []).append(relation.source)
    clusters: list[LeafCluster] = []
    for representative in sorted(ontology.concepts):
        leaves = sorted(c for c in children.get(representative, ()) if c not in children)
        if not leaves:
            continue
        members = [representative] + leaves
        terms: set[str] = set()
        for cid in members:
            concept = ontology.concepts[cid]
            terms.add(normalize_term(concept.display_name))
            if include_associated_terms:
                terms.update(normalize_term(t) for t in concept.associated_terms)
        clusters.append(
            LeafCluster(
                representative=representative,
                leaves=tuple(leaves),
                member_terms=frozenset(terms),
            )
        )
    return clusters


# ----------------------------------------------------------------- enrichment


class EnrichmentOutcome(Enum):
    ATTACHED = "attached"
    NO_VEDETTE = "no_vedette"
    NO_EQUIVALENCE = "no_equivalence"
    ALREADY_CONCEPT = "already_concept"


@dataclass
class EnrichmentDecision:
    qualifier: str
    outcome: EnrichmentOutcome
    resolved_vedette: str | None = None
    best_cluster: str | None = None
    equivalence_count: int = 0


def _known_terms(ontology: Ontology) -> set[str]:
    known: set[str] = set()
    for cid, concept in ontology.concepts.items():
        if cid == TOP:
            continue
        known.add(normalize_term(concept.display_name))
        known.update(normalize_term(t) for t in concept.associated_terms)
    return known


def enrich(
    ontology: Ontology,
    qualifiers: list[tuple[str, int]],
    thesaurus: Thesaurus,
    min_equivalences: int = 1,
    static_clusters: bool = False,
    include_associated_terms: bool = True,
) -> tuple[Ontology, list[EnrichmentDecision]]:
    """Attach qualifier terms as new leaf concepts via synonym-ring overlap.

    For each qualifier (most frequent first, ties alphabetical) every
    resolvable vocabulary entry is scored against every leaf cluster by the
    size of the intersection between the entry's term ring and the cluster's
    member terms.  The best pair with at least `min_equivalences` overlapping
    terms wins; the qualifier becomes an is-a leaf under the cluster
    representative, carrying the term ring as associated terms.  The input
    ontology is never mutated.
    """
    enriched = ontology.copy()
    decisions: list[EnrichmentDecision] = []
    ordered = sorted(qualifiers, key=lambda pair: (-pair[1], pair[0]))
    clusters = leaf_clusters(enriched, include_associated_terms)
    for qualifier, _count in ordered:
        name = normalize_term(qualifier)
        if not name:
            continue
        if name in _known_terms(enriched):
            decisions.append(EnrichmentDecision(qualifier, EnrichmentOutcome.ALREADY_CONCEPT))
            continue
        entries = resolve_vedette(thesaurus, qualifier)
        if not entries:
            decisions.append(EnrichmentDecision(qualifier, EnrichmentOutcome.NO_VEDETTE))
            continue
        best: tuple[int, int, str, int] | None = None  # (count, depth, rep, entry index)
        for entry_index, entry in enumerate(entries):
            ring = current_term_list(entry)
            for cluster in clusters:
                count = len(ring & cluster.member_terms)
                if count < min_equivalences:
                    continue
                candidate = (count, enriched.depth(cluster.representative), cluster.representative, entry_index)
                if best is None or _better(candidate, best):
                    best = candidate
        if best is None:
            decisions.append(
                EnrichmentDecision(
                    qualifier,
                    EnrichmentOutcome.NO_EQUIVALENCE,
                    resolved_vedette=entries[0].label,
                )
            )
            continue
        count, _depth, representative, entry_index = best
        entry = entries[entry_index]
        cid = enriched.add_concept(representative, name, Origin.ENRICHMENT)
        for term in sorted(current_term_list(entry)):
            enriched.add_associated_term(cid, term)
        decisions.append(
            EnrichmentDecision(
                qualifier,
                EnrichmentOutcome.ATTACHED,
                resolved_vedette=entry.label,
                best_cluster=representative,
                equivalence_count=count,
            )
        )
        if not static_clusters:
            clusters = leaf_clusters(enriched, include_associated_terms)
    return enriched, decisions


def _better(candidate: tuple[int, int, str, int], best: tuple[int, int, str, int]) -> bool:
    # Higher count, then deeper representative, then smaller representative id,
    # then first entry in thesaurus order.
    c_count, c_depth, c_rep, c_entry = candidate
    b_count, b_depth, b_rep, b_entry = best
    return (-c_count, -c_depth, c_rep, c_entry) < (-b_count, -b_depth, b_rep, b_entry)


def decisions_to_tsv(decisions: list[EnrichmentDecision]) -> str:
    rows = []
    for d in decisions:
        rows.append(
            f"{d.qualifier}\t{d.outcome.value}\t{d.resolved_vedette or ''}"
            f"\t{d.best_cluster or ''}\t{d.equivalence_count}"
        )
    return "".join(row + "\n" for row in rows)


# ------------------------------------------------------- geographic heuristic


def geographic_sense_filter(
    thesaurus: Thesaurus, marker_set: set[str], max_depth: int = 3
) -> set[str]:
    """Labels of entries carrying a geographic sense.

    An entry qualifies when its geographic-subdivision flag is set or when a
    broader term reaches the marker set within `max_depth` generic links.
    """
    markers = {normalize_term(term) for term in marker_set}
    by_label: dict[str, list[VedetteEntry]] = {}
    for entry in thesaurus.entries:
        by_label.setdefault(normalize_term(entry.label), []).append(entry)

    def reaches_marker(entry: VedetteEntry, depth: int, seen: set[str]) -> bool:
        if depth > max_depth:
            return False
        for generic in sorted(entry.generic_terms):
            key = normalize_term(generic)
            if key in markers:
                return True
            if key in seen:
                continue
            seen.add(key)
            for broader in by_label.get(key, ()):
                if reaches_marker(broader, depth + 1, seen):
                    return True
        return False

    flagged: set[str] = set()
    for entry in thesaurus.entries:
        if entry.geographic_subdivision or reaches_marker(entry, 1, set()):
            flagged.add(entry.label)
    return flagged
