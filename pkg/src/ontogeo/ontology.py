"""Concept graph with path-qualified labels, typed relations and documentation
properties, plus a deterministic line-based file format.

Concept identifiers concatenate the display names of all ancestors, joined by
"/", so that the same name under two different parents yields two distinct
concepts and every concept stays traceable to the document that produced it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

log = logging.getLogger(__name__)

TOP = "Top"
SEPARATOR = "/"


class OntologyError(Exception):
    pass


class UnknownParentError(OntologyError):
    pass


class UnknownConceptError(OntologyError):
    pass


class EmptyNameError(OntologyError):
    pass


class InvalidNameError(OntologyError):
    pass


class IsACycleError(OntologyError):
    pass


class MalformedInputError(OntologyError):
    """Raised on a bad ontology file; carries the 1-based offending line."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class Origin(Enum):
    STRUCTURE = "structure"
    LANGUAGE = "language"
    ENRICHMENT = "enrichment"


@dataclass(frozen=True)
class RelationKind:
    """Relation label: "isa", "partof" or a named relation with a free label."""

    name: str
    label: str | None = None

    def as_text(self) -> str:
        if self.name == "named":
            return f"named:{self.label}"
        return self.name

    @classmethod
    def from_text(cls, text: str) -> "RelationKind":
        if text == "isa":
            return ISA
        if text == "partof":
            return PART_OF
        if text.startswith("named:") and len(text) > len("named:"):
            return cls("named", text[len("named:"):])
        raise ValueError(f"unknown relation kind {text!r}")


ISA = RelationKind("isa")
PART_OF = RelationKind("partof")


def named(label: str) -> RelationKind:
    return RelationKind("named", label)


@dataclass
class Concept:
    id: str
    display_name: str
    origin: Origin
    definition: str | None = None
    reference: str | None = None
    associated_terms: set[str] = field(default_factory=set)


@dataclass(frozen=True)
class Relation:
    source: str
    kind: RelationKind
    target: str
    origin: Origin


@dataclass(frozen=True)
class PropertyAttachment:
    concept: str
    label: str


_FORBIDDEN = ("\t", "\n", "\r")


def _check_field(value: str, what: str) -> str:
    if any(ch in value for ch in _FORBIDDEN):
        raise ValueError(f"{what} contains tab or newline: {value!r}")
    return value


class Ontology:
    """Single-writer concept graph rooted at Top.

    Mutation is expected from one logical thread; read-only views may be
    shared freely.
    """

    def __init__(self):
        self.concepts: dict[str, Concept] = {
            TOP: Concept(id=TOP, display_name=TOP, origin=Origin.STRUCTURE)
        }
        # keyed by (source, kind, target): duplicate insertions are no-ops
        self._relations: dict[tuple[str, RelationKind, str], Relation] = {}
        self._properties: dict[tuple[str, str], None] = {}
        # source -> targets adjacency per cycle-checked kind
        self._up: dict[RelationKind, dict[str, set[str]]] = {ISA: {}, PART_OF: {}}

    # ------------------------------------------------------------------ views

    @property
    def relations(self) -> list[Relation]:
        return list(self._relations.values())

    @property
    def properties(self) -> list[PropertyAttachment]:
        return [PropertyAttachment(c, l) for (c, l) in self._properties]

    def relation_count(self) -> int:
        return len(self._relations)

    def has_relation(self, source: str, kind: RelationKind, target: str) -> bool:
        return (source, kind, target) in self._relations

    def parents_of(self, cid: str, kinds: tuple[RelationKind, ...] = (ISA,)) -> list[str]:
        return sorted(t for (s, k, t) in self._relations if s == cid and k in kinds)

    def children_of(self, cid: str, kinds: tuple[RelationKind, ...] = (ISA, PART_OF)) -> list[str]:
        return sorted(s for (s, k, t) in self._relations if t == cid and k in kinds)

    def depth(self, cid: str) -> int:
        if cid == TOP:
            return 0
        return cid.count(SEPARATOR) + 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ontology):
            return NotImplemented
        return (
            self.concepts == other.concepts
            and self._relations == other._relations
            and set(self._properties) == set(other._properties)
        )

    def copy(self) -> "Ontology":
        clone = Ontology()
        clone.concepts = {
            cid: Concept(
                id=c.id,
                display_name=c.display_name,
                origin=c.origin,
                definition=c.definition,
                reference=c.reference,
                associated_terms=set(c.associated_terms),
            )
            for cid, c in self.concepts.items()
        }
        clone._relations = dict(self._relations)
        clone._properties = dict(self._properties)
        clone._up = {
            kind: {source: set(targets) for source, targets in adjacency.items()}
            for kind, adjacency in self._up.items()
        }
        return clone

    # -------------------------------------------------------------- mutation

    def add_concept(
        self,
        parent: str,
        display_name: str,
        origin: Origin,
        definition: str | None = None,
    ) -> str:
        """Create (or locate) a concept under `parent` and return its id.

        Idempotent: if the qualified path already exists it is returned
        unchanged. A child of Top carries its bare display name as id.
        """
        name = display_name.strip()
        if not name:
            raise EmptyNameError("display name is empty")
        if SEPARATOR in name:
            raise InvalidNameError(f"display name contains {SEPARATOR!r}: {name!r}")
        if parent not in self.concepts:
            raise UnknownParentError(parent)
        cid = name if parent == TOP else parent + SEPARATOR + name
        if cid in self.concepts:
            return cid
        self.concepts[cid] = Concept(id=cid, display_name=name, origin=origin, definition=definition)
        self._insert_relation(Relation(cid, ISA, parent, origin))
        return cid

    def add_relation(self, source: str, target: str, kind: RelationKind, origin: Origin) -> bool:
        """Record a relation once (set semantics). Returns True when inserted.

        An is-a insertion that would close a cycle raises IsACycleError;
        a part-of cycle is refused with a warning only.
        """
        for cid in (source, target):
            if cid not in self.concepts:
                raise UnknownConceptError(cid)
        if source == target:
            if kind == ISA:
                raise IsACycleError(f"self is-a on {source!r}")
            log.warning("refused self-relation %s on %r", kind.as_text(), source)
            return False
        if kind == ISA and self._reaches(target, source, ISA):
            raise IsACycleError(f"is-a {source!r} -> {target!r} would create a cycle")
        if kind == PART_OF and self._reaches(target, source, PART_OF):
            log.warning("refused part-of cycle %r -> %r", source, target)
            return False
        key = (source, kind, target)
        if key in self._relations:
            return False
        self._insert_relation(Relation(source, kind, target, origin))
        return True

    def _insert_relation(self, relation: Relation) -> None:
        self._relations[(relation.source, relation.kind, relation.target)] = relation
        adjacency = self._up.get(relation.kind)
        if adjacency is not None:
            adjacency.setdefault(relation.source, set()).add(relation.target)

    def add_associated_term(self, cid: str, term: str) -> bool:
        """Attach a term to a concept; the concept's own name is refused."""
        if cid not in self.concepts:
            raise UnknownConceptError(cid)
        term = term.strip()
        if not term:
            return False
        concept = self.concepts[cid]
        if term.casefold() == concept.display_name.casefold():
            return False
        if term in concept.associated_terms:
            return False
        concept.associated_terms.add(term)
        return True

    def set_definition(self, cid: str, text: str) -> bool:
        """Store a definition on a concept; the first one wins."""
        if cid not in self.concepts:
            raise UnknownConceptError(cid)
        concept = self.concepts[cid]
        if concept.definition is None:
            concept.definition = text.strip()
            return True
        return False

    def attach_property(self, cid: str, label: str) -> bool:
        """Attach a qualifier label verbatim (case-preserving), deduplicated."""
        if cid not in self.concepts:
            raise UnknownConceptError(cid)
        if not label.strip():
            raise EmptyNameError("property label is empty")
        key = (cid, label)
        if key in self._properties:
            return False
        self._properties[key] = None
        return True

    # ------------------------------------------------------------- traversal

    def _reaches(self, start: str, goal: str, kind: RelationKind) -> bool:
        """True when `goal` is reachable from `start` along source->target edges."""
        adjacency = self._up[kind]
        seen = {start}
        stack = [start]
        while stack:
            current = stack.pop()
            if current == goal:
                return True
            for target in adjacency.get(current, ()):
                if target not in seen:
                    seen.add(target)
                    stack.append(target)
        return False

    def isa_ancestors(self, cid: str) -> set[str]:
        adjacency = self._up[ISA]
        out: set[str] = set()
        stack = [cid]
        while stack:
            current = stack.pop()
            for target in adjacency.get(current, ()):
                if target not in out:
                    out.add(target)
                    stack.append(target)
        return out

    # ------------------------------------------------------------ validation

    def validate(self) -> None:
        """Check every structural invariant; raises OntologyError on failure."""
        if TOP not in self.concepts:
            raise MalformedInputError("Top concept is missing")
        for (s, k, t) in self._relations:
            if s == TOP and k == ISA:
                raise MalformedInputError(f"Top has a parent: {t!r}")
        for cid, concept in self.concepts.items():
            if cid == TOP:
                continue
            if SEPARATOR in cid:
                prefix, _, last = cid.rpartition(SEPARATOR)
                if prefix not in self.concepts:
                    raise MalformedInputError(f"no parent concept for {cid!r}")
                if concept.display_name != last:
                    raise MalformedInputError(f"display name mismatch on {cid!r}")
            elif concept.display_name != cid:
                raise MalformedInputError(f"display name mismatch on {cid!r}")
            if concept.display_name.casefold() in {t.casefold() for t in concept.associated_terms}:
                raise MalformedInputError(f"{cid!r} lists its own name as associated term")
            if TOP not in self.isa_ancestors(cid):
                raise MalformedInputError(f"{cid!r} has no is-a path to Top")
        for (s, k, t) in self._relations:
            if s not in self.concepts or t not in self.concepts:
                raise MalformedInputError(f"dangling relation {s!r} {k.as_text()} {t!r}")
            if s == t:
                raise MalformedInputError(f"self-relation on {s!r}")
        for (cid, label) in self._properties:
            if cid not in self.concepts:
                raise MalformedInputError(f"dangling property on {cid!r}")
            if not label:
                raise MalformedInputError(f"empty property label on {cid!r}")
        self._check_isa_acyclic()

    def _check_isa_acyclic(self) -> None:
        # Kahn topological sort over the is-a sub-graph.
        edges = [(s, t) for (s, k, t) in self._relations if k == ISA]
        out_degree = {cid: 0 for cid in self.concepts}
        incoming: dict[str, list[str]] = {cid: [] for cid in self.concepts}
        for s, t in edges:
            out_degree[s] += 1
            incoming[t].append(s)
        ready = [cid for cid, deg in out_degree.items() if deg == 0]
        seen = 0
        while ready:
            node = ready.pop()
            seen += 1
            for child in incoming[node]:
                out_degree[child] -= 1
                if out_degree[child] == 0:
                    ready.append(child)
        if seen != len(self.concepts):
            raise IsACycleError("is-a sub-graph contains a cycle")


# ---------------------------------------------------------------- file format
#
# UTF-8, LF, deterministic order.  Record kinds:
#   C <tab> qualified_path <tab> origin <tab> definition   (definition may be empty)
#   T <tab> qualified_path <tab> associated_term
#   R <tab> source_path <tab> kind <tab> target_path <tab> origin
#   P <tab> qualified_path <tab> property_label
# where kind is "isa", "partof" or "named:<label>".


def serialize(ontology: Ontology) -> bytes:
    lines: list[str] = []
    for cid in sorted(ontology.concepts):
        concept = ontology.concepts[cid]
        definition = concept.definition or ""
        _check_field(cid, "concept id")
        _check_field(definition, "definition")
        lines.append(f"C\t{cid}\t{concept.origin.value}\t{definition}")
    for cid in sorted(ontology.concepts):
        for term in sorted(ontology.concepts[cid].associated_terms):
            _check_field(term, "associated term")
            lines.append(f"T\t{cid}\t{term}")
    for (s, k, t) in sorted(ontology._relations, key=lambda key: (key[0], key[1].as_text(), key[2])):
        relation = ontology._relations[(s, k, t)]
        _check_field(k.as_text(), "relation kind")
        lines.append(f"R\t{s}\t{k.as_text()}\t{t}\t{relation.origin.value}")
    for (cid, label) in sorted(ontology._properties):
        _check_field(label, "property label")
        lines.append(f"P\t{cid}\t{label}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def deserialize(data: bytes) -> Ontology:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedInputError(f"not valid UTF-8: {exc}") from None
    ontology = Ontology()
    concept_rows: list[tuple[int, list[str]]] = []
    term_rows: list[tuple[int, list[str]]] = []
    relation_rows: list[tuple[int, list[str]]] = []
    property_rows: list[tuple[int, list[str]]] = []
    for number, line in enumerate(text.split("\n"), start=1):
        if not line:
            continue
        fields = line.split("\t")
        record = fields[0]
        if record == "C" and len(fields) == 4:
            concept_rows.append((number, fields))
        elif record == "T" and len(fields) == 3:
            term_rows.append((number, fields))
        elif record == "R" and len(fields) == 5:
            relation_rows.append((number, fields))
        elif record == "P" and len(fields) == 3:
            property_rows.append((number, fields))
        else:
            raise MalformedInputError(f"unrecognized record {line!r}", number)

    def parse_origin(token: str, number: int) -> Origin:
        try:
            return Origin(token)
        except ValueError:
            raise MalformedInputError(f"unknown origin {token!r}", number) from None

    for number, (_, cid, origin_text, definition) in concept_rows:
        origin = parse_origin(origin_text, number)
        if cid == TOP:
            continue
        if cid in ontology.concepts:
            raise MalformedInputError(f"duplicate concept {cid!r}", number)
        if not cid:
            raise MalformedInputError("empty concept path", number)
        display = cid.rpartition(SEPARATOR)[2]
        ontology.concepts[cid] = Concept(
            id=cid, display_name=display, origin=origin, definition=definition or None
        )
    for number, (_, cid, term) in term_rows:
        if cid not in ontology.concepts:
            raise MalformedInputError(f"associated term for unknown concept {cid!r}", number)
        if not term:
            raise MalformedInputError("empty associated term", number)
        ontology.concepts[cid].associated_terms.add(term)
    for number, (_, source, kind_text, target, origin_text) in relation_rows:
        try:
            kind = RelationKind.from_text(kind_text)
        except ValueError as exc:
            raise MalformedInputError(str(exc), number) from None
        origin = parse_origin(origin_text, number)
        for cid in (source, target):
            if cid not in ontology.concepts:
                raise MalformedInputError(f"relation endpoint unknown: {cid!r}", number)
        ontology._insert_relation(Relation(source, kind, target, origin))
    for number, (_, cid, label) in property_rows:
        if cid not in ontology.concepts:
            raise MalformedInputError(f"property on unknown concept {cid!r}", number)
        if not label:
            raise MalformedInputError("empty property label", number)
        ontology._properties[(cid, label)] = None
    ontology.validate()
    return ontology


def export_triples(ontology: Ontology) -> str:
    """Plain relation dump, one `source<TAB>kind<TAB>target` line per relation."""
    rows = sorted(
        (s, k.as_text(), t) for (s, k, t) in ontology._relations
    )
    return "".join(f"{s}\t{k}\t{t}\n" for (s, k, t) in rows)
