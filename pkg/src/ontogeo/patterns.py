"""Lexico-syntactic pattern matching over tagged text, and the parsing and
integration of definition fields.

Pattern mini-language, one pattern per line:

    TERM lemma=est lemma=un TERM -> HYPONYMIE est-un R0

Slots are whitespace-separated: `lemma=X`, `pos=X`, `TERM` (binds a term
chunk starting at the current position), `MARKER(set)` (multiword marker from
a named set).  A slot may carry a `?` (optional) or `*` (zero or more)
suffix.  After `->` come the annotation label, the relation kind and the rule
id.

Definition fields follow the sequence

    properties*  meronymy-marker?  term  properties*

relative to the concept owning the definition; `parse_definition` recognizes
that sequence and `integrate_definition` folds the result into the ontology.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .nlp import Lexicon, Pos, TermChunk, Token, chunk_terms, tag, tokenize
from .ontology import (
    ISA,
    IsACycleError,
    Ontology,
    Origin,
    PART_OF,
    TOP,
    UnknownConceptError,
)
from .thesaurus import normalize_words


class PatternError(Exception):
    pass


class PatternSyntaxError(PatternError):
    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.column = column


class NoParseError(PatternError):
    """A definition matched neither the main sequence nor the coordination fallback."""


@dataclass(frozen=True)
class Slot:
    kind: str                 # "lemma" | "pos" | "term" | "marker"
    value: str | None = None  # lemma text, pos value or marker-set name
    optional: bool = False
    repeated: bool = False


@dataclass(frozen=True)
class Pattern:
    name: str
    slots: tuple[Slot, ...]
    annotation_label: str
    relation_kind: str
    rule_id: str


@dataclass(frozen=True)
class PatternMatch:
    pattern_name: str
    annotation_label: str
    relation_kind: str
    token_range: tuple[int, int]  # inclusive bounds
    terms: tuple[str, ...]        # lemma forms of the bound term chunks


def compile_pattern(source_text: str) -> Pattern:
    """Compile one pattern line; syntax errors carry the offending column."""
    stripped = source_text.strip()
    if not stripped:
        raise PatternSyntaxError("empty pattern", 1)
    if "->" not in source_text:
        raise PatternSyntaxError("missing '->' separator", len(source_text))
    head, _, tail = source_text.partition("->")
    slots: list[Slot] = []
    for token, column in _columns(head):
        optional = token.endswith("?")
        repeated = token.endswith("*")
        base = token[:-1] if (optional or repeated) else token
        if not base:
            raise PatternSyntaxError("bare quantifier", column)
        if base == "TERM":
            slot = Slot("term", optional=optional, repeated=repeated)
        elif base.startswith("lemma="):
            value = base[len("lemma="):]
            if not value:
                raise PatternSyntaxError("lemma= needs a value", column)
            slot = Slot("lemma", value, optional, repeated)
        elif base.startswith("pos="):
            value = base[len("pos="):].casefold()
            try:
                Pos(value)
            except ValueError:
                raise PatternSyntaxError(f"unknown part of speech {value!r}", column) from None
            slot = Slot("pos", value, optional, repeated)
        elif base.startswith("MARKER(") and base.endswith(")"):
            value = base[len("MARKER("):-1]
            if not value:
                raise PatternSyntaxError("MARKER() needs a set name", column)
            slot = Slot("marker", value, optional, repeated)
        else:
            raise PatternSyntaxError(f"unrecognized slot {base!r}", column)
        slots.append(slot)
    if not slots:
        raise PatternSyntaxError("pattern has no slots", 1)
    annotation = tail.split()
    if len(annotation) != 3:
        column = source_text.index("->") + 3
        raise PatternSyntaxError("expected 'LABEL kind rule-id' after '->'", column)
    label, kind, rule_id = annotation
    return Pattern(
        name=rule_id,
        slots=tuple(slots),
        annotation_label=label,
        relation_kind=kind,
        rule_id=rule_id,
    )


def compile_pattern_file(text: str) -> list[Pattern]:
    patterns = []
    for line in text.split("\n"):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        patterns.append(compile_pattern(line))
    return patterns


def _columns(text: str):
    column = 1
    for part in text.split(" "):
        if part.strip():
            yield part.strip(), column
        column += len(part) + 1


def _marker_sequences(marker_sets: dict[str, list[str]] | None) -> dict[str, list[tuple[tuple[str, ...], str]]]:
    compiled: dict[str, list[tuple[tuple[str, ...], str]]] = {}
    for name, markers in (marker_sets or {}).items():
        sequences = []
        for marker in markers:
            words = tuple(t.surface.casefold() for t in tokenize(marker))
            if words:
                sequences.append((words, marker))
        sequences.sort(key=lambda pair: -len(pair[0]))
        compiled[name] = sequences
    return compiled


def _marker_at(tokens: list[Token], position: int, sequences: list[tuple[tuple[str, ...], str]]):
    for words, text in sequences:
        end = position + len(words)
        if end > len(tokens):
            continue
        window = tokens[position:end]
        if all(w == t.surface.casefold() or w == (t.lemma or "") for w, t in zip(words, window)):
            return end, text
    return None


def match_pattern(
    pattern: Pattern,
    tagged_tokens: list[Token],
    chunks: list[TermChunk],
    marker_sets: dict[str, list[str]] | None = None,
) -> list[PatternMatch]:
    """All leftmost-longest matches of a pattern, scanning left to right.

    After a match the scan resumes at the start of its final bound term, so a
    chain like "X est un Y est un Z" yields both links through the pivot term;
    everything else about consecutive matches is disjoint.
    """
    chunk_at = {c.token_range[0]: c for c in chunks}
    covering: dict[int, TermChunk] = {}
    for chunk in chunks:
        for index in range(chunk.token_range[0], chunk.token_range[1] + 1):
            covering[index] = chunk
    sequences = _marker_sequences(marker_sets)
    slots = pattern.slots
    n = len(tagged_tokens)

    def term_at(position: int) -> TermChunk | None:
        chunk = chunk_at.get(position)
        if chunk is not None:
            return chunk
        # a preceding slot (a marker, typically) may leave the scan inside a
        # maximal chunk; its suffix starting at a nominal is itself a term
        outer = covering.get(position)
        if outer is None or tagged_tokens[position].pos not in (Pos.NOUN, Pos.PROPER_NOUN):
            return None
        last = outer.token_range[1]
        return TermChunk(
            token_range=(position, last),
            lemma_form=" ".join(tagged_tokens[i].lemma or "" for i in range(position, last + 1)),
        )

    def consume(slot: Slot, position: int) -> list[tuple[int, tuple]]:
        if position >= n:
            return []
        token = tagged_tokens[position]
        if slot.kind == "lemma":
            return [(position + 1, ())] if token.lemma == slot.value else []
        if slot.kind == "pos":
            return [(position + 1, ())] if token.pos is Pos(slot.value) else []
        if slot.kind == "term":
            chunk = term_at(position)
            return [(chunk.token_range[1] + 1, (chunk,))] if chunk else []
        hit = _marker_at(tagged_tokens, position, sequences.get(slot.value, []))
        return [(hit[0], ())] if hit else []

    def best_from(slot_index: int, position: int):
        if slot_index == len(slots):
            return position, ()
        slot = slots[slot_index]
        options = []
        for next_position, captured in consume(slot, position):
            if next_position == position:
                continue
            follow = best_from(slot_index if slot.repeated else slot_index + 1, next_position)
            if follow is not None:
                options.append((follow[0], captured + follow[1]))
        if slot.optional or slot.repeated:
            follow = best_from(slot_index + 1, position)
            if follow is not None:
                options.append(follow)
        if not options:
            return None
        return max(options, key=lambda pair: pair[0])

    matches: list[PatternMatch] = []
    position = 0
    while position < n:
        found = best_from(0, position)
        if found is None or found[0] == position:
            position += 1
            continue
        end, captured = found
        matches.append(
            PatternMatch(
                pattern_name=pattern.name,
                annotation_label=pattern.annotation_label,
                relation_kind=pattern.relation_kind,
                token_range=(position, end - 1),
                terms=tuple(chunk.lemma_form for chunk in captured),
            )
        )
        final = captured[-1] if captured else None
        if final is not None and final.token_range[1] == end - 1 and final.token_range[0] > position:
            position = final.token_range[0]
        else:
            position = end
    return matches


# --------------------------------------------------------- definition parsing


@dataclass
class DefinitionParse:
    """Recognized pieces of one definition field.

    Either `term` is set (main sequence) or `coordinated_terms` is non-empty
    (the "X ou Y" fallback); a meronymy marker implies a term.
    """

    concept: str
    leading_properties: list[str] = field(default_factory=list)
    meronymy_marker: str | None = None
    term: str | None = None
    trailing_properties: list[str] = field(default_factory=list)
    coordinated_terms: list[str] = field(default_factory=list)


_COORDINATORS = {"ou", "et", ","}


def parse_definition(
    definition_text: str,
    owner_concept: str,
    ontology: Ontology,
    marker_sets: dict[str, list[str]],
    lexicon: Lexicon,
) -> DefinitionParse:
    """Parse a definition against the properties/marker/term sequence.

    The owning concept fills the concept slot.  When the sequence does not
    consume the whole text, coordinated noun phrases ("X ou Y") fall back to
    one quasi-synonym per conjunct.  Raises NoParseError when neither route
    extracts anything.
    """
    if owner_concept not in ontology.concepts:
        raise UnknownConceptError(owner_concept)
    tokens = tag(tokenize(definition_text), lexicon)
    if not any(t.pos is not Pos.PUNCT for t in tokens):
        raise NoParseError(f"nothing to parse in {definition_text!r}")
    sequences = _marker_sequences({"partie_de": marker_sets.get("partie_de", [])})["partie_de"]

    marker_text = None
    term_region = None
    marker_hit = _leftmost_marker(tokens, sequences)
    if marker_hit is not None:
        start, end, marker_text = marker_hit
        leading = tokens[:start]
        term_region = end
    else:
        all_chunks = chunk_terms(tokens, lexicon.stopwords)
        if all_chunks:
            term_region = all_chunks[0].token_range[0]
            leading = tokens[:term_region]
        else:
            leading = tokens

    parse = None
    if term_region is not None:
        parse = _parse_main_sequence(tokens, leading, term_region, marker_text, owner_concept, lexicon)
    if parse is not None:
        return parse
    conjuncts = _coordination_fallback(tokens, lexicon)
    if len(conjuncts) >= 2:
        return DefinitionParse(concept=owner_concept, coordinated_terms=conjuncts)
    raise NoParseError(f"definition does not fit the sequence: {definition_text!r}")


def _leftmost_marker(tokens: list[Token], sequences) -> tuple[int, int, str] | None:
    for position in range(len(tokens)):
        hit = _marker_at(tokens, position, sequences)
        if hit is not None:
            return position, hit[0], hit[1]
    return None


def _parse_main_sequence(
    tokens: list[Token],
    leading: list[Token],
    term_start: int,
    marker_text: str | None,
    owner: str,
    lexicon: Lexicon,
) -> DefinitionParse | None:
    leading_properties, consumed = _property_units(leading, 0, len(leading))
    if not consumed:
        return None
    suffix = tokens[term_start:]
    skip = 0
    while skip < len(suffix) and suffix[skip].pos in (Pos.DET, Pos.PUNCT):
        skip += 1
    chunks = chunk_terms(suffix[skip:], lexicon.stopwords)
    if not chunks or chunks[0].token_range[0] != 0:
        return None
    first, last = chunks[0].token_range
    absolute_first = term_start + skip
    absolute_last = absolute_first + last
    term_tokens = tokens[absolute_first:absolute_last + 1]
    kept, split_at = _split_term(term_tokens)
    if kept == 0:
        return None
    term = " ".join(t.lemma or "" for t in term_tokens[:kept])
    trailing_start = absolute_first + kept if split_at else absolute_last + 1
    trailing_properties, consumed = _property_units(tokens, trailing_start, len(tokens))
    if not consumed:
        return None
    return DefinitionParse(
        concept=owner,
        leading_properties=leading_properties,
        meronymy_marker=marker_text.casefold() if marker_text else None,
        term=term,
        trailing_properties=trailing_properties,
    )


def _split_term(term_tokens: list[Token]) -> tuple[int, bool]:
    """Length of the term proper inside a maximal chunk.

    An adjective run followed by a preposition opens a trailing property
    ("destinée aux automobiles"); a bare trailing adjective stays in the term
    ("grotte naturelle").  Returns (kept token count, whether a split happened).
    """
    for index, token in enumerate(term_tokens):
        if token.pos is not Pos.ADJ:
            continue
        after = index + 1
        while after < len(term_tokens) and term_tokens[after].pos is Pos.ADJ:
            after += 1
        if after < len(term_tokens) and term_tokens[after].pos is Pos.PREP:
            if any(t.pos in (Pos.NOUN, Pos.PROPER_NOUN) for t in term_tokens[:index]):
                return index, True
    return len(term_tokens), False


def _property_units(tokens: list[Token], start: int, stop: int) -> tuple[list[str], bool]:
    """Extract "adjectives + optional prepositional complement" qualifier units.

    Returns the units (verbatim surfaces) and whether the region was fully
    consumed up to `stop` (punctuation and leading determiners aside).
    """
    units: list[str] = []
    i = start
    while i < stop:
        token = tokens[i]
        if token.pos is Pos.PUNCT or (token.pos is Pos.DET and not units):
            i += 1
            continue
        piece_start = i
        if token.pos is Pos.ADJ:
            while i < stop and tokens[i].pos is Pos.ADJ:
                i += 1
            if i < stop and tokens[i].pos is Pos.PREP:
                consumed = _complement(tokens, i, stop)
                if consumed is None:
                    return units, False
                i = consumed
        elif token.pos is Pos.PREP:
            consumed = _complement(tokens, i, stop)
            if consumed is None:
                return units, False
            i = consumed
        else:
            return units, False
        units.append(" ".join(t.surface for t in tokens[piece_start:i]))
    return units, True


def _complement(tokens: list[Token], i: int, stop: int) -> int | None:
    # Prep Det? (N|PN|Adj)+
    i += 1
    if i < stop and tokens[i].pos is Pos.DET:
        i += 1
    if i >= stop or tokens[i].pos not in (Pos.NOUN, Pos.PROPER_NOUN, Pos.ADJ):
        return None
    while i < stop and tokens[i].pos in (Pos.NOUN, Pos.PROPER_NOUN, Pos.ADJ):
        i += 1
    return i


def _coordination_fallback(tokens: list[Token], lexicon: Lexicon) -> list[str]:
    segments: list[list[Token]] = [[]]
    for token in tokens:
        if (token.surface.casefold() in _COORDINATORS) or token.surface == ",":
            segments.append([])
        else:
            segments[-1].append(token)
    conjuncts = []
    for segment in segments:
        chunks = chunk_terms(segment, lexicon.stopwords)
        if chunks:
            conjuncts.append(chunks[0].lemma_form)
    return conjuncts


# ------------------------------------------------------ ontology integration


@dataclass
class IntegrationReport:
    concepts_created: list[str] = field(default_factory=list)
    relations_added: list[tuple[str, str, str]] = field(default_factory=list)
    terms_added: list[tuple[str, str]] = field(default_factory=list)
    properties_added: list[tuple[str, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def integrate_definition(
    parse: DefinitionParse,
    ontology: Ontology,
    link_existing_generic: bool = True,
) -> IntegrationReport:
    """Fold one definition parse into the ontology.

    - term alone: quasi-synonym, recorded as associated term of the concept;
    - term plus properties: the term is the more generic concept, the owner
      gets an is-a edge to it and carries the properties;
    - meronymy marker: like the previous case but with a part-of edge and no
      is-a, the term only being created or located.

    A term that names no existing concept is searched as a lexical subsequence
    of existing display names; a hit makes the new concept the parent of that
    more specific one, otherwise it hangs under Top.  Never removes anything;
    replaying a parse is a no-op.
    """
    report = IntegrationReport()
    owner = parse.concept
    if owner not in ontology.concepts:
        raise UnknownConceptError(owner)

    for term in parse.coordinated_terms:
        _add_term(ontology, owner, term, report)
    if parse.term is None:
        return report

    has_properties = bool(parse.leading_properties or parse.trailing_properties)
    if parse.meronymy_marker is None and not has_properties:
        _add_term(ontology, owner, parse.term, report)
        return report

    target, existed = _resolve_generic(ontology, parse.term, report)
    if parse.meronymy_marker is not None:
        _add_relation(ontology, owner, target, PART_OF, report)
    elif not existed or link_existing_generic:
        _add_relation(ontology, owner, target, ISA, report)
    for label in parse.leading_properties + parse.trailing_properties:
        if ontology.attach_property(owner, label):
            report.properties_added.append((owner, label))
    return report


def _add_term(ontology: Ontology, owner: str, term: str, report: IntegrationReport) -> None:
    if ontology.add_associated_term(owner, term):
        report.terms_added.append((owner, term))
    elif term.casefold() == ontology.concepts[owner].display_name.casefold():
        report.warnings.append(f"{owner!r}: term {term!r} is the concept's own name, skipped")


def _add_relation(ontology, source, target, kind, report) -> None:
    if source == target:
        report.warnings.append(f"skipped self {kind.as_text()} on {source!r}")
        return
    try:
        if ontology.add_relation(source, target, kind, Origin.LANGUAGE):
            report.relations_added.append((source, kind.as_text(), target))
    except IsACycleError:
        report.warnings.append(f"skipped cyclic {kind.as_text()} {source!r} -> {target!r}")


def _resolve_generic(ontology: Ontology, term: str, report: IntegrationReport) -> tuple[str, bool]:
    """Locate the concept a generic term refers to, creating it if needed."""
    words = normalize_words(term)
    exact = sorted(
        cid for cid, c in ontology.concepts.items()
        if cid != TOP and normalize_words(c.display_name) == words
    )
    if exact:
        return exact[0], True
    display = term[0].upper() + term[1:] if term else term
    hosts = sorted(
        cid for cid, c in ontology.concepts.items()
        if cid != TOP and _contains(normalize_words(c.display_name), words)
    )
    already = display.strip() in ontology.concepts
    cid = ontology.add_concept(TOP, display, Origin.LANGUAGE)
    if not already:
        report.concepts_created.append(cid)
    for host in hosts:
        _add_relation(ontology, host, cid, ISA, report)
    return cid, False


def _contains(haystack: tuple[str, ...], needle: tuple[str, ...]) -> bool:
    if not needle or len(needle) > len(haystack):
        return False
    return any(
        haystack[i:i + len(needle)] == needle
        for i in range(len(haystack) - len(needle) + 1)
    )
