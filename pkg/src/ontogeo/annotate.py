"""Spatial named-entity recognition over tagged text.

The chain marks capitalized candidate tokens, recognizes absolute spatial
entities (optional determiner + introducer noun + optional preposition +
proper name, or a bare proper name), wraps them into relative spatial
entities when a multiword relation marker precedes, validates toponyms
against a gazetteer, and aggregates (toponym, qualifier term) pairs.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

from .nlp import Pos, Token, tokenize
from .ontology import Ontology, TOP
from .thesaurus import normalize_term

log = logging.getLogger(__name__)

# Preposition-article contractions; the article half may belong to the
# entity while the preposition half closes a relation marker ("au cœur du").
CONTRACTIONS = {"du": ("de", "le"), "au": ("à", "le"), "aux": ("à", "les"), "des": ("de", "les")}

_PURE_DETS = {"le", "la", "les", "l'", "l’", "un", "une"}


@dataclass(frozen=True)
class GazetteerEntry:
    name: str
    feature_type: str
    lat: float
    lon: float


class GazetteerError(Exception):
    pass


@dataclass
class Gazetteer:
    entries: list[GazetteerEntry] = field(default_factory=list)
    _index: dict[str, list[GazetteerEntry]] = field(default_factory=dict)

    def add(self, entry: GazetteerEntry) -> None:
        if not entry.name:
            raise GazetteerError("empty gazetteer name")
        if not -90.0 <= entry.lat <= 90.0 or not -180.0 <= entry.lon <= 180.0:
            raise GazetteerError(f"coordinates out of range for {entry.name!r}")
        self.entries.append(entry)
        self._index.setdefault(_toponym_key(entry.name), []).append(entry)

    def lookup(self, toponym: str) -> list[GazetteerEntry]:
        hits = self._index.get(_toponym_key(toponym), [])
        return sorted(hits, key=lambda e: (e.feature_type, e.lat, e.lon))

    @classmethod
    def from_tsv(cls, text: str) -> "Gazetteer":
        gazetteer = cls()
        for number, line in enumerate(text.split("\n"), start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 4:
                raise GazetteerError(f"line {number}: expected 4 fields, got {len(fields)}")
            name, feature_type, lat_text, lon_text = (f.strip() for f in fields)
            try:
                entry = GazetteerEntry(name, feature_type, float(lat_text), float(lon_text))
            except ValueError:
                raise GazetteerError(f"line {number}: bad coordinates") from None
            gazetteer.add(entry)
        return gazetteer


def _toponym_key(name: str) -> str:
    return " ".join(name.casefold().split())


@dataclass(frozen=True)
class EsaAnnotation:
    """Absolute spatial entity: a toponym mention, optionally introduced by a
    common noun ("le pic d'Ossau").  Span bounds are inclusive token indices."""

    span: tuple[int, int]
    toponym: str
    introducer: str | None = None
    introducer_lemma: str | None = None
    validated: bool = False
    gazetteer_type: str | None = None
    position: tuple[float, float] | None = None
    alternatives: tuple[GazetteerEntry, ...] = ()


@dataclass(frozen=True)
class EsrAnnotation:
    """Relative spatial entity: a relation marker wrapping an absolute one."""

    span: tuple[int, int]
    relation_marker: str
    inner: EsaAnnotation


@dataclass(frozen=True)
class TermAssociation:
    toponym: str
    term: str
    occurrences: int
    toponym_validated: bool


@dataclass(frozen=True)
class TypingResult:
    typed: bool
    concept: str | None = None
    ambiguous: bool = False


def _plays_introducer(tagged_tokens: list[Token], i: int, introducers) -> bool:
    """True when token i is an introducer noun standing right before a
    capitalized token, optionally across a preposition (or contraction) and
    a determiner: "Lac d'Artouste", "Mont Blanc"."""
    token = tagged_tokens[i]
    lemma = token.lemma or token.surface.casefold()
    if lemma not in introducers and token.surface.casefold() not in introducers:
        return False
    n = len(tagged_tokens)
    j = i + 1
    if j >= n:
        return False
    surface = tagged_tokens[j].surface.casefold()
    if tagged_tokens[j].pos is Pos.PREP or surface in CONTRACTIONS:
        k = j + 1
        if k < n and tagged_tokens[k].pos is Pos.DET and tagged_tokens[k].surface.casefold() in _PURE_DETS:
            k += 1
        return k < n and tagged_tokens[k].capitalized
    return tagged_tokens[j].capitalized


def mark_candidates(
    tagged_tokens: list[Token], introducers: frozenset[str] | set[str] = frozenset()
) -> list[tuple[int, int]]:
    """Toponym candidate spans: runs of capitalized tokens.

    A run needs at least one capitalized token that is either not sentence
    initial or seen capitalized elsewhere inside a sentence.  A capitalized
    introducer noun standing in introducer position ("le Lac d'Artouste")
    stays outside the span it introduces.
    """
    seen_inside = {
        t.surface.casefold()
        for t in tagged_tokens
        if t.capitalized and not t.sentence_initial
    }

    def eligible(i: int) -> bool:
        token = tagged_tokens[i]
        return token.capitalized and not _plays_introducer(tagged_tokens, i, introducers)

    def is_seed(i: int) -> bool:
        token = tagged_tokens[i]
        if not eligible(i):
            return False
        return not token.sentence_initial or token.surface.casefold() in seen_inside

    spans: list[tuple[int, int]] = []
    i = 0
    n = len(tagged_tokens)
    while i < n:
        if not is_seed(i):
            i += 1
            continue
        start = i
        while start > 0 and eligible(start - 1):
            start -= 1
        end = i
        while end + 1 < n and eligible(end + 1):
            end += 1
        spans.append((start, end))
        i = end + 1
    return spans


def recognize_esa(
    tagged_tokens: list[Token],
    candidates: list[tuple[int, int]],
    introducers: frozenset[str] | set[str],
) -> list[EsaAnnotation]:
    """Qualify candidates as absolute spatial entities, longest match first.

    Grammar: Det? IntroducerNoun (Prep Det? | contraction)? ProperName,
    falling back to the bare ProperName production.
    """
    esas: list[EsaAnnotation] = []
    previous_end = -1
    for first, last in candidates:
        toponym = " ".join(t.surface for t in tagged_tokens[first:last + 1])
        span_start = first
        introducer = None
        k = first - 1
        intro_index = None
        if k > previous_end:
            token = tagged_tokens[k]
            surface = token.surface.casefold()
            if token.pos is Pos.DET and surface in _PURE_DETS:
                # the grammar only admits a Det here after a preposition
                if k - 1 > previous_end and tagged_tokens[k - 1].pos is Pos.PREP:
                    intro_index = k - 2
            elif token.pos is Pos.PREP or surface in CONTRACTIONS:
                intro_index = k - 1
            else:
                intro_index = k
        if (
            intro_index is not None
            and intro_index > previous_end
            and _is_introducer(tagged_tokens[intro_index], introducers)
        ):
            introducer = tagged_tokens[intro_index]
            span_start = intro_index
            det_index = intro_index - 1
            if (
                det_index > previous_end
                and tagged_tokens[det_index].pos is Pos.DET
                and tagged_tokens[det_index].surface.casefold() in _PURE_DETS
            ):
                span_start = det_index
        esas.append(
            EsaAnnotation(
                span=(span_start, last),
                toponym=toponym,
                introducer=introducer.surface if introducer else None,
                introducer_lemma=(introducer.lemma or introducer.surface.casefold()) if introducer else None,
            )
        )
        previous_end = last
    return esas


def _is_introducer(token: Token, introducers) -> bool:
    if token.pos is Pos.PUNCT:
        return False
    lemma = token.lemma or token.surface.casefold()
    return lemma in introducers or token.surface.casefold() in introducers


def recognize_esr(
    tagged_tokens: list[Token],
    esas: list[EsaAnnotation],
    relation_markers: list[str],
) -> list[EsrAnnotation]:
    """Wrap an absolute entity when a relation marker immediately precedes it.

    The final "de"/"à" of a marker also matches its contracted forms, so
    "au cœur du quartier du Marais" reads as marker "au cœur de" plus the
    entity "quartier du Marais".
    """
    compiled = []
    for marker in relation_markers:
        words = tuple(t.surface.casefold() for t in tokenize(marker))
        if words:
            compiled.append((words, marker))
    compiled.sort(key=lambda pair: -len(pair[0]))

    def word_matches(expected: str, token: Token) -> bool:
        actual = token.surface.casefold()
        if expected == actual:
            return True
        return actual in CONTRACTIONS and CONTRACTIONS[actual][0] == expected

    esrs: list[EsrAnnotation] = []
    for esa in esas:
        start = esa.span[0]
        for words, marker in compiled:
            begin = start - len(words)
            if begin < 0:
                continue
            window = tagged_tokens[begin:start]
            if all(word_matches(w, t) for w, t in zip(words, window)):
                esrs.append(EsrAnnotation(span=(begin, esa.span[1]), relation_marker=marker, inner=esa))
                break
    return esrs


def validate_esa(
    esa: EsaAnnotation, gazetteer: Gazetteer, ontology: Ontology | None = None
) -> EsaAnnotation:
    """Look the toponym up and fill the validation state.

    A unique hit validates with its type and position.  Multiple hits
    validate through introducer agreement when possible; otherwise the entity
    stays validated with no type and all hits kept as alternatives.  A miss
    leaves the entity unvalidated.
    """
    hits = gazetteer.lookup(esa.toponym)
    if not hits:
        return replace(esa, validated=False)
    if len(hits) == 1:
        hit = hits[0]
        return replace(
            esa, validated=True, gazetteer_type=hit.feature_type, position=(hit.lat, hit.lon)
        )
    if esa.introducer_lemma:
        agreeing = [h for h in hits if _types_agree(esa.introducer_lemma, h.feature_type, ontology)]
        if agreeing:
            hit = agreeing[0]
            return replace(
                esa, validated=True, gazetteer_type=hit.feature_type, position=(hit.lat, hit.lon)
            )
    return replace(esa, validated=True, gazetteer_type=None, position=None, alternatives=tuple(hits))


def _types_agree(introducer_lemma: str, feature_type: str, ontology: Ontology | None) -> bool:
    if normalize_term(introducer_lemma) == normalize_term(feature_type):
        return True
    if ontology is None:
        return False
    index = concept_term_index(ontology)
    a = index.get(normalize_term(introducer_lemma))
    b = index.get(normalize_term(feature_type))
    return a is not None and a == b


def concept_term_index(ontology: Ontology) -> dict[str, tuple[str, ...]]:
    """Normalized display names and associated terms, mapped to the deepest
    matching concept ids (several on a depth tie, smallest id first).  This is
    the lookup behind entity typing."""
    best: dict[str, tuple[int, list[str]]] = {}
    for cid in sorted(ontology.concepts):
        if cid == TOP:
            continue
        concept = ontology.concepts[cid]
        keys = {normalize_term(concept.display_name)}
        keys.update(normalize_term(t) for t in concept.associated_terms)
        depth = ontology.depth(cid)
        for key in keys:
            entry = best.get(key)
            if entry is None or depth > entry[0]:
                best[key] = (depth, [cid])
            elif depth == entry[0]:
                entry[1].append(cid)
    return {key: tuple(ids) for key, (_depth, ids) in best.items()}


def type_entity(
    esa: EsaAnnotation,
    ontology: Ontology,
    index: dict[str, tuple[str, ...]] | None = None,
) -> TypingResult:
    """Assign an ontology concept from the introducer or the gazetteer type.

    The introducer lemma is tried first, then the validated gazetteer type;
    a normalized match against a concept name or associated term types the
    entity.  The deepest concept wins; an equal-depth tie takes the smallest
    id and is reported (and logged) as ambiguous.
    """
    lookup = index if index is not None else concept_term_index(ontology)
    for key in (esa.introducer_lemma, esa.gazetteer_type):
        if not key:
            continue
        candidates = lookup.get(normalize_term(key))
        if candidates:
            if len(candidates) > 1:
                log.info("ambiguous typing for %r: %s", key, ", ".join(candidates))
            return TypingResult(typed=True, concept=candidates[0], ambiguous=len(candidates) > 1)
    return TypingResult(typed=False)


def extract_term_associations(esas: list[EsaAnnotation]) -> list[TermAssociation]:
    """Count (toponym, introducer lemma) pairs, split by validation state."""
    counts: dict[tuple[str, str, bool], int] = {}
    for esa in esas:
        if not esa.introducer_lemma:
            continue
        key = (esa.toponym, esa.introducer_lemma, esa.validated)
        counts[key] = counts.get(key, 0) + 1
    return [
        TermAssociation(toponym=t, term=term, occurrences=n, toponym_validated=v)
        for (t, term, v), n in sorted(counts.items())
    ]


@dataclass
class DocumentAnnotation:
    esas: list[EsaAnnotation]
    esrs: list[EsrAnnotation]
    typings: list[TypingResult]


def annotate_tokens(
    tagged_tokens: list[Token],
    introducers: frozenset[str] | set[str],
    relation_markers: list[str],
    gazetteer: Gazetteer | None = None,
    ontology: Ontology | None = None,
    term_index: dict[str, str] | None = None,
) -> DocumentAnnotation:
    """Run the full chain over one tagged document."""
    candidates = mark_candidates(tagged_tokens, introducers)
    esas = recognize_esa(tagged_tokens, candidates, introducers)
    if gazetteer is not None:
        esas = [validate_esa(esa, gazetteer, ontology) for esa in esas]
    esrs = recognize_esr(tagged_tokens, esas, relation_markers)
    if ontology is not None:
        if term_index is None:
            term_index = concept_term_index(ontology)
        typings = [type_entity(esa, ontology, term_index) for esa in esas]
    else:
        typings = [TypingResult(typed=False) for _ in esas]
    return DocumentAnnotation(esas=esas, esrs=esrs, typings=typings)
