"""Tokenization, lexicon-driven tagging and noun-phrase term chunking.

The tagger is a plain lexicon lookup with a capitalization fallback; at the
scale of description documents and travel narratives this covers everything
the pattern and annotation grammars need without any external model.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources


class Pos(Enum):
    NOUN = "noun"
    PROPER_NOUN = "propernoun"
    VERB = "verb"
    DET = "det"
    PREP = "prep"
    ADJ = "adj"
    ADV = "adv"
    PUNCT = "punct"
    OTHER = "other"


@dataclass
class Token:
    surface: str
    byte_span: tuple[int, int]
    lemma: str | None = None
    pos: Pos | None = None
    capitalized: bool = False
    sentence_initial: bool = False


# Word runs keep internal hyphens and apostrophes; anything else is one token.
_RUN_RE = re.compile(r"\w+(?:[-'’]\w+)*['’]?|\S", re.UNICODE)

# Elided forms split after the apostrophe: d'Artouste -> d' + Artouste.
_ELISION_PREFIXES = {"l", "d", "j", "n", "s", "t", "c", "m", "qu"}

_SENTENCE_FINAL = {".", "!", "?", "…"}


def _split_elisions(run: str) -> list[str]:
    parts: list[str] = []
    start = 0
    for index, ch in enumerate(run):
        if ch in "'’" and run[start:index].casefold() in _ELISION_PREFIXES:
            parts.append(run[start:index + 1])
            start = index + 1
    if start < len(run):
        parts.append(run[start:])
    return parts


def tokenize(text: str) -> list[Token]:
    """Split text into tokens covering every non-whitespace character.

    French elisions are split after the apostrophe, hyphens stay inside
    words, punctuation is isolated.  Byte spans index into the UTF-8 form
    of the document.
    """
    byte_at = [0]
    for ch in text:
        byte_at.append(byte_at[-1] + len(ch.encode("utf-8")))
    tokens: list[Token] = []
    at_sentence_start = True
    for match in _RUN_RE.finditer(text):
        offset = match.start()
        for piece in _split_elisions(match.group()):
            start = offset
            end = offset + len(piece)
            offset = end
            is_word = any(ch.isalnum() for ch in piece)
            token = Token(
                surface=piece,
                byte_span=(byte_at[start], byte_at[end]),
                capitalized=piece[0].isupper(),
                sentence_initial=at_sentence_start and is_word,
            )
            tokens.append(token)
            if is_word:
                at_sentence_start = False
            elif piece in _SENTENCE_FINAL:
                at_sentence_start = True
    return tokens


@dataclass
class Lexicon:
    """Surface-form lookup table (case-folded) plus a stopword set.

    Lookup is total through the fallback in `tag`: an unknown token gets its
    lowercased surface as lemma, and proper-noun status from capitalization.
    """

    entries: dict[str, tuple[str, Pos]] = field(default_factory=dict)
    stopwords: frozenset[str] = frozenset()

    @classmethod
    def from_text(cls, lexicon_text: str, stopword_text: str = "") -> "Lexicon":
        entries: dict[str, tuple[str, Pos]] = {}
        for number, line in enumerate(lexicon_text.split("\n"), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise ValueError(f"lexicon line {number}: expected 3 fields, got {len(fields)}")
            surface, lemma, pos_text = (f.strip() for f in fields)
            try:
                pos = Pos(pos_text.casefold())
            except ValueError:
                raise ValueError(f"lexicon line {number}: unknown part of speech {pos_text!r}") from None
            entries[surface.casefold()] = (lemma, pos)
        stopwords = frozenset(
            line.strip().casefold()
            for line in stopword_text.split("\n")
            if line.strip() and not line.strip().startswith("#")
        )
        return cls(entries=entries, stopwords=stopwords)

    @classmethod
    def default(cls) -> "Lexicon":
        return cls.from_text(read_data("lexicon_fr.tsv"), read_data("stopwords_fr.txt"))


def read_data(name: str) -> str:
    """Read a packaged resource file (lexicons, marker sets, default rules)."""
    return resources.files("ontogeo.data").joinpath(name).read_text(encoding="utf-8")


def tag(tokens: list[Token], lexicon: Lexicon) -> list[Token]:
    """Fill lemma and part of speech on every token, in place.

    A capitalized unknown token is a proper noun unless it is sentence-initial
    and never seen capitalized elsewhere in the document.
    """
    seen_capitalized_inside = {
        t.surface.casefold() for t in tokens if t.capitalized and not t.sentence_initial
    }
    for token in tokens:
        key = token.surface.casefold()
        if not any(ch.isalnum() for ch in token.surface):
            token.lemma, token.pos = token.surface, Pos.PUNCT
        elif key in lexicon.entries:
            token.lemma, token.pos = lexicon.entries[key]
        elif token.capitalized and (not token.sentence_initial or key in seen_capitalized_inside):
            token.lemma, token.pos = key, Pos.PROPER_NOUN
        else:
            token.lemma, token.pos = key, Pos.OTHER
    return tokens


@dataclass
class TermChunk:
    """A contiguous noun-phrase term; token_range bounds are inclusive."""

    token_range: tuple[int, int]
    lemma_form: str


_NOMINAL = (Pos.NOUN, Pos.PROPER_NOUN)
_CONTENT = (Pos.NOUN, Pos.PROPER_NOUN, Pos.ADJ)


def chunk_terms(tokens: list[Token], stopwords: frozenset[str] = frozenset()) -> list[TermChunk]:
    """Extract maximal term chunks: (N|PN) (Prep? Det? (N|PN|Adj))*.

    Stopwords may only appear as the preposition/determiner connectors;
    chunks never overlap and are returned left to right.
    """
    def content_ok(index: int) -> bool:
        token = tokens[index]
        return token.pos in _CONTENT and token.surface.casefold() not in stopwords

    chunks: list[TermChunk] = []
    i = 0
    n = len(tokens)
    while i < n:
        if tokens[i].pos not in _NOMINAL or tokens[i].surface.casefold() in stopwords:
            i += 1
            continue
        last = i
        j = i + 1
        while j < n:
            k = j
            if k < n and tokens[k].pos is Pos.PREP:
                k += 1
            if k < n and tokens[k].pos is Pos.DET:
                k += 1
            if k < n and content_ok(k):
                last = k
                j = k + 1
            else:
                break
        chunks.append(
            TermChunk(
                token_range=(i, last),
                lemma_form=" ".join(tokens[idx].lemma or "" for idx in range(i, last + 1)),
            )
        )
        i = last + 1
    return chunks
