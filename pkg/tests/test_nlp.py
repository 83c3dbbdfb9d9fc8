import random

from ontogeo.nlp import Pos, chunk_terms, tag, tokenize


def surfaces(text):
    return [t.surface for t in tokenize(text)]


def test_tokenize_elision():
    assert surfaces("le lac d'Artouste") == ["le", "lac", "d'", "Artouste"]


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_punctuation_isolated():
    assert surfaces("Pau.") == ["Pau", "."]


def test_tokenize_hyphen_kept():
    assert surfaces("Saint-Jean-de-Luz") == ["Saint-Jean-de-Luz"]


def test_tokenize_non_eliding_apostrophe_kept():
    assert surfaces("aujourd'hui") == ["aujourd'hui"]
    assert surfaces("presqu'île") == ["presqu'île"]
    assert surfaces("l'été qu'il") == ["l'", "été", "qu'", "il"]


def test_tokenize_covers_all_non_whitespace(fixtures_dir):
    texts = [
        "Nous marchons au sud de la vallée d'Ossau.",
        "«Pau», dit-il: 43,3°!",
        "  espaces\t multiples \n partout ",
    ]
    for path in sorted((fixtures_dir / "corpus_typing").glob("*.txt"))[:3]:
        texts.append(path.read_text(encoding="utf-8"))
    for text in texts:
        assert "".join(surfaces(text)) == "".join(text.split())


def test_tokenize_byte_spans_index_utf8():
    text = "côte à Pau"
    data = text.encode("utf-8")
    for token in tokenize(text):
        start, end = token.byte_span
        assert data[start:end].decode("utf-8") == token.surface


def test_tag_capitalized_unknown_mid_sentence_is_proper_noun(lexicon):
    tokens = tag(tokenize("le quartier du Marais"), lexicon)
    marais = tokens[-1]
    assert marais.pos in (Pos.PROPER_NOUN, Pos.NOUN)
    # unknown capitalized mid-sentence token
    tokens = tag(tokenize("nous voyons Zorglub"), lexicon)
    assert tokens[-1].pos is Pos.PROPER_NOUN
    assert tokens[-1].lemma == "zorglub"


def test_tag_est_keeps_own_lemma(lexicon):
    tokens = tag(tokenize("un aven est une grotte"), lexicon)
    est = tokens[2]
    assert est.lemma == "est"
    assert est.pos is Pos.VERB


def test_tag_unknown_lowercase_falls_back_to_other(lexicon):
    tokens = tag(tokenize("zzz"), lexicon)
    assert tokens[0].lemma == "zzz"
    assert tokens[0].pos is Pos.OTHER


def test_tag_sentence_initial_capital_not_proper_noun(lexicon):
    tokens = tag(tokenize("Zorglub arrive. Nous partons."), lexicon)
    assert tokens[0].pos is Pos.OTHER  # never seen inside a sentence
    tokens = tag(tokenize("Zorglub arrive. Nous suivons Zorglub."), lexicon)
    assert tokens[0].pos is Pos.PROPER_NOUN  # seen capitalized mid-sentence


def test_tag_total_and_idempotent(lexicon):
    rng = random.Random(12)
    alphabet = "abcéèûÀÉ XYZ.',-"
    for _ in range(50):
        text = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 40)))
        tokens = tag(tokenize(text), lexicon)
        assert all(t.lemma is not None and t.pos is not None for t in tokens)
        again = tag(tokens, lexicon)
        assert [(t.lemma, t.pos) for t in again] == [(t.lemma, t.pos) for t in tokens]


def test_chunk_noun_with_complements(lexicon):
    tokens = tag(tokenize("voie de communication routière"), lexicon)
    chunks = chunk_terms(tokens, lexicon.stopwords)
    assert [c.lemma_form for c in chunks] == ["voie de communication routière"]


def test_chunk_coordination_splits(lexicon):
    tokens = tag(tokenize("grotte naturelle ou excavation"), lexicon)
    chunks = chunk_terms(tokens, lexicon.stopwords)
    assert [c.lemma_form for c in chunks] == ["grotte naturelle", "excavation"]


def test_chunk_lone_determiner_yields_nothing(lexicon):
    tokens = tag(tokenize("le"), lexicon)
    assert chunk_terms(tokens, lexicon.stopwords) == []


def test_chunks_never_overlap_and_increase(lexicon):
    text = (
        "La vallée du torrent mène au village de pierre grise et "
        "la route de montagne suit une crête étroite vers un col."
    )
    tokens = tag(tokenize(text), lexicon)
    chunks = chunk_terms(tokens, lexicon.stopwords)
    for before, after in zip(chunks, chunks[1:]):
        assert before.token_range[1] < after.token_range[0]
    for chunk in chunks:
        first, last = chunk.token_range
        assert any(t.pos in (Pos.NOUN, Pos.PROPER_NOUN) for t in tokens[first:last + 1])
