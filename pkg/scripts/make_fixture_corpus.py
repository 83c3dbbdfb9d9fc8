"""Regenerate the synthetic test corpora under tests/fixtures/.

The typing corpus is built so that entity-typing coverage climbs across the
three pipeline configurations (gazetteer only, plus base ontology, plus
enriched ontology):

  group A  toponyms with a determinate gazetteer entry, typed everywhere;
  group B  unlisted toponyms whose qualifier names a base-ontology concept;
  group C  gazetteer-ambiguous toponyms whose qualifier only resolves through
           vocabulary enrichment;
  group D  mentions that never type (unknown qualifier or bare name).

Deterministic: running it twice produces identical files.
"""

from __future__ import annotations

from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

# (template, toponym, count); one sentence per mention
MENTIONS = [
    # group A
    ("Nous admirons le lac d'{t} sous le soleil.", "Artouste", 6),
    ("Le sentier descend vers le village de {t}.", "Gavarnie", 4),
    ("Nous arrivons à {t} avant la nuit.", "Gavarnie", 2),
    ("La route de {t} traverse les prairies.", "Gavarnie", 2),
    ("Nous passons par la ville de {t}.", "Cauterets", 4),
    ("Nous campons près de la cascade de {t}.", "Bious", 3),
    ("Nous marchons au sud de la vallée d'{t}.", "Ossau", 3),
    ("Le pic d'{t} domine le paysage.", "Ossau", 3),
    ("Nous quittons la ville de {t} au matin.", "Pau", 3),
    # group B
    ("Nous franchissons le col de {t} avec peine.", "Bergons", 5),
    ("Le mont de {t} se dresse devant nous.", "Lurien", 4),
    ("La crête de {t} se découpe sur le ciel.", "Palas", 4),
    ("Nous atteignons le sommet de {t} vers midi.", "Arrémoulit", 3),
    ("La route de {t} longe le torrent.", "Soussouéou", 3),
    # group C
    ("L'abîme d'{t} impressionne les bergers.", "Escuzana", 5),
    ("Nous visitons la caverne d'{t} à la lanterne.", "Arrious", 4),
    ("La spélonque de {t} reste difficile à trouver.", "Tendeñera", 3),
    # group D
    ("Nous repartons vers {t} en diligence.", "Toulouse", 5),
    ("La gare de {t} est encore loin.", "Bayonne", 4),
    ("Le chemin de {t} monte sans fin.", "Somport", 4),
    ("Nous rêvons encore d'{t} et de ses pentes.", "Azun", 3),
]

FILLERS = [
    "La montagne est magnifique sous la neige.",
    "Nous suivons le torrent dans la forêt.",
    "Le refuge offre un abri pour la nuit.",
    "Les bergers montent vers les alpages.",
    "La pluie tombe sur les pentes désertes.",
    "Nous traversons un bois de hêtres centenaires.",
    "Le soir descend doucement sur la plaine.",
    "Une cascade gronde au fond du ravin.",
    "Les mulets portent nos bagages sans faiblir.",
    "Le guide raconte une vieille légende du pays.",
]


def typing_sentences() -> list[str]:
    mentions = []
    for template, toponym, count in MENTIONS:
        mentions.extend([template.format(t=toponym)] * count)
    sentences = []
    mention_iter = iter(mentions)
    filler_index = 0
    for slot in range(200):
        if slot % 5 < 2:
            sentence = next(mention_iter, None)
            if sentence is not None:
                sentences.append(sentence)
                continue
        sentences.append(FILLERS[filler_index % len(FILLERS)])
        filler_index += 1
    leftover = list(mention_iter)
    assert not leftover, f"{len(leftover)} mentions did not fit"
    assert len(sentences) == 200
    return sentences


CRABIOULES = [
    "Nous franchissons le col de Crabioules.",
    "Nous franchissons le col de Crabioules.",
    "L'abîme de Crabioules impressionne les visiteurs.",
    "La corniche de Crabioules surplombe le torrent.",
    "La crête de Crabioules se dresse devant nous.",
    "Le mont de Crabioules apparaît enfin.",
    "La promenade de Crabioules commence ici.",
    "La route de Crabioules serpente longtemps.",
    "Le sommet de Crabioules culmine fièrement.",
]


def main() -> None:
    typing_dir = FIXTURES / "corpus_typing"
    typing_dir.mkdir(parents=True, exist_ok=True)
    sentences = typing_sentences()
    for book in range(10):
        chunk = sentences[book * 20:(book + 1) * 20]
        path = typing_dir / f"livre{book + 1:02d}.txt"
        path.write_text("\n".join(chunk) + "\n", encoding="utf-8")
    crabioules_dir = FIXTURES / "corpus_crabioules"
    crabioules_dir.mkdir(parents=True, exist_ok=True)
    (crabioules_dir / "recit.txt").write_text("\n".join(CRABIOULES) + "\n", encoding="utf-8")
    print(f"wrote {len(sentences)} typing sentences and {len(CRABIOULES)} Crabioules sentences")


if __name__ == "__main__":
    main()
