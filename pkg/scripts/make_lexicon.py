"""Regenerate src/ontogeo/data/lexicon_fr.tsv and stopwords_fr.txt.

Run from the repository root.  Deterministic output.
"""

# surface -> lemma; inflected articles map to their canonical form
DETS = {
    "le": "le", "la": "le", "les": "le", "l'": "le",
    "un": "un", "une": "un", "des": "des",
    "ce": "ce", "cet": "ce", "cette": "ce", "ces": "ce",
    "ma": "mon", "mon": "mon", "mes": "mon",
    "ta": "ton", "ton": "ton", "tes": "ton",
    "sa": "son", "son": "son", "ses": "son",
    "notre": "notre", "nos": "notre", "votre": "votre", "vos": "votre",
    "leur": "leur", "leurs": "leur",
    "quelques": "quelque", "plusieurs": "plusieurs", "chaque": "chaque",
    "tout": "tout", "toute": "tout", "tous": "tout", "toutes": "tout",
    "quel": "quel", "quelle": "quel",
}
PREPS = [
    "de", "d'", "à", "en", "dans", "sur", "sous", "vers", "par", "pour",
    "avec", "sans", "entre", "chez", "depuis", "pendant", "contre",
    "après", "avant", "derrière", "devant", "dès", "hors", "parmi", "selon",
    "du", "au", "aux", "jusqu'",
]
ADVS = [
    "ne", "pas", "plus", "moins", "très", "bien", "peu", "trop", "aussi",
    "alors", "ici", "là", "ensuite", "puis", "enfin", "encore", "déjà",
    "souvent", "toujours", "jamais", "loin",
]
OTHERS = [
    "et", "ou", "mais", "donc", "or", "ni", "car", "que", "qu'", "qui",
    "dont", "où", "si", "comme", "lorsque", "quand",
    "je", "tu", "il", "elle", "on", "nous", "vous", "ils", "elles",
    "se", "s'", "me", "m'", "te", "t'", "y", "n'", "c'", "j'", "lui",
]

# (surfaces..., lemma) verb groups; "est" keeps its own lemma so that the
# hyponymy pattern can match on it directly.
VERBS = [
    (["est"], "est"),
    (["être", "sont", "était", "étaient", "sera", "seront", "fut", "furent",
      "suis", "es", "sommes", "êtes", "soit"], "être"),
    (["a", "ont", "avait", "avaient", "eut", "aura", "auront", "avoir"], "avoir"),
    (["va", "vont", "allait", "allaient", "aller", "allons"], "aller"),
    (["atteint", "atteignons", "atteignent", "atteindre"], "atteindre"),
    (["franchit", "franchissons", "franchissent", "franchir"], "franchir"),
    (["monte", "montons", "montent", "monter"], "monter"),
    (["descend", "descendons", "descendent", "descendre"], "descendre"),
    (["traverse", "traversons", "traversent", "traverser"], "traverser"),
    (["longe", "longeons", "longent", "longer"], "longer"),
    (["domine", "dominent", "dominer"], "dominer"),
    (["découvre", "découvrons", "découvrent", "découvrir"], "découvrir"),
    (["admire", "admirons", "admirent", "admirer"], "admirer"),
    (["arrive", "arrivons", "arrivent", "arriver"], "arriver"),
    (["quitte", "quittons", "quittent", "quitter"], "quitter"),
    (["suit", "suivons", "suivent", "suivre"], "suivre"),
    (["passe", "passons", "passent", "passer"], "passer"),
    (["contemple", "contemplons", "contemplent", "contempler"], "contempler"),
    (["aperçoit", "apercevons", "aperçoivent", "apercevoir"], "apercevoir"),
    (["visite", "visitons", "visitent", "visiter"], "visiter"),
    (["rejoint", "rejoignons", "rejoignent", "rejoindre"], "rejoindre"),
    (["surplombe", "surplombent", "surplomber"], "surplomber"),
    (["serpente", "serpentent", "serpenter"], "serpenter"),
    (["mène", "mènent", "mener"], "mener"),
    (["conduit", "conduisent", "conduire"], "conduire"),
    (["borde", "bordent", "border"], "border"),
    (["entoure", "entourent", "entourer"], "entourer"),
    (["gravit", "gravissons", "gravissent", "gravir"], "gravir"),
    (["campe", "campons", "campent", "camper"], "camper"),
    (["dresse", "dressent", "dresser"], "dresser"),
    (["étend", "étendent", "étendre"], "étendre"),
    (["situe", "situent", "situer"], "situer"),
    (["trouve", "trouvons", "trouvent", "trouver"], "trouver"),
    (["voit", "voyons", "voient", "voir"], "voir"),
    (["offre", "offrent", "offrir"], "offrir"),
    (["forme", "forment", "former"], "former"),
    (["élève", "élèvent", "élever"], "élever"),
    (["admet", "admettent", "admettre"], "admettre"),
    (["regarde", "regardons", "regardent", "regarder"], "regarder"),
    (["marche", "marchons", "marchent", "marcher"], "marcher"),
    (["porte", "portons", "portent", "porter"], "porter"),
    (["tombe", "tombent", "tomber"], "tomber"),
    (["coule", "coulent", "couler"], "couler"),
    (["brille", "brillent", "briller"], "briller"),
    (["gronde", "grondent", "gronder"], "gronder"),
    (["sépare", "séparent", "séparer"], "séparer"),
    (["relie", "relient", "relier"], "relier"),
    (["couvre", "couvrent", "couvrir"], "couvrir"),
    (["cache", "cachent", "cacher"], "cacher"),
    (["montre", "montrons", "montrent", "montrer"], "montrer"),
    (["semble", "semblent", "sembler"], "sembler"),
    (["paraît", "paraissent", "paraître"], "paraître"),
    (["devient", "deviennent", "devenir"], "devenir"),
    (["reste", "restons", "restent", "rester"], "rester"),
    (["demeure", "demeurent", "demeurer"], "demeurer"),
    (["vient", "viennent", "venons", "venir"], "venir"),
    (["part", "partent", "partons", "partir"], "partir"),
    (["revient", "reviennent", "revenir"], "revenir"),
    (["entre", "entrons", "entrent", "entrer"], "entrer"),
    (["sort", "sortent", "sortons", "sortir"], "sortir"),
    (["tourne", "tournons", "tournent", "tourner"], "tourner"),
    (["continue", "continuons", "continuent", "continuer"], "continuer"),
    (["commence", "commençons", "commencent", "commencer"], "commencer"),
    (["finit", "finissent", "finissons", "finir"], "finir"),
    (["prend", "prennent", "prenons", "prendre"], "prendre"),
    (["donne", "donnons", "donnent", "donner"], "donner"),
    (["laisse", "laissons", "laissent", "laisser"], "laisser"),
    (["met", "mettent", "mettons", "mettre"], "mettre"),
    (["fait", "font", "faisons", "faire"], "faire"),
    (["dit", "disent", "disons", "dire"], "dire"),
    (["peut", "peuvent", "pouvons", "pouvoir"], "pouvoir"),
    (["veut", "veulent", "voulons", "vouloir"], "vouloir"),
    (["faut", "falloir"], "falloir"),
    (["sait", "savent", "savons", "savoir"], "savoir"),
    (["connaît", "connaissent", "connaître"], "connaître"),
    (["attend", "attendent", "attendons", "attendre"], "attendre"),
    (["écoute", "écoutent", "écouter"], "écouter"),
    (["entend", "entendent", "entendre"], "entendre"),
    (["culmine", "culminent", "culminer"], "culminer"),
    (["impressionne", "impressionnent", "impressionner"], "impressionner"),
    (["apparaît", "apparaissent", "apparaître"], "apparaître"),
    (["repart", "repartent", "repartons", "repartir"], "repartir"),
    (["rêve", "rêvons", "rêvent", "rêver"], "rêver"),
    (["habite", "habitons", "habitent", "habiter"], "habiter"),
    (["vit", "vivent", "vivons", "vivre"], "vivre"),
]

# Nouns listed as singular lemmas; plural surfaces are generated.
NOUNS = [
    "lac", "pic", "mont", "vallée", "col", "grotte", "gouffre", "aven",
    "antre", "caverne", "abîme", "corniche", "crête", "promenade", "route",
    "sommet", "cime", "ville", "village", "rue", "quartier", "rivière",
    "fleuve", "ruisseau", "torrent", "cascade", "source", "étang", "marais",
    "montagne", "colline", "plaine", "plateau", "gorge", "canyon", "ravin",
    "falaise", "rocher", "massif", "chaîne", "cirque", "glacier", "moraine",
    "forêt", "bois", "clairière", "prairie", "pré", "champ", "île",
    "presqu'île", "péninsule", "côte", "plage", "baie", "golfe", "cap",
    "pointe", "port", "pont", "chemin", "sentier", "piste", "tunnel",
    "viaduc", "barrage", "refuge", "cabane", "auberge", "hôtel", "gare",
    "église", "chapelle", "cathédrale", "abbaye", "monastère", "château",
    "tour", "muraille", "rempart", "place", "avenue", "boulevard", "impasse",
    "hameau", "bourg", "cité", "faubourg", "commune", "région", "pays",
    "frontière", "défilé", "brèche", "couloir", "arête", "aiguille", "dent",
    "hourquette", "estive", "excavation", "voie", "communication", "tronçon",
    "portion", "partie", "élément", "automobile", "bâtiment", "construction",
    "ouvrage", "réservoir", "canal", "écluse", "embouchure", "confluent",
    "rive", "berge", "quai", "anse", "récif", "dune", "lande", "pelouse",
    "alpage", "versant", "pente", "contrefort", "piton", "mamelon", "butte",
    "tertre", "monticule", "éminence", "hauteur", "altitude", "panorama",
    "paysage", "horizon", "chute", "bassin", "mare", "lagune", "delta",
    "estuaire", "oronyme", "toponyme", "spélonque", "cavité", "baume",
    "balade", "sentinelle", "belvédère", "cime",
    # everyday vocabulary met in travel narratives
    "abri", "aigle", "air", "an", "année", "après-midi", "arbre", "ardoise",
    "argent", "ascension", "aspect", "auberge", "aube", "automne", "bagage",
    "banc", "barque", "berger", "bergerie", "bête", "bord", "bouche",
    "bout", "branche", "brume", "bruit", "buisson", "but", "cabri",
    "caillou", "campagne", "carte", "cascatelle", "cause", "centre",
    "cercle", "chaleur", "chambre", "chance", "changement", "chant",
    "chapeau", "charme", "chasseur", "chat", "chaume", 
    "cheval", "chèvre", "chien", "chose", "ciel", "cloche", "clocher",
    "coin", "compagnon", "conduite", "contour", "corde", "corps", "coteau",
    "couche", "couchant", "couleur", "coup", "cour", "courant", "course",
    "crépuscule", "creux", "cri", "croix", "côté", "culture", "danger",
    "demeure", "descente", "dessin", "détail", "détour", "diligence",
    "direction", "distance", "douane", "douanier", "eau", "échelle",
    "éclair", "écho", "effet", "effort", "endroit", "enfant", "ensemble",
    "épaule", "escalier", "espace", "esprit", "étage", "été", "étendue",
    "étoile", "excursion", "exemple", "face", "famille", "femme", "fenêtre",
    "fer", "ferme", "feu", "figure", "fin", "flanc", "fleur", "foin",
    "fois", "fond", "fontaine", "force", "formation", "fort", "fourche",
    "fraîcheur", "froid", "fromage", "front", "fumée", "génie", "genre",
    "gens", "gîte", "glace", "goût", "grange", "granit", "gravier",
    "grès", "groupe", "guide", "habitant", "haie", "halte", "hauteur",
    "herbe", "heure", "hiver", "homme", "honneur", "hospice", "hospitalité",
    "hutte", "idée", "image", "instant", "intérieur", "jardin", "jour",
    "journée", "lacet", "laine", "lait", "langue", "lever", "liberté",
    "lieu", "lieue", "ligne", "limite", "lit", "livre", "loge", "lumière",
    "lune", "main", "maison", "maître", "marbre", "marche", "marchand",
    "matin", "matinée", "mer", "mesure", "midi", "milieu", "mine",
    "minute", "moment", "monde", "monument", "mouton", "moulin", "mousse",
    "mouvement", "mule", "mulet", "muletier", "mur", "musée", "nature",
    "neige", "nom", "nombre", "notice", "nuage", "nuit", "objet", "oiseau",
    "ombre", "or", "orage", "ordre", "oreille", "ours", "ouverture",
    "page", "pain", "paix", "papier", "paroi", "parole", "part", "passage",
    "passant", "passe", "pasteur", "pâturage", "paysan", "peine", "peintre",
    "pierre", "pin", "pied", "piété", "pièce", "plan", "plante", "pluie",
    "poème", "poésie", "poète", "porte", "poste", "poule",
    "présence", "preuve", "prix", "profil", "profondeur",
    "promeneur", "raison", "rayon", "regard", "rencontre",
    "repas", "repos", "reste", "retour", "rêve", "rocaille", "roche",
    "roi", "rosée", "roue", "ruine", "sable", "saison", "salle", "sapin",
    "scène", "séjour", "sel", "semaine", "sens", "serre", "siècle",
    "signal", "silence", "site", "soif", "soir", "soirée", "soleil",
    "sommeil", "son", "sorte", "soupe", "spectacle", "station", "statue",
    "suite", "sujet", "surface", "table", "tableau", "taille", "temps",
    "terrain", "terrasse", "terre", "tête", "thermes", "toit", "ton",
    "touriste", "tournant", "trace", "train", "trait", "trajet", "travail",
    "troupeau", "trou", "vache", "vague", "vapeur", "vent", "verdure",
    "verre", "vie", "vierge", "vigne", "visage", "visite", "visiteur",
    "voiture", "voix", "voyage", "voyageur", "vue", "zone", "échappée",
    "étape", "œil",
]

# Adjectives: (masc sing, fem sing); lemmas keep the gender, plurals are
# generated, so "routière" stays "routière" in lemma forms.
ADJS = [
    ("naturel", "naturelle"), ("grand", "grande"), ("petit", "petite"),
    ("haut", "haute"), ("bas", "basse"), ("routier", "routière"),
    ("destiné", "destinée"), ("situé", "située"), ("profond", "profonde"),
    ("étroit", "étroite"), ("large", "large"), ("long", "longue"),
    ("pittoresque", "pittoresque"), ("magnifique", "magnifique"),
    ("superbe", "superbe"), ("escarpé", "escarpée"), ("abrupt", "abrupte"),
    ("verdoyant", "verdoyante"), ("sauvage", "sauvage"),
    ("immense", "immense"), ("majestueux", "majestueuse"),
    ("souterrain", "souterraine"), ("calcaire", "calcaire"),
    ("rocheux", "rocheuse"), ("boisé", "boisée"), ("glaciaire", "glaciaire"),
    ("alpin", "alpine"), ("pyrénéen", "pyrénéenne"), ("ancien", "ancienne"),
    ("nouveau", "nouvelle"), ("célèbre", "célèbre"), ("fameux", "fameuse"),
    ("principal", "principale"), ("secondaire", "secondaire"),
    ("préhistorique", "préhistorique"), ("orné", "ornée"),
    ("ferré", "ferrée"), ("communal", "communale"), ("vieux", "vieille"),
    ("blanc", "blanche"), ("noir", "noire"), ("vert", "verte"),
    ("bleu", "bleue"), ("gris", "grise"), ("rouge", "rouge"),
    ("jaune", "jaune"), ("clair", "claire"), ("sombre", "sombre"),
    ("froid", "froide"), ("chaud", "chaude"), ("sec", "sèche"),
    ("humide", "humide"), ("doux", "douce"), ("rude", "rude"),
    ("dur", "dure"), ("léger", "légère"), ("lourd", "lourde"),
    ("rapide", "rapide"), ("lent", "lente"), ("proche", "proche"),
    ("lointain", "lointaine"), ("voisin", "voisine"), ("central", "centrale"),
    ("oriental", "orientale"), ("occidental", "occidentale"),
    ("méridional", "méridionale"), ("septentrional", "septentrionale"),
    ("supérieur", "supérieure"), ("inférieur", "inférieure"),
    ("moyen", "moyenne"), ("dernier", "dernière"), ("premier", "première"),
    ("prochain", "prochaine"), ("seul", "seule"), ("plein", "pleine"),
    ("vide", "vide"), ("ouvert", "ouverte"), ("fermé", "fermée"),
    ("couvert", "couverte"), ("nu", "nue"), ("riche", "riche"),
    ("pauvre", "pauvre"), ("joli", "jolie"), ("charmant", "charmante"),
    ("admirable", "admirable"), ("terrible", "terrible"),
    ("affreux", "affreuse"), ("curieux", "curieuse"),
    ("gracieux", "gracieuse"), ("silencieux", "silencieuse"),
    ("nombreux", "nombreuse"), ("heureux", "heureuse"),
    ("dangereux", "dangereuse"), ("neigeux", "neigeuse"),
    ("pierreux", "pierreuse"), ("fertile", "fertile"),
    ("aride", "aride"), ("désert", "déserte"), ("perdu", "perdue"),
    ("caché", "cachée"), ("isolé", "isolée"), ("habité", "habitée"),
    ("cultivé", "cultivée"), ("construit", "construite"),
    ("creusé", "creusée"), ("taillé", "taillée"), ("suspendu", "suspendue"),
    ("penché", "penchée"), ("fortifié", "fortifiée"), ("ruiné", "ruinée"),
    ("thermal", "thermale"), ("minéral", "minérale"),
    ("volcanique", "volcanique"), ("torrentiel", "torrentielle"),
    ("montagneux", "montagneuse"), ("frontalier", "frontalière"),
    ("local", "locale"), ("national", "nationale"),
    ("départemental", "départementale"), ("forestier", "forestière"),
    ("pastoral", "pastorale"), ("rural", "rurale"), ("urbain", "urbaine"),
]


def plural(word: str) -> str | None:
    if word.endswith(("s", "x", "z")):
        return None
    if word.endswith("eau") or word.endswith("eu"):
        return word + "x"
    if word.endswith("al"):
        return word[:-2] + "aux"
    return word + "s"


def main() -> None:
    rows: dict[str, tuple[str, str]] = {}

    def put(surface, lemma, pos):
        rows.setdefault(surface, (lemma, pos))

    for det, lemma in DETS.items():
        put(det, lemma, "det")
    for prep in PREPS:
        put(prep, prep, "prep")
    for adv in ADVS:
        put(adv, adv, "adv")
    for other in OTHERS:
        put(other, other, "other")
    for surfaces, lemma in VERBS:
        for surface in surfaces:
            put(surface, lemma, "verb")
    for noun in NOUNS:
        put(noun, noun, "noun")
        p = plural(noun)
        if p:
            put(p, noun, "noun")
    for masc, fem in ADJS:
        put(masc, masc, "adj")
        put(fem, fem, "adj")
        for form, lemma in ((plural(masc), masc), (plural(fem), fem)):
            if form:
                put(form, lemma, "adj")

    lines = [f"{s}\t{l}\t{p}" for s, (l, p) in sorted(rows.items())]
    with open("src/ontogeo/data/lexicon_fr.tsv", "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")

    stop = sorted(set(list(DETS) + PREPS + ADVS + OTHERS
                      + [s for surfaces, _ in VERBS for s in surfaces]))
    with open("src/ontogeo/data/stopwords_fr.txt", "w", encoding="utf-8") as f:
        f.write("\n".join(stop) + "\n")
    print(f"{len(lines)} lexicon entries, {len(stop)} stopwords")


if __name__ == "__main__":
    main()
