import random

import pytest

from ontogeo.ontology import ISA, Ontology, Origin, PART_OF, TOP, serialize
from ontogeo.thesaurus import (
    EnrichmentOutcome,
    MalformedRecordError,
    VedetteEntry,
    current_term_list,
    enrich,
    geographic_sense_filter,
    leaf_clusters,
    normalize_term,
    parse_thesaurus,
    resolve_vedette,
)


@pytest.fixture(scope="module")
def grottes_record(fixtures_dir):
    return (fixtures_dir / "thesaurus_grottes.txt").read_text(encoding="utf-8")


# -------------------------------------------------------------- normalization


def test_normalize_strips_plural():
    assert normalize_term("Avens") == "aven"
    assert normalize_term("Gouffres") == "gouffre"
    assert normalize_term("Chevaux") == "chevau"


def test_normalize_fixpoint_and_short_stems():
    assert normalize_term("col") == "col"
    assert normalize_term("os") == "os"
    assert normalize_term("bas") == "bas"


def test_normalize_preserves_diacritics():
    assert normalize_term("Abîmes") == "abîme"
    assert normalize_term("  Spélonques ") == "spélonque"


# -------------------------------------------------------------------- parsing


def test_parse_grottes_record(grottes_record):
    thesaurus = parse_thesaurus(grottes_record)
    assert len(thesaurus.entries) == 1
    entry = thesaurus.entries[0]
    assert entry.label == "Grottes"
    assert entry.geographic_subdivision
    assert {"Abîmes", "Antres", "Avens", "Cavernes", "Gouffres", "Spélonques"} <= entry.employed_for
    assert "Relief (géographie)" in entry.generic_terms


def test_parse_empty_file():
    assert parse_thesaurus("").entries == []


def test_parse_duplicate_labels_both_kept():
    text = "V\tGlaciers\t1\nEP\tFleuves de glace\n\nV\tGlaciers\t0\nEP\tMarchands de glace\n"
    thesaurus = parse_thesaurus(text)
    assert len(thesaurus.entries) == 2
    assert len(resolve_vedette(thesaurus, "glacier")) == 2


def test_parse_malformed_record_reports_line():
    with pytest.raises(MalformedRecordError) as info:
        parse_thesaurus("V\tGrottes\t1\nEP\n")
    assert info.value.line == 2
    with pytest.raises(MalformedRecordError):
        parse_thesaurus("EP\tAvens\n")
    with pytest.raises(MalformedRecordError):
        parse_thesaurus("V\tGrottes\t2\n")


# ----------------------------------------------------------------- resolution


def test_resolve_through_employed_for(grottes_record):
    thesaurus = parse_thesaurus(grottes_record)
    entries = resolve_vedette(thesaurus, "abîme")
    assert [e.label for e in entries] == ["Grottes"]


def test_resolve_unknown_term(grottes_record):
    assert resolve_vedette(parse_thesaurus(grottes_record), "xyzzy") == []


def test_current_term_list(grottes_record):
    entry = parse_thesaurus(grottes_record).entries[0]
    ring = current_term_list(entry)
    assert {"grotte", "abîme", "antre", "aven", "caverne", "gouffre"} <= ring
    # plural stripping applies to the last word only, so both survive
    assert "caverne" in ring and "cavernes préhistorique" in ring


def test_current_term_list_singleton():
    entry = VedetteEntry(label="Cols")
    assert current_term_list(entry) == {"col"}


# -------------------------------------------------------------- leaf clusters


def test_cluster_for_grottes():
    onto = Ontology()
    grottes = onto.add_concept(TOP, "Grottes", Origin.STRUCTURE)
    for child in ("Antre", "Aven", "Gouffre"):
        onto.add_concept(grottes, child, Origin.STRUCTURE)
    clusters = leaf_clusters(onto)
    assert len(clusters) == 1
    assert clusters[0].representative == grottes
    assert {"grotte", "antre", "aven", "gouffre"} <= clusters[0].member_terms


def test_top_only_ontology_has_no_clusters():
    assert leaf_clusters(Ontology()) == []


def brute_force_parents_of_leaves(onto):
    """Oracle: concepts owning at least one childless is-a/part-of child."""
    def children(cid):
        return [r.source for r in onto.relations if r.target == cid and r.kind in (ISA, PART_OF)]

    return sorted(
        cid for cid in onto.concepts
        if any(not children(child) for child in children(cid))
    )


def test_cluster_representatives_match_oracle_on_chain():
    onto = Ontology()
    a = onto.add_concept(TOP, "A", Origin.STRUCTURE)
    b = onto.add_concept(a, "B", Origin.STRUCTURE)
    onto.add_concept(b, "C", Origin.STRUCTURE)
    expected = brute_force_parents_of_leaves(onto)
    assert expected == ["A/B"]
    assert [c.representative for c in leaf_clusters(onto)] == expected


def test_clusters_include_partof_children():
    onto = Ontology()
    whole = onto.add_concept(TOP, "Ensemble", Origin.STRUCTURE)
    part = onto.add_concept(TOP, "Morceau", Origin.STRUCTURE)
    onto.add_relation(part, whole, PART_OF, Origin.STRUCTURE)
    representatives = [c.representative for c in leaf_clusters(onto)]
    assert "Ensemble" in representatives


def test_clusters_deterministic():
    onto = Ontology()
    grottes = onto.add_concept(TOP, "Grottes", Origin.STRUCTURE)
    onto.add_concept(grottes, "Aven", Origin.STRUCTURE)
    assert leaf_clusters(onto) == leaf_clusters(onto)


# ----------------------------------------------------------------- enrichment


def grottes_ontology():
    # cluster whose overlap with the Grottes record is exactly
    # {grotte, antre, aven}: the representative counts, the odd child out
    # ("Baumes") never matches
    onto = Ontology()
    grottes = onto.add_concept(TOP, "Grottes", Origin.STRUCTURE)
    for child in ("Antres", "Avens", "Baumes"):
        onto.add_concept(grottes, child, Origin.STRUCTURE)
    return onto, grottes


def test_enrich_attaches_abime(grottes_record):
    onto, grottes = grottes_ontology()
    thesaurus = parse_thesaurus(grottes_record)
    enriched, decisions = enrich(onto, [("abîme", 1)], thesaurus)
    assert len(decisions) == 1
    decision = decisions[0]
    assert decision.outcome is EnrichmentOutcome.ATTACHED
    assert decision.best_cluster == grottes
    assert decision.equivalence_count == 3
    new_id = "Grottes/abîme"
    assert new_id in enriched.concepts
    assert enriched.concepts[new_id].origin is Origin.ENRICHMENT
    assert enriched.has_relation(new_id, ISA, grottes)
    # input ontology untouched
    assert new_id not in onto.concepts


def test_enrich_no_vedette(grottes_record):
    onto, _ = grottes_ontology()
    before = serialize(onto)
    enriched, decisions = enrich(onto, [("xyzzy", 1)], parse_thesaurus(grottes_record))
    assert decisions[0].outcome is EnrichmentOutcome.NO_VEDETTE
    assert serialize(enriched) == before


def test_enrich_already_concept(grottes_record):
    onto, _ = grottes_ontology()
    _, decisions = enrich(onto, [("aven", 4)], parse_thesaurus(grottes_record))
    assert decisions[0].outcome is EnrichmentOutcome.ALREADY_CONCEPT


def test_enrich_ambiguous_vedette_resolved_by_overlap():
    # two homograph entries; only one overlaps any cluster, so the zero-count
    # one is discarded (checked against exhaustive pair enumeration below)
    text = (
        "V\tGlaciers\t1\nEP\tFleuves de glace\nEP\tNévés\n\n"
        "V\tGlaciers\t0\nEP\tMarchands de glace\nEP\tSorbetières\n"
    )
    thesaurus = parse_thesaurus(text)
    onto = Ontology()
    relief = onto.add_concept(TOP, "Relief", Origin.STRUCTURE)
    onto.add_concept(relief, "Névé", Origin.STRUCTURE)
    onto.add_concept(relief, "Moraine", Origin.STRUCTURE)
    enriched, decisions = enrich(onto, [("glacier", 2)], thesaurus)
    assert decisions[0].outcome is EnrichmentOutcome.ATTACHED
    assert decisions[0].best_cluster == relief
    assert decisions[0].equivalence_count == 1
    assert decisions[0].resolved_vedette == "Glaciers"
    counts = [
        len(current_term_list(entry) & cluster.member_terms)
        for entry in thesaurus.entries
        for cluster in leaf_clusters(onto)
    ]
    assert sorted(counts, reverse=True)[0] == 1


def test_enrich_no_equivalence():
    thesaurus = parse_thesaurus("V\tChemins\t0\nEP\tSentiers muletiers\n")
    onto, _ = grottes_ontology()
    _, decisions = enrich(onto, [("chemin", 1)], thesaurus)
    assert decisions[0].outcome is EnrichmentOutcome.NO_EQUIVALENCE
    assert decisions[0].resolved_vedette == "Chemins"


def test_enrich_min_equivalence_threshold(grottes_record):
    onto, _ = grottes_ontology()
    thesaurus = parse_thesaurus(grottes_record)
    _, decisions = enrich(onto, [("abîme", 1)], thesaurus, min_equivalences=4)
    assert decisions[0].outcome is EnrichmentOutcome.NO_EQUIVALENCE


def test_enrichment_only_adds_leaves_and_keeps_structure(grottes_record):
    rng = random.Random(42)
    thesaurus = parse_thesaurus(grottes_record)
    for _ in range(10):
        onto = Ontology()
        ids = [TOP]
        for index in range(rng.randrange(3, 12)):
            parent = rng.choice(ids)
            ids.append(onto.add_concept(parent, f"c{index}", Origin.STRUCTURE))
        grottes = onto.add_concept(TOP, "Grottes", Origin.STRUCTURE)
        onto.add_concept(grottes, "Antres", Origin.STRUCTURE)
        onto.add_concept(grottes, "Avens", Origin.STRUCTURE)
        enriched, _ = enrich(onto, [("abîme", 1), ("caverne", 1)], thesaurus)
        for cid, concept in enriched.concepts.items():
            if concept.origin is Origin.ENRICHMENT:
                assert enriched.children_of(cid) == []
        # pre-existing structure untouched
        for cid in onto.concepts:
            assert cid in enriched.concepts
        old_relations = {(r.source, r.kind.as_text(), r.target) for r in onto.relations}
        new_relations = {(r.source, r.kind.as_text(), r.target) for r in enriched.relations}
        assert old_relations <= new_relations
        for source, kind, target in new_relations - old_relations:
            assert enriched.concepts[source].origin is Origin.ENRICHMENT


def brute_force_best_pair(onto, qualifier, thesaurus, min_equivalences=1):
    """Oracle: enumerate every (entry, cluster) pair and apply the tie-breaks."""
    entries = resolve_vedette(thesaurus, qualifier)
    best = None
    for entry_index, entry in enumerate(entries):
        ring = current_term_list(entry)
        for cluster in leaf_clusters(onto):
            count = len(ring & cluster.member_terms)
            if count < min_equivalences:
                continue
            key = (-count, -onto.depth(cluster.representative), cluster.representative, entry_index)
            if best is None or key < best[0]:
                best = (key, entry.label, cluster.representative, count)
    return best


def test_enrich_matches_brute_force_oracle(fixtures_dir):
    thesaurus = parse_thesaurus((fixtures_dir / "thesaurus_geo.txt").read_text(encoding="utf-8"))
    rng = random.Random(99)
    names = ["Grottes", "Cols", "Monts", "Relief", "Chemins", "Balades", "Cimes"]
    leaves = ["Antres", "Avens", "Gouffres", "Cavernes", "Baumes", "Cols", "Crêtes", "Monts", "Cimes"]
    qualifiers = ["abîme", "col", "glacier", "promenade", "chemin", "corniche", "cime", "route"]
    for _ in range(20):
        onto = Ontology()
        for name in rng.sample(names, rng.randrange(1, 6)):
            parent = onto.add_concept(TOP, name, Origin.STRUCTURE)
            for leaf in rng.sample(leaves, rng.randrange(0, 5)):
                onto.add_concept(parent, leaf, Origin.STRUCTURE)
        for qualifier in rng.sample(qualifiers, rng.randrange(1, 5)):
            expected = brute_force_best_pair(onto, qualifier, thesaurus)
            enriched, decisions = enrich(onto, [(qualifier, 1)], thesaurus, static_clusters=True)
            decision = decisions[0]
            if decision.outcome is EnrichmentOutcome.ATTACHED:
                assert expected is not None
                assert (decision.resolved_vedette, decision.best_cluster, decision.equivalence_count) == expected[1:]
            elif decision.outcome is EnrichmentOutcome.NO_EQUIVALENCE:
                assert expected is None
            elif decision.outcome is EnrichmentOutcome.NO_VEDETTE:
                assert resolve_vedette(thesaurus, qualifier) == []


def test_enrich_processing_order_and_recomputed_clusters(grottes_record):
    onto, grottes = grottes_ontology()
    thesaurus = parse_thesaurus(grottes_record)
    _, decisions = enrich(onto, [("caverne", 1), ("abîme", 5)], thesaurus)
    assert [d.qualifier for d in decisions] == ["abîme", "caverne"]
    # abîme lands first and carries the term ring, so caverne then matches
    # the ontology directly
    assert decisions[0].outcome is EnrichmentOutcome.ATTACHED
    assert decisions[1].outcome is EnrichmentOutcome.ALREADY_CONCEPT


def test_enrich_deterministic(grottes_record):
    onto, _ = grottes_ontology()
    thesaurus = parse_thesaurus(grottes_record)
    first, decisions_a = enrich(onto, [("abîme", 2), ("caverne", 2)], thesaurus)
    second, decisions_b = enrich(onto, [("abîme", 2), ("caverne", 2)], thesaurus)
    assert serialize(first) == serialize(second)
    assert decisions_a == decisions_b


# ------------------------------------------------------------------ geography


def test_geographic_filter_flags_grottes(grottes_record):
    thesaurus = parse_thesaurus(grottes_record)
    flagged = geographic_sense_filter(thesaurus, {"Relief (géographie)", "Zones souterraines"})
    assert flagged == {"Grottes"}


def test_geographic_filter_ignores_plain_entry():
    thesaurus = parse_thesaurus("V\tBonbons\t0\nEP\tSucreries\nTG\tConfiserie\n")
    assert geographic_sense_filter(thesaurus, {"Relief (géographie)"}) == set()


def test_geographic_filter_transitive_chain():
    text = (
        "V\tAvens\t0\nTG\tGouffres\n\n"
        "V\tGouffres\t0\nTG\tCavités naturelles\n\n"
        "V\tCavités naturelles\t0\nTG\tRelief (géographie)\n"
    )
    thesaurus = parse_thesaurus(text)
    flagged = geographic_sense_filter(thesaurus, {"Relief (géographie)"})
    # depth 1 for the direct entry, 2 and 3 through the generic links
    assert flagged == {"Avens", "Gouffres", "Cavités naturelles"}
