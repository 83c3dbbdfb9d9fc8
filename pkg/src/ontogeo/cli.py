"""Command-line pipeline: build, annotate, enrich, stats, export-triples.

Every command takes `--config <path>` (a plain key=value file; paths resolve
relative to the config file) plus a few per-flag overrides.  All outputs are
UTF-8 with LF endings and deterministic for identical inputs.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

from . import annotate as sa
from . import ingest, patterns, thesaurus as th
from .nlp import Lexicon, chunk_terms, read_data, tag, tokenize
from .ontology import Ontology, OntologyError, deserialize, export_triples, serialize


class ConfigError(Exception):
    pass


_PATH_KEYS = {
    "rules", "lexicon", "stopwords", "introducers", "relation_markers",
    "partie_de_markers", "patterns", "gazetteer", "thesaurus", "geo_markers",
    "corpus_dir", "ontology_in", "ontology_out", "annotations_out",
    "associations_out", "decisions_out", "report_out", "stats_out", "triples_out",
}
_LIST_KEYS = {"spec_xml"}
_FLAG_KEYS = {"min_equivalences", "static_clusters", "include_unvalidated"}


@dataclass
class PipelineConfig:
    spec_xml: list[Path] = field(default_factory=list)
    rules: Path | None = None
    lexicon: Path | None = None
    stopwords: Path | None = None
    introducers: Path | None = None
    relation_markers: Path | None = None
    partie_de_markers: Path | None = None
    patterns: Path | None = None
    gazetteer: Path | None = None
    thesaurus: Path | None = None
    geo_markers: Path | None = None
    corpus_dir: Path | None = None
    ontology_in: Path | None = None
    ontology_out: Path | None = None
    annotations_out: Path | None = None
    associations_out: Path | None = None
    decisions_out: Path | None = None
    report_out: Path | None = None
    stats_out: Path | None = None
    triples_out: Path | None = None
    min_equivalences: int = 1
    static_clusters: bool = False
    include_unvalidated: bool = False


def load_config(path: Path) -> PipelineConfig:
    """Parse a key=value file; later keys override, spec_xml accumulates."""
    config = PipelineConfig()
    base = path.parent
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for number, line in enumerate(text.split("\n"), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{number}: expected key=value")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if key in _LIST_KEYS:
            config.spec_xml.append(base / value)
        elif key in _PATH_KEYS:
            setattr(config, key, base / value if value else None)
        elif key == "min_equivalences":
            config.min_equivalences = int(value)
        elif key in ("static_clusters", "include_unvalidated"):
            setattr(config, key, value not in ("0", "", "false", "no"))
        else:
            raise ConfigError(f"{path}:{number}: unknown key {key!r}")
    return config


def _check_exists(config: PipelineConfig, needed: list[str]) -> None:
    for name in needed:
        value = getattr(config, name)
        if value is None or (isinstance(value, list) and not value):
            raise ConfigError(f"config key {name!r} is required for this command")
        paths = value if isinstance(value, list) else [value]
        for p in paths:
            if not Path(p).exists():
                raise ConfigError(f"{name}: no such path {p}")


# ------------------------------------------------------------------ resources


def _text_or_default(path: Path | None, default_name: str) -> str:
    if path is None:
        return read_data(default_name)
    return Path(path).read_text(encoding="utf-8")


def _lexicon(config: PipelineConfig) -> Lexicon:
    return Lexicon.from_text(
        _text_or_default(config.lexicon, "lexicon_fr.tsv"),
        _text_or_default(config.stopwords, "stopwords_fr.txt"),
    )


def _word_list(path: Path | None, default_name: str) -> list[str]:
    text = _text_or_default(path, default_name)
    return [line.strip() for line in text.split("\n") if line.strip() and not line.lstrip().startswith("#")]


def _write(path: Path | None, content: str) -> None:
    if path is None:
        sys.stdout.write(content)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(content, encoding="utf-8", newline="\n")


# ------------------------------------------------------------------- commands


def cmd_build(config: PipelineConfig) -> int:
    _check_exists(config, ["spec_xml"])
    rules_text = _text_or_default(config.rules, "default_rules.tsv")
    rules = ingest.parse_rules(rules_text)
    ontology = Ontology()
    report = ingest.IngestReport()
    if not rules:
        report.warnings.append("rule file is empty; the ontology contains only Top")
    for xml_path in config.spec_xml:
        tree = ingest.parse_spec(Path(xml_path).read_bytes())
        report.extend(ingest.apply_rules(tree, rules, ontology))
    lexicon = _lexicon(config)
    marker_sets = {"partie_de": _word_list(config.partie_de_markers, "partie_de_markers_fr.txt")}
    compiled = patterns.compile_pattern_file(_text_or_default(config.patterns, "patterns_fr.txt"))
    pattern_rows = []
    parsed = 0
    for queued in report.definitions:
        tokens = tag(tokenize(queued.text), lexicon)
        chunks = chunk_terms(tokens, lexicon.stopwords)
        for pattern in compiled:
            for match in patterns.match_pattern(pattern, tokens, chunks, marker_sets):
                pattern_rows.append(
                    f"pattern\t{match.annotation_label}\t{match.relation_kind} "
                    f"{' / '.join(match.terms)}\t{queued.concept}\t{match.pattern_name}"
                )
        try:
            parse = patterns.parse_definition(
                queued.text, queued.concept, ontology, marker_sets, lexicon
            )
        except patterns.NoParseError:
            report.warnings.append(f"{queued.tag_path}: definition not parsed: {queued.text!r}")
            continue
        integration = patterns.integrate_definition(parse, ontology)
        report.warnings.extend(integration.warnings)
        parsed += 1
    ontology.validate()
    if config.ontology_out is not None:
        config.ontology_out.parent.mkdir(parents=True, exist_ok=True)
        config.ontology_out.write_bytes(serialize(ontology))
    _write(config.report_out, report.to_tsv() + "".join(row + "\n" for row in pattern_rows))
    print(
        f"build: {len(ontology.concepts) - 1} concepts, {ontology.relation_count()} relations, "
        f"{parsed}/{len(report.definitions)} definitions integrated, {len(report.warnings)} warnings",
        file=sys.stderr,
    )
    return 0


def _dump_rows(doc_name, tokens, annotation):
    def span_bytes(span):
        return tokens[span[0]].byte_span[0], tokens[span[1]].byte_span[1]

    rows = []
    for esa, typing in zip(annotation.esas, annotation.typings):
        start, end = span_bytes(esa.span)
        rows.append(
            (doc_name, start, end, "ESA", esa.introducer_lemma or "", esa.toponym,
             "1" if esa.validated else "0", esa.gazetteer_type or "", typing.concept or "")
        )
    for esr in annotation.esrs:
        start, end = span_bytes(esr.span)
        inner_typing = ""
        for esa, typing in zip(annotation.esas, annotation.typings):
            if esa.span == esr.inner.span:
                inner_typing = typing.concept or ""
                break
        rows.append(
            (doc_name, start, end, "ESR", esr.relation_marker, esr.inner.toponym,
             "1" if esr.inner.validated else "0", esr.inner.gazetteer_type or "", inner_typing)
        )
    rows.sort(key=lambda r: (r[1], r[3]))
    return rows


def cmd_annotate(config: PipelineConfig) -> int:
    _check_exists(config, ["corpus_dir"])
    lexicon = _lexicon(config)
    introducers = frozenset(_word_list(config.introducers, "introducers_fr.txt"))
    relation_markers = _word_list(config.relation_markers, "relation_markers_fr.txt")
    gazetteer = None
    if config.gazetteer is not None:
        gazetteer = sa.Gazetteer.from_tsv(config.gazetteer.read_text(encoding="utf-8"))
    ontology = None
    term_index = None
    if config.ontology_in is not None:
        ontology = deserialize(config.ontology_in.read_bytes())
        term_index = sa.concept_term_index(ontology)

    documents = sorted(p for p in Path(config.corpus_dir).glob("*.txt"))
    rows = []
    all_esas = []
    failures = 0
    for doc in documents:
        try:
            text = doc.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            print(f"warning: skipped {doc.name}: {exc}", file=sys.stderr)
            failures += 1
            continue
        tokens = tag(tokenize(text), lexicon)
        annotation = sa.annotate_tokens(
            tokens, introducers, relation_markers, gazetteer, ontology, term_index
        )
        rows.extend(_dump_rows(doc.name, tokens, annotation))
        all_esas.extend(annotation.esas)
    if documents and failures == len(documents):
        print("error: no document could be read", file=sys.stderr)
        return 1

    dump = "".join("\t".join(str(v) for v in row) + "\n" for row in rows)
    _write(config.annotations_out, dump)
    associations = sa.extract_term_associations(all_esas)
    association_text = "".join(
        f"{a.toponym}\t{a.term}\t{a.occurrences}\t{1 if a.toponym_validated else 0}\n"
        for a in associations
    )
    _write(config.associations_out, association_text)
    esa_rows = [r for r in rows if r[3] == "ESA"]
    print(
        f"annotate: {len(documents) - failures} documents, {len(esa_rows)} absolute entities, "
        f"{sum(1 for r in rows if r[3] == 'ESR')} relative entities, "
        f"{sum(1 for r in esa_rows if r[6] == '1')} validated, "
        f"{sum(a.occurrences for a in associations)} term occurrences",
        file=sys.stderr,
    )
    return 0


def _read_associations(path: Path) -> list[tuple[str, str, int, bool]]:
    out = []
    for number, line in enumerate(path.read_text(encoding="utf-8").split("\n"), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise ConfigError(f"{path}:{number}: bad association row")
        out.append((parts[0], parts[1], int(parts[2]), parts[3] == "1"))
    return out


def cmd_enrich(config: PipelineConfig) -> int:
    _check_exists(config, ["ontology_in", "thesaurus", "associations_out"])
    ontology = deserialize(config.ontology_in.read_bytes())
    vocabulary = th.parse_thesaurus(config.thesaurus.read_text(encoding="utf-8"))
    if config.geo_markers is not None:
        # keep only entries carrying a geographic sense
        markers = {
            line.strip()
            for line in config.geo_markers.read_text(encoding="utf-8").split("\n")
            if line.strip() and not line.lstrip().startswith("#")
        }
        flagged = th.geographic_sense_filter(vocabulary, markers)
        filtered = th.Thesaurus()
        for entry in vocabulary.entries:
            if entry.label in flagged:
                filtered.add(entry)
        vocabulary = filtered
    rows = _read_associations(config.associations_out)
    totals: dict[str, int] = {}
    for _toponym, term, count, validated in rows:
        if validated or config.include_unvalidated:
            totals[term] = totals.get(term, 0) + count
    qualifiers = sorted(totals.items())
    enriched, decisions = th.enrich(
        ontology,
        qualifiers,
        vocabulary,
        min_equivalences=config.min_equivalences,
        static_clusters=config.static_clusters,
    )
    enriched.validate()
    if config.ontology_out is not None:
        config.ontology_out.parent.mkdir(parents=True, exist_ok=True)
        config.ontology_out.write_bytes(serialize(enriched))
    _write(config.decisions_out, th.decisions_to_tsv(decisions))
    attached = sum(1 for d in decisions if d.outcome is th.EnrichmentOutcome.ATTACHED)
    print(f"enrich: {attached}/{len(decisions)} qualifiers attached", file=sys.stderr)
    return 0


@dataclass
class PopulationStats:
    esa_occurrences: int = 0
    esa_distinct: int = 0
    term_occurrences: int = 0
    term_distinct: int = 0
    term_occurrences_common: int = 0
    term_occurrences_different: int = 0
    term_distinct_common: int = 0
    term_distinct_different: int = 0
    typed_occurrences: int = 0
    typed_distinct: int = 0
    typed_occurrence_rate: float = 0.0
    typed_distinct_rate: float = 0.0


@dataclass
class CorpusStats:
    candidates: PopulationStats
    validated: PopulationStats


def compute_stats(dump_text: str, ontology: Ontology | None) -> CorpusStats:
    """Recount the annotation dump; a row is typed when it carries a concept
    or a determinate gazetteer type."""
    known = set(sa.concept_term_index(ontology)) if ontology is not None else set()
    rows = []
    for line in dump_text.split("\n"):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 9 or parts[3] != "ESA":
            continue
        rows.append(parts)

    def population(selected) -> PopulationStats:
        stats = PopulationStats()
        toponyms: set[str] = set()
        typed_toponyms: set[str] = set()
        terms: set[str] = set()
        common_terms: set[str] = set()
        for parts in selected:
            _doc, _s, _e, _k, term, toponym, _validated, gtype, concept = parts
            key = toponym.casefold()
            stats.esa_occurrences += 1
            toponyms.add(key)
            typed = bool(concept) or bool(gtype)
            if typed:
                stats.typed_occurrences += 1
                typed_toponyms.add(key)
            if term:
                stats.term_occurrences += 1
                normalized = th.normalize_term(term)
                terms.add(normalized)
                if normalized in known:
                    stats.term_occurrences_common += 1
                    common_terms.add(normalized)
                else:
                    stats.term_occurrences_different += 1
        stats.esa_distinct = len(toponyms)
        stats.typed_distinct = len(typed_toponyms)
        stats.term_distinct = len(terms)
        stats.term_distinct_common = len(common_terms)
        stats.term_distinct_different = len(terms - common_terms)
        if stats.esa_occurrences:
            stats.typed_occurrence_rate = stats.typed_occurrences / stats.esa_occurrences
        if stats.esa_distinct:
            stats.typed_distinct_rate = stats.typed_distinct / stats.esa_distinct
        return stats

    return CorpusStats(
        candidates=population(rows),
        validated=population([r for r in rows if r[6] == "1"]),
    )


def stats_to_tsv(stats: CorpusStats) -> str:
    rows = []
    for name, population in (("candidate", stats.candidates), ("validated", stats.validated)):
        for f in fields(PopulationStats):
            value = getattr(population, f.name)
            text = f"{value:.6f}" if isinstance(value, float) else str(value)
            rows.append(f"{name}\t{f.name}\t{text}")
    return "".join(row + "\n" for row in rows)


def cmd_stats(config: PipelineConfig) -> int:
    _check_exists(config, ["annotations_out"])
    ontology = None
    if config.ontology_in is not None:
        ontology = deserialize(config.ontology_in.read_bytes())
    dump_text = config.annotations_out.read_text(encoding="utf-8")
    stats = compute_stats(dump_text, ontology)
    _write(config.stats_out, stats_to_tsv(stats))
    for name, population in (("candidates", stats.candidates), ("validated", stats.validated)):
        print(
            f"{name}: {population.esa_occurrences} occurrences ({population.esa_distinct} distinct), "
            f"{population.term_occurrences} associated terms ({population.term_distinct} distinct, "
            f"{population.term_distinct_common} common / {population.term_distinct_different} different), "
            f"typed {population.typed_distinct_rate:.1%} distinct / {population.typed_occurrence_rate:.1%} occurrences",
            file=sys.stderr,
        )
    return 0


def cmd_export_triples(config: PipelineConfig) -> int:
    _check_exists(config, ["ontology_in"])
    ontology = deserialize(config.ontology_in.read_bytes())
    _write(config.triples_out, export_triples(ontology))
    return 0


# ----------------------------------------------------------------- entrypoint


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ontogeo", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("build", "annotate", "enrich", "stats", "export-triples"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, type=Path)
        p.add_argument("--ontology-in", type=Path, default=None)
        p.add_argument("--ontology-out", type=Path, default=None)
        if name == "enrich":
            p.add_argument("--min-equivalences", type=int, default=None)
            p.add_argument("--static-clusters", action="store_true", default=None)
            p.add_argument("--include-unvalidated", action="store_true", default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        config = load_config(args.config)
        for attribute in ("ontology_in", "ontology_out"):
            value = getattr(args, attribute, None)
            if value is not None:
                setattr(config, attribute, value)
        for attribute in ("min_equivalences", "static_clusters", "include_unvalidated"):
            value = getattr(args, attribute, None)
            if value is not None:
                setattr(config, attribute, value)
        command = {
            "build": cmd_build,
            "annotate": cmd_annotate,
            "enrich": cmd_enrich,
            "stats": cmd_stats,
            "export-triples": cmd_export_triples,
        }[args.command]
        return command(config)
    except (
        ConfigError,
        ingest.IngestError,
        th.ThesaurusError,
        sa.GazetteerError,
        OntologyError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
