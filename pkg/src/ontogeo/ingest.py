"""XML structure mining: declarative tag-configuration rules turn the nesting
of a specification document into concepts and relations.

A rule names an enclosing tag plus a source and (optionally) a target tag
under its scope and says what the pair means: hyponymy, associated term,
definition field or a named relation.  Rule files are written by whoever
knows the corpus; defaults matching the usual class/className/valueName and
package/classe layouts ship with the package.
"""

from __future__ import annotations

import xml.parsers.expat
from dataclasses import dataclass, field
from enum import Enum

from .ontology import (
    EmptyNameError,
    InvalidNameError,
    Ontology,
    Origin,
    TOP,
    named,
)


class IngestError(Exception):
    pass


class XmlSyntaxError(IngestError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class RuleSyntaxError(IngestError):
    def __init__(self, message: str, line: int):
        super().__init__(f"rule file line {line}: {message}")
        self.line = line


@dataclass
class StructureNode:
    """One XML element: tag, its own text (whitespace-collapsed), children."""

    tag: str
    text_content: str = ""
    children: list["StructureNode"] = field(default_factory=list)
    byte_offset: int = 0


def parse_spec(data: bytes | str) -> StructureNode:
    """Parse a specification document into an element tree.

    Attributes are ignored; the formats handled here carry all content in
    element text.
    """
    if isinstance(data, str):
        data = data.encode("utf-8")
    parser = xml.parsers.expat.ParserCreate("UTF-8")
    root: list[StructureNode] = []
    stack: list[StructureNode] = []
    buffers: list[list[str]] = []

    def start(tag, attrs):
        node = StructureNode(tag=tag, byte_offset=parser.CurrentByteIndex)
        if stack:
            stack[-1].children.append(node)
        else:
            root.append(node)
        stack.append(node)
        buffers.append([])

    def chars(content):
        if stack:
            buffers[-1].append(content)

    def end(tag):
        node = stack.pop()
        raw = "".join(buffers.pop())
        node.text_content = " ".join(raw.split())

    parser.StartElementHandler = start
    parser.EndElementHandler = end
    parser.CharacterDataHandler = chars
    try:
        parser.Parse(data, True)
    except xml.parsers.expat.ExpatError as exc:
        message = xml.parsers.expat.errors.messages[exc.code]
        raise XmlSyntaxError(message, exc.lineno, exc.offset + 1) from None
    if not root:
        raise XmlSyntaxError("document has no root element", 1, 1)
    return root[0]


class Action(Enum):
    HYPONYMY = "hyponymy"
    ASSOCIATED_TERM = "term"
    DEFINITION_FIELD = "definition"
    NAMED_RELATION = "named"


@dataclass(frozen=True)
class ExtractionRule:
    scope_tag: str
    source_tag: str
    target_tag: str
    action: Action
    label: str | None = None  # only for named relations


def parse_rules(text: str) -> list[ExtractionRule]:
    """Read a rule file: one `scope<TAB>source<TAB>target<TAB>action` per line.

    The target may be empty for hyponymy rules (the source concept is created
    with no children).  Actions: hyponymy, term, definition, named:<label>.
    """
    rules: list[ExtractionRule] = []
    definition_scopes: set[str] = set()
    for number, line in enumerate(text.split("\n"), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = line.rstrip("\n").split("\t")
        if len(fields) != 4:
            raise RuleSyntaxError(f"expected 4 tab-separated fields, got {len(fields)}", number)
        scope, source, target, action_text = (f.strip() for f in fields)
        if not scope or not source:
            raise RuleSyntaxError("scope and source tags must be non-empty", number)
        label = None
        if action_text.startswith("named:"):
            label = action_text[len("named:"):]
            if not label:
                raise RuleSyntaxError("named relation needs a label", number)
            action = Action.NAMED_RELATION
        else:
            try:
                action = Action(action_text)
            except ValueError:
                raise RuleSyntaxError(f"unknown action {action_text!r}", number) from None
        if action is not Action.HYPONYMY and not target:
            raise RuleSyntaxError(f"action {action.value!r} needs a target tag", number)
        if action is Action.DEFINITION_FIELD:
            if scope in definition_scopes:
                raise RuleSyntaxError(f"second definition rule for scope {scope!r}", number)
            definition_scopes.add(scope)
        rules.append(ExtractionRule(scope, source, target, action, label))
    return rules


@dataclass
class QueuedDefinition:
    concept: str
    text: str
    tag_path: str
    byte_offset: int


@dataclass
class IngestReport:
    """Everything a run created, with provenance back into the document."""

    concepts_created: list[tuple[str, str, int]] = field(default_factory=list)
    relations_created: list[tuple[str, str, str, str, int]] = field(default_factory=list)
    terms_added: list[tuple[str, str, str, int]] = field(default_factory=list)
    definitions: list[QueuedDefinition] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def extend(self, other: "IngestReport") -> None:
        self.concepts_created.extend(other.concepts_created)
        self.relations_created.extend(other.relations_created)
        self.terms_added.extend(other.terms_added)
        self.definitions.extend(other.definitions)
        self.warnings.extend(other.warnings)

    def to_tsv(self) -> str:
        rows = []
        for cid, path, offset in self.concepts_created:
            rows.append(f"concept\t{cid}\t\t{path}\t{offset}")
        for source, kind, target, path, offset in self.relations_created:
            rows.append(f"relation\t{source}\t{kind} {target}\t{path}\t{offset}")
        for cid, term, path, offset in self.terms_added:
            rows.append(f"term\t{cid}\t{term}\t{path}\t{offset}")
        for queued in self.definitions:
            rows.append(f"definition\t{queued.concept}\t{queued.text}\t{queued.tag_path}\t{queued.byte_offset}")
        for message in self.warnings:
            rows.append(f"warning\t{message}\t\t\t")
        return "".join(row + "\n" for row in rows)


def apply_rules(tree: StructureNode, rules: list[ExtractionRule], ontology: Ontology) -> IngestReport:
    """Walk the element tree and apply every rule whose scope tag matches.

    Concepts minted by an element become the attachment point for concepts
    minted inside it, which is what turns tag nesting into the is-a chain.
    All created material carries origin `structure`.
    """
    by_scope: dict[str, list[ExtractionRule]] = {}
    for rule in rules:
        by_scope.setdefault(rule.scope_tag, []).append(rule)
    report = IngestReport()

    def add_concept(parent: str, text: str, path: str, offset: int) -> str | None:
        try:
            before = len(ontology.concepts)
            cid = ontology.add_concept(parent, text, Origin.STRUCTURE)
        except (EmptyNameError, InvalidNameError) as exc:
            report.warnings.append(f"{path}: rejected concept name {text!r} ({exc})")
            return None
        if len(ontology.concepts) > before:
            report.concepts_created.append((cid, path, offset))
            report.relations_created.append((cid, "isa", parent, path, offset))
        return cid

    def walk(node: StructureNode, anchor: str, parent_path: str) -> None:
        path = f"{parent_path}/{node.tag}"
        minted: list[str] = []      # concepts created or located here, in order
        tag_map: dict[str, list[str]] = {}

        def resolve_source(rule: ExtractionRule) -> str | None:
            known = tag_map.get(rule.source_tag)
            if known:
                return known[0]
            sources = [c for c in node.children if c.tag == rule.source_tag and c.text_content]
            if not sources:
                report.warnings.append(
                    f"{path}: scope {rule.scope_tag!r} matched but source tag "
                    f"{rule.source_tag!r} is missing; element skipped"
                )
                return None
            cid = add_concept(anchor, sources[0].text_content, path, sources[0].byte_offset)
            if cid is not None:
                tag_map.setdefault(rule.source_tag, []).append(cid)
                minted.append(cid)
            return cid

        def target_children(rule: ExtractionRule):
            for child in node.children:
                if child.tag != rule.target_tag:
                    continue
                if not child.text_content:
                    report.warnings.append(f"{path}/{child.tag}: empty target element ignored")
                    continue
                yield child

        for rule in by_scope.get(node.tag, ()):
            if rule.action is Action.HYPONYMY:
                source = resolve_source(rule)
                if source is None or not rule.target_tag:
                    continue
                for child in target_children(rule):
                    cid = add_concept(source, child.text_content, f"{path}/{child.tag}", child.byte_offset)
                    if cid is not None:
                        tag_map.setdefault(rule.target_tag, []).append(cid)
                        minted.append(cid)
            elif rule.action is Action.ASSOCIATED_TERM:
                source = resolve_source(rule)
                if source is None:
                    continue
                for child in target_children(rule):
                    if ontology.add_associated_term(source, child.text_content):
                        report.terms_added.append(
                            (source, child.text_content.strip(), f"{path}/{child.tag}", child.byte_offset)
                        )
            elif rule.action is Action.DEFINITION_FIELD:
                texts = list(target_children(rule))
                if not texts:
                    continue
                owner = minted[-1] if minted else resolve_source(rule)
                if owner is None:
                    continue
                for child in texts:
                    if not ontology.set_definition(owner, child.text_content):
                        report.warnings.append(
                            f"{path}/{child.tag}: {owner!r} already has a definition; extra one queued only"
                        )
                    report.definitions.append(
                        QueuedDefinition(owner, child.text_content, f"{path}/{child.tag}", child.byte_offset)
                    )
            elif rule.action is Action.NAMED_RELATION:
                source = resolve_source(rule)
                if source is None:
                    continue
                for child in target_children(rule):
                    text = child.text_content
                    existing = sorted(
                        cid for cid, c in ontology.concepts.items()
                        if cid != TOP and c.display_name == text
                    )
                    target = existing[0] if existing else add_concept(
                        TOP, text, f"{path}/{child.tag}", child.byte_offset
                    )
                    if target is None:
                        continue
                    kind = named(rule.label or "")
                    if ontology.add_relation(source, target, kind, Origin.STRUCTURE):
                        report.relations_created.append(
                            (source, kind.as_text(), target, f"{path}/{child.tag}", child.byte_offset)
                        )

        next_anchor = minted[0] if minted else anchor
        for child in node.children:
            walk(child, next_anchor, path)

    walk(tree, TOP, "")
    return report
