"""Text-level machinery for dynamic label templates.

Templates are plain sentences with `{THEMATIC_LABEL}` placeholders, e.g.

    '{PERSON} travels by {TRANSPORTATION} from {DEPARTURE_LOCATION} to
     {DESTINATION_LOCATION} on the {DATETIME}'

This module parses them, renders them with bound values (eliding unbound
optional slots together with their connective words), synthesizes the
per-category sentence variants, and turns declaratives into questions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import MissingRequiredBinding

_PLACEHOLDER = re.compile(r"\{([^{}]+)\}")

# Words that glue a placeholder to the sentence and disappear with it.
CONNECTIVES = {
    "a", "an", "the", "by", "from", "to", "on", "at", "in", "with", "of",
    "for", "into", "onto", "via", "as", "about",
}

# Prepositions whose OWL property reading differs from the surface word.
_PREPOSITION_CANON = {"by": "with"}

_IRREGULAR_VERBS = {"has": "have", "is": "be", "does": "do", "goes": "go", "was": "be"}


@dataclass
class Segment:
    leading: str
    placeholder: str


@dataclass
class ParsedTemplate:
    segments: list[Segment]
    trailing: str

    def placeholders(self) -> list[str]:
        return [s.placeholder for s in self.segments]


def parse_template(template: str) -> ParsedTemplate:
    segments: list[Segment] = []
    last = 0
    for match in _PLACEHOLDER.finditer(template):
        segments.append(Segment(template[last : match.start()], match.group(1)))
        last = match.end()
    return ParsedTemplate(segments, template[last:])


def strip_braces(template: str) -> str:
    return _PLACEHOLDER.sub(lambda m: m.group(1), template)


def bracify(sentence: str, labels: list[str]) -> str:
    """Wrap every occurrence of a thematic label in braces (longest label first)."""
    out = sentence
    for label in sorted(labels, key=len, reverse=True):
        out = re.sub(rf"(?<![\w{{]){re.escape(label)}(?![\w}}])", "{" + label + "}", out)
    return out


def deinflect(verb: str) -> str:
    """Base form of a regular third-person-singular verb ('travels' -> 'travel')."""
    if verb in _IRREGULAR_VERBS:
        return _IRREGULAR_VERBS[verb]
    if verb.endswith("ies") and len(verb) > 3:
        return verb[:-3] + "y"
    for suffix in ("sses", "shes", "ches", "xes", "zes", "oes"):
        if verb.endswith(suffix):
            return verb[:-2]
    if verb.endswith("s") and not verb.endswith("ss"):
        return verb[:-1]
    return verb


def _tokens(text: str) -> list[str]:
    return [t for t in re.split(r"\s+", text.strip()) if t]


def non_connective_prefix(text: str) -> str:
    """Drop the trailing run of connective words ('travels by' -> 'travels')."""
    tokens = _tokens(text)
    while tokens and tokens[-1].lower() in CONNECTIVES:
        tokens.pop()
    return " ".join(tokens)


def render(
    template: str,
    values: dict[str, str | None],
    required: set[str] | None = None,
    subject_label: str | None = None,
) -> str:
    """Interpolate values, eliding unbound optional placeholders.

    An unbound placeholder disappears together with its leading connective
    words. The verb lives in the segment of the first object placeholder after
    the subject; it survives elision so later objects still read as a sentence.
    """
    required = required or set()
    parsed = parse_template(template)
    first_object_index = None
    if subject_label is not None:
        for i, seg in enumerate(parsed.segments):
            if seg.placeholder == subject_label:
                first_object_index = i + 1 if i + 1 < len(parsed.segments) else None
                break

    out: list[str] = []
    for i, seg in enumerate(parsed.segments):
        value = values.get(seg.placeholder)
        if value is not None:
            out.append(seg.leading)
            out.append(value)
        else:
            if seg.placeholder in required:
                raise MissingRequiredBinding(
                    f"no value bound for required placeholder {seg.placeholder!r}"
                )
            if i == first_object_index:
                kept = non_connective_prefix(seg.leading)
                if kept:
                    out.append(" " + kept)
    out.append(parsed.trailing)
    return re.sub(r"\s+", " ", "".join(out)).strip()


def synthesize_category_templates(
    template: str, subject_label: str, resource_labels: set[str]
) -> dict[str, str]:
    """Build the four category sentence variants from a base template.

    For a has-part base template this yields
      assertional:  'This {SUBJECT} has part this {PART}'
      contingent:   'A {SUBJECT} can have part some {PART}'
      prototypical: 'A {SUBJECT} typically has part some {PART}'
      universal:    'Every {SUBJECT} necessarily has part some {PART}'
    """
    parsed = parse_template(template)

    def rebuild(subject_prefix, verb_transform, object_prefix):
        parts: list[str] = []
        seen_subject = False
        first_object_after_subject = True
        for seg in parsed.segments:
            leading = seg.leading
            if seg.placeholder == subject_label:
                parts.append(leading)
                parts.append(subject_prefix + "{" + seg.placeholder + "}")
                seen_subject = True
                continue
            if seen_subject and first_object_after_subject:
                tokens = _tokens(leading)
                if tokens:
                    tokens[0] = verb_transform(tokens[0])
                    leading = " " + " ".join(tokens) + (" " if leading.endswith(" ") else "")
                first_object_after_subject = False
            parts.append(leading)
            prefix = object_prefix if seg.placeholder in resource_labels else ""
            parts.append(prefix + "{" + seg.placeholder + "}")
        parts.append(parsed.trailing)
        return re.sub(r"\s+", " ", "".join(parts)).strip()

    return {
        "assertional": rebuild("This ", lambda v: v, "this "),
        "contingent": rebuild("A ", lambda v: "can " + deinflect(v), "some "),
        "prototypical": rebuild("A ", lambda v: "typically " + v, "some "),
        "universal": rebuild("Every ", lambda v: "necessarily " + v, "some "),
    }


def interrogative(template: str, subject_label: str) -> str:
    """Default question form: 'Did {SUBJECT} <base verb> ...?'."""
    parsed = parse_template(template)
    parts: list[str] = []
    seen_subject = False
    verb_done = False
    for seg in parsed.segments:
        leading = seg.leading
        if seg.placeholder == subject_label and not seen_subject:
            parts.append("Did ")
            parts.append("{" + seg.placeholder + "}")
            seen_subject = True
            continue
        if seen_subject and not verb_done:
            tokens = _tokens(leading)
            if tokens:
                tokens[0] = deinflect(tokens[0])
                leading = " " + " ".join(tokens) + (" " if leading.endswith(" ") else "")
                verb_done = True
        parts.append(leading)
        parts.append("{" + seg.placeholder + "}")
    trailing = parsed.trailing.rstrip(" .")
    parts.append(trailing)
    return re.sub(r"\s+", " ", "".join(parts)).strip() + "?"


def owl_property_names(template: str, subject_label: str) -> dict[str, str]:
    """Derive one OWL property name per placeholder from the label sentence.

    The verb is the first word after the subject slot; each object's property
    is the verb plus the capitalized last meaningful word before that slot
    ('travels' + 'to' -> 'travelsTo', with 'by' reading as 'with').
    """
    parsed = parse_template(template)
    names: dict[str, str] = {}
    verb = None
    seen_subject = False
    for seg in parsed.segments:
        if seg.placeholder == subject_label:
            seen_subject = True
            continue
        tokens = [t for t in _tokens(seg.leading) if t.lower() not in ("a", "an", "the")]
        if seen_subject and verb is None and tokens:
            verb = tokens[0]
            tokens = tokens[1:]
        key = tokens[-1] if tokens else ""
        key = _PREPOSITION_CANON.get(key.lower(), key)
        stem = verb or ""
        if key:
            camel = key[0].upper() + key[1:]
            names[seg.placeholder] = f"{stem}{camel}" if stem else key
        else:
            names[seg.placeholder] = stem or seg.placeholder.lower()
    return names
