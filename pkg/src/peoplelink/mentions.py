"""Person-mention detection: standoff adapters plus profile-driven rules.

A base annotator (externally produced standoff files, or the built-in
heuristic) proposes PERSON spans; the rule features then add mentions the
base missed (bare first/middle/last names, stage names and nicknames) and
widen spans with honorific titles and "<name> of <place>" constructions.
Overlaps are resolved by a fixed longest-span-wins policy.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

from .corpus import Document, PersonProfile
from .errors import (
    FixedPointExceededError,
    MalformedStandoffError,
    SpanOutOfRangeError,
)

MAX_WIDENING_PASSES = 8


class MentionKind(enum.Enum):
    NAME = "NAME"
    PRONOUN = "PRONOUN"


class MentionSource(enum.Enum):
    BASE_NER = "BASE_NER"
    BASE_COREF = "BASE_COREF"
    RULE_NAME_PART = "RULE_NAME_PART"
    RULE_TITLE = "RULE_TITLE"
    RULE_NAME_OF_PLACE = "RULE_NAME_OF_PLACE"
    RULE_ALIAS = "RULE_ALIAS"
    GENDER_SIEVE = "GENDER_SIEVE"


class NerLabel(enum.Enum):
    PERSON = "PERSON"
    LOCATION = "LOCATION"
    OTHER = "OTHER"


# Tie-break order for overlapping spans of equal length; lower wins.
_SOURCE_PRIORITY = {
    MentionSource.RULE_NAME_OF_PLACE: 0,
    MentionSource.RULE_TITLE: 1,
    MentionSource.RULE_ALIAS: 2,
    MentionSource.RULE_NAME_PART: 3,
    MentionSource.BASE_NER: 4,
    MentionSource.BASE_COREF: 5,
    MentionSource.GENDER_SIEVE: 6,
}


@dataclass(frozen=True)
class MentionSpan:
    """A contiguous token span tagged as a person name or pronoun.

    ``subject_hint`` is set when a rule attributes the span to the page
    subject.  ``chain_rep`` carries the representative span of the coref
    chain a BASE_COREF pronoun came from, so link inheritance can find its
    antecedent later.
    """

    start: int
    end: int
    kind: MentionKind
    source: MentionSource
    subject_hint: str | None = None
    chain_rep: tuple[int, int] | None = None

    def length(self) -> int:
        return self.end - self.start

    def overlaps(self, other: "MentionSpan") -> bool:
        return self.start < other.end and other.start < self.end


@dataclass(frozen=True)
class NerSpan:
    start: int
    end: int
    label: NerLabel


@dataclass(frozen=True)
class ChainSpan:
    start: int
    end: int
    is_pronoun: bool
    representative: bool


@dataclass(frozen=True)
class StandoffAnnotations:
    """Base-annotator output aligned to a document by token index."""

    ner_spans: tuple[NerSpan, ...]
    coref_chains: tuple[tuple[ChainSpan, ...], ...]

    @classmethod
    def empty(cls) -> "StandoffAnnotations":
        return cls((), ())


def default_title_list() -> frozenset[str]:
    """The shipped honorific title list."""
    text = resources.files("peoplelink").joinpath("data/titles.txt").read_text("utf-8")
    return _parse_title_list(text)


def load_title_list(path: str | Path) -> frozenset[str]:
    return _parse_title_list(Path(path).read_text("utf-8"))


def _parse_title_list(text: str) -> frozenset[str]:
    entries = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.add(line)
    return frozenset(entries)


def _check_bounds(start, end, token_count: int) -> None:
    if not (0 <= start and end <= token_count):
        raise SpanOutOfRangeError((start, end), token_count)


def _as_index(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedStandoffError(f"{what} must be an integer, got {value!r}")
    return value


def load_standoff(data: bytes, doc: Document) -> StandoffAnnotations:
    """Parse and validate a standoff annotation file against ``doc``.

    The format is ``{"ner": [[start, end, "LABEL"], ...], "coref":
    [[[start, end, is_pronoun, representative], ...], ...]}`` with
    token-based, end-exclusive indices.  Labels other than PERSON or
    LOCATION map to OTHER.
    """
    try:
        obj = json.loads(data)
    except ValueError as exc:
        raise MalformedStandoffError(f"not valid JSON: {exc}") from None
    if not isinstance(obj, dict) or "ner" not in obj or "coref" not in obj:
        raise MalformedStandoffError('expected an object with "ner" and "coref" keys')

    n = len(doc.tokens)
    ner_spans = []
    if not isinstance(obj["ner"], list):
        raise MalformedStandoffError('"ner" must be a list')
    for entry in obj["ner"]:
        if not isinstance(entry, list) or len(entry) != 3:
            raise MalformedStandoffError(f"ner entry must be [start, end, label]: {entry!r}")
        start = _as_index(entry[0], "ner start")
        end = _as_index(entry[1], "ner end")
        if not isinstance(entry[2], str):
            raise MalformedStandoffError(f"ner label must be a string: {entry[2]!r}")
        if start >= end:
            raise MalformedStandoffError(f"empty or inverted ner span: {entry!r}")
        _check_bounds(start, end, n)
        try:
            label = NerLabel(entry[2].upper())
        except ValueError:
            label = NerLabel.OTHER
        ner_spans.append(NerSpan(start, end, label))

    chains = []
    if not isinstance(obj["coref"], list):
        raise MalformedStandoffError('"coref" must be a list')
    for chain in obj["coref"]:
        if not isinstance(chain, list) or not chain:
            raise MalformedStandoffError("coref chain must be a non-empty list")
        members = []
        for entry in chain:
            if not isinstance(entry, list) or len(entry) != 4:
                raise MalformedStandoffError(
                    f"chain member must be [start, end, is_pronoun, representative]: {entry!r}"
                )
            start = _as_index(entry[0], "chain start")
            end = _as_index(entry[1], "chain end")
            if not isinstance(entry[2], bool) or not isinstance(entry[3], bool):
                raise MalformedStandoffError(f"chain flags must be booleans: {entry!r}")
            if start >= end:
                raise MalformedStandoffError(f"empty or inverted chain span: {entry!r}")
            _check_bounds(start, end, n)
            if entry[2] and end != start + 1:
                raise MalformedStandoffError(
                    f"pronoun chain member must cover exactly one token: {entry!r}"
                )
            members.append(ChainSpan(start, end, entry[2], entry[3]))
        if not any(m.representative for m in members):
            raise MalformedStandoffError("coref chain has no representative span")
        chains.append(tuple(members))

    return StandoffAnnotations(tuple(ner_spans), tuple(chains))


def _capitalized(text: str) -> bool:
    return bool(text) and text[0].isupper()


def _profile_vocabulary(profile: PersonProfile) -> set[str]:
    vocab = {p.lower() for p in profile.name_parts()}
    for alias in profile.aliases:
        vocab.update(part.lower() for part in alias.split())
    vocab.update(n.lower() for n in profile.nicknames)
    return vocab


def heuristic_base_ner(doc: Document, profile: PersonProfile) -> StandoffAnnotations:
    """Built-in fallback base annotator for when no standoff file exists.

    Marks each maximal run of capitalized tokens containing at least one
    profile name part, alias token or nickname as a PERSON span.  Produces
    no coreference chains.
    """
    vocab = _profile_vocabulary(profile)
    spans = []
    i, n = 0, len(doc.tokens)
    while i < n:
        if _capitalized(doc.tokens[i].text):
            j = i
            while j < n and _capitalized(doc.tokens[j].text):
                j += 1
            if any(doc.tokens[k].text.lower() in vocab for k in range(i, j)):
                spans.append(NerSpan(i, j, NerLabel.PERSON))
            i = j
        else:
            i += 1
    return StandoffAnnotations(tuple(spans), ())


def rule_name_part(doc: Document, profile: PersonProfile) -> list[MentionSpan]:
    """One-token NAME spans for capitalized exact matches of a name part."""
    names = set(profile.name_parts())
    spans = []
    for tok in doc.tokens:
        if tok.text in names and _capitalized(tok.text):
            spans.append(
                MentionSpan(
                    tok.doc_index,
                    tok.doc_index + 1,
                    MentionKind.NAME,
                    MentionSource.RULE_NAME_PART,
                    subject_hint=profile.wiki_title,
                )
            )
    return spans


def rule_title(
    doc: Document,
    spans: list[MentionSpan],
    titles: frozenset[str] | None = None,
) -> list[MentionSpan]:
    """Widen NAME spans preceded by a capitalized honorific title.

    One widening step per call; the originals stay in the output and are
    superseded by :func:`merge_spans`.
    """
    if titles is None:
        titles = default_title_list()
    out = list(spans)
    for span in spans:
        if span.kind is not MentionKind.NAME:
            continue
        p = span.start - 1
        if p >= 0 and doc.tokens[p].text in titles and _capitalized(doc.tokens[p].text):
            out.append(replace(span, start=p, source=MentionSource.RULE_TITLE))
    return out


def rule_name_of_place(
    doc: Document,
    spans: list[MentionSpan],
    annotations: StandoffAnnotations,
) -> list[MentionSpan]:
    """Widen ``<name> of <location>`` into a single NAME span."""
    locations = [s for s in annotations.ner_spans if s.label is NerLabel.LOCATION]
    out = list(spans)
    for span in spans:
        if span.kind is not MentionKind.NAME:
            continue
        if not _capitalized(doc.tokens[span.start].text):
            continue
        of_idx = span.end
        if of_idx >= len(doc.tokens) or doc.tokens[of_idx].text != "of":
            continue
        for loc in locations:
            if loc.start == of_idx + 1:
                out.append(
                    replace(span, end=loc.end, source=MentionSource.RULE_NAME_OF_PLACE)
                )
    return out


def rule_alias(doc: Document, profile: PersonProfile) -> list[MentionSpan]:
    """NAME spans for stage names (aliases) and nicknames of the subject.

    Aliases match as whitespace-split token sequences, longest first;
    nicknames match single capitalized tokens.
    """
    alias_seqs = sorted(
        {tuple(a.split()) for a in profile.aliases if a.split()},
        key=lambda s: (-len(s), s),
    )
    nicknames = set(profile.nicknames)
    texts = [t.text for t in doc.tokens]
    spans = []
    i, n = 0, len(texts)
    while i < n:
        matched = 0
        if _capitalized(texts[i]):
            for seq in alias_seqs:
                if tuple(texts[i : i + len(seq)]) == seq:
                    matched = len(seq)
                    break
            if not matched and texts[i] in nicknames:
                matched = 1
        if matched:
            spans.append(
                MentionSpan(
                    i,
                    i + matched,
                    MentionKind.NAME,
                    MentionSource.RULE_ALIAS,
                    subject_hint=profile.wiki_title,
                )
            )
            i += matched
        else:
            i += 1
    return spans


def merge_spans(candidates: list[MentionSpan]) -> list[MentionSpan]:
    """Resolve overlaps: longest span wins, ties break by source priority
    (name-of-place > title > alias > name-part > base), then smaller start.
    Output is sorted by start and pairwise non-overlapping.
    """
    ordered = sorted(
        candidates,
        key=lambda s: (
            -(s.end - s.start),
            _SOURCE_PRIORITY[s.source],
            s.start,
            s.end,
            s.kind.value,
            s.subject_hint or "",
        ),
    )
    chosen: list[MentionSpan] = []
    for span in ordered:
        if all(not span.overlaps(kept) for kept in chosen):
            chosen.append(span)
    chosen.sort(key=lambda s: s.start)
    return chosen


def detect_mentions(
    doc: Document,
    profile: PersonProfile,
    annotations: StandoffAnnotations,
    titles: frozenset[str] | None = None,
) -> list[MentionSpan]:
    """Full name-mention detection for one document.

    Merges base PERSON spans with the name-part and alias rules, then
    applies title and name-of-place widening until a fixed point.
    """
    candidates = [
        MentionSpan(s.start, s.end, MentionKind.NAME, MentionSource.BASE_NER)
        for s in annotations.ner_spans
        if s.label is NerLabel.PERSON
    ]
    candidates += rule_name_part(doc, profile)
    candidates += rule_alias(doc, profile)
    spans = merge_spans(candidates)
    for _ in range(MAX_WIDENING_PASSES):
        widened = rule_title(doc, spans, titles)
        widened = rule_name_of_place(doc, widened, annotations)
        merged = merge_spans(widened)
        if merged == spans:
            return merged
        spans = merged
    raise FixedPointExceededError(
        f"span widening did not stabilize within {MAX_WIDENING_PASSES} passes"
    )
