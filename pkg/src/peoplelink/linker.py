"""Mention-to-title linking backends and the baseline pipeline.

Two interchangeable named-mention linkers: Wikipedia search (top hit wins)
and a TagMe-style annotator (person-filtered, highest rho per span).  Both
have an online client and an offline fixture client; online responses go
through a persistent append-only cache.  Pronoun spans are linked separately
by inheritance: gender-sieve pronouns to the page subject, chain pronouns to
whatever their chain's representative was linked to.
"""

from __future__ import annotations

import enum
import json
import logging
import os
import threading
import time
import zlib
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path

import requests

from .coref import filter_pronoun_chains, prune_pronoun_spans
from .corpus import Document, PersonProfile
from .errors import CacheCorruptError, ClientUnavailableError
from .mentions import (
    MentionKind,
    MentionSource,
    MentionSpan,
    NerLabel,
    StandoffAnnotations,
    merge_spans,
)

log = logging.getLogger(__name__)

DEFAULT_LENGTH_LIMIT = 5000
DEFAULT_SEARCH_URL = "https://en.wikipedia.org/w/api.php"
DEFAULT_TAGME_URL = "https://tagme.d4science.org/tagme/tag"
TAGME_TOKEN_ENV = "TAGME_TOKEN"

# Category substrings that mark a Wikipedia page as being about a person.
_PERSON_CATEGORY_MARKERS = (" births", " deaths", "living people", "people from", "people of")


class LinkerId(enum.Enum):
    WIKISEARCH = "WIKISEARCH"
    TAGME = "TAGME"
    SIEVE_INHERIT = "SIEVE_INHERIT"


@dataclass(frozen=True)
class LinkedMention:
    span: MentionSpan
    title: str
    linker_id: LinkerId
    score: float | None = None


@dataclass(frozen=True)
class TagmeAnnotation:
    char_start: int
    char_end: int
    title: str
    rho: float
    is_person: bool


class SearchClient(ABC):
    """Given a query string, return an ordered list of page titles."""

    @abstractmethod
    def search(self, query: str) -> list[str]: ...


class TagmeClient(ABC):
    """Given a text, return entity annotations with character offsets."""

    @abstractmethod
    def annotate(self, text: str) -> list[TagmeAnnotation]: ...


class FixtureSearchClient(SearchClient):
    """Offline search backend over a query -> titles mapping.

    Counts its calls so tests can assert on request behavior.
    """

    def __init__(self, mapping: dict[str, list[str]]):
        self.mapping = dict(mapping)
        self.calls = 0

    @classmethod
    def from_file(cls, path: str | Path) -> "FixtureSearchClient":
        return cls(json.loads(Path(path).read_text("utf-8")))

    def search(self, query: str) -> list[str]:
        self.calls += 1
        return list(self.mapping.get(query, []))


class FixtureTagmeClient(TagmeClient):
    """Offline TagMe backend over a text -> annotation rows mapping.

    Each row is ``[char_start, char_end, title, rho, is_person]`` with
    offsets relative to the request text.
    """

    def __init__(self, mapping: dict[str, list]):
        self.mapping = dict(mapping)
        self.calls = 0
        self.requests: list[str] = []

    @classmethod
    def from_file(cls, path: str | Path) -> "FixtureTagmeClient":
        return cls(json.loads(Path(path).read_text("utf-8")))

    def annotate(self, text: str) -> list[TagmeAnnotation]:
        self.calls += 1
        self.requests.append(text)
        rows = self.mapping.get(text, [])
        return [TagmeAnnotation(r[0], r[1], r[2], float(r[3]), bool(r[4])) for r in rows]


class ResponseCache:
    """Append-only key/value store for API responses.

    One record per line: ``<byte length> <crc32> <json>`` where the JSON
    document is ``{"key": ..., "value": ...}``.  Later records win.  Torn or
    corrupted records are skipped with a warning and treated as misses.
    Safe for concurrent use within one process.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._entries: dict[str, object] = {}
        self.corrupt_records = 0
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            return
        for line_no, raw in enumerate(self.path.read_bytes().split(b"\n"), start=1):
            if not raw:
                continue
            try:
                key, value = self._parse_record(raw)
            except CacheCorruptError as exc:
                self.corrupt_records += 1
                log.warning("cache %s line %d: %s (treated as miss)", self.path, line_no, exc)
                continue
            self._entries[key] = value

    @staticmethod
    def _parse_record(raw: bytes):
        parts = raw.split(b" ", 2)
        if len(parts) != 3:
            raise CacheCorruptError("record is not '<length> <crc32> <json>'")
        length_field, crc_field, body = parts
        try:
            length = int(length_field)
            crc = int(crc_field, 16)
        except ValueError:
            raise CacheCorruptError("unparsable length or checksum field") from None
        if len(body) != length:
            raise CacheCorruptError(f"length mismatch: header {length}, body {len(body)}")
        if zlib.crc32(body) != crc:
            raise CacheCorruptError("checksum mismatch")
        try:
            obj = json.loads(body)
        except ValueError:
            raise CacheCorruptError("body is not valid JSON") from None
        if not isinstance(obj, dict) or "key" not in obj or "value" not in obj:
            raise CacheCorruptError("body lacks key/value fields")
        return obj["key"], obj["value"]

    def get(self, key: str):
        """Return the cached value or None when absent."""
        with self._lock:
            return self._entries.get(key)

    def put(self, key: str, value) -> None:
        body = json.dumps({"key": key, "value": value}, ensure_ascii=False, sort_keys=True).encode("utf-8")
        line = b"%d %08x %s\n" % (len(body), zlib.crc32(body), body)
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "ab") as fh:
                fh.write(line)
            self._entries[key] = value

    def keys(self) -> list[str]:
        with self._lock:
            return sorted(self._entries)

    def stats(self) -> dict[str, int]:
        with self._lock:
            return {"entries": len(self._entries), "corrupt_records": self.corrupt_records}

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()
            if self.path.exists():
                self.path.unlink()


class CachingSearchClient(SearchClient):
    def __init__(self, inner: SearchClient, cache: ResponseCache):
        self.inner = inner
        self.cache = cache

    def search(self, query: str) -> list[str]:
        key = "wikisearch:" + query
        hit = self.cache.get(key)
        if hit is not None:
            return list(hit)
        titles = self.inner.search(query)
        self.cache.put(key, titles)
        return titles


class CachingTagmeClient(TagmeClient):
    def __init__(self, inner: TagmeClient, cache: ResponseCache):
        self.inner = inner
        self.cache = cache

    def annotate(self, text: str) -> list[TagmeAnnotation]:
        key = "tagme:" + text
        hit = self.cache.get(key)
        if hit is not None:
            return [TagmeAnnotation(r[0], r[1], r[2], r[3], r[4]) for r in hit]
        anns = self.inner.annotate(text)
        self.cache.put(
            key,
            [[a.char_start, a.char_end, a.title, a.rho, a.is_person] for a in anns],
        )
        return anns


class RateLimiter:
    """Enforces a minimum interval between requests across threads."""

    def __init__(self, per_second: float):
        self.min_interval = 1.0 / per_second if per_second > 0 else 0.0
        self._lock = threading.Lock()
        self._last = 0.0

    def wait(self) -> None:
        with self._lock:
            now = time.monotonic()
            delay = self._last + self.min_interval - now
            if delay > 0:
                time.sleep(delay)
            self._last = time.monotonic()


def _call_with_retries(fn, what: str, retries: int, backoff: float):
    """Run ``fn``, retrying with exponential backoff; raise
    ClientUnavailableError once attempts are exhausted."""
    last_error = None
    for attempt in range(retries + 1):
        try:
            return fn()
        except Exception as exc:  # noqa: BLE001 - network errors vary by transport
            last_error = exc
            if attempt < retries:
                time.sleep(backoff * (2**attempt))
    raise ClientUnavailableError(f"{what} failed after {retries + 1} attempts: {last_error}")


class OnlineSearchClient(SearchClient):
    """MediaWiki ``list=search`` API client; only result titles are used."""

    def __init__(
        self,
        base_url: str = DEFAULT_SEARCH_URL,
        session=None,
        rate_limiter: RateLimiter | None = None,
        retries: int = 3,
        backoff: float = 1.0,
        timeout: float = 30.0,
    ):
        self.base_url = base_url
        self.session = session or requests.Session()
        self.rate_limiter = rate_limiter or RateLimiter(5.0)
        self.retries = retries
        self.backoff = backoff
        self.timeout = timeout

    def search(self, query: str) -> list[str]:
        params = {
            "action": "query",
            "list": "search",
            "srsearch": query,
            "srlimit": 10,
            "format": "json",
        }

        def call():
            self.rate_limiter.wait()
            resp = self.session.get(self.base_url, params=params, timeout=self.timeout)
            resp.raise_for_status()
            hits = resp.json()["query"]["search"]
            return [hit["title"].replace(" ", "_") for hit in hits]

        return _call_with_retries(call, f"wikisearch {query!r}", self.retries, self.backoff)


class OnlineTagmeClient(TagmeClient):
    """TagMe tagging API client.

    The API token comes from the ``TAGME_TOKEN`` environment variable unless
    given explicitly.  The person flag is derived from the linked page's
    categories (an auxiliary MediaWiki request, cached when a cache is
    supplied).
    """

    def __init__(
        self,
        base_url: str = DEFAULT_TAGME_URL,
        token: str | None = None,
        wiki_base_url: str = DEFAULT_SEARCH_URL,
        session=None,
        rate_limiter: RateLimiter | None = None,
        retries: int = 3,
        backoff: float = 1.0,
        timeout: float = 30.0,
        cache: ResponseCache | None = None,
    ):
        self.base_url = base_url
        self.token = token if token is not None else os.environ.get(TAGME_TOKEN_ENV, "")
        self.wiki_base_url = wiki_base_url
        self.session = session or requests.Session()
        self.rate_limiter = rate_limiter or RateLimiter(5.0)
        self.retries = retries
        self.backoff = backoff
        self.timeout = timeout
        self.cache = cache

    def annotate(self, text: str) -> list[TagmeAnnotation]:
        def call():
            self.rate_limiter.wait()
            resp = self.session.post(
                self.base_url,
                data={"text": text, "gcube-token": self.token},
                timeout=self.timeout,
            )
            resp.raise_for_status()
            return resp.json().get("annotations", [])

        raw = _call_with_retries(call, "tagme", self.retries, self.backoff)
        out = []
        for ann in raw:
            title = str(ann.get("title", "")).replace(" ", "_")
            if not title:
                continue
            out.append(
                TagmeAnnotation(
                    int(ann["start"]),
                    int(ann["end"]),
                    title,
                    float(ann.get("rho", 0.0)),
                    self._title_is_person(title),
                )
            )
        return out

    def _title_is_person(self, title: str) -> bool:
        key = "pageinfo:" + title
        if self.cache is not None:
            hit = self.cache.get(key)
            if hit is not None:
                return bool(hit)

        params = {
            "action": "query",
            "prop": "categories",
            "titles": title,
            "cllimit": 500,
            "format": "json",
        }

        def call():
            self.rate_limiter.wait()
            resp = self.session.get(self.wiki_base_url, params=params, timeout=self.timeout)
            resp.raise_for_status()
            pages = resp.json()["query"]["pages"]
            categories = []
            for page in pages.values():
                categories.extend(c.get("title", "") for c in page.get("categories", []))
            return categories

        categories = _call_with_retries(call, f"pageinfo {title!r}", self.retries, self.backoff)
        is_person = any(
            marker in category.lower()
            for category in categories
            for marker in _PERSON_CATEGORY_MARKERS
        )
        if self.cache is not None:
            self.cache.put(key, is_person)
        return is_person


def mention_query(doc: Document, span: MentionSpan) -> str:
    """The search query for a span: its token texts joined by single spaces."""
    return " ".join(t.text for t in doc.tokens[span.start : span.end])


def span_char_range(doc: Document, span: MentionSpan) -> tuple[int, int]:
    return doc.tokens[span.start].char_start, doc.tokens[span.end - 1].char_end


def link_wikisearch(
    doc: Document, mentions: list[MentionSpan], client: SearchClient
) -> list[LinkedMention]:
    """Link each mention to the top Wikipedia search hit for its text.

    Mentions whose query returns no hits get no link.  Identical queries are
    resolved with a single client call.
    """
    memo: dict[str, list[str]] = {}
    out = []
    for span in sorted(mentions, key=lambda s: s.start):
        query = mention_query(doc, span)
        if query not in memo:
            memo[query] = client.search(query)
        titles = memo[query]
        if titles:
            out.append(LinkedMention(span, titles[0], LinkerId.WIKISEARCH))
    return out


def _sentence_requests(doc: Document, sentence_indices: list[int]) -> list[tuple[int, str]]:
    """(char offset, text) request pairs for the given sentences."""
    out = []
    for s in sentence_indices:
        toks = doc.sentence_tokens(s)
        if not toks:
            continue
        start = toks[0].char_start
        out.append((start, doc.source_text[start : toks[-1].char_end]))
    return out


def _mention_sentences(doc: Document, mentions: list[MentionSpan]) -> list[int]:
    bearing = set()
    for span in mentions:
        for tok in doc.tokens[span.start : span.end]:
            bearing.add(tok.sentence_index)
    return sorted(bearing)


def _gather_annotations(
    doc: Document,
    client: TagmeClient,
    length_limit: int,
    sentence_indices: list[int] | None,
) -> list[TagmeAnnotation]:
    """Run TagMe per the length gate and map offsets back to the document.

    Documents at or under the limit go through in one request; longer ones
    are chunked into the requested sentences (all of them when
    ``sentence_indices`` is None).
    """
    if length_limit <= 0:
        raise ValueError("length_limit must be positive")
    if len(doc.source_text) <= length_limit:
        requests_ = [(0, doc.source_text)]
    elif sentence_indices is None:
        requests_ = _sentence_requests(doc, list(range(doc.sentence_count())))
    else:
        requests_ = _sentence_requests(doc, sentence_indices)
    annotations = []
    for offset, text in requests_:
        for ann in client.annotate(text):
            annotations.append(
                TagmeAnnotation(
                    ann.char_start + offset,
                    ann.char_end + offset,
                    ann.title,
                    ann.rho,
                    ann.is_person,
                )
            )
    return annotations


def _best_annotation(
    annotations: list[TagmeAnnotation], char_start: int, char_end: int
) -> TagmeAnnotation | None:
    candidates = [
        a
        for a in annotations
        if a.char_start < char_end and char_start < a.char_end
    ]
    if not candidates:
        return None
    candidates.sort(key=lambda a: (-a.rho, a.char_start, a.char_end, a.title))
    return candidates[0]


def link_tagme(
    doc: Document,
    mentions: list[MentionSpan],
    client: TagmeClient,
    length_limit: int = DEFAULT_LENGTH_LIMIT,
) -> list[LinkedMention]:
    """Link mentions through a TagMe-style annotator.

    Short documents go through whole; long ones sentence-by-sentence, only
    for sentences that contain a mention.  Only person annotations count,
    and each span takes the overlapping annotation with the highest rho.
    """
    annotations = _gather_annotations(
        doc, client, length_limit, _mention_sentences(doc, mentions)
    )
    person_annotations = [a for a in annotations if a.is_person]
    out = []
    for span in sorted(mentions, key=lambda s: s.start):
        cs, ce = span_char_range(doc, span)
        best = _best_annotation(person_annotations, cs, ce)
        if best is not None:
            out.append(LinkedMention(span, best.title, LinkerId.TAGME, score=best.rho))
    return out


def _token_span_for_chars(doc: Document, char_start: int, char_end: int) -> tuple[int, int] | None:
    covered = [
        t.doc_index
        for t in doc.tokens
        if t.char_start < char_end and char_start < t.char_end
    ]
    if not covered:
        return None
    return covered[0], covered[-1] + 1


def baseline_pipeline(
    doc: Document,
    annotations: StandoffAnnotations,
    tagme: TagmeClient,
    length_limit: int = DEFAULT_LENGTH_LIMIT,
) -> list[LinkedMention]:
    """The profile-free reference pipeline: TagMe filtered to persons, plus
    chain pronouns inheriting their antecedent's link.

    TagMe runs over the whole document, or over every sentence when the
    document exceeds the length limit.  An annotation survives when it is
    flagged as a person or overlaps a base PERSON span.  No profile rules
    and no gender sieve apply.
    """
    tag_annotations = _gather_annotations(doc, tagme, length_limit, None)
    person_ranges = [
        (doc.tokens[s.start].char_start, doc.tokens[s.end - 1].char_end)
        for s in annotations.ner_spans
        if s.label is NerLabel.PERSON
    ]
    kept = [
        a
        for a in tag_annotations
        if a.is_person
        or any(a.char_start < pe and ps < a.char_end for ps, pe in person_ranges)
    ]

    span_candidates = []
    for a in kept:
        tok_span = _token_span_for_chars(doc, a.char_start, a.char_end)
        if tok_span is not None:
            span_candidates.append(
                MentionSpan(tok_span[0], tok_span[1], MentionKind.NAME, MentionSource.BASE_NER)
            )
    name_spans = merge_spans(list(set(span_candidates)))

    links = []
    for span in name_spans:
        cs, ce = span_char_range(doc, span)
        best = _best_annotation(kept, cs, ce)
        if best is not None:
            links.append(LinkedMention(span, best.title, LinkerId.TAGME, score=best.rho))

    name_links = list(links)
    for pronoun in prune_pronoun_spans(filter_pronoun_chains(doc, annotations), name_spans):
        rep = pronoun.chain_rep
        inherited = next(
            (
                l
                for l in name_links
                if rep is not None and l.span.start < rep[1] and rep[0] < l.span.end
            ),
            None,
        )
        if inherited is not None:
            links.append(LinkedMention(pronoun, inherited.title, LinkerId.SIEVE_INHERIT))

    links.sort(key=lambda l: (l.span.start, l.span.end))
    return links


def propagate_pronoun_links(
    pronouns: list[MentionSpan],
    named_links: list[LinkedMention],
    profile: PersonProfile,
) -> list[LinkedMention]:
    """Resolve pronoun spans to titles.

    Subject-attributed pronouns (gender sieve, orphaned chain pronouns) link
    to the subject's title; chain pronouns inherit the title of the named
    link overlapping their representative, and stay unlinked when their
    antecedent got no link.
    """
    ordered_links = sorted(named_links, key=lambda l: (l.span.start, l.span.end, l.title))
    out = []
    for pronoun in sorted(pronouns, key=lambda p: p.start):
        if pronoun.subject_hint:
            out.append(LinkedMention(pronoun, pronoun.subject_hint, LinkerId.SIEVE_INHERIT))
            continue
        rep = pronoun.chain_rep
        if rep is None:
            continue
        inherited = next(
            (l for l in ordered_links if l.span.start < rep[1] and rep[0] < l.span.end),
            None,
        )
        if inherited is not None:
            out.append(LinkedMention(pronoun, inherited.title, LinkerId.SIEVE_INHERIT))
    return out
