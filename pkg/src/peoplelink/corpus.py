"""Gold annotation files, documents, and infobox person profiles.

The gold format is a four-column, tab-separated UTF-8 file with LF line
endings.  The first line is a ``#doc <title>`` header naming the Wikipedia
page the file annotates.  Every following non-blank line holds one token:

    token_text <TAB> name_flag <TAB> mention_flag <TAB> link

``name_flag`` is "Y" when the token is part of a person name, ``mention_flag``
is "Y" when it is part of any person mention (names are a subset of
mentions), and ``link`` is the linked Wikipedia title (underscores, possibly
empty).  A blank line separates sentences and produces no row.

Person profiles are small XML documents carrying the infobox facts the rule
features consume: ``wikiTitle``, ``firstName``, optional ``middleName`` /
``lastName`` / ``gender``, and repeatable ``profession`` / ``alias`` /
``nickname`` elements.
"""

from __future__ import annotations

import enum
import xml.etree.ElementTree as ET
from dataclasses import dataclass

from .errors import (
    IllegalFlagError,
    InvariantViolationError,
    LinkWithoutMentionError,
    MalformedXmlError,
    MissingDocHeaderError,
    MissingRequiredFieldError,
    NotUtf8Error,
    WrongColumnCountError,
)

GOLD_HEADER_PREFIX = "#doc "
FLAG_YES = "Y"


def decode_utf8(data: bytes) -> str:
    """Decode ``data`` strictly as UTF-8, raising :class:`NotUtf8Error`."""
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise NotUtf8Error(str(exc)) from None


class Gender(enum.Enum):
    MALE = "male"
    FEMALE = "female"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Token:
    """One tokenizer output unit.

    Offsets are code-point indices into the owning document's source text,
    so ``source_text[char_start:char_end] == text``.
    """

    text: str
    doc_index: int
    sentence_index: int
    char_start: int
    char_end: int


@dataclass(frozen=True)
class Document:
    """A tokenized page plus the Wikipedia title of its subject."""

    page_title: str
    tokens: tuple[Token, ...]
    source_text: str

    def sentence_count(self) -> int:
        return self.tokens[-1].sentence_index + 1 if self.tokens else 0

    def sentence_tokens(self, sentence_index: int) -> list[Token]:
        return [t for t in self.tokens if t.sentence_index == sentence_index]


@dataclass(frozen=True)
class GoldRow:
    token_text: str
    is_name: bool
    is_mention: bool
    link: str | None = None


@dataclass(frozen=True)
class GoldDocument:
    page_title: str
    rows: tuple[GoldRow, ...]


@dataclass(frozen=True)
class PersonProfile:
    """Infobox-derived facts about the page subject."""

    wiki_title: str
    first_name: str
    middle_name: str | None = None
    last_name: str | None = None
    gender: Gender = Gender.UNKNOWN
    professions: tuple[str, ...] = ()
    aliases: tuple[str, ...] = ()
    nicknames: tuple[str, ...] = ()

    def name_parts(self) -> list[str]:
        """First, middle, and last name, skipping absent parts."""
        return [p for p in (self.first_name, self.middle_name, self.last_name) if p]


def parse_gold_tsv(data: bytes) -> GoldDocument:
    """Parse gold annotation bytes into a :class:`GoldDocument`.

    Raises NotUtf8Error, MissingDocHeaderError, WrongColumnCountError,
    IllegalFlagError or LinkWithoutMentionError, all pointing at the
    offending 1-based line.
    """
    text = decode_utf8(data)
    lines = text.split("\n")
    header = lines[0].rstrip("\r") if lines else ""
    if not header.startswith(GOLD_HEADER_PREFIX):
        raise MissingDocHeaderError(
            f"expected first line to start with {GOLD_HEADER_PREFIX!r}"
        )
    page_title = header[len(GOLD_HEADER_PREFIX):]
    if not page_title:
        raise MissingDocHeaderError("header names no page title")

    rows: list[GoldRow] = []
    for line_no, raw in enumerate(lines[1:], start=2):
        line = raw[:-1] if raw.endswith("\r") else raw
        if line == "":  # sentence separator (or trailing newline)
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise WrongColumnCountError(line_no, f"expected 4 fields, got {len(fields)}")
        token_text, name_flag, mention_flag, link = fields
        for flag in (name_flag, mention_flag):
            if flag not in ("", FLAG_YES):
                raise IllegalFlagError(line_no, f"flag must be 'Y' or empty, got {flag!r}")
        is_name = name_flag == FLAG_YES
        is_mention = mention_flag == FLAG_YES
        if is_name and not is_mention:
            raise IllegalFlagError(line_no, "name flag set without mention flag")
        if link and not is_mention:
            raise LinkWithoutMentionError(line_no, f"link {link!r} on a non-mention row")
        rows.append(GoldRow(token_text, is_name, is_mention, link or None))
    return GoldDocument(page_title, tuple(rows))


def _validate_gold(doc: GoldDocument) -> None:
    if not doc.page_title:
        raise InvariantViolationError("page_title is empty")
    if any(ch in doc.page_title for ch in "\t\r\n"):
        raise InvariantViolationError("page_title contains tab or line break")
    for i, row in enumerate(doc.rows):
        if any(ch in row.token_text for ch in "\t\r\n"):
            raise InvariantViolationError(f"row {i}: token text contains tab or line break")
        if row.is_name and not row.is_mention:
            raise InvariantViolationError(f"row {i}: name flag without mention flag")
        if row.link is not None:
            if not row.link:
                raise InvariantViolationError(f"row {i}: empty link string")
            if any(ch in row.link for ch in "\t\r\n"):
                raise InvariantViolationError(f"row {i}: link contains tab or line break")
            if not row.is_mention:
                raise InvariantViolationError(f"row {i}: link on a non-mention row")


def write_gold_tsv(doc: GoldDocument) -> bytes:
    """Serialize ``doc`` to its canonical byte form (LF endings, UTF-8).

    The output re-parses to an equal GoldDocument.  Raises
    :class:`InvariantViolationError` when ``doc`` breaks its invariants.
    """
    _validate_gold(doc)
    lines = [GOLD_HEADER_PREFIX + doc.page_title]
    for row in doc.rows:
        lines.append(
            "\t".join(
                (
                    row.token_text,
                    FLAG_YES if row.is_name else "",
                    FLAG_YES if row.is_mention else "",
                    row.link or "",
                )
            )
        )
    return ("\n".join(lines) + "\n").encode("utf-8")


def _element_text(root: ET.Element, tag: str) -> str | None:
    el = root.find(tag)
    if el is None or el.text is None:
        return None
    text = el.text.strip()
    return text or None


def _elements_text(root: ET.Element, tag: str) -> tuple[str, ...]:
    out = []
    for el in root.findall(tag):
        if el.text and el.text.strip():
            out.append(el.text.strip())
    return tuple(out)


def parse_profile_xml(data: bytes) -> PersonProfile:
    """Parse an infobox profile XML document.

    ``wikiTitle`` and ``firstName`` are required; everything else is
    optional.  A gender string other than male/female (any case) maps to
    :attr:`Gender.UNKNOWN`.
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise MalformedXmlError(str(exc)) from None
    if root.tag != "person":
        raise MalformedXmlError(f"expected <person> root element, got <{root.tag}>")

    wiki_title = _element_text(root, "wikiTitle")
    if not wiki_title:
        raise MissingRequiredFieldError("wikiTitle")
    first_name = _element_text(root, "firstName")
    if not first_name:
        raise MissingRequiredFieldError("firstName")

    gender_text = _element_text(root, "gender")
    if gender_text and gender_text.lower() == "male":
        gender = Gender.MALE
    elif gender_text and gender_text.lower() == "female":
        gender = Gender.FEMALE
    else:
        gender = Gender.UNKNOWN

    return PersonProfile(
        wiki_title=wiki_title,
        first_name=first_name,
        middle_name=_element_text(root, "middleName"),
        last_name=_element_text(root, "lastName"),
        gender=gender,
        professions=_elements_text(root, "profession"),
        aliases=_elements_text(root, "alias"),
        nicknames=_elements_text(root, "nickname"),
    )
