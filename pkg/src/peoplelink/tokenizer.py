"""Deterministic tokenizer and sentence splitter.

Evaluation is token-aligned, so tokenization is a fixed contract: a maximal
run of letters/digits (Unicode categories L* and N*, plus combining marks),
optionally joined by word-internal apostrophes or hyphens, is one token;
every other non-whitespace character is its own single-character token.  A
closed set of honorific abbreviations keeps its trailing period.  Sentence
indices advance after a sentence-final ".", "!" or "?" token that is not
part of a kept abbreviation; runs of terminal punctuation stay in the
sentence they end.
"""

from __future__ import annotations

import unicodedata

from .corpus import Document, Token

# Abbreviations that keep their period and never end a sentence.
KEPT_ABBREVIATIONS = frozenset({"Dr.", "Mr.", "Mrs.", "Ms.", "St.", "Jr.", "Sr."})

SENTENCE_TERMINALS = frozenset(".!?")

# Characters that join two word characters into one token ("O'Brien",
# "Jean-Paul"); U+2019 is the typographic apostrophe common on Wikipedia.
_INTERNAL_JOINERS = frozenset({"'", "’", "-"})


def _is_word_char(ch: str) -> bool:
    return unicodedata.category(ch)[0] in ("L", "N", "M")


def tokenize(page_title: str, text: str) -> Document:
    """Tokenize ``text`` into a :class:`Document` for ``page_title``.

    Offsets are code-point indices into ``text``; concatenating the token
    texts reproduces the source minus its whitespace.
    """
    tokens: list[Token] = []
    sentence = 0
    pending_break = False
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if _is_word_char(ch):
            j = i + 1
            while j < n:
                nxt = text[j]
                if _is_word_char(nxt):
                    j += 1
                elif nxt in _INTERNAL_JOINERS and j + 1 < n and _is_word_char(text[j + 1]):
                    j += 1
                else:
                    break
            if j < n and text[j] == "." and text[i:j] + "." in KEPT_ABBREVIATIONS:
                j += 1  # keep the period inside the abbreviation token
            token_text = text[i:j]
            terminal = False
        else:
            j = i + 1
            token_text = ch
            terminal = ch in SENTENCE_TERMINALS
        if pending_break and not terminal:
            sentence += 1
            pending_break = False
        tokens.append(Token(token_text, len(tokens), sentence, i, j))
        if terminal:
            pending_break = True
        i = j
    return Document(page_title, tuple(tokens), text)
