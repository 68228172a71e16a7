"""Pronoun mentions for the page subject.

Two sources: pronouns kept from base coreference chains (everything else in
a chain is dropped), and the gender sieve, which claims any still-uncovered
pronoun matching the subject's gender, plus first-person pronouns from
quotations.  Plural pronouns never become mentions.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

from .corpus import Document, Gender, PersonProfile
from .errors import InvariantViolationError
from .mentions import MentionKind, MentionSource, MentionSpan, StandoffAnnotations

REQUIRED_PLURALS = frozenset({"our", "them", "they", "their", "us", "we"})

_LEXICON_SETS = ("male", "female", "first_person", "excluded_plural")


@dataclass(frozen=True)
class PronounLexicon:
    """The pronoun sets driving the gender sieve.

    Matching is case-insensitive except for the word "I", which must be
    uppercase (a lowercase "i" is a tokenization artifact, not a pronoun).
    """

    male: frozenset[str]
    female: frozenset[str]
    first_person: frozenset[str]
    excluded_plural: frozenset[str]

    def __post_init__(self):
        lowered = [
            {w.lower() for w in getattr(self, name)} for name in _LEXICON_SETS
        ]
        for i in range(len(lowered)):
            for j in range(i + 1, len(lowered)):
                shared = lowered[i] & lowered[j]
                if shared:
                    raise InvariantViolationError(
                        f"pronoun sets {_LEXICON_SETS[i]} and {_LEXICON_SETS[j]} "
                        f"share {sorted(shared)}"
                    )
        missing = REQUIRED_PLURALS - {w.lower() for w in self.excluded_plural}
        if missing:
            raise InvariantViolationError(
                f"excluded_plural must contain {sorted(missing)}"
            )

    def matches(self, token_text: str, words: frozenset[str]) -> bool:
        for word in words:
            if word == "I":
                if token_text == "I":
                    return True
            elif token_text.lower() == word.lower():
                return True
        return False

    def gender_set(self, gender: Gender) -> frozenset[str]:
        if gender is Gender.MALE:
            return self.male
        if gender is Gender.FEMALE:
            return self.female
        return frozenset()


def default_pronoun_lexicon() -> PronounLexicon:
    text = resources.files("peoplelink").joinpath("data/pronouns.txt").read_text("utf-8")
    return _parse_lexicon(text)


def load_pronoun_lexicon(path: str | Path) -> PronounLexicon:
    """Load a lexicon override file of ``set:word`` lines."""
    return _parse_lexicon(Path(path).read_text("utf-8"))


def _parse_lexicon(text: str) -> PronounLexicon:
    sets: dict[str, set[str]] = {name: set() for name in _LEXICON_SETS}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        name, sep, word = line.partition(":")
        if not sep or name not in sets or not word:
            raise InvariantViolationError(
                f"pronoun lexicon line {line_no}: expected '<set>:<word>', got {raw!r}"
            )
        sets[name].add(word)
    return PronounLexicon(**{name: frozenset(words) for name, words in sets.items()})


def filter_pronoun_chains(
    doc: Document, annotations: StandoffAnnotations
) -> list[MentionSpan]:
    """Keep only the pronoun members of base coreference chains.

    Each kept pronoun records its chain's (first) representative span in
    ``chain_rep`` so linking can inherit the antecedent's title.
    """
    out = []
    for chain in annotations.coref_chains:
        rep = next(m for m in chain if m.representative)
        for member in chain:
            if member.is_pronoun:
                out.append(
                    MentionSpan(
                        member.start,
                        member.end,
                        MentionKind.PRONOUN,
                        MentionSource.BASE_COREF,
                        chain_rep=(rep.start, rep.end),
                    )
                )
    out.sort(key=lambda s: (s.start, s.chain_rep or (0, 0)))
    return out


def prune_pronoun_spans(
    pronouns: list[MentionSpan], anchors: list[MentionSpan]
) -> list[MentionSpan]:
    """Drop pronouns overlapping the anchor spans or each other (first wins)."""
    kept: list[MentionSpan] = []
    for p in pronouns:
        if any(p.overlaps(a) for a in anchors) or any(p.overlaps(k) for k in kept):
            continue
        kept.append(p)
    return kept


def attribute_chain_pronouns(
    pronouns: list[MentionSpan],
    name_mentions: list[MentionSpan],
    profile: PersonProfile,
) -> list[MentionSpan]:
    """Attribute chain pronouns whose representative matches no detected
    name mention to the page subject; leave the rest to inherit their
    antecedent's link."""
    out = []
    for p in pronouns:
        rep = p.chain_rep
        if rep is not None and any(
            m.start < rep[1] and rep[0] < m.end for m in name_mentions
        ):
            out.append(p)
        else:
            out.append(replace(p, subject_hint=profile.wiki_title))
    return out


def gender_sieve(
    doc: Document,
    profile: PersonProfile,
    existing: list[MentionSpan],
    lexicon: PronounLexicon | None = None,
) -> list[MentionSpan]:
    """Claim uncovered pronouns matching the subject's gender for the subject.

    First-person pronouns are claimed regardless of gender (quotations);
    plural pronouns never are.  Emitted spans are disjoint from ``existing``
    and carry the subject's title as ``subject_hint``.
    """
    if lexicon is None:
        lexicon = default_pronoun_lexicon()
    covered = set()
    for span in existing:
        covered.update(range(span.start, span.end))
    gender_words = lexicon.gender_set(profile.gender)
    excluded = {w.lower() for w in lexicon.excluded_plural}
    out = []
    for tok in doc.tokens:
        if tok.doc_index in covered:
            continue
        if tok.text.lower() in excluded:
            continue
        if lexicon.matches(tok.text, lexicon.first_person) or lexicon.matches(
            tok.text, gender_words
        ):
            out.append(
                MentionSpan(
                    tok.doc_index,
                    tok.doc_index + 1,
                    MentionKind.PRONOUN,
                    MentionSource.GENDER_SIEVE,
                    subject_hint=profile.wiki_title,
                )
            )
    return out
