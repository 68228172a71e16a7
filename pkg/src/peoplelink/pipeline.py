"""Per-document orchestration shared by the CLI commands.

Pairs corpus text, profile, optional standoff, and gold files by base
filename (= page title with underscores), and composes detection, pronoun
resolution, linking, and row projection for one document at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .coref import (
    PronounLexicon,
    attribute_chain_pronouns,
    filter_pronoun_chains,
    gender_sieve,
    prune_pronoun_spans,
)
from .corpus import (
    Document,
    GoldDocument,
    GoldRow,
    PersonProfile,
    decode_utf8,
    parse_gold_tsv,
    parse_profile_xml,
)
from .linker import (
    LinkedMention,
    SearchClient,
    TagmeClient,
    baseline_pipeline,
    link_tagme,
    link_wikisearch,
    propagate_pronoun_links,
)
from .mentions import (
    MentionKind,
    MentionSpan,
    StandoffAnnotations,
    detect_mentions,
    heuristic_base_ner,
    load_standoff,
)
from .scoring import project_predictions
from .tokenizer import tokenize


@dataclass
class DocumentBundle:
    """Everything known about one corpus page."""

    title: str
    doc: Document
    profile: PersonProfile
    annotations: StandoffAnnotations
    gold: GoldDocument | None = None


def list_corpus_titles(corpus_dir: str | Path) -> list[str]:
    """Page titles in a corpus directory, sorted for determinism."""
    return sorted(p.stem for p in Path(corpus_dir).glob("*.txt"))


def load_bundle(
    title: str,
    corpus_dir: str | Path,
    profiles_dir: str | Path,
    standoff_dir: str | Path | None = None,
    gold_dir: str | Path | None = None,
) -> DocumentBundle:
    """Load and pair the files for one page.

    Raises :class:`PipelineError` subclasses (or FileNotFoundError for a
    missing required file); a missing standoff file falls back to the
    built-in heuristic annotator.
    """
    text = decode_utf8((Path(corpus_dir) / f"{title}.txt").read_bytes())
    doc = tokenize(title, text)
    profile = parse_profile_xml((Path(profiles_dir) / f"{title}.xml").read_bytes())
    annotations = None
    if standoff_dir is not None:
        standoff_path = Path(standoff_dir) / f"{title}.json"
        if standoff_path.exists():
            annotations = load_standoff(standoff_path.read_bytes(), doc)
    if annotations is None:
        annotations = heuristic_base_ner(doc, profile)
    gold = None
    if gold_dir is not None:
        gold = parse_gold_tsv((Path(gold_dir) / f"{title}.tsv").read_bytes())
    return DocumentBundle(title, doc, profile, annotations, gold)


def detect_document(
    bundle: DocumentBundle,
    titles: frozenset[str] | None = None,
    lexicon: PronounLexicon | None = None,
) -> tuple[list[MentionSpan], list[MentionSpan]]:
    """Run the rule-based mention detection for one page.

    Returns (name mentions, pronoun mentions); all spans are pairwise
    disjoint.  Chain pronouns are attributed to the subject unless their
    representative overlaps a detected name mention.
    """
    names = detect_mentions(bundle.doc, bundle.profile, bundle.annotations, titles)
    chain_pronouns = prune_pronoun_spans(
        filter_pronoun_chains(bundle.doc, bundle.annotations), names
    )
    chain_pronouns = attribute_chain_pronouns(chain_pronouns, names, bundle.profile)
    sieve_pronouns = gender_sieve(
        bundle.doc, bundle.profile, names + chain_pronouns, lexicon
    )
    return names, chain_pronouns + sieve_pronouns


def link_document(
    bundle: DocumentBundle,
    names: list[MentionSpan],
    pronouns: list[MentionSpan],
    linker: str,
    search_client: SearchClient | None = None,
    tagme_client: TagmeClient | None = None,
    length_limit: int = 5000,
) -> list[LinkedMention]:
    """Link the detected mentions with the configured backend."""
    if linker == "wikisearch":
        named = link_wikisearch(bundle.doc, names, search_client)
    elif linker == "tagme":
        named = link_tagme(bundle.doc, names, tagme_client, length_limit)
    else:
        raise ValueError(f"unknown linker: {linker}")
    return named + propagate_pronoun_links(pronouns, named, bundle.profile)


def run_document(
    bundle: DocumentBundle,
    linker: str,
    search_client: SearchClient | None = None,
    tagme_client: TagmeClient | None = None,
    length_limit: int = 5000,
    titles: frozenset[str] | None = None,
    lexicon: PronounLexicon | None = None,
) -> list[GoldRow]:
    """End-to-end prediction rows for one page with the chosen linker."""
    if linker == "baseline":
        links = baseline_pipeline(
            bundle.doc, bundle.annotations, tagme_client, length_limit
        )
        name_spans = [l.span for l in links if l.span.kind is MentionKind.NAME]
        pronoun_spans = prune_pronoun_spans(
            filter_pronoun_chains(bundle.doc, bundle.annotations), name_spans
        )
        mentions = name_spans + pronoun_spans
    else:
        names, pronouns = detect_document(bundle, titles, lexicon)
        mentions = names + pronouns
        links = link_document(
            bundle,
            names,
            pronouns,
            linker,
            search_client=search_client,
            tagme_client=tagme_client,
            length_limit=length_limit,
        )
    return project_predictions(bundle.doc, links, mentions)


__all__ = [
    "DocumentBundle",
    "detect_document",
    "link_document",
    "list_corpus_titles",
    "load_bundle",
    "run_document",
]
