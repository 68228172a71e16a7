"""Person mention detection and Wikipedia entity linking for people pages."""

from .corpus import (
    Document,
    Gender,
    GoldDocument,
    GoldRow,
    PersonProfile,
    Token,
    parse_gold_tsv,
    parse_profile_xml,
    write_gold_tsv,
)
from .coref import PronounLexicon, filter_pronoun_chains, gender_sieve
from .linker import LinkedMention, LinkerId, baseline_pipeline, link_tagme, link_wikisearch
from .mentions import (
    MentionKind,
    MentionSource,
    MentionSpan,
    StandoffAnnotations,
    detect_mentions,
    load_standoff,
    merge_spans,
)
from .scoring import Stage, StageScores, iaa, project_predictions, score_stage
from .tokenizer import tokenize

__version__ = "0.1.0"

__all__ = [
    "Document",
    "Gender",
    "GoldDocument",
    "GoldRow",
    "LinkedMention",
    "LinkerId",
    "MentionKind",
    "MentionSource",
    "MentionSpan",
    "PersonProfile",
    "PronounLexicon",
    "Stage",
    "StageScores",
    "StandoffAnnotations",
    "Token",
    "baseline_pipeline",
    "detect_mentions",
    "filter_pronoun_chains",
    "gender_sieve",
    "iaa",
    "link_tagme",
    "link_wikisearch",
    "load_standoff",
    "merge_spans",
    "parse_gold_tsv",
    "parse_profile_xml",
    "project_predictions",
    "score_stage",
    "tokenize",
    "write_gold_tsv",
]
