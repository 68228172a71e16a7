"""Token-level precision/recall/F1 scoring against the gold columns.

Each evaluation stage compares one gold column token-wise: NER the name
flags, MENTION the mention flags, LINKING the link titles (a token is a true
positive only when both sides carry the same normalized title).  Undefined
ratios follow the 0-convention.  Micro aggregation pools counts; macro
averages per-document metrics, so macro F is generally not the harmonic mean
of macro P and macro R.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .corpus import Document, GoldDocument, GoldRow
from .errors import (
    EmptyInputError,
    LengthMismatchError,
    OverlapViolationError,
    TokenMismatchError,
)
from .linker import LinkedMention
from .mentions import MentionKind, MentionSpan


class Stage(enum.Enum):
    NER = "ner"
    MENTION = "mention"
    LINKING = "linking"


@dataclass(frozen=True)
class StageScores:
    """Counts and derived metrics for one evaluation stage.

    ``from_counts`` derives the metrics; macro aggregates carry averaged
    metrics next to pooled counts instead.
    """

    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int) -> "StageScores":
        precision = tp / (tp + fp) if tp + fp > 0 else 0.0
        recall = tp / (tp + fn) if tp + fn > 0 else 0.0
        f1 = (
            2 * precision * recall / (precision + recall)
            if precision + recall > 0
            else 0.0
        )
        return cls(tp, fp, fn, precision, recall, f1)


@dataclass(frozen=True)
class EvalStages:
    ner: StageScores
    mention: StageScores
    linking: StageScores


@dataclass
class EvalReport:
    per_document: dict[str, EvalStages]
    micro: EvalStages | None = None
    macro: EvalStages | None = None


def normalize_title(title: str) -> str:
    """Wikipedia title equality: spaces become underscores and the first
    letter is case-folded upward."""
    t = title.replace(" ", "_")
    return t[0].upper() + t[1:] if t else t


def score_stage(gold: GoldDocument, predicted: list[GoldRow], stage: Stage) -> StageScores:
    """Score one stage of ``predicted`` rows against ``gold`` token-wise."""
    if len(predicted) != len(gold.rows):
        raise LengthMismatchError(
            f"{gold.page_title}: gold has {len(gold.rows)} rows, prediction {len(predicted)}"
        )
    tp = fp = fn = 0
    for g, p in zip(gold.rows, predicted):
        if stage is Stage.LINKING:
            gl = normalize_title(g.link) if g.link else None
            pl = normalize_title(p.link) if p.link else None
            if gl is not None and pl is not None and gl == pl:
                tp += 1
            else:
                if pl is not None:
                    fp += 1
                if gl is not None:
                    fn += 1
        else:
            g_pos = g.is_name if stage is Stage.NER else g.is_mention
            p_pos = p.is_name if stage is Stage.NER else p.is_mention
            if g_pos and p_pos:
                tp += 1
            elif p_pos:
                fp += 1
            elif g_pos:
                fn += 1
    return StageScores.from_counts(tp, fp, fn)


def score_document(gold: GoldDocument, predicted: list[GoldRow]) -> EvalStages:
    return EvalStages(
        ner=score_stage(gold, predicted, Stage.NER),
        mention=score_stage(gold, predicted, Stage.MENTION),
        linking=score_stage(gold, predicted, Stage.LINKING),
    )


class AggregateMode(enum.Enum):
    MICRO = "micro"
    MACRO = "macro"


def _aggregate_stage(scores: list[StageScores], mode: AggregateMode) -> StageScores:
    tp = sum(s.tp for s in scores)
    fp = sum(s.fp for s in scores)
    fn = sum(s.fn for s in scores)
    if mode is AggregateMode.MICRO:
        return StageScores.from_counts(tp, fp, fn)
    n = len(scores)
    return StageScores(
        tp,
        fp,
        fn,
        sum(s.precision for s in scores) / n,
        sum(s.recall for s in scores) / n,
        sum(s.f1 for s in scores) / n,
    )


def aggregate(per_doc: list[tuple[str, EvalStages]], mode: AggregateMode) -> EvalStages:
    """Combine per-document stage triples.

    Micro sums tp/fp/fn and derives the metrics once; macro averages the
    per-document metrics (counts in the result are the pooled sums either
    way).
    """
    if not per_doc:
        raise EmptyInputError("no documents to aggregate")
    return EvalStages(
        ner=_aggregate_stage([s.ner for _, s in per_doc], mode),
        mention=_aggregate_stage([s.mention for _, s in per_doc], mode),
        linking=_aggregate_stage([s.linking for _, s in per_doc], mode),
    )


def build_report(per_doc: dict[str, EvalStages], average: str = "both") -> EvalReport:
    items = sorted(per_doc.items())
    report = EvalReport(per_document=dict(items))
    if average in ("micro", "both"):
        report.micro = aggregate(items, AggregateMode.MICRO)
    if average in ("macro", "both"):
        report.macro = aggregate(items, AggregateMode.MACRO)
    return report


def iaa(gold_a: GoldDocument, gold_b: GoldDocument) -> EvalStages:
    """Inter-annotator agreement: score annotator b against annotator a.

    Asymmetric by construction (a is the reference).  Both documents must
    annotate the same token sequence.
    """
    if len(gold_a.rows) != len(gold_b.rows):
        raise LengthMismatchError(
            f"{gold_a.page_title}: {len(gold_a.rows)} rows vs {len(gold_b.rows)}"
        )
    for i, (ra, rb) in enumerate(zip(gold_a.rows, gold_b.rows)):
        if ra.token_text != rb.token_text:
            raise TokenMismatchError(i, ra.token_text, rb.token_text)
    return score_document(gold_a, list(gold_b.rows))


def project_predictions(
    doc: Document,
    links: list[LinkedMention],
    mentions: list[MentionSpan],
) -> list[GoldRow]:
    """Flatten spans and links into one four-column row per token.

    A token is name-positive when covered by a NAME span, mention-positive
    when covered by any span, and carries the title of the covering link.
    All involved spans must be pairwise disjoint.
    """
    spans = {(m.start, m.end, m.kind) for m in mentions}
    spans.update((l.span.start, l.span.end, l.span.kind) for l in links)
    ordered = sorted(spans)
    for (s1, e1, _), (s2, e2, _) in zip(ordered, ordered[1:]):
        if s2 < e1:
            raise OverlapViolationError(f"spans [{s1},{e1}) and [{s2},{e2}) overlap")

    name_tokens: set[int] = set()
    mention_tokens: set[int] = set()
    for start, end, kind in ordered:
        mention_tokens.update(range(start, end))
        if kind is MentionKind.NAME:
            name_tokens.update(range(start, end))

    link_by_token: dict[int, str] = {}
    for link in sorted(links, key=lambda l: (l.span.start, l.span.end, l.linker_id.value, l.title)):
        for t in range(link.span.start, link.span.end):
            link_by_token.setdefault(t, link.title)

    return [
        GoldRow(
            tok.text,
            tok.doc_index in name_tokens,
            tok.doc_index in mention_tokens,
            link_by_token.get(tok.doc_index),
        )
        for tok in doc.tokens
    ]
