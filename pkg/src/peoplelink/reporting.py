"""Report renderers: text table, JSON, TSV, and score figures.

The text layout mirrors the usual three-stage presentation: one block per
aggregate (and per document), rows P/R/F, columns NER / Mention Detection /
Entity Linking, values as percentages.  JSON and TSV carry the raw counts
and full-precision metrics.  Figures are grouped P/R/F bar charts written
next to the delimited output.
"""

from __future__ import annotations

import json
from pathlib import Path

from .scoring import EvalReport, EvalStages, StageScores

_COLUMNS = ("NER", "Mention Detection", "Entity Linking")
_STAGE_ATTRS = ("ner", "mention", "linking")
_METRIC_ATTRS = (("P", "precision"), ("R", "recall"), ("F", "f1"))


def _text_block(label: str, stages: EvalStages) -> list[str]:
    lines = [f"== {label} =="]
    header = "   " + "".join(f"{c:>20}" for c in _COLUMNS)
    lines.append(header)
    for metric_label, attr in _METRIC_ATTRS:
        cells = "".join(
            f"{100 * getattr(getattr(stages, stage), attr):>20.1f}"
            for stage in _STAGE_ATTRS
        )
        lines.append(f"{metric_label:<3}" + cells)
    return lines


def render_text(report: EvalReport) -> str:
    lines: list[str] = []
    if report.micro is not None:
        lines.extend(_text_block("micro average", report.micro))
        lines.append("")
    if report.macro is not None:
        lines.extend(_text_block("macro average", report.macro))
        lines.append("")
    for title, stages in report.per_document.items():
        lines.extend(_text_block(title, stages))
        lines.append("")
    return "\n".join(lines)


def _scores_dict(scores: StageScores) -> dict:
    return {
        "tp": scores.tp,
        "fp": scores.fp,
        "fn": scores.fn,
        "precision": scores.precision,
        "recall": scores.recall,
        "f1": scores.f1,
    }


def _stages_dict(stages: EvalStages) -> dict:
    return {
        "ner": _scores_dict(stages.ner),
        "mention": _scores_dict(stages.mention),
        "linking": _scores_dict(stages.linking),
    }


def render_json(report: EvalReport) -> str:
    payload: dict = {
        "documents": {
            title: _stages_dict(stages) for title, stages in report.per_document.items()
        }
    }
    if report.micro is not None:
        payload["micro"] = _stages_dict(report.micro)
    if report.macro is not None:
        payload["macro"] = _stages_dict(report.macro)
    return json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def render_tsv(report: EvalReport) -> str:
    lines = ["document\tstage\ttp\tfp\tfn\tprecision\trecall\tf1"]

    def add(name: str, stages: EvalStages) -> None:
        for stage in _STAGE_ATTRS:
            s: StageScores = getattr(stages, stage)
            lines.append(
                f"{name}\t{stage}\t{s.tp}\t{s.fp}\t{s.fn}"
                f"\t{s.precision!r}\t{s.recall!r}\t{s.f1!r}"
            )

    for title, stages in report.per_document.items():
        add(title, stages)
    if report.micro is not None:
        add("__micro__", report.micro)
    if report.macro is not None:
        add("__macro__", report.macro)
    return "\n".join(lines) + "\n"


def render_report(report: EvalReport, fmt: str) -> str:
    if fmt == "text":
        return render_text(report)
    if fmt == "json":
        return render_json(report)
    if fmt == "tsv":
        return render_tsv(report)
    raise ValueError(f"unknown report format: {fmt}")


def render_figures(report: EvalReport, outdir: str | Path) -> list[Path]:
    """Write one grouped P/R/F bar chart per aggregate block.

    Returns the paths written.  Uses the Agg backend so it works headless.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for label, stages in (("micro", report.micro), ("macro", report.macro)):
        if stages is None:
            continue
        fig, ax = plt.subplots(figsize=(6.4, 4.0))
        width = 0.25
        positions = range(len(_STAGE_ATTRS))
        for k, (metric_label, attr) in enumerate(_METRIC_ATTRS):
            values = [
                100 * getattr(getattr(stages, stage), attr) for stage in _STAGE_ATTRS
            ]
            ax.bar(
                [p + (k - 1) * width for p in positions],
                values,
                width=width,
                label=metric_label,
            )
        ax.set_xticks(list(positions))
        ax.set_xticklabels(_COLUMNS)
        ax.set_ylim(0, 105)
        ax.set_ylabel("score (%)")
        ax.set_title(f"{label} average")
        ax.legend(loc="lower right")
        fig.tight_layout()
        path = outdir / f"scores_{label}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)
    return written
