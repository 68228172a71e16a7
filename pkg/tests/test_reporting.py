import json

from peoplelink.reporting import render_figures, render_json, render_report, render_text, render_tsv
from peoplelink.scoring import EvalStages, StageScores, build_report


def sample_report(average="both"):
    s = StageScores.from_counts(3, 1, 0)
    per_doc = {"B_Doc": EvalStages(s, s, s), "A_Doc": EvalStages(s, s, s)}
    return build_report(per_doc, average)


def test_text_report_has_blocks_and_percentages():
    text = render_text(sample_report())
    assert "== micro average ==" in text
    assert "== macro average ==" in text
    assert "== A_Doc ==" in text
    assert "Mention Detection" in text
    assert "75.0" in text  # precision 3/4
    # documents come out sorted
    assert text.index("A_Doc") < text.index("B_Doc")


def test_json_report_round_trips():
    payload = json.loads(render_json(sample_report()))
    assert set(payload) == {"documents", "micro", "macro"}
    assert payload["documents"]["A_Doc"]["ner"]["tp"] == 3
    assert payload["micro"]["linking"]["precision"] == 0.75


def test_tsv_report_shape():
    lines = render_tsv(sample_report()).splitlines()
    assert lines[0] == "document\tstage\ttp\tfp\tfn\tprecision\trecall\tf1"
    # 2 docs * 3 stages + 2 aggregates * 3 stages
    assert len(lines) == 1 + 6 + 6
    assert lines[-1].startswith("__macro__\tlinking\t")


def test_render_report_dispatch():
    report = sample_report("micro")
    assert render_report(report, "text") == render_text(report)
    assert render_report(report, "json") == render_json(report)
    assert render_report(report, "tsv") == render_tsv(report)


def test_render_figures_writes_pngs(tmp_path):
    written = render_figures(sample_report(), tmp_path)
    assert [p.name for p in written] == ["scores_micro.png", "scores_macro.png"]
    for path in written:
        data = path.read_bytes()
        assert data.startswith(b"\x89PNG")
        assert len(data) > 1000


def test_render_figures_only_requested_average(tmp_path):
    written = render_figures(sample_report("macro"), tmp_path)
    assert [p.name for p in written] == ["scores_macro.png"]
