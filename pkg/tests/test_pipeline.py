from peoplelink.linker import FixtureSearchClient
from peoplelink.mentions import MentionSource, NerLabel
from peoplelink.pipeline import (
    detect_document,
    link_document,
    list_corpus_titles,
    load_bundle,
    run_document,
)


def test_list_corpus_titles_sorted(fixtures_dir):
    titles = list_corpus_titles(fixtures_dir / "corpus")
    assert titles == sorted(titles)
    assert "Helena_of_Varnel" in titles


def test_load_bundle_with_standoff_and_gold(fixtures_dir):
    bundle = load_bundle(
        "Dorian_Voss",
        fixtures_dir / "corpus",
        fixtures_dir / "profiles",
        fixtures_dir / "standoff",
        fixtures_dir / "gold",
    )
    assert bundle.profile.wiki_title == "Dorian_Voss"
    assert bundle.annotations.coref_chains
    assert bundle.gold is not None
    assert len(bundle.gold.rows) == len(bundle.doc.tokens)


def test_load_bundle_falls_back_to_heuristic(fixtures_dir):
    bundle = load_bundle(
        "Marta_Ellerby", fixtures_dir / "corpus", fixtures_dir / "profiles"
    )
    person = [s for s in bundle.annotations.ner_spans if s.label is NerLabel.PERSON]
    assert [(s.start, s.end) for s in person] == [(0, 2), (7, 8)]
    assert bundle.annotations.coref_chains == ()


def test_detect_document_separates_names_and_pronouns(fixtures_dir):
    bundle = load_bundle(
        "Dorian_Voss",
        fixtures_dir / "corpus",
        fixtures_dir / "profiles",
        fixtures_dir / "standoff",
    )
    names, pronouns = detect_document(bundle)
    assert [(s.start, s.end) for s in names] == [(0, 2)]
    by_source = {s.source: s for s in pronouns}
    chain = by_source[MentionSource.BASE_COREF]
    assert (chain.start, chain.chain_rep) == (9, (0, 2))
    assert chain.subject_hint is None  # representative overlaps a detected name
    sieve = by_source[MentionSource.GENDER_SIEVE]
    assert (sieve.start, sieve.subject_hint) == (12, "Dorian_Voss")


def test_link_document_inherits_chain_link(fixtures_dir):
    bundle = load_bundle(
        "Dorian_Voss",
        fixtures_dir / "corpus",
        fixtures_dir / "profiles",
        fixtures_dir / "standoff",
    )
    names, pronouns = detect_document(bundle)
    client = FixtureSearchClient({"Dorian Voss": ["Dorian_Voss"]})
    links = link_document(bundle, names, pronouns, "wikisearch", search_client=client)
    assert [(l.span.start, l.title) for l in links] == [
        (0, "Dorian_Voss"),
        (9, "Dorian_Voss"),
        (12, "Dorian_Voss"),
    ]


def test_run_document_rows_align_with_gold(fixtures_dir):
    bundle = load_bundle(
        "Priya_Mehta",
        fixtures_dir / "corpus",
        fixtures_dir / "profiles",
        fixtures_dir / "standoff",
        fixtures_dir / "gold",
    )
    client = FixtureSearchClient({"Priya Mehta": ["Priya_Mehta"]})
    rows = run_document(bundle, "wikisearch", search_client=client)
    assert [r.token_text for r in rows] == [r.token_text for r in bundle.gold.rows]
    assert rows == list(bundle.gold.rows)
