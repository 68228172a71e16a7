from hypothesis import given, settings
from hypothesis import strategies as st

from peoplelink.tokenizer import tokenize


def texts_and_sentences(raw):
    doc = tokenize("T", raw)
    return [t.text for t in doc.tokens], [t.sentence_index for t in doc.tokens]


def test_simple_sentence():
    texts, sentences = texts_and_sentences("He ran.")
    assert texts == ["He", "ran", "."]
    assert sentences == [0, 0, 0]


def test_empty_input():
    assert tokenize("T", "").tokens == ()


def test_abbreviation_keeps_period_and_does_not_split_sentence():
    texts, sentences = texts_and_sentences("Dr. Smith left. She returned.")
    assert texts == ["Dr.", "Smith", "left", ".", "She", "returned", "."]
    assert sentences == [0, 0, 0, 0, 1, 1, 1]


def test_punctuation_is_single_character_tokens():
    texts, _ = texts_and_sentences("(born 1461), a soldier")
    assert texts == ["(", "born", "1461", ")", ",", "a", "soldier"]


def test_internal_apostrophe_and_hyphen():
    texts, _ = texts_and_sentences("Jean-Paul met O'Brien's dog")
    assert texts == ["Jean-Paul", "met", "O'Brien's", "dog"]


def test_trailing_apostrophe_is_its_own_token():
    texts, _ = texts_and_sentences("the Years' end")
    assert texts == ["the", "Years", "'", "end"]


def test_terminal_run_stays_in_one_sentence():
    texts, sentences = texts_and_sentences("What?! Really.")
    assert texts == ["What", "?", "!", "Really", "."]
    assert sentences == [0, 0, 0, 1, 1]


def test_exclamation_and_question_split_sentences():
    _, sentences = texts_and_sentences("Go! Stop? Fine.")
    assert sentences == [0, 0, 1, 1, 2, 2]


def test_diacritics_stay_in_one_token():
    texts, _ = texts_and_sentences("Miséricorde and Zoë")
    assert texts == ["Miséricorde", "and", "Zoë"]


def test_offsets_slice_back_to_token_text():
    raw = "Dr. Smith left. She returned."
    doc = tokenize("T", raw)
    for tok in doc.tokens:
        assert raw[tok.char_start : tok.char_end] == tok.text


_raw_text = st.text(
    alphabet=st.characters(blacklist_categories=("Cs",)),
    max_size=60,
)


@settings(max_examples=300)
@given(_raw_text)
def test_concatenation_equals_source_without_whitespace(raw):
    doc = tokenize("T", raw)
    joined = "".join(t.text for t in doc.tokens)
    assert joined == "".join(ch for ch in raw if not ch.isspace())


@settings(max_examples=300)
@given(_raw_text)
def test_offsets_strictly_increasing_and_nonoverlapping(raw):
    doc = tokenize("T", raw)
    prev_end = 0
    for tok in doc.tokens:
        assert tok.char_start >= prev_end
        assert tok.char_start < tok.char_end
        assert doc.source_text[tok.char_start : tok.char_end] == tok.text
        prev_end = tok.char_end


@settings(max_examples=300)
@given(_raw_text)
def test_sentence_indices_contiguous_from_zero(raw):
    doc = tokenize("T", raw)
    if not doc.tokens:
        return
    indices = [t.sentence_index for t in doc.tokens]
    assert indices[0] == 0
    for a, b in zip(indices, indices[1:]):
        assert b in (a, a + 1)
