import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from peoplelink.corpus import (
    Gender,
    GoldDocument,
    GoldRow,
    parse_gold_tsv,
    parse_profile_xml,
    write_gold_tsv,
)
from peoplelink.errors import (
    IllegalFlagError,
    InvariantViolationError,
    LinkWithoutMentionError,
    MalformedXmlError,
    MissingDocHeaderError,
    MissingRequiredFieldError,
    NotUtf8Error,
    WrongColumnCountError,
)

TWO_ROW_GOLD = b"#doc Ada_Quill\nAda\tY\tY\tAda_Quill\ncooks\t\t\t"


def test_parse_two_row_document():
    doc = parse_gold_tsv(TWO_ROW_GOLD)
    assert doc.page_title == "Ada_Quill"
    assert doc.rows == (
        GoldRow("Ada", True, True, "Ada_Quill"),
        GoldRow("cooks", False, False, None),
    )


def test_parse_blank_line_is_sentence_separator():
    data = b"#doc T\na\tY\tY\t\n\nb\t\t\t\n"
    doc = parse_gold_tsv(data)
    assert [r.token_text for r in doc.rows] == ["a", "b"]


def test_parse_empty_input_missing_header():
    with pytest.raises(MissingDocHeaderError):
        parse_gold_tsv(b"")


def test_parse_header_without_title():
    with pytest.raises(MissingDocHeaderError):
        parse_gold_tsv(b"#doc \n")


def test_parse_wrong_column_count():
    with pytest.raises(WrongColumnCountError) as exc:
        parse_gold_tsv(b"#doc T\na\tY\tY\n")
    assert exc.value.line_no == 2


def test_parse_illegal_flag_value():
    with pytest.raises(IllegalFlagError):
        parse_gold_tsv(b"#doc T\na\tX\t\t\n")


def test_parse_name_without_mention_is_illegal():
    with pytest.raises(IllegalFlagError):
        parse_gold_tsv(b"#doc T\na\tY\t\t\n")


def test_parse_link_without_mention():
    with pytest.raises(LinkWithoutMentionError) as exc:
        parse_gold_tsv(b"#doc T\na\t\t\tAda_Quill\n")
    assert exc.value.line_no == 2


def test_parse_not_utf8():
    with pytest.raises(NotUtf8Error):
        parse_gold_tsv(b"#doc T\n\xff\xfe\t\t\t\n")


def test_parse_tolerates_crlf():
    doc = parse_gold_tsv(b"#doc T\r\na\tY\tY\tA_B\r\n")
    assert doc.page_title == "T"
    assert doc.rows[0].link == "A_B"


def test_write_round_trips_two_row_document():
    doc = parse_gold_tsv(TWO_ROW_GOLD)
    data = write_gold_tsv(doc)
    assert data == TWO_ROW_GOLD + b"\n"
    assert parse_gold_tsv(data) == doc


def test_write_empty_document_is_header_only():
    assert write_gold_tsv(GoldDocument("T", ())) == b"#doc T\n"


@pytest.mark.parametrize(
    "row",
    [
        GoldRow("a\tb", False, False, None),
        GoldRow("a", True, False, None),
        GoldRow("a", False, False, "X"),
        GoldRow("a", False, True, ""),
        GoldRow("a", False, True, "X\tY"),
    ],
)
def test_write_rejects_invariant_violations(row):
    with pytest.raises(InvariantViolationError):
        write_gold_tsv(GoldDocument("T", (row,)))


def test_write_rejects_empty_title():
    with pytest.raises(InvariantViolationError):
        write_gold_tsv(GoldDocument("", ()))


_token_text = st.text(
    alphabet=st.characters(blacklist_characters="\t\r\n", blacklist_categories=("Cs",)),
    min_size=1,
    max_size=8,
)
_link = st.one_of(st.none(), st.text(alphabet="ABab_0", min_size=1, max_size=6))


@st.composite
def gold_documents(draw):
    rows = []
    for _ in range(draw(st.integers(0, 12))):
        is_name = draw(st.booleans())
        is_mention = is_name or draw(st.booleans())
        link = draw(_link) if is_mention else None
        rows.append(GoldRow(draw(_token_text), is_name, is_mention, link))
    title = draw(st.text(alphabet="ABab_0", min_size=1, max_size=10))
    return GoldDocument(title, tuple(rows))


@settings(max_examples=200)
@given(gold_documents())
def test_round_trip_identity(doc):
    assert parse_gold_tsv(write_gold_tsv(doc)) == doc


@settings(max_examples=200)
@given(gold_documents())
def test_column_monotonicity(doc):
    parsed = parse_gold_tsv(write_gold_tsv(doc))
    names = sum(r.is_name for r in parsed.rows)
    mentions = sum(r.is_mention for r in parsed.rows)
    assert names <= mentions <= len(parsed.rows)
    assert all(r.is_mention for r in parsed.rows if r.link)


PROFILE_XML = b"""<person>
  <wikiTitle>Helena_of_Varnel</wikiTitle>
  <firstName>Helena</firstName>
  <gender>female</gender>
</person>
"""


def test_parse_profile_minimal():
    profile = parse_profile_xml(PROFILE_XML)
    assert profile.wiki_title == "Helena_of_Varnel"
    assert profile.first_name == "Helena"
    assert profile.gender is Gender.FEMALE
    assert profile.middle_name is None
    assert profile.last_name is None
    assert profile.aliases == ()


def test_parse_profile_full():
    data = b"""<person>
      <wikiTitle>Tomas_Reyes</wikiTitle>
      <firstName>Tomas</firstName>
      <middleName>Aurelio</middleName>
      <lastName>Reyes</lastName>
      <gender>MALE</gender>
      <profession>actor</profession>
      <profession>producer</profession>
      <alias>Rex Volt</alias>
      <nickname>Tom</nickname>
    </person>"""
    profile = parse_profile_xml(data)
    assert profile.gender is Gender.MALE
    assert profile.professions == ("actor", "producer")
    assert profile.aliases == ("Rex Volt",)
    assert profile.nicknames == ("Tom",)
    assert profile.name_parts() == ["Tomas", "Aurelio", "Reyes"]


def test_parse_profile_gender_defaults_to_unknown():
    data = b"<person><wikiTitle>T</wikiTitle><firstName>A</firstName></person>"
    assert parse_profile_xml(data).gender is Gender.UNKNOWN
    data = b"<person><wikiTitle>T</wikiTitle><firstName>A</firstName><gender>nb</gender></person>"
    assert parse_profile_xml(data).gender is Gender.UNKNOWN


def test_parse_profile_missing_first_name():
    data = b"<person><wikiTitle>T</wikiTitle></person>"
    with pytest.raises(MissingRequiredFieldError) as exc:
        parse_profile_xml(data)
    assert exc.value.field == "firstName"


def test_parse_profile_missing_wiki_title():
    data = b"<person><firstName>A</firstName></person>"
    with pytest.raises(MissingRequiredFieldError) as exc:
        parse_profile_xml(data)
    assert exc.value.field == "wikiTitle"


def test_parse_profile_malformed_xml():
    with pytest.raises(MalformedXmlError):
        parse_profile_xml(b"<person><wikiTitle>T</wikiTitle>")
    with pytest.raises(MalformedXmlError):
        parse_profile_xml(b"<notperson/>")
