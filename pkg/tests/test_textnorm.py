from sessiontopics import default_stopwords, tokenize
from sessiontopics.textnorm import MIN_TOKEN_CHARS, load_stopword_file


def test_lowercases_and_splits_on_non_alphanumeric():
    assert tokenize("Labour-Market POLICY", stopwords=()) == ["labour", "market", "policy"]


def test_drops_short_tokens():
    assert MIN_TOKEN_CHARS == 4
    assert tokenize("a im the ok gap word", stopwords=()) == ["word"]


def test_drops_stop_words():
    assert tokenize("the family and the state", stopwords={"the", "and"}) == [
        "family",
        "state",
    ]


def test_default_stopwords_cover_english_and_german():
    stop = default_stopwords()
    assert "with" in stop
    assert "durch" in stop
    # "early" would otherwise dominate title matching on early-childhood records
    assert "early" in stop


def test_none_means_default_lists():
    assert tokenize("early childhood") == ["childhood"]
    assert tokenize("early childhood", stopwords=()) == ["early", "childhood"]


def test_underscore_is_a_separator():
    assert tokenize("snake_case_name", stopwords=()) == ["snake", "case", "name"]


def test_umlauts_survive():
    assert tokenize("Beschäftigungsförderung", stopwords=()) == ["beschäftigungsförderung"]


def test_digits_count_as_token_characters():
    assert tokenize("census 2011 wave", stopwords=()) == ["census", "2011", "wave"]


def test_order_preserved_and_duplicates_kept():
    assert tokenize("market reform market", stopwords=()) == ["market", "reform", "market"]


def test_stopword_file_skips_comments_and_blanks(tmp_path):
    path = tmp_path / "stop.txt"
    path.write_text("# header\n\nThe\nvon\n", encoding="utf-8")
    assert load_stopword_file(path) == frozenset({"the", "von"})
