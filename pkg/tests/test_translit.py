import pytest
from hypothesis import given
from hypothesis import strategies as st

from codemix.corpus import LangTag, normalize_and_tokenize
from codemix.translit import (
    TranslitReport,
    TranslitScheme,
    default_scheme,
    load_override_map,
    load_scheme,
    romanize_sentence,
    transliterate,
)

HI = LangTag.matrix("hi")
SCHEME = default_scheme()


@pytest.mark.parametrize("dev,roman", [
    ("है", "hai"),
    ("एक", "ek"),
    ("नहीं", "nahin"),
    ("यह", "yah"),
    ("सुरक्षा", "suraksha"),
    ("प्रमाणपत्र", "pramanapatr"),
    ("हिंदी", "hindi"),
    ("ज़रा", "zara"),
    ("क्", "k"),
])
def test_common_words(dev, roman):
    assert transliterate(dev, SCHEME) == roman


def test_latin_passthrough():
    assert transliterate("security", SCHEME) == "security"
    assert transliterate("Delhi-NCR", SCHEME) == "Delhi-NCR"


@given(st.text(alphabet=st.characters(min_codepoint=0x20, max_codepoint=0x7E), min_size=1, max_size=20))
def test_ascii_is_fixed_point(token):
    assert transliterate(token, SCHEME) == token


def test_idempotent_on_own_output():
    for w in ["नहीं", "सुरक्षा", "प्रमाणपत्र"]:
        once = transliterate(w, SCHEME)
        assert transliterate(once, SCHEME) == once


def test_override_wins():
    assert transliterate("नहीं", SCHEME, overrides={"नहीं": "nahi"}) == "nahi"
    # override is exact-match; other words unaffected
    assert transliterate("है", SCHEME, overrides={"नहीं": "nahi"}) == "hai"


def test_schwa_deletion_toggle():
    off = TranslitScheme(SCHEME.rules, schwa_deletion=False)
    assert transliterate("एक", off) == "eka"
    assert transliterate("एक", SCHEME) == "ek"
    # matra-final words are unaffected by the toggle
    assert transliterate("हिंदी", off) == "hindi"


def test_unknown_characters_counted_and_passed_through():
    report = TranslitReport()
    assert transliterate("।", SCHEME, report=report) == "।"
    assert report.unknown["।"] == 1
    transliterate("॥", SCHEME, report=report)
    assert report.unknown["॥"] == 1
    assert report.unknown["।"] == 1


def test_romanize_sentence_matrix_only():
    sent = normalize_and_tokenize("यह security नहीं है ।", HI)
    report = TranslitReport()
    out = romanize_sentence(sent, SCHEME, report=report)
    assert out.surfaces == ("yah", "security", "nahin", "hai", "।")
    flags = [t.transliterated for t in out.tokens]
    assert flags == [True, True, True, True, False]
    assert out.tokens[4].lang.is_neutral
    assert report.tokens == 4


def test_romanize_leaves_embedded_tokens():
    sent = normalize_and_tokenize("यह नहीं", HI)
    toks = list(sent.tokens)
    toks[1] = toks[1].__class__("certificate", LangTag.embedded("en"))
    out = romanize_sentence(sent.__class__(sent.sid, tuple(toks)), SCHEME)
    assert out.surfaces == ("yah", "certificate")
    assert out.tokens[1].transliterated is False


def test_romanize_empty_result_rejected():
    # a scheme rule may legitimately emit nothing (e.g. silent signs), but a
    # whole token must never vanish
    eater = TranslitScheme((("्", ""), ("क", "ka")), schwa_deletion=False)
    sent = normalize_and_tokenize("् क", HI)
    with pytest.raises(ValueError, match="nothing"):
        romanize_sentence(sent, eater)


def test_load_scheme_longest_match_wins(tmp_path):
    path = tmp_path / "scheme.tsv"
    path.write_text("क\tka\nख\tkha\nखा\tkha\nा\ta\n", encoding="utf-8")
    s = load_scheme(path)
    assert transliterate("खा", s) == "kha"  # combo rule, not kha+a
    assert transliterate("क", s) == "k"  # terminal schwa drops
    s = load_scheme(path, schwa_deletion=False)
    assert transliterate("क", s) == "ka"


def test_load_scheme_errors(tmp_path):
    bad = tmp_path / "bad.tsv"
    bad.write_text("क\tka\textra\n", encoding="utf-8")
    with pytest.raises(ValueError, match="line 1"):
        load_scheme(bad)
    nonascii = tmp_path / "nonascii.tsv"
    nonascii.write_text("क\tकa\n", encoding="utf-8")
    with pytest.raises(ValueError, match="ASCII"):
        load_scheme(nonascii)


def test_load_override_map(tmp_path):
    path = tmp_path / "ov.tsv"
    path.write_text("नहीं\tnahi\nनहीं\tnahee\nहै\thai\n", encoding="utf-8")
    report = TranslitReport()
    ov = load_override_map(path, report=report)
    assert ov["नहीं"] == "nahee"  # last entry wins
    assert report.duplicate_overrides == ["नहीं"]
