import pytest
from hypothesis import given, strategies as st

from codemix.corpus import (
    LangTag,
    NEUTRAL,
    ParallelPair,
    Sentence,
    TaggedToken,
    atomic_open,
    load_parallel,
    load_tagged,
    normalize_and_tokenize,
    read_lang_tags,
    write_lang_tags,
    write_plain,
    write_tagged,
)

HI = LangTag.matrix("hi")
EN = LangTag.embedded("en")


def test_tokenize_devanagari_with_danda():
    sent = normalize_and_tokenize("यह सुरक्षा प्रमाणपत्र विश्वशनीय नहीं है।", HI)
    assert sent.surfaces == ("यह", "सुरक्षा", "प्रमाणपत्र", "विश्वशनीय", "नहीं", "है", "।")
    assert sent.tokens[-1].lang is NEUTRAL
    assert all(t.lang == HI for t in sent.tokens[:-1])


def test_tokenize_splits_each_punct_char():
    sent = normalize_and_tokenize("a.b,c", EN)
    assert sent.surfaces == ("a", ".", "b", ",", "c")
    sent = normalize_and_tokenize("wait...", EN)
    assert sent.surfaces == ("wait", ".", ".", ".")
    assert [t.lang.label for t in sent.tokens] == ["en", "O", "O", "O"]


def test_tokenize_nfc_normalizes():
    # e + combining acute composes to a single codepoint
    sent = normalize_and_tokenize("café", EN)
    assert sent.surfaces == ("café",)


def test_tokenize_idempotent_on_own_output():
    sent = normalize_and_tokenize("Yeh security certificate trusted nahi hai.", HI)
    again = normalize_and_tokenize(sent.text, HI)
    assert again.surfaces == sent.surfaces


@given(st.text(max_size=40))
def test_tokenize_idempotent_property(text):
    sent = normalize_and_tokenize(text, HI)
    assert normalize_and_tokenize(sent.text, HI).surfaces == sent.surfaces


def test_token_validation():
    with pytest.raises(ValueError):
        TaggedToken("", HI)
    with pytest.raises(ValueError):
        TaggedToken("a b", HI)
    with pytest.raises(ValueError):
        TaggedToken("ok", EN, transliterated=True)
    with pytest.raises(ValueError):
        LangTag("matrix", None)
    with pytest.raises(ValueError):
        LangTag("neutral", "hi")
    with pytest.raises(ValueError):
        Sentence(-1, ())


def test_pair_requires_matching_ids():
    a = Sentence(0, (TaggedToken("x", HI),))
    b = Sentence(1, (TaggedToken("y", EN),))
    with pytest.raises(ValueError):
        ParallelPair(a, b)


def test_load_parallel(tmp_path):
    src = tmp_path / "s.txt"
    tgt = tmp_path / "t.txt"
    src.write_text("यह है ।\nएक घर ।\n", encoding="utf-8")
    tgt.write_text("this is .\na house .\n", encoding="utf-8")
    pairs = load_parallel(src, tgt)
    assert len(pairs) == 2
    assert pairs[0].sid == 0 and pairs[1].sid == 1
    assert pairs[1].target.surfaces == ("a", "house", ".")
    assert pairs[0].source.tokens[0].lang == HI


def test_load_parallel_count_mismatch_names_both(tmp_path):
    src = tmp_path / "s.txt"
    tgt = tmp_path / "t.txt"
    src.write_text("a\nb\n", encoding="utf-8")
    tgt.write_text("x\n", encoding="utf-8")
    with pytest.raises(ValueError, match=r"2 lines.*1"):
        load_parallel(src, tgt)


def test_load_parallel_blank_line(tmp_path):
    src = tmp_path / "s.txt"
    tgt = tmp_path / "t.txt"
    src.write_text("a\n\n", encoding="utf-8")
    tgt.write_text("x\ny\n", encoding="utf-8")
    with pytest.raises(ValueError, match="blank line 2"):
        load_parallel(src, tgt)


def test_tagged_round_trip_byte_exact(tmp_path):
    path = tmp_path / "tagged.tsv"
    path.write_text("यह\tDEM\nसुरक्षा\tNN\n।\tSYM\n\nएक\tQC\n\n", encoding="utf-8")
    sents = load_tagged(path)
    assert len(sents) == 2
    assert sents[0].tokens[1].pos == "NN"
    assert sents[0].tokens[2].lang is NEUTRAL  # punctuation row
    out = tmp_path / "copy.tsv"
    write_tagged(sents, out)
    assert out.read_bytes() == path.read_bytes()


def test_tagged_bad_rows(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("only_one_column\n", encoding="utf-8")
    with pytest.raises(ValueError, match="line 1"):
        load_tagged(path)
    path.write_text("word\tNN\textra\n", encoding="utf-8")
    with pytest.raises(ValueError, match="got 3"):
        load_tagged(path)


def test_lang_tag_sidecar_round_trip(tmp_path):
    sent = normalize_and_tokenize("यह security है ।", HI)
    tokens = list(sent.tokens)
    tokens[1] = TaggedToken("security", EN)
    sent = Sentence(0, tuple(tokens))
    path = tmp_path / "tags.txt"
    write_lang_tags([sent], path)
    assert path.read_text(encoding="utf-8") == "hi en hi O\n"
    rows = read_lang_tags(path, "hi", "en")
    assert rows == [[HI, EN, HI, NEUTRAL]]


def test_lang_tag_unknown_label(tmp_path):
    path = tmp_path / "tags.txt"
    path.write_text("hi xx\n", encoding="utf-8")
    with pytest.raises(ValueError, match="xx"):
        read_lang_tags(path, "hi", "en")


def test_plain_write_round_trip(tmp_path):
    sent = normalize_and_tokenize("yah ghar hai .", HI)
    path = tmp_path / "plain.txt"
    write_plain([sent], path)
    tgt = tmp_path / "t.txt"
    tgt.write_text("x\n", encoding="utf-8")
    back = load_parallel(path, tgt)
    assert back[0].source.surfaces == sent.surfaces


def test_atomic_open_failure_leaves_nothing(tmp_path):
    path = tmp_path / "out.txt"
    with pytest.raises(RuntimeError):
        with atomic_open(path) as fh:
            fh.write("partial")
            raise RuntimeError("boom")
    assert not path.exists()
    assert list(tmp_path.iterdir()) == []
