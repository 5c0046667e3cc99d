"""Core corpus types and file formats.

Tokens carry a language tag (matrix language, embedded language, or
neutral) so that downstream mixing metrics never have to guess. All types
are immutable after construction; loaders validate eagerly and name the
offending path and line.

File conventions used across the package:
  * plain parallel text: one sentence per line, UTF-8, LF newlines
  * tagged sentences: TSV rows "token<TAB>POS", blank line between sentences
  * language-tag sidecar: one line per sentence, one label per token,
    labels drawn from {matrix code, embedded code, "O"}
"""
from __future__ import annotations

import os
import string
import tempfile
import unicodedata
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

# ASCII punctuation plus the Devanagari danda. Tokens made entirely of
# these characters are neutral for mixing metrics.
PUNCT_CHARS = frozenset(string.punctuation) | {"।"}

_ROLES = ("matrix", "embedded", "neutral")


@dataclass(frozen=True, slots=True)
class LangTag:
    """Language tag of one token: which side it belongs to, and the ISO code."""

    role: str
    code: str | None = None

    def __post_init__(self) -> None:
        if self.role not in _ROLES:
            raise ValueError(f"unknown role {self.role!r}")
        if self.role == "neutral":
            if self.code is not None:
                raise ValueError("neutral tags carry no language code")
        elif not self.code or not self.code.isalpha() or not self.code.islower():
            raise ValueError(f"language code must be lowercase letters, got {self.code!r}")

    @classmethod
    def matrix(cls, code: str) -> "LangTag":
        return cls("matrix", code)

    @classmethod
    def embedded(cls, code: str) -> "LangTag":
        return cls("embedded", code)

    @classmethod
    def neutral(cls) -> "LangTag":
        return cls("neutral")

    @property
    def is_neutral(self) -> bool:
        return self.role == "neutral"

    @property
    def label(self) -> str:
        """Sidecar-file label: the language code, or "O" for neutral."""
        return "O" if self.code is None else self.code


NEUTRAL = LangTag.neutral()


@dataclass(frozen=True, slots=True)
class TaggedToken:
    surface: str
    lang: LangTag
    pos: str | None = None
    transliterated: bool = False

    def __post_init__(self) -> None:
        if not self.surface:
            raise ValueError("empty token surface")
        if any(ch.isspace() for ch in self.surface):
            raise ValueError(f"token surface contains whitespace: {self.surface!r}")
        if unicodedata.normalize("NFC", self.surface) != self.surface:
            raise ValueError(f"token surface not NFC-normalized: {self.surface!r}")
        if self.transliterated and self.lang.role != "matrix":
            raise ValueError("only matrix-language tokens can be marked transliterated")


@dataclass(frozen=True, slots=True)
class Sentence:
    sid: int
    tokens: tuple[TaggedToken, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.sid < 0:
            raise ValueError(f"sentence id must be non-negative, got {self.sid}")

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def surfaces(self) -> tuple[str, ...]:
        return tuple(t.surface for t in self.tokens)

    @property
    def text(self) -> str:
        return " ".join(self.surfaces)


@dataclass(frozen=True, slots=True)
class ParallelPair:
    source: Sentence
    target: Sentence

    def __post_init__(self) -> None:
        if self.source.sid != self.target.sid:
            raise ValueError(
                f"source/target sentence ids differ: {self.source.sid} vs {self.target.sid}"
            )

    @property
    def sid(self) -> int:
        return self.source.sid


def _is_punct(chunk: str) -> bool:
    return all(ch in PUNCT_CHARS for ch in chunk)


def normalize_and_tokenize(text: str, lang: LangTag, sid: int = 0) -> Sentence:
    """NFC-normalize and split a raw line into tagged tokens.

    Splits on Unicode whitespace; every punctuation character (ASCII set
    plus the danda) becomes its own neutral token. Running the result
    through this function again yields the same tokens.
    """
    normalized = unicodedata.normalize("NFC", text)
    tokens: list[TaggedToken] = []
    for chunk in normalized.split():
        run = []
        for ch in chunk:
            if ch in PUNCT_CHARS:
                if run:
                    tokens.append(TaggedToken("".join(run), lang))
                    run = []
                tokens.append(TaggedToken(ch, NEUTRAL))
            else:
                run.append(ch)
        if run:
            tokens.append(TaggedToken("".join(run), lang))
    return Sentence(sid, tuple(tokens))


@contextmanager
def atomic_open(path: str | Path) -> Iterator:
    """Write to a temp file in the same directory, rename into place on success.

    A failed write never leaves a partial file at the destination.
    """
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=path.name + ".", suffix=".tmp")
    handle = os.fdopen(fd, "w", encoding="utf-8", newline="\n")
    try:
        yield handle
        handle.close()
        os.replace(tmp, path)
    except BaseException:
        handle.close()
        os.unlink(tmp)
        raise


def _read_lines(path: str | Path) -> list[str]:
    return Path(path).read_text(encoding="utf-8").splitlines()


def load_parallel(
    src_path: str | Path,
    tgt_path: str | Path,
    src_lang: LangTag = LangTag.matrix("hi"),
    tgt_lang: LangTag = LangTag.embedded("en"),
) -> list[ParallelPair]:
    """Load a line-aligned bitext. Sentence ids are assigned by line number."""
    src_lines = _read_lines(src_path)
    tgt_lines = _read_lines(tgt_path)
    if len(src_lines) != len(tgt_lines):
        raise ValueError(
            f"line count mismatch: {src_path} has {len(src_lines)} lines, "
            f"{tgt_path} has {len(tgt_lines)}"
        )
    pairs = []
    for i, (src, tgt) in enumerate(zip(src_lines, tgt_lines)):
        if not src.strip():
            raise ValueError(f"{src_path}: blank line {i + 1}")
        if not tgt.strip():
            raise ValueError(f"{tgt_path}: blank line {i + 1}")
        pairs.append(
            ParallelPair(
                normalize_and_tokenize(src, src_lang, sid=i),
                normalize_and_tokenize(tgt, tgt_lang, sid=i),
            )
        )
    return pairs


def load_tagged(path: str | Path, lang: LangTag = LangTag.matrix("hi")) -> list[Sentence]:
    """Load POS-tagged sentences from TSV blocks.

    Each row is "token<TAB>tag"; a blank line closes a sentence. Surfaces
    are stored verbatim (NFC-checked, not re-tokenized), so writing and
    reloading round-trips byte-exactly. Tokens consisting entirely of
    punctuation characters are tagged neutral.
    """
    sentences: list[Sentence] = []
    block: list[TaggedToken] = []
    for lineno, line in enumerate(_read_lines(path), start=1):
        if not line.strip():
            if block:
                sentences.append(Sentence(len(sentences), tuple(block)))
                block = []
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise ValueError(f"{path}: line {lineno}: expected 2 tab-separated columns, got {len(cols)}")
        surface, pos = cols
        if not surface or not pos:
            raise ValueError(f"{path}: line {lineno}: empty token or tag")
        tok_lang = NEUTRAL if _is_punct(surface) else lang
        block.append(TaggedToken(surface, tok_lang, pos=pos))
    if block:
        sentences.append(Sentence(len(sentences), tuple(block)))
    return sentences


def write_tagged(sentences: Iterable[Sentence], path: str | Path) -> None:
    with atomic_open(path) as fh:
        for sent in sentences:
            for tok in sent.tokens:
                fh.write(f"{tok.surface}\t{tok.pos or ''}\n")
            fh.write("\n")


def write_plain(sentences: Iterable[Sentence], path: str | Path) -> None:
    with atomic_open(path) as fh:
        for sent in sentences:
            fh.write(sent.text + "\n")


def write_lang_tags(sentences: Iterable[Sentence], path: str | Path) -> None:
    """Write the language-tag sidecar: one label per token, one line per sentence."""
    with atomic_open(path) as fh:
        for sent in sentences:
            fh.write(" ".join(tok.lang.label for tok in sent.tokens) + "\n")


def read_lang_tags(
    path: str | Path, matrix_code: str, embedded_code: str
) -> list[list[LangTag]]:
    rows: list[list[LangTag]] = []
    matrix = LangTag.matrix(matrix_code)
    embedded = LangTag.embedded(embedded_code)
    for lineno, line in enumerate(_read_lines(path), start=1):
        tags = []
        for label in line.split():
            if label == matrix_code:
                tags.append(matrix)
            elif label == embedded_code:
                tags.append(embedded)
            elif label == "O":
                tags.append(NEUTRAL)
            else:
                raise ValueError(f"{path}: line {lineno}: unknown language label {label!r}")
        rows.append(tags)
    return rows
