"""Rule-based Devanagari romanization.

A scheme is an ordered list of (pattern, replacement) rewrite rules
applied greedily left to right, longest match first (file order breaks
length ties). Characters outside the Devanagari block pass through
unchanged, which makes the function a no-op on already-Latin tokens.
Devanagari characters with no rule also pass through but are counted on
the report, never dropped silently.

The shipped scheme spells each consonant with its inherent vowel
("क" -> "ka") and carries combined consonant+matra patterns so vowel
signs replace that vowel instead of stacking ("की" -> "ki"). With schwa
deletion on (the default), a word-final bare-consonant rule loses its
trailing "a": "एक" -> "eka" -> "ek".

There is no single romanized spelling of Hindi in the wild; outputs are
consistent with whatever scheme is loaded, nothing more. An override map
(exact token -> romanization) wins over the rules when supplied.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace as dc_replace
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .corpus import Sentence, TaggedToken

_DEVANAGARI_LO = 0x0900
_DEVANAGARI_HI = 0x097F

# Single codepoints whose bare rule carries the inherent vowel.
CONSONANTS = frozenset("कखगघङचछजझञटठडढणतथदधनपफबभमयरलवशषसहळ")


@dataclass(frozen=True)
class TranslitScheme:
    rules: tuple[tuple[str, str], ...]
    schwa_deletion: bool = True
    # pattern index: first char -> [(pattern, replacement)] longest first
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.rules:
            raise ValueError("empty rule table")
        index: dict[str, list[tuple[str, str]]] = {}
        for order, (pat, repl) in enumerate(self.rules):
            if not pat:
                raise ValueError("empty rule pattern")
            if any(not (c.isascii() and c.isalpha()) for c in repl):
                raise ValueError(f"rule output must be ASCII letters: {pat!r} -> {repl!r}")
            index.setdefault(pat[0], []).append((len(pat), order, pat, repl))
        object.__setattr__(
            self,
            "_index",
            {
                ch: [(p, r) for _, _, p, r in sorted(entries, key=lambda e: (-e[0], e[1]))]
                for ch, entries in index.items()
            },
        )


@dataclass
class TranslitReport:
    unknown: Counter = field(default_factory=Counter)
    duplicate_overrides: list[str] = field(default_factory=list)
    tokens: int = 0

    @property
    def unknown_total(self) -> int:
        return sum(self.unknown.values())


def _in_devanagari(ch: str) -> bool:
    return _DEVANAGARI_LO <= ord(ch) <= _DEVANAGARI_HI


def transliterate(
    token: str,
    scheme: TranslitScheme,
    overrides: Mapping[str, str] | None = None,
    report: TranslitReport | None = None,
) -> str:
    if overrides is not None and token in overrides:
        if report is not None:
            report.tokens += 1
        return overrides[token]
    out: list[str] = []
    pos = 0
    last_rule: tuple[str, str] | None = None
    while pos < len(token):
        hit = None
        for pat, repl in scheme._index.get(token[pos], ()):
            if token.startswith(pat, pos):
                hit = (pat, repl)
                break
        if hit is not None:
            out.append(hit[1])
            pos += len(hit[0])
            last_rule = hit
        else:
            ch = token[pos]
            if _in_devanagari(ch) and report is not None:
                report.unknown[ch] += 1
            out.append(ch)
            pos += 1
            last_rule = None
    result = "".join(out)
    if (
        scheme.schwa_deletion
        and last_rule is not None
        and len(last_rule[0]) == 1
        and last_rule[0] in CONSONANTS
        and last_rule[1].endswith("a")
        and result.endswith("a")
    ):
        result = result[:-1]
    if report is not None:
        report.tokens += 1
    return result


def romanize_sentence(
    sentence: Sentence,
    scheme: TranslitScheme,
    overrides: Mapping[str, str] | None = None,
    report: TranslitReport | None = None,
) -> Sentence:
    """Romanize matrix-language tokens; everything else passes through."""
    tokens = []
    for i, tok in enumerate(sentence.tokens):
        if tok.lang.role != "matrix":
            tokens.append(tok)
            continue
        roman = transliterate(tok.surface, scheme, overrides, report)
        if not roman:
            raise ValueError(
                f"sentence {sentence.sid}: token {i} ({tok.surface!r}) romanized to nothing"
            )
        tokens.append(dc_replace(tok, surface=roman, transliterated=True))
    return Sentence(sentence.sid, tuple(tokens))


def _parse_rows(lines: Iterable[str], what: str) -> list[tuple[str, str]]:
    rows = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise ValueError(f"{what}: line {lineno}: expected 2 tab-separated columns")
        rows.append((cols[0], cols[1]))
    return rows


def load_scheme(path: str | Path, schwa_deletion: bool = True) -> TranslitScheme:
    rows = _parse_rows(Path(path).read_text(encoding="utf-8").splitlines(), str(path))
    return TranslitScheme(tuple(rows), schwa_deletion)


@lru_cache(maxsize=None)
def default_scheme() -> TranslitScheme:
    text = resources.files("codemix.data").joinpath("translit_hi.tsv").read_text("utf-8")
    return TranslitScheme(tuple(_parse_rows(text.splitlines(), "translit_hi.tsv")), True)


def load_override_map(path: str | Path, report: TranslitReport | None = None) -> dict[str, str]:
    """Exact-token overrides. Duplicate keys: last one wins, with a warning."""
    out: dict[str, str] = {}
    for token, roman in _parse_rows(Path(path).read_text(encoding="utf-8").splitlines(), str(path)):
        if token in out and report is not None:
            report.duplicate_overrides.append(token)
        out[token] = roman
    return out
