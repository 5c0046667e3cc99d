"""Mixing metrics and translation quality scoring.

CMI follows Gambäck and Das (2016): per sentence, with n total tokens,
u neutral tokens and w_max the largest per-language token count,

    CMI = 0                          if n == u
    CMI = 100 * (1 - w_max / (n-u))  otherwise

SPF (switch-point fraction) is the number of adjacent language changes in
the non-neutral token subsequence divided by that subsequence's length
minus one, and 0 when fewer than two non-neutral tokens exist.

BLEU is corpus-level with clipped modified precisions up to 4-grams, a
geometric mean, the standard brevity penalty, and no smoothing.
"""
from __future__ import annotations

import math
import statistics
from collections import Counter
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

from .corpus import Sentence

if TYPE_CHECKING:
    from .generator import CMVariant


def cmi(sentence: Sentence) -> float:
    counts: Counter[str] = Counter()
    neutral = 0
    for tok in sentence.tokens:
        if tok.lang.is_neutral:
            neutral += 1
        else:
            counts[tok.lang.code] += 1
    n = len(sentence.tokens)
    if n == neutral:
        return 0.0
    w_max = max(counts.values())
    return 100.0 * (1.0 - w_max / (n - neutral))


def spf(sentence: Sentence) -> float:
    langs = [tok.lang.code for tok in sentence.tokens if not tok.lang.is_neutral]
    if len(langs) < 2:
        return 0.0
    switches = sum(1 for a, b in zip(langs, langs[1:]) if a != b)
    return switches / (len(langs) - 1)


@dataclass(frozen=True, slots=True)
class BleuResult:
    score: float
    precisions: tuple[float, ...]
    brevity_penalty: float
    hyp_length: int
    ref_length: int


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu_components(
    hypotheses: Sequence[Sentence], references: Sequence[Sentence], max_order: int = 4
) -> BleuResult:
    """Corpus BLEU with per-order precisions, on a 0-100 scale.

    Orders with no hypothesis n-grams anywhere in the corpus (every
    hypothesis shorter than n) are dropped from the geometric mean;
    any remaining order with zero matches sends the score to 0.
    """
    if len(hypotheses) != len(references):
        raise ValueError(
            f"hypothesis/reference counts differ: {len(hypotheses)} vs {len(references)}"
        )
    if not hypotheses:
        raise ValueError("empty corpus")
    matched = [0] * max_order
    total = [0] * max_order
    hyp_len = 0
    ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        h = hyp.surfaces
        r = ref.surfaces
        hyp_len += len(h)
        ref_len += len(r)
        for n in range(1, max_order + 1):
            hyp_counts = _ngrams(h, n)
            if not hyp_counts:
                continue
            ref_counts = _ngrams(r, n)
            total[n - 1] += sum(hyp_counts.values())
            matched[n - 1] += sum(min(c, ref_counts[g]) for g, c in hyp_counts.items())

    precisions = tuple(
        matched[i] / total[i] if total[i] else 0.0 for i in range(max_order)
    )
    if hyp_len == 0:
        raise ValueError("empty hypotheses")
    bp = 1.0 if hyp_len >= ref_len else math.exp(1.0 - ref_len / hyp_len)
    active = [precisions[i] for i in range(max_order) if total[i] > 0]
    if any(p == 0.0 for p in active):
        score = 0.0
    else:
        score = 100.0 * bp * math.exp(sum(math.log(p) for p in active) / len(active))
    return BleuResult(score, precisions, bp, hyp_len, ref_len)


def bleu(hypotheses: Sequence[Sentence], references: Sequence[Sentence]) -> float:
    return bleu_components(hypotheses, references).score


@dataclass(frozen=True, slots=True)
class CorpusStats:
    sentences: int
    unique_sentences: int
    mean_cmi: float
    mean_spf: float
    matrix_types: int
    embedded_types: int
    target_types: int
    token_mean: float
    token_median: float
    char_mean: float
    char_median: float

    def rows(self) -> list[tuple[str, str]]:
        """Report rows as (key, value) strings, in a fixed order."""
        def fmt(x: float) -> str:
            return f"{x:.4f}"

        return [
            ("sentences", str(self.sentences)),
            ("unique_sentences", str(self.unique_sentences)),
            ("mean_cmi", fmt(self.mean_cmi)),
            ("mean_spf", fmt(self.mean_spf)),
            ("matrix_src_types", str(self.matrix_types)),
            ("embedded_src_types", str(self.embedded_types)),
            ("target_types", str(self.target_types)),
            ("token_mean", fmt(self.token_mean)),
            ("token_median", fmt(self.token_median)),
            ("char_mean", fmt(self.char_mean)),
            ("char_median", fmt(self.char_median)),
        ]


def corpus_stats(records: Iterable[tuple["CMVariant", Sentence]]) -> CorpusStats:
    """Summarize a generated corpus.

    Token-level lengths count the code-mixed source tokens; char-level
    lengths are whole-line lengths of the space-joined source, spaces
    included. Per-language counts are distinct surfaces (types).
    """
    seen: set[str] = set()
    cmis: list[float] = []
    spfs: list[float] = []
    matrix_types: set[str] = set()
    embedded_types: set[str] = set()
    target_types: set[str] = set()
    tok_lens: list[int] = []
    char_lens: list[int] = []
    n = 0
    for variant, target in records:
        n += 1
        line = variant.cm.text
        seen.add(line)
        cmis.append(variant.cmi)
        spfs.append(variant.spf)
        tok_lens.append(len(variant.cm))
        char_lens.append(len(line))
        for tok in variant.cm.tokens:
            if tok.lang.role == "matrix":
                matrix_types.add(tok.surface)
            elif tok.lang.role == "embedded":
                embedded_types.add(tok.surface)
        for tok in target.tokens:
            if not tok.lang.is_neutral:
                target_types.add(tok.surface)
    if n == 0:
        return CorpusStats(0, 0, 0.0, 0.0, 0, 0, 0, 0.0, 0.0, 0.0, 0.0)
    return CorpusStats(
        sentences=n,
        unique_sentences=len(seen),
        mean_cmi=sum(cmis) / n,
        mean_spf=sum(spfs) / n,
        matrix_types=len(matrix_types),
        embedded_types=len(embedded_types),
        target_types=len(target_types),
        token_mean=sum(tok_lens) / n,
        token_median=float(statistics.median(tok_lens)),
        char_mean=sum(char_lens) / n,
        char_median=float(statistics.median(char_lens)),
    )
