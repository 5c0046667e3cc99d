"""Interpolated n-gram language model for fluency scoring.

The conditional estimate mixes maximum-likelihood components,

    P(w | h) = sum_k lambda_k * P_ML(w | last k-1 words of h)

with the lambda weights renormalized over components whose context was
seen in training (the unigram context always was), so conditionals sum
to 1 and are never 0. Training words seen once are mapped to an unknown
symbol; its unigram count is floored at 1 even on singleton-free data so
an all-unknown sentence still gets a finite perplexity.

Perplexity is exp(-mean log P) over the sentence tokens plus the
end-of-sentence symbol.
"""
from __future__ import annotations

import math
import pickle
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import Sentence
from .generator import CMVariant, Scorer

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"

MAGIC = b"CMLM1"

DEFAULT_LAMBDAS = {3: (0.5, 0.3, 0.2)}


@dataclass(frozen=True)
class NgramLM:
    order: int
    lambdas: tuple[float, ...]
    # counts[k-1]: k-gram tuple -> count; contexts[k-1]: (k-1)-gram -> count
    counts: tuple[dict, ...]
    contexts: tuple[dict, ...]
    vocab: frozenset[str]

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValueError(f"order must be >= 1, got {self.order}")
        if len(self.lambdas) != self.order:
            raise ValueError(f"need {self.order} lambdas, got {len(self.lambdas)}")
        if any(l <= 0 for l in self.lambdas) or abs(sum(self.lambdas) - 1.0) > 1e-9:
            raise ValueError(f"lambdas must be positive and sum to 1: {self.lambdas}")


def _default_lambdas(order: int) -> tuple[float, ...]:
    if order in DEFAULT_LAMBDAS:
        return DEFAULT_LAMBDAS[order]
    return tuple(1.0 / order for _ in range(order))


def train_lm(
    corpus: Iterable[Sentence], order: int = 3, lambdas: Sequence[float] | None = None
) -> NgramLM:
    sentences = [s.surfaces for s in corpus]
    if not sentences or all(not s for s in sentences):
        raise ValueError("empty training corpus")
    lams = tuple(lambdas) if lambdas is not None else _default_lambdas(order)

    word_counts: Counter[str] = Counter()
    for sent in sentences:
        word_counts.update(sent)
    keep = {w for w, c in word_counts.items() if c >= 2}

    counts: list[Counter] = [Counter() for _ in range(order)]
    contexts: list[Counter] = [Counter() for _ in range(order)]
    for sent in sentences:
        mapped = [w if w in keep else UNK for w in sent]
        seq = [BOS] * (order - 1) + mapped + [EOS]
        for idx in range(order - 1, len(seq)):
            for k in range(1, order + 1):
                gram = tuple(seq[idx - k + 1 : idx + 1])
                counts[k - 1][gram] += 1
                contexts[k - 1][gram[:-1]] += 1
    if counts[0][(UNK,)] == 0:
        counts[0][(UNK,)] = 1
        contexts[0][()] += 1

    vocab = frozenset(keep) | {UNK, EOS}
    return NgramLM(
        order,
        lams,
        tuple(dict(c) for c in counts),
        tuple(dict(c) for c in contexts),
        vocab,
    )


def _map_word(lm: NgramLM, w: str) -> str:
    if w == BOS:
        return w
    return w if w in lm.vocab else UNK


def conditional(lm: NgramLM, word: str, history: Sequence[str]) -> float:
    """Interpolated P(word | history); history may be shorter than order-1."""
    w = _map_word(lm, word)
    h = [_map_word(lm, x) for x in history]
    h = [BOS] * (lm.order - 1 - len(h)) + h[max(0, len(h) - (lm.order - 1)) :]
    num = 0.0
    weight = 0.0
    for k in range(1, lm.order + 1):
        ctx = tuple(h[len(h) - (k - 1) :]) if k > 1 else ()
        ctx_count = lm.contexts[k - 1].get(ctx, 0)
        if ctx_count == 0:
            continue
        weight += lm.lambdas[k - 1]
        num += lm.lambdas[k - 1] * lm.counts[k - 1].get(ctx + (w,), 0) / ctx_count
    return num / weight


def perplexity(lm: NgramLM, sentence: Sentence) -> float:
    tokens = list(sentence.surfaces)
    if not tokens:
        raise ValueError(f"sentence {sentence.sid}: empty, perplexity undefined")
    history: list[str] = []
    logp = 0.0
    for w in tokens + [EOS]:
        p = conditional(lm, w, history)
        logp += math.log(p)
        history.append(w)
    return math.exp(-logp / (len(tokens) + 1))


def lm_scorer(lm: NgramLM) -> Scorer:
    def score(variant: CMVariant) -> float:
        return perplexity(lm, variant.cm)

    return score


def save_lm(lm: NgramLM, path: str | Path) -> None:
    payload = {
        "order": lm.order,
        "lambdas": lm.lambdas,
        "counts": lm.counts,
        "contexts": lm.contexts,
        "vocab": set(lm.vocab),
    }
    Path(path).write_bytes(MAGIC + pickle.dumps(payload, protocol=4))


def load_lm(path: str | Path) -> NgramLM:
    blob = Path(path).read_bytes()
    if blob[: len(MAGIC)] != MAGIC:
        raise ValueError(f"{path}: not a {MAGIC.decode()} model file")
    payload = pickle.loads(blob[len(MAGIC) :])
    return NgramLM(
        payload["order"],
        tuple(payload["lambdas"]),
        tuple(payload["counts"]),
        tuple(payload["contexts"]),
        frozenset(payload["vocab"]),
    )


def load_score_file(path: str | Path) -> dict[tuple[int, int], float]:
    """TSV rows "pair id<TAB>variant ordinal<TAB>perplexity"."""
    scores: dict[tuple[int, int], float] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise ValueError(f"{path}: line {lineno}: expected 3 columns, got {len(cols)}")
        try:
            key = (int(cols[0]), int(cols[1]))
            ppl = float(cols[2])
        except ValueError as exc:
            raise ValueError(f"{path}: line {lineno}: {exc}") from exc
        if not math.isfinite(ppl) or ppl <= 0:
            raise ValueError(f"{path}: line {lineno}: bad perplexity {cols[2]}")
        if key in scores:
            raise ValueError(f"{path}: line {lineno}: duplicate key {key}")
        scores[key] = ppl
    return scores


def score_lookup(scores: Mapping[tuple[int, int], float]) -> Scorer:
    """Scorer backed by an external score file; the LM is never consulted."""

    def score(variant: CMVariant) -> float:
        key = (variant.pair_id, variant.ordinal)
        if key not in scores:
            raise ValueError(f"score file has no entry for pair {key[0]} variant {key[1]}")
        return scores[key]

    return score
