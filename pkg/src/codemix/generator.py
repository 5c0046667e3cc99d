"""Code-mixed variant generation.

From a source sentence with r switchable candidate words, the subset
sizes tried follow the corpus-construction heuristics:

    r == 0        nothing
    1 <= r <= 4   sizes 1..r (every non-empty subset)
    5 <= r <= 7   sizes r-3..r
    r >= 8        sizes ceil(0.6*r)..floor(0.7*r)

When the family is small enough it is enumerated outright (sizes
ascending, lexicographic within a size); otherwise distinct subsets are
drawn uniformly over the whole family by sampling ranks without
replacement and unranking through the combinatorial number system.

Every variant carries (pair id, variant ordinal); ordinals are assigned
to the sampled subsets before filtering, so a fixed seed pins them no
matter how the filter is configured afterwards.
"""
from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache
from importlib import resources
from itertools import combinations
from pathlib import Path
from typing import Callable, Iterator, Mapping, Sequence

from . import metrics
from .aligner import SubstitutionTable
from .corpus import LangTag, ParallelPair, Sentence, TaggedToken
from .seeds import mix64


def combination_sizes(r: int) -> list[int]:
    if r < 0:
        raise ValueError(f"candidate count must be >= 0, got {r}")
    if r == 0:
        return []
    if r <= 4:
        return list(range(1, r + 1))
    if r <= 7:
        return list(range(r - 3, r + 1))
    # integer forms of ceil(0.6r) and floor(0.7r), exact for all r
    lo = (3 * r + 4) // 5
    hi = 7 * r // 10
    return list(range(lo, hi + 1))


def count_variants(r: int) -> int:
    return sum(math.comb(r, k) for k in combination_sizes(r))


def _unrank(rank: int, r: int, k: int) -> tuple[int, ...]:
    """rank-th k-subset of range(r) in lexicographic order."""
    combo = []
    x = 0
    need = k
    while need:
        block = math.comb(r - x - 1, need - 1)
        if rank < block:
            combo.append(x)
            need -= 1
        else:
            rank -= block
        x += 1
    return tuple(combo)


def sample_subsets(candidates: Sequence[int], cap: int, seed: int) -> list[tuple[int, ...]]:
    """Distinct switch subsets over the allowed sizes, at most cap of them.

    Enumerates the whole family when it fits under cap; otherwise draws
    uniformly without replacement. Output is deterministic for a given
    seed and ordered by (size, lexicographic) either way.
    """
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    cand = sorted(candidates)
    if len(set(cand)) != len(cand):
        raise ValueError("duplicate candidate indices")
    r = len(cand)
    sizes = combination_sizes(r)
    total = count_variants(r)
    if total <= cap:
        out = []
        for k in sizes:
            out.extend(combinations(cand, k))
        return out
    ranks = sorted(random.Random(seed).sample(range(total), cap))
    out = []
    offset = 0
    by_size = [(k, math.comb(r, k)) for k in sizes]
    for rank in ranks:
        local = rank - offset
        for k, block in by_size:
            if local < block:
                out.append(tuple(cand[i] for i in _unrank(local, r, k)))
                break
            local -= block
    return out


def select_candidates(sentence: Sentence, inclusion: frozenset[str] | set[str]) -> list[int]:
    """Indices of tokens whose POS tag is on the inclusion list."""
    picked = []
    for i, tok in enumerate(sentence.tokens):
        if tok.pos is None:
            raise ValueError(f"sentence {sentence.sid}: token {i} has no POS tag")
        if tok.pos in inclusion:
            picked.append(i)
    return picked


def load_inclusion_list(path: str | Path) -> frozenset[str]:
    """One POS tag per line; '#' starts a comment."""
    tags = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        tag = line.split("#", 1)[0].strip()
        if tag:
            tags.add(tag)
    if not tags:
        raise ValueError(f"{path}: no POS tags")
    return frozenset(tags)


@lru_cache(maxsize=None)
def default_inclusion() -> frozenset[str]:
    """The shipped tag list: nouns, adjectives and quantifiers."""
    text = resources.files("codemix.data").joinpath("inclusion_default.txt").read_text("utf-8")
    tags = {t for line in text.splitlines() for t in [line.split("#", 1)[0].strip()] if t}
    return frozenset(tags)


@dataclass(frozen=True, slots=True)
class CMVariant:
    pair_id: int
    ordinal: int | None
    cm: Sentence
    switched: tuple[int, ...]
    cmi: float
    spf: float
    ppl: float | None = None


@dataclass(frozen=True, slots=True)
class FilterSpec:
    cmi_lo: float = 20.0
    cmi_hi: float = 40.0
    spf_lo: float = 0.35
    spf_hi: float = 0.55
    ppl_max: float | None = None
    cap: int = 5

    def __post_init__(self) -> None:
        if not 0.0 <= self.cmi_lo <= self.cmi_hi <= 100.0:
            raise ValueError(f"bad CMI window [{self.cmi_lo}, {self.cmi_hi}]")
        if not 0.0 <= self.spf_lo <= self.spf_hi <= 1.0:
            raise ValueError(f"bad SPF window [{self.spf_lo}, {self.spf_hi}]")
        if self.ppl_max is not None and self.ppl_max <= 0:
            raise ValueError(f"ppl_max must be positive, got {self.ppl_max}")
        if self.cap < 1:
            raise ValueError(f"cap must be >= 1, got {self.cap}")


def substitute(pair: ParallelPair, table: SubstitutionTable, subset: Sequence[int]) -> CMVariant:
    """Swap the subset's source tokens for their aligned target words."""
    if not subset:
        raise ValueError(f"pair {pair.sid}: empty switch subset")
    entries = table.by_index
    missing = [i for i in subset if i not in entries]
    if missing:
        raise ValueError(f"pair {pair.sid}: no table entry for indices {missing}")
    code = next(
        (t.lang.code for t in pair.target.tokens if not t.lang.is_neutral), "en"
    )
    embedded = LangTag.embedded(code)
    chosen = set(subset)
    tokens = []
    for i, tok in enumerate(pair.source.tokens):
        if i in chosen:
            e = entries[i]
            tokens.append(TaggedToken(e.tgt, embedded, pos=e.pos))
        else:
            tokens.append(tok)
    cm = Sentence(pair.sid, tuple(tokens))
    return CMVariant(
        pair_id=pair.sid,
        ordinal=None,
        cm=cm,
        switched=tuple(sorted(chosen)),
        cmi=metrics.cmi(cm),
        spf=metrics.spf(cm),
    )


Scorer = Callable[[CMVariant], float]


def filter_variants(
    variants: Sequence[CMVariant], spec: FilterSpec, scorer: Scorer | None = None
) -> list[CMVariant]:
    """Window and perplexity filtering, then truncation to spec.cap.

    Survivors are ranked by perplexity (missing scores sort last), ties by
    smaller switched set and then lexicographic switched indices; the cap
    keeps the best-ranked. Applying the filter twice changes nothing.
    """
    if spec.ppl_max is not None and scorer is None and any(v.ppl is None for v in variants):
        raise ValueError("perplexity threshold set but no scorer supplied")
    scored = []
    for v in variants:
        if scorer is not None and v.ppl is None:
            v = replace(v, ppl=scorer(v))
        scored.append(v)
    kept = [
        v
        for v in scored
        if spec.cmi_lo <= v.cmi <= spec.cmi_hi
        and spec.spf_lo <= v.spf <= spec.spf_hi
        and (spec.ppl_max is None or (v.ppl is not None and v.ppl <= spec.ppl_max))
    ]
    kept.sort(key=lambda v: (v.ppl if v.ppl is not None else math.inf, len(v.switched), v.switched))
    return kept[: spec.cap]


def variants_for_pair(
    pair: ParallelPair,
    table: SubstitutionTable | None,
    inclusion: frozenset[str],
    spec: FilterSpec,
    seed: int,
    scorer: Scorer | None = None,
    oversample: int = 4,
) -> list[CMVariant]:
    if table is None or not table.entries:
        return []
    usable = set(table.by_index)
    candidates = [i for i in select_candidates(pair.source, inclusion) if i in usable]
    if not candidates:
        return []
    budget = max(spec.cap * oversample, spec.cap)
    subsets = sample_subsets(candidates, budget, mix64(seed, pair.sid))
    variants = [
        replace(substitute(pair, table, subset), ordinal=k)
        for k, subset in enumerate(subsets)
    ]
    return filter_variants(variants, spec, scorer)


def generate_cm_corpus(
    pairs: Sequence[ParallelPair],
    tables: Sequence[SubstitutionTable] | Mapping[int, SubstitutionTable],
    inclusion: frozenset[str],
    spec: FilterSpec,
    seed: int,
    scorer: Scorer | None = None,
    oversample: int = 4,
    threads: int = 1,
) -> Iterator[CMVariant]:
    """Run the whole per-pair chain: candidates, subsets, substitution, filter.

    Per-pair randomness derives from (seed, pair id), so outputs do not
    depend on pair order or thread count.
    """
    if isinstance(tables, Mapping):
        by_sid = dict(tables)
    else:
        by_sid = {t.sid: t for t in tables}

    def work(pair: ParallelPair) -> list[CMVariant]:
        return variants_for_pair(
            pair, by_sid.get(pair.sid), inclusion, spec, seed, scorer, oversample
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for batch in pool.map(work, pairs):
                yield from batch
    else:
        for pair in pairs:
            yield from work(pair)
