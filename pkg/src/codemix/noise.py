"""Word-level adversarial noise for romanized code-mixed text.

Four perturbations, mirroring how people actually mistype:

    switch    adjacent transposition inside the word ("transfer" -> "trasnfer")
    omission  drop interior vowels ("amazing" -> "amzng")
    typo      replace one char with a QWERTY neighbor ("mobile" -> "movile")
    shuffle   permute the interior, endpoints fixed ("laptop" -> "loptap")

First and last characters never move except under typo at those
positions. Each perturbation either changes the word or rejects; a
rejected draw falls back to the clean word and is counted, never
silently retried with a different noise type.

Per-token decisions are seeded from (spec seed, sentence id, token
index), so output never depends on processing order.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field, replace as dc_replace
from functools import lru_cache
from importlib import resources
from typing import Callable, Iterable, Iterator

from .corpus import TaggedToken, Sentence
from .generator import CMVariant
from .seeds import mix64

VOWELS = frozenset("aeiou")


@lru_cache(maxsize=None)
def qwerty_neighbors() -> dict[str, str]:
    """Lowercase 8-neighbor adjacency of the standard QWERTY layout."""
    text = resources.files("codemix.data").joinpath("qwerty_neighbors.tsv").read_text("utf-8")
    table = {}
    for line in text.splitlines():
        key, _, nb = line.partition("\t")
        table[key] = nb
    return table


def perturb_switch(word: str, position: int) -> str | None:
    """Transpose word[position] and word[position+1]; interior only."""
    if len(word) < 4:
        return None
    if not 1 <= position <= len(word) - 3:
        raise ValueError(f"switch position {position} invalid for length {len(word)}")
    if word[position] == word[position + 1]:
        return None
    return word[:position] + word[position + 1] + word[position] + word[position + 2 :]


def perturb_omission(word: str, rng: random.Random) -> str | None:
    """Delete interior vowels, each with probability 0.5.

    When no vowel goes (or none exists), one rng-chosen interior
    character goes instead, so the word always shrinks.
    """
    if len(word) < 4:
        return None
    kept = [word[0]]
    deleted = False
    for ch in word[1:-1]:
        if ch in VOWELS and rng.random() < 0.5:
            deleted = True
            continue
        kept.append(ch)
    kept.append(word[-1])
    if not deleted:
        drop = rng.randrange(1, len(word) - 1)
        return word[:drop] + word[drop + 1 :]
    return "".join(kept)


def perturb_typo(word: str, position: int, rng: random.Random) -> str | None:
    """Replace word[position] with a QWERTY neighbor, preserving case."""
    if len(word) < 3:
        return None
    if not 0 <= position < len(word):
        raise ValueError(f"typo position {position} invalid for length {len(word)}")
    ch = word[position]
    neighbors = qwerty_neighbors().get(ch.lower())
    if not neighbors:
        return None
    repl = rng.choice(neighbors)
    if ch.isupper():
        repl = repl.upper()
    return word[:position] + repl + word[position + 1 :]


def perturb_shuffle(word: str, rng: random.Random) -> str | None:
    """Shuffle the interior; first and last characters stay put.

    Needs at least two distinct interior characters. Identity
    permutations are redrawn up to 10 times, then the word is rejected.
    """
    if len(word) < 4:
        return None
    interior = list(word[1:-1])
    if len(set(interior)) < 2:
        return None
    for _ in range(10):
        rng.shuffle(interior)
        candidate = word[0] + "".join(interior) + word[-1]
        if candidate != word:
            return candidate
    return None


def eligible_transliterated(tok: TaggedToken) -> bool:
    return tok.transliterated and tok.lang.role == "matrix"


def eligible_latin(tok: TaggedToken) -> bool:
    """Wider eligibility: any all-ASCII-letter token."""
    return all(c.isascii() and c.isalpha() for c in tok.surface)


PERTURBATION_NAMES = ("switch", "omission", "typo", "shuffle")


@dataclass(frozen=True, slots=True)
class NoiseSpec:
    switch: float = 0.30
    omission: float = 0.12
    typo: float = 0.12
    shuffle: float = 0.06
    seed: int = 0
    min_switch: int = 4
    min_omission: int = 4
    min_typo: int = 3
    min_shuffle: int = 4
    eligible: Callable[[TaggedToken], bool] = eligible_transliterated

    def __post_init__(self) -> None:
        rates = (self.switch, self.omission, self.typo, self.shuffle)
        if any(r < 0 for r in rates):
            raise ValueError(f"negative noise rate in {rates}")
        if sum(rates) > 1.0 + 1e-12:
            raise ValueError(f"noise rates sum to {sum(rates)}, must be <= 1")

    @property
    def thresholds(self) -> tuple[float, float, float, float]:
        c1 = self.switch
        c2 = c1 + self.omission
        c3 = c2 + self.typo
        return (c1, c2, c3, c3 + self.shuffle)


@dataclass
class NoiseReport:
    applied: Counter = field(default_factory=Counter)
    fallback: Counter = field(default_factory=Counter)
    eligible: int = 0
    clean: int = 0
    tokens: int = 0

    def rows(self) -> list[tuple[str, str]]:
        out = [("tokens", str(self.tokens)), ("eligible", str(self.eligible)), ("clean", str(self.clean))]
        for name in PERTURBATION_NAMES:
            out.append((f"applied.{name}", str(self.applied[name])))
            out.append((f"fallback.{name}", str(self.fallback[name])))
        return out


def _perturb_token(word: str, spec: NoiseSpec, rng: random.Random) -> tuple[str | None, str | None]:
    """(new word or None, chosen type or None for clean)."""
    u = rng.random()
    c1, c2, c3, c4 = spec.thresholds
    if u < c1:
        if len(word) < spec.min_switch:
            return None, "switch"
        return perturb_switch(word, rng.randint(1, len(word) - 3)), "switch"
    if u < c2:
        if len(word) < spec.min_omission:
            return None, "omission"
        return perturb_omission(word, rng), "omission"
    if u < c3:
        if len(word) < spec.min_typo:
            return None, "typo"
        return perturb_typo(word, rng.randrange(len(word)), rng), "typo"
    if u < c4:
        if len(word) < spec.min_shuffle:
            return None, "shuffle"
        return perturb_shuffle(word, rng), "shuffle"
    return None, None


def inject_noise(
    variants: Iterable[CMVariant], spec: NoiseSpec, report: NoiseReport | None = None
) -> Iterator[CMVariant]:
    """Perturb eligible tokens of each variant at the configured rates."""
    for variant in variants:
        ordinal = -1 if variant.ordinal is None else variant.ordinal
        tokens = []
        changed = False
        for ti, tok in enumerate(variant.cm.tokens):
            if report is not None:
                report.tokens += 1
            if not spec.eligible(tok):
                tokens.append(tok)
                continue
            if report is not None:
                report.eligible += 1
            rng = random.Random(mix64(spec.seed, variant.pair_id, ordinal, ti))
            new, kind = _perturb_token(tok.surface, spec, rng)
            if kind is None:
                if report is not None:
                    report.clean += 1
                tokens.append(tok)
            elif new is None:
                if report is not None:
                    report.fallback[kind] += 1
                tokens.append(tok)
            else:
                if report is not None:
                    report.applied[kind] += 1
                tokens.append(dc_replace(tok, surface=new))
                changed = True
        if changed:
            yield dc_replace(variant, cm=Sentence(variant.cm.sid, tuple(tokens)))
        else:
            yield variant
