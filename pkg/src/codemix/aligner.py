"""IBM Model 1 word alignment, with an optional diagonal position prior.

The model is p(target | source): every target position picks a generator
from the source tokens plus a NULL word and emits through t(e | f). EM
renormalizes per source word, so sum_e t(e | f) = 1 for every f in the
table (NULL included). The diagonal variant replaces the uniform position
prior with

    p(i | j, m, n) ∝ exp(-tension * |i/m - j/n|)

over 1-based positions (m source tokens, n target tokens); NULL keeps a
constant unnormalized weight of 1, so tension 0 reduces exactly to the
uniform model.

Substitution tables keep only one-to-one links whose source POS tag is on
the inclusion list; they are what the generator switches on.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import ParallelPair, atomic_open

# Probabilities below this are dropped after each iteration to bound
# table size; rows are renormalized afterwards.
PRUNE_FLOOR = 1e-12

NULL_LABEL = "<NULL>"

Links = frozenset[tuple[int, int]]


@dataclass(frozen=True)
class TranslationTable:
    """Lexical table t(e | f). The None key is the NULL word. Treat as read-only."""

    probs: dict[str | None, dict[str, float]]
    ll_history: tuple[float, ...] = ()

    def prob(self, e: str, f: str | None) -> float:
        row = self.probs.get(f)
        return row.get(e, 0.0) if row else 0.0

    @property
    def source_vocab(self) -> set[str]:
        return {f for f in self.probs if f is not None}


def _surface_pairs(pairs: Sequence[ParallelPair]) -> list[tuple[list[str], list[str]]]:
    out = []
    for p in pairs:
        src = [t.surface for t in p.source.tokens]
        tgt = [t.surface for t in p.target.tokens]
        if not src or not tgt:
            raise ValueError(f"pair {p.sid}: empty sentence")
        out.append((src, tgt))
    return out


def _position_weights(m: int, j: int, n: int, tension: float | None) -> list[float]:
    """Unnormalized prior weights for [NULL, source position 1..m] at target j."""
    if tension is None:
        return [1.0] * (m + 1)
    w = [1.0]
    for i in range(1, m + 1):
        w.append(math.exp(-tension * abs(i / m - (j + 1) / n)))
    return w


def _em(
    pairs: Sequence[ParallelPair], iterations: int, tension: float | None
) -> TranslationTable:
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    if tension is not None and tension < 0:
        raise ValueError(f"tension must be >= 0, got {tension}")
    corpus = _surface_pairs(pairs)
    if not corpus:
        raise ValueError("no training pairs")

    # Uniform init over co-occurring vocabulary. NULL co-occurs with all.
    cooc: dict[str | None, set[str]] = {None: set()}
    for src, tgt in corpus:
        cooc[None].update(tgt)
        for f in src:
            cooc.setdefault(f, set()).update(tgt)
    t: dict[str | None, dict[str, float]] = {
        f: {e: 1.0 / len(es) for e in es} for f, es in cooc.items()
    }

    ll_history = []
    for _ in range(iterations):
        counts: dict[str | None, dict[str, float]] = {f: {} for f in t}
        ll = 0.0
        for src, tgt in corpus:
            m, n = len(src), len(tgt)
            for j, e in enumerate(tgt):
                weights = _position_weights(m, j, n, tension)
                scores = [weights[0] * t[None].get(e, 0.0)]
                for i, f in enumerate(src):
                    scores.append(weights[i + 1] * t[f].get(e, 0.0))
                denom = sum(scores)
                ll += math.log(denom / sum(weights))
                row_null = counts[None]
                row_null[e] = row_null.get(e, 0.0) + scores[0] / denom
                for i, f in enumerate(src):
                    if scores[i + 1]:
                        row = counts[f]
                        row[e] = row.get(e, 0.0) + scores[i + 1] / denom
        ll_history.append(ll)
        for f, row in counts.items():
            total = sum(row.values())
            kept = {e: c / total for e, c in row.items() if c / total >= PRUNE_FLOOR}
            norm = sum(kept.values())
            t[f] = {e: p / norm for e, p in kept.items()}
    return TranslationTable(t, tuple(ll_history))


def train_ibm1(pairs: Sequence[ParallelPair], iterations: int = 5) -> TranslationTable:
    return _em(pairs, iterations, tension=None)


def train_diagonal(
    pairs: Sequence[ParallelPair], iterations: int = 5, tension: float = 4.0
) -> TranslationTable:
    return _em(pairs, iterations, tension=tension)


def log_likelihood(
    table: TranslationTable, pairs: Sequence[ParallelPair], tension: float | None = None
) -> float:
    """Corpus log-likelihood of the target sides under the table."""
    ll = 0.0
    for src, tgt in _surface_pairs(pairs):
        m, n = len(src), len(tgt)
        for j, e in enumerate(tgt):
            weights = _position_weights(m, j, n, tension)
            total = weights[0] * table.prob(e, None)
            for i, f in enumerate(src):
                total += weights[i + 1] * table.prob(e, f)
            ll += math.log(total / sum(weights)) if total > 0 else float("-inf")
    return ll


def viterbi_align(
    pair: ParallelPair, table: TranslationTable, tension: float | None = None
) -> Links:
    """Best source link per target position.

    Ties between source positions go to the smaller index; a target word
    whose best generator is NULL (or that no source word explains, OOV
    included) gets no link.
    """
    src = [t.surface for t in pair.source.tokens]
    tgt = [t.surface for t in pair.target.tokens]
    m, n = len(src), len(tgt)
    links = set()
    for j, e in enumerate(tgt):
        weights = _position_weights(m, j, n, tension)
        null_score = weights[0] * table.prob(e, None)
        best_i = -1
        best = 0.0
        for i, f in enumerate(src):
            s = weights[i + 1] * table.prob(e, f)
            if s > best:
                best = s
                best_i = i
        if best_i >= 0 and best >= null_score:
            links.add((best_i, j))
    return frozenset(links)


def transpose(links: Links) -> Links:
    return frozenset((j, i) for i, j in links)


def symmetrize(forward: Links, backward: Links) -> Links:
    """Intersection of two alignments already in source-target orientation."""
    return forward & backward


@dataclass(frozen=True, slots=True)
class SubEntry:
    src_idx: int
    src: str
    tgt: str
    pos: str


@dataclass(frozen=True)
class SubstitutionTable:
    sid: int
    entries: tuple[SubEntry, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        idxs = [e.src_idx for e in self.entries]
        if len(set(idxs)) != len(idxs):
            raise ValueError(f"table {self.sid}: duplicate source indices")

    @property
    def by_index(self) -> dict[int, SubEntry]:
        return {e.src_idx: e for e in self.entries}


def extract_substitution_table(
    pair: ParallelPair, links: Links, inclusion: frozenset[str] | set[str]
) -> SubstitutionTable:
    """One-to-one links whose source POS is on the inclusion list.

    A link survives only if its source index appears in exactly one link
    and its target index appears in exactly one link (bijective pairs).
    """
    src = pair.source.tokens
    tgt = pair.target.tokens
    src_deg: dict[int, int] = {}
    tgt_deg: dict[int, int] = {}
    for i, j in links:
        if not (0 <= i < len(src)) or not (0 <= j < len(tgt)):
            raise ValueError(f"pair {pair.sid}: link ({i},{j}) out of bounds")
        src_deg[i] = src_deg.get(i, 0) + 1
        tgt_deg[j] = tgt_deg.get(j, 0) + 1
    entries = []
    for i, j in sorted(links):
        if src_deg[i] != 1 or tgt_deg[j] != 1:
            continue
        pos = src[i].pos
        if pos is None:
            raise ValueError(f"pair {pair.sid}: source token {i} has no POS tag")
        if pos in inclusion:
            entries.append(SubEntry(i, src[i].surface, tgt[j].surface, pos))
    return SubstitutionTable(pair.sid, tuple(entries))


def write_pharaoh(alignments: Iterable[Links], path: str | Path) -> None:
    """One line per pair of "i-j" links, sorted, space separated."""
    with atomic_open(path) as fh:
        for links in alignments:
            fh.write(" ".join(f"{i}-{j}" for i, j in sorted(links)) + "\n")


def read_pharaoh(path: str | Path) -> list[Links]:
    rows = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        links = set()
        for item in line.split():
            left, sep, right = item.partition("-")
            if not sep or not left.isdigit() or not right.isdigit():
                raise ValueError(f"{path}: line {lineno}: bad link {item!r}")
            links.add((int(left), int(right)))
        rows.append(frozenset(links))
    return rows


def write_table(table: TranslationTable, path: str | Path) -> None:
    """TSV dump: source, target, probability; source ascending, prob descending."""
    with atomic_open(path) as fh:
        keyed = sorted(table.probs.items(), key=lambda kv: NULL_LABEL if kv[0] is None else kv[0])
        for f, row in keyed:
            name = NULL_LABEL if f is None else f
            for e, p in sorted(row.items(), key=lambda kv: (-kv[1], kv[0])):
                fh.write(f"{name}\t{e}\t{p!r}\n")


def write_substitution_tables(tables: Iterable[SubstitutionTable], path: str | Path) -> None:
    with atomic_open(path) as fh:
        for tab in tables:
            doc = {
                "id": tab.sid,
                "entries": [
                    {"src_idx": e.src_idx, "src": e.src, "tgt": e.tgt, "pos": e.pos}
                    for e in tab.entries
                ],
            }
            fh.write(json.dumps(doc, ensure_ascii=False) + "\n")


def read_substitution_tables(path: str | Path) -> list[SubstitutionTable]:
    tables = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
            entries = tuple(
                SubEntry(e["src_idx"], e["src"], e["tgt"], e["pos"]) for e in doc["entries"]
            )
            tables.append(SubstitutionTable(doc["id"], entries))
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise ValueError(f"{path}: line {lineno}: {exc}") from exc
    return tables
