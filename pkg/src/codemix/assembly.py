"""Joint-corpus assembly for multilingual one-to-many training.

A Direction pairs a source file with a target file and a proxy token
"[2xx]" (lowercase ISO 639-1 code of the target language) prepended to
every source line so one model can serve several directions. Directions
are optionally undersampled, then concatenated in declared order.

Recipes expand a set of named corpora into direction lists:

    roman        Hi_cr <-> En plus Hi_crn -> En            (3 directions)
    roman_devan  roman plus Hi_c <-> En                    (5 directions)
    zero_shot    roman_devan plus Bn <-> En, Bn_r <-> En   (9 directions)

Config files are INI-style: [corpus:NAME] sections (src, tgt, code,
sample) feed recipes; [direction:NAME] sections (src, tgt, proxy,
sample) define explicit directions.
"""
from __future__ import annotations

import configparser
import random
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence, TypeVar

from .corpus import atomic_open
from .seeds import mix64

_PROXY_RE = re.compile(r"^\[2[a-z]{2}\]$")

T = TypeVar("T")


@dataclass(frozen=True, slots=True)
class Direction:
    name: str
    src_path: Path
    tgt_path: Path
    proxy: str
    sample: int | None = None

    def __post_init__(self) -> None:
        if not _PROXY_RE.match(self.proxy):
            raise ValueError(f"direction {self.name}: bad proxy token {self.proxy!r}")
        if self.sample is not None and self.sample < 1:
            raise ValueError(f"direction {self.name}: sample must be >= 1")


@dataclass(frozen=True, slots=True)
class CorpusEntry:
    name: str
    src_path: Path
    tgt_path: Path
    code: str
    sample: int | None = None


def undersample(lines: Sequence[T], k: int, seed: int) -> list[T]:
    """Uniform sample without replacement, original order preserved."""
    if k > len(lines):
        raise ValueError(f"cannot sample {k} of {len(lines)} lines")
    picked = sorted(random.Random(seed).sample(range(len(lines)), k))
    return [lines[i] for i in picked]


def _read_lines(path: Path) -> list[str]:
    return path.read_text(encoding="utf-8").splitlines()


def assemble_joint(
    directions: Sequence[Direction],
    seed: int,
    out_src: str | Path,
    out_tgt: str | Path,
    shuffle: bool = False,
) -> list[tuple[str, int]]:
    """Write the concatenated training files; returns (direction, lines) counts."""
    if not directions:
        raise ValueError("no directions to assemble")
    src_all: list[str] = []
    tgt_all: list[str] = []
    counts = []
    for d_idx, d in enumerate(directions):
        src = _read_lines(d.src_path)
        tgt = _read_lines(d.tgt_path)
        if len(src) != len(tgt):
            raise ValueError(
                f"direction {d.name}: {d.src_path} has {len(src)} lines, "
                f"{d.tgt_path} has {len(tgt)}"
            )
        if d.sample is not None:
            if d.sample > len(src):
                raise ValueError(
                    f"direction {d.name}: sample {d.sample} exceeds {len(src)} lines"
                )
            rows = undersample(list(zip(src, tgt)), d.sample, mix64(seed, d_idx))
        else:
            rows = list(zip(src, tgt))
        for s, t in rows:
            src_all.append(f"{d.proxy} {s}")
            tgt_all.append(t)
        counts.append((d.name, len(rows)))
    if shuffle:
        order = list(range(len(src_all)))
        random.Random(mix64(seed, 0x53F)).shuffle(order)
        src_all = [src_all[i] for i in order]
        tgt_all = [tgt_all[i] for i in order]
    with atomic_open(out_src) as fh:
        fh.write("".join(line + "\n" for line in src_all))
    with atomic_open(out_tgt) as fh:
        fh.write("".join(line + "\n" for line in tgt_all))
    return counts


def _require(corpora: Mapping[str, CorpusEntry], names: Sequence[str]) -> None:
    missing = [n for n in names if n not in corpora]
    if missing:
        raise ValueError(f"recipe needs corpora {missing}, config has {sorted(corpora)}")


def _both_ways(c: CorpusEntry) -> list[Direction]:
    return [
        Direction(f"{c.name}-en", c.src_path, c.tgt_path, "[2en]", c.sample),
        Direction(f"en-{c.name}", c.tgt_path, c.src_path, f"[2{c.code}]", c.sample),
    ]


def _to_en(c: CorpusEntry) -> Direction:
    return Direction(f"{c.name}-en", c.src_path, c.tgt_path, "[2en]", c.sample)


def recipe_roman(corpora: Mapping[str, CorpusEntry]) -> list[Direction]:
    _require(corpora, ["hi_cr", "hi_crn"])
    return _both_ways(corpora["hi_cr"]) + [_to_en(corpora["hi_crn"])]


def recipe_roman_devan(corpora: Mapping[str, CorpusEntry]) -> list[Direction]:
    _require(corpora, ["hi_c"])
    return recipe_roman(corpora) + _both_ways(corpora["hi_c"])


def recipe_zero_shot(corpora: Mapping[str, CorpusEntry]) -> list[Direction]:
    _require(corpora, ["bn", "bn_r"])
    return (
        recipe_roman_devan(corpora) + _both_ways(corpora["bn"]) + _both_ways(corpora["bn_r"])
    )


RECIPES = {
    "roman": recipe_roman,
    "roman_devan": recipe_roman_devan,
    "zero_shot": recipe_zero_shot,
}


def parse_assembly_config(path: str | Path) -> tuple[list[Direction], dict[str, CorpusEntry]]:
    parser = configparser.ConfigParser()
    read = parser.read(path, encoding="utf-8")
    if not read:
        raise ValueError(f"cannot read config {path}")
    base = Path(path).parent
    directions: list[Direction] = []
    corpora: dict[str, CorpusEntry] = {}
    for section in parser.sections():
        body = parser[section]
        kind, _, name = section.partition(":")
        if kind not in ("corpus", "direction") or not name:
            raise ValueError(f"{path}: unknown section [{section}]")
        for key in ("src", "tgt"):
            if key not in body:
                raise ValueError(f"{path}: [{section}] missing {key}")
        src = base / body["src"]
        tgt = base / body["tgt"]
        sample = body.getint("sample") if "sample" in body else None
        if kind == "corpus":
            code = body.get("code") or name.split("_")[0]
            corpora[name] = CorpusEntry(name, src, tgt, code, sample)
        else:
            if "proxy" not in body:
                raise ValueError(f"{path}: [{section}] missing proxy")
            directions.append(Direction(name, src, tgt, body["proxy"], sample))
    return directions, corpora
