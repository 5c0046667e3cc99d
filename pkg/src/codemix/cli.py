"""Command-line front end for the corpus construction pipeline.

Subcommands cover each stage plus an end-to-end runner:

    align      train word aligners both ways, write intersected alignments
    dict       extract per-sentence substitution tables from alignments
    generate   enumerate, filter and write code-mixed variants
    translit   romanize the matrix-language side of a variants file
    noise      perturb romanized tokens at configured rates
    assemble   build joint multi-direction training files
    stats      summarize a variants file
    bleu       corpus BLEU of a hypothesis file against a reference
    pipeline   run align through stats from one INI config

Exit status: 0 on success, 1 on validation or data errors (every
detected problem is reported, not just the first), 2 on usage errors.

Variant files are TSV with a fixed header; reports are key<TAB>value
rows. Keys under the "time." prefix are wall-clock and vary run to run;
everything else is deterministic for a fixed seed, so consumers can diff
reports after dropping "time." rows.
"""
from __future__ import annotations

import argparse
import configparser
import hashlib
import sys
import time
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__
from .aligner import (
    extract_substitution_table,
    read_pharaoh,
    read_substitution_tables,
    symmetrize,
    train_diagonal,
    train_ibm1,
    transpose,
    viterbi_align,
    write_pharaoh,
    write_substitution_tables,
    write_table,
)
from .assembly import RECIPES, assemble_joint, parse_assembly_config
from .corpus import (
    LangTag,
    NEUTRAL,
    ParallelPair,
    Sentence,
    TaggedToken,
    atomic_open,
    load_parallel,
    load_tagged,
    normalize_and_tokenize,
)
from .fluency import lm_scorer, load_lm, load_score_file, save_lm, score_lookup, train_lm
from .generator import (
    CMVariant,
    FilterSpec,
    default_inclusion,
    generate_cm_corpus,
    load_inclusion_list,
)
from .metrics import bleu_components, corpus_stats
from .noise import NoiseReport, NoiseSpec, eligible_latin, eligible_transliterated, inject_noise
from .translit import (
    TranslitReport,
    default_scheme,
    load_override_map,
    load_scheme,
    romanize_sentence,
)

VARIANT_HEADER = ("id", "variant", "cm_source", "target", "lang_tags", "cmi", "spf", "ppl")


def _fail(errors: Sequence[str]) -> None:
    for e in errors:
        print(f"codemix: error: {e}", file=sys.stderr)
    raise SystemExit(1)


def _check_file(path: str | Path, what: str, errors: list[str]) -> Path:
    p = Path(path)
    if not p.is_file():
        errors.append(f"{what}: no such file: {p}")
    return p


def _parse_range(text: str, what: str, errors: list[str]) -> tuple[float, float]:
    lo, sep, hi = text.partition(":")
    if not sep:
        errors.append(f"{what}: expected LO:HI, got {text!r}")
        return (0.0, 0.0)
    try:
        return (float(lo), float(hi))
    except ValueError:
        errors.append(f"{what}: bad number in {text!r}")
        return (0.0, 0.0)


def _parse_rates(text: str, errors: list[str]) -> dict[str, float]:
    rates = {"switch": 0.30, "omission": 0.12, "typo": 0.12, "shuffle": 0.06}
    if not text:
        return rates
    for part in text.split(","):
        name, sep, value = part.partition("=")
        name = name.strip()
        if not sep or name not in rates:
            errors.append(f"--rates: expected name=value with name in {sorted(rates)}, got {part!r}")
            continue
        try:
            rates[name] = float(value)
        except ValueError:
            errors.append(f"--rates: bad number in {part!r}")
    return rates


def _write_rows(rows: Iterable[tuple[str, str]], path: str | Path | None) -> None:
    text = "".join(f"{k}\t{v}\n" for k, v in rows)
    if path is None:
        sys.stdout.write(text)
    else:
        with atomic_open(path) as fh:
            fh.write(text)


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_variants(path: str | Path, rows: Iterable[tuple[CMVariant, Sentence]]) -> int:
    n = 0
    with atomic_open(path) as fh:
        fh.write("\t".join(VARIANT_HEADER) + "\n")
        for v, target in rows:
            ppl = "" if v.ppl is None else f"{v.ppl:.4f}"
            fh.write(
                "\t".join(
                    (
                        str(v.pair_id),
                        str(v.ordinal),
                        v.cm.text,
                        target.text,
                        " ".join(t.lang.label for t in v.cm.tokens),
                        f"{v.cmi:.4f}",
                        f"{v.spf:.4f}",
                        ppl,
                    )
                )
                + "\n"
            )
            n += 1
    return n


def read_variants(
    path: str | Path,
    matrix_code: str = "hi",
    romanized: bool = False,
) -> list[tuple[CMVariant, Sentence]]:
    """Load a variants file back into memory.

    Language roles are rebuilt from the tag column: the matrix code and
    "O" are recognized, anything else is embedded. With romanized=True,
    matrix tokens are marked transliterated, which is what makes them
    eligible for noise.
    """
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or tuple(lines[0].split("\t")) != VARIANT_HEADER:
        raise ValueError(f"{path}: missing or wrong header row")
    out: list[tuple[CMVariant, Sentence]] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != len(VARIANT_HEADER):
            raise ValueError(
                f"{path}: line {lineno}: expected {len(VARIANT_HEADER)} columns, got {len(cols)}"
            )
        pid_s, ord_s, cm_text, tgt_text, tags_s, cmi_s, spf_s, ppl_s = cols
        surfaces = cm_text.split(" ")
        labels = tags_s.split(" ")
        if len(surfaces) != len(labels):
            raise ValueError(
                f"{path}: line {lineno}: {len(surfaces)} tokens but {len(labels)} language tags"
            )
        try:
            pair_id = int(pid_s)
            ordinal = int(ord_s)
            cmi_v = float(cmi_s)
            spf_v = float(spf_s)
            ppl_v = None if ppl_s == "" else float(ppl_s)
        except ValueError as exc:
            raise ValueError(f"{path}: line {lineno}: {exc}") from exc
        tokens = []
        switched = []
        for i, (surface, label) in enumerate(zip(surfaces, labels)):
            if label == "O":
                tokens.append(TaggedToken(surface, NEUTRAL))
            elif label == matrix_code:
                tokens.append(
                    TaggedToken(surface, LangTag.matrix(label), transliterated=romanized)
                )
            else:
                tokens.append(TaggedToken(surface, LangTag.embedded(label)))
                switched.append(i)
        cm = Sentence(pair_id, tuple(tokens))
        target = normalize_and_tokenize(tgt_text, LangTag.embedded("en"), sid=pair_id)
        out.append(
            (CMVariant(pair_id, ordinal, cm, tuple(switched), cmi_v, spf_v, ppl_v), target)
        )
    return out


def _align_pairs(
    pairs: Sequence[ParallelPair], iterations: int, diagonal: bool, tension: float
):
    """Train both directions, Viterbi-align, intersect. Returns (links, fwd, bwd)."""
    swapped = [ParallelPair(p.target, p.source) for p in pairs]
    t = tension if diagonal else None
    if diagonal:
        fwd = train_diagonal(pairs, iterations=iterations, tension=tension)
        bwd = train_diagonal(swapped, iterations=iterations, tension=tension)
    else:
        fwd = train_ibm1(pairs, iterations=iterations)
        bwd = train_ibm1(swapped, iterations=iterations)
    links = [
        symmetrize(
            viterbi_align(p, fwd, tension=t),
            transpose(viterbi_align(s, bwd, tension=t)),
        )
        for p, s in zip(pairs, swapped)
    ]
    return links, fwd, bwd


def cmd_align(args: argparse.Namespace) -> int:
    errors: list[str] = []
    src = _check_file(args.src, "--src", errors)
    tgt = _check_file(args.tgt, "--tgt", errors)
    if args.iterations < 1:
        errors.append(f"--iterations must be >= 1, got {args.iterations}")
    if args.tension < 0:
        errors.append(f"--tension must be >= 0, got {args.tension}")
    if errors:
        _fail(errors)
    started = time.perf_counter()
    pairs = load_parallel(src, tgt)
    links, fwd, bwd = _align_pairs(pairs, args.iterations, args.diagonal, args.tension)
    write_pharaoh(links, args.out)
    if args.fwd_table:
        write_table(fwd, args.fwd_table)
    if args.bwd_table:
        write_table(bwd, args.bwd_table)
    rows = [
        ("pairs", str(len(pairs))),
        ("links", str(sum(len(l) for l in links))),
        ("iterations", str(args.iterations)),
        ("time.align", f"{time.perf_counter() - started:.3f}"),
    ]
    if args.report:
        _write_rows(rows, args.report)
    return 0


def _load_tagged_pairs(src: Path, tgt: Path) -> list[ParallelPair]:
    tagged = load_tagged(src)
    tgt_lines = tgt.read_text(encoding="utf-8").splitlines()
    if len(tagged) != len(tgt_lines):
        raise ValueError(
            f"{src} has {len(tagged)} sentences, {tgt} has {len(tgt_lines)} lines"
        )
    pairs = []
    for sent, line in zip(tagged, tgt_lines):
        if not line.strip():
            raise ValueError(f"{tgt}: blank line {sent.sid + 1}")
        pairs.append(
            ParallelPair(sent, normalize_and_tokenize(line, LangTag.embedded("en"), sid=sent.sid))
        )
    return pairs


def cmd_dict(args: argparse.Namespace) -> int:
    errors: list[str] = []
    src = _check_file(args.src, "--src", errors)
    tgt = _check_file(args.tgt, "--tgt", errors)
    alignments = _check_file(args.alignments, "--alignments", errors)
    inclusion = default_inclusion()
    if args.inclusion:
        path = _check_file(args.inclusion, "--inclusion", errors)
        if path.is_file():
            inclusion = load_inclusion_list(path)
    if errors:
        _fail(errors)
    started = time.perf_counter()
    pairs = _load_tagged_pairs(src, tgt)
    links = read_pharaoh(alignments)
    if len(links) != len(pairs):
        raise ValueError(
            f"{alignments} has {len(links)} alignments for {len(pairs)} sentence pairs"
        )
    tables = [
        extract_substitution_table(pair, pair_links, inclusion)
        for pair, pair_links in zip(pairs, links)
    ]
    write_substitution_tables(tables, args.out)
    rows = [
        ("pairs", str(len(pairs))),
        ("entries", str(sum(len(t.entries) for t in tables))),
        ("time.dict", f"{time.perf_counter() - started:.3f}"),
    ]
    if args.report:
        _write_rows(rows, args.report)
    return 0


def _filter_spec(args: argparse.Namespace, errors: list[str]) -> FilterSpec | None:
    cmi_lo, cmi_hi = _parse_range(args.cmi, "--cmi", errors)
    spf_lo, spf_hi = _parse_range(args.spf, "--spf", errors)
    if args.cap < 1:
        errors.append(f"--cap must be >= 1, got {args.cap}")
    if args.ppl_max is not None and not (args.lm or args.scores):
        errors.append("--ppl-max needs --lm or --scores to produce perplexities")
    if errors:
        return None
    return FilterSpec(
        cmi_lo=cmi_lo,
        cmi_hi=cmi_hi,
        spf_lo=spf_lo,
        spf_hi=spf_hi,
        ppl_max=args.ppl_max,
        cap=args.cap,
    )


def cmd_generate(args: argparse.Namespace) -> int:
    errors: list[str] = []
    src = _check_file(args.src, "--src", errors)
    tgt = _check_file(args.tgt, "--tgt", errors)
    tables_path = _check_file(args.tables, "--tables", errors)
    inclusion = default_inclusion()
    if args.inclusion:
        path = _check_file(args.inclusion, "--inclusion", errors)
        if path.is_file():
            inclusion = load_inclusion_list(path)
    if args.lm:
        _check_file(args.lm, "--lm", errors)
    if args.scores:
        _check_file(args.scores, "--scores", errors)
    if args.threads < 1:
        errors.append(f"--threads must be >= 1, got {args.threads}")
    if args.oversample < 1:
        errors.append(f"--oversample must be >= 1, got {args.oversample}")
    spec = _filter_spec(args, errors)
    if errors or spec is None:
        _fail(errors)
    started = time.perf_counter()
    pairs = _load_tagged_pairs(src, tgt)
    tables = read_substitution_tables(tables_path)
    scorer = None
    if args.scores:
        scorer = score_lookup(load_score_file(args.scores))
    elif args.lm:
        scorer = lm_scorer(load_lm(args.lm))
    by_sid = {p.sid: p for p in pairs}
    variants = generate_cm_corpus(
        pairs,
        tables,
        inclusion,
        spec,
        seed=args.seed,
        scorer=scorer,
        oversample=args.oversample,
        threads=args.threads,
    )
    count = write_variants(args.out, ((v, by_sid[v.pair_id].target) for v in variants))
    rows = [
        ("seed", str(args.seed)),
        ("pairs", str(len(pairs))),
        ("variants", str(count)),
        ("time.generate", f"{time.perf_counter() - started:.3f}"),
    ]
    if args.report:
        _write_rows(rows, args.report)
    return 0


def cmd_translit(args: argparse.Namespace) -> int:
    errors: list[str] = []
    src = _check_file(args.infile, "--in", errors)
    scheme = default_scheme()
    if args.scheme:
        path = _check_file(args.scheme, "--scheme", errors)
        if path.is_file():
            scheme = load_scheme(path)
    overrides = None
    report = TranslitReport()
    if args.overrides:
        path = _check_file(args.overrides, "--overrides", errors)
        if path.is_file():
            overrides = load_override_map(path, report=report)
    if errors:
        _fail(errors)
    started = time.perf_counter()
    records = read_variants(src, matrix_code=args.matrix)

    def romanized():
        for v, target in records:
            cm = romanize_sentence(v.cm, scheme, overrides, report)
            yield CMVariant(v.pair_id, v.ordinal, cm, v.switched, v.cmi, v.spf, v.ppl), target

    write_variants(args.out, romanized())
    rows = [("tokens", str(report.tokens)), ("unknown_total", str(report.unknown_total))]
    rows += [(f"unknown.{ch}", str(n)) for ch, n in sorted(report.unknown.items())]
    rows.append(("time.translit", f"{time.perf_counter() - started:.3f}"))
    if args.report:
        _write_rows(rows, args.report)
    return 0


def cmd_noise(args: argparse.Namespace) -> int:
    errors: list[str] = []
    src = _check_file(args.infile, "--in", errors)
    rates = _parse_rates(args.rates, errors)
    if errors:
        _fail(errors)
    spec = NoiseSpec(
        **rates,
        seed=args.seed,
        eligible=eligible_latin if args.eligible == "latin" else eligible_transliterated,
    )
    started = time.perf_counter()
    records = read_variants(src, matrix_code=args.matrix, romanized=True)
    report = NoiseReport()
    noisy = inject_noise((v for v, _ in records), spec, report=report)
    write_variants(args.out, ((v, target) for v, (_, target) in zip(noisy, records)))
    rows = [("seed", str(args.seed))]
    rows += report.rows()
    rows.append(("time.noise", f"{time.perf_counter() - started:.3f}"))
    if args.report:
        _write_rows(rows, args.report)
    return 0


def cmd_assemble(args: argparse.Namespace) -> int:
    errors: list[str] = []
    _check_file(args.config, "--config", errors)
    if errors:
        _fail(errors)
    started = time.perf_counter()
    directions, corpora = parse_assembly_config(args.config)
    if args.recipe:
        directions = RECIPES[args.recipe](corpora) + directions
    if not directions:
        raise ValueError(f"{args.config}: no directions (use --recipe or [direction:*] sections)")
    missing = [
        f"direction {d.name}: no such file: {p}"
        for d in directions
        for p in (d.src_path, d.tgt_path)
        if not p.is_file()
    ]
    if missing:
        _fail(missing)
    counts = assemble_joint(
        directions, seed=args.seed, out_src=args.out_src, out_tgt=args.out_tgt,
        shuffle=args.shuffle,
    )
    rows = [("seed", str(args.seed))]
    rows += [(f"direction.{name}", str(n)) for name, n in counts]
    rows.append(("total", str(sum(n for _, n in counts))))
    rows.append(("time.assemble", f"{time.perf_counter() - started:.3f}"))
    if args.report:
        _write_rows(rows, args.report)
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    errors: list[str] = []
    src = _check_file(args.infile, "--in", errors)
    if errors:
        _fail(errors)
    records = read_variants(src, matrix_code=args.matrix)
    _write_rows(corpus_stats(records).rows(), args.out)
    return 0


def cmd_bleu(args: argparse.Namespace) -> int:
    errors: list[str] = []
    hyp_path = _check_file(args.hyp, "--hyp", errors)
    ref_path = _check_file(args.ref, "--ref", errors)
    if errors:
        _fail(errors)
    lang = LangTag.embedded("en")
    hyps = [
        normalize_and_tokenize(line, lang, sid=i)
        for i, line in enumerate(hyp_path.read_text(encoding="utf-8").splitlines())
    ]
    refs = [
        normalize_and_tokenize(line, lang, sid=i)
        for i, line in enumerate(ref_path.read_text(encoding="utf-8").splitlines())
    ]
    r = bleu_components(hyps, refs)
    p1, p2, p3, p4 = (100.0 * p for p in r.precisions)
    print(
        f"BLEU = {r.score:.2f} ({p1:.1f}/{p2:.1f}/{p3:.1f}/{p4:.1f}, "
        f"BP={r.brevity_penalty:.3f})"
    )
    return 0


def _pipeline_config(path: Path, errors: list[str]) -> dict:
    parser = configparser.ConfigParser()
    if not parser.read(path, encoding="utf-8"):
        errors.append(f"cannot read config {path}")
        return {}
    base = path.parent
    cfg: dict = {}
    known = {"data", "aligner", "generate", "translit", "noise", "run"}
    for section in parser.sections():
        if section not in known:
            errors.append(f"{path}: unknown section [{section}]")
    data = parser["data"] if parser.has_section("data") else {}
    for key in ("source", "target", "workdir"):
        if key not in data:
            errors.append(f"{path}: [data] missing {key}")
    if errors:
        return {}
    cfg["source"] = _check_file(base / data["source"], "[data] source", errors)
    cfg["target"] = _check_file(base / data["target"], "[data] target", errors)
    cfg["workdir"] = base / data["workdir"]

    aligner = parser["aligner"] if parser.has_section("aligner") else {}
    gen = parser["generate"] if parser.has_section("generate") else {}
    translit = parser["translit"] if parser.has_section("translit") else {}
    noise = parser["noise"] if parser.has_section("noise") else {}
    run = parser["run"] if parser.has_section("run") else {}

    def number(section, body, key, default, cast, lo=None):
        raw = body.get(key)
        if raw is None:
            return default
        try:
            value = cast(raw)
        except ValueError:
            errors.append(f"{path}: [{section}] {key}: bad value {raw!r}")
            return default
        if lo is not None and value < lo:
            errors.append(f"{path}: [{section}] {key}: must be >= {lo}")
        return value

    cfg["iterations"] = number("aligner", aligner, "iterations", 5, int, lo=1)
    cfg["diagonal"] = str(aligner.get("diagonal", "false")).lower() in ("1", "true", "yes")
    cfg["tension"] = number("aligner", aligner, "tension", 4.0, float, lo=0.0)

    cfg["inclusion"] = default_inclusion()
    if gen.get("inclusion"):
        p = _check_file(base / gen["inclusion"], "[generate] inclusion", errors)
        if p.is_file():
            cfg["inclusion"] = load_inclusion_list(p)
    cmi_lo, cmi_hi = _parse_range(gen.get("cmi", "20:40"), "[generate] cmi", errors)
    spf_lo, spf_hi = _parse_range(gen.get("spf", "0.35:0.55"), "[generate] spf", errors)
    cfg["cap"] = number("generate", gen, "cap", 5, int, lo=1)
    cfg["oversample"] = number("generate", gen, "oversample", 4, int, lo=1)
    cfg["ppl_max"] = number("generate", gen, "ppl_max", None, float)
    cfg["lm_order"] = number("generate", gen, "lm_order", 3, int, lo=1)
    try:
        cfg["filter"] = FilterSpec(
            cmi_lo=cmi_lo, cmi_hi=cmi_hi, spf_lo=spf_lo, spf_hi=spf_hi, cap=cfg["cap"]
        )
    except ValueError as exc:
        errors.append(f"{path}: [generate]: {exc}")

    cfg["scheme"] = default_scheme()
    if translit.get("scheme"):
        p = _check_file(base / translit["scheme"], "[translit] scheme", errors)
        if p.is_file():
            cfg["scheme"] = load_scheme(p)
    cfg["overrides"] = None
    if translit.get("overrides"):
        p = _check_file(base / translit["overrides"], "[translit] overrides", errors)
        if p.is_file():
            cfg["overrides"] = load_override_map(p)

    cfg["rates"] = {
        "switch": number("noise", noise, "switch", 0.30, float, lo=0.0),
        "omission": number("noise", noise, "omission", 0.12, float, lo=0.0),
        "typo": number("noise", noise, "typo", 0.12, float, lo=0.0),
        "shuffle": number("noise", noise, "shuffle", 0.06, float, lo=0.0),
    }

    if "seed" not in run:
        errors.append(f"{path}: [run] missing seed")
    cfg["seed"] = number("run", run, "seed", 0, int)
    cfg["threads"] = number("run", run, "threads", 1, int, lo=1)
    cfg["shuffle"] = str(run.get("shuffle", "false")).lower() in ("1", "true", "yes")
    return cfg


def _write_plain_pair(path_src: Path, path_tgt: Path, rows) -> None:
    with atomic_open(path_src) as fs, atomic_open(path_tgt) as ft:
        for v, target in rows:
            fs.write(v.cm.text + "\n")
            ft.write(target.text + "\n")


def cmd_pipeline(args: argparse.Namespace) -> int:
    errors: list[str] = []
    config = _check_file(args.config, "--config", errors)
    if errors:
        _fail(errors)
    cfg = _pipeline_config(config, errors)
    if errors:
        _fail(errors)
    work: Path = cfg["workdir"]
    work.mkdir(parents=True, exist_ok=True)
    seed = cfg["seed"]
    rows: list[tuple[str, str]] = [
        ("seed", str(seed)),
        ("input.source.sha256", _sha256(cfg["source"])),
        ("input.target.sha256", _sha256(cfg["target"])),
    ]
    t0 = time.perf_counter()

    pairs = _load_tagged_pairs(cfg["source"], cfg["target"])
    links, fwd, bwd = _align_pairs(pairs, cfg["iterations"], cfg["diagonal"], cfg["tension"])
    write_pharaoh(links, work / "alignments.txt")
    rows.append(("align.pairs", str(len(pairs))))
    rows.append(("align.links", str(sum(len(l) for l in links))))
    t1 = time.perf_counter()

    tables = [
        extract_substitution_table(pair, pair_links, cfg["inclusion"])
        for pair, pair_links in zip(pairs, links)
    ]
    write_substitution_tables(tables, work / "tables.jsonl")
    rows.append(("dict.entries", str(sum(len(t.entries) for t in tables))))
    t2 = time.perf_counter()

    by_sid = {p.sid: p for p in pairs}
    spec: FilterSpec = cfg["filter"]
    scorer = None
    if cfg["ppl_max"] is not None:
        # bootstrap: filter on the windows alone, fit the fluency model on
        # those survivors, then re-run with the perplexity cutoff active
        first_pass = list(
            generate_cm_corpus(
                pairs, tables, cfg["inclusion"], spec, seed=seed,
                oversample=cfg["oversample"], threads=cfg["threads"],
            )
        )
        if not first_pass:
            raise ValueError("no variants passed the windows; cannot fit a fluency model")
        lm = train_lm((v.cm for v in first_pass), order=cfg["lm_order"])
        save_lm(lm, work / "model.lm")
        scorer = lm_scorer(lm)
        spec = FilterSpec(
            cmi_lo=spec.cmi_lo, cmi_hi=spec.cmi_hi, spf_lo=spec.spf_lo,
            spf_hi=spec.spf_hi, ppl_max=cfg["ppl_max"], cap=spec.cap,
        )
    variants = list(
        generate_cm_corpus(
            pairs, tables, cfg["inclusion"], spec, seed=seed, scorer=scorer,
            oversample=cfg["oversample"], threads=cfg["threads"],
        )
    )
    records = [(v, by_sid[v.pair_id].target) for v in variants]
    write_variants(work / "variants.tsv", records)
    rows.append(("generate.variants", str(len(variants))))
    t3 = time.perf_counter()

    treport = TranslitReport()
    roman = [
        (
            CMVariant(
                v.pair_id, v.ordinal,
                romanize_sentence(v.cm, cfg["scheme"], cfg["overrides"], treport),
                v.switched, v.cmi, v.spf, v.ppl,
            ),
            target,
        )
        for v, target in records
    ]
    write_variants(work / "roman.tsv", roman)
    rows.append(("translit.tokens", str(treport.tokens)))
    rows.append(("translit.unknown_total", str(treport.unknown_total)))
    t4 = time.perf_counter()

    nspec = NoiseSpec(**cfg["rates"], seed=seed)
    nreport = NoiseReport()
    noisy_vs = list(inject_noise((v for v, _ in roman), nspec, report=nreport))
    noisy = [(v, target) for v, (_, target) in zip(noisy_vs, roman)]
    write_variants(work / "noisy.tsv", noisy)
    rows += [(f"noise.{k}", v) for k, v in nreport.rows()]
    t5 = time.perf_counter()

    _write_plain_pair(work / "hi_cr.src", work / "hi_cr.tgt", roman)
    _write_plain_pair(work / "hi_crn.src", work / "hi_crn.tgt", noisy)
    assemble_cfg = work / "assembly.ini"
    with atomic_open(assemble_cfg) as fh:
        fh.write(
            "[corpus:hi_cr]\nsrc = hi_cr.src\ntgt = hi_cr.tgt\ncode = hi\n\n"
            "[corpus:hi_crn]\nsrc = hi_crn.src\ntgt = hi_crn.tgt\ncode = hi\n"
        )
    directions, corpora = parse_assembly_config(assemble_cfg)
    directions = RECIPES["roman"](corpora) + directions
    counts = assemble_joint(
        directions, seed=seed, out_src=work / "joint.src", out_tgt=work / "joint.tgt",
        shuffle=cfg["shuffle"],
    )
    rows += [(f"assemble.direction.{name}", str(n)) for name, n in counts]
    rows.append(("assemble.total", str(sum(n for _, n in counts))))
    t6 = time.perf_counter()

    rows += [(f"stats.{k}", v) for k, v in corpus_stats(records).rows()]
    rows += [
        ("time.align", f"{t1 - t0:.3f}"),
        ("time.dict", f"{t2 - t1:.3f}"),
        ("time.generate", f"{t3 - t2:.3f}"),
        ("time.translit", f"{t4 - t3:.3f}"),
        ("time.noise", f"{t5 - t4:.3f}"),
        ("time.assemble", f"{t6 - t5:.3f}"),
        ("time.total", f"{time.perf_counter() - t0:.3f}"),
    ]
    _write_rows(rows, work / "report.tsv")
    if args.report_stdout:
        _write_rows(rows, None)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="codemix",
        description="Synthetic code-mixed parallel corpus construction.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    p = sub.add_parser("align", help="train word aligners and write intersected alignments")
    p.add_argument("--src", required=True, help="source side, one sentence per line")
    p.add_argument("--tgt", required=True, help="target side, one sentence per line")
    p.add_argument("--out", required=True, help="output alignment file (Pharaoh i-j format)")
    p.add_argument("--iterations", type=int, default=5)
    p.add_argument("--diagonal", action="store_true", help="use the diagonal position prior")
    p.add_argument("--tension", type=float, default=4.0)
    p.add_argument("--fwd-table", help="dump the forward translation table here")
    p.add_argument("--bwd-table", help="dump the backward translation table here")
    p.add_argument("--report", help="write run report rows here")
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("dict", help="extract substitution tables from alignments")
    p.add_argument("--src", required=True, help="POS-tagged source TSV")
    p.add_argument("--tgt", required=True, help="target side, one sentence per line")
    p.add_argument("--alignments", required=True, help="Pharaoh alignment file")
    p.add_argument("--out", required=True, help="output substitution tables (JSONL)")
    p.add_argument("--inclusion", help="switchable POS tags, one per line")
    p.add_argument("--report", help="write run report rows here")
    p.set_defaults(func=cmd_dict)

    p = sub.add_parser("generate", help="write filtered code-mixed variants")
    p.add_argument("--src", required=True, help="POS-tagged source TSV")
    p.add_argument("--tgt", required=True, help="target side, one sentence per line")
    p.add_argument("--tables", required=True, help="substitution tables (JSONL)")
    p.add_argument("--out", required=True, help="output variants TSV")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--inclusion", help="switchable POS tags, one per line")
    p.add_argument("--cmi", default="20:40", help="CMI window LO:HI (default 20:40)")
    p.add_argument("--spf", default="0.35:0.55", help="SPF window LO:HI (default 0.35:0.55)")
    p.add_argument("--cap", type=int, default=5, help="max variants kept per sentence")
    p.add_argument("--oversample", type=int, default=4)
    p.add_argument("--ppl-max", type=float, default=None, help="perplexity cutoff")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--lm", help="fluency model file for perplexity scoring")
    group.add_argument("--scores", help="external perplexity TSV (id, variant, ppl)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--report", help="write run report rows here")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("translit", help="romanize the matrix side of a variants file")
    p.add_argument("--in", dest="infile", required=True, help="variants TSV")
    p.add_argument("--out", required=True, help="output variants TSV")
    p.add_argument("--scheme", help="romanization rules TSV (default: shipped Devanagari)")
    p.add_argument("--overrides", help="exact-token override TSV")
    p.add_argument("--matrix", default="hi", help="matrix language code (default hi)")
    p.add_argument("--report", help="write run report rows here")
    p.set_defaults(func=cmd_translit)

    p = sub.add_parser("noise", help="perturb romanized tokens at configured rates")
    p.add_argument("--in", dest="infile", required=True, help="romanized variants TSV")
    p.add_argument("--out", required=True, help="output variants TSV")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument(
        "--rates",
        default="",
        help="per-type rates, e.g. switch=0.30,omission=0.12,typo=0.12,shuffle=0.06",
    )
    p.add_argument(
        "--eligible",
        choices=("transliterated", "latin"),
        default="transliterated",
        help="which tokens may be perturbed",
    )
    p.add_argument("--matrix", default="hi", help="matrix language code (default hi)")
    p.add_argument("--report", help="write run report rows here")
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("assemble", help="build joint multi-direction training files")
    p.add_argument("--config", required=True, help="INI with corpus/direction sections")
    p.add_argument("--recipe", choices=sorted(RECIPES), help="expand a corpus recipe")
    p.add_argument("--out-src", required=True)
    p.add_argument("--out-tgt", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--shuffle", action="store_true", help="shuffle rows after concatenation")
    p.add_argument("--report", help="write run report rows here")
    p.set_defaults(func=cmd_assemble)

    p = sub.add_parser("stats", help="summarize a variants file")
    p.add_argument("--in", dest="infile", required=True, help="variants TSV")
    p.add_argument("--out", help="write rows here instead of stdout")
    p.add_argument("--matrix", default="hi", help="matrix language code (default hi)")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bleu", help="corpus BLEU of a hypothesis file against a reference")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.set_defaults(func=cmd_bleu)

    p = sub.add_parser("pipeline", help="run align through stats from one INI config")
    p.add_argument("--config", required=True)
    p.add_argument(
        "--report-stdout", action="store_true", help="also print the run report to stdout"
    )
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"codemix: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
