"""Acceptance gate: one test per shipped guarantee, one printed verdict each.

Run with `pytest tests/test_acceptance.py -v -s` to see the verdict
lines; each prints "[acceptance] C<n> <what>: PASS" (or FAIL) before the
assertion fires.
"""
import math
import random
import string
import time
from pathlib import Path

import pytest

from codemix.aligner import train_ibm1
from codemix.assembly import CorpusEntry, recipe_roman, recipe_zero_shot, undersample
from codemix.cli import main
from codemix.corpus import LangTag, ParallelPair, Sentence, TaggedToken, normalize_and_tokenize
from codemix.generator import (
    CMVariant,
    FilterSpec,
    count_variants,
    default_inclusion,
    generate_cm_corpus,
)
from codemix.metrics import bleu, bleu_components, cmi, spf
from codemix.noise import NoiseReport, NoiseSpec, inject_noise
from codemix.aligner import extract_substitution_table
from codemix.cli import _align_pairs, _load_tagged_pairs
from codemix.noise import perturb_omission, perturb_shuffle, perturb_switch, perturb_typo

FIXTURES = Path(__file__).parent / "fixtures"
HI = LangTag.matrix("hi")
EN = LangTag.embedded("en")


def _verdict(cid: str, what: str, ok: bool, detail: str = "") -> None:
    print(f"[acceptance] {cid} {what}: {'PASS' if ok else 'FAIL'}")
    assert ok, f"{cid} {what} {detail}".rstrip()


def test_c1_combination_counts():
    started = time.perf_counter()
    exact = count_variants(3) == 7 and count_variants(5) == 26 and count_variants(15) == 8008
    small = all(count_variants(r) == 2**r - 1 for r in range(0, 5))
    fast = time.perf_counter() - started < 1.0
    _verdict("C1", "combination-heuristic family sizes", exact and small and fast,
             f"(exact={exact} small={small} fast={fast})")


def _noise_fixture(tokens_per=10, variants=10_000):
    rng = random.Random(7)
    out = []
    for pid in range(variants):
        words = ("".join(rng.sample(string.ascii_lowercase, rng.randint(5, 10)))
                 for _ in range(tokens_per))
        sent = Sentence(pid, tuple(
            TaggedToken(w, HI, transliterated=True) for w in words
        ))
        out.append(CMVariant(pid, 0, sent, (0,), 50.0, 0.5))
    return out


def test_c2_noise_rates():
    started = time.perf_counter()
    fixture = _noise_fixture()
    spec = NoiseSpec(switch=0.30, omission=0.12, typo=0.12, shuffle=0.06, seed=42)
    report = NoiseReport()
    first = [v.cm.surfaces for v in inject_noise(fixture, spec, report=report)]
    second = [v.cm.surfaces for v in inject_noise(fixture, spec)]
    n = report.eligible
    fractions = {k: report.applied[k] / n for k in ("switch", "omission", "typo", "shuffle")}
    rates = {"switch": 0.30, "omission": 0.12, "typo": 0.12, "shuffle": 0.06}
    per_type = all(abs(fractions[k] - rates[k]) <= 0.01 for k in rates)
    total = sum(report.applied.values()) / n
    in_band = 0.59 <= total <= 0.61
    identical = first == second
    fast = time.perf_counter() - started < 10.0
    _verdict(
        "C2", "noise rates on 100k eligible tokens",
        n == 100_000 and per_type and in_band and identical and fast,
        f"(n={n} fractions={fractions} total={total:.4f} identical={identical} fast={fast})",
    )


def test_c3_perturbation_examples():
    got = (
        perturb_switch("transfer", 3),
        perturb_omission("amazing", random.Random(4)),
        perturb_typo("mobile", 2, random.Random(0)),
        perturb_shuffle("laptop", random.Random(86)),
    )
    want = ("trasnfer", "amzng", "movile", "loptap")
    _verdict("C3", "published perturbation examples reachable", got == want,
             f"(got={got})")


def test_c4_metric_oracles():
    mixed = Sentence(0, (
        TaggedToken("Yeh", HI), TaggedToken("security", EN),
        TaggedToken("certificate", EN), TaggedToken("trusted", EN),
        TaggedToken("nahi", HI), TaggedToken("hai", HI),
        TaggedToken(".", LangTag.neutral()),
    ))
    mono = normalize_and_tokenize("sab theek hai .", HI)
    cmi_ok = cmi(mixed) == 50.0 and abs(spf(mixed) - 0.4) < 1e-12
    mono_ok = cmi(mono) == 0.0 and spf(mono) == 0.0
    ref = [normalize_and_tokenize("the cat sat on the mat .", EN)]
    identity_ok = bleu(ref, ref) == 100.0
    # clipping: hyp "the the the" vs ref "the cat": p1 = min(3,1)/3
    hyp = [normalize_and_tokenize("the the the", EN)]
    ref2 = [normalize_and_tokenize("the cat", EN)]
    r = bleu_components(hyp, ref2)
    clip_ok = abs(r.precisions[0] - 1 / 3) < 1e-12 and r.score == 0.0
    _verdict("C4", "CMI/SPF/BLEU hand oracles",
             cmi_ok and mono_ok and identity_ok and clip_ok,
             f"(cmi={cmi(mixed)} spf={spf(mixed)} clip_p1={r.precisions[0]})")


def _oracle_em(corpus, iterations):
    """Textbook Model 1 EM over plain dicts; nothing shared with the library."""
    cooc = {None: set()}
    for s, t in corpus:
        cooc[None].update(t)
        for f in s:
            cooc.setdefault(f, set()).update(t)
    t = {f: {e: 1.0 / len(es) for e in es} for f, es in cooc.items()}
    lls = []
    for _ in range(iterations):
        counts = {f: {} for f in t}
        ll = 0.0
        for src, tgt in corpus:
            for e in tgt:
                denom = t[None].get(e, 0.0) + sum(t[f].get(e, 0.0) for f in src)
                ll += math.log(denom / (len(src) + 1))
                counts[None][e] = counts[None].get(e, 0.0) + t[None].get(e, 0.0) / denom
                for f in src:
                    counts[f][e] = counts[f].get(e, 0.0) + t[f].get(e, 0.0) / denom
        lls.append(ll)
        t = {
            f: {e: c / sum(row.values()) for e, c in row.items()}
            for f, row in counts.items()
        }
    return t, lls


def test_c5_aligner_convergence():
    started = time.perf_counter()
    de = LangTag.matrix("de")
    toy = [
        ParallelPair(normalize_and_tokenize(s, de, sid=i),
                     normalize_and_tokenize(t, EN, sid=i))
        for i, (s, t) in enumerate(
            [("das haus", "the house"), ("das buch", "the book"), ("ein buch", "a book")]
        )
    ]
    table = train_ibm1(toy, iterations=10)
    monotone = all(b >= a - 1e-12 for a, b in zip(table.ll_history, table.ll_history[1:]))
    confident = table.prob("the", "das") >= 0.9
    words = [([t.surface for t in p.source.tokens], [t.surface for t in p.target.tokens])
             for p in toy]
    oracle_t, oracle_lls = _oracle_em(words, 10)
    agree = all(
        abs(table.prob(e, f) - p) <= 1e-9
        for f, row in oracle_t.items()
        for e, p in row.items()
    ) and all(abs(a - b) <= 1e-9 for a, b in zip(table.ll_history, oracle_lls))
    fast = time.perf_counter() - started < 1.0
    _verdict("C5", "IBM-1 EM vs brute-force oracle",
             monotone and confident and agree and fast,
             f"(monotone={monotone} t(the|das)={table.prob('the', 'das'):.4f} agree={agree})")


def test_c6_end_to_end_fixture(tmp_path):
    started = time.perf_counter()
    cfg = tmp_path / "run.ini"
    cfg.write_text(
        "[data]\n"
        f"source = {FIXTURES / 'bitext.hi.tsv'}\n"
        f"target = {FIXTURES / 'bitext.en.txt'}\n"
        f"workdir = {tmp_path / 'out'}\n\n"
        "[aligner]\niterations = 5\n\n"
        "[generate]\ncmi = 20:40\nspf = 0.35:0.55\ncap = 5\n\n"
        "[run]\nseed = 13\n",
        encoding="utf-8",
    )
    assert main(["pipeline", "--config", str(cfg)]) == 0
    report = {
        k: v
        for k, v in (
            line.split("\t")
            for line in (tmp_path / "out" / "report.tsv").read_text("utf-8").splitlines()
        )
    }
    produced = int(report["generate.variants"]) > 0
    mean_cmi = float(report["stats.mean_cmi"])
    mean_spf = float(report["stats.mean_spf"])
    windows = 20.0 <= mean_cmi <= 40.0 and 35.0 <= mean_spf * 100 <= 55.0
    joint = (tmp_path / "out" / "joint.src").read_text("utf-8").splitlines()
    assembled = len(joint) == 3 * int(report["generate.variants"])

    # the fully-switched anchor variant is reachable when the windows are
    # opened up (its CMI of 50 sits above the production window)
    pairs = _load_tagged_pairs(FIXTURES / "bitext.hi.tsv", FIXTURES / "bitext.en.txt")
    links, _, _ = _align_pairs(pairs, iterations=5, diagonal=False, tension=0.0)
    inclusion = default_inclusion()
    tables = [extract_substitution_table(p, l, inclusion) for p, l in zip(pairs, links)]
    permissive = FilterSpec(cmi_lo=0, cmi_hi=100, spf_lo=0, spf_hi=1, cap=16)
    texts = {
        v.cm.text
        for v in generate_cm_corpus(pairs, tables, inclusion, permissive, seed=13)
    }
    verbatim = "यह security certificate trusted नहीं है ।" in texts
    fast = time.perf_counter() - started < 60.0
    _verdict(
        "C6", "end-to-end run on the bundled bitext",
        produced and windows and assembled and verbatim and fast,
        f"(variants={report['generate.variants']} mean_cmi={mean_cmi:.2f} "
        f"mean_spf={mean_spf:.4f} verbatim={verbatim} fast={fast})",
    )


def test_c7_assembly_contract(tmp_path):
    corpora = {}
    for name, code in [("hi_cr", "hi"), ("hi_crn", "hi"), ("hi_c", "hi"),
                       ("bn", "bn"), ("bn_r", "bn")]:
        src = tmp_path / f"{name}.src"
        tgt = tmp_path / f"{name}.tgt"
        src.write_text(f"{name} source line\n" * 4, encoding="utf-8")
        tgt.write_text(f"{name} target line\n" * 4, encoding="utf-8")
        corpora[name] = CorpusEntry(name, src, tgt, code)
    zero_shot = recipe_zero_shot(corpora)
    roman = recipe_roman(corpora)
    counts_ok = len(zero_shot) == 9 and len(roman) == 3
    from codemix.assembly import assemble_joint

    out_src = tmp_path / "joint.src"
    out_tgt = tmp_path / "joint.tgt"
    assemble_joint(zero_shot, seed=3, out_src=out_src, out_tgt=out_tgt)
    proxies = {d.proxy for d in zero_shot}
    lines = out_src.read_text(encoding="utf-8").splitlines()
    prefixed = all(line.split(" ", 1)[0] in proxies for line in lines)

    population = [f"line{i}" for i in range(10)]
    hits = {line: 0 for line in population}
    draws = 10_000
    for seed in range(draws):
        for line in undersample(population, 5, seed):
            hits[line] += 1
    uniform = all(0.47 <= hits[line] / draws <= 0.53 for line in population)
    _verdict("C7", "assembly directions, proxies and undersampling",
             counts_ok and prefixed and uniform,
             f"(zero_shot={len(zero_shot)} roman={len(roman)} uniform={uniform})")


def test_c8_model_training_out_of_scope():
    print("[acceptance] C8 downstream model training: SKIP "
          "(full-scale corpus and GPU training are out of reach here; "
          "determinism and property suites in tests/ stand in)")
    pytest.skip("model training needs external corpora and GPUs")
