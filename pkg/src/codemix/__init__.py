"""Synthetic code-mixed parallel corpus construction.

Pipeline stages: word alignment (IBM Model 1, optional diagonal prior),
bilingual substitution-table extraction, code-mixed variant generation
with CMI/SPF/perplexity filtering, Devanagari romanization, word-level
adversarial noise, and joint-corpus assembly with direction proxy tokens.
"""

from .aligner import (
    SubstitutionTable,
    TranslationTable,
    extract_substitution_table,
    symmetrize,
    train_diagonal,
    train_ibm1,
    viterbi_align,
)
from .assembly import Direction, assemble_joint, undersample
from .corpus import (
    LangTag,
    ParallelPair,
    Sentence,
    TaggedToken,
    load_parallel,
    load_tagged,
    normalize_and_tokenize,
)
from .fluency import NgramLM, perplexity, train_lm
from .generator import (
    CMVariant,
    FilterSpec,
    combination_sizes,
    count_variants,
    default_inclusion,
    filter_variants,
    generate_cm_corpus,
    sample_subsets,
    select_candidates,
    substitute,
)
from .metrics import bleu, cmi, corpus_stats, spf
from .noise import NoiseSpec, inject_noise
from .translit import TranslitScheme, default_scheme, romanize_sentence, transliterate

__version__ = "0.1.0"

__all__ = [
    "CMVariant",
    "Direction",
    "FilterSpec",
    "LangTag",
    "NgramLM",
    "NoiseSpec",
    "ParallelPair",
    "Sentence",
    "SubstitutionTable",
    "TaggedToken",
    "TranslationTable",
    "TranslitScheme",
    "__version__",
    "assemble_joint",
    "bleu",
    "cmi",
    "combination_sizes",
    "corpus_stats",
    "count_variants",
    "default_inclusion",
    "default_scheme",
    "extract_substitution_table",
    "filter_variants",
    "generate_cm_corpus",
    "inject_noise",
    "load_parallel",
    "load_tagged",
    "normalize_and_tokenize",
    "perplexity",
    "romanize_sentence",
    "sample_subsets",
    "select_candidates",
    "spf",
    "substitute",
    "symmetrize",
    "train_diagonal",
    "train_ibm1",
    "train_lm",
    "transliterate",
    "undersample",
    "viterbi_align",
]
