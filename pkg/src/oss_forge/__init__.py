"""Seed-snippet driven instruction data pipeline for code models."""

from .clean import CleanReport, clean
from .corpus import (
    RELEASED_QUOTA,
    LoadStats,
    SamplingQuota,
    SamplingReport,
    derive_rng,
    extract_seed,
    extract_seeds,
    is_trivial_seed,
    load_corpus,
    sample_documents,
)
from .decontam import (
    BenchmarkCorpus,
    ContaminationIndex,
    ContaminationMatch,
    build_corpus,
    decontaminate,
    find_contamination,
    load_benchmark,
    load_benchmarks,
)
from .export import ExportSchema, export_jsonl, read_dataset, split_by_language, write_report
from .pairminer import CommentFunctionPair, mine_pairs, pairs_to_samples, prioritize_pairs
from .records import CodeDocument, InstructionSample, SeedSnippet

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BenchmarkCorpus",
    "build_corpus",
    "clean",
    "CleanReport",
    "CodeDocument",
    "CommentFunctionPair",
    "ContaminationIndex",
    "ContaminationMatch",
    "decontaminate",
    "derive_rng",
    "export_jsonl",
    "ExportSchema",
    "extract_seed",
    "extract_seeds",
    "find_contamination",
    "InstructionSample",
    "is_trivial_seed",
    "load_benchmark",
    "load_benchmarks",
    "load_corpus",
    "LoadStats",
    "mine_pairs",
    "pairs_to_samples",
    "prioritize_pairs",
    "read_dataset",
    "RELEASED_QUOTA",
    "sample_documents",
    "SamplingQuota",
    "SamplingReport",
    "SeedSnippet",
    "split_by_language",
    "write_report",
]
