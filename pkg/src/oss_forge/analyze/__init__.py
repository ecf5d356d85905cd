from .categories import (
    N_CATEGORIES,
    Category,
    CategoryBreakdown,
    Embedder,
    EmbedderError,
    HttpEmbedder,
    TfIdfEmbedder,
    categorize,
    load_categories,
    sample_text,
)
from .histogram import Histogram, subword_counter, token_length_histogram, whitespace_tokens
from .similarity import SimilarityRecord, compare_datasets, group_entries, nearest_benchmark, summarize
from .tfidf import TOKENIZER_ID, TfIdfModel, cosine, fit_tfidf, tokenize

__all__ = [
    "categorize",
    "Category",
    "CategoryBreakdown",
    "compare_datasets",
    "cosine",
    "Embedder",
    "EmbedderError",
    "fit_tfidf",
    "group_entries",
    "Histogram",
    "HttpEmbedder",
    "load_categories",
    "N_CATEGORIES",
    "nearest_benchmark",
    "sample_text",
    "SimilarityRecord",
    "subword_counter",
    "summarize",
    "TfIdfEmbedder",
    "TfIdfModel",
    "token_length_histogram",
    "tokenize",
    "TOKENIZER_ID",
    "whitespace_tokens",
]
