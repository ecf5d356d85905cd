"""Smoothed-idf TF-IDF with L2-normalized sparse vectors."""

from __future__ import annotations

import math
import re
from collections import Counter
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

TOKENIZER_ID = "lower-alnum-runs"

# runs of letters/digits; underscore counts as a separator
_TOKEN_RE = re.compile(r"[^\W_]+")

SparseVector = Mapping[int, float]


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class TfIdfModel:
    vocabulary: Mapping[str, int]
    idf: np.ndarray
    doc_count: int
    tokenizer_id: str = TOKENIZER_ID

    def __len__(self) -> int:
        return len(self.vocabulary)

    def raw_weights(self, doc: str) -> dict[int, float]:
        """Unnormalized tf * idf weights; out-of-vocabulary terms are ignored."""
        counts = Counter(tokenize(doc))
        out = {}
        for term, tf in counts.items():
            idx = self.vocabulary.get(term)
            if idx is not None:
                out[idx] = tf * float(self.idf[idx])
        return out

    def embed(self, doc: str) -> dict[int, float]:
        return _unit(self.raw_weights(doc))

    def embed_many(self, docs: Sequence[str]) -> sp.csr_matrix:
        """Row-normalized CSR matrix, one row per document."""
        indptr = [0]
        indices: list[int] = []
        data: list[float] = []
        for doc in docs:
            vec = self.embed(doc)
            for idx in sorted(vec):
                indices.append(idx)
                data.append(vec[idx])
            indptr.append(len(indices))
        return sp.csr_matrix(
            (np.asarray(data, dtype=np.float64), np.asarray(indices, dtype=np.int64), np.asarray(indptr)),
            shape=(len(docs), len(self.vocabulary)),
        )


def _unit(weights: dict[int, float]) -> dict[int, float]:
    norm = math.sqrt(sum(w * w for w in weights.values()))
    if norm == 0.0:
        return {}
    return {k: w / norm for k, w in weights.items()}


def fit_tfidf(docs: Sequence[str]) -> TfIdfModel:
    """Vocabulary in first-seen order; ``idf = ln((1 + N) / (1 + df)) + 1``."""
    if not docs:
        raise ValueError("fit_tfidf needs at least one document")
    vocabulary: dict[str, int] = {}
    df: list[int] = []
    for doc in docs:
        # dict.fromkeys dedupes in first-seen order; a set would make indices
        # depend on string hash randomization
        for term in dict.fromkeys(tokenize(doc)):
            idx = vocabulary.get(term)
            if idx is None:
                vocabulary[term] = len(df)
                df.append(1)
            else:
                df[idx] += 1
    if not vocabulary:
        raise ValueError("fit_tfidf: every document is empty after tokenization")
    n = len(docs)
    idf = np.array([math.log((1 + n) / (1 + d)) + 1.0 for d in df])
    return TfIdfModel(vocabulary, idf, n)


def cosine(u: SparseVector | np.ndarray, v: SparseVector | np.ndarray) -> float:
    """Cosine similarity; 0 when either vector is zero. Symmetric bit-for-bit."""
    if isinstance(u, np.ndarray) or isinstance(v, np.ndarray):
        a = np.asarray(u, dtype=np.float64).ravel()
        b = np.asarray(v, dtype=np.float64).ravel()
        na, nb = math.sqrt(float(a @ a)), math.sqrt(float(b @ b))
        if na == 0.0 or nb == 0.0:
            return 0.0
        dot = float(np.sum(a * b))
    else:
        na = math.sqrt(sum(w * w for _, w in sorted(u.items())))
        nb = math.sqrt(sum(w * w for _, w in sorted(v.items())))
        if na == 0.0 or nb == 0.0:
            return 0.0
        dot = sum(u[k] * v[k] for k in sorted(u.keys() & v.keys()))
    return max(-1.0, min(1.0, dot / (na * nb)))
