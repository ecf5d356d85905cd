"""Per-sample maximum TF-IDF similarity against a benchmark."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .tfidf import TfIdfModel, fit_tfidf

PERCENTILES = (5, 25, 50, 75, 95)


@dataclass(frozen=True)
class SimilarityRecord:
    sample_id: str
    best_benchmark_entry_id: str
    score: float


def summarize(scores: Sequence[float]) -> dict:
    arr = np.asarray(scores, dtype=np.float64)
    if arr.size == 0:
        return {"count": 0, "mean": 0.0, "std": 0.0, "min": 0.0, "max": 0.0,
                **{f"p{p}": 0.0 for p in PERCENTILES}}
    out = {
        "count": int(arr.size),
        "mean": float(arr.mean()),
        "std": float(arr.std()),
        "min": float(arr.min()),
        "max": float(arr.max()),
    }
    for p, v in zip(PERCENTILES, np.percentile(arr, PERCENTILES)):
        out[f"p{p}"] = float(v)
    return out


def nearest_benchmark(
    samples: Sequence[tuple[str, str]],
    benchmark: Sequence[tuple[str, str]],
    model: TfIdfModel | None = None,
) -> tuple[list[SimilarityRecord], dict]:
    """Best benchmark match for every ``(sample_id, text)``.

    The TF-IDF model is fitted on samples and benchmark texts together unless
    one is passed in. Ties go to the earliest benchmark entry.
    """
    if not benchmark:
        raise ValueError("benchmark must be non-empty")
    if model is None:
        model = fit_tfidf([t for _, t in samples] + [t for _, t in benchmark])
    if not samples:
        return [], summarize([])
    d = model.embed_many([t for _, t in samples])
    b = model.embed_many([t for _, t in benchmark])
    sims = (d @ b.T).toarray()
    best = sims.argmax(axis=1)
    scores = np.clip(sims[np.arange(len(samples)), best], 0.0, 1.0)
    records = [
        SimilarityRecord(sid, benchmark[j][0], float(s))
        for (sid, _), j, s in zip(samples, best, scores)
    ]
    return records, summarize(scores)


def compare_datasets(
    datasets: Mapping[str, Sequence[tuple[str, str]]],
    benchmark: Sequence[tuple[str, str]],
) -> dict[str, dict]:
    """Summary statistics per dataset, each scored with its own fitted model."""
    return {name: nearest_benchmark(samples, benchmark)[1] for name, samples in datasets.items()}


def group_entries(records: Sequence[Mapping], sep: str = "#") -> list[tuple[str, str]]:
    """Merge descriptor entries sharing an ``entry_id`` prefix into one text.

    ``HumanEval/0#docstring`` and ``HumanEval/0#solution`` become one
    ``HumanEval/0`` entry, joined by a newline in file order.
    """
    merged: dict[str, list[str]] = {}
    for rec in records:
        key = str(rec["entry_id"]).split(sep, 1)[0]
        merged.setdefault(key, []).append(rec["text"])
    return [(k, "\n".join(v)) for k, v in merged.items()]
