"""Assign samples to the closest of ten coding categories."""

from __future__ import annotations

import json
import os
from collections.abc import Sequence
from dataclasses import dataclass
from importlib import resources
from typing import Protocol

import httpx
import numpy as np

from ..records import InstructionSample
from .tfidf import TfIdfModel, fit_tfidf

N_CATEGORIES = 10


class EmbedderError(Exception):
    pass


@dataclass(frozen=True)
class Category:
    name: str
    description: str


def load_categories(path: str | os.PathLike | None = None) -> list[Category]:
    """Read ``[{"name", "description"}, ...]``; the bundled list when no path."""
    if path is None:
        raw = resources.files("oss_forge.data").joinpath("categories.json").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as f:
            raw = f.read()
    cats = [Category(c["name"], c["description"]) for c in json.loads(raw)]
    if len(cats) != N_CATEGORIES:
        raise ValueError(f"expected {N_CATEGORIES} categories, got {len(cats)}")
    return cats


class Embedder(Protocol):
    embedder_id: str

    def embed(self, texts: Sequence[str]) -> np.ndarray: ...


class TfIdfEmbedder:
    """Dense TF-IDF vectors; fitted on whatever ``fit`` last saw."""

    embedder_id = "tfidf"

    def __init__(self, model: TfIdfModel | None = None):
        self.model = model

    def fit(self, texts: Sequence[str]) -> None:
        self.model = fit_tfidf(list(texts))

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        if self.model is None:
            raise EmbedderError("TfIdfEmbedder used before fit")
        return self.model.embed_many(texts).toarray()


class HttpEmbedder:
    """Client for an embeddings endpoint returning ``{"data": [{"embedding": [...]}, ...]}``.

    An instruction string is sent along for instruction-conditioned models.
    """

    def __init__(
        self,
        endpoint: str,
        model: str,
        instruction: str = "Represent the coding problem for classification:",
        token_env: str = "EMBEDDER_API_TOKEN",
        batch_size: int = 64,
        timeout: float = 60.0,
        client: httpx.Client | None = None,
    ):
        self.endpoint = endpoint
        self.model = model
        self.instruction = instruction
        self.batch_size = batch_size
        self.embedder_id = f"http:{model}"
        token = os.environ.get(token_env)
        self.headers = {"Authorization": f"Bearer {token}"} if token else {}
        self.client = client or httpx.Client(timeout=timeout)

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        rows: list[list[float]] = []
        for i in range(0, len(texts), self.batch_size):
            batch = list(texts[i : i + self.batch_size])
            payload = {"model": self.model, "input": batch, "instruction": self.instruction}
            try:
                resp = self.client.post(self.endpoint, json=payload, headers=self.headers)
                resp.raise_for_status()
                data = resp.json()["data"]
            except (httpx.HTTPError, ValueError, KeyError) as exc:
                raise EmbedderError(f"embedding request failed: {exc}") from exc
            if len(data) != len(batch):
                raise EmbedderError(f"expected {len(batch)} embeddings, got {len(data)}")
            rows.extend(d["embedding"] for d in data)
        return np.asarray(rows, dtype=np.float64).reshape(len(texts), -1)


def _row_normalize(m: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(m, axis=1, keepdims=True)
    return np.divide(m, norms, out=np.zeros_like(m), where=norms > 0)


@dataclass
class CategoryBreakdown:
    categories: list[Category]
    assignment: dict[str, int]
    counts: list[int]
    ties: int
    embedder_id: str

    def to_dict(self) -> dict:
        total = sum(self.counts)
        return {
            "embedder": self.embedder_id,
            "ties": self.ties,
            "categories": [
                {"name": c.name, "count": n, "share": (n / total if total else 0.0)}
                for c, n in zip(self.categories, self.counts)
            ],
        }


def sample_text(sample: InstructionSample) -> str:
    return sample.problem + "\n" + sample.solution


def categorize(
    samples: Sequence[InstructionSample],
    categories: Sequence[Category],
    embedder: Embedder | None = None,
) -> CategoryBreakdown:
    """Argmax-cosine assignment; ties go to the lowest category index and are
    counted. A TF-IDF embedder is fitted on descriptions plus samples."""
    if len(categories) != N_CATEGORIES:
        raise ValueError(f"expected {N_CATEGORIES} categories, got {len(categories)}")
    embedder = embedder if embedder is not None else TfIdfEmbedder()
    cat_texts = [f"{c.name}. {c.description}" for c in categories]
    texts = [sample_text(s) for s in samples]
    if hasattr(embedder, "fit"):
        embedder.fit(cat_texts + texts)
    cat_vecs = _row_normalize(np.asarray(embedder.embed(cat_texts), dtype=np.float64))
    counts = [0] * len(categories)
    assignment: dict[str, int] = {}
    ties = 0
    if texts:
        vecs = _row_normalize(np.asarray(embedder.embed(texts), dtype=np.float64))
        sims = vecs @ cat_vecs.T
        best = sims.argmax(axis=1)
        top = sims[np.arange(len(texts)), best]
        ties = int(np.sum((sims == top[:, None]).sum(axis=1) > 1))
        for s, j in zip(samples, best):
            assignment[s.sample_id] = int(j)
            counts[int(j)] += 1
    return CategoryBreakdown(list(categories), assignment, counts, ties, embedder.embedder_id)
