"""Token-length histograms for problems and solutions."""

from __future__ import annotations

import csv
import io
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from ..records import InstructionSample

TokenCounter = Callable[[str], int]


def whitespace_tokens(text: str) -> int:
    return len(text.split())


def subword_counter(tokenizer) -> TokenCounter:
    """Wrap anything with an ``encode(text) -> list`` method, e.g. a
    ``transformers`` tokenizer."""

    def count(text: str) -> int:
        return len(tokenizer.encode(text, add_special_tokens=False))

    return count


@dataclass(frozen=True)
class Histogram:
    edges: list[int]
    problems: list[int]
    solutions: list[int]
    tokenizer_id: str

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bin_start", "bin_end", "problems", "solutions"])
        for i, (p, s) in enumerate(zip(self.problems, self.solutions)):
            w.writerow([self.edges[i], self.edges[i + 1], p, s])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "edges": self.edges,
            "problems": self.problems,
            "solutions": self.solutions,
            "tokenizer_id": self.tokenizer_id,
        }


def token_length_histogram(
    samples: Sequence[InstructionSample],
    tokenizer: TokenCounter = whitespace_tokens,
    bin_width: int = 50,
    tokenizer_id: str = "whitespace",
) -> Histogram:
    """Bins are ``[k*w, (k+1)*w)``; enough bins to cover the longest text."""
    if bin_width < 1:
        raise ValueError("bin_width must be >= 1")
    p = np.array([tokenizer(s.problem) for s in samples], dtype=np.int64)
    q = np.array([tokenizer(s.solution) for s in samples], dtype=np.int64)
    top = int(max(p.max(initial=0), q.max(initial=0)))
    nbins = top // bin_width + 1
    edges = [k * bin_width for k in range(nbins + 1)]
    return Histogram(
        edges,
        np.bincount(p // bin_width, minlength=nbins).tolist(),
        np.bincount(q // bin_width, minlength=nbins).tolist(),
        tokenizer_id,
    )
