"""
Auditing a dataset against a benchmark
======================================

TF-IDF similarity of every sample to its closest benchmark problem, a
token-length histogram, and a coarse category breakdown.
"""

import numpy as np

from oss_forge.analyze import (
    categorize,
    compare_datasets,
    fit_tfidf,
    load_categories,
    nearest_benchmark,
    token_length_histogram,
)
from oss_forge.records import InstructionSample

benchmark = [
    ("HumanEval/0", "Check if in given list of numbers, are any two numbers closer to each other than threshold."),
    ("HumanEval/1", "Separate groups of nested parentheses into separate strings and return the list."),
    ("HumanEval/2", "Given a positive floating point number, return its decimal part."),
]
near = [("n0", "Given a list of numbers, check whether any two numbers are closer than a threshold."),
        ("n1", "Return the decimal part of a positive floating point number.")]
far = [("f0", "Build a REST endpoint that streams log lines over websockets."),
       ("f1", "Write a Dockerfile for a Rust web service with a multi-stage build.")]

# %%
model = fit_tfidf([t for _, t in benchmark])
print("vocabulary size:", len(model), "idf range:", float(model.idf.min()), float(model.idf.max()))

records, summary = nearest_benchmark(near + far, benchmark)
for r in records:
    print(f"{r.sample_id} -> {r.best_benchmark_entry_id} score={r.score:.3f}")

# %%
# Dataset-level comparison: lower mean means less benchmark-like.
print({name: round(s["mean"], 3) for name, s in compare_datasets({"near": near, "far": far}, benchmark).items()})

# %%
samples = [InstructionSample(sid, text, "```python\npass\n```") for sid, text in near + far]
hist = token_length_histogram(samples, bin_width=5)
print(hist.to_csv())

# %%
# Categories: bundled names and descriptions, TF-IDF embedder by default.
breakdown = categorize(samples, load_categories())
for cat, n in zip(breakdown.categories, breakdown.counts):
    if n:
        print(f"{n} x {cat.name}")
print("shares sum to", np.isclose(sum(breakdown.to_dict()["categories"][i]["share"] for i in range(10)), 1.0))
