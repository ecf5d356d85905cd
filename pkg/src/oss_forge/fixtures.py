"""Small synthetic corpora and a ready-to-run pipeline fixture.

Everything here is deterministic given its arguments. The pipeline fixture
plants known exact duplicates and benchmark leaks in the teacher responses,
so every filtering stage has something to remove.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

import yaml

from .corpus import SamplingQuota, extract_seeds, load_corpus, sample_documents
from .jsonl import write_jsonl
from .records import CodeDocument
from .teacher import PromptTemplate, build_prompt, prompt_hash

LANGS = ["python", "c++", "java", "typescript", "shell", "c#", "rust", "php", "swift"]

_LINE_BANK = {
    "python": ["import os", "x = compute(y)", "# helper", "for item in items:", "    total += item", "return total", ""],
    "shell": ["#!/bin/sh", "echo $HOME", "# set up", "ls -la | grep foo", ""],
    "default": ["int x = 0;", "// note", "call(x);", "if (x > 1) {", "}", ""],
}

PY_MODULE = '''import math


def area(radius):
    """Return the area of a circle with the given radius."""
    r2 = radius * radius
    return math.pi * r2


def helper(x):
    return x + 1


def scale(values, factor=2):
    """Multiply every value by a constant factor.

    Values may be any numeric type.
    """
    out = []
    for v in values:
        out.append(v * factor)
    return out


class Box:
    def size(self):
        return 3

    def volume(self, w,
               h, d):
        \'\'\'Compute the box volume from three edge lengths.\'\'\'
        product = w * h
        return product * d
'''

# invented benchmark-style tasks used as the decontamination reference
BENCHMARK_TASKS = [
    ("Return the sum of squares of all odd numbers in the given list.",
     "    return sum(x * x for x in xs if x % 2)"),
    ("Given a string, return the longest substring that reads the same backwards.",
     "    return max((s[i:j] for i in range(len(s)) for j in range(i, len(s) + 1) if s[i:j] == s[i:j][::-1]), key=len)"),
    ("Check whether the brackets in the input string are balanced and properly nested.",
     "    depth = 0\n    for c in s:\n        depth += 1 if c == '(' else -1\n        if depth < 0:\n            return False\n    return depth == 0"),
    ("Count the vowels in a word, treating a trailing y as a vowel.",
     "    n = sum(c in 'aeiou' for c in w.lower())\n    return n + w.lower().endswith('y')"),
]


def python_document(i: int) -> str:
    return PY_MODULE.replace("area", f"area{i}").replace("scale", f"scale{i}")


def generic_document(lang: str, i: int, rng: random.Random) -> str:
    bank = _LINE_BANK.get(lang, _LINE_BANK["default"])
    n = rng.randint(1, 40)
    return "\n".join(f"{rng.choice(bank)}" if k % 3 else f"{bank[0]} {i}.{k}" for k in range(n)) + "\n"


def fixture_documents(per_lang: dict[str, int], seed: int = 0) -> list[CodeDocument]:
    """Documents interleaved across languages, deterministic given arguments.

    Even-numbered Python documents are copies of :data:`PY_MODULE` with
    renamed functions, so pair mining has material.
    """
    rng = random.Random(seed)
    docs = []
    counters = {lang: 0 for lang in per_lang}
    remaining = dict(per_lang)
    while any(remaining.values()):
        for lang in per_lang:
            if remaining[lang] == 0:
                continue
            i = counters[lang]
            counters[lang] += 1
            remaining[lang] -= 1
            if lang == "python" and i % 2 == 0:
                content = python_document(i)
            else:
                content = generic_document(lang, i, rng)
            docs.append(CodeDocument(f"{lang}-{i:04d}", lang, content, f"fixture://{lang}/{i}"))
    return docs


def write_corpus(path: Path, docs: list[CodeDocument], extra: list = ()) -> Path:
    with open(path, "w", encoding="utf-8") as f:
        for d in docs:
            f.write(json.dumps({"id": d.doc_id, "language": d.language, "content": d.content, "origin": d.origin}))
            f.write("\n")
        for line in extra:
            f.write(line if isinstance(line, str) else json.dumps(line))
            f.write("\n")
    return path


def benchmark_records() -> list[dict]:
    rows = []
    for i, (doc, sol) in enumerate(BENCHMARK_TASKS):
        rows.append({"benchmark": "humaneval", "kind": "docstring", "entry_id": f"HE/{i}#docstring", "text": doc})
        rows.append({"benchmark": "humaneval", "kind": "solution", "entry_id": f"HE/{i}#solution", "text": sol})
    return rows


def _response(problem: str, body: str) -> str:
    return f"[Problem Description]\n{problem}\n\n[Solution]\n```python\ndef solve(xs):\n{body}\n```\n"


def build_pipeline_fixture(
    root: str | Path,
    *,
    rng_seed: int = 7,
    quota: dict[str, int] | None = None,
    docs_per_lang: dict[str, int] | None = None,
    contaminated: int = 3,
    duplicate_pairs: int = 2,
) -> Path:
    """Write corpus, benchmark descriptors, teacher fixtures and a config
    under ``root``; return the config path.

    The default quota (44 Python plus 7 for each of eight other languages)
    yields 100 seeds. Seeds without a planted response get synthesized ones.
    """
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    quota = quota or {"python": 44, **{lang: 7 for lang in LANGS[1:]}}
    docs_per_lang = docs_per_lang or {lang: max(12, 2 * n) for lang, n in quota.items()}

    write_corpus(root / "corpus.jsonl", fixture_documents(docs_per_lang))
    write_jsonl(root / "benchmarks.jsonl", benchmark_records())

    # reproduce the seeds the pipeline will draw, to key planted responses
    docs = load_corpus(root / "corpus.jsonl", sorted(quota))
    selected, _ = sample_documents(docs, SamplingQuota(quota, rng_seed))
    seeds = extract_seeds(selected, rng_seed)
    template = PromptTemplate()
    prompts = [build_prompt(s, template) for s in seeds]

    planted: dict[str, str] = {}
    step = max(1, len(prompts) // max(1, contaminated + 2 * duplicate_pairs))
    slots = iter(range(0, len(prompts), step))
    for k in range(contaminated):
        doc, _ = BENCHMARK_TASKS[k % len(BENCHMARK_TASKS)]
        i = next(slots, None)
        if i is not None:
            planted.setdefault(prompt_hash(prompts[i]),
                               _response(f"Leaked task {k}.\n    {doc}", f"    return leaked_{k}(xs)"))
    for k in range(duplicate_pairs):
        i = next(slots, None)
        if i is None or i + 1 >= len(prompts):
            break
        text = _response(f"Deduplicate records by key, variant {k}.", f"    return list(dict.fromkeys(xs))[{k}:]")
        for j in (i, i + 1):
            planted.setdefault(prompt_hash(prompts[j]), text)
    write_jsonl(root / "teacher_fixtures.jsonl",
                ({"prompt_hash": h, "raw_text": t, "finish_reason": "complete"} for h, t in sorted(planted.items())))

    config = {
        "output_dir": "out",
        "corpus": {"source": "corpus.jsonl", "languages": sorted(quota)},
        "sampling": {"rng_seed": rng_seed, "quota": quota},
        "teacher": {"backend": "mock", "fixtures": "teacher_fixtures.jsonl", "fallback": "synthesize",
                    "concurrency": 8, "max_retries": 0},
        "decontamination": {"benchmarks": ["benchmarks.jsonl"]},
        "analysis": {"bin_width": 10, "similarity_reference": "benchmarks.jsonl"},
        "pairs": {"languages": ["python"]},
        "export": {"name": "oss-instruct-fixture"},
    }
    path = root / "config.yaml"
    path.write_text(yaml.safe_dump(config, sort_keys=False), encoding="utf-8")
    return path
