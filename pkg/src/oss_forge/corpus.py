"""Corpus ingestion, stratified document sampling and seed extraction.

Randomness comes from numpy's PCG64 bit generator. Every consumer derives its
own stream from ``(rng_seed, purpose, ...)`` through :func:`derive_rng`, so a
stage's draws do not depend on how many numbers another stage consumed.
"""

from __future__ import annotations

import hashlib
import logging
import os
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .jsonl import iter_jsonl
from .records import MAX_SEED_LINES, CodeDocument, SeedSnippet

logger = logging.getLogger(__name__)

# Languages and per-language document counts used for the 80K seed set.
RELEASED_QUOTA = {
    "python": 40_000,
    "c++": 5_000,
    "java": 5_000,
    "typescript": 5_000,
    "shell": 5_000,
    "c#": 5_000,
    "rust": 5_000,
    "php": 5_000,
    "swift": 5_000,
}

LINE_COMMENT_PREFIXES: dict[str, tuple[str, ...]] = {
    "python": ("#",),
    "shell": ("#",),
    "bash": ("#",),
    "ruby": ("#",),
    "perl": ("#",),
    "r": ("#",),
    "yaml": ("#",),
    "php": ("//", "#"),
    "c": ("//",),
    "c++": ("//",),
    "c#": ("//",),
    "java": ("//",),
    "javascript": ("//",),
    "typescript": ("//",),
    "go": ("//",),
    "rust": ("//",),
    "swift": ("//",),
    "kotlin": ("//",),
    "scala": ("//",),
    "dart": ("//",),
    "sql": ("--",),
    "lua": ("--",),
    "haskell": ("--",),
}


class CorpusError(Exception):
    pass


def canonical_language(tag: str) -> str:
    return tag.strip().lower()


def derive_rng(rng_seed: int, *keys: str | int) -> np.random.Generator:
    """A PCG64 generator keyed on ``rng_seed`` and a purpose path."""
    words = []
    for key in keys:
        digest = hashlib.sha256(str(key).encode("utf-8")).digest()
        words.append(int.from_bytes(digest[:4], "little"))
    ss = np.random.SeedSequence(entropy=int(rng_seed) & (2**64 - 1), spawn_key=tuple(words))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass
class LoadStats:
    yielded: int = 0
    skipped_empty: int = 0
    skipped_language: int = 0
    skipped_duplicate_id: int = 0
    malformed: int = 0

    def to_dict(self) -> dict[str, int]:
        return dict(vars(self))


def _corpus_files(source: str | os.PathLike) -> list[Path]:
    path = Path(source)
    if path.is_dir():
        files = sorted(p for p in path.rglob("*.jsonl") if p.is_file())
        if not files:
            raise CorpusError(f"no .jsonl files under {path}")
        return files
    if not path.is_file():
        raise CorpusError(f"corpus source not readable: {path}")
    return [path]


def load_corpus(
    source: str | os.PathLike,
    languages: Iterable[str],
    stats: LoadStats | None = None,
) -> Iterator[CodeDocument]:
    """Stream documents from a record file (or a directory of them).

    Records are JSON objects with ``id``, ``language``, ``content`` and an
    optional ``origin``. Directory sources are read in sorted path order.
    """
    wanted = {canonical_language(lang) for lang in languages}
    stats = stats if stats is not None else LoadStats()
    seen_ids: set[str] = set()
    for path in _corpus_files(source):
        bad_lines: list[int] = []
        try:
            records = iter_jsonl(path, strict=False, errors=bad_lines)
            for rec in records:
                if not isinstance(rec, dict):
                    stats.malformed += 1
                    continue
                doc_id, lang, content = rec.get("id"), rec.get("language"), rec.get("content")
                if not isinstance(doc_id, (str, int)) or not isinstance(lang, str) or not isinstance(content, str):
                    stats.malformed += 1
                    continue
                doc_id = str(doc_id)
                lang = canonical_language(lang)
                if lang not in wanted:
                    stats.skipped_language += 1
                    continue
                if not content.strip():
                    stats.skipped_empty += 1
                    continue
                if doc_id in seen_ids:
                    stats.skipped_duplicate_id += 1
                    continue
                seen_ids.add(doc_id)
                stats.yielded += 1
                yield CodeDocument(doc_id, lang, content, str(rec.get("origin", "")))
        except OSError as exc:
            raise CorpusError(f"cannot read {path}: {exc}") from exc
        finally:
            stats.malformed += len(bad_lines)
            bad_lines.clear()
    if stats.malformed:
        logger.warning("corpus: %d malformed records skipped", stats.malformed)


@dataclass(frozen=True)
class SamplingQuota:
    counts: Mapping[str, int]
    rng_seed: int

    def __post_init__(self) -> None:
        if any(c < 0 for c in self.counts.values()):
            raise ValueError("quota counts must be >= 0")
        if not any(c > 0 for c in self.counts.values()):
            raise ValueError("at least one quota count must be > 0")
        object.__setattr__(
            self, "counts", {canonical_language(k): int(v) for k, v in self.counts.items()}
        )


@dataclass
class SamplingReport:
    requested: dict[str, int] = field(default_factory=dict)
    available: dict[str, int] = field(default_factory=dict)
    selected: dict[str, int] = field(default_factory=dict)
    shortfall: dict[str, int] = field(default_factory=dict)

    @property
    def total_selected(self) -> int:
        return sum(self.selected.values())

    def to_dict(self) -> dict:
        langs = sorted(self.requested)
        return {
            "languages": {
                lang: {
                    "requested": self.requested[lang],
                    "available": self.available.get(lang, 0),
                    "selected": self.selected.get(lang, 0),
                    "shortfall": self.shortfall.get(lang, 0),
                }
                for lang in langs
            },
            "total_requested": sum(self.requested.values()),
            "total_selected": self.total_selected,
            "total_shortfall": sum(self.shortfall.values()),
        }


def sample_documents(
    corpus: Iterable[CodeDocument], quota: SamplingQuota
) -> tuple[list[CodeDocument], SamplingReport]:
    """Per-language reservoir sampling (Algorithm R) in one pass.

    Each language gets its own RNG stream, so the selection for one language
    is unaffected by how documents of other languages are interleaved. The
    returned documents are in corpus order.
    """
    reservoirs: dict[str, list[tuple[int, CodeDocument]]] = {lang: [] for lang in quota.counts}
    seen: dict[str, int] = {lang: 0 for lang in quota.counts}
    rngs = {lang: derive_rng(quota.rng_seed, "sample", lang) for lang in quota.counts}

    for pos, doc in enumerate(corpus):
        k = quota.counts.get(doc.language)
        if k is None:
            continue
        i = seen[doc.language]
        seen[doc.language] = i + 1
        if k == 0:
            continue
        res = reservoirs[doc.language]
        if i < k:
            res.append((pos, doc))
        else:
            j = int(rngs[doc.language].integers(0, i + 1))
            if j < k:
                res[j] = (pos, doc)

    report = SamplingReport()
    chosen: list[tuple[int, CodeDocument]] = []
    for lang, k in quota.counts.items():
        report.requested[lang] = k
        report.available[lang] = seen[lang]
        report.selected[lang] = len(reservoirs[lang])
        short = k - len(reservoirs[lang])
        if short > 0:
            report.shortfall[lang] = short
            logger.warning("sampling: %s short by %d (available %d)", lang, short, seen[lang])
        chosen.extend(reservoirs[lang])
    chosen.sort(key=lambda t: t[0])
    return [doc for _, doc in chosen], report


def document_lines(content: str) -> list[str]:
    """Split on ``\\n`` only. A single trailing newline terminates the last
    line rather than opening an empty one; ``\\r`` stays in the line text."""
    lines = content.split("\n")
    if len(lines) > 1 and lines[-1] == "":
        lines.pop()
    return lines


def extract_seed(doc: CodeDocument, rng: np.random.Generator, max_lines: int = MAX_SEED_LINES) -> SeedSnippet:
    lines = document_lines(doc.content)
    total = len(lines)
    if total < 1:
        raise ValueError(f"document {doc.doc_id} has no lines")
    line_count = int(rng.integers(1, min(max_lines, total) + 1))
    start = int(rng.integers(1, total - line_count + 2))
    text = "\n".join(lines[start - 1 : start - 1 + line_count])
    return SeedSnippet(doc.doc_id, doc.language, start, line_count, text)


def extract_seeds(docs: Iterable[CodeDocument], rng_seed: int, seeds_per_doc: int = 1) -> list[SeedSnippet]:
    """One seed per document by default; the stream is keyed on doc_id so a
    document's seed does not depend on its position in the selection."""
    out = []
    for doc in docs:
        rng = derive_rng(rng_seed, "extract", doc.doc_id)
        for _ in range(seeds_per_doc):
            out.append(extract_seed(doc, rng))
    return out


def reslice(doc: CodeDocument, start_line: int, line_count: int) -> str:
    lines = document_lines(doc.content)
    return "\n".join(lines[start_line - 1 : start_line - 1 + line_count])


def is_trivial_seed(
    snippet: SeedSnippet, comment_prefixes: Mapping[str, tuple[str, ...]] = LINE_COMMENT_PREFIXES
) -> bool:
    """True when every line is blank or a line comment.

    Block comments are not recognised; a seed made only of one counts as
    non-trivial.
    """
    prefixes = comment_prefixes.get(canonical_language(snippet.language))
    if prefixes is None:
        logger.warning("no comment syntax for language %r; treating seed as non-trivial", snippet.language)
        return False
    for line in snippet.text.split("\n"):
        stripped = line.strip()
        if stripped and not stripped.startswith(prefixes):
            return False
    return True
