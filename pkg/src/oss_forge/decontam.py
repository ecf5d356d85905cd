"""Exact-substring benchmark decontamination.

Both sides are whitespace-normalized (runs collapsed to one space, ends
stripped) before matching; matching is case-sensitive. Matches are located
back in the original sample text and recorded as UTF-8 byte offsets.
"""

from __future__ import annotations

import ast
import logging
import os
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from .automaton import Automaton
from .jsonl import iter_jsonl
from .records import InstructionSample

logger = logging.getLogger(__name__)

DEFAULT_MIN_MATCH_LEN = 20

BENCHMARK_KINDS: dict[str, frozenset[str]] = {
    "humaneval": frozenset({"docstring", "solution"}),
    "mbpp": frozenset({"docstring", "solution"}),
    "apps": frozenset({"docstring"}),
    "ds1000": frozenset({"prompt"}),
    "gsm8k": frozenset({"question"}),
}
ALL_KINDS = frozenset({"docstring", "solution", "prompt", "question"})
FIELDS = ("problem", "solution")


def normalize(text: str) -> str:
    return " ".join(text.split())


def normalize_with_offsets(text: str) -> tuple[str, list[int]]:
    """Normalized text plus, for each of its characters, the index of the
    source character it came from (a collapsed run maps to its first char)."""
    chars: list[str] = []
    offsets: list[int] = []
    pending_space = -1
    for i, ch in enumerate(text):
        if ch.isspace():
            if pending_space < 0:
                pending_space = i
            continue
        if pending_space >= 0 and chars:
            chars.append(" ")
            offsets.append(pending_space)
        pending_space = -1
        chars.append(ch)
        offsets.append(i)
    return "".join(chars), offsets


class BenchmarkError(Exception):
    pass


@dataclass(frozen=True)
class BenchmarkEntry:
    entry_id: str
    kind: str
    text: str
    normalized: str


@dataclass
class BenchmarkCorpus:
    name: str
    entries: list[BenchmarkEntry] = field(default_factory=list)
    dropped_short: int = 0
    dropped_duplicate: int = 0
    dropped_kind: int = 0
    min_match_len: int = DEFAULT_MIN_MATCH_LEN

    def stats(self) -> dict:
        return {
            "entries": len(self.entries),
            "dropped_short": self.dropped_short,
            "dropped_duplicate": self.dropped_duplicate,
            "dropped_kind": self.dropped_kind,
            "min_match_len": self.min_match_len,
        }


def build_corpus(
    name: str,
    records: Iterable[Mapping],
    min_match_len: int = DEFAULT_MIN_MATCH_LEN,
    allowed_kinds: Mapping[str, frozenset[str]] = BENCHMARK_KINDS,
) -> BenchmarkCorpus:
    corpus = BenchmarkCorpus(name=name, min_match_len=min_match_len)
    kinds = allowed_kinds.get(name, ALL_KINDS)
    seen: set[str] = set()
    for i, rec in enumerate(records):
        kind, text = rec.get("kind"), rec.get("text")
        if not isinstance(kind, str) or not isinstance(text, str):
            raise BenchmarkError(f"{name}: entry {i} lacks kind/text")
        if kind not in kinds:
            corpus.dropped_kind += 1
            continue
        norm = normalize(text)
        if len(norm) < min_match_len:
            corpus.dropped_short += 1
            continue
        if norm in seen:
            corpus.dropped_duplicate += 1
            continue
        seen.add(norm)
        corpus.entries.append(BenchmarkEntry(str(rec.get("entry_id", f"{name}/{i}")), kind, text, norm))
    if not corpus.entries:
        logger.warning("benchmark %s has no usable entries", name)
    return corpus


def load_benchmarks(
    path: str | os.PathLike,
    min_match_len: int = DEFAULT_MIN_MATCH_LEN,
    allowed_kinds: Mapping[str, frozenset[str]] = BENCHMARK_KINDS,
) -> list[BenchmarkCorpus]:
    """Load a descriptor file of ``{benchmark, kind, entry_id, text}`` records,
    one corpus per benchmark name in first-seen order."""
    try:
        records = list(iter_jsonl(path))
    except OSError as exc:
        raise BenchmarkError(f"cannot read benchmark descriptor {path}: {exc}") from exc
    grouped: dict[str, list[Mapping]] = {}
    for rec in records:
        grouped.setdefault(str(rec.get("benchmark", "")).lower(), []).append(rec)
    if not grouped:
        logger.warning("benchmark descriptor %s is empty", path)
    return [build_corpus(name, recs, min_match_len, allowed_kinds) for name, recs in grouped.items()]


def load_benchmark(path: str | os.PathLike, min_match_len: int = DEFAULT_MIN_MATCH_LEN) -> BenchmarkCorpus:
    corpora = load_benchmarks(path, min_match_len)
    if len(corpora) != 1:
        raise BenchmarkError(f"{path}: expected one benchmark, found {len(corpora)}")
    return corpora[0]


@dataclass(frozen=True)
class ContaminationMatch:
    sample_id: str
    benchmark: str
    entry_id: str
    kind: str
    field: str
    matched_span: tuple[int, int]  # UTF-8 byte offsets into the sample field

    def to_dict(self) -> dict:
        return {
            "sample_id": self.sample_id,
            "benchmark": self.benchmark,
            "entry_id": self.entry_id,
            "kind": self.kind,
            "field": self.field,
            "matched_span": list(self.matched_span),
        }


class ContaminationIndex:
    """Automaton over every normalized entry of every corpus."""

    def __init__(self, corpora: Sequence[BenchmarkCorpus]):
        self.corpora = list(corpora)
        self._owners: dict[str, list[tuple[str, BenchmarkEntry]]] = {}
        for corpus in self.corpora:
            for entry in corpus.entries:
                self._owners.setdefault(entry.normalized, []).append((corpus.name, entry))
        self.automaton = Automaton(self._owners)

    def find(self, sample: InstructionSample) -> list[ContaminationMatch]:
        matches = []
        for field_name in FIELDS:
            text = getattr(sample, field_name)
            norm, offsets = normalize_with_offsets(text)
            for start, pat in self.automaton.finditer(norm):
                c0 = offsets[start]
                c1 = offsets[start + len(pat) - 1] + 1
                span = (len(text[:c0].encode("utf-8")), len(text[:c1].encode("utf-8")))
                for bench, entry in self._owners[pat]:
                    matches.append(
                        ContaminationMatch(sample.sample_id, bench, entry.entry_id, entry.kind, field_name, span)
                    )
        matches.sort(key=lambda m: (FIELDS.index(m.field), m.matched_span, m.benchmark, m.entry_id))
        return matches


def find_contamination(
    sample: InstructionSample, corpora: Sequence[BenchmarkCorpus] | ContaminationIndex
) -> list[ContaminationMatch]:
    index = corpora if isinstance(corpora, ContaminationIndex) else ContaminationIndex(corpora)
    return index.find(sample)


def matched_text(sample: InstructionSample, match: ContaminationMatch) -> str:
    raw = getattr(sample, match.field).encode("utf-8")
    return raw[match.matched_span[0] : match.matched_span[1]].decode("utf-8")


@dataclass
class DecontamResult:
    kept: list[InstructionSample]
    removed: list[InstructionSample]
    matches: list[ContaminationMatch]
    corpora: list[BenchmarkCorpus]

    def report(self) -> dict:
        per_bench: dict[str, set[str]] = {c.name: set() for c in self.corpora}
        per_field: Counter[str] = Counter()
        for m in self.matches:
            per_bench.setdefault(m.benchmark, set()).add(m.sample_id)
            per_field[m.field] += 1
        return {
            "input": len(self.kept) + len(self.removed),
            "kept": len(self.kept),
            "removed": len(self.removed),
            "matches": len(self.matches),
            "removed_by_benchmark": {k: len(v) for k, v in sorted(per_bench.items())},
            "matches_by_field": {f: per_field.get(f, 0) for f in FIELDS},
            "benchmarks": {c.name: c.stats() for c in self.corpora},
        }


def decontaminate(
    samples: Iterable[InstructionSample], corpora: Sequence[BenchmarkCorpus] | ContaminationIndex
) -> DecontamResult:
    index = corpora if isinstance(corpora, ContaminationIndex) else ContaminationIndex(corpora)
    kept, removed, all_matches = [], [], []
    for s in samples:
        found = index.find(s)
        if found:
            removed.append(s)
            all_matches.extend(found)
        else:
            kept.append(s)
    return DecontamResult(kept, removed, all_matches, index.corpora)


def _docstring_of(prompt: str) -> str | None:
    try:
        tree = ast.parse(prompt)
    except SyntaxError:
        return None
    for node in ast.walk(tree):
        if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef)):
            doc = ast.get_docstring(node, clean=False)
            if doc:
                return doc
    return None


def descriptor_records(benchmark: str, rows: Iterable[Mapping]) -> list[dict]:
    """Turn rows of the usual public releases into descriptor records.

    Supported shapes: HumanEval (``task_id``, ``prompt``, ``canonical_solution``),
    MBPP (``task_id``, ``text``, ``code``), APPS (``question``), DS-1000
    (``prompt``) and GSM8K (``question``).
    """
    name = benchmark.lower()
    out: list[dict] = []

    def add(kind: str, text: str | None, entry_id: str) -> None:
        if text:
            out.append({"benchmark": name, "kind": kind, "entry_id": entry_id, "text": text})

    for i, row in enumerate(rows):
        rid = str(row.get("task_id", row.get("problem_id", i)))
        if name == "humaneval":
            add("docstring", _docstring_of(row["prompt"]), f"{rid}#docstring")
            add("solution", row.get("canonical_solution"), f"{rid}#solution")
        elif name == "mbpp":
            add("docstring", row.get("text"), f"{rid}#docstring")
            add("solution", row.get("code"), f"{rid}#solution")
        elif name == "apps":
            add("docstring", row.get("question"), f"{rid}#docstring")
        elif name == "ds1000":
            add("prompt", row.get("prompt"), f"{rid}#prompt")
        elif name == "gsm8k":
            add("question", row.get("question"), f"{rid}#question")
        else:
            raise BenchmarkError(f"no row converter for benchmark {benchmark!r}")
    return out
