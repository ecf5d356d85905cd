"""Record types shared across pipeline stages."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any

MAX_SEED_LINES = 15

# opening fence: ``` optionally followed by a language tag
_FENCE_RE = re.compile(r"^[ \t]*```[ \t]*([^\s`]*)", re.MULTILINE)


@dataclass(frozen=True)
class CodeDocument:
    doc_id: str
    language: str
    content: str
    origin: str = ""

    def lines(self) -> list[str]:
        return self.content.split("\n")


@dataclass(frozen=True)
class SeedSnippet:
    doc_id: str
    language: str
    start_line: int
    line_count: int
    text: str

    def __post_init__(self) -> None:
        if self.start_line < 1:
            raise ValueError(f"start_line must be >= 1, got {self.start_line}")
        if not 1 <= self.line_count <= MAX_SEED_LINES:
            raise ValueError(f"line_count must be in [1, {MAX_SEED_LINES}], got {self.line_count}")

    @property
    def end_line(self) -> int:
        return self.start_line + self.line_count - 1

    def to_dict(self) -> dict[str, Any]:
        return {
            "doc_id": self.doc_id,
            "language": self.language,
            "start_line": self.start_line,
            "line_count": self.line_count,
            "text": self.text,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> SeedSnippet:
        return cls(
            doc_id=d["doc_id"],
            language=d["language"],
            start_line=int(d["start_line"]),
            line_count=int(d["line_count"]),
            text=d["text"],
        )


@dataclass
class InstructionSample:
    """One (problem, solution) training record.

    ``seed`` is None for samples that did not come from a seed snippet
    (mined comment-function pairs carry their provenance in ``meta``).
    """

    sample_id: str
    problem: str
    solution: str
    seed: SeedSnippet | None = None
    raw_response: str = ""
    fenced_languages: list[str] = field(default_factory=list)
    flags: set[str] = field(default_factory=set)
    origin: str = "oss_instruct"
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.problem or not self.solution:
            raise ValueError(f"sample {self.sample_id}: problem and solution must be non-empty")
        if not self.fenced_languages:
            self.fenced_languages = fenced_languages(self.problem + "\n" + self.solution)

    def to_dict(self) -> dict[str, Any]:
        return {
            "sample_id": self.sample_id,
            "problem": self.problem,
            "solution": self.solution,
            "seed": self.seed.to_dict() if self.seed is not None else None,
            "raw_response": self.raw_response,
            "fenced_languages": list(self.fenced_languages),
            "flags": sorted(self.flags),
            "origin": self.origin,
            "meta": dict(self.meta),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> InstructionSample:
        seed = d.get("seed")
        return cls(
            sample_id=d["sample_id"],
            problem=d["problem"],
            solution=d["solution"],
            seed=SeedSnippet.from_dict(seed) if seed else None,
            raw_response=d.get("raw_response", ""),
            fenced_languages=list(d.get("fenced_languages", [])),
            flags=set(d.get("flags", [])),
            origin=d.get("origin", "oss_instruct"),
            meta=dict(d.get("meta", {})),
        )


def fenced_languages(text: str) -> list[str]:
    """Language tags of opening code fences, lowercased, in first-seen order.

    Fences alternate open/close, so only every other fence line is an opener.
    """
    seen: list[str] = []
    opening = True
    for m in _FENCE_RE.finditer(text):
        if opening:
            tag = m.group(1).lower()
            if tag and tag not in seen:
                seen.append(tag)
        opening = not opening
    return seen


def count_fences(text: str) -> int:
    return sum(1 for _ in _FENCE_RE.finditer(text))
