"""Builders for small deterministic corpora and samples."""

from __future__ import annotations

from oss_forge.fixtures import (  # noqa: F401
    LANGS,
    PY_MODULE,
    fixture_documents,
    generic_document,
    python_document,
    write_corpus,
)
from oss_forge.records import InstructionSample, SeedSnippet


def seed(text: str, doc_id: str = "d", language: str = "python", start: int = 1) -> SeedSnippet:
    return SeedSnippet(doc_id, language, start, max(1, min(15, text.count("\n") + 1)), text)


def sample(sid: str, problem: str, solution: str, seed_text: str | None = "x = 1", language: str = "python") -> InstructionSample:
    return InstructionSample(
        sample_id=sid,
        problem=problem,
        solution=solution,
        seed=seed(seed_text, doc_id=f"doc-{sid}", language=language) if seed_text is not None else None,
    )
