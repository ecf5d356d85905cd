"""Exact-duplicate, shared-seed and trivial-seed removal."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from .corpus import LINE_COMMENT_PREFIXES, is_trivial_seed
from .records import InstructionSample


@dataclass
class CleanReport:
    input_count: int = 0
    removed_exact_dup: int = 0
    removed_seed_dup: int = 0
    removed_trivial_seed: int = 0
    output_count: int = 0

    @property
    def removed(self) -> int:
        return self.removed_exact_dup + self.removed_seed_dup + self.removed_trivial_seed

    def reconciles(self) -> bool:
        return self.output_count == self.input_count - self.removed

    def to_dict(self) -> dict[str, int]:
        return dict(vars(self))


def clean(
    samples: Iterable[InstructionSample],
    comment_prefixes: Mapping[str, tuple[str, ...]] = LINE_COMMENT_PREFIXES,
) -> tuple[list[InstructionSample], CleanReport]:
    """First occurrence wins. Each removed sample is charged to the first
    rule that fires, in the order exact duplicate, shared seed, trivial seed.

    A sample is only registered as "seen" for a rule once it has passed all
    earlier rules, so removal under one rule never blocks a later sample.
    """
    report = CleanReport()
    seen_pairs: set[tuple[str, str]] = set()
    seen_seeds: set[str] = set()
    kept = []
    for s in samples:
        report.input_count += 1
        key = (s.problem, s.solution)
        if key in seen_pairs:
            report.removed_exact_dup += 1
            continue
        seen_pairs.add(key)
        if s.seed is not None:
            if s.seed.text in seen_seeds:
                report.removed_seed_dup += 1
                continue
            seen_seeds.add(s.seed.text)
            if is_trivial_seed(s.seed, comment_prefixes):
                report.removed_trivial_seed += 1
                continue
        kept.append(s)
    report.output_count = len(kept)
    return kept, report
