"""Prompt template rendering and response parsing."""

from __future__ import annotations

from dataclasses import dataclass

from ..records import InstructionSample, SeedSnippet, count_fences

SEED_PLACEHOLDER = "{seed}"
PROBLEM_MARKER = "[Problem Description]"
SOLUTION_MARKER = "[Solution]"

DEFAULT_TEMPLATE = """\
You are exceptionally skilled at crafting high-quality programming problems and offering precise solutions.

Please gain inspiration from the following random code snippet to create a high-quality programming problem. Present your output in two distinct sections: [Problem Description] and [Solution].

Code snippet for inspiration:
```
{seed}
```

Guidelines for each section:

1. [Problem Description]: This should be **completely self-contained**, providing all the contextual information one needs to understand and solve the problem. Assume common programming knowledge, but ensure that any specific context, variables, or code snippets pertinent to this problem are explicitly included.

2. [Solution]: Offer a comprehensive, **correct** solution that accurately addresses the [Problem Description] you provided.
"""

SHORT_SOLUTION_CHARS = 40


class TemplateError(ValueError):
    pass


@dataclass(frozen=True)
class PromptTemplate:
    text: str = DEFAULT_TEMPLATE
    problem_marker: str = PROBLEM_MARKER
    solution_marker: str = SOLUTION_MARKER
    placeholder: str = SEED_PLACEHOLDER

    def __post_init__(self) -> None:
        missing = [
            name
            for name, token in (
                ("placeholder", self.placeholder),
                ("problem_marker", self.problem_marker),
                ("solution_marker", self.solution_marker),
            )
            if not token or token not in self.text
        ]
        if missing:
            raise TemplateError(f"prompt template is missing: {', '.join(missing)}")

    @property
    def markers(self) -> tuple[str, str]:
        return self.problem_marker, self.solution_marker


def build_prompt(seed: SeedSnippet, template: PromptTemplate) -> str:
    # str.replace scans the template only, so placeholder text inside the
    # seed is never substituted again.
    return template.text.replace(template.placeholder, seed.text)


@dataclass(frozen=True)
class Rejection:
    reason: str


@dataclass(frozen=True)
class ParsedResponse:
    problem: str
    solution: str
    problem_span: tuple[int, int]
    solution_span: tuple[int, int]


def _trimmed_span(raw: str, start: int, end: int) -> tuple[int, int]:
    while start < end and raw[start].isspace():
        start += 1
    while end > start and raw[end - 1].isspace():
        end -= 1
    return start, end


def parse_response(raw: str, markers: tuple[str, str] = (PROBLEM_MARKER, SOLUTION_MARKER)) -> ParsedResponse | Rejection:
    """Split a teacher response into problem and solution sections.

    The problem runs from the first problem marker to the first solution
    marker after it; the solution is everything after that. Incomplete code
    and other noise is kept.
    """
    problem_marker, solution_marker = markers
    p = raw.find(problem_marker)
    if p < 0:
        return Rejection("no_problem_section")
    p_start = p + len(problem_marker)
    s = raw.find(solution_marker, p_start)
    if s < 0:
        return Rejection("no_solution_section")
    problem_span = _trimmed_span(raw, p_start, s)
    solution_span = _trimmed_span(raw, s + len(solution_marker), len(raw))
    if problem_span[0] == problem_span[1]:
        return Rejection("empty_problem")
    if solution_span[0] == solution_span[1]:
        return Rejection("empty_solution")
    return ParsedResponse(
        raw[problem_span[0] : problem_span[1]],
        raw[solution_span[0] : solution_span[1]],
        problem_span,
        solution_span,
    )


def quality_flags(solution: str, truncated: bool = False, short_chars: int = SHORT_SOLUTION_CHARS) -> set[str]:
    flags = set()
    if truncated:
        flags.add("truncated")
    fences = count_fences(solution)
    if fences < 2:
        flags.add("no_fence")
    if len(solution.strip()) < short_chars:
        flags.add("short_solution")
    return flags


def make_sample(
    sample_id: str,
    seed: SeedSnippet,
    raw: str,
    parsed: ParsedResponse,
    truncated: bool = False,
) -> InstructionSample:
    return InstructionSample(
        sample_id=sample_id,
        problem=parsed.problem,
        solution=parsed.solution,
        seed=seed,
        raw_response=raw,
        flags=quality_flags(parsed.solution, truncated),
    )
