"""
Cleaning and decontamination
============================

Drop duplicate and trivially-seeded samples, then remove anything that
contains benchmark text verbatim (after whitespace normalization).
"""

from oss_forge.clean import clean
from oss_forge.decontam import build_corpus, decontaminate, descriptor_records, matched_text
from oss_forge.records import InstructionSample, SeedSnippet


def sample(sid, problem, solution, seed_text):
    seed = SeedSnippet(f"doc-{sid}", "python", 1, seed_text.count("\n") + 1, seed_text)
    return InstructionSample(sid, problem, solution, seed=seed)


samples = [
    sample("a", "Reverse the words of a sentence.", "```python\n' '.join(s.split()[::-1])\n```", "words = s.split()"),
    sample("b", "Reverse the words of a sentence.", "```python\n' '.join(s.split()[::-1])\n```", "x = 1"),
    sample("c", "Parse an INI file into a dict.", "```python\nconfigparser\n```", "words = s.split()"),
    sample("d", "Explain this comment.", "It is a comment.", "# TODO: refactor\n"),
    sample("e", "Implement:\n    Return the sum of squares of all\n    odd numbers in the given list.",
           "```python\nsum(x*x for x in xs if x % 2)\n```", "acc = 0"),
    sample("f", "Merge two sorted lists.", "```python\nheapq.merge(a, b)\n```", "import heapq"),
]

# %%
kept, report = clean(samples)
print([s.sample_id for s in kept])
print(report.to_dict())

# %%
# Benchmark descriptors come from raw benchmark rows.
rows = [{"task_id": "HumanEval/0",
         "prompt": 'def f(xs):\n    """Return the sum of squares of all odd numbers in the given list."""\n',
         "canonical_solution": "    return sum(x * x for x in xs if x % 2)\n"}]
humaneval = build_corpus("humaneval", descriptor_records("humaneval", rows))

result = decontaminate(kept, [humaneval])
print("kept:", [s.sample_id for s in result.kept])
for m in result.matches:
    src = next(s for s in kept if s.sample_id == m.sample_id)
    print(f"{m.sample_id} leaks {m.entry_id} in {m.field}: {matched_text(src, m)!r}")
print(result.report())
