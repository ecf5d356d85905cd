"""
Mining comment-function pairs
=============================

The baseline data for direct finetuning: documented functions split into
signature plus docstring (the prompt) and body (the target).
"""

from oss_forge.corpus import document_lines
from oss_forge.fixtures import PY_MODULE
from oss_forge.pairminer import MiningOptions, mine_pairs, pairs_to_samples, prioritize_pairs, problem_code
from oss_forge.records import CodeDocument, SeedSnippet

doc = CodeDocument("geometry.py", "python", PY_MODULE, "demo")
print(PY_MODULE)

# %%
# Undocumented functions are skipped; nested and multi-line signatures work.
pairs = mine_pairs([doc])
lines = document_lines(PY_MODULE)
for p in pairs:
    print(p.span, p.signature.strip().splitlines()[0])
    assert "\n".join(lines[p.span[0] - 1 : p.span[1]]) == p.region_text()

# %%
# Pairs whose span overlaps a seed snippet are kept first.
seed = SeedSnippet("geometry.py", "python", 30, 2, "\n".join(lines[29:31]))
chosen, shortfall = prioritize_pairs(pairs, [seed], target=2)
print([(p.span, p.overlaps_seed) for p in chosen], "shortfall:", shortfall)

# %%
sample = pairs_to_samples(chosen)[0]
print(problem_code(sample))
print("---")
print(sample.solution)

# %%
# Leading ``#`` comment blocks can stand in for docstrings.
src = "# Add two numbers and return\n# the result.\ndef add(a, b):\n    s = a + b\n    return s\n"
print(mine_pairs([CodeDocument("add.py", "python", src, "demo")], options=MiningOptions(leading_comments=True)))
