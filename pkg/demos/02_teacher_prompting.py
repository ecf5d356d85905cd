"""
Prompting a teacher model
=========================

Build a prompt around a seed, send it to a backend, and parse the reply into
a problem and a solution. The mock backend stands in for a real endpoint.
"""

from oss_forge.records import SeedSnippet
from oss_forge.teacher import (
    MockBackend,
    PromptTemplate,
    RetryPolicy,
    build_prompt,
    parse_response,
    run_generation,
)

seed = SeedSnippet("demo-doc", "python", 10, 3, "def read_rows(path):\n    with open(path) as f:\n        return f.readlines()")
template = PromptTemplate()

# %%
# The seed is dropped into the template verbatim.
prompt = build_prompt(seed, template)
print(prompt[-400:])

# %%
# Parsing splits on the first problem marker and the first solution marker
# after it. Missing sections become typed rejections.
print(parse_response("[Problem Description]\nCount lines.\n[Solution]\n```python\nlen(rows)\n```"))
print(parse_response("[Problem Description]\nCount lines, but the answer got cut"))

# %%
# A batch through the mock backend in synthesize mode: deterministic replies,
# about one in twelve missing its solution section.
seeds = [SeedSnippet(f"doc-{i}", "python", 1, 1, f"total_{i} = sum(values[{i}:])") for i in range(24)]
backend = MockBackend(fallback="synthesize", delay=0.01)
result = run_generation(seeds, template, backend, concurrency=4, policy=RetryPolicy(max_retries=0))
print(result.report())
print("peak in-flight requests:", backend.high_water)
print(result.samples[0].problem)

# %%
# A real endpoint: OpenAI-style chat completions, token from TEACHER_API_TOKEN.
#
#   from oss_forge.teacher import ChatCompletionBackend
#   backend = ChatCompletionBackend("https://host/v1/chat/completions", "model-name")
