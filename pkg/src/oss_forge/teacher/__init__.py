from .backends import (
    GREEDY,
    AuthError,
    Backend,
    BackendError,
    ChatCompletionBackend,
    Completion,
    Decoding,
    MockBackend,
    RateLimitError,
    TransientError,
    prompt_hash,
    synthesize_response,
)
from .generate import (
    DEFAULT_MAX_NEW_TOKENS,
    GenerationRequest,
    GenerationResult,
    RetryPolicy,
    TeacherResponse,
    generate,
    generate_all,
    run_generation,
)
from .prompt import (
    DEFAULT_TEMPLATE,
    PROBLEM_MARKER,
    SOLUTION_MARKER,
    ParsedResponse,
    PromptTemplate,
    Rejection,
    TemplateError,
    build_prompt,
    make_sample,
    parse_response,
    quality_flags,
)

__all__ = [
    "AuthError",
    "Backend",
    "BackendError",
    "build_prompt",
    "ChatCompletionBackend",
    "Completion",
    "Decoding",
    "DEFAULT_MAX_NEW_TOKENS",
    "DEFAULT_TEMPLATE",
    "generate",
    "generate_all",
    "GenerationRequest",
    "GenerationResult",
    "GREEDY",
    "make_sample",
    "MockBackend",
    "parse_response",
    "ParsedResponse",
    "PROBLEM_MARKER",
    "prompt_hash",
    "PromptTemplate",
    "quality_flags",
    "RateLimitError",
    "Rejection",
    "RetryPolicy",
    "run_generation",
    "SOLUTION_MARKER",
    "synthesize_response",
    "TeacherResponse",
    "TemplateError",
    "TransientError",
]
