"""Bounded-concurrency generation with retries and order-stable output."""

from __future__ import annotations

import logging
import time
from collections import Counter
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from ..records import InstructionSample, SeedSnippet
from .backends import GREEDY, AuthError, Backend, BackendError, Decoding, TransientError
from .prompt import ParsedResponse, PromptTemplate, Rejection, build_prompt, make_sample, parse_response

logger = logging.getLogger(__name__)

DEFAULT_MAX_NEW_TOKENS = 2048


@dataclass(frozen=True)
class GenerationRequest:
    request_id: str
    seed: SeedSnippet
    prompt: str
    decoding: Decoding = GREEDY
    max_new_tokens: int = DEFAULT_MAX_NEW_TOKENS

    def __post_init__(self) -> None:
        if self.seed.text not in self.prompt:
            raise ValueError(f"{self.request_id}: prompt does not contain the seed text")
        if self.max_new_tokens <= 0:
            raise ValueError("max_new_tokens must be positive")


@dataclass(frozen=True)
class TeacherResponse:
    request_id: str
    raw_text: str | None
    finish_reason: str  # complete | truncated | error
    backend_id: str
    retry_count: int = 0
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "request_id": self.request_id,
            "raw_text": self.raw_text,
            "finish_reason": self.finish_reason,
            "backend_id": self.backend_id,
            "retry_count": self.retry_count,
            "error": self.error,
        }


@dataclass(frozen=True)
class RetryPolicy:
    max_retries: int = 5
    base_delay: float = 1.0
    max_delay: float = 60.0
    sleep: Callable[[float], None] = time.sleep

    def delay(self, attempt: int, hint: float | None = None) -> float:
        d = min(self.max_delay, self.base_delay * (2**attempt))
        if hint is not None:
            d = min(self.max_delay, max(d, hint))
        return d


def generate(request: GenerationRequest, backend: Backend, policy: RetryPolicy = RetryPolicy()) -> TeacherResponse:
    """One request with exponential backoff on transient failures.

    :class:`AuthError` propagates; everything else ends in a response,
    with ``finish_reason="error"`` when retries run out.
    """
    retries = 0
    while True:
        try:
            completion = backend.complete(request.prompt, request.decoding, request.max_new_tokens)
        except AuthError:
            raise
        except TransientError as exc:
            if retries >= policy.max_retries:
                logger.warning("%s: giving up after %d retries: %s", request.request_id, retries, exc)
                return TeacherResponse(request.request_id, None, "error", backend.backend_id, retries, str(exc))
            wait = policy.delay(retries, exc.retry_after)
            retries += 1
            logger.info("%s: %s, retry %d in %.1fs", request.request_id, exc, retries, wait)
            policy.sleep(wait)
            continue
        except BackendError as exc:
            return TeacherResponse(request.request_id, None, "error", backend.backend_id, retries, str(exc))
        if retries:
            logger.info("%s: succeeded, retry_count=%d", request.request_id, retries)
        return TeacherResponse(
            request.request_id, completion.text, completion.finish_reason, backend.backend_id, retries
        )


def generate_all(
    requests: Sequence[GenerationRequest],
    backend: Backend,
    concurrency: int = 8,
    policy: RetryPolicy = RetryPolicy(),
) -> list[TeacherResponse]:
    """Run requests with at most ``concurrency`` in flight; results come back
    in request order whatever the completion order."""
    if concurrency < 1:
        raise ValueError("concurrency must be >= 1")
    if concurrency == 1:
        return [generate(r, backend, policy) for r in requests]
    with ThreadPoolExecutor(max_workers=concurrency) as pool:
        return list(pool.map(lambda r: generate(r, backend, policy), requests))


@dataclass
class GenerationResult:
    samples: list[InstructionSample] = field(default_factory=list)
    responses: list[TeacherResponse] = field(default_factory=list)
    quarantine: list[dict] = field(default_factory=list)

    def report(self) -> dict:
        reasons = Counter(q["reason"] for q in self.quarantine)
        total = len(self.responses)
        return {
            "seeds": total,
            "accepted": len(self.samples),
            "rejected": len(self.quarantine),
            "rejection_reasons": dict(sorted(reasons.items())),
            "retries": sum(r.retry_count for r in self.responses),
            "truncated": sum(1 for r in self.responses if r.finish_reason == "truncated"),
        }


def run_generation(
    seeds: Sequence[SeedSnippet],
    template: PromptTemplate,
    backend: Backend,
    *,
    concurrency: int = 8,
    decoding: Decoding = GREEDY,
    max_new_tokens: int = DEFAULT_MAX_NEW_TOKENS,
    policy: RetryPolicy = RetryPolicy(),
) -> GenerationResult:
    """Generate, parse and partition into accepted samples and quarantine."""
    requests = [
        GenerationRequest(f"oss-{i:06d}", seed, build_prompt(seed, template), decoding, max_new_tokens)
        for i, seed in enumerate(seeds)
    ]
    responses = generate_all(requests, backend, concurrency, policy)
    result = GenerationResult(responses=responses)
    for req, resp in zip(requests, responses):
        if resp.finish_reason == "error":
            outcome: ParsedResponse | Rejection = Rejection("backend_error")
        else:
            outcome = parse_response(resp.raw_text or "", template.markers)
        if isinstance(outcome, Rejection):
            result.quarantine.append(
                {
                    "request_id": req.request_id,
                    "reason": outcome.reason,
                    "seed": req.seed.to_dict(),
                    "raw_text": resp.raw_text,
                    "error": resp.error,
                }
            )
            continue
        result.samples.append(
            make_sample(req.request_id, req.seed, resp.raw_text or "", outcome, resp.finish_reason == "truncated")
        )
    return result
