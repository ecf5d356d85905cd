"""Teacher backends: a fixture-driven mock and a chat-completion HTTP client."""

from __future__ import annotations

import os
import threading
import time
from collections.abc import Callable, Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import httpx

from ..jsonl import iter_jsonl, sha256_hex


class BackendError(Exception):
    """Permanent failure for one request."""


class TransientError(BackendError):
    def __init__(self, message: str, retry_after: float | None = None):
        super().__init__(message)
        self.retry_after = retry_after


class RateLimitError(TransientError):
    pass


class AuthError(Exception):
    """Credentials rejected. Fatal for the whole stage."""


@dataclass(frozen=True)
class Decoding:
    temperature: float = 0.0
    top_p: float = 1.0

    @property
    def greedy(self) -> bool:
        return self.temperature == 0.0


GREEDY = Decoding()


@dataclass(frozen=True)
class Completion:
    text: str
    finish_reason: str = "complete"  # complete | truncated


class Backend(Protocol):
    backend_id: str

    def complete(self, prompt: str, decoding: Decoding, max_new_tokens: int) -> Completion: ...


def prompt_hash(prompt: str) -> str:
    return sha256_hex(prompt)


def synthesize_response(prompt: str) -> Completion:
    """Deterministic stand-in response derived from the prompt hash.

    Roughly one in twelve responses omits the solution section so that the
    rejection path is exercised.
    """
    h = prompt_hash(prompt)
    n = int(h[:8], 16)
    lang = ("python", "python", "python", "rust", "java", "bash")[n % 6]
    problem = (
        f"Implement `task_{h[:8]}` which reads a list of records and returns the ones whose "
        f"key has checksum {h[8:16]}. Explain edge cases for empty input."
    )
    if n % 12 == 5:
        return Completion(f"[Problem Description]\n{problem}\n")
    solution = (
        f"```{lang}\n"
        f"# reference solution {h[16:24]}\n"
        f"def task_{h[:8]}(records):\n"
        f"    return [r for r in records if r.key == '{h[8:16]}']\n"
        f"```\n\nThe function filters in a single pass."
    )
    return Completion(f"[Problem Description]\n{problem}\n\n[Solution]\n{solution}\n")


class MockBackend:
    """Serves responses from a fixture table keyed by prompt hash.

    Unknown prompts either fail (``fallback="error"``) or get a synthesized
    response (``fallback="synthesize"``). ``delay`` makes calls overlap so
    the in-flight high-water mark is meaningful.
    """

    backend_id = "mock"

    def __init__(
        self,
        fixtures: Mapping[str, Completion | str] | None = None,
        fallback: str | Callable[[str], Completion] = "error",
        delay: float = 0.0,
    ):
        self.fixtures = {
            k: (v if isinstance(v, Completion) else Completion(v)) for k, v in (fixtures or {}).items()
        }
        if isinstance(fallback, str) and fallback not in ("error", "synthesize"):
            raise ValueError(f"unknown fallback {fallback!r}")
        self.fallback = fallback
        self.delay = delay
        self._lock = threading.Lock()
        self.in_flight = 0
        self.high_water = 0
        self.calls = 0

    @classmethod
    def from_file(cls, path: str | os.PathLike, **kwargs) -> MockBackend:
        fixtures = {}
        for rec in iter_jsonl(Path(path)):
            fixtures[rec["prompt_hash"]] = Completion(rec["raw_text"], rec.get("finish_reason", "complete"))
        return cls(fixtures, **kwargs)

    def complete(self, prompt: str, decoding: Decoding, max_new_tokens: int) -> Completion:
        with self._lock:
            self.in_flight += 1
            self.calls += 1
            self.high_water = max(self.high_water, self.in_flight)
        try:
            if self.delay:
                time.sleep(self.delay)
            h = prompt_hash(prompt)
            if h in self.fixtures:
                return self.fixtures[h]
            if callable(self.fallback):
                return self.fallback(prompt)
            if self.fallback == "synthesize":
                return synthesize_response(prompt)
            raise BackendError(f"no fixture for prompt {h[:12]}")
        finally:
            with self._lock:
                self.in_flight -= 1


class ChatCompletionBackend:
    """OpenAI-style ``/chat/completions`` client.

    The bearer token is read from an environment variable, never from config.
    """

    def __init__(
        self,
        endpoint: str,
        model: str,
        token_env: str = "TEACHER_API_TOKEN",
        timeout: float = 120.0,
        client: httpx.Client | None = None,
    ):
        self.endpoint = endpoint
        self.model = model
        self.backend_id = f"chat:{model}"
        token = os.environ.get(token_env)
        headers = {"Authorization": f"Bearer {token}"} if token else {}
        self.client = client or httpx.Client(timeout=timeout)
        self.headers = headers

    def payload(self, prompt: str, decoding: Decoding, max_new_tokens: int) -> dict:
        return {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "max_tokens": max_new_tokens,
            "temperature": decoding.temperature,
            "top_p": decoding.top_p,
        }

    def complete(self, prompt: str, decoding: Decoding, max_new_tokens: int) -> Completion:
        try:
            resp = self.client.post(
                self.endpoint, json=self.payload(prompt, decoding, max_new_tokens), headers=self.headers
            )
        except httpx.TimeoutException as exc:
            raise TransientError(f"timeout: {exc}") from exc
        except httpx.TransportError as exc:
            raise TransientError(f"transport: {exc}") from exc

        status = resp.status_code
        if status in (401, 403):
            raise AuthError(f"teacher endpoint rejected credentials (HTTP {status})")
        if status == 429:
            raise RateLimitError("rate limited", _retry_after(resp))
        if status >= 500 or status == 408:
            raise TransientError(f"HTTP {status}", _retry_after(resp))
        if status >= 400:
            raise BackendError(f"HTTP {status}: {resp.text[:200]}")
        try:
            choice = resp.json()["choices"][0]
            text = choice["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise BackendError(f"malformed response body: {exc}") from exc
        finish = "truncated" if choice.get("finish_reason") == "length" else "complete"
        return Completion(text or "", finish)


def _retry_after(resp: httpx.Response) -> float | None:
    value = resp.headers.get("retry-after")
    try:
        return float(value) if value is not None else None
    except ValueError:
        return None
