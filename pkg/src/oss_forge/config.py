"""Declarative pipeline configuration (YAML or JSON)."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .corpus import canonical_language
from .decontam import DEFAULT_MIN_MATCH_LEN
from .jsonl import canonical_json, sha256_hex
from .teacher.generate import DEFAULT_MAX_NEW_TOKENS

SECRET_KEYS = {"api_key", "token", "api_token", "secret", "password", "authorization"}


class ConfigError(Exception):
    def __init__(self, errors: list[str]):
        super().__init__("invalid config:\n  " + "\n  ".join(errors))
        self.errors = errors


@dataclass
class CorpusConfig:
    source: str = ""
    languages: list[str] = field(default_factory=list)


@dataclass
class SamplingConfig:
    rng_seed: int | None = None
    quota: dict[str, int] = field(default_factory=dict)
    seeds_per_doc: int = 1


@dataclass
class TeacherConfig:
    backend: str = "mock"  # mock | chat
    fixtures: str | None = None
    fallback: str = "error"
    endpoint: str | None = None
    model: str | None = None
    token_env: str = "TEACHER_API_TOKEN"
    concurrency: int = 8
    max_retries: int = 5
    base_delay: float = 1.0
    max_delay: float = 60.0
    temperature: float = 0.0
    top_p: float = 1.0
    max_new_tokens: int = DEFAULT_MAX_NEW_TOKENS
    template: str | None = None
    problem_marker: str = "[Problem Description]"
    solution_marker: str = "[Solution]"


@dataclass
class CleaningConfig:
    comment_prefixes: dict[str, list[str]] = field(default_factory=dict)


@dataclass
class DecontamConfig:
    benchmarks: list[str] = field(default_factory=list)
    min_match_len: int = DEFAULT_MIN_MATCH_LEN


@dataclass
class EmbedderConfig:
    type: str = "tfidf"  # tfidf | http
    endpoint: str | None = None
    model: str | None = None
    instruction: str = "Represent the coding problem for classification:"
    token_env: str = "EMBEDDER_API_TOKEN"


@dataclass
class AnalysisConfig:
    tokenizer: str = "whitespace"  # whitespace | hf:<name>
    bin_width: int = 50
    similarity_reference: str | None = None
    group_reference_by_task: bool = True
    categories: str | None = None
    embedder: EmbedderConfig = field(default_factory=EmbedderConfig)


@dataclass
class PairsConfig:
    languages: list[str] = field(default_factory=lambda: ["python"])
    target: int | None = None
    min_comment_tokens: int = 3
    min_body_lines: int = 2
    leading_comments: bool = False


@dataclass
class ExportConfig:
    name: str = "oss-instruct"
    instruction_field: str = "instruction"
    response_field: str = "response"


@dataclass
class PipelineConfig:
    output_dir: str = "out"
    corpus: CorpusConfig = field(default_factory=CorpusConfig)
    sampling: SamplingConfig = field(default_factory=SamplingConfig)
    teacher: TeacherConfig = field(default_factory=TeacherConfig)
    cleaning: CleaningConfig = field(default_factory=CleaningConfig)
    decontamination: DecontamConfig = field(default_factory=DecontamConfig)
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)
    pairs: PairsConfig = field(default_factory=PairsConfig)
    export: ExportConfig = field(default_factory=ExportConfig)
    base_dir: str = field(default=".", repr=False)

    def path(self, value: str) -> Path:
        p = Path(value)
        return p if p.is_absolute() else Path(self.base_dir) / p

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d.pop("base_dir")
        return d

    def semantic_dict(self) -> dict[str, Any]:
        """Everything except ``output_dir``: where results go does not change
        what they are."""
        d = self.to_dict()
        d.pop("output_dir")
        return d

    def hash(self) -> str:
        return sha256_hex(canonical_json(self.semantic_dict()))


_SECTIONS = {
    "corpus": CorpusConfig,
    "sampling": SamplingConfig,
    "teacher": TeacherConfig,
    "cleaning": CleaningConfig,
    "decontamination": DecontamConfig,
    "analysis": AnalysisConfig,
    "pairs": PairsConfig,
    "export": ExportConfig,
}


def _find_secrets(obj: Any, prefix: str = "") -> list[str]:
    found = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            key = f"{prefix}.{k}" if prefix else str(k)
            if str(k).lower() in SECRET_KEYS:
                found.append(f"{key}: secrets must come from environment variables, not the config file")
            found.extend(_find_secrets(v, key))
    return found


def _build(cls, raw: Any, where: str, errors: list[str]):
    if raw is None:
        return cls()
    if not isinstance(raw, dict):
        errors.append(f"{where}: expected a mapping")
        return cls()
    known = set(cls.__dataclass_fields__)
    for k in raw:
        if k not in known:
            errors.append(f"{where}.{k}: unknown field")
    kwargs = {k: v for k, v in raw.items() if k in known}
    if cls is AnalysisConfig and "embedder" in kwargs:
        kwargs["embedder"] = _build(EmbedderConfig, kwargs["embedder"], f"{where}.embedder", errors)
    try:
        return cls(**kwargs)
    except TypeError as exc:
        errors.append(f"{where}: {exc}")
        return cls()


def from_dict(raw: dict[str, Any], base_dir: str | os.PathLike = ".", check_paths: bool = True) -> PipelineConfig:
    errors = _find_secrets(raw)
    for k in raw:
        if k not in _SECTIONS and k != "output_dir":
            errors.append(f"{k}: unknown section")
    cfg = PipelineConfig(
        output_dir=str(raw.get("output_dir", "out")),
        base_dir=str(base_dir),
        **{name: _build(cls, raw.get(name), name, errors) for name, cls in _SECTIONS.items()},
    )
    _normalize(cfg)
    errors.extend(validate(cfg, check_paths))
    if errors:
        raise ConfigError(errors)
    return cfg


def _normalize(cfg: PipelineConfig) -> None:
    s = cfg.sampling
    if isinstance(s.quota, dict):
        s.quota = {canonical_language(str(k)): v for k, v in s.quota.items()}
    if not cfg.corpus.languages and isinstance(s.quota, dict):
        cfg.corpus.languages = sorted(s.quota)
    cfg.corpus.languages = sorted({canonical_language(str(x)) for x in cfg.corpus.languages})
    cfg.pairs.languages = sorted({canonical_language(str(x)) for x in cfg.pairs.languages})


def _is_int(v: Any) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def validate(cfg: PipelineConfig, check_paths: bool = True) -> list[str]:
    errors: list[str] = []

    def need_path(where: str, value: str | None, required: bool = False) -> None:
        if not value:
            if required:
                errors.append(f"{where}: required")
            return
        if check_paths and not cfg.path(value).exists():
            errors.append(f"{where}: path does not exist: {value}")

    need_path("corpus.source", cfg.corpus.source, required=True)

    s = cfg.sampling
    if s.rng_seed is None:
        errors.append("sampling.rng_seed: required (no implicit entropy)")
    elif not _is_int(s.rng_seed) or not 0 <= s.rng_seed < 2**64:
        errors.append("sampling.rng_seed: must be an integer in [0, 2**64)")
    if not isinstance(s.quota, dict) or not s.quota:
        errors.append("sampling.quota: required mapping of language -> count")
    else:
        for lang, n in s.quota.items():
            if not _is_int(n) or n < 0:
                errors.append(f"sampling.quota.{lang}: must be a non-negative integer")
        if all(_is_int(n) and n == 0 for n in s.quota.values()):
            errors.append("sampling.quota: at least one count must be > 0")
        missing = sorted(set(s.quota) - set(cfg.corpus.languages))
        if missing:
            errors.append(f"corpus.languages: quota languages not listed: {missing}")
    if not _is_int(s.seeds_per_doc) or s.seeds_per_doc < 1:
        errors.append("sampling.seeds_per_doc: must be an integer >= 1")

    t = cfg.teacher
    if t.backend not in ("mock", "chat"):
        errors.append("teacher.backend: must be 'mock' or 'chat'")
    if t.backend == "mock":
        need_path("teacher.fixtures", t.fixtures)
        if t.fallback not in ("error", "synthesize"):
            errors.append("teacher.fallback: must be 'error' or 'synthesize'")
    if t.backend == "chat":
        if not t.endpoint:
            errors.append("teacher.endpoint: required for the chat backend")
        if not t.model:
            errors.append("teacher.model: required for the chat backend")
    if not _is_int(t.concurrency) or t.concurrency < 1:
        errors.append("teacher.concurrency: must be an integer >= 1")
    if not _is_int(t.max_retries) or t.max_retries < 0:
        errors.append("teacher.max_retries: must be an integer >= 0")
    if not _is_int(t.max_new_tokens) or t.max_new_tokens < 1:
        errors.append("teacher.max_new_tokens: must be a positive integer")
    if not isinstance(t.temperature, (int, float)) or t.temperature < 0:
        errors.append("teacher.temperature: must be >= 0")
    if not isinstance(t.top_p, (int, float)) or not 0 < t.top_p <= 1:
        errors.append("teacher.top_p: must be in (0, 1]")
    need_path("teacher.template", t.template)

    d = cfg.decontamination
    if not isinstance(d.benchmarks, list):
        errors.append("decontamination.benchmarks: must be a list of paths")
    else:
        for i, b in enumerate(d.benchmarks):
            need_path(f"decontamination.benchmarks[{i}]", b, required=True)
    if not _is_int(d.min_match_len) or d.min_match_len < 1:
        errors.append("decontamination.min_match_len: must be a positive integer")

    a = cfg.analysis
    if not (a.tokenizer == "whitespace" or str(a.tokenizer).startswith("hf:")):
        errors.append("analysis.tokenizer: must be 'whitespace' or 'hf:<tokenizer name>'")
    if not _is_int(a.bin_width) or a.bin_width < 1:
        errors.append("analysis.bin_width: must be a positive integer")
    need_path("analysis.similarity_reference", a.similarity_reference)
    need_path("analysis.categories", a.categories)
    if a.embedder.type not in ("tfidf", "http"):
        errors.append("analysis.embedder.type: must be 'tfidf' or 'http'")
    if a.embedder.type == "http" and not (a.embedder.endpoint and a.embedder.model):
        errors.append("analysis.embedder: endpoint and model required for type 'http'")

    p = cfg.pairs
    if p.target is not None and (not _is_int(p.target) or p.target < 0):
        errors.append("pairs.target: must be a non-negative integer or null")

    e = cfg.export
    if not e.instruction_field or not e.response_field or e.instruction_field == e.response_field:
        errors.append("export: instruction_field and response_field must be distinct non-empty names")
    return errors


def load_config(path: str | os.PathLike, check_paths: bool = True) -> PipelineConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError([f"config: cannot read {path}: {exc}"]) from exc
    try:
        raw = json.loads(text) if path.suffix == ".json" else yaml.safe_load(text)
    except (ValueError, yaml.YAMLError) as exc:
        raise ConfigError([f"config: parse error: {exc}"]) from exc
    if not isinstance(raw, dict):
        raise ConfigError(["config: top level must be a mapping"])
    return from_dict(raw, base_dir=path.parent, check_paths=check_paths)
