"""Dataset export, language split, manifests and the consolidated report."""

from __future__ import annotations

import os
import re
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import asdict, dataclass
from pathlib import Path

from .jsonl import atomic_open, canonical_json, iter_jsonl, sha256_hex, write_json, write_jsonl
from .records import InstructionSample

PYTHON_FENCE = "```python"

# Recorded for reference only; nothing here trains a model.
TRAINING_HYPERPARAMETERS = {
    "base_models": ["CodeLlama-Python-7B", "DeepSeek-Coder-Base-6.7B"],
    "epochs": 2,
    "learning_rate": 5e-5,
    "warmup_steps": 15,
    "lr_scheduler": "linear",
    "optimizer": "Adafactor",
    "batch_size": 512,
    "max_sequence_length": 1216,
    # second stage on Evol-Instruct data; these two keys are the stated differences
    "continued_finetuning": {"dataset": "evol-codealpaca-v1", "warmup_steps": 15, "max_sequence_length": 1024},
}

_OPEN_FENCE_RE = re.compile(r"^[ \t]*```[ \t]*([^\s`]*)", re.MULTILINE)


def split_by_language(
    samples: Iterable[InstructionSample],
) -> tuple[list[InstructionSample], list[InstructionSample]]:
    """Python set iff the literal ```` ```python```` appears in problem or solution
    (case-sensitive). Every sample lands in exactly one set."""
    python_set, other_set = [], []
    for s in samples:
        if PYTHON_FENCE in s.problem or PYTHON_FENCE in s.solution:
            python_set.append(s)
        else:
            other_set.append(s)
    return python_set, other_set


@dataclass(frozen=True)
class ExportSchema:
    instruction_field: str = "instruction"
    response_field: str = "response"

    def __post_init__(self) -> None:
        if not self.instruction_field or not self.response_field:
            raise ValueError("schema needs instruction and response field names")
        if self.instruction_field == self.response_field:
            raise ValueError("instruction and response fields must differ")
        reserved = set(_PROVENANCE_FIELDS)
        if {self.instruction_field, self.response_field} & reserved:
            raise ValueError(f"schema fields collide with provenance fields {sorted(reserved)}")


_PROVENANCE_FIELDS = ("sample_id", "seed", "raw_response", "fenced_languages", "flags", "origin", "meta")


def to_record(sample: InstructionSample, schema: ExportSchema) -> dict:
    d = sample.to_dict()
    rec = {schema.instruction_field: d.pop("problem"), schema.response_field: d.pop("solution")}
    rec.update(d)
    return rec


def from_record(rec: Mapping, schema: ExportSchema) -> InstructionSample:
    d = dict(rec)
    d["problem"] = d.pop(schema.instruction_field)
    d["solution"] = d.pop(schema.response_field)
    return InstructionSample.from_dict(d)


def fence_counts(samples: Iterable[InstructionSample]) -> dict[str, int]:
    """Opening code fences per language tag (``""`` for untagged fences)."""
    counts: Counter[str] = Counter()
    for s in samples:
        for text in (s.problem, s.solution):
            opening = True
            for m in _OPEN_FENCE_RE.finditer(text):
                if opening:
                    counts[m.group(1).lower()] += 1
                opening = not opening
    return dict(sorted(counts.items()))


def config_hash(config: Mapping) -> str:
    return sha256_hex(canonical_json(config))


def export_jsonl(
    samples: Sequence[InstructionSample],
    path: str | os.PathLike,
    schema: ExportSchema = ExportSchema(),
    *,
    name: str | None = None,
    config: Mapping | None = None,
    stage_reports: Mapping | None = None,
    manifest_path: str | os.PathLike | None = None,
) -> dict:
    """Write the dataset and a manifest beside it; returns the manifest."""
    path = Path(path)
    with atomic_open(path) as f:
        for s in samples:
            f.write(canonical_json(to_record(s, schema)))
            f.write("\n")
    manifest = {
        "dataset": name or path.stem,
        "data_file": path.name,
        "data_sha256": sha256_hex(path.read_bytes()),
        "sample_count": len(samples),
        "fence_counts": fence_counts(samples),
        "origins": dict(sorted(Counter(s.origin for s in samples).items())),
        "config_hash": config_hash(config) if config is not None else None,
        "schema": {**asdict(schema), "provenance_fields": list(_PROVENANCE_FIELDS), "format": "jsonl"},
        "stage_reports": dict(stage_reports or {}),
        "training_hyperparameters": TRAINING_HYPERPARAMETERS,
    }
    mpath = Path(manifest_path) if manifest_path else path.with_name(path.stem + ".manifest.json")
    write_json(mpath, manifest)
    return manifest


def read_dataset(path: str | os.PathLike, schema: ExportSchema = ExportSchema()) -> list[InstructionSample]:
    return [from_record(rec, schema) for rec in iter_jsonl(path)]


def write_samples(path: str | os.PathLike, samples: Iterable[InstructionSample]) -> int:
    """Internal stage format: plain ``InstructionSample.to_dict`` records."""
    return write_jsonl(path, (s.to_dict() for s in samples))


def read_samples(path: str | os.PathLike) -> list[InstructionSample]:
    return [InstructionSample.from_dict(d) for d in iter_jsonl(path)]


def ledger_checks(stages: Mapping[str, Mapping]) -> list[dict]:
    """Accounting identities between consecutive stages that are present."""
    checks = []

    def add(name: str, lhs: int, rhs: int) -> None:
        checks.append({"identity": name, "lhs": lhs, "rhs": rhs, "ok": lhs == rhs})

    gen, cln, dec = stages.get("generate"), stages.get("clean"), stages.get("decontaminate")
    exp, spl = stages.get("export"), stages.get("split")
    if gen:
        add("seeds = accepted + rejected", gen["seeds"], gen["accepted"] + gen["rejected"])
    if gen and cln:
        add("accepted = survivors + clean_removed", gen["accepted"],
            cln["output_count"] + cln["removed_exact_dup"] + cln["removed_seed_dup"] + cln["removed_trivial_seed"])
    if cln and dec:
        add("survivors = kept + decontam_removed", cln["output_count"], dec["kept"] + dec["removed"])
    if dec and exp:
        add("kept = exported", dec["kept"], exp["sample_count"])
    if dec and spl:
        add("kept = python + other", dec["kept"], spl["python"] + spl["other"])
    return checks


def write_report(
    out_dir: str | os.PathLike,
    stage_reports: Mapping[str, Mapping],
    analysis: Mapping | None = None,
    csv_files: Mapping[str, str] | None = None,
    config: Mapping | None = None,
) -> dict:
    """Write ``report.json`` plus any plot-ready CSV text into ``out_dir``.

    Nothing run-specific (paths, timestamps) goes into the report so that
    identical runs produce identical bytes.
    """
    out = Path(out_dir)
    checks = ledger_checks(stage_reports)
    report = {
        "config_hash": config_hash(config) if config is not None else None,
        "stages": {k: stage_reports[k] for k in sorted(stage_reports)},
        "analysis": dict(analysis or {}),
        "ledger": checks,
        "ledger_ok": all(c["ok"] for c in checks),
        "csv": sorted(csv_files or {}),
    }
    write_json(out / "report.json", report)
    for name, text in sorted((csv_files or {}).items()):
        with atomic_open(out / name) as f:
            f.write(text)
    return report
