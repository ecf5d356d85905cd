"""Stage runner: each stage reads prior artifacts from the output directory
and writes its own, atomically. A stage is skipped when its outputs exist
and were produced under the same config hash from the same inputs, unless
forced.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path

from filelock import FileLock, Timeout

from . import analyze as an
from .clean import clean
from .config import PipelineConfig
from .corpus import (
    LINE_COMMENT_PREFIXES,
    LoadStats,
    SamplingQuota,
    extract_seeds,
    load_corpus,
    sample_documents,
)
from .decontam import ContaminationIndex, decontaminate, load_benchmarks
from .export import (
    ExportSchema,
    export_jsonl,
    read_samples,
    split_by_language,
    write_report,
    write_samples,
)
from .jsonl import atomic_open, iter_jsonl, read_json, sha256_hex, write_json, write_jsonl
from .pairminer import MiningOptions, MiningStats, mine_pairs, pairs_to_samples, prioritize_pairs
from .records import SeedSnippet
from .teacher import (
    ChatCompletionBackend,
    Decoding,
    MockBackend,
    PromptTemplate,
    RetryPolicy,
    run_generation,
)

logger = logging.getLogger("oss_forge.pipeline")

STAGES = (
    "sample-seeds",
    "generate",
    "clean",
    "decontaminate",
    "analyze",
    "mine-pairs",
    "split",
    "export",
    "report",
)

SEEDS = "seeds.jsonl"
SAMPLES = "samples.jsonl"
CLEANED = "cleaned.jsonl"
DECONTAMINATED = "decontaminated.jsonl"

# stage -> (inputs, outputs), paths relative to the output directory
ARTIFACTS: dict[str, tuple[tuple[str, ...], tuple[str, ...]]] = {
    "sample-seeds": ((), (SEEDS, "sampling_report.json")),
    "generate": ((SEEDS,), (SAMPLES, "responses.jsonl", "quarantine.jsonl", "generate_report.json")),
    "clean": ((SAMPLES,), (CLEANED, "clean_report.json")),
    "decontaminate": (
        (CLEANED,),
        (DECONTAMINATED, "decontam_removed.jsonl", "decontam_matches.jsonl", "decontaminate_report.json"),
    ),
    "analyze": ((DECONTAMINATED,), ("analysis/analysis.json", "analysis/histogram.csv")),
    "mine-pairs": ((SEEDS,), ("pairs.jsonl", "pair_samples.jsonl", "mine-pairs_report.json")),
    "split": ((DECONTAMINATED,), ("split/python.jsonl", "split/other.jsonl", "split_report.json")),
    "export": ((DECONTAMINATED,), ("dataset.jsonl", "dataset.manifest.json", "export_report.json")),
    "report": ((), ("report/report.json",)),
}

# read when present; they feed the freshness check but are not required
OPTIONAL_INPUTS: dict[str, tuple[str, ...]] = {
    "mine-pairs": (DECONTAMINATED,),
    "report": (
        "sampling_report.json", "generate_report.json", "clean_report.json", "decontaminate_report.json",
        "mine-pairs_report.json", "split_report.json", "export_report.json",
        "analysis/analysis.json", "analysis/histogram.csv", "analysis/similarity.csv",
    ),
}


class StageError(Exception):
    pass


class PipelineLocked(StageError):
    pass


@dataclass
class StageOutcome:
    stage: str
    skipped: bool
    counters: dict


def _kv(counters: dict) -> str:
    return " ".join(f"{k}={v}" for k, v in counters.items() if not isinstance(v, (dict, list)))


class Pipeline:
    def __init__(
        self,
        config: PipelineConfig,
        out_dir: str | Path | None = None,
        *,
        force: bool = False,
        concurrency: int | None = None,
        backend=None,
    ):
        self.cfg = config
        self.out = Path(out_dir) if out_dir is not None else config.path(config.output_dir)
        self.force = force
        self.concurrency = concurrency or config.teacher.concurrency
        self._backend = backend
        self.config_hash = config.hash()

    # -- bookkeeping -------------------------------------------------------

    def _marker(self, stage: str) -> Path:
        return self.out / ".stages" / f"{stage}.json"

    def _input_digests(self, stage: str) -> dict[str, str]:
        paths = ARTIFACTS[stage][0] + OPTIONAL_INPUTS.get(stage, ())
        return {p: sha256_hex((self.out / p).read_bytes()) for p in paths if (self.out / p).exists()}

    def is_current(self, stage: str) -> bool:
        """Outputs exist and were made under this config from these inputs."""
        marker = self._marker(stage)
        if not marker.exists():
            return False
        m = read_json(marker)
        if m.get("config_hash") != self.config_hash or m.get("inputs") != self._input_digests(stage):
            return False
        return all((self.out / p).exists() for p in ARTIFACTS[stage][1])

    def missing_inputs(self, stage: str) -> list[str]:
        return [p for p in ARTIFACTS[stage][0] if not (self.out / p).exists()]

    def run(self, stages: list[str]) -> list[StageOutcome]:
        self.out.mkdir(parents=True, exist_ok=True)
        lock = FileLock(str(self.out / ".lock"), timeout=0)
        try:
            lock.acquire()
        except Timeout as exc:
            raise PipelineLocked(f"another pipeline holds the lock on {self.out}") from exc
        try:
            return [self.run_stage(s) for s in stages]
        finally:
            lock.release()

    def run_stage(self, stage: str) -> StageOutcome:
        if stage not in STAGES:
            raise StageError(f"unknown stage {stage!r}")
        missing = self.missing_inputs(stage)
        if missing:
            producers = sorted({s for s, (_, outs) in ARTIFACTS.items() if set(outs) & set(missing)})
            raise StageError(
                f"{stage}: missing artifact(s) {', '.join(missing)}; run {', '.join(producers)} first"
            )
        if not self.force and self.is_current(stage):
            logger.info("stage=%s skipped (outputs current)", stage)
            return StageOutcome(stage, True, {})
        fn: Callable[[], dict] = getattr(self, "_" + stage.replace("-", "_"))
        try:
            counters = fn()
        except StageError:
            raise
        except Exception as exc:
            # outputs are written atomically, so earlier artifacts stay intact
            raise StageError(f"{stage}: {type(exc).__name__}: {exc}") from exc
        write_json(self._marker(stage), {"config_hash": self.config_hash, "inputs": self._input_digests(stage)})
        logger.info("stage=%s %s", stage, _kv(counters))
        return StageOutcome(stage, False, counters)

    def _report_path(self, stage: str) -> Path:
        return self.out / f"{stage}_report.json"

    # -- stages ------------------------------------------------------------

    def _sample_seeds(self) -> dict:
        cfg = self.cfg
        stats = LoadStats()
        docs = load_corpus(cfg.path(cfg.corpus.source), cfg.corpus.languages, stats)
        quota = SamplingQuota(cfg.sampling.quota, cfg.sampling.rng_seed)
        selected, report = sample_documents(docs, quota)
        seeds = extract_seeds(selected, cfg.sampling.rng_seed, cfg.sampling.seeds_per_doc)
        write_jsonl(self.out / SEEDS, (s.to_dict() for s in seeds))
        result = {**report.to_dict(), "seeds": len(seeds), "load": stats.to_dict()}
        write_json(self.out / "sampling_report.json", result)
        return {"seeds": len(seeds), "shortfall": result["total_shortfall"], **stats.to_dict()}

    def _seeds(self) -> list[SeedSnippet]:
        return [SeedSnippet.from_dict(d) for d in iter_jsonl(self.out / SEEDS)]

    def backend(self):
        if self._backend is not None:
            return self._backend
        t = self.cfg.teacher
        if t.backend == "mock":
            if t.fixtures:
                return MockBackend.from_file(self.cfg.path(t.fixtures), fallback=t.fallback)
            return MockBackend(fallback=t.fallback)
        return ChatCompletionBackend(t.endpoint, t.model, token_env=t.token_env)

    def template(self) -> PromptTemplate:
        t = self.cfg.teacher
        kwargs = {"problem_marker": t.problem_marker, "solution_marker": t.solution_marker}
        if t.template:
            kwargs["text"] = self.cfg.path(t.template).read_text(encoding="utf-8")
        return PromptTemplate(**kwargs)

    def _generate(self) -> dict:
        t = self.cfg.teacher
        result = run_generation(
            self._seeds(),
            self.template(),
            self.backend(),
            concurrency=self.concurrency,
            decoding=Decoding(float(t.temperature), float(t.top_p)),
            max_new_tokens=t.max_new_tokens,
            policy=RetryPolicy(t.max_retries, t.base_delay, t.max_delay),
        )
        write_samples(self.out / SAMPLES, result.samples)
        write_jsonl(self.out / "responses.jsonl", (r.to_dict() for r in result.responses))
        write_jsonl(self.out / "quarantine.jsonl", result.quarantine)
        report = result.report()
        write_json(self._report_path("generate"), report)
        return report

    def _clean(self) -> dict:
        prefixes = dict(LINE_COMMENT_PREFIXES)
        prefixes.update({k: tuple(v) for k, v in self.cfg.cleaning.comment_prefixes.items()})
        kept, report = clean(read_samples(self.out / SAMPLES), prefixes)
        write_samples(self.out / CLEANED, kept)
        write_json(self._report_path("clean"), report.to_dict())
        return report.to_dict()

    def _decontaminate(self) -> dict:
        d = self.cfg.decontamination
        corpora = []
        for path in d.benchmarks:
            corpora.extend(load_benchmarks(self.cfg.path(path), d.min_match_len))
        result = decontaminate(read_samples(self.out / CLEANED), ContaminationIndex(corpora))
        write_samples(self.out / DECONTAMINATED, result.kept)
        write_samples(self.out / "decontam_removed.jsonl", result.removed)
        write_jsonl(self.out / "decontam_matches.jsonl", (m.to_dict() for m in result.matches))
        report = {**result.report(), "min_match_len": d.min_match_len}
        write_json(self._report_path("decontaminate"), report)
        return report

    def _token_counter(self):
        tok = self.cfg.analysis.tokenizer
        if tok == "whitespace":
            return an.whitespace_tokens, "whitespace"
        from transformers import AutoTokenizer

        name = tok.split(":", 1)[1]
        return an.subword_counter(AutoTokenizer.from_pretrained(name)), tok

    def _embedder(self):
        e = self.cfg.analysis.embedder
        if e.type == "http":
            return an.HttpEmbedder(e.endpoint, e.model, e.instruction, token_env=e.token_env)
        return an.TfIdfEmbedder()

    def _analyze(self) -> dict:
        a = self.cfg.analysis
        samples = read_samples(self.out / DECONTAMINATED)
        adir = self.out / "analysis"
        counter, tok_id = self._token_counter()
        hist = an.token_length_histogram(samples, counter, a.bin_width, tok_id)
        result: dict = {"samples": len(samples), "histogram": hist.to_dict()}

        if a.similarity_reference:
            refs = list(iter_jsonl(self.cfg.path(a.similarity_reference)))
            bench = an.group_entries(refs) if a.group_reference_by_task else [
                (str(r["entry_id"]), r["text"]) for r in refs
            ]
            records, summary = an.nearest_benchmark(
                [(s.sample_id, an.sample_text(s)) for s in samples], bench
            )
            result["similarity"] = {"reference_entries": len(bench), "tokenizer": an.TOKENIZER_ID, **summary}
            lines = ["sample_id,best_benchmark_entry_id,score"]
            lines += [f"{r.sample_id},{r.best_benchmark_entry_id},{r.score!r}" for r in records]
            with atomic_open(adir / "similarity.csv") as f:
                f.write("\n".join(lines) + "\n")

        try:
            breakdown = an.categorize(samples, an.load_categories(self.cfg.path(a.categories) if a.categories else None),
                                      self._embedder())
            result["categories"] = breakdown.to_dict()
        except (an.EmbedderError, ValueError) as exc:
            logger.error("stage=analyze categories failed: %s", exc)
            result["categories"] = {"error": str(exc)}

        with atomic_open(adir / "histogram.csv") as f:
            f.write(hist.to_csv())
        write_json(adir / "analysis.json", result)
        return {"samples": len(samples), "tokenizer": tok_id}

    def _mine_pairs(self) -> dict:
        p = self.cfg.pairs
        stats = MiningStats()
        docs = load_corpus(self.cfg.path(self.cfg.corpus.source), p.languages)
        opts = MiningOptions(p.min_comment_tokens, p.min_body_lines, p.leading_comments)
        pairs = mine_pairs(docs, p.languages, opts, stats)
        target = p.target
        if target is None:
            dec = self.out / DECONTAMINATED
            target = sum(1 for _ in iter_jsonl(dec)) if dec.exists() else len(pairs)
        chosen, shortfall = prioritize_pairs(pairs, self._seeds(), target)
        write_jsonl(self.out / "pairs.jsonl", (x.to_dict() for x in chosen))
        write_samples(self.out / "pair_samples.jsonl", pairs_to_samples(chosen))
        report = {
            **stats.to_dict(),
            "target": target,
            "selected": len(chosen),
            "overlapping_seed": sum(1 for x in chosen if x.overlaps_seed),
            "shortfall": shortfall,
        }
        write_json(self._report_path("mine-pairs"), report)
        return report

    def _schema(self) -> ExportSchema:
        e = self.cfg.export
        return ExportSchema(e.instruction_field, e.response_field)

    def _split(self) -> dict:
        py, other = split_by_language(read_samples(self.out / DECONTAMINATED))
        name = self.cfg.export.name
        export_jsonl(py, self.out / "split/python.jsonl", self._schema(), name=f"{name}-python")
        export_jsonl(other, self.out / "split/other.jsonl", self._schema(), name=f"{name}-other")
        report = {"python": len(py), "other": len(other)}
        write_json(self._report_path("split"), report)
        return report

    def _stage_report(self, stage: str) -> dict | None:
        path = self._report_path(stage)
        return read_json(path) if path.exists() else None

    def _export(self) -> dict:
        samples = read_samples(self.out / DECONTAMINATED)
        stage_reports = {k: v for k in ("clean", "decontaminate") if (v := self._stage_report(k)) is not None}
        manifest = export_jsonl(
            samples,
            self.out / "dataset.jsonl",
            self._schema(),
            name=self.cfg.export.name,
            config=self.cfg.semantic_dict(),
            stage_reports=stage_reports,
            manifest_path=self.out / "dataset.manifest.json",
        )
        report = {"sample_count": manifest["sample_count"], "data_sha256": manifest["data_sha256"]}
        write_json(self._report_path("export"), report)
        return report

    def _report(self) -> dict:
        stages = {}
        for stage in ("generate", "clean", "decontaminate", "mine-pairs", "split", "export"):
            rep = self._stage_report(stage)
            if rep is not None:
                stages[stage] = rep
        sampling = self.out / "sampling_report.json"
        if sampling.exists():
            stages["sample-seeds"] = read_json(sampling)
        analysis, csvs = {}, {}
        adir = self.out / "analysis"
        if (adir / "analysis.json").exists():
            analysis = read_json(adir / "analysis.json")
            for name in ("histogram.csv", "similarity.csv"):
                if (adir / name).exists():
                    csvs[name] = (adir / name).read_text(encoding="utf-8")
        report = write_report(
            self.out / "report", stages, analysis, csvs, self.cfg.semantic_dict()
        )
        if not report["ledger_ok"]:
            bad = [c["identity"] for c in report["ledger"] if not c["ok"]]
            raise StageError(f"report: ledger does not reconcile: {bad}")
        return {"ledger_checks": len(report["ledger"]), "ledger_ok": report["ledger_ok"]}
