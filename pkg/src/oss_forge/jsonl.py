"""Newline-delimited JSON helpers with atomic writes."""

from __future__ import annotations

import contextlib
import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Iterator

logger = logging.getLogger(__name__)


def _escape_separators(text: str) -> str:
    # U+2028/U+2029 are valid raw in JSON but break line-oriented readers
    return text.replace("\u2028", "\\u2028").replace("\u2029", "\\u2029")


def dumps_line(record: Any) -> str:
    return _escape_separators(json.dumps(record, ensure_ascii=False, sort_keys=True))


def canonical_json(obj: Any) -> str:
    return _escape_separators(json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":")))


def sha256_hex(data: str | bytes) -> str:
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


@contextlib.contextmanager
def atomic_open(path: str | os.PathLike, mode: str = "w") -> Iterator[Any]:
    """Write to a temp file in the target directory, rename on success.

    A crash mid-write leaves only a stray ``.tmp`` file, never a partial target.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        if "b" in mode:
            f = os.fdopen(fd, mode)
        else:
            f = os.fdopen(fd, mode, encoding="utf-8", newline="\n")
        with f:
            yield f
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp)
        raise


def write_jsonl(path: str | os.PathLike, records: Iterable[Any]) -> int:
    n = 0
    with atomic_open(path) as f:
        for rec in records:
            f.write(dumps_line(rec))
            f.write("\n")
            n += 1
    return n


def write_json(path: str | os.PathLike, obj: Any) -> None:
    with atomic_open(path) as f:
        f.write(json.dumps(obj, ensure_ascii=False, sort_keys=True, indent=2))
        f.write("\n")


def read_json(path: str | os.PathLike) -> Any:
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def iter_jsonl(path: str | os.PathLike, *, strict: bool = True, errors: list[int] | None = None) -> Iterator[Any]:
    """Yield records from a JSONL file, skipping blank lines.

    With ``strict=False`` undecodable lines are skipped and their line numbers
    appended to ``errors``.
    """
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError:
                if strict:
                    raise
                logger.warning("%s:%d: malformed record skipped", path, lineno)
                if errors is not None:
                    errors.append(lineno)


def read_jsonl(path: str | os.PathLike) -> list[Any]:
    return list(iter_jsonl(path))
