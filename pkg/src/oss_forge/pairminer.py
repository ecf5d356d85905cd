"""Mine (signature, comment, body) triples from source documents.

The built-in miner handles Python by line structure rather than a full parse,
so Python 2 files and snippets with unrelated syntax errors still yield
pairs. A lexical pre-pass blanks out string literals and comments; header,
docstring and body boundaries are then read off the masked lines.
"""

from __future__ import annotations

import logging
import re
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, replace

from .corpus import document_lines
from .records import CodeDocument, InstructionSample, SeedSnippet

logger = logging.getLogger(__name__)

_DEF_RE = re.compile(r"^([ \t]*)(?:async[ \t]+)?def[ \t]+\w+[ \t]*\(")
_STRING_START_RE = re.compile(r"^[rRuUbBfF]{0,2}(\"\"\"|'''|\"|')")
_WORD_RE = re.compile(r"\w+")
_FENCE_BODY_RE = re.compile(r"```[^\n]*\n(.*)\n```\s*\Z", re.DOTALL)

COMPLETION_HEADER = (
    "Complete the following {language} function. Write only the function body, "
    "following the signature and its documentation.\n\n"
)


class UnparseableDocument(Exception):
    pass


@dataclass(frozen=True)
class CommentFunctionPair:
    doc_id: str
    language: str
    signature: str
    comment: str
    body: str
    span: tuple[int, int]  # 1-based inclusive line range
    comment_first: bool = False  # leading comment block rather than docstring
    overlaps_seed: bool = False

    def region_text(self) -> str:
        """The mined lines in source order."""
        if self.comment_first:
            return "\n".join((self.comment, self.signature, self.body))
        return "\n".join((self.signature, self.comment, self.body))

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "language": self.language,
            "signature": self.signature,
            "comment": self.comment,
            "body": self.body,
            "span": list(self.span),
            "comment_first": self.comment_first,
            "overlaps_seed": self.overlaps_seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> CommentFunctionPair:
        return cls(
            d["doc_id"], d["language"], d["signature"], d["comment"], d["body"],
            tuple(d["span"]), d.get("comment_first", False), d.get("overlaps_seed", False),
        )


@dataclass(frozen=True)
class MiningOptions:
    min_comment_tokens: int = 3
    min_body_lines: int = 2
    leading_comments: bool = False


@dataclass
class MiningStats:
    documents: int = 0
    pairs: int = 0
    skipped_unparseable: int = 0
    skipped_language: int = 0

    def to_dict(self) -> dict[str, int]:
        return dict(vars(self))


def mask_python(lines: Sequence[str]) -> tuple[list[str], list[bool]]:
    """Replace string-literal characters with ``S`` and comments with spaces.

    Also returns, per line, whether the line begins inside a string. Raises
    :class:`UnparseableDocument` if the text ends inside a string.
    """
    masked: list[str] = []
    starts_in_string: list[bool] = []
    quote: str | None = None  # active delimiter: ', ", ''' or """
    for line in lines:
        starts_in_string.append(quote is not None)
        out = []
        i, n = 0, len(line)
        while i < n:
            ch = line[i]
            if quote is not None:
                if ch == "\\":
                    out.append("SS" if i + 1 < n else "S")
                    i += 2
                    continue
                if line.startswith(quote, i):
                    out.append("S" * len(quote))
                    i += len(quote)
                    quote = None
                    continue
                out.append("S")
                i += 1
                continue
            if ch == "#":
                out.append(" " * (n - i))
                break
            if ch in "'\"":
                quote = ch * 3 if line.startswith(ch * 3, i) else ch
                out.append("S" * len(quote))
                i += len(quote)
                continue
            out.append(ch)
            i += 1
        if quote is not None and len(quote) == 1 and not line.endswith("\\"):
            # unterminated single-quoted string: the tokenizer would reject it
            raise UnparseableDocument("unterminated string literal")
        masked.append("".join(out))
    if quote is not None:
        raise UnparseableDocument("unterminated string at end of document")
    return masked, starts_in_string


def _indent(line: str) -> int:
    return len(line) - len(line.lstrip(" \t"))


def _header_end(masked: Sequence[str], start: int) -> tuple[int, int] | None:
    """(line, column) of the colon closing a def header, or None."""
    depth = 0
    opened = False
    for ln in range(start, len(masked)):
        for col, ch in enumerate(masked[ln]):
            if ch in "([{":
                depth += 1
                opened = True
            elif ch in ")]}":
                depth -= 1
            elif ch == ":" and depth == 0 and opened:
                return ln, col
    return None


def _python_pairs(doc: CodeDocument, opts: MiningOptions) -> list[CommentFunctionPair]:
    lines = document_lines(doc.content)
    masked, in_string = mask_python(lines)
    n = len(lines)

    def code_blank(k: int) -> bool:
        return not in_string[k] and not masked[k].strip()

    pairs = []
    for i in range(n):
        if in_string[i]:
            continue
        m = _DEF_RE.match(masked[i])
        if not m:
            continue
        def_indent = _indent(lines[i])
        end = _header_end(masked, i)
        if end is None:
            continue
        h, col = end
        if masked[h][col + 1 :].strip():
            continue  # one-line def: nothing to split into comment and body

        # body: up to the first code line indented no deeper than the def
        stop = n
        for k in range(h + 1, n):
            if not code_blank(k) and not in_string[k] and _indent(lines[k]) <= def_indent:
                stop = k
                break
        last = stop - 1
        while last > h and code_blank(last):
            last -= 1
        if last <= h:
            continue

        first = h + 1
        while first <= last and code_blank(first):
            first += 1
        pair = None
        if _STRING_START_RE.match(lines[first].lstrip()):
            e = first
            while e + 1 <= last and in_string[e + 1]:
                e += 1
            if e + 1 < len(in_string) and in_string[e + 1]:
                continue  # docstring runs past the body
            comment = "\n".join(lines[h + 1 : e + 1])
            body_lines = lines[e + 1 : last + 1]
            pair = (i, "\n".join(lines[i : h + 1]), comment, body_lines, False)
        elif opts.leading_comments:
            c = i
            while c > 0 and not in_string[c - 1] and lines[c - 1].strip().startswith("#") \
                    and _indent(lines[c - 1]) == def_indent:
                c -= 1
            if c < i:
                comment = "\n".join(lines[c:i])
                pair = (c, "\n".join(lines[i : h + 1]), comment, lines[h + 1 : last + 1], True)
        if pair is None:
            continue
        start, signature, comment, body_lines, comment_first = pair
        if sum(1 for b in body_lines if b.strip()) < opts.min_body_lines:
            continue
        if len(_WORD_RE.findall(comment)) < opts.min_comment_tokens:
            continue
        pairs.append(
            CommentFunctionPair(
                doc.doc_id, doc.language, signature, comment, "\n".join(body_lines),
                (start + 1, last + 1), comment_first,
            )
        )
    return pairs


Miner = Callable[[CodeDocument, MiningOptions], list[CommentFunctionPair]]

MINERS: dict[str, Miner] = {"python": _python_pairs}


def mine_pairs(
    corpus: Iterable[CodeDocument],
    languages: Iterable[str] = ("python",),
    options: MiningOptions = MiningOptions(),
    stats: MiningStats | None = None,
) -> list[CommentFunctionPair]:
    """Pairs for every documented function (nested ones included), ordered
    by (doc_id, start_line)."""
    wanted = set(languages)
    stats = stats if stats is not None else MiningStats()
    out: list[CommentFunctionPair] = []
    for doc in corpus:
        miner = MINERS.get(doc.language)
        if doc.language not in wanted or miner is None:
            stats.skipped_language += 1
            continue
        stats.documents += 1
        try:
            found = miner(doc, options)
        except UnparseableDocument as exc:
            logger.debug("pairminer: skipping %s: %s", doc.doc_id, exc)
            stats.skipped_unparseable += 1
            continue
        out.extend(found)
    out.sort(key=lambda p: (p.doc_id, p.span[0]))
    stats.pairs = len(out)
    return out


def _overlaps(pair: CommentFunctionPair, seeds_by_doc: dict[str, list[tuple[int, int]]]) -> bool:
    lo, hi = pair.span
    return any(s <= hi and lo <= e for s, e in seeds_by_doc.get(pair.doc_id, ()))


def prioritize_pairs(
    pairs: Sequence[CommentFunctionPair], seeds: Iterable[SeedSnippet], target: int
) -> tuple[list[CommentFunctionPair], int]:
    """Seed-overlapping pairs first, then the rest, each in (doc_id, start_line)
    order; truncated to ``target``. Returns the pairs and the shortfall."""
    seeds_by_doc: dict[str, list[tuple[int, int]]] = {}
    for s in seeds:
        seeds_by_doc.setdefault(s.doc_id, []).append((s.start_line, s.end_line))
    marked = [replace(p, overlaps_seed=_overlaps(p, seeds_by_doc)) for p in pairs]
    marked.sort(key=lambda p: (not p.overlaps_seed, p.doc_id, p.span[0]))
    chosen = marked[:target]
    return chosen, max(0, target - len(chosen))


def pairs_to_samples(pairs: Sequence[CommentFunctionPair]) -> list[InstructionSample]:
    samples = []
    for i, p in enumerate(pairs):
        head = (p.comment, p.signature) if p.comment_first else (p.signature, p.comment)
        code = "\n".join(head)
        problem = COMPLETION_HEADER.format(language=p.language) + f"```{p.language}\n{code}\n```"
        samples.append(
            InstructionSample(
                sample_id=f"pair-{i:06d}",
                problem=problem,
                solution=p.body,
                origin="pair_mined",
                meta={"doc_id": p.doc_id, "span": list(p.span), "overlaps_seed": p.overlaps_seed},
            )
        )
    return samples


def problem_code(sample: InstructionSample) -> str:
    """The fenced code part of a pair-mined problem."""
    m = _FENCE_BODY_RE.search(sample.problem)
    if m is None:
        raise ValueError(f"{sample.sample_id}: no fenced code in problem")
    return m.group(1)
