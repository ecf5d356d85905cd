"""Aho-Corasick multi-pattern matcher over ``str``.

Build once, then share freely: the automaton is never mutated after
construction, so concurrent ``finditer`` calls are safe.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Iterator


class Automaton:
    """Reports every occurrence (overlapping included) of every pattern.

    >>> ac = Automaton(["he", "she", "hers"])
    >>> sorted(ac.findall("ushers"))
    [(1, 'she'), (2, 'he'), (2, 'hers')]
    """

    def __init__(self, patterns: Iterable[str]):
        self._goto: list[dict[str, int]] = [{}]
        self._fail: list[int] = [0]
        # patterns ending at the node, including those reached by failure links
        self._out: list[tuple[str, ...]] = [()]
        own: list[list[str]] = [[]]
        self.patterns: list[str] = []
        seen: set[str] = set()
        for pat in patterns:
            if not pat:
                raise ValueError("empty pattern")
            if pat in seen:
                continue
            seen.add(pat)
            self.patterns.append(pat)
            node = 0
            for ch in pat:
                nxt = self._goto[node].get(ch)
                if nxt is None:
                    nxt = len(self._goto)
                    self._goto[node][ch] = nxt
                    self._goto.append({})
                    self._fail.append(0)
                    self._out.append(())
                    own.append([])
                node = nxt
            own[node].append(pat)
        self._link(own)

    def _link(self, own: list[list[str]]) -> None:
        queue: deque[int] = deque()
        for child in self._goto[0].values():
            self._fail[child] = 0
            self._out[child] = tuple(own[child])
            queue.append(child)
        while queue:
            node = queue.popleft()
            for ch, child in self._goto[node].items():
                f = self._fail[node]
                while f and ch not in self._goto[f]:
                    f = self._fail[f]
                target = self._goto[f].get(ch, 0)
                self._fail[child] = target if target != child else 0
                self._out[child] = tuple(own[child]) + self._out[self._fail[child]]
                queue.append(child)

    def __len__(self) -> int:
        return len(self.patterns)

    def finditer(self, text: str) -> Iterator[tuple[int, str]]:
        """Yield ``(start, pattern)`` for each occurrence, ordered by end offset."""
        goto, fail, out = self._goto, self._fail, self._out
        node = 0
        for i, ch in enumerate(text):
            while node and ch not in goto[node]:
                node = fail[node]
            node = goto[node].get(ch, 0)
            if out[node]:
                end = i + 1
                for pat in out[node]:
                    yield end - len(pat), pat

    def findall(self, text: str) -> list[tuple[int, str]]:
        return list(self.finditer(text))
