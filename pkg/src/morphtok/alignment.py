"""Character alignment of canonical morpheme sequences onto surface words.

Canonical morphemes rarely concatenate to the surface word exactly: English
orthography drops silent e's ("motive ate" -> "motivate"), doubles consonants
("jog ing" -> "jogging"), and rewrites y to i ("swappy ness" -> "swappiness").
To infer what surface substring a morpheme group covers, we align the
concatenation of the canonical morphemes against the surface word with a
minimum-edit alignment and read group boundaries off the alignment.

Because several minimum-cost alignments may exist, every morpheme boundary
maps to a *set* of compatible surface cut positions.  When that set is a
singleton the boundary is unambiguous.  The deterministic span convention
picks the smallest compatible cut at every boundary, which attaches inserted
surface characters (gemination) to the unit on their right.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence


def edit_distance(a: str, b: str, limit: int | None = None) -> int:
    """Levenshtein distance with an optional early-exit threshold.

    When ``limit`` is given and the true distance exceeds it, some value
    > limit is returned (not necessarily the exact distance); the DP is
    then banded to O(len * limit).
    """
    if a == b:
        return 0
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return max(la, lb)
    if limit is not None and abs(la - lb) > limit:
        return abs(la - lb)
    big = la + lb
    prev = list(range(lb + 1))
    cur = [big] * (lb + 1)
    for i in range(1, la + 1):
        ca = a[i - 1]
        if limit is None:
            lo, hi = 1, lb
            cur[0] = i
        else:
            lo = max(1, i - limit)
            hi = min(lb, i + limit)
            cur[lo - 1] = i if lo == 1 else big
        best = cur[lo - 1]
        for j in range(lo, hi + 1):
            cost = 0 if ca == b[j - 1] else 1
            v = prev[j - 1] + cost
            up = prev[j] + 1
            if up < v:
                v = up
            left = cur[j - 1] + 1
            if left < v:
                v = left
            cur[j] = v
            if v < best:
                best = v
        if hi < lb:
            cur[hi + 1] = big
        if limit is not None and best > limit:
            return best
        prev, cur = cur, prev
    return prev[lb]


def normalized_edit_distance(a: str, b: str) -> float:
    """Edit distance divided by the longer length (0.0 for two empty strings)."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 0.0
    return edit_distance(a, b) / longest


def _dp_forward(canon: str, word: str) -> list[list[int]]:
    n, m = len(canon), len(word)
    d = [[0] * (m + 1) for _ in range(n + 1)]
    for j in range(m + 1):
        d[0][j] = j
    for i in range(1, n + 1):
        row = d[i]
        prev = d[i - 1]
        row[0] = i
        ci = canon[i - 1]
        for j in range(1, m + 1):
            cost = 0 if ci == word[j - 1] else 1
            row[j] = min(prev[j] + 1, row[j - 1] + 1, prev[j - 1] + cost)
    return d


def _dp_backward(canon: str, word: str) -> list[list[int]]:
    n, m = len(canon), len(word)
    d = [[0] * (m + 1) for _ in range(n + 1)]
    for j in range(m + 1):
        d[n][j] = m - j
    for i in range(n - 1, -1, -1):
        row = d[i]
        nxt = d[i + 1]
        row[m] = n - i
        ci = canon[i]
        for j in range(m - 1, -1, -1):
            cost = 0 if ci == word[j] else 1
            row[j] = min(nxt[j] + 1, row[j + 1] + 1, nxt[j + 1] + cost)
    return d


class MorphemeAlignment:
    """Minimum-edit alignment of a morpheme sequence against a surface word.

    ``morphemes`` are the canonical units in order, without any word-initial
    marker.  Boundary ``i`` sits before morpheme ``i`` (boundary 0 is the word
    start, boundary k the word end).
    """

    def __init__(self, morphemes: Sequence[str], word: str):
        if not morphemes or any(not m for m in morphemes):
            raise ValueError("morphemes must be non-empty strings")
        self.morphemes = tuple(morphemes)
        self.word = word
        self._cum = [0]
        for m in self.morphemes:
            self._cum.append(self._cum[-1] + len(m))
        canon = "".join(self.morphemes)
        fwd = _dp_forward(canon, word)
        bwd = _dp_backward(canon, word)
        self.cost = fwd[len(canon)][len(word)]
        # Surface cut positions compatible with at least one optimal alignment,
        # per morpheme boundary.  The outer boundaries are pinned to the word
        # ends: a tiling of the word has no freedom there, so leading or
        # trailing insertions always belong to the first or last group.
        self._cuts: list[tuple[int, ...]] = []
        for b in range(len(self.morphemes) + 1):
            c = self._cum[b]
            opts = tuple(
                j
                for j in range(len(word) + 1)
                if fwd[c][j] + bwd[c][j] == self.cost
            )
            self._cuts.append(opts)
        self._cuts[0] = (0,)
        self._cuts[-1] = (len(word),)

    def cut_positions(self, boundary: int) -> tuple[int, ...]:
        """All surface cut positions compatible with boundary ``boundary``."""
        return self._cuts[boundary]

    def boundary_is_unambiguous(self, boundary: int) -> bool:
        return len(self._cuts[boundary]) == 1

    def span(self, start: int, end: int) -> str:
        """Surface substring covered by morphemes ``start..end-1``.

        Uses the smallest compatible cut on both sides, so surface characters
        inserted at a junction belong to the unit on their right.
        """
        if not 0 <= start < end <= len(self.morphemes):
            raise ValueError(f"bad morpheme span ({start}, {end})")
        lo = self._cuts[start][0]
        hi = self._cuts[end][0]
        return self.word[lo:hi]

    def span_is_unambiguous(self, start: int, end: int) -> bool:
        """True when every optimal alignment induces the same span."""
        return (
            self.boundary_is_unambiguous(start)
            and self.boundary_is_unambiguous(end)
        )


@lru_cache(maxsize=65536)
def align(morphemes: tuple[str, ...], word: str) -> MorphemeAlignment:
    """Cached constructor; morphemes must be marker-free."""
    return MorphemeAlignment(morphemes, word)
