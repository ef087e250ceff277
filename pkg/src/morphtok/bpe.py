"""Greedy byte-pair-encoding training over a word frequency table.

Words are rendered as symbol sequences with the word-initial marker fused
into the first character ("low" -> ``_l o w``), so learned symbols live in
the same canonical marker scheme as the rest of the toolkit.  Training
repeatedly merges the most frequent adjacent symbol pair; ties break on the
lexicographically smallest pair, which makes training deterministic across
platforms.

Checkpoints record the merge count at which the vocabulary reached each
multiple of the checkpoint step, so one trained model can replay any of its
intermediate vocabularies.  Checkpoint vocabularies are nested by
construction: later checkpoints only add symbols.
"""

from __future__ import annotations

import bisect
import heapq
import json
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .errors import FormatError, InputError

log = logging.getLogger(__name__)

MARKER = "_"
UNK = "<unk>"
BPE_FORMAT = "morphtok-bpe"
BPE_FORMAT_VERSION = 1

_WORD_RE = re.compile(r"[A-Za-z]+")


def word_symbols(word: str) -> list[str]:
    """Initial symbol sequence for a word: marker fused to the first char."""
    if not word:
        raise InputError("cannot tokenize an empty word")
    return [MARKER + word[0]] + list(word[1:])


def count_words(corpus_path: str | Path, lowercase: bool = False) -> Counter:
    """Word frequency table over a plain-text corpus (ASCII alphabetic runs)."""
    counts: Counter = Counter()
    with open(corpus_path, "r", encoding="utf-8", errors="replace") as fh:
        for line in fh:
            if lowercase:
                line = line.lower()
            counts.update(_WORD_RE.findall(line))
    return counts


@dataclass
class BpeModel:
    """A trained BPE model with vocabulary-size checkpoints."""

    alphabet: tuple[str, ...]
    merges: tuple[tuple[str, str], ...]
    results: tuple[str, ...]  # merged symbol per merge, parallel to merges
    growth: tuple[int, ...]  # vocabulary size after each merge
    checkpoints: tuple[tuple[int, int], ...]  # (vocab size, merge count)
    lowercase: bool = False
    unk: str = UNK
    _ranks: dict[tuple[str, str], int] = field(default_factory=dict, repr=False)
    _alpha_set: frozenset = field(default=frozenset(), repr=False)

    def __post_init__(self):
        self._ranks = {pair: i for i, pair in enumerate(self.merges)}
        self._alpha_set = frozenset(self.alphabet)

    @property
    def vocab_size(self) -> int:
        return self.growth[-1] if self.growth else len(self.alphabet)

    def merge_count_at(self, size: int) -> int:
        """Number of merges in effect for a vocabulary of ``size`` symbols."""
        if size < len(self.alphabet):
            raise InputError(
                f"size {size} is below the alphabet size {len(self.alphabet)}"
            )
        # growth is non-decreasing: every merge with resulting vocabulary
        # size <= size is in effect.
        return bisect.bisect_right(self.growth, size)

    def vocab_at(self, size: int | None = None) -> set[str]:
        """Symbol set at the given vocabulary size (full vocabulary if None)."""
        mc = len(self.merges) if size is None else self.merge_count_at(size)
        return set(self.alphabet) | set(self.results[:mc])

    def tokenize(self, word: str, size: int | None = None) -> list[str]:
        """Replay merges valid at the checkpoint size over one word.

        Characters outside the alphabet map to the unknown symbol and are
        flagged with a warning.
        """
        if self.lowercase:
            word = word.lower()
        seq = word_symbols(word)
        for i, sym in enumerate(seq):
            if sym not in self._alpha_set:
                log.warning("symbol %r of %r is outside the alphabet", sym, word)
                seq[i] = self.unk
        return self.resume_tokenize(seq, size)

    def resume_tokenize(self, seq: list[str], size: int | None = None) -> list[str]:
        """Continue a replay from an existing token sequence.

        Checkpoint merge lists are prefixes of each other, so tokens from a
        smaller checkpoint replayed with a larger one give exactly the
        from-scratch result; sweeps exploit this to tokenize incrementally.
        """
        mc = len(self.merges) if size is None else self.merge_count_at(size)
        while len(seq) > 1:
            best_rank = None
            best_pair = None
            for pair in zip(seq, seq[1:]):
                rank = self._ranks.get(pair)
                if rank is not None and rank < mc and (
                    best_rank is None or rank < best_rank
                ):
                    best_rank = rank
                    best_pair = pair
            if best_pair is None:
                break
            merged = best_pair[0] + best_pair[1]
            out = []
            i = 0
            while i < len(seq):
                if (
                    i + 1 < len(seq)
                    and seq[i] == best_pair[0]
                    and seq[i + 1] == best_pair[1]
                ):
                    out.append(merged)
                    i += 2
                else:
                    out.append(seq[i])
                    i += 1
            seq = out
        return seq

    def save(self, path: str | Path) -> None:
        payload = {
            "format": BPE_FORMAT,
            "version": BPE_FORMAT_VERSION,
            "alphabet": list(self.alphabet),
            "merges": [list(p) for p in self.merges],
            "growth": list(self.growth),
            "checkpoints": [list(c) for c in self.checkpoints],
            "lowercase": self.lowercase,
            "unk": self.unk,
        }
        Path(path).write_text(
            json.dumps(payload, ensure_ascii=False), encoding="utf-8"
        )

    @classmethod
    def load(cls, path: str | Path) -> "BpeModel":
        try:
            payload = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise FormatError(f"cannot load BPE model from {path}: {exc}") from exc
        if payload.get("format") != BPE_FORMAT:
            raise FormatError(f"{path} is not a {BPE_FORMAT} file")
        if payload.get("version") != BPE_FORMAT_VERSION:
            raise FormatError(f"unsupported BPE format version {payload.get('version')!r}")
        merges = tuple((a, b) for a, b in payload["merges"])
        return cls(
            alphabet=tuple(payload["alphabet"]),
            merges=merges,
            results=tuple(a + b for a, b in merges),
            growth=tuple(payload["growth"]),
            checkpoints=tuple((s, m) for s, m in payload["checkpoints"]),
            lowercase=payload.get("lowercase", False),
            unk=payload.get("unk", UNK),
        )


def train_bpe(
    counts: Mapping[str, int],
    max_size: int,
    checkpoint_step: int,
    lowercase: bool = False,
) -> BpeModel:
    """Train a BPE model over a word frequency table.

    Stops at ``max_size`` distinct symbols, or earlier with a warning when
    no pair is left to merge.  ``lowercase`` records that the table was
    lowercased, so tokenization lowercases its input the same way.
    """
    if not counts:
        raise InputError("empty word frequency table")
    if checkpoint_step < 1:
        raise InputError("checkpoint step must be >= 1")
    words = sorted(w for w in counts if w)
    seqs: list[list[str]] = [word_symbols(w) for w in words]
    freqs = [counts[w] for w in words]

    alphabet = sorted({sym for seq in seqs for sym in seq})
    if max_size <= len(alphabet):
        raise InputError(
            f"max-size {max_size} must exceed the alphabet size {len(alphabet)}"
        )

    stats: dict[tuple[str, str], int] = {}
    where: dict[tuple[str, str], set[int]] = {}
    for i, seq in enumerate(seqs):
        f = freqs[i]
        for pair in zip(seq, seq[1:]):
            stats[pair] = stats.get(pair, 0) + f
            where.setdefault(pair, set()).add(i)

    heap: list[tuple[int, tuple[str, str]]] = [
        (-c, p) for p, c in stats.items()
    ]
    heapq.heapify(heap)

    vocab = set(alphabet)
    merges: list[tuple[str, str]] = []
    results: list[str] = []
    growth: list[int] = []
    checkpoints: list[tuple[int, int]] = []
    next_cp = ((len(alphabet) // checkpoint_step) + 1) * checkpoint_step

    while len(vocab) < max_size:
        # Lazy max-heap: entries go stale when counts drop, so re-push the
        # current count on a mismatch instead of pushing on every decrement.
        pair = None
        while heap:
            negc, cand = heapq.heappop(heap)
            current = stats.get(cand, 0)
            if current == -negc and current > 0:
                pair = cand
                break
            if 0 < current < -negc:
                heapq.heappush(heap, (-current, cand))
        if pair is None:
            log.warning(
                "pair supply exhausted at vocabulary size %d (< max-size %d)",
                len(vocab),
                max_size,
            )
            break
        merged = pair[0] + pair[1]
        for i in sorted(where.get(pair, ())):
            seq = seqs[i]
            f = freqs[i]
            before = Counter(zip(seq, seq[1:]))
            out = []
            j = 0
            while j < len(seq):
                if j + 1 < len(seq) and seq[j] == pair[0] and seq[j + 1] == pair[1]:
                    out.append(merged)
                    j += 2
                else:
                    out.append(seq[j])
                    j += 1
            seqs[i] = out
            after = Counter(zip(out, out[1:]))
            for p in before.keys() | after.keys():
                delta = (after.get(p, 0) - before.get(p, 0)) * f
                if delta:
                    newc = stats.get(p, 0) + delta
                    if newc > 0:
                        stats[p] = newc
                        if delta > 0:
                            heapq.heappush(heap, (-newc, p))
                    else:
                        stats.pop(p, None)
                if after.get(p, 0):
                    where.setdefault(p, set()).add(i)
                elif before.get(p, 0):
                    ws = where.get(p)
                    if ws is not None:
                        ws.discard(i)
        where.pop(pair, None)
        stats.pop(pair, None)

        merges.append(pair)
        results.append(merged)
        vocab.add(merged)
        growth.append(len(vocab))
        while next_cp <= len(vocab):
            checkpoints.append((next_cp, len(merges)))
            next_cp += checkpoint_step

    return BpeModel(
        alphabet=tuple(alphabet),
        merges=tuple(merges),
        results=tuple(results),
        growth=tuple(growth),
        checkpoints=tuple(checkpoints),
        lowercase=lowercase,
    )


def top_words(counts: Mapping[str, int], n: int) -> list[str]:
    """The n most frequent words; count ties break lexicographically."""
    return [w for w, _ in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:n]]


def write_word_table(counts: Mapping[str, int], path: str | Path, n: int | None = None) -> None:
    words = top_words(counts, n if n is not None else len(counts))
    with open(path, "w", encoding="utf-8") as fh:
        for w in words:
            fh.write(f"{w}\t{counts[w]}\n")


def read_word_table(path: str | Path) -> list[tuple[str, int]]:
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) < 2:
            raise FormatError(f"bad word table line: {line!r}")
        out.append((parts[0], int(parts[1])))
    return out


def iter_word_list(source: Iterable[str] | str | Path) -> list[str]:
    if isinstance(source, (str, Path)):
        return [w for w, _ in read_word_table(source)]
    return list(source)
