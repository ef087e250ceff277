"""Label distribution of a fixed word list across BPE vocabulary sizes.

For each checkpoint of a trained BPE model, every word in the study list is
tokenized with the merges valid at that checkpoint and classified; the
resulting per-label counts trace how tokenization quality evolves as the
vocabulary grows.
"""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .bpe import BpeModel
from .errors import InputError
from .labeller import LABELS, Labeller, SubwordSequence
from .lexicon import MorphLexicon
from .merges import MergeCache
from .vocab import Vocabulary

log = logging.getLogger(__name__)

CSV_COLUMNS = [
    "size",
    "vocab",
    "morph",
    "alien",
    "na",
    "vocab_frac",
    "morph_frac",
    "alien_frac",
    "na_frac",
]


@dataclass(frozen=True)
class DistributionRow:
    """Per-checkpoint label counts over the study word list."""

    size: int
    counts: tuple[int, int, int, int]  # vocab, morph, alien, na

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def fractions(self) -> tuple[float, float, float, float]:
        total = self.total
        if total == 0:
            return (0.0, 0.0, 0.0, 0.0)
        return tuple(c / total for c in self.counts)  # type: ignore[return-value]

    def as_csv_row(self) -> list:
        fr = self.fractions
        return [self.size, *self.counts, *(f"{x:.10g}" for x in fr)]


def _label_checkpoint(
    model: BpeModel,
    size: int,
    words: Sequence[str],
    lexicon: MorphLexicon,
    cache: MergeCache,
    token_state: dict[str, list[str]] | None = None,
) -> DistributionRow:
    """One distribution row.  ``token_state`` carries each word's tokens
    forward between ascending checkpoints (merge lists are nested, so
    resuming the replay equals tokenizing from scratch)."""
    vocabulary = Vocabulary(model.vocab_at(size))
    labeller = Labeller(lexicon, vocabulary, merge_cache=cache)
    tally = dict.fromkeys(LABELS, 0)
    for word in words:
        if token_state is None:
            tokens = model.tokenize(word, size)
        else:
            tokens = model.resume_tokenize(token_state[word], size)
            token_state[word] = tokens
        label = labeller.label(word, SubwordSequence(tuple(tokens)))
        tally[label.value] += 1
    return DistributionRow(
        size, (tally["vocab"], tally["morph"], tally["alien"], tally["na"])
    )


_worker_state: dict = {}


def _init_worker(model_path: str, lexicon_path: str, words: list[str]) -> None:
    model = BpeModel.load(model_path)
    lexicon = MorphLexicon.load(lexicon_path)
    _worker_state.update(
        model=model, lexicon=lexicon, words=words, cache=MergeCache(lexicon)
    )


def _run_checkpoint(size: int) -> DistributionRow:
    st = _worker_state
    return _label_checkpoint(st["model"], size, st["words"], st["lexicon"], st["cache"])


def sweep_stats(
    model: BpeModel,
    checkpoints: Iterable[int],
    words: Sequence[str],
    lexicon: MorphLexicon,
    threads: int = 1,
    model_path: str | Path | None = None,
    lexicon_path: str | Path | None = None,
) -> list[DistributionRow]:
    """One distribution row per checkpoint size, in ascending size order.

    With ``threads`` > 1 the checkpoints run in a process pool; this needs
    ``model_path`` and ``lexicon_path`` so workers can load their own
    copies.  Results are identical either way.
    """
    sizes = sorted(set(checkpoints))
    if not sizes:
        raise InputError("no checkpoints requested")
    if threads > 1 and model_path and lexicon_path:
        with ProcessPoolExecutor(
            max_workers=min(threads, len(sizes)),
            initializer=_init_worker,
            initargs=(str(model_path), str(lexicon_path), list(words)),
        ) as pool:
            return list(pool.map(_run_checkpoint, sizes))
    cache = MergeCache(lexicon)
    token_state = {w: model.tokenize(w, min(sizes)) for w in words}
    return [
        _label_checkpoint(model, s, words, lexicon, cache, token_state)
        for s in sizes
    ]


def write_distribution_csv(rows: Iterable[DistributionRow], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(row.as_csv_row())
