"""Morphological merge lists and candidate merge sequences.

Starting from a word's canonical morphemes, every contiguous morpheme group
can be merged into a single unit.  The merged form of a group is obtained in
one of two ways:

* retrieval: a lexicon record directly states base+affix -> word
  ("motive" + "ate" -> "motivate"), giving the canonical form;
* inference: absent such a record, the group's form is the surface substring
  it covers under the minimum-edit alignment ("ate" + "ed" inside
  "motivated" covers "ated").

Retrieval is preferred; inference is the fallback.  The *merge list* of a
word maps every contiguous unit n-gram (n >= 2) reachable this way to its
merged form, plus identity entries for the units themselves.

``enumerate_merges(word, n)`` produces every n-unit sequence obtained by
partitioning an analysis into n contiguous groups.  On top of the primary
(merge-list) forms, a non-initial group whose surface span is unambiguous
across all optimal alignments may contribute an *aligned* variant sequence;
this credits suffix-side orthographic alternations (``ize`` surfacing as
``iz`` in "theorizing") without crediting truncated stems.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .alignment import MorphemeAlignment, align
from .errors import MergeOverflowError
from .lexicon import MARKER, MorphemeSegmentation, MorphLexicon

log = logging.getLogger(__name__)


class ComposeError(ValueError):
    """A unit pair cannot be composed (degenerate alignment span)."""


def _strip(unit: str) -> str:
    return unit[len(MARKER):] if unit.startswith(MARKER) else unit


@dataclass(frozen=True)
class MergeCandidate:
    """One candidate n-unit merge sequence for a word.

    ``source`` is "retrieved" for all-primary sequences and "aligned" for
    sequences containing a surface-span variant.  ``spans`` gives each
    unit's morpheme range within the analysis.
    """

    units: tuple[str, ...]
    spans: tuple[tuple[int, int], ...]
    source: str


@dataclass
class MergeList:
    """Per-word map from unit n-grams (space-joined) to merged forms."""

    word: str
    entries: dict[str, str] = field(default_factory=dict)

    def non_identity_entries(self) -> dict[str, str]:
        return {k: v for k, v in self.entries.items() if " " in k}


class WordAnalysis:
    """Merge lattice over one analysis of one word.

    Unit positions are morpheme index ranges [a, b); the unit covering
    [0, b) carries the word-initial marker.
    """

    def __init__(self, segmentation: MorphemeSegmentation, lexicon: MorphLexicon):
        self.segmentation = segmentation
        self.word = segmentation.word
        self.lexicon = lexicon
        self.morphemes = segmentation.stripped
        self.k = len(self.morphemes)
        self.alignment: MorphemeAlignment = align(self.morphemes, self.word)
        self._forms: dict[tuple[int, int], str | None] = {}

    def _mark(self, form: str, a: int) -> str:
        return MARKER + form if a == 0 else form

    def span_surface(self, a: int, b: int) -> str:
        """Surface substring covered by morphemes [a, b), marker applied."""
        surf = self.alignment.span(a, b)
        return self._mark(surf, a) if surf else ""

    def span_is_unambiguous(self, a: int, b: int) -> bool:
        return self.alignment.span_is_unambiguous(a, b)

    def span_form(self, a: int, b: int) -> str | None:
        """Primary merged form of morphemes [a, b): retrieval first,
        aligned surface span as fallback.  None when neither exists."""
        key = (a, b)
        if key in self._forms:
            return self._forms[key]
        if b - a == 1:
            form: str | None = self._mark(self.morphemes[a], a)
        else:
            hits = []
            for m in range(a + 1, b):
                left = self.span_form(a, m)
                right = self.span_form(m, b)
                if left is None or right is None:
                    continue
                word = self.lexicon.retrieve(_strip(left), _strip(right))
                if word is not None:
                    hits.append(self._mark(word, a))
            if hits:
                form = min(hits)
            else:
                form = self.span_surface(a, b) or None
        self._forms[key] = form
        return form

    def compose_pair(self, left: str, right: str) -> str:
        """Merge two adjacent units of this word's lattice into one form.

        Retrieval path first; otherwise the surface span covered by the two
        units.  Raises ComposeError when the units are not adjacent in the
        lattice or the span is degenerate.
        """
        word = self.lexicon.retrieve(_strip(left), _strip(right))
        if word is not None:
            return self._mark(word, 0) if left.startswith(MARKER) else word
        for a in range(self.k):
            for m in range(a + 1, self.k):
                if self.span_form(a, m) != left:
                    continue
                for b in range(m + 1, self.k + 1):
                    if self.span_form(m, b) == right:
                        surf = self.span_surface(a, b)
                        if surf:
                            return surf
                        raise ComposeError(
                            f"empty span composing {left!r}+{right!r} in {self.word!r}"
                        )
        raise ComposeError(
            f"units {left!r}+{right!r} are not adjacent in the lattice of {self.word!r}"
        )

    def candidates(self, n: int) -> list[MergeCandidate]:
        """All n-unit merge sequences for this analysis (UM(w, n) entries)."""
        if n < 1 or n > self.k:
            return []
        out: list[MergeCandidate] = []
        seen: set[tuple[str, ...]] = set()

        def emit(units: tuple[str, ...], spans, source: str) -> None:
            if units not in seen:
                seen.add(units)
                out.append(MergeCandidate(units, spans, source))

        for cuts in combinations(range(1, self.k), n - 1):
            bounds = (0,) + cuts + (self.k,)
            spans = tuple(zip(bounds, bounds[1:]))
            forms = [self.span_form(a, b) for a, b in spans]
            if any(f is None for f in forms):
                continue
            primary = tuple(forms)  # type: ignore[arg-type]
            emit(primary, spans, "retrieved")
            # Aligned variants: one non-initial group at a time, only when
            # every optimal alignment agrees on that group's span.
            for gi in range(1, n):
                a, b = spans[gi]
                if not self.span_is_unambiguous(a, b):
                    continue
                surf = self.span_surface(a, b)
                if not surf or surf == primary[gi]:
                    continue
                variant = primary[:gi] + (surf,) + primary[gi + 1:]
                emit(variant, spans, "aligned")
        return out


def build_merge_list(
    word: str,
    segmentation: MorphemeSegmentation,
    lexicon: MorphLexicon,
) -> MergeList:
    """Build the word's morphological merge list to its fixed point.

    Every contiguous morpheme span is a unit; every way of writing a span as
    two or more adjacent sub-units becomes an entry mapping the unit n-gram
    to the span's merged form.  Unigram identity entries are included.
    """
    analysis = WordAnalysis(segmentation, lexicon)
    k = analysis.k
    guard = 4**k
    merge_list = MergeList(word)
    entries = merge_list.entries
    produced = 0
    for width in range(1, k + 1):
        for a in range(0, k - width + 1):
            b = a + width
            form = analysis.span_form(a, b)
            if form is None:
                log.warning(
                    "no composable form for morphemes %d..%d of %r", a, b, word
                )
                continue
            entries.setdefault(form, form)  # unigram identity
            for parts in _compositions(a, b):
                if len(parts) < 2:
                    continue
                unit_forms = [analysis.span_form(x, y) for x, y in parts]
                if any(f is None for f in unit_forms):
                    continue
                key = " ".join(unit_forms)  # type: ignore[arg-type]
                if key in entries and entries[key] != form:
                    log.debug(
                        "merge-list key collision for %r: %r vs %r",
                        key,
                        entries[key],
                        form,
                    )
                    continue
                entries[key] = form
                produced += 1
                if produced > guard:
                    raise MergeOverflowError(
                        f"merge list of {word!r} exceeded {guard} entries"
                    )
    return merge_list


def _compositions(a: int, b: int) -> Iterable[tuple[tuple[int, int], ...]]:
    """All ways to split [a, b) into contiguous non-empty parts."""
    for r in range(0, b - a):
        for cuts in combinations(range(a + 1, b), r):
            bounds = (a,) + cuts + (b,)
            yield tuple(zip(bounds, bounds[1:]))


class MergeCache:
    """Shared per-word candidate cache over an immutable lexicon."""

    def __init__(self, lexicon: MorphLexicon):
        self.lexicon = lexicon
        self._analyses: dict[str, tuple[WordAnalysis, ...]] = {}
        self._candidates: dict[tuple[str, int], tuple[tuple[str, ...], ...]] = {}

    def analyses(self, word: str) -> tuple[WordAnalysis, ...]:
        got = self._analyses.get(word)
        if got is None:
            got = tuple(
                WordAnalysis(seg, self.lexicon)
                for seg in self.lexicon.segmentations(word)
            )
            self._analyses[word] = got
        return got

    def candidate_units(self, word: str, n: int) -> tuple[tuple[str, ...], ...]:
        """Unit sequences of UM(word, n), unioned over all analyses."""
        key = (word, n)
        got = self._candidates.get(key)
        if got is None:
            seen: set[tuple[str, ...]] = set()
            ordered = []
            for analysis in self.analyses(word):
                for cand in analysis.candidates(n):
                    if cand.units not in seen:
                        seen.add(cand.units)
                        ordered.append(cand.units)
            got = tuple(ordered)
            self._candidates[key] = got
        return got


def enumerate_merges(
    word: str, n: int, lexicon: MorphLexicon, cache: MergeCache | None = None
) -> list[MergeCandidate]:
    """UM(word, n): all n-length morphological merge sequences of ``word``."""
    if cache is not None and cache.lexicon is lexicon:
        analyses: Iterable[WordAnalysis] = cache.analyses(word)
    else:
        analyses = tuple(
            WordAnalysis(seg, lexicon) for seg in lexicon.segmentations(word)
        )
    out: list[MergeCandidate] = []
    seen: set[tuple[str, ...]] = set()
    for analysis in analyses:
        for cand in analysis.candidates(n):
            if cand.units not in seen:
                seen.add(cand.units)
                out.append(cand)
    return out
