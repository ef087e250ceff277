"""Expansion of segmentation records into a queryable morpheme lexicon.

Inflection and derivation records analyse a word one affix at a time
(``motivated <- motivate + ed``, ``motivate <- motive + ate``); the lexicon
expands such chains recursively down to the root, yielding the full canonical
segmentation ``_motive ate ed``.  Compound records arrive flat and their
parts are expanded further only when records exist for them.

A word may carry several records and therefore several analyses; all are
retained.  After construction the lexicon is immutable and safe for
concurrent readers.
"""

from __future__ import annotations

import gzip
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .errors import FormatError, InputError
from .records import SegmentationRecord

log = logging.getLogger(__name__)

MARKER = "_"
LEXICON_FORMAT = "morphtok-lexicon"
LEXICON_FORMAT_VERSION = 1

DEFAULT_DEPTH_CAP = 16

CASE_POLICIES = ("exact", "lower-fallback", "lower")


@dataclass(frozen=True)
class MorphemeSegmentation:
    """One full analysis of a word into canonical morphemes.

    The first morpheme carries the word-initial marker ("_jog"); the
    remaining ones are bare.  ``provenance`` lists the record kinds
    traversed during expansion, outermost first.
    """

    word: str
    morphemes: tuple[str, ...]
    provenance: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.morphemes:
            raise ValueError("segmentation has no morphemes")
        if not self.morphemes[0].startswith(MARKER) or self.morphemes[0] == MARKER:
            raise ValueError("first morpheme must carry the word-initial marker")
        if any(not m or m.startswith(MARKER) for m in self.morphemes[1:]):
            raise ValueError("only the first morpheme may carry the marker")

    @property
    def stripped(self) -> tuple[str, ...]:
        """Morphemes with the word-initial marker removed."""
        return (self.morphemes[0][len(MARKER):],) + self.morphemes[1:]


class RecordIndex:
    """Records grouped by surface word, plus the (base, affix) retrieval map."""

    def __init__(self, records: Iterable[SegmentationRecord]):
        self.by_word: dict[str, list[SegmentationRecord]] = {}
        self.by_pair: dict[tuple[str, str], str] = {}
        for rec in records:
            self.by_word.setdefault(rec.surface, []).append(rec)
            if rec.kind in ("inflection", "derivation"):
                key = (rec.base, rec.parts[0])
                prev = self.by_pair.get(key)
                # Collisions are rare; keep the lexicographically smallest
                # surface so retrieval stays deterministic.
                if prev is None or rec.surface < prev:
                    self.by_pair[key] = rec.surface

    def __contains__(self, word: str) -> bool:
        return word in self.by_word

    def words(self) -> Iterable[str]:
        return self.by_word.keys()


class _PathAborted(Exception):
    """An expansion path hit a cycle or the depth cap; drop it entirely."""


def resolve_segmentation(
    word: str,
    index: RecordIndex,
    depth_cap: int = DEFAULT_DEPTH_CAP,
) -> list[MorphemeSegmentation]:
    """All fully expanded morpheme segmentations for ``word``.

    Returns an empty list when no record covers the word or when every
    analysis path dies on a cycle or the depth cap (each with a diagnostic;
    aborted paths are never silently truncated).
    """
    try:
        paths = _expand(word, index, depth_cap, visiting=(word,))
    except _PathAborted:
        return []
    results = [
        MorphemeSegmentation(word, (MARKER + morphs[0],) + morphs[1:], prov)
        for morphs, prov in paths
    ]
    # Deterministic order, duplicates collapsed.
    unique = {}
    for seg in results:
        unique.setdefault(seg.morphemes, seg)
    return [unique[k] for k in sorted(unique)]


def _expand(
    word: str,
    index: RecordIndex,
    depth_cap: int,
    visiting: tuple[str, ...],
) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
    """Expansion paths for ``word`` as (morphemes, provenance) pairs.

    Raises _PathAborted when the word has records but every path died.
    """
    if len(visiting) > depth_cap:
        log.warning("expansion of %r exceeded depth cap %d", word, depth_cap)
        raise _PathAborted(word)
    records = index.by_word.get(word, [])
    out: list[tuple[tuple[str, ...], tuple[str, ...]]] = []
    aborted = False
    for rec in records:
        try:
            if rec.kind == "compound":
                combos: list[tuple[tuple[str, ...], tuple[str, ...]]] = [((), ())]
                for part in rec.parts:
                    part_options = _child(part, index, depth_cap, visiting)
                    combos = [
                        (m + pm, p + pp)
                        for (m, p) in combos
                        for (pm, pp) in part_options
                    ]
                out.extend((m, ("compound",) + p) for m, p in combos)
            else:
                for base_morphs, base_prov in _child(
                    rec.base, index, depth_cap, visiting
                ):
                    out.append((base_morphs + rec.parts, (rec.kind,) + base_prov))
        except _PathAborted:
            aborted = True
            continue
    if not out and aborted:
        raise _PathAborted(word)
    return out


def _child(word, index, depth_cap, visiting):
    """Expansion of a sub-unit: words without records are leaves."""
    if word not in index:
        return [((word,), ())]
    if word in visiting:
        log.warning("cycle detected at %r (chain %s); path aborted", word, visiting)
        raise _PathAborted(word)
    return _expand(word, index, depth_cap, visiting + (word,))


class MorphLexicon:
    """Immutable word -> segmentations map with a configurable case policy.

    Also carries the (base, affix) -> word retrieval pairs harvested from
    the records, which merge composition consults.
    """

    def __init__(
        self,
        entries: Mapping[str, Iterable[MorphemeSegmentation]],
        retrieval_pairs: Mapping[tuple[str, str], str] | None = None,
        case_policy: str = "lower-fallback",
    ):
        if case_policy not in CASE_POLICIES:
            raise InputError(f"unknown case policy {case_policy!r}")
        self.case_policy = case_policy
        self._entries: dict[str, tuple[MorphemeSegmentation, ...]] = {}
        for word, segs in entries.items():
            segs = tuple(segs)
            for seg in segs:
                if seg.word != word:
                    raise ValueError(
                        f"segmentation for {seg.word!r} stored under key {word!r}"
                    )
            if segs:
                self._entries[word] = segs
        self._pairs: dict[tuple[str, str], str] = dict(retrieval_pairs or {})

    def _key(self, word: str) -> str | None:
        if self.case_policy == "lower":
            word = word.lower()
        if word in self._entries:
            return word
        if self.case_policy == "lower-fallback" and word.lower() in self._entries:
            return word.lower()
        return None

    def __contains__(self, word: str) -> bool:
        return self._key(word) is not None

    def __len__(self) -> int:
        return len(self._entries)

    def words(self) -> Iterable[str]:
        return self._entries.keys()

    def segmentations(self, word: str) -> tuple[MorphemeSegmentation, ...]:
        key = self._key(word)
        if key is None:
            return ()
        return self._entries[key]

    def retrieve(self, base: str, affix: str) -> str | None:
        """Surface word recorded for base+affix, if any."""
        return self._pairs.get((base, affix))

    def save(self, path: str | Path) -> None:
        """Write a JSON snapshot (gzipped when the path ends in .gz)."""
        payload = {
            "format": LEXICON_FORMAT,
            "version": LEXICON_FORMAT_VERSION,
            "case_policy": self.case_policy,
            "entries": {
                word: [
                    {"morphemes": list(s.morphemes), "provenance": list(s.provenance)}
                    for s in segs
                ]
                for word, segs in sorted(self._entries.items())
            },
            "retrieval_pairs": [
                [base, affix, word]
                for (base, affix), word in sorted(self._pairs.items())
            ],
        }
        data = json.dumps(payload, ensure_ascii=False, sort_keys=True)
        path = Path(path)
        if path.suffix == ".gz":
            with gzip.open(path, "wt", encoding="utf-8") as fh:
                fh.write(data)
        else:
            path.write_text(data, encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "MorphLexicon":
        path = Path(path)
        try:
            if path.suffix == ".gz":
                with gzip.open(path, "rt", encoding="utf-8") as fh:
                    payload = json.load(fh)
            else:
                payload = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise FormatError(f"cannot load lexicon from {path}: {exc}") from exc
        if payload.get("format") != LEXICON_FORMAT:
            raise FormatError(f"{path} is not a {LEXICON_FORMAT} snapshot")
        if payload.get("version") != LEXICON_FORMAT_VERSION:
            raise FormatError(
                f"unsupported lexicon format version {payload.get('version')!r}"
            )
        entries = {
            word: [
                MorphemeSegmentation(
                    word, tuple(s["morphemes"]), tuple(s.get("provenance", ()))
                )
                for s in segs
            ]
            for word, segs in payload["entries"].items()
        }
        pairs = {
            (base, affix): word
            for base, affix, word in payload.get("retrieval_pairs", [])
        }
        return cls(
            entries,
            retrieval_pairs=pairs,
            case_policy=payload.get("case_policy", "lower-fallback"),
        )


def build_lexicon(
    records: Iterable[SegmentationRecord],
    case_policy: str = "lower-fallback",
    depth_cap: int = DEFAULT_DEPTH_CAP,
) -> MorphLexicon:
    """Expand every recorded word into an immutable lexicon."""
    index = RecordIndex(records)
    entries: dict[str, list[MorphemeSegmentation]] = {}
    for word in sorted(index.words()):
        segs = resolve_segmentation(word, index, depth_cap=depth_cap)
        if segs:
            entries[word] = segs
    return MorphLexicon(entries, retrieval_pairs=index.by_pair, case_policy=case_policy)
