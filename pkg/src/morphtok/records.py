"""Parsing of morphological segmentation records from TSV files.

The repository's interchange format uses three tab-separated files:

* inflections.tsv  — ``word<TAB>base<TAB>affix[<TAB>features]``
* derivations.tsv  — same columns as inflections.tsv
* compounds.tsv    — ``word<TAB>part part part ...`` (space-joined parts)

Affixes may carry a leading or trailing hyphen ("-ed"); hyphens are stripped.
A leading word-initial marker ("_" or the sentencepiece low line) on any
field is tolerated and stripped.  Malformed lines are collected into a
rejects report instead of being silently dropped.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import InputError

log = logging.getLogger(__name__)

KINDS = ("inflection", "derivation", "compound")
_KIND_ALIASES = {
    "infl": "inflection",
    "inflection": "inflection",
    "deri": "derivation",
    "derivation": "derivation",
    "cmpd": "compound",
    "compound": "compound",
}

FORMATS = ("unimorph-tsv", "compound-tsv")


@dataclass(frozen=True)
class SegmentationRecord:
    """One morphological analysis step for a surface word."""

    surface: str
    kind: str  # inflection | derivation | compound
    base: str  # empty for compounds
    parts: tuple[str, ...]  # single affix, or >=2 compound parts
    features: str = ""

    def __post_init__(self):
        if not self.surface:
            raise ValueError("record surface word is empty")
        if self.kind not in KINDS:
            raise ValueError(f"unknown record kind {self.kind!r}")
        if self.kind == "compound":
            if self.base or len(self.parts) < 2:
                raise ValueError("compound records need >=2 parts and no base")
        else:
            if not self.base or len(self.parts) != 1:
                raise ValueError(f"{self.kind} records need a base and one affix")


@dataclass
class RejectEntry:
    path: str
    line_no: int
    reason: str
    raw: str


@dataclass
class ParseResult:
    records: list[SegmentationRecord] = field(default_factory=list)
    rejects: list[RejectEntry] = field(default_factory=list)


def _clean_unit(s: str) -> str:
    return s.strip().strip("-").lstrip("_").lstrip("▁")


def _parse_unimorph_line(fields: list[str], kind: str) -> SegmentationRecord:
    if len(fields) < 3:
        raise ValueError(f"expected >=3 tab-separated columns, got {len(fields)}")
    surface = _clean_unit(fields[0])
    base = _clean_unit(fields[1])
    affix = _clean_unit(fields[2])
    features = fields[3].strip() if len(fields) > 3 else ""
    if not surface or not base or not affix:
        raise ValueError("empty surface/base/affix column")
    return SegmentationRecord(surface, kind, base, (affix,), features)


def _parse_compound_line(fields: list[str]) -> SegmentationRecord:
    if len(fields) < 2:
        raise ValueError(f"expected 2 tab-separated columns, got {len(fields)}")
    surface = _clean_unit(fields[0])
    parts = tuple(_clean_unit(p) for p in fields[1].split() if _clean_unit(p))
    features = fields[2].strip() if len(fields) > 2 else ""
    if not surface:
        raise ValueError("empty surface column")
    if len(parts) < 2:
        raise ValueError("compound needs >=2 parts")
    return SegmentationRecord(surface, "compound", "", parts, features)


def parse_records(
    paths: Iterable[str | Path],
    format: str,
    kind: str | None = None,
) -> ParseResult:
    """Parse segmentation records from one or more TSV files.

    ``format`` is "unimorph-tsv" (needs ``kind`` = inflection|derivation)
    or "compound-tsv".  Unreadable files raise; malformed lines become
    reject entries.
    """
    if format not in FORMATS:
        raise InputError(f"unknown record format {format!r}")
    if format == "unimorph-tsv":
        if kind is None or _KIND_ALIASES.get(kind) not in ("inflection", "derivation"):
            raise InputError("unimorph-tsv needs kind=inflection or kind=derivation")
        kind = _KIND_ALIASES[kind]
    result = ParseResult()
    for path in paths:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from exc
        for line_no, line in enumerate(text.splitlines(), start=1):
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.rstrip("\n").split("\t")
            try:
                if format == "unimorph-tsv":
                    rec = _parse_unimorph_line(fields, kind)
                else:
                    rec = _parse_compound_line(fields)
            except ValueError as exc:
                log.warning("%s:%d rejected: %s", path, line_no, exc)
                result.rejects.append(RejectEntry(str(path), line_no, str(exc), line))
                continue
            result.records.append(rec)
    return result


def write_reject_report(rejects: Iterable[RejectEntry], path: str | Path) -> None:
    """Write malformed-line entries as a CSV report."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["file", "line", "reason", "content"])
        for r in rejects:
            writer.writerow([r.path, r.line_no, r.reason, r.raw])
