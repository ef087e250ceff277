"""Converters from upstream morphology dumps to the interchange TSVs.

Upstream column layouts vary between releases, so these adapters take the
column indices explicitly and write the toolkit's normalized three-file
format (see ``records``).  They are best-effort conveniences; the
interchange files remain the contract.

* Derivational databases typically ship rows like
  ``base<TAB>derived<TAB>base_pos<TAB>derived_pos<TAB>affix<TAB>strategy``;
  map them with ``convert_affix_table(..., word_col=1, base_col=0,
  affix_col=4)``.
* Inflectional tables ship ``lemma<TAB>form<TAB>features`` without an affix
  column; rows where the form extends the lemma are converted with the
  suffix inferred, others are rejected.
* Segmentation shared-task files ship ``word<TAB>seg1 @@seg2 @@seg3`` style
  rows; ``convert_segmentation_table`` rewrites them as compounds.
"""

from __future__ import annotations

import logging
from pathlib import Path

log = logging.getLogger(__name__)


def convert_affix_table(
    src: str | Path,
    dst: str | Path,
    word_col: int,
    base_col: int,
    affix_col: int,
    features_col: int | None = None,
) -> int:
    """Rewrite an upstream base/affix table as interchange unimorph-tsv."""
    written = 0
    with open(dst, "w", encoding="utf-8") as out:
        for line in Path(src).read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            cols = line.split("\t")
            try:
                word = cols[word_col].strip()
                base = cols[base_col].strip()
                affix = cols[affix_col].strip()
            except IndexError:
                log.warning("short row skipped: %r", line)
                continue
            features = (
                cols[features_col].strip()
                if features_col is not None and features_col < len(cols)
                else ""
            )
            if word and base and affix:
                out.write(f"{word}\t{base}\t{affix}\t{features}\n")
                written += 1
    return written


def convert_lemma_form_table(
    src: str | Path,
    dst: str | Path,
    lemma_col: int = 0,
    form_col: int = 1,
    features_col: int | None = 2,
) -> int:
    """Rewrite a lemma/form inflection table, inferring suffixal affixes.

    Only rows where the form is lemma plus a suffix (allowing one dropped
    final character of the lemma, as in "move"/"moving") convert cleanly;
    other rows are skipped with a warning count.
    """
    written = skipped = 0
    with open(dst, "w", encoding="utf-8") as out:
        for line in Path(src).read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            cols = line.split("\t")
            if len(cols) <= max(lemma_col, form_col):
                skipped += 1
                continue
            lemma, form = cols[lemma_col].strip(), cols[form_col].strip()
            features = (
                cols[features_col].strip()
                if features_col is not None and features_col < len(cols)
                else ""
            )
            affix = None
            if form.startswith(lemma) and len(form) > len(lemma):
                affix = form[len(lemma):]
            elif form.startswith(lemma[:-1]) and len(form) > len(lemma):
                affix = form[len(lemma) - 1:]
            if affix:
                out.write(f"{form}\t{lemma}\t{affix}\t{features}\n")
                written += 1
            else:
                skipped += 1
    if skipped:
        log.warning("%d rows had no recoverable suffix and were skipped", skipped)
    return written


def convert_segmentation_table(
    src: str | Path,
    dst: str | Path,
    word_col: int = 0,
    seg_col: int = 1,
    separator: str = " @@",
) -> int:
    """Rewrite a segmented-word table as interchange compound-tsv."""
    written = 0
    with open(dst, "w", encoding="utf-8") as out:
        for line in Path(src).read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            cols = line.split("\t")
            if len(cols) <= max(word_col, seg_col):
                log.warning("short row skipped: %r", line)
                continue
            word = cols[word_col].strip()
            parts = [
                p.strip("-")
                for p in cols[seg_col].replace(separator, " ").split()
                if p.strip("-")
            ]
            if word and len(parts) >= 2:
                out.write(f"{word}\t{' '.join(parts)}\n")
                written += 1
    return written
