"""Slicing model evaluations by tokenization quality.

The harness never runs a model.  It consumes a challenge dataset, a
per-word tokenization table, and one prediction file per seed, then reports
accuracy per labeller group: single-word groups for word+definition and
word+morphology style tasks, unordered label pairs for word-pair tasks.
It also generates adversarial text instances by swapping alien-tokenized
words for other alien-tokenized words, and exports stratified audit samples
for manual validation.
"""

from __future__ import annotations

import csv
import json
import logging
import random
import re
from dataclasses import dataclass, field
from pathlib import Path
from statistics import pstdev
from typing import Iterable, Mapping, Sequence

from .challenge import canonical_json
from .errors import FormatError, InputError
from .labeller import Labeller, SubwordSequence

log = logging.getLogger(__name__)

SINGLE_GROUPS = ("vocab", "morph", "alien", "na")
PAIR_GROUP_ORDER = ("vocab", "morph", "alien")
PAIR_GROUPS = (
    "vocab&vocab",
    "morph&morph",
    "alien&alien",
    "morph&alien",
    "vocab&alien",
    "vocab&morph",
    "na-involved",
)
_TOKEN_RE = re.compile(r"[A-Za-z]+")


def pair_group(label_a: str, label_b: str) -> str:
    """Unordered pair group name; any n/a label collapses to na-involved."""
    if "na" in (label_a, label_b):
        return "na-involved"
    a, b = sorted((label_a, label_b), key=PAIR_GROUP_ORDER.index)
    return f"{a}&{b}"


@dataclass(frozen=True)
class GroupAssignment:
    instance_id: str
    group: str


def load_dataset(path: str | Path) -> list[dict]:
    rows = []
    for line_no, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip():
            continue
        try:
            rows.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}:{line_no}: bad JSON row: {exc}") from exc
    return rows


def load_predictions(path: str | Path) -> dict[str, bool]:
    """CSV of ``id,pred`` rows; pred may be true/false/1/0."""
    preds: dict[str, bool] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        for row_no, row in enumerate(reader, start=1):
            if not row or (row_no == 1 and row[0].strip().lower() == "id"):
                continue
            if len(row) < 2:
                raise FormatError(f"{path}:{row_no}: expected id,pred")
            raw = row[1].strip().lower()
            if raw in ("true", "1"):
                value = True
            elif raw in ("false", "0"):
                value = False
            else:
                raise FormatError(f"{path}:{row_no}: bad prediction {row[1]!r}")
            preds[row[0].strip()] = value
    return preds


def _label_value(
    labeller: Labeller, word: str, tokenizations: Mapping[str, Sequence[str]]
) -> str | None:
    subwords = tokenizations.get(word)
    if subwords is None:
        return None
    return labeller.label(word, SubwordSequence(tuple(subwords))).value


def assign_groups(
    dataset: Sequence[Mapping],
    tokenizations: Mapping[str, Sequence[str]],
    labeller: Labeller,
) -> tuple[list[GroupAssignment], list[str]]:
    """Group per instance, plus the ids excluded for missing tokenizations.

    Word-pair instances (word_a/word_b fields) get unordered pair groups;
    anything with a single ``word`` field gets that word's label as group.
    """
    assignments: list[GroupAssignment] = []
    excluded: list[str] = []
    for row in dataset:
        iid = row["id"]
        if "word_a" in row and "word_b" in row:
            la = _label_value(labeller, row["word_a"], tokenizations)
            lb = _label_value(labeller, row["word_b"], tokenizations)
            if la is None or lb is None:
                excluded.append(iid)
                continue
            group = pair_group(la, lb)
        elif "word" in row:
            lv = _label_value(labeller, row["word"], tokenizations)
            if lv is None:
                excluded.append(iid)
                continue
            group = lv
        else:
            raise InputError(f"instance {iid!r} has no word fields")
        assignments.append(GroupAssignment(iid, group))
    if excluded:
        log.warning("%d instances excluded for missing tokenizations", len(excluded))
    return assignments, excluded


@dataclass
class GroupReport:
    count: int
    coverage_pct: float
    accuracy_mean: float
    accuracy_std: float
    per_seed: list[float] = field(default_factory=list)


@dataclass
class EvaluationReport:
    groups: dict[str, GroupReport]
    total: GroupReport
    excluded: int
    dataset_size: int
    metadata: dict

    def to_json(self) -> str:
        obj = {
            "metadata": self.metadata,
            "dataset_size": self.dataset_size,
            "excluded": self.excluded,
            "groups": {
                name: {
                    "count": g.count,
                    "coverage_pct": g.coverage_pct,
                    "accuracy_mean": g.accuracy_mean,
                    "accuracy_std": g.accuracy_std,
                    "per_seed": g.per_seed,
                }
                for name, g in self.groups.items()
            },
            "total": {
                "count": self.total.count,
                "coverage_pct": self.total.coverage_pct,
                "accuracy_mean": self.total.accuracy_mean,
                "accuracy_std": self.total.accuracy_std,
                "per_seed": self.total.per_seed,
            },
        }
        return canonical_json(obj)

    def to_markdown(self) -> str:
        """Groups as columns, coverage and accuracy as rows."""
        names = list(self.groups)
        header = "| | " + " | ".join(names + ["total"]) + " |"
        rule = "|---|" + "---:|" * (len(names) + 1)
        cols = [self.groups[n] for n in names] + [self.total]
        count_row = "| count | " + " | ".join(str(g.count) for g in cols) + " |"
        cov_row = (
            "| coverage % | "
            + " | ".join(f"{g.coverage_pct:.1f}" for g in cols)
            + " |"
        )
        acc_row = (
            "| accuracy | "
            + " | ".join(
                f"{g.accuracy_mean:.1f}±{g.accuracy_std:.1f}" for g in cols
            )
            + " |"
        )
        return "\n".join([header, rule, count_row, cov_row, acc_row]) + "\n"


def score(
    assignments: Sequence[GroupAssignment],
    gold: Mapping[str, bool],
    prediction_sets: Sequence[Mapping[str, bool]],
    excluded: Sequence[str] = (),
    metadata: Mapping | None = None,
) -> EvaluationReport:
    """Per-group accuracy mean and population std across seeds.

    Every prediction set must cover every instance id (grouped and
    excluded); an id mismatch is fatal and reports the difference.
    """
    if not prediction_sets:
        raise InputError("at least one prediction file is required")
    all_ids = [a.instance_id for a in assignments] + list(excluded)
    id_set = set(all_ids)
    for i, preds in enumerate(prediction_sets):
        missing = id_set - preds.keys()
        extra = preds.keys() - id_set
        if missing or extra:
            raise InputError(
                f"prediction set {i}: {len(missing)} missing ids "
                f"(e.g. {sorted(missing)[:3]}), {len(extra)} unknown ids "
                f"(e.g. {sorted(extra)[:3]})"
            )
    missing_gold = id_set - gold.keys()
    if missing_gold:
        raise InputError(f"{len(missing_gold)} ids lack gold labels")

    by_group: dict[str, list[str]] = {}
    for a in assignments:
        by_group.setdefault(a.group, []).append(a.instance_id)

    size = len(all_ids)

    def report_for(ids: list[str]) -> GroupReport:
        per_seed = []
        for preds in prediction_sets:
            correct = sum(1 for i in ids if preds[i] == gold[i])
            per_seed.append(100.0 * correct / len(ids) if ids else 0.0)
        mean = sum(per_seed) / len(per_seed)
        std = pstdev(per_seed) if len(per_seed) > 1 else 0.0
        return GroupReport(
            count=len(ids),
            coverage_pct=100.0 * len(ids) / size if size else 0.0,
            accuracy_mean=mean,
            accuracy_std=std,
            per_seed=per_seed,
        )

    group_order = [g for g in SINGLE_GROUPS + PAIR_GROUPS if g in by_group]
    groups = {g: report_for(by_group[g]) for g in group_order}
    total = report_for(all_ids)
    meta = dict(metadata or {})
    meta.setdefault("std", "population")
    meta.setdefault("seeds", len(prediction_sets))
    return EvaluationReport(
        groups=groups,
        total=total,
        excluded=len(excluded),
        dataset_size=size,
        metadata=meta,
    )


# ---------------------------------------------------------------------------
# adversarial swaps

@dataclass
class SwapResult:
    original: dict[str, str]
    adversarial: dict[str, str]
    substitutions: list[dict]


def _preserve_case(original: str, replacement: str) -> str:
    if original.isupper():
        return replacement.upper()
    if original[:1].isupper():
        return replacement[:1].upper() + replacement[1:]
    return replacement


def adversarial_swap(
    instances: Sequence[Mapping[str, str]],
    tokenizations: Mapping[str, Sequence[str]],
    labeller: Labeller,
    candidates: Sequence[str],
    seed: int = 0,
) -> tuple[list[SwapResult], int]:
    """Swap alien-tokenized words for other alien-tokenized candidates.

    A replacement must itself label alien under the same vocabulary, share
    the original tokenization's final subword, and differ from the original
    word.  Instances with no substitution are dropped; the second return
    value counts them.
    """
    rng = random.Random(seed)
    # Pre-index candidates by final subword, alien-labelled ones only.
    by_final: dict[str, list[str]] = {}
    for cand in candidates:
        subwords = tokenizations.get(cand)
        if not subwords or len(subwords) < 1:
            continue
        try:
            label = labeller.label(cand, SubwordSequence(tuple(subwords)))
        except InputError:
            continue
        if label.value == "alien":
            by_final.setdefault(subwords[-1], []).append(cand)

    results: list[SwapResult] = []
    dropped = 0
    for inst in instances:
        text_fields = {k: v for k, v in inst.items() if isinstance(v, str)}
        new_fields = {}
        subs: list[dict] = []
        for fieldname, text in text_fields.items():
            out = []
            last = 0
            for m in _TOKEN_RE.finditer(text):
                out.append(text[last:m.start()])
                token = m.group(0)
                replacement = token
                lower = token.lower()
                subwords = tokenizations.get(lower)
                if subwords:
                    try:
                        label = labeller.label(lower, SubwordSequence(tuple(subwords)))
                    except InputError:
                        label = None
                    if label is not None and label.value == "alien":
                        pool = [
                            c for c in by_final.get(subwords[-1], []) if c != lower
                        ]
                        if pool:
                            chosen = pool[rng.randrange(len(pool))]
                            replacement = _preserve_case(token, chosen)
                            subs.append(
                                {
                                    "field": fieldname,
                                    "original": token,
                                    "replacement": replacement,
                                    "final_subword": subwords[-1],
                                }
                            )
                        else:
                            log.info("no alien swap candidate for %r", lower)
                out.append(replacement)
                last = m.end()
            out.append(text[last:])
            new_fields[fieldname] = "".join(out)
        if not subs:
            dropped += 1
            continue
        results.append(SwapResult(text_fields, new_fields, subs))
    return results, dropped


def write_swaps(results: Iterable[SwapResult], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in results:
            fh.write(
                canonical_json(
                    {
                        "original": r.original,
                        "adversarial": r.adversarial,
                        "substitutions": r.substitutions,
                    }
                )
                + "\n"
            )


# ---------------------------------------------------------------------------
# audit samples

def audit_sample(
    labelled_rows: Sequence[Mapping],
    k: int,
    classes: Sequence[str] = ("morph", "alien"),
    seed: int = 0,
) -> list[Mapping]:
    """Stratified uniform sample of k rows per class, seeded.

    Underfull classes contribute everything they have, with a warning.
    """
    rng = random.Random(seed)
    out: list[Mapping] = []
    for cls in classes:
        rows = [r for r in labelled_rows if r.get("label") == cls]
        if len(rows) < k:
            log.warning("class %r has only %d rows (requested %d)", cls, len(rows), k)
            take = rows[:]
        else:
            idx = list(range(len(rows)))
            rng.shuffle(idx)
            take = [rows[i] for i in sorted(idx[:k])]
        out.extend(take)
    return out


def write_audit_tsv(rows: Iterable[Mapping], path: str | Path) -> None:
    """TSV with blank annotation columns for human validation."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerow(["word", "subwords", "label", "human_label", "notes"])
        for r in rows:
            writer.writerow(
                [r["word"], " ".join(r["subwords"]), r["label"], "", ""]
            )
