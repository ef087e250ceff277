"""Generation of the three OOV generalization challenge datasets.

* WaD — does a word match a definition?  Train negatives shuffle words and
  definitions between instances; dev/test negatives replace a definition's
  original word with a lexically similar word unseen during training.
* WaM — does a word contain the claimed morphology (inflection, derivation,
  compound)?  Every dev/test word contains at least one subword that is
  outside the shared frequent-subword list and never appears in training.
* WaW — are two words semantically related?  Negative pairs are verified
  absent from the relation pool; dev/test words never occur in training.

All sampling goes through one seeded Mersenne Twister (`random.Random`),
so identical seeds and inputs reproduce byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import logging
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from . import __version__
from .alignment import edit_distance
from .errors import FormatError, InputError

log = logging.getLogger(__name__)

TASKS = ("WaD", "WaM", "WaW")
SPLITS = ("train", "dev", "test")
MORPH_CATEGORIES = ("inflection", "derivation", "compound")

DEFAULT_SIZES = {
    "WaD": (10500, 1500, 3000),
    "WaM": (5400, 900, 1800),
    "WaW": (5389, 582, 1133),
}
DEFAULT_SHARED_SUBWORDS = 5000
DEFAULT_HELD_FRACTION = 0.4
NEGATIVE_RETRIES = 1000


@dataclass(frozen=True)
class ChallengeInstance:
    """One benchmark row; ``inputs`` holds the task-specific input fields."""

    id: str
    task: str
    split: str
    inputs: tuple[tuple[str, str], ...]  # field name -> value, fixed order
    label: bool
    provenance: str | None = None

    def to_json(self) -> str:
        obj = {"id": self.id, "task": self.task, "split": self.split}
        obj.update(dict(self.inputs))
        obj["label"] = self.label
        obj["provenance"] = self.provenance
        return canonical_json(obj)


def canonical_json(obj) -> str:
    """The toolkit's canonical JSON serialization (stable byte-for-byte)."""
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# input loaders

def load_sense_dump(path: str | Path) -> dict[str, list[str]]:
    """TSV of ``word<TAB>definition`` rows into word -> definitions."""
    senses: dict[str, list[str]] = {}
    for line_no, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) < 2 or not parts[0] or not parts[1]:
            raise FormatError(f"{path}:{line_no}: expected word<TAB>definition")
        senses.setdefault(parts[0], []).append(parts[1])
    if not senses:
        raise InputError(f"{path}: empty sense dump")
    return senses


def load_morph_dump(path: str | Path) -> dict[str, str]:
    """TSV of ``word<TAB>category`` rows (category per MORPH_CATEGORIES)."""
    out: dict[str, str] = {}
    for line_no, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) < 2 or parts[1] not in MORPH_CATEGORIES:
            raise FormatError(
                f"{path}:{line_no}: expected word<TAB>{{{'|'.join(MORPH_CATEGORIES)}}}"
            )
        out[parts[0]] = parts[1]
    if not out:
        raise InputError(f"{path}: empty morphology dump")
    return out


def load_tokenizations(path: str | Path) -> dict[str, tuple[str, ...]]:
    """JSONL of ``{"word": ..., "subwords": [...]}`` rows."""
    out: dict[str, tuple[str, ...]] = {}
    for line_no, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
            out[row["word"]] = tuple(row["subwords"])
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise FormatError(f"{path}:{line_no}: bad tokenization row: {exc}") from exc
    return out


def load_subword_ranks(path: str | Path) -> list[str]:
    """Token-per-line file ordered by descending frequency."""
    return [
        line.split("\t")[0]
        for line in Path(path).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]


def load_word_frequencies(path: str | Path) -> dict[str, int]:
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            word, _, count = line.partition("\t")
            out[word] = int(count) if count else 0
    return out


class RelationPool:
    """Unordered word-pair pool keyed by relation type."""

    def __init__(self, rows: Iterable[tuple[str, str, str]]):
        self.rows: list[tuple[str, str, str]] = []
        self._pairs: set[frozenset] = set()
        words: set[str] = set()
        for a, b, rel in rows:
            if a == b:
                continue
            self.rows.append((a, b, rel))
            self._pairs.add(frozenset((a, b)))
            words.add(a)
            words.add(b)
        self.words = sorted(words)

    def __len__(self) -> int:
        return len(self.rows)

    def contains(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self._pairs

    @classmethod
    def load(cls, path: str | Path) -> "RelationPool":
        rows = []
        for line_no, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), start=1
        ):
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) < 3:
                raise FormatError(f"{path}:{line_no}: expected a<TAB>b<TAB>relation")
            rows.append((parts[0], parts[1], parts[2]))
        if not rows:
            raise InputError(f"{path}: empty relation pool")
        return cls(rows)


# ---------------------------------------------------------------------------
# helpers

def _split_counts(size: int) -> tuple[int, int]:
    """(positives, negatives) with counts differing by at most one."""
    pos = (size + 1) // 2
    return pos, size - pos


def _pick_pairs(
    words: Sequence[str],
    senses: Mapping[str, list[str]],
    count: int,
    rng: random.Random,
) -> list[tuple[str, str]]:
    """Up to ``count`` (word, definition) pairs, at most one definition per
    word per round so word variety is maximized."""
    queues = []
    for w in words:
        defs = list(senses[w])
        rng.shuffle(defs)
        queues.append((w, defs))
    out: list[tuple[str, str]] = []
    progressed = True
    while len(out) < count and progressed:
        progressed = False
        for w, defs in queues:
            if defs:
                out.append((w, defs.pop()))
                progressed = True
                if len(out) == count:
                    break
    return out


def _char_counts(word: str) -> tuple[int, ...]:
    counts = [0] * 26
    for ch in word:
        i = ord(ch) - 97
        if 0 <= i < 26:
            counts[i] += 1
    return tuple(counts)


class _SimilarWordFinder:
    """Nearest-word lookup under normalized edit distance.

    Candidates are bucketed by length and scanned outward from the query's
    length, so the normalized-distance lower bound terminates the scan
    early; within a bucket a character-bag bound prunes candidates before
    the banded DP runs.  Ties break on higher corpus frequency, then on
    the lexicographically smaller word.
    """

    def __init__(self, words: Iterable[str], frequencies: Mapping[str, int] | None):
        self.by_len: dict[int, list[tuple[str, tuple[int, ...]]]] = {}
        for w in sorted(set(words)):
            self.by_len.setdefault(len(w), []).append((w, _char_counts(w)))
        self.freq = frequencies or {}

    def nearest(self, target: str, forbidden: Callable[[str], bool]) -> str | None:
        best: tuple[float, int, str] | None = None
        lt = len(target)
        tc = _char_counts(target)
        max_len = max(self.by_len) if self.by_len else 0
        for dl in range(0, max_len + lt + 1):
            lengths = {lt - dl, lt + dl} if dl else {lt}
            bound = dl / max(lt, lt + dl) if dl else 0.0
            # Strict: an equally distant candidate may still win on the
            # frequency tie-break.
            if best is not None and bound > best[0]:
                break
            for length in sorted(lengths):
                if length <= 0 or length not in self.by_len:
                    continue
                denom = max(lt, length)
                for cand, cc in self.by_len[length]:
                    if best is not None:
                        # Bag bound: the larger one-sided character surplus
                        # lower-bounds the edit distance.
                        pos = neg = 0
                        for x, y in zip(tc, cc):
                            d = x - y
                            if d > 0:
                                pos += d
                            else:
                                neg -= d
                        if max(pos, neg) / denom > best[0]:
                            continue
                    if cand == target or forbidden(cand):
                        continue
                    limit = None
                    if best is not None:
                        limit = int(best[0] * denom) + 1
                    dist = edit_distance(target, cand, limit=limit)
                    norm = dist / denom
                    key = (norm, -self.freq.get(cand, 0), cand)
                    if best is None or key < best:
                        best = key
        return best[2] if best else None


def _checksum(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


# ---------------------------------------------------------------------------
# WaD

def gen_wad(
    senses: Mapping[str, list[str]],
    sizes: tuple[int, int, int] = DEFAULT_SIZES["WaD"],
    seed: int = 0,
    word_frequencies: Mapping[str, int] | None = None,
    prefilter: Callable[[str, str], bool] | None = None,
    held_fraction: float = DEFAULT_HELD_FRACTION,
) -> list[ChallengeInstance]:
    """Word-vs-definition instances with covariate-shifted dev/test splits."""
    rng = random.Random(seed)
    if prefilter is not None:
        senses = {
            w: [d for d in defs if prefilter(w, d)] for w, defs in senses.items()
        }
        senses = {w: defs for w, defs in senses.items() if defs}
    words = sorted(senses)
    if len(words) < 10:
        raise InputError("sense dump too small to generate WaD")
    shuffled = words[:]
    rng.shuffle(shuffled)
    n_held = max(2, int(len(shuffled) * held_fraction))
    held_words = shuffled[:n_held]
    train_pool = shuffled[n_held:]

    out: list[ChallengeInstance] = []

    def add(split, word, definition, label, provenance=None):
        out.append(
            ChallengeInstance(
                id="",
                task="WaD",
                split=split,
                inputs=(("word", word), ("definition", definition)),
                label=label,
                provenance=provenance,
            )
        )

    # ---- train: positives plus shuffled negatives over the same pairs
    n_pos, n_neg = _split_counts(sizes[0])
    train_pairs = _pick_pairs(train_pool, senses, n_pos, rng)
    if len(train_pairs) < n_pos:
        log.warning(
            "WaD train shrunk: %d positives available of %d requested",
            len(train_pairs),
            n_pos,
        )
        n_pos = len(train_pairs)
        n_neg = min(n_neg, n_pos)
    for w, d in train_pairs[:n_pos]:
        add("train", w, d, True)
    perm = list(range(len(train_pairs)))
    rng.shuffle(perm)
    made = 0
    for i in range(len(train_pairs)):
        if made == n_neg:
            break
        w = train_pairs[i][0]
        j = perm[i]
        tries = 0
        while (
            train_pairs[j][0] == w or train_pairs[j][1] in senses.get(w, ())
        ) and tries < NEGATIVE_RETRIES:
            j = rng.randrange(len(train_pairs))
            tries += 1
        if tries == NEGATIVE_RETRIES:
            continue
        orig_word, definition = train_pairs[j]
        add("train", w, definition, False, provenance=orig_word)
        made += 1

    # ---- dev/test: unseen words; negatives use lexically similar words
    train_word_set = {w for w, _ in train_pairs}
    finder = _SimilarWordFinder(held_words, word_frequencies)
    remaining_held = held_words[:]
    for split, size in (("dev", sizes[1]), ("test", sizes[2])):
        n_pos, n_neg = _split_counts(size)
        need = n_pos + n_neg
        src = _pick_pairs(remaining_held, senses, need, rng)
        if len(src) < need:
            log.warning(
                "WaD %s shrunk: %d source pairs available of %d requested",
                split,
                len(src),
                need,
            )
            n_pos = min(n_pos, (len(src) + 1) // 2)
            n_neg = len(src) - n_pos
        used_words = {w for w, _ in src}
        remaining_held = [w for w in remaining_held if w not in used_words]
        for w, d in src[:n_pos]:
            add(split, w, d, True)
        for orig, definition in src[n_pos:n_pos + n_neg]:
            similar = finder.nearest(
                orig,
                forbidden=lambda c: (
                    c in train_word_set or definition in senses.get(c, ())
                ),
            )
            if similar is None:
                log.warning("WaD %s: no similar word for %r, instance skipped", split, orig)
                continue
            add(split, similar, definition, False, provenance=orig)

    return _assign_ids(out)


# ---------------------------------------------------------------------------
# WaM

def _cell_targets(size: int) -> dict[tuple[str, bool], int]:
    """Instance counts per (category, label) cell, as even as possible."""
    cells = [(c, lab) for c in MORPH_CATEGORIES for lab in (True, False)]
    base, rem = divmod(size, len(cells))
    return {cell: base + (1 if i < rem else 0) for i, cell in enumerate(cells)}


def gen_wam(
    morph: Mapping[str, str],
    tokenizations: Mapping[str, Sequence[str]],
    subword_ranks: Sequence[str],
    sizes: tuple[int, int, int] = DEFAULT_SIZES["WaM"],
    seed: int = 0,
    shared_top: int = DEFAULT_SHARED_SUBWORDS,
) -> list[ChallengeInstance]:
    """Word-vs-morphology instances under the unseen-subword constraint."""
    rng = random.Random(seed)
    shared = set(subword_ranks[:shared_top])
    by_cat: dict[str, list[str]] = {c: [] for c in MORPH_CATEGORIES}
    for w in sorted(morph):
        if w in tokenizations:
            by_cat[morph[w]].append(w)
    for c in MORPH_CATEGORIES:
        rng.shuffle(by_cat[c])

    out: list[ChallengeInstance] = []
    train_subwords: set[str] = set()

    def add(split, word, category, label):
        out.append(
            ChallengeInstance(
                id="",
                task="WaM",
                split=split,
                inputs=(("word", word), ("morphology", category)),
                label=label,
                provenance=morph[word] if not label else None,
            )
        )

    def pop_word(cat: str, eligible: Callable[[str], bool] | None) -> str | None:
        lst = by_cat[cat]
        for idx in range(len(lst) - 1, -1, -1):
            w = lst[idx]
            if eligible is None or eligible(w):
                del lst[idx]
                return w
        return None

    def fill_split(split: str, size: int, eligible) -> None:
        targets = _cell_targets(size)
        # Shrink all cells evenly if some cell cannot be filled.
        avail = {}
        for (cat, label), want in targets.items():
            pool_cats = [cat] if label else [c for c in MORPH_CATEGORIES if c != cat]
            have = sum(
                sum(1 for w in by_cat[c] if eligible is None or eligible(w))
                for c in pool_cats
            )
            avail[(cat, label)] = have
        floor = min(
            min(avail[(c, True)] for c in MORPH_CATEGORIES),
            min(avail[(c, False)] // 2 for c in MORPH_CATEGORIES),
        )
        scale_needed = any(avail[cell] < want for cell, want in targets.items())
        if scale_needed:
            log.warning(
                "WaM %s shrunk: balancing cells to %d instances each", split, floor
            )
            targets = {cell: min(want, floor) for cell, want in targets.items()}
        for cat in MORPH_CATEGORIES:
            made = 0
            for _ in range(targets[(cat, True)]):
                w = pop_word(cat, eligible)
                if w is None:
                    break
                add(split, w, cat, True)
                made += 1
                if split == "train":
                    train_subwords.update(tokenizations[w])
            if made < targets[(cat, True)]:
                log.warning("WaM %s (%s, true) cell short: %d of %d",
                            split, cat, made, targets[(cat, True)])
        for cat in MORPH_CATEGORIES:
            others = [c for c in MORPH_CATEGORIES if c != cat]
            made = 0
            for _ in range(targets[(cat, False)]):
                src = rng.choice(others)
                w = pop_word(src, eligible) or pop_word(
                    others[1 - others.index(src)], eligible
                )
                if w is None:
                    break
                add(split, w, cat, False)
                made += 1
                if split == "train":
                    train_subwords.update(tokenizations[w])
            if made < targets[(cat, False)]:
                log.warning("WaM %s (%s, false) cell short: %d of %d",
                            split, cat, made, targets[(cat, False)])

    fill_split("train", sizes[0], None)

    def unseen_ok(w: str) -> bool:
        return any(
            s not in shared and s not in train_subwords for s in tokenizations[w]
        )

    fill_split("dev", sizes[1], unseen_ok)
    fill_split("test", sizes[2], unseen_ok)
    return _assign_ids(out)


# ---------------------------------------------------------------------------
# WaW

def gen_waw(
    pool: RelationPool,
    sizes: tuple[int, int, int] = DEFAULT_SIZES["WaW"],
    seed: int = 0,
    held_fraction: float = DEFAULT_HELD_FRACTION,
) -> list[ChallengeInstance]:
    """Word-pair relatedness instances; negatives verified absent from the pool."""
    rng = random.Random(seed)
    words = pool.words[:]
    rng.shuffle(words)
    n_held = max(4, int(len(words) * held_fraction))
    held = set(words[:n_held])
    held_list = sorted(held)
    train_list = sorted(set(words[n_held:]))

    train_rows = [r for r in pool.rows if r[0] not in held and r[1] not in held]
    held_rows = [r for r in pool.rows if r[0] in held and r[1] in held]
    rng.shuffle(train_rows)
    rng.shuffle(held_rows)

    out: list[ChallengeInstance] = []

    def add(split, a, b, label, provenance=None):
        out.append(
            ChallengeInstance(
                id="",
                task="WaW",
                split=split,
                inputs=(("word_a", a), ("word_b", b)),
                label=label,
                provenance=provenance,
            )
        )

    def sample_negative(word_list: list[str], emitted: set[frozenset]) -> tuple[str, str] | None:
        for _ in range(NEGATIVE_RETRIES):
            a = word_list[rng.randrange(len(word_list))]
            b = word_list[rng.randrange(len(word_list))]
            if a == b:
                continue
            key = frozenset((a, b))
            if key in emitted or pool.contains(a, b):
                continue
            emitted.add(key)
            return a, b
        return None

    held_cursor = 0
    for split, size, rows, word_list in (
        ("train", sizes[0], train_rows, train_list),
        ("dev", sizes[1], None, held_list),
        ("test", sizes[2], None, held_list),
    ):
        n_pos, n_neg = _split_counts(size)
        if rows is None:
            rows = held_rows[held_cursor:held_cursor + n_pos]
            held_cursor += n_pos
        else:
            rows = rows[:n_pos]
        if len(rows) < n_pos:
            log.warning(
                "WaW %s shrunk: %d positive pairs available of %d requested",
                split,
                len(rows),
                n_pos,
            )
            n_neg = min(n_neg, len(rows) + 1)
        for a, b, rel in rows:
            add(split, a, b, True, provenance=rel)
        emitted: set[frozenset] = set()
        for _ in range(n_neg):
            neg = sample_negative(word_list, emitted)
            if neg is None:
                log.warning("WaW %s: negative sampling exhausted retries", split)
                break
            add(split, neg[0], neg[1], False)

    return _assign_ids(out)


# ---------------------------------------------------------------------------
# output

def _assign_ids(instances: list[ChallengeInstance]) -> list[ChallengeInstance]:
    counters: dict[str, int] = {}
    out = []
    for inst in instances:
        key = f"{inst.task.lower()}-{inst.split}"
        i = counters.get(key, 0)
        counters[key] = i + 1
        out.append(
            ChallengeInstance(
                id=f"{key}-{i:05d}",
                task=inst.task,
                split=inst.split,
                inputs=inst.inputs,
                label=inst.label,
                provenance=inst.provenance,
            )
        )
    return out


def write_challenge_files(
    instances: Sequence[ChallengeInstance],
    out_dir: str | Path,
    seed: int,
    sizes: Sequence[int],
    input_paths: Mapping[str, str | Path] | None = None,
) -> list[Path]:
    """One JSONL per split plus a manifest with seed, sizes and checksums."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if not instances:
        raise InputError("no instances to write")
    task = instances[0].task
    written = []
    for split in SPLITS:
        rows = [inst for inst in instances if inst.split == split]
        path = out_dir / f"{task.lower()}-{split}.jsonl"
        with open(path, "w", encoding="utf-8") as fh:
            for inst in rows:
                fh.write(inst.to_json() + "\n")
        written.append(path)
    manifest = {
        "format": "morphtok-challenge-manifest",
        "version": 1,
        "task": task,
        "tool_version": __version__,
        "seed": seed,
        "sizes": list(sizes),
        "counts": {
            split: sum(1 for i in instances if i.split == split) for split in SPLITS
        },
        "inputs": {
            name: _checksum(path) for name, path in (input_paths or {}).items()
        },
    }
    manifest_path = out_dir / f"{task.lower()}-manifest.json"
    manifest_path.write_text(
        canonical_json(manifest) + "\n", encoding="utf-8"
    )
    written.append(manifest_path)
    return written
