"""Synthetic English-like morphology for stress tests and desk-scale runs.

Words are built by chaining suffixes onto random stems (or compounding two
stems) while applying the usual orthographic junction rules: silent-e
deletion, y->i rewriting, and consonant gemination.  Every generated word
comes with the segmentation records that produce it, so a lexicon built
from those records analyses the word exactly as constructed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from morphtok.records import SegmentationRecord

VOWELS = "aeiou"
CONSONANTS = "bcdfghjklmnprstvwz"

# (affix, kind); inflectional affixes end a chain.
DERIVATIONAL = ["er", "ness", "ly", "y", "al", "ize", "ise", "ate", "ment", "ful", "ish"]
INFLECTIONAL = ["ing", "ed", "s", "est"]


def make_stem(rng: random.Random, syllables: int | None = None) -> str:
    n = syllables if syllables is not None else rng.randint(1, 3)
    out = []
    for _ in range(n):
        out.append(rng.choice(CONSONANTS))
        out.append(rng.choice(VOWELS))
        if rng.random() < 0.4:
            out.append(rng.choice(CONSONANTS))
    stem = "".join(out)
    if rng.random() < 0.25:
        stem += "e"
    elif rng.random() < 0.15:
        stem += "y"
    return stem


def attach(base: str, affix: str, rng: random.Random) -> str:
    """Surface form of base+affix with junction orthography."""
    starts_vowel = affix[0] in VOWELS
    if base.endswith("e") and starts_vowel:
        return base[:-1] + affix
    if base.endswith("y") and (starts_vowel or affix in ("ness", "ly", "ful", "est", "s")):
        if affix == "s":
            return base[:-1] + "ies"
        return base[:-1] + "i" + affix
    if (
        starts_vowel
        and len(base) >= 2
        and base[-1] in CONSONANTS
        and base[-2] in VOWELS
        and rng.random() < 0.5
    ):
        return base + base[-1] + affix
    return base + affix


@dataclass
class SynthWord:
    surface: str
    morphemes: tuple[str, ...]  # canonical units, no marker
    records: list[SegmentationRecord] = field(default_factory=list)
    category: str = "derivation"  # outermost morphology kind


def gen_suffixed(rng: random.Random, depth: int | None = None) -> SynthWord:
    stem = make_stem(rng)
    if depth is None:
        depth = rng.randint(1, 4)
    surface = stem
    morphemes = [stem]
    records = []
    category = "derivation"
    for level in range(depth):
        last = level == depth - 1
        if last and rng.random() < 0.5:
            affix = rng.choice(INFLECTIONAL)
            kind = "inflection"
        else:
            affix = rng.choice(DERIVATIONAL)
            kind = "derivation"
        new_surface = attach(surface, affix, rng)
        records.append(
            SegmentationRecord(new_surface, kind, surface, (affix,), "")
        )
        surface = new_surface
        morphemes.append(affix)
        category = kind
    return SynthWord(surface, tuple(morphemes), records, category)


def gen_compound(rng: random.Random) -> SynthWord:
    left = gen_suffixed(rng, depth=rng.randint(0, 1) or 1) if rng.random() < 0.3 else None
    parts: list[str] = []
    records: list[SegmentationRecord] = []
    if left is not None:
        parts.extend(left.morphemes)
        records.extend(left.records)
        left_surface = left.surface
    else:
        left_surface = make_stem(rng)
        parts.append(left_surface)
    right = make_stem(rng)
    parts.append(right)
    surface = left_surface + right
    if rng.random() < 0.5:
        affix = rng.choice(INFLECTIONAL)
        new_surface = attach(surface, affix, rng)
        records.append(SegmentationRecord(new_surface, "inflection", surface, (affix,), ""))
        records.append(SegmentationRecord(surface, "compound", "", tuple(parts), ""))
        return SynthWord(new_surface, tuple(parts) + (affix,), records, "compound")
    records.append(SegmentationRecord(surface, "compound", "", tuple(parts), ""))
    return SynthWord(surface, tuple(parts), records, "compound")


def gen_word(rng: random.Random, max_morphemes: int = 5) -> SynthWord:
    while True:
        if rng.random() < 0.25:
            word = gen_compound(rng)
        else:
            word = gen_suffixed(rng)
        if len(word.morphemes) <= max_morphemes and len(word.surface) >= 3:
            return word


def gen_word_set(rng: random.Random, count: int, max_morphemes: int = 5):
    """Distinct synthetic words; surfaces are unique across the set."""
    seen = set()
    out = []
    while len(out) < count:
        w = gen_word(rng, max_morphemes=max_morphemes)
        if w.surface in seen:
            continue
        seen.add(w.surface)
        out.append(w)
    return out


def random_split(rng: random.Random, word: str, n: int) -> list[str] | None:
    """Random partition of a word's characters into n non-empty parts,
    marker applied to the first part."""
    if n > len(word):
        return None
    cuts = sorted(rng.sample(range(1, len(word)), n - 1)) if n > 1 else []
    bounds = [0, *cuts, len(word)]
    parts = [word[a:b] for a, b in zip(bounds, bounds[1:])]
    parts[0] = "_" + parts[0]
    return parts


# ---------------------------------------------------------------------------
# challenge-dataset resources

_DEF_NOUNS = ["record", "surface", "motion", "vessel", "signal", "garment",
              "panel", "stream", "fabric", "ledger", "market", "meadow"]
_DEF_VERBS = ["recording", "folding", "carrying", "trading", "measuring",
              "guiding", "shaping", "binding", "marking", "sorting"]


def build_wad_senses(rng: random.Random, n_words: int) -> dict[str, list[str]]:
    """Sense dump with near-miss spelling neighbours for similarity search."""
    words = [w.surface for w in gen_word_set(rng, max(4, int(n_words * 0.75)))]
    # Spelling neighbours: perturb one character of an existing word.
    seen = set(words)
    while len(words) < n_words:
        base = words[rng.randrange(len(words))]
        pos = rng.randrange(len(base))
        variant = base[:pos] + rng.choice(CONSONANTS) + base[pos + 1:]
        if variant not in seen and len(variant) >= 3:
            seen.add(variant)
            words.append(variant)
    senses: dict[str, list[str]] = {}
    for i, w in enumerate(words):
        defs = []
        for j in range(rng.randint(1, 2)):
            defs.append(
                f"the act of {rng.choice(_DEF_VERBS)} "
                f"{rng.choice(_DEF_NOUNS)}s (sense {i}.{j})"
            )
        senses[w] = defs
    return senses


def build_wam_resources(
    rng: random.Random, per_cat: int
) -> tuple[dict[str, str], dict[str, list[str]], list[str]]:
    """Morphology dump, per-word tokenizations, and a subword rank list.

    Tokenizations reuse each word's own morphemes, so stems are rare
    subwords and suffixes are frequent ones.
    """
    cats = {"inflection": [], "derivation": [], "compound": []}
    seen = set()
    while min(len(v) for v in cats.values()) < per_cat:
        w = gen_word(rng)
        if w.surface in seen or len(w.morphemes) < 2:
            continue
        seen.add(w.surface)
        if len(cats[w.category]) < per_cat:
            cats[w.category].append(w)
    morph: dict[str, str] = {}
    tokenizations: dict[str, list[str]] = {}
    suffix_counts: dict[str, int] = {}
    for cat, ws in cats.items():
        for w in ws:
            morph[w.surface] = cat
            tokens = ["_" + w.morphemes[0]] + list(w.morphemes[1:])
            tokenizations[w.surface] = tokens
            for t in tokens[1:]:
                suffix_counts[t] = suffix_counts.get(t, 0) + 1
    # Frequent continuation subwords first; stems trail far down the list.
    ranks = sorted(suffix_counts, key=lambda t: (-suffix_counts[t], t))
    return morph, tokenizations, ranks


def build_waw_pool(
    rng: random.Random, n_words: int, n_pairs: int
) -> list[tuple[str, str, str]]:
    relations = ["sibling", "hypernym", "synonym", "antonym", "meronym", "substance"]
    words = [w.surface for w in gen_word_set(rng, n_words)]
    rows = []
    seen = set()
    while len(rows) < n_pairs:
        a = words[rng.randrange(len(words))]
        b = words[rng.randrange(len(words))]
        if a == b:
            continue
        key = frozenset((a, b))
        if key in seen:
            continue
        seen.add(key)
        rows.append((a, b, rng.choice(relations)))
    return rows


def write_wad_senses(senses: dict[str, list[str]], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for w in senses:
            for d in senses[w]:
                fh.write(f"{w}\t{d}\n")


def write_wam_resources(morph, tokenizations, ranks, morph_path, tok_path, ranks_path):
    import json

    with open(morph_path, "w", encoding="utf-8") as fh:
        for w, c in morph.items():
            fh.write(f"{w}\t{c}\n")
    with open(tok_path, "w", encoding="utf-8") as fh:
        for w, toks in tokenizations.items():
            fh.write(json.dumps({"word": w, "subwords": toks}) + "\n")
    with open(ranks_path, "w", encoding="utf-8") as fh:
        for t in ranks:
            fh.write(t + "\n")


def write_waw_pool(rows, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for a, b, rel in rows:
            fh.write(f"{a}\t{b}\t{rel}\n")


# ---------------------------------------------------------------------------
# desk-scale corpus

def build_desk_corpus(
    path,
    seed: int = 7,
    n_analyzable: int = 45000,
    n_bare: int = 3500,
    target_bytes: int = 52_000_000,
):
    """Write a Zipf-distributed synthetic text corpus of >= target_bytes.

    Returns the segmentation records covering the analyzable words (the
    bare words stay out of the lexicon and label as n/a).
    """
    import numpy as np

    rng = random.Random(seed)
    words = gen_word_set(rng, n_analyzable)
    records = [rec for w in words for rec in w.records]
    surfaces = {w.surface for w in words}
    bare = set()
    while len(bare) < n_bare:
        s = make_stem(rng) + make_stem(rng)
        if s not in surfaces:
            bare.add(s)
    vocabulary = [w.surface for w in words] + sorted(bare)
    rng.shuffle(vocabulary)
    ranks = np.arange(1, len(vocabulary) + 1, dtype=np.float64)
    weights = 1.0 / ranks**1.05
    weights /= weights.sum()
    arr = np.array(vocabulary, dtype=object)
    npgen = np.random.default_rng(seed)
    written = 0
    with open(path, "w", encoding="utf-8") as fh:
        while written < target_bytes:
            sample = npgen.choice(arr, size=120_000, p=weights)
            lines = [
                " ".join(sample[i:i + 12]) + "\n"
                for i in range(0, len(sample), 12)
            ]
            chunk = "".join(lines)
            fh.write(chunk)
            written += len(chunk.encode("utf-8"))
    return records
