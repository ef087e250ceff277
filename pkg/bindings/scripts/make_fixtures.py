#!/usr/bin/env python3
"""Regenerate the binding test fixtures.

Produces a synthetic lexicon snapshot, a vocabulary file, and a 1000+ row
parity fixture, plus the small worked-example fixtures. Deterministic, so
committed fixtures stay stable.
"""

import json
import random
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[2]
sys.path.insert(0, str(ROOT / "tests"))

from conftest import GPT_RAW_TOKENS, table2_records  # noqa: E402
from synth import gen_word_set, make_stem, random_split  # noqa: E402

from morphtok.lexicon import build_lexicon  # noqa: E402

FIXTURES = ROOT / "bindings" / "tests" / "fixtures"


def main():
    FIXTURES.mkdir(parents=True, exist_ok=True)
    rng = random.Random(123)
    words = gen_word_set(rng, 320)
    lexicon = build_lexicon([r for w in words for r in w.records])
    lexicon.save(FIXTURES / "lexicon.json")

    vocab_words = sorted(w.surface for w in words[:60])
    (FIXTURES / "vocab.txt").write_text(
        "".join(w + "\n" for w in vocab_words), encoding="utf-8"
    )

    rows = []
    for w in words:
        rows.append({"word": w.surface, "subwords": ["_" + w.surface]})
        for n in (2, 3):
            split = random_split(rng, w.surface, n)
            if split:
                rows.append({"word": w.surface, "subwords": split})
    surfaces = {w.surface for w in words}
    while len(rows) < 1000:
        bare = make_stem(rng) + make_stem(rng)
        if bare in surfaces:
            continue
        surfaces.add(bare)
        split = random_split(rng, bare, 2)
        rows.append({"word": bare, "subwords": split})
    with open(FIXTURES / "rows.jsonl", "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")

    # Worked-example fixtures: the showcase lexicon plus a byte-level vocab.
    table2 = build_lexicon(table2_records())
    table2.save(FIXTURES / "table2-lexicon.json")
    (FIXTURES / "table2-vocab.txt").write_text(
        "".join(t + "\n" for t in GPT_RAW_TOKENS), encoding="utf-8"
    )
    print(f"wrote fixtures for {len(rows)} parity rows to {FIXTURES}")


if __name__ == "__main__":
    main()
