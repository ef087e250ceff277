"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s``.  The BPE sweep test
synthesizes a >=50 MB corpus and takes a few minutes; everything else is
fast.
"""

import random
import time

import challenge_checker as checker
from morphtok.bpe import count_words, top_words, train_bpe
from morphtok.challenge import RelationPool, gen_wad, gen_wam, gen_waw, write_challenge_files
from morphtok.harness import (
    adversarial_swap,
    assign_groups,
    audit_sample,
    score,
    write_audit_tsv,
    write_swaps,
)
from morphtok.labeller import Labeller, SubwordSequence
from morphtok.lexicon import build_lexicon
from morphtok.merges import WordAnalysis, build_merge_list
from morphtok.records import SegmentationRecord
from morphtok.sweep import sweep_stats
from morphtok.vocab import Vocabulary
from oracle_merges import OracleAnalysis, oracle_candidates, oracle_mu
from synth import (
    build_desk_corpus,
    build_wad_senses,
    build_wam_resources,
    build_waw_pool,
    gen_word_set,
    random_split,
    write_wad_senses,
    write_wam_resources,
    write_waw_pool,
)

R = SegmentationRecord


class _Timer:
    def __init__(self, name, budget_s):
        self.name = name
        self.budget_s = budget_s

    def __enter__(self):
        self.start = time.monotonic()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.monotonic() - self.start
        if exc_type is None:
            assert elapsed < self.budget_s, (
                f"{self.name} took {elapsed:.1f}s (budget {self.budget_s}s)"
            )
            print(f"[ACCEPTANCE] {self.name}: PASS ({elapsed:.2f}s)")
        else:
            print(f"[ACCEPTANCE] {self.name}: FAIL ({elapsed:.2f}s)")
        return False


def test_01_table2_golden_suite(fixture_lexicon, gpt_vocab, albert_vocab):
    with _Timer("table2-golden-suite", 1.0):
        gpt = Labeller(fixture_lexicon, gpt_vocab)
        albert = Labeller(fixture_lexicon, albert_vocab)
        expected = [
            ("jogging", ["_j", "ogging"], "alien", ["_jogging"], "vocab"),
            ("neutralised", ["_neutral", "ised"], "morph", ["_neutral", "ised"], "morph"),
            ("stepstones", ["_step", "stones"], "morph", ["_steps", "tones"], "alien"),
            ("clerking", ["_cler", "king"], "alien", ["_clerk", "ing"], "morph"),
            ("swappiness", ["_sw", "appiness"], "alien", ["_swap", "pi", "ness"], "morph"),
        ]
        for word, gtoks, glabel, atoks, alabel in expected:
            assert gpt.label(word, SubwordSequence(tuple(gtoks))).value == glabel
            assert albert.label(word, SubwordSequence(tuple(atoks))).value == alabel


def test_02_merge_list_golden(fixture_lexicon):
    with _Timer("merge-list-golden", 1.0):
        (seg,) = fixture_lexicon.segmentations("motivated")
        ml = build_merge_list("motivated", seg, fixture_lexicon)
        assert ml.non_identity_entries() == {
            "_motive ate ed": "_motivated",
            "_motivate ed": "_motivated",
            "_motive ated": "_motivated",
            "_motive ate": "_motivate",
            "ate ed": "ated",
        }


def test_03_tolerance_rule(fixture_lexicon, gpt_vocab):
    with _Timer("tolerance-rule", 1.0):
        labeller = Labeller(fixture_lexicon, gpt_vocab)
        got = labeller.label("theorizing", SubwordSequence(("_theor", "iz", "ing")))
        assert (got.value, got.mu) == ("morph", 2)
        for perturbed in (("_theo", "riz", "ing"), ("_th", "eoriz", "ing"),
                          ("_theor", "izi", "ng")):
            got = labeller.label("theorizing", SubwordSequence(perturbed))
            assert got.value == "alien", perturbed


def test_04_oracle_equivalence():
    with _Timer("oracle-equivalence-1000-words", 60.0):
        rng = random.Random(2024)
        words = gen_word_set(rng, 1000, max_morphemes=5)
        records = [rec for w in words for rec in w.records]
        lexicon = build_lexicon(records)
        checked = 0
        for w in words:
            segs = lexicon.segmentations(w.surface)
            assert segs, w.surface
            production = [WordAnalysis(s, lexicon) for s in segs]
            oracle = [
                OracleAnalysis(s.stripped, w.surface, lexicon.retrieve)
                for s in segs
            ]
            for n in range(1, 6):
                prod_units = []
                seen = set()
                for analysis in production:
                    for cand in analysis.candidates(n):
                        if cand.units not in seen:
                            seen.add(cand.units)
                            prod_units.append(cand.units)
                assert prod_units == oracle_candidates(oracle, n), (w.surface, n)
                split = random_split(rng, w.surface, n)
                if split is not None:
                    split = tuple(split)
                    best = max(
                        (sum(1 for s, m in zip(split, u) if s == m)
                         for u in prod_units),
                        default=0,
                    )
                    assert best == oracle_mu(oracle, split), (w.surface, split)
                checked += 1
        assert checked >= 1000


def test_05_bpe_sweep_properties(tmp_path):
    with _Timer("bpe-sweep-desk-scale", 1800.0):
        corpus = tmp_path / "corpus.txt"
        records = build_desk_corpus(corpus, seed=7)
        assert corpus.stat().st_size >= 50_000_000
        lexicon = build_lexicon(records)
        counts = count_words(corpus, lowercase=False)
        words = top_words(counts, 20_000)
        model = train_bpe(counts, max_size=40_000, checkpoint_step=1_000)
        sizes = [s for s, _ in model.checkpoints]
        assert sizes == list(range(1_000, 41_000, 1_000))
        # (a) vocabulary nesting at every step
        previous = None
        for size in sizes:
            vocab = model.vocab_at(size)
            if previous is not None:
                assert previous <= vocab, f"nesting broken at {size}"
            previous = vocab
        rows = sweep_stats(model, sizes, words, lexicon)
        # (b) vocab-label count non-decreasing in vocabulary size
        vocab_counts = [r.counts[0] for r in rows]
        assert vocab_counts == sorted(vocab_counts)
        # (c) fractions sum to 1 within 1e-9 per row
        for row in rows:
            assert abs(sum(row.fractions) - 1.0) <= 1e-9
            assert row.total == len(words)


def test_06_dataset_constraint_suite(tmp_path_factory):
    with _Timer("dataset-constraint-suite", 300.0):
        base = tmp_path_factory.mktemp("datasets")

        rng = random.Random(501)
        senses = build_wad_senses(rng, 26_000)
        senses_path = base / "senses.tsv"
        write_wad_senses(senses, senses_path)
        wad_sizes = (10_500, 1_500, 3_000)
        wad_dir = base / "wad"
        write_challenge_files(
            gen_wad(senses, sizes=wad_sizes, seed=11),
            wad_dir, seed=11, sizes=wad_sizes,
            input_paths={"senses": senses_path},
        )
        assert checker.check_wad(wad_dir, wad_sizes) == []

        rng = random.Random(502)
        morph, toks, ranks = build_wam_resources(rng, per_cat=5_000)
        morph_path, tok_path, ranks_path = (
            base / "morph.tsv", base / "toks.jsonl", base / "ranks.txt",
        )
        write_wam_resources(morph, toks, ranks, morph_path, tok_path, ranks_path)
        wam_sizes = (5_400, 900, 1_800)
        wam_dir = base / "wam"
        write_challenge_files(
            gen_wam(morph, toks, ranks, sizes=wam_sizes, seed=12, shared_top=5_000),
            wam_dir, seed=12, sizes=wam_sizes,
            input_paths={"morph": morph_path},
        )
        assert checker.check_wam(
            wam_dir, wam_sizes, tok_path, ranks_path, shared_top=5_000
        ) == []

        rng = random.Random(503)
        pool_rows = build_waw_pool(rng, n_words=8_000, n_pairs=60_000)
        pairs_path = base / "pairs.tsv"
        write_waw_pool(pool_rows, pairs_path)
        waw_sizes = (5_389, 582, 1_133)
        waw_dir = base / "waw"
        write_challenge_files(
            gen_waw(RelationPool(pool_rows), sizes=waw_sizes, seed=13),
            waw_dir, seed=13, sizes=waw_sizes,
            input_paths={"pairs": pairs_path},
        )
        assert checker.check_waw(waw_dir, waw_sizes, pairs_path) == []


def test_07_planted_accuracy():
    with _Timer("harness-planted-accuracy", 10.0):
        # Groups assigned through the real labeller over constructed words.
        records = [
            R("bela", "derivation", "bel", ("a",), ""),
            R("cota", "derivation", "cot", ("a",), ""),
        ]
        lexicon = build_lexicon(records)
        vocabulary = Vocabulary({"_vocw"})
        labeller = Labeller(lexicon, vocabulary)
        tokenizations = {
            "vocw": ["_vocw"],          # vocab
            "bela": ["_bel", "a"],      # morph
            "cota": ["_co", "ta"],      # alien
        }
        dataset = []
        word_of_group = {"vocab": "vocw", "morph": "bela", "alien": "cota"}
        for group, word in word_of_group.items():
            for i in range(200):
                dataset.append({"id": f"{group}-{i}", "word": word, "label": True})
        assignments, excluded = assign_groups(dataset, tokenizations, labeller)
        assert not excluded
        by_group = {}
        for a in assignments:
            by_group.setdefault(a.group, []).append(a.instance_id)
        assert {g: len(ids) for g, ids in by_group.items()} == {
            "vocab": 200, "morph": 200, "alien": 200,
        }
        gold = {row["id"]: True for row in dataset}
        correct_per_group = {"vocab": 180, "morph": 150, "alien": 120}
        preds = {}
        for group, ids in by_group.items():
            for i, iid in enumerate(ids):
                preds[iid] = i < correct_per_group[group]
        seed_files = [dict(preds) for _ in range(5)]
        report = score(assignments, gold, seed_files)
        assert report.groups["vocab"].accuracy_mean == 90.0
        assert report.groups["morph"].accuracy_mean == 75.0
        assert report.groups["alien"].accuracy_mean == 60.0
        for g in report.groups.values():
            assert g.accuracy_std == 0.0
        weighted = sum(
            g.count * g.accuracy_mean for g in report.groups.values()
        ) / report.dataset_size
        assert abs(report.total.accuracy_mean - weighted) <= 1e-9
        assert report.total.accuracy_std == 0.0


def _adversarial_fixture():
    suffixes = ["ogging", "ower", "umbling", "ipping", "antering", "addling"]
    onsets = ["j", "sh", "fl", "m", "b", "c", "tr", "st", "gr", "pl"]
    records = []
    tokenizations = {}
    vocab_tokens = set()
    words_by_suffix = {}
    for suf in suffixes:
        words_by_suffix[suf] = []
        for onset in onsets:
            word = onset + suf
            # Lexicon analysis splits off a plausible tail, so the
            # one-piece-onset tokenization below counts as alien.
            records.append(
                SegmentationRecord(word, "inflection", onset + suf[:-3], (suf[-3:],), "")
            )
            tokenizations[word] = ["_" + onset, suf]
            vocab_tokens.add("_" + onset)
            vocab_tokens.add(suf)
            words_by_suffix[suf].append(word)
    filler = ["the", "a", "person", "keeps", "near", "lawn", "was", "seen"]
    for w in filler:
        tokenizations[w] = ["_" + w]
        vocab_tokens.add("_" + w)
    lexicon = build_lexicon(records)
    labeller = Labeller(lexicon, Vocabulary(vocab_tokens))
    rng = random.Random(77)
    sentences = []
    all_words = [w for ws in words_by_suffix.values() for w in ws]
    for i in range(100):
        w1, w2 = rng.sample(all_words, 2)
        sentences.append(
            {
                "text_a": f"The person keeps {w1} near a lawn.",
                "text_b": f"A {w2} was seen.",
            }
        )
    return labeller, tokenizations, all_words, sentences


def test_08_adversarial_soundness(tmp_path):
    with _Timer("adversarial-soundness", 10.0):
        labeller, tokenizations, candidates, sentences = _adversarial_fixture()
        results, dropped = adversarial_swap(
            sentences, tokenizations, labeller, candidates, seed=5
        )
        assert len(results) == 100 and dropped == 0
        for res in results:
            assert res.substitutions
            for sub in res.substitutions:
                orig = sub["original"].lower()
                repl = sub["replacement"].lower()
                assert repl != orig
                assert tokenizations[repl][-1] == tokenizations[orig][-1]
                label = labeller.label(
                    repl, SubwordSequence(tuple(tokenizations[repl]))
                )
                assert label.value == "alien"
        # Determinism under a fixed seed, byte for byte.
        out_a, out_b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        write_swaps(results, out_a)
        results2, _ = adversarial_swap(
            sentences, tokenizations, labeller, candidates, seed=5
        )
        write_swaps(results2, out_b)
        assert out_a.read_bytes() == out_b.read_bytes()


def test_09_audit_sample_export(tmp_path):
    with _Timer("audit-sample-export", 5.0):
        rng = random.Random(31)
        rows = []
        for i in range(400):
            word = f"w{i}"
            label = "morph" if rng.random() < 0.5 else "alien"
            rows.append({"word": word, "subwords": [f"_{word}"], "label": label})
        sample = audit_sample(rows, k=150, classes=("morph", "alien"), seed=9)
        assert len(sample) == 300
        assert sum(1 for r in sample if r["label"] == "morph") == 150
        assert sum(1 for r in sample if r["label"] == "alien") == 150
        out_a, out_b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        write_audit_tsv(sample, out_a)
        write_audit_tsv(
            audit_sample(rows, k=150, classes=("morph", "alien"), seed=9), out_b
        )
        assert out_a.read_bytes() == out_b.read_bytes()
        header, *body = out_a.read_text().splitlines()
        assert header == "word\tsubwords\tlabel\thuman_label\tnotes"
        assert len(body) == 300
