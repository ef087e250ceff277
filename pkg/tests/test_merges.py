import random

from conftest import table2_records
from morphtok.lexicon import build_lexicon
from morphtok.merges import (
    MergeCache,
    WordAnalysis,
    build_merge_list,
    enumerate_merges,
)
from oracle_merges import OracleAnalysis, oracle_candidates, oracle_mu
from synth import gen_word_set, random_split


def _analysis(lexicon, word, idx=0):
    return WordAnalysis(lexicon.segmentations(word)[idx], lexicon)


def test_compose_pair_retrieval(fixture_lexicon):
    a = _analysis(fixture_lexicon, "motivated")
    assert a.compose_pair("_motive", "ate") == "_motivate"


def test_compose_pair_inferred(fixture_lexicon):
    a = _analysis(fixture_lexicon, "motivated")
    assert a.compose_pair("ate", "ed") == "ated"


def test_compose_pair_swappiness(fixture_lexicon):
    a = _analysis(fixture_lexicon, "swappiness")
    assert a.compose_pair("y", "ness") == "piness"


def test_merge_list_golden_motivated(fixture_lexicon):
    ml = build_merge_list(
        "motivated", fixture_lexicon.segmentations("motivated")[0], fixture_lexicon
    )
    assert ml.non_identity_entries() == {
        "_motive ate ed": "_motivated",
        "_motivate ed": "_motivated",
        "_motive ated": "_motivated",
        "_motive ate": "_motivate",
        "ate ed": "ated",
    }
    # Full-sequence key maps to the marker-normalized surface word.
    assert ml.entries["_motive ate ed"] == "_motivated"


def test_merge_list_single_morpheme():
    lex = build_lexicon(
        [r for r in table2_records() if r.surface == "jogging"]
    )
    seg = lex.segmentations("jogging")[0]
    ml = build_merge_list("jogging", seg, lex)
    assert ml.non_identity_entries() == {"_jog ing": "_jogging"}


def test_merge_list_copywriters(fixture_lexicon):
    seg = [
        s
        for s in fixture_lexicon.segmentations("copywriters")
        if s.morphemes == ("_copy", "write", "er", "s")
    ][0]
    ml = build_merge_list("copywriters", seg, fixture_lexicon)
    entries = ml.entries
    assert entries["_copy write"] == "_copywrite"
    assert entries["_copy write er s"] == "_copywriters"


def test_merge_list_keys_have_unit_identities(fixture_lexicon):
    for word in ("motivated", "neutralised", "copywriters", "swappiness"):
        for seg in fixture_lexicon.segmentations(word):
            ml = build_merge_list(word, seg, fixture_lexicon)
            for key in ml.entries:
                for unit in key.split(" "):
                    assert unit in ml.entries, (word, key, unit)


def test_enumerate_motivated(fixture_lexicon):
    two = {c.units for c in enumerate_merges("motivated", 2, fixture_lexicon)}
    assert two == {("_motivate", "ed"), ("_motive", "ated")}
    three = [c.units for c in enumerate_merges("motivated", 3, fixture_lexicon)]
    assert three == [("_motive", "ate", "ed")]
    assert enumerate_merges("motivated", 5, fixture_lexicon) == []


def test_enumerate_stepstones(fixture_lexicon):
    two = {c.units for c in enumerate_merges("stepstones", 2, fixture_lexicon)}
    assert two == {("_step", "stones"), ("_stepstone", "s")}


def test_enumerate_includes_canonical_segmentation(fixture_lexicon):
    for word in ("motivated", "neutralised", "swappiness", "copywriters"):
        for seg in fixture_lexicon.segmentations(word):
            k = len(seg.morphemes)
            units = {c.units for c in enumerate_merges(word, k, fixture_lexicon)}
            assert seg.morphemes in units


def test_candidate_soundness(fixture_lexicon):
    # Every candidate's spans tile the analysis and the full span merges
    # back to the surface word.
    for word in ("motivated", "neutralised", "swappiness", "stepstones"):
        for seg in fixture_lexicon.segmentations(word):
            analysis = WordAnalysis(seg, fixture_lexicon)
            for n in range(1, analysis.k + 1):
                for cand in analysis.candidates(n):
                    assert cand.spans[0][0] == 0
                    assert cand.spans[-1][1] == analysis.k
                    for (a, b), (c, d) in zip(cand.spans, cand.spans[1:]):
                        assert b == c
                    assert analysis.span_form(0, analysis.k) == "_" + word


def test_merge_cache_consistency(fixture_lexicon):
    cache = MergeCache(fixture_lexicon)
    fresh = {c.units for c in enumerate_merges("motivated", 2, fixture_lexicon)}
    cached = set(cache.candidate_units("motivated", 2))
    assert fresh == cached
    assert cache.candidate_units("motivated", 2) is cache.candidate_units("motivated", 2)


def test_oracle_equivalence_small():
    rng = random.Random(99)
    words = gen_word_set(rng, 120)
    records = [rec for w in words for rec in w.records]
    lexicon = build_lexicon(records)

    def retrieve(base, affix):
        return lexicon.retrieve(base, affix)

    for w in words:
        segs = lexicon.segmentations(w.surface)
        assert segs, w.surface
        production = [WordAnalysis(s, lexicon) for s in segs]
        oracle = [OracleAnalysis(s.stripped, w.surface, retrieve) for s in segs]
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
            if split is None:
                continue
            split = tuple(split)
            best = 0
            for units in prod_units:
                best = max(best, sum(1 for s, m in zip(split, units) if s == m))
            assert best == oracle_mu(oracle, split), (w.surface, split)


def test_oracle_merge_list_equivalence():
    rng = random.Random(41)
    words = gen_word_set(rng, 60)
    records = [rec for w in words for rec in w.records]
    lexicon = build_lexicon(records)
    for w in words:
        for seg in lexicon.segmentations(w.surface):
            prod = build_merge_list(w.surface, seg, lexicon).entries
            oracle = OracleAnalysis(
                seg.stripped, w.surface, lexicon.retrieve
            ).merge_entries()
            assert prod == oracle, w.surface
