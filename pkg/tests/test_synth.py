from __future__ import annotations

import numpy as np
import pytest

from pwlab import analytics
from pwlab.corpus import clean_counted, write_corpus_tsv
from pwlab.features import extract_features, label
from pwlab.synth import (
    CorpusPreset,
    PresetError,
    available_presets,
    generate,
    generate_diverse,
    largest_remainder,
    load_preset,
)

from oracles import oracle_label, oracle_signature


class TestLargestRemainder:
    def test_exact_total(self):
        assert largest_remainder([1.4, 2.6, 3.0], 7) == [1, 3, 3]

    def test_ties_to_earlier_index(self):
        assert largest_remainder([1.5, 1.5], 3) == [2, 1]

    def test_zero_total(self):
        assert largest_remainder([0.4, 0.6], 0) == [0, 0]

    def test_sums_match_for_fuzz(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            targets = rng.uniform(0, 10, size=rng.integers(1, 12)).tolist()
            total = int(rng.integers(0, 40))
            out = largest_remainder(targets, total)
            assert sum(out) == total
            assert all(c >= 0 for c in out)


class TestPresetValidation:
    def test_packaged_presets_load(self):
        assert set(available_presets()) >= {"forum1", "shopping1", "game1"}
        for name in available_presets():
            load_preset(name)

    def test_share_sum_mismatch_rejected(self):
        with pytest.raises(PresetError):
            CorpusPreset(name="x", top10=(("123456", 0.01),), top10_total_share=0.02)

    def test_duplicate_top10_rejected(self):
        with pytest.raises(PresetError):
            CorpusPreset(
                name="x",
                top10=(("123456", 0.01), ("123456", 0.01)),
                top10_total_share=0.02,
            )

    def test_zero_strong_rate_rejected(self):
        with pytest.raises(PresetError):
            CorpusPreset(
                name="x", top10=(("123456", 0.01),), top10_total_share=0.01, strong_rate=0.0
            )

    def test_overcommitted_length_shares_rejected(self):
        with pytest.raises(PresetError):
            CorpusPreset(
                name="x",
                top10=(("123456", 0.01),),
                top10_total_share=0.01,
                length_shares={6: 0.7, 7: 0.5},
            )


@pytest.fixture(scope="module")
def forum1_small():
    return generate(load_preset("forum1"), size=20_000, seed=11)


class TestGenerate:
    def test_emits_exactly_size_occurrences(self, forum1_small):
        assert sum(p.multiplicity for p in forum1_small) == 20_000

    def test_deterministic_per_seed(self):
        preset = load_preset("forum1")
        a = generate(preset, size=2_000, seed=3)
        b = generate(preset, size=2_000, seed=3)
        assert a == b
        assert write_corpus_tsv(a) == write_corpus_tsv(b)

    def test_different_seeds_differ(self):
        preset = load_preset("forum1")
        assert generate(preset, size=2_000, seed=3) != generate(preset, size=2_000, seed=4)

    def test_output_passes_corpus_invariants(self, forum1_small):
        # re-clean the emitted corpus: nothing may drop
        cleaned, report = clean_counted(write_corpus_tsv(forum1_small).splitlines())
        assert report.dropped_length == 0
        assert report.dropped_illegal == 0
        assert report.dropped_parse == 0
        assert sorted(cleaned, key=lambda p: p.text) == sorted(
            forum1_small, key=lambda p: p.text
        )

    def test_both_label_classes_present(self, forum1_small):
        labels = {label(extract_features(p.text)) for p in forum1_small}
        assert labels == {0, 1}

    def test_strong_rate_controls_injection(self):
        preset = load_preset("forum1")
        corpus = generate(preset, size=10_000, seed=5)
        strong_mass = sum(
            p.multiplicity for p in corpus if oracle_label(p.text) == 1
        )
        assert strong_mass == pytest.approx(500, abs=1)

    def test_declared_shares_met_within_half_point(self):
        for name in ("forum1", "shopping1", "game1"):
            preset = load_preset(name)
            corpus = generate(preset, size=50_000, seed=9)
            total = sum(p.multiplicity for p in corpus)
            hist = analytics.length_distribution(corpus)
            for length, share in preset.length_shares.items():
                assert abs(hist.share(length) - share) <= 0.005, (name, length)
            comp = analytics.composition_histogram(corpus)
            for sig, share in preset.composition_shares.items():
                assert abs(comp.get(sig, 0) / total - share) <= 0.005, (name, sig)

    def test_top10_exact_rank_and_share(self):
        preset = load_preset("forum1")
        corpus = generate(preset, size=100_000, seed=2)
        entries = analytics.top_k(corpus, 10)
        assert entries[0].password == "123456789"
        assert {e.password for e in entries} == {t for t, _ in preset.top10}
        assert sum(e.count for e in entries) / 100_000 == pytest.approx(0.1076, abs=1e-4)

    def test_too_small_size_rejected(self):
        with pytest.raises(PresetError):
            generate(load_preset("forum1"), size=10)


class TestGenerateDiverse:
    def test_covers_all_rule_quadrants(self):
        passwords = generate_diverse(4_000, seed=0)
        quadrants = set()
        for pw in passwords:
            quadrants.add((len(pw) >= 9, len(oracle_signature(pw)) >= 3))
        assert quadrants == {(False, False), (False, True), (True, False), (True, True)}

    def test_deterministic(self):
        assert generate_diverse(500, seed=1) == generate_diverse(500, seed=1)

    def test_all_passwords_legal(self):
        for pw in generate_diverse(1_000, seed=2):
            fv = extract_features(pw)  # raises on illegal characters
            assert 4 <= fv.length <= 20
