"""Synthetic corpus generation: determinism, expert simulation, layout."""

import numpy as np
import pytest

from massfuse.annotations import annotation_to_mass
from massfuse.synth import (
    ExpertProfile,
    SynthConfig,
    TextureRecipe,
    default_recipes,
    load_corpus,
    render_texture,
    save_corpus,
    synth_corpus,
)


def small_config(**overrides):
    params = dict(
        classes=default_recipes(3),
        tiles_per_class=4,
        experts=[ExpertProfile(f"E{i}", error_rate=0.1) for i in range(3)],
        mixed_fraction=0.0,
        tile_size=32,
        seed=11,
    )
    params.update(overrides)
    return SynthConfig(**params)


class TestRenderTexture:
    def test_kinds_differ(self):
        rng = np.random.default_rng(0)
        flat = render_texture(TextureRecipe("flat", base=70, noise=0), (32, 32), rng)
        stripes = render_texture(
            TextureRecipe("stripes", base=128, noise=0, period=4), (32, 32), rng
        )
        assert flat.std() == 0
        assert stripes.std() > 20

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            TextureRecipe("marble")


class TestSynthCorpus:
    def test_deterministic_per_seed(self):
        a = synth_corpus(small_config())
        b = synth_corpus(small_config())
        assert a.truth == b.truth
        for ta, tb in zip(a.tiles, b.tiles):
            assert ta.tile_id == tb.tile_id
            assert np.array_equal(ta.pixels, tb.pixels)
        for xa, xb in zip(a.annotations.tiles, b.annotations.tiles):
            assert xa.annotations == xb.annotations

    def test_different_seed_differs(self):
        a = synth_corpus(small_config(seed=1))
        b = synth_corpus(small_config(seed=2))
        assert any(
            not np.array_equal(ta.pixels, tb.pixels)
            for ta, tb in zip(a.tiles, b.tiles)
        )

    def test_perfect_experts_match_truth_with_default_sure_weight(self):
        cfg = small_config(
            experts=[
                ExpertProfile("E0", error_rate=0.0, certainty_probs=(1.0, 0.0, 0.0))
            ]
        )
        corpus = synth_corpus(cfg)
        for tile in corpus.annotations.tiles:
            (ann,) = tile.annotations
            assert [e.label for e in ann.entries] == [
                lab for lab, _ in corpus.regions[tile.tile_id]
            ]
            assert all(e.certainty == "sure" for e in ann.entries)
            m = annotation_to_mass(ann, corpus.frame)
            label = corpus.truth[tile.tile_id]
            assert m.mass(corpus.frame.singleton(label)) == pytest.approx(2 / 3)

    def test_mixed_fraction_counts(self):
        cfg = small_config(tiles_per_class=25, mixed_fraction=0.2, seed=3)
        corpus = synth_corpus(cfg)
        mixed = [tid for tid, regions in corpus.regions.items() if len(regions) == 2]
        assert len(corpus.tiles) == 75
        assert len(mixed) == 15
        for tid in mixed:
            props = [p for _, p in corpus.regions[tid]]
            assert sum(props) == pytest.approx(1.0)
            # the first (truth) class always dominates
            assert props[0] > props[1]
            assert corpus.truth[tid] == corpus.regions[tid][0][0]

    def test_expert_count_and_ids(self):
        corpus = synth_corpus(small_config())
        for tile in corpus.annotations.tiles:
            assert [a.expert_id for a in tile.annotations] == ["E0", "E1", "E2"]

    def test_bad_configs_rejected(self):
        with pytest.raises(ValueError):
            small_config(tiles_per_class=0)
        with pytest.raises(ValueError):
            small_config(mixed_fraction=1.5)
        with pytest.raises(ValueError):
            small_config(experts=[])
        with pytest.raises(ValueError):
            SynthConfig(
                classes=default_recipes(1),
                experts=[ExpertProfile("E0")],
                mixed_fraction=0.5,
            )
        with pytest.raises(ValueError):
            ExpertProfile("E0", certainty_probs=(0.5, 0.2, 0.2))


class TestCorpusIo:
    def test_round_trip(self, tmp_path):
        corpus = synth_corpus(small_config(tiles_per_class=2, mixed_fraction=0.25))
        save_corpus(corpus, tmp_path)
        again = load_corpus(tmp_path)
        assert again.frame == corpus.frame
        assert again.truth == corpus.truth
        assert again.regions == corpus.regions
        by_id = {t.tile_id: t.pixels for t in again.tiles}
        for tile in corpus.tiles:
            assert np.array_equal(by_id[tile.tile_id], tile.pixels)
        assert len(again.annotations.tiles) == len(corpus.annotations.tiles)

    def test_byte_identical_across_runs(self, tmp_path):
        dirs = []
        for run in range(2):
            out = tmp_path / f"run{run}"
            save_corpus(synth_corpus(small_config()), out)
            dirs.append(out)
        for name in ("truth.csv", "annotations.json", "regions.json"):
            assert (dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes()
        a_tiles = sorted((dirs[0] / "tiles").iterdir())
        b_tiles = sorted((dirs[1] / "tiles").iterdir())
        assert [p.name for p in a_tiles] == [p.name for p in b_tiles]
        for pa, pb in zip(a_tiles, b_tiles):
            assert pa.read_bytes() == pb.read_bytes()
