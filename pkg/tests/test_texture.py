"""Co-occurrence matrices, the six statistics, and the 24-feature vector."""

import numpy as np
import pytest

from massfuse.texture import (
    DIRECTION_ORDER,
    FEATURE_COLUMNS,
    GrayTile,
    cooccurrence,
    extract24,
    feature_layout,
    haralick6,
    load_features_csv,
    load_tiles,
    quantize,
    read_pgm,
    save_features_csv,
    write_pgm,
)
from oracles import haralick_oracle


def checkerboard(n=8):
    return (np.indices((n, n)).sum(axis=0) % 2 * 255).astype(np.uint8)


class TestCooccurrence:
    def test_constant_tile_single_entry(self):
        tile = np.full((16, 16), 200, dtype=np.uint8)
        glcm = cooccurrence(tile, 0, levels=16)
        q = (200 * 16) >> 8
        assert glcm[q, q] == 1.0
        assert glcm.sum() == pytest.approx(1.0)

    def test_two_by_two_vertical(self):
        tile = np.array([[0, 255], [0, 255]], dtype=np.uint8)
        glcm = cooccurrence(tile, 90, levels=2)
        # two vertical pairs, one per column, each within a constant column
        assert glcm[0, 0] == pytest.approx(0.5)
        assert glcm[1, 1] == pytest.approx(0.5)
        assert glcm[0, 1] == 0.0 and glcm[1, 0] == 0.0

    @pytest.mark.parametrize("direction", DIRECTION_ORDER)
    def test_symmetric_unit_sum(self, direction):
        rng = np.random.default_rng(0)
        tile = rng.integers(0, 256, size=(32, 32), dtype=np.uint8)
        glcm = cooccurrence(tile, direction, levels=8)
        assert glcm.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.array_equal(glcm, glcm.T)

    def test_quantization_bounds(self):
        assert quantize(np.array([[0, 255]]), 16).tolist() == [[0, 15]]
        assert quantize(np.array([[0, 255]]), 256).tolist() == [[0, 255]]
        with pytest.raises(ValueError):
            quantize(np.zeros((2, 2)), 1)
        with pytest.raises(ValueError):
            quantize(np.zeros((2, 2)), 257)

    def test_degenerate_tile_rejected(self):
        with pytest.raises(ValueError):
            GrayTile("t", np.zeros((1, 5), dtype=np.uint8))
        # a 2-row tile still has pairs in every direction
        tile = np.array([[0, 1, 2], [3, 4, 5]], dtype=np.uint8)
        for direction in DIRECTION_ORDER:
            assert cooccurrence(tile, direction, levels=4).sum() == pytest.approx(1.0)

    def test_unknown_direction(self):
        with pytest.raises(ValueError):
            cooccurrence(np.zeros((4, 4), dtype=np.uint8), 30)


class TestHaralick6:
    def test_constant_tile_statistics(self):
        tile = np.full((8, 8), 100, dtype=np.uint8)
        glcm = cooccurrence(tile, 0, levels=4)
        homog, contrast, entropy, corr, direct, uniform = haralick6(glcm)
        assert homog == 1.0
        assert contrast == 0.0
        assert entropy == 0.0
        assert corr == 0.0  # degenerate variance
        assert direct == 1.0
        assert uniform == 1.0

    def test_uniform_matrix_closed_forms(self):
        n = 8
        glcm = np.full((n, n), 1.0 / n**2)
        _, _, entropy, _, _, uniform = haralick6(glcm)
        assert entropy == pytest.approx(2 * np.log2(n))
        assert uniform == pytest.approx(1.0 / n**2)

    def test_matches_double_loop_oracle(self):
        rng = np.random.default_rng(1)
        for _ in range(25):
            n = int(rng.integers(2, 12))
            raw = rng.random((n, n))
            raw = raw + raw.T
            glcm = raw / raw.sum()
            got = haralick6(glcm)
            expected = haralick_oracle(glcm)
            assert np.allclose(got, expected, atol=1e-12)

    def test_unnormalized_rejected(self):
        with pytest.raises(ValueError):
            haralick6(np.ones((4, 4)))


class TestExtract24:
    def test_constant_tile_repeats_block(self):
        tile = GrayTile("t", np.full((16, 16), 37, dtype=np.uint8))
        feats = extract24(tile)
        assert feats.shape == (24,)
        block = feats[:6]
        for k in range(1, 4):
            assert np.array_equal(feats[6 * k : 6 * k + 6], block)

    def test_vertical_stripes_contrast(self):
        # vertical stripes of period 2: horizontal neighbors differ,
        # vertical neighbors do not
        col = np.arange(64) % 2 * 255
        tile = GrayTile("s", np.tile(col, (64, 1)).astype(np.uint8))
        feats = extract24(tile)
        layout = feature_layout()
        contrast_0 = feats[layout.index("contrast_0")]
        contrast_90 = feats[layout.index("contrast_90")]
        assert contrast_0 > contrast_90

    def test_finite_and_order_stable(self):
        rng = np.random.default_rng(2)
        tile = GrayTile("r", rng.integers(0, 256, size=(64, 64), dtype=np.uint8))
        first = extract24(tile)
        assert np.all(np.isfinite(first))
        assert np.array_equal(first, extract24(tile))

    def test_rotation_swaps_direction_blocks(self):
        rng = np.random.default_rng(3)
        pixels = rng.integers(0, 256, size=(32, 32), dtype=np.uint8)
        feats = extract24(pixels).reshape(4, 6)
        rotated = extract24(np.rot90(pixels)).reshape(4, 6)
        order = {deg: k for k, deg in enumerate(DIRECTION_ORDER)}
        assert np.array_equal(feats[order[0]], rotated[order[90]])
        assert np.array_equal(feats[order[90]], rotated[order[0]])
        assert np.array_equal(feats[order[45]], rotated[order[135]])
        assert np.array_equal(feats[order[135]], rotated[order[45]])

    def test_translation_invariance_for_periodic_texture(self):
        col = np.arange(64) % 4 * 60
        pixels = np.tile(col, (64, 1)).astype(np.uint8)
        # a whole-period shift reproduces the tile and the features exactly
        assert np.array_equal(extract24(pixels), extract24(np.roll(pixels, 4, axis=1)))
        # any other shift loses a boundary pair: close but not identical
        off_period = extract24(np.roll(pixels, 2, axis=1))
        assert np.allclose(extract24(pixels), off_period, rtol=0.2, atol=0.05)
        assert not np.array_equal(extract24(pixels), off_period)

    def test_checkerboard_ranges(self):
        feats = extract24(checkerboard(16))
        layout = feature_layout()
        for name in ("uniformity", "homogeneity"):
            for deg in DIRECTION_ORDER:
                v = feats[layout.index(f"{name}_{deg}")]
                assert 0 < v <= 1
        for deg in DIRECTION_ORDER:
            assert feats[layout.index(f"entropy_{deg}")] >= 0


class TestPgmIo:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(4)
        pixels = rng.integers(0, 256, size=(16, 24), dtype=np.uint8)
        path = tmp_path / "tile.pgm"
        write_pgm(path, pixels)
        assert np.array_equal(read_pgm(path), pixels)

    def test_header_comments(self, tmp_path):
        path = tmp_path / "c.pgm"
        body = bytes(range(6))
        path.write_bytes(b"P5\n# a comment\n3 2\n255\n" + body)
        pixels = read_pgm(path)
        assert pixels.shape == (2, 3)
        assert pixels[1, 2] == 5

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "p2.pgm"
        path.write_bytes(b"P2\n2 2\n255\n0 0 0 0")
        with pytest.raises(ValueError):
            read_pgm(path)

    def test_truncated_rejected(self, tmp_path):
        path = tmp_path / "short.pgm"
        path.write_bytes(b"P5\n4 4\n255\n\x00\x00")
        with pytest.raises(ValueError):
            read_pgm(path)

    def test_load_tiles_sorted(self, tmp_path):
        for name in ("b", "a", "c"):
            write_pgm(tmp_path / f"{name}.pgm", np.zeros((4, 4), dtype=np.uint8))
        tiles = load_tiles(tmp_path)
        assert [t.tile_id for t in tiles] == ["a", "b", "c"]

    def test_load_tiles_empty_dir(self, tmp_path):
        with pytest.raises(ValueError):
            load_tiles(tmp_path)


class TestFeatureCsv:
    def test_round_trip_and_header(self, tmp_path):
        rng = np.random.default_rng(5)
        matrix = rng.random((3, 24))
        ids = ["t1", "t2", "t3"]
        path = tmp_path / "feats.csv"
        save_features_csv(path, ids, matrix)
        header = path.read_text().splitlines()[0]
        assert header == ",".join(["tile_id", *FEATURE_COLUMNS])
        got_ids, got = load_features_csv(path)
        assert got_ids == ids
        assert np.array_equal(got, matrix)

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("tile,x\nfoo,1\n")
        with pytest.raises(ValueError):
            load_features_csv(path)
