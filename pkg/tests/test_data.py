import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hypefcm.data import (
    Dataset,
    gen_blobs,
    gen_rings,
    gen_smile_like,
    load_builtin,
    load_csv,
    load_dataset,
    load_iris,
    save_csv,
)
from hypefcm.embedding import EmbeddingConfig, embed, zscore
from hypefcm.exceptions import DataError, UsageError


class TestCsv:
    def test_label_column(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("1,2,a\n3,4,a\n5,6,b\n")
        d = load_csv(f, label_column=2)
        np.testing.assert_array_equal(d.X, [[1, 2], [3, 4], [5, 6]])
        np.testing.assert_array_equal(d.labels, [0, 0, 1])
        assert d.c_true == 2

    def test_header_without_flag(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("x,y\n1,2\n")
        with pytest.raises(DataError, match="row 1, column 1"):
            load_csv(f)
        assert load_csv(f, header=True).X.tolist() == [[1.0, 2.0]]

    def test_ragged(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("1,2\n3\n")
        with pytest.raises(DataError, match="row 2"):
            load_csv(f)

    def test_empty(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("")
        with pytest.raises(DataError):
            load_csv(f)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            load_csv(tmp_path / "nope.csv")

    def test_non_finite(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("1,nan\n")
        with pytest.raises(DataError):
            load_csv(f)

    def test_delimiter_and_negative_label_index(self, tmp_path):
        f = tmp_path / "d.tsv"
        f.write_text("0.5\t1\tz\n1.5\t2\ty\n")
        d = load_csv(f, delimiter="\t", label_column=-1)
        np.testing.assert_array_equal(d.labels, [1, 0])

    def test_bad_label_index(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("1,2\n")
        with pytest.raises(UsageError):
            load_csv(f, label_column=5)

    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        d = Dataset("r", rng.normal(size=(50, 3)) * 10 ** rng.uniform(-8, 8, size=(50, 3)),
                    rng.integers(0, 4, 50))
        f = tmp_path / "r.csv"
        save_csv(d, f)
        back = load_csv(f, label_column=-1)
        np.testing.assert_array_equal(back.X, d.X)
        save_csv(back, f)
        again = load_csv(f, label_column=-1)
        np.testing.assert_array_equal(again.X, d.X)


@given(arrays(float, (5, 2), elements=st.floats(-1e300, 1e300, allow_nan=False)))
def test_round_trip_exact(X):
    import tempfile
    from pathlib import Path

    with tempfile.TemporaryDirectory() as td:
        f = Path(td) / "x.csv"
        save_csv(Dataset("x", X), f)
        np.testing.assert_array_equal(load_csv(f).X, X)


def test_iris():
    d = load_iris()
    assert (d.n, d.p, d.c_true) == (150, 4, 3)
    assert np.bincount(d.labels).tolist() == [50, 50, 50]
    assert load_dataset("builtin:iris").n == 150


def test_builtins():
    for name in ("blobs", "smile", "rings"):
        assert load_builtin(name).n > 0
    with pytest.raises(UsageError):
        load_builtin("mnist")


def test_dataset_validation():
    with pytest.raises(DataError):
        Dataset("bad", np.array([[np.inf, 0.0]]))
    with pytest.raises(DataError):
        Dataset("bad", np.zeros((3, 2)), labels=[0, 1])


class TestGenerators:
    def test_blobs_separation(self):
        d = gen_blobs(400, 5, 3, separation=20, seed=1)
        centres = np.array([d.X[d.labels == j].mean(axis=0) for j in range(5)])
        # sample means sit within a few sigma/sqrt(80) of the true centres
        for a, b in itertools.combinations(centres, 2):
            assert np.linalg.norm(a - b) >= 19
        assert np.bincount(d.labels).tolist() == [80] * 5

    def test_deterministic(self):
        for gen in (lambda s: gen_blobs(50, 2, seed=s), lambda s: gen_smile_like(50, s),
                    lambda s: gen_rings(50, s)):
            np.testing.assert_array_equal(gen(3).X, gen(3).X)
            assert not np.array_equal(gen(3).X, gen(4).X)

    def test_one_point_per_cluster(self):
        d = gen_blobs(4, 4, seed=0)
        assert sorted(d.labels.tolist()) == [0, 1, 2, 3]

    def test_smile_components(self):
        d = gen_smile_like(401, seed=0, noise=0.05)
        assert d.c_true == 4 and set(d.labels.tolist()) == {0, 1, 2, 3}
        X, lab = d.X, d.labels
        for j, centre in enumerate([(-0.35, 0.3), (0.35, 0.3)]):
            assert np.all(np.linalg.norm(X[lab == j] - centre, axis=1) <= 0.1 + 1e-12)
        r_mouth = np.linalg.norm(X[lab == 2], axis=1)
        assert np.all(np.abs(r_mouth - 0.5) <= 0.05 + 1e-12)
        assert np.all(X[lab == 2][:, 1] < 0)
        r_face = np.linalg.norm(X[lab == 3], axis=1)
        assert np.all(np.abs(r_face - 1.0) <= 0.05 + 1e-12)

    def test_rings(self):
        d = gen_rings(300, seed=1, n_rings=3, noise=0.1)
        r = np.linalg.norm(d.X, axis=1)
        for j in range(3):
            assert np.all(np.abs(r[d.labels == j] - (j + 1)) <= 0.1 + 1e-12)

    def test_small_n(self):
        with pytest.raises(UsageError):
            gen_smile_like(5)
        with pytest.raises(UsageError):
            gen_blobs(2, 3)


class TestEmbedding:
    def test_zeros(self):
        np.testing.assert_array_equal(embed(np.zeros((4, 3)), EmbeddingConfig(alpha=2.0)), 0.0)

    def test_two_points(self):
        out = embed(np.array([[1.0, 0.0], [-1.0, 0.0]]), EmbeddingConfig(alpha=1.0, margin=0.9))
        np.testing.assert_allclose(out, [[0.9, 0.0], [-0.9, 0.0]], atol=1e-15)

    @pytest.mark.parametrize("alpha", [1e-8, 0.3, 1.0, 4.0, 1000.0])
    @pytest.mark.parametrize("fit", [False, True])
    def test_inside_ball_and_ratios(self, alpha, fit):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(40, 3)) * 7 + 3
        cfg = EmbeddingConfig(alpha=alpha, fit_to_ball=fit)
        E = embed(X, cfg)
        assert np.all(alpha * np.sum(E**2, axis=1) <= cfg.margin**2 * (1 + 1e-12))
        top = np.sqrt(alpha) * np.linalg.norm(E, axis=1).max()
        expected_top = cfg.margin if (fit or alpha >= 1) else cfg.margin * np.sqrt(alpha)
        assert top == pytest.approx(expected_top, rel=1e-12)
        for (i, j), (k, l) in itertools.combinations(itertools.combinations(range(6), 2), 2):
            r1 = np.linalg.norm(E[i] - E[j]) / np.linalg.norm(E[k] - E[l])
            r0 = np.linalg.norm(X[i] - X[j]) / np.linalg.norm(X[k] - X[l])
            assert r1 == pytest.approx(r0, abs=1e-9)

    def test_deterministic(self):
        X = np.random.default_rng(1).normal(size=(20, 2))
        assert embed(X).tobytes() == embed(X).tobytes()

    def test_standardize(self):
        X = np.random.default_rng(2).normal(size=(50, 2)) * [1.0, 100.0]
        E = embed(X, EmbeddingConfig(standardize=True))
        np.testing.assert_allclose(E.std(axis=0)[0] / E.std(axis=0)[1], 1.0, rtol=1e-12)
        np.testing.assert_allclose(zscore(X).std(axis=0), 1.0)

    def test_errors(self):
        with pytest.raises(DataError):
            embed(np.array([[np.nan, 1.0]]))
        with pytest.raises(DataError):
            embed(np.zeros(3))
        with pytest.raises(UsageError):
            EmbeddingConfig(margin=1.0)
        with pytest.raises(UsageError):
            EmbeddingConfig(alpha=0.0)
