import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from marketmap.correl import DistanceMatrix, distance_from_correlation, spearman_correlation
from marketmap.embed import double_center, pcoa_embedding
from marketmap.errors import DataError
from marketmap.panel import ReturnPanel


def euclidean(points):
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt((diff**2).sum(axis=-1))


def test_four_points_in_space():
    pts = np.random.default_rng(3).standard_normal((4, 3))
    emb = pcoa_embedding(euclidean(pts))
    np.testing.assert_allclose(emb.distances(), euclidean(pts), atol=1e-8)


def test_regular_simplex():
    d = np.ones((4, 4)) - np.eye(4)
    emb = pcoa_embedding(d)
    off = emb.distances()[~np.eye(4, dtype=bool)]
    assert off.max() - off.min() < 1e-10
    assert off.mean() == pytest.approx(1.0)


def test_duplicate_assets_coincide():
    pts = np.random.default_rng(5).standard_normal((6, 3))
    pts[4] = pts[1]
    emb = pcoa_embedding(euclidean(pts))
    np.testing.assert_allclose(emb.coords[4], emb.coords[1], atol=1e-10)


def test_invariants_on_correlation_distances():
    x = np.random.default_rng(9).standard_normal((60, 12))
    dist = distance_from_correlation(spearman_correlation(ReturnPanel([f"t{i}" for i in range(12)], x)))
    emb = pcoa_embedding(dist)
    assert emb.coords.shape == (12, 3)
    np.testing.assert_allclose(emb.coords.mean(axis=0), 0.0, atol=1e-10)
    assert np.all(np.diff(emb.eigenvalues) <= 0)
    for k in range(3):
        col = emb.coords[:, k]
        assert col[np.argmax(np.abs(col))] > 0
    assert 0.0 <= emb.negative_mass < 1.0
    assert emb.tickers == dist.tickers


def test_low_rank_input_warns_and_zeroes_columns():
    pts = np.zeros((5, 3))
    pts[:, 0] = np.arange(5.0)  # collinear: rank 1
    with pytest.warns(RuntimeWarning, match="not positive"):
        emb = pcoa_embedding(euclidean(pts))
    assert np.all(emb.coords[:, 1:] == 0.0)
    np.testing.assert_allclose(emb.distances(), euclidean(pts), atol=1e-10)


def test_errors():
    with pytest.raises(DataError, match="more than"):
        pcoa_embedding(np.ones((3, 3)) - np.eye(3))
    d = np.ones((5, 5)) - np.eye(5)
    d[0, 1] = 0.5
    with pytest.raises(DataError, match="symmetric"):
        pcoa_embedding(d)


def classical_rank3_reconstruction(d):
    """Oracle: rank-3 truncation of the double-centered Gram matrix, via a dense eigensolver."""
    n = d.shape[0]
    h = np.eye(n) - np.ones((n, n)) / n
    b = -0.5 * h @ (d**2) @ h
    w, v = np.linalg.eigh(b)
    idx = np.argsort(w)[::-1][:3]
    return v[:, idx] * np.sqrt(np.maximum(w[idx], 0.0))


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 6), st.integers(0, 2**32 - 1))
def test_reconstruction_matches_oracle(n, seed):
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((n, 5))
    d = euclidean(pts)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        emb = pcoa_embedding(d)
    ref = classical_rank3_reconstruction(d)
    np.testing.assert_allclose(emb.distances(), euclidean(ref), atol=1e-9)


def test_double_center_matches_projector():
    rng = np.random.default_rng(1)
    sq = rng.uniform(size=(6, 6))
    sq = sq + sq.T
    h = np.eye(6) - 1 / 6
    np.testing.assert_allclose(double_center(sq), -0.5 * h @ sq @ h, atol=1e-14)


def test_relabeling_permutes_rows():
    rng = np.random.default_rng(2)
    pts = rng.standard_normal((10, 3)) * [3.0, 2.0, 1.0]
    d = euclidean(pts)
    perm = rng.permutation(10)
    a = pcoa_embedding(d).coords
    b = pcoa_embedding(d[np.ix_(perm, perm)]).coords
    np.testing.assert_allclose(b, a[perm], atol=1e-9)


def test_coordinates_csv(tmp_path):
    pts = np.random.default_rng(4).standard_normal((5, 3))
    emb = pcoa_embedding(DistanceMatrix(list("abcde"), euclidean(pts) / 10))
    lines = emb.write_csv(tmp_path / "e.csv", ["s1"] * 5).read_text().splitlines()
    assert lines[0] == "ticker,sector,x,y,z"
    assert lines[1].startswith("a,s1,")
