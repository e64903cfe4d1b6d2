"""End-to-end smoke tests for the python bindings.

Numerical depth lives in the C++ suites; here we check that the binding
layer round-trips numpy arrays, keeps determinism across calls, and raises
python exceptions for invalid input.
"""

import numpy as np
import pytest

import fermatsc as fsc


def test_version_string():
    assert fsc.__version__ == "1.0.0"


def test_two_moon_shape_labels_determinism():
    pts_a, labels_a = fsc.two_moon("sphere_i", 20, 15, seed=7)
    pts_b, labels_b = fsc.two_moon("sphere_i", 20, 15, seed=7)
    assert pts_a.shape == (35, 3)
    assert labels_a == [0] * 20 + [1] * 15
    assert np.array_equal(pts_a, pts_b) and labels_a == labels_b
    # the spherical variant lands on the unit sphere
    assert np.allclose(np.linalg.norm(pts_a, axis=1), 1.0, atol=1e-12)
    # a different seed moves the sample
    pts_c, _ = fsc.two_moon("sphere_i", 20, 15, seed=8)
    assert not np.array_equal(pts_a, pts_c)


def test_two_moon_other_variants():
    lift, _ = fsc.two_moon("lift_ii", 5, 5, seed=3)
    noisy, _ = fsc.two_moon("noise_iii", 5, 5, seed=3)
    assert lift.shape == (10, 500)
    assert noisy.shape == (10, 500)
    with pytest.raises(ValueError):
        fsc.two_moon("banana", 5, 5, seed=3)


def test_vmf_points_are_unit_vectors():
    pts, labels = fsc.vmf_clusters(25, seed=11)
    assert pts.shape == (50, 3)
    assert labels == [0] * 25 + [1] * 25
    assert np.allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)


def test_fermat_alpha_one_complete_graph_is_euclidean():
    pts, _ = fsc.vmf_clusters(15, seed=3)
    fm = fsc.fermat_matrix(pts, alpha=1.0, graph="complete")
    direct = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    assert fm.scale == 1.0
    assert fm.alpha == 1.0
    assert len(fm) == 30
    assert np.max(np.abs(fm.dist - direct)) <= 1e-12


def test_fermat_matrix_is_metric_like():
    pts, _ = fsc.two_moon("sphere_i", 30, 30, seed=5)
    fm = fsc.fermat_matrix(pts, alpha=4.0, d=2, graph="knm")
    d = fm.dist
    assert np.array_equal(d, d.T)
    assert np.all(np.diag(d) == 0.0)
    assert np.all(d >= 0.0)
    # scale = n^((alpha-1)/(alpha*d)) with n = 60, alpha = 4, d = 2
    assert fm.scale == pytest.approx(60.0 ** (3.0 / 8.0), rel=1e-15)


def test_mds_reconstructs_euclidean_input():
    rng = np.random.default_rng(5)
    pts = rng.uniform(-1.0, 1.0, size=(30, 3))
    diff = pts[:, None, :] - pts[None, :, :]
    d_in = np.linalg.norm(diff, axis=2)
    emb = fsc.classical_mds(d_in, 3)
    assert emb.coords.shape == (30, 3)
    assert emb.p == 3
    assert emb.eigvals.shape == (3,)
    assert emb.distortion <= 1e-8
    assert fsc.choose_target_dim(d_in) == 3


def test_weighted_knn_vote_prefers_soft_near_neighbor():
    pred = fsc.weighted_knn_predict([0.1, 0.2, 0.3], [1, 0, 0], k=3, sigma=0.1)
    assert pred == 1
    # with a huge bandwidth the vote degrades to unweighted majority
    pred = fsc.weighted_knn_predict([0.1, 0.2, 0.3], [1, 0, 0], k=3, sigma=1e12)
    assert pred == 0


def test_defaults_match_documented_formulas():
    assert fsc.default_graph_k(100) == 5  # round(sqrt(100)/2)
    assert fsc.default_k(30, 2) == 10  # round(30 / 3)


def test_semi_supervised_svm_pipeline_and_determinism():
    pts, labels = fsc.two_moon("sphere_i", 60, 60, seed=1)
    fm = fsc.fermat_matrix(pts, alpha=4.0, d=2)
    labeled = fsc.sample_labeled_indices(labels, 12, seed=9)
    assert labeled == sorted(labeled) and len(labeled) == 24
    lab = [labels[i] for i in labeled]
    preds = fsc.fd_svm_predict(fm, labeled, lab, seed=2)
    unlabeled = [i for i in range(120) if i not in set(labeled)]
    assert len(preds) == len(unlabeled)
    acc = float(np.mean([p == labels[i] for p, i in zip(preds, unlabeled)]))
    assert acc >= 0.8
    assert preds == fsc.fd_svm_predict(fm, labeled, lab, seed=2)


def test_sigma_selection_over_labeled_distances():
    pts, labels = fsc.vmf_clusters(20, seed=4)
    fm = fsc.fermat_matrix(pts, alpha=3.0, d=2)
    labeled = fsc.sample_labeled_indices(labels, 10, seed=1)
    sub = fm.dist[np.ix_(labeled, labeled)]
    lab = [labels[i] for i in labeled]
    k = fsc.default_k(len(labeled), 2)
    grid = fsc.sigma_grid(sub, k)
    assert len(grid) == 8 and all(g > 0 for g in grid)
    sigma = fsc.select_sigma_cv(sub, lab, k, grid, folds=5, seed=3)
    assert sigma in grid


def test_intrinsic_dim_of_a_plane():
    rng = np.random.default_rng(11)
    pts = np.zeros((1500, 6))
    pts[:, 1] = rng.uniform(size=1500)
    pts[:, 4] = rng.uniform(size=1500)
    est = fsc.estimate_intrinsic_dim(pts)
    assert 1.6 <= est <= 2.4


def test_invalid_input_raises_value_error():
    with pytest.raises(ValueError):
        fsc.fermat_matrix(np.zeros((1, 2)))  # a single point is not a cloud
    with pytest.raises(ValueError):
        fsc.fermat_matrix(np.random.rand(10, 2), alpha=0.5)  # alpha < 1
    with pytest.raises(ValueError):
        fsc.fermat_matrix(np.random.rand(10, 2), graph="mesh")
    with pytest.raises(ValueError):
        fsc.classical_mds(np.array([[0.0, 1.0], [2.0, 0.0]]), 1)  # asymmetric
    with pytest.raises(ValueError):
        fsc.sample_labeled_indices([0, 0, 1], 2, seed=0)  # class 1 too small
