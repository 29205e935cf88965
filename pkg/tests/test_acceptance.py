"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (visible with ``pytest tests/test_acceptance.py -v -s``).

Tolerances are pinned here and must not be loosened.
"""

import contextlib
import time

import numpy as np
import pytest

from cloudcat.contour import cat_transform
from cloudcat.errors import (
    IndexOutOfRange,
    MalformedHeader,
    NonNumericToken,
    TruncatedFile,
)
from cloudcat.frame_align import (
    FaParams,
    TrainConfig,
    accuracy,
    grad_check,
    predict_labels,
    train_toy,
)
from cloudcat.geometry import apply_rigid, cross_matrix, quat_to_rotation, random_rotation
from cloudcat.ingest import parse_off, parse_xyz, write_off, write_xyz
from cloudcat.pca import pca_normalize
from cloudcat.perturb import add_noise, random_rigid, subsample_indices, crop_partial_indices
from cloudcat.shapes import SHAPE_KINDS, make_dataset, sample_shape_cloud


@contextlib.contextmanager
def criterion(number, name):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number:2d} {name}: FAIL")
        raise
    print(f"ACCEPTANCE {number:2d} {name}: PASS")


def random_cloud(seed, n):
    return np.random.default_rng(seed).standard_normal((n, 3))


def test_01_rigid_invariance():
    with criterion(1, "rigid-motion invariance <= 1e-5"):
        start = time.monotonic()
        sizes = [16, 256, 1024]
        worst = 0.0
        cloud_index = 0
        for i in range(100):
            n = sizes[i % 3]
            cloud = random_cloud(1000 + i, n)
            result = cat_transform(cloud)
            assert result.frame.tie_report == (), "cloud must be tie-free"
            for k in range(20):
                motion = random_rigid(100_000 + 20 * i + k, translation_scale=10.0)
                moved = apply_rigid(cloud, motion)
                dev = float(np.max(np.abs(cat_transform(moved).transformed - result.transformed)))
                worst = max(worst, dev)
            cloud_index += 1
        elapsed = time.monotonic() - start
        assert cloud_index == 100
        assert worst <= 1e-5, f"worst deviation {worst:.3e}"
        assert elapsed < 10.0, f"took {elapsed:.1f}s"


def test_02_cross_product_identities():
    with criterion(2, "adjoint/cross-product identities <= 1e-12"):
        for trial in range(1000):
            rng = np.random.default_rng(2000 + trial)
            r = random_rotation(2000 + trial)
            x = rng.standard_normal(3)
            residual = np.max(np.abs(r @ cross_matrix(x) @ r.T - cross_matrix(r @ x)))
            assert residual <= 1e-12
        for trial in range(1000):
            rng = np.random.default_rng(3000 + trial)
            r = random_rotation(3000 + trial)
            a1, a2 = rng.standard_normal(3), rng.standard_normal(3)
            residual = np.max(np.abs(np.cross(r @ a1, r @ a2) - r @ np.cross(a1, a2)))
            assert residual <= 1e-12


def test_03_frame_validity():
    with criterion(3, "frame orthonormality and canonical placement"):
        for trial in range(1000):
            cloud = random_cloud(4000 + trial, 24)
            result = cat_transform(cloud)
            basis = result.frame.basis
            assert np.max(np.abs(basis.T @ basis - np.eye(3))) <= 1e-12
            assert abs(np.linalg.det(basis) - 1.0) <= 1e-12

            dist = np.linalg.norm(cloud - result.frame.barycenter, axis=1)
            far_img = result.transformed[np.argmax(dist)]
            assert abs(far_img[0] - dist.max()) <= 1e-9
            assert abs(far_img[1]) <= 1e-9 and abs(far_img[2]) <= 1e-9
            close_img = result.transformed[np.argmin(dist)]
            assert abs(close_img[1]) <= 1e-9
            assert close_img[2] >= -1e-9
            assert np.max(np.abs(result.transformed.mean(axis=0))) <= 1e-12


def test_04_isometry():
    with criterion(4, "pairwise distances preserved <= 1e-9"):
        for trial in range(100):
            cloud = random_cloud(5000 + trial, 256)
            out = cat_transform(cloud).transformed
            base = np.linalg.norm(cloud[:, None] - cloud[None, :], axis=2)
            after = np.linalg.norm(out[:, None] - out[None, :], axis=2)
            assert np.max(np.abs(after - base)) <= 1e-9


def test_05_quaternion_rotation_validity():
    with criterion(5, "quaternion matrices in SO(3), double cover exact"):
        for trial in range(1000):
            q = np.random.default_rng(6000 + trial).standard_normal(4)
            r = quat_to_rotation(q)
            assert np.max(np.abs(r.T @ r - np.eye(3))) <= 1e-12
            assert abs(np.linalg.det(r) - 1.0) <= 1e-12
            assert np.array_equal(r, quat_to_rotation(-q))


def test_06_pca_witness():
    with criterion(6, "PCA rotation-variance witness, invariant contrast"):
        rng = np.random.default_rng(2024)
        cloud = rng.standard_normal((64, 3)) * np.array([1.5, 1.0, 0.6])
        base_pca, _ = pca_normalize(cloud)
        base_cat = cat_transform(cloud).transformed
        witness = False
        for k in range(200):
            rotated = cloud @ random_rotation(7000 + k).T
            dev_pca = float(np.max(np.abs(pca_normalize(rotated)[0] - base_pca)))
            dev_cat = float(np.max(np.abs(cat_transform(rotated).transformed - base_cat)))
            assert dev_cat <= 1e-5
            if dev_pca > 0.1:
                witness = True
        assert witness, "no PCA discrepancy > 0.1 found in 200 rotations"


def test_07_gradient_check():
    with criterion(7, "analytic vs finite-difference gradients <= 1e-4"):
        worst = 0.0
        for draw in range(10):
            rng = np.random.default_rng(8000 + draw)
            params = FaParams.init(rng, h1=4, h2=8, c=16)
            for _, layer in params.named_layers():
                layer.weights = rng.normal(0, 0.5, layer.weights.shape)
                layer.bias = rng.normal(0, 0.5, layer.bias.shape)
            cloud = rng.standard_normal((8, 3))
            worst = max(worst, grad_check(params, cloud, eps=1e-5))
        assert worst <= 1e-4, f"worst relative error {worst:.3e}"


def test_08_toy_end_to_end():
    with criterion(8, "toy pipeline: delta-acc 0, ablation rotation-sensitive"):
        start = time.monotonic()
        train_ds = make_dataset(per_class=20, n_points=256, seed=11)
        test_ds = make_dataset(per_class=10, n_points=256, seed=22)
        cfg = TrainConfig(
            learning_rate=0.1, epochs=60, batch_size=10, seed=0, h1=16, h2=32, c=64
        )
        motions = [random_rigid(9000 + i, 0.25) for i in range(len(test_ds.clouds))]
        rotated = [apply_rigid(c, m) for c, m in zip(test_ds.clouds, motions)]

        fa, clf, history = train_toy(train_ds, cfg, use_cat=True, use_fa=True)
        pred_nr = predict_labels(test_ds.clouds, clf, fa, use_cat=True)
        pred_ar = predict_labels(rotated, clf, fa, use_cat=True)
        acc_nr = accuracy(pred_nr, test_ds.labels)
        assert acc_nr >= 0.9, f"NR accuracy {acc_nr}"
        assert np.array_equal(pred_nr, pred_ar), "predictions must be identical"
        assert accuracy(pred_ar, test_ds.labels) - acc_nr == 0.0

        # rotation-sensitive ablation: same classifier without canonicalization
        fa_b, clf_b, _ = train_toy(train_ds, cfg, use_cat=False, use_fa=True)
        nr_b = accuracy(predict_labels(test_ds.clouds, clf_b, fa_b, use_cat=False), test_ds.labels)
        ar_b = accuracy(predict_labels(rotated, clf_b, fa_b, use_cat=False), test_ds.labels)
        assert ar_b - nr_b < 0.0, f"ablation delta {ar_b - nr_b}"

        elapsed = time.monotonic() - start
        assert elapsed <= 300.0, f"took {elapsed:.0f}s"


def test_09_linear_time_scaling():
    with criterion(9, "per-point cost at 2^20 <= 3x cost at 2^16"):
        def ns_per_point(n):
            cloud = random_cloud(31, n)
            cat_transform(cloud)
            samples = []
            for _ in range(5):
                t0 = time.perf_counter_ns()
                cat_transform(cloud)
                samples.append(time.perf_counter_ns() - t0)
            return float(np.median(samples)) / n

        small = ns_per_point(2**16)
        large = ns_per_point(2**20)
        assert large <= 3.0 * small, f"{large:.1f} vs {small:.1f} ns/pt"


def test_10_robustness_trend():
    with criterion(10, "deviation finite and monotone under perturbation"):
        rng = np.random.default_rng(123)
        noise_levels = [0.01, 0.02, 0.05]
        subsample_levels = [768, 512, 256]
        partial_ratios = [0.9, 0.8, 0.7]
        noise_devs = {level: [] for level in noise_levels}
        sub_devs = {level: [] for level in subsample_levels}
        partial_devs = {level: [] for level in partial_ratios}
        for trial in range(30):
            kind = SHAPE_KINDS[trial % 3]
            cloud = sample_shape_cloud(kind, 1024, int(rng.integers(2**63)))
            base = cat_transform(cloud).transformed
            for level in noise_levels:
                noisy = add_noise(cloud, level, int(rng.integers(2**63)))
                noise_devs[level].append(
                    float(np.max(np.abs(cat_transform(noisy).transformed - base)))
                )
            for level in subsample_levels:
                idx = subsample_indices(1024, level, int(rng.integers(2**63)))
                sub_devs[level].append(
                    float(np.max(np.abs(cat_transform(cloud[idx]).transformed - base[idx])))
                )
            for level in partial_ratios:
                idx = crop_partial_indices(cloud, level, int(rng.integers(2**63)))
                partial_devs[level].append(
                    float(np.max(np.abs(cat_transform(cloud[idx]).transformed - base[idx])))
                )

        for devs in (noise_devs, sub_devs, partial_devs):
            assert all(np.all(np.isfinite(v)) for v in devs.values())

        noise_means = [np.mean(noise_devs[level]) for level in noise_levels]
        assert noise_means == sorted(noise_means), f"noise means {noise_means}"
        sub_means = [np.mean(sub_devs[level]) for level in subsample_levels]
        assert sub_means == sorted(sub_means), f"subsample means {sub_means}"
        # partial crops down to ratio 0.7 must complete without error; the
        # trend direction is recorded but the gate is finiteness
        assert all(np.mean(partial_devs[r]) > 0 for r in partial_ratios)


def test_11_parsers():
    with criterion(11, "parser round-trips and error reporting"):
        tetra = (
            "OFF\n4 4 0\n"
            "0.0 0.25 0.125\n1.5 0.0 -0.375\n-0.25 1.0 0.0\n0.5 -0.125 1.75\n"
            "3 0 1 2\n3 0 1 3\n3 0 2 3\n3 1 2 3\n"
        )
        mesh = parse_off(tetra)
        again = parse_off(write_off(mesh))
        assert np.array_equal(mesh.vertices, again.vertices)
        assert np.array_equal(mesh.faces, again.faces)

        cloud = np.random.default_rng(1).standard_normal((17, 3))
        assert np.array_equal(parse_xyz(write_xyz(cloud)), cloud)

        with pytest.raises(MalformedHeader) as excinfo:
            parse_off("OFF\nx y z\n")
        assert excinfo.value.line == 2
        with pytest.raises(IndexOutOfRange) as excinfo:
            parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n")
        assert excinfo.value.line == 6
        with pytest.raises(TruncatedFile):
            parse_off("OFF\n4 4 0\n0 0 0\n")
        with pytest.raises(NonNumericToken) as excinfo:
            parse_xyz("1 2 3\nx y z\n")
        assert excinfo.value.line == 2
