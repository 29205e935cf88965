"""Seeded, deterministic perturbation generators for robustness sweeps.

Every generator is a pure function of (input, parameters, seed): identical
arguments give bitwise-identical outputs, and retained points are never
reordered.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

import numpy as np

from .errors import InvalidCount
from .geometry import RigidMotion, as_cloud, rotation_from_rng

PERTURB_KINDS = ("rotation", "translation", "noise", "subsample", "partial")


@dataclass(frozen=True)
class PerturbSpec:
    """One perturbation: kind, strength level and seed.

    Level meaning by kind: rotation ignores it, translation uses it as the
    cube half-width, noise as the Gaussian std, subsample as the retained
    point count, partial as the keep ratio.
    """

    kind: str
    level: float
    seed: int

    def __post_init__(self):
        if self.kind not in PERTURB_KINDS:
            raise ValueError(f"unknown perturbation kind {self.kind!r}")
        if self.kind == "noise" and self.level < 0:
            raise ValueError("noise std must be >= 0")
        if self.kind == "partial" and not 0.0 < self.level <= 1.0:
            raise ValueError("partial keep ratio must be in (0, 1]")


def random_rigid(seed: int, translation_scale: float = 1.0) -> RigidMotion:
    """Haar-uniform rotation plus translation uniform in [-s, s]^3."""
    if translation_scale < 0:
        raise ValueError("translation_scale must be >= 0")
    rng = np.random.default_rng(seed)
    rotation = rotation_from_rng(rng)
    translation = rng.uniform(-translation_scale, translation_scale, size=3)
    return RigidMotion(rotation, translation)


def add_noise(points, std: float, seed: int) -> np.ndarray:
    """Add i.i.d. zero-mean Gaussian offsets per coordinate; std=0 is identity."""
    p = as_cloud(points)
    if std < 0:
        raise ValueError("std must be >= 0")
    if std == 0:
        return p.copy()
    rng = np.random.default_rng(seed)
    return p + rng.normal(0.0, std, size=p.shape)


def subsample_indices(n_total: int, n: int, seed: int) -> np.ndarray:
    """Sorted indices of a uniform without-replacement subsample."""
    if not 3 <= n <= n_total:
        raise InvalidCount(f"subsample size {n} outside [3, {n_total}]")
    rng = np.random.default_rng(seed)
    return np.sort(rng.choice(n_total, size=n, replace=False))


def subsample(points, n: int, seed: int) -> np.ndarray:
    """Keep a uniform random n-subset, preserving original relative order."""
    p = as_cloud(points)
    return p[subsample_indices(len(p), n, seed)]


def crop_partial_indices(points, keep_ratio: float, seed: int) -> np.ndarray:
    """Sorted indices of the half-space crop retained by ``crop_partial``."""
    p = as_cloud(points)
    if not 0.0 < keep_ratio <= 1.0:
        raise ValueError("keep_ratio must be in (0, 1]")
    rng = np.random.default_rng(seed)
    while True:
        direction = rng.standard_normal(3)
        norm = np.linalg.norm(direction)
        if norm > 1e-12:
            direction /= norm
            break
    keep = ceil(keep_ratio * len(p))
    projection = p @ direction
    chosen = np.argsort(-projection, kind="stable")[:keep]
    return np.sort(chosen)


def crop_partial(points, keep_ratio: float, seed: int) -> np.ndarray:
    """Simulate partial visibility: keep the ceil(ratio*N) points with the
    largest projection onto a random unit direction (rank threshold, so the
    ratio is hit exactly)."""
    p = as_cloud(points)
    return p[crop_partial_indices(p, keep_ratio, seed)]


def apply_perturbation(points, spec: PerturbSpec) -> np.ndarray:
    """Dispatch a PerturbSpec onto a cloud."""
    p = as_cloud(points)
    if spec.kind == "rotation":
        motion = random_rigid(spec.seed, translation_scale=0.0)
        return p @ motion.rotation.T
    if spec.kind == "translation":
        rng = np.random.default_rng(spec.seed)
        return p + rng.uniform(-spec.level, spec.level, size=3)
    if spec.kind == "noise":
        return add_noise(p, spec.level, spec.seed)
    if spec.kind == "subsample":
        return subsample(p, int(spec.level), spec.seed)
    if spec.kind == "partial":
        return crop_partial(p, spec.level, spec.seed)
    raise ValueError(f"unknown perturbation kind {spec.kind!r}")
