"""Exact SO(3)/quaternion arithmetic and rigid motions on point clouds.

Conventions:
    * Point clouds are ``(N, 3)`` float64 arrays, one point per row.
    * Rotations are 3x3 matrices acting on column vectors; applying R to a
      cloud of row vectors is ``points @ R.T``.
    * Quaternions are length-4 arrays ``[q0, q1, q2, q3]``, scalar part first.

All functions are pure; every stochastic operation takes an explicit seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidQuaternion

# Tolerance for SO(3) membership (orthonormality and unit determinant).
ROTATION_TOL = 1e-12

# Quaternion norms below this would underflow when squared; treated as zero.
_MIN_QUAT_NORM = float(np.sqrt(np.finfo(float).tiny))


def as_vec3(x) -> np.ndarray:
    """Coerce to a finite float64 3-vector."""
    v = np.asarray(x, dtype=float).reshape(-1)
    if v.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {np.shape(x)}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite components")
    return v


def as_cloud(points) -> np.ndarray:
    """Coerce to a finite (N, 3) float64 cloud with N >= 1."""
    p = np.asarray(points, dtype=float)
    if p.ndim != 2 or p.shape[1] != 3 or p.shape[0] < 1:
        raise ValueError(f"expected an (N, 3) cloud with N >= 1, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("cloud has non-finite coordinates")
    return p


def cross_matrix(x) -> np.ndarray:
    """Skew-symmetric matrix [x]_x with ``cross_matrix(x) @ y == x cross y``."""
    x1, x2, x3 = as_vec3(x)
    return np.array(
        [
            [0.0, -x3, x2],
            [x3, 0.0, -x1],
            [-x2, x1, 0.0],
        ]
    )


def quat_to_rotation(q) -> np.ndarray:
    """Rotation matrix of a quaternion.

    The quaternion is normalized internally, so any nonzero 4-vector is
    accepted (e.g. the raw output of a regression head).  ``q`` and ``-q``
    produce bitwise-identical matrices.

    Raises:
        InvalidQuaternion: if the norm is zero or too small to normalize.
    """
    q = np.asarray(q, dtype=float).reshape(-1)
    if q.shape != (4,):
        raise InvalidQuaternion(f"expected 4 components, got shape {q.shape}")
    if not np.all(np.isfinite(q)):
        raise InvalidQuaternion("quaternion has non-finite components")
    norm = float(np.linalg.norm(q))
    if norm < _MIN_QUAT_NORM:
        raise InvalidQuaternion("quaternion norm is zero")
    w, x, y, z = q / norm
    return np.array(
        [
            [1 - 2 * y * y - 2 * z * z, 2 * x * y - 2 * z * w, 2 * x * z + 2 * y * w],
            [2 * x * y + 2 * z * w, 1 - 2 * x * x - 2 * z * z, 2 * y * z - 2 * x * w],
            [2 * x * z - 2 * y * w, 2 * y * z + 2 * x * w, 1 - 2 * x * x - 2 * y * y],
        ]
    )


def rotation_from_rng(rng: np.random.Generator) -> np.ndarray:
    """Haar-uniform rotation drawn from ``rng`` (normalized Gaussian quaternion)."""
    while True:
        q = rng.standard_normal(4)
        if np.linalg.norm(q) > 1e-6:
            return quat_to_rotation(q)


def random_rotation(seed: int) -> np.ndarray:
    """Haar-uniform random rotation, deterministic for a fixed seed."""
    return rotation_from_rng(np.random.default_rng(seed))


def is_rotation_matrix(m, tol: float = ROTATION_TOL) -> bool:
    """True when m is orthonormal with determinant +1 within ``tol``."""
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        return False
    if np.max(np.abs(m.T @ m - np.eye(3))) > tol:
        return False
    return abs(float(np.linalg.det(m)) - 1.0) <= tol


@dataclass(frozen=True)
class RigidMotion:
    """A rotation followed by a translation: p -> R p + t."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.rotation, dtype=float)
        if not is_rotation_matrix(r):
            raise ValueError("rotation must be in SO(3) within 1e-12")
        object.__setattr__(self, "rotation", r)
        object.__setattr__(self, "translation", as_vec3(self.translation))

    @classmethod
    def identity(cls) -> "RigidMotion":
        return cls(np.eye(3), np.zeros(3))

    def compose(self, inner: "RigidMotion") -> "RigidMotion":
        """Motion equivalent to applying ``inner`` first, then ``self``."""
        return RigidMotion(
            self.rotation @ inner.rotation,
            self.rotation @ inner.translation + self.translation,
        )


def apply_rigid(points, motion: RigidMotion) -> np.ndarray:
    """Apply p -> R p + t to every point; order and count are preserved."""
    return as_cloud(points) @ motion.rotation.T + motion.translation
