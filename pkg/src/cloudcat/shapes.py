"""Synthetic labeled shapes (boxes, cylinders, ellipsoids) for desk-scale runs.

Each cloud is sampled uniformly from a triangulated surface with seeded
random proportions, then centered and scaled into the unit sphere, so only
shape -- not pose or size -- separates the classes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ingest import TriMesh, normalize_unit_sphere, sample_surface

SHAPE_KINDS = ("box", "cylinder", "ellipsoid")


def box_mesh(extents) -> TriMesh:
    """Axis-aligned box with side lengths ``extents``, centered at the origin."""
    ex, ey, ez = (float(e) / 2.0 for e in extents)
    corners = np.array(
        [[sx, sy, sz] for sx in (-ex, ex) for sy in (-ey, ey) for sz in (-ez, ez)]
    )
    quads = [
        (0, 1, 3, 2),  # -x
        (4, 6, 7, 5),  # +x
        (0, 4, 5, 1),  # -y
        (2, 3, 7, 6),  # +y
        (0, 2, 6, 4),  # -z
        (1, 5, 7, 3),  # +z
    ]
    faces = []
    for a, b, c, d in quads:
        faces.append((a, b, c))
        faces.append((a, c, d))
    return TriMesh(corners, np.array(faces))


def cylinder_mesh(radius: float, height: float, segments: int = 48) -> TriMesh:
    """Closed cylinder along z, centered at the origin."""
    if segments < 3:
        raise ValueError("need at least 3 segments")
    angles = 2.0 * np.pi * np.arange(segments) / segments
    ring = np.column_stack([radius * np.cos(angles), radius * np.sin(angles)])
    bottom = np.column_stack([ring, np.full(segments, -height / 2.0)])
    top = np.column_stack([ring, np.full(segments, height / 2.0)])
    centers = np.array([[0.0, 0.0, -height / 2.0], [0.0, 0.0, height / 2.0]])
    vertices = np.vstack([bottom, top, centers])
    c_bot, c_top = 2 * segments, 2 * segments + 1

    faces = []
    for i in range(segments):
        j = (i + 1) % segments
        faces.append((i, j, segments + j))  # lateral quad, lower triangle
        faces.append((i, segments + j, segments + i))  # lateral quad, upper
        faces.append((c_bot, j, i))
        faces.append((c_top, segments + i, segments + j))
    return TriMesh(vertices, np.array(faces))


def ellipsoid_mesh(semiaxes, rings: int = 12, segments: int = 24) -> TriMesh:
    """Triaxial ellipsoid (UV-sphere triangulation scaled by ``semiaxes``)."""
    if rings < 2 or segments < 3:
        raise ValueError("need rings >= 2 and segments >= 3")
    ax = np.asarray(semiaxes, dtype=float)
    vertices = [np.array([0.0, 0.0, 1.0])]
    for r in range(1, rings):
        phi = np.pi * r / rings
        for s in range(segments):
            theta = 2.0 * np.pi * s / segments
            vertices.append(
                np.array(
                    [
                        np.sin(phi) * np.cos(theta),
                        np.sin(phi) * np.sin(theta),
                        np.cos(phi),
                    ]
                )
            )
    vertices.append(np.array([0.0, 0.0, -1.0]))
    vertices = np.array(vertices) * ax
    south = len(vertices) - 1

    def ring_vertex(r, s):
        return 1 + (r - 1) * segments + (s % segments)

    faces = []
    for s in range(segments):
        faces.append((0, ring_vertex(1, s), ring_vertex(1, s + 1)))
        faces.append((south, ring_vertex(rings - 1, s + 1), ring_vertex(rings - 1, s)))
    for r in range(1, rings - 1):
        for s in range(segments):
            a = ring_vertex(r, s)
            b = ring_vertex(r, s + 1)
            c = ring_vertex(r + 1, s)
            d = ring_vertex(r + 1, s + 1)
            faces.append((a, b, d))
            faces.append((a, d, c))
    return TriMesh(vertices, np.array(faces))


def random_shape_mesh(kind: str, rng: np.random.Generator) -> TriMesh:
    """Mesh of one shape class with random proportions drawn from ``rng``.

    Proportion ranges keep the three classes geometrically distinct while
    varying enough that memorizing single instances cannot separate them.
    """
    if kind == "box":
        return box_mesh((1.0, rng.uniform(0.45, 0.7), rng.uniform(0.15, 0.35)))
    if kind == "cylinder":
        return cylinder_mesh(radius=rng.uniform(0.25, 0.4), height=rng.uniform(1.3, 2.0))
    if kind == "ellipsoid":
        return ellipsoid_mesh((1.0, rng.uniform(0.55, 0.8), rng.uniform(0.3, 0.5)))
    raise ValueError(f"unknown shape kind {kind!r}")


def sample_shape_cloud(kind: str, n_points: int, seed: int) -> np.ndarray:
    """One normalized cloud of the given class, deterministic per seed."""
    rng = np.random.default_rng(seed)
    mesh = random_shape_mesh(kind, rng)
    points = sample_surface(mesh, n_points, int(rng.integers(2**63)))
    return normalize_unit_sphere(points)


@dataclass(frozen=True)
class ShapeDataset:
    """Clouds with integer labels indexing into SHAPE_KINDS."""

    clouds: list
    labels: np.ndarray
    num_classes: int


def make_dataset(per_class: int, n_points: int, seed: int) -> ShapeDataset:
    """Balanced dataset of ``per_class`` clouds for each shape class."""
    rng = np.random.default_rng(seed)
    clouds = []
    labels = []
    for label, kind in enumerate(SHAPE_KINDS):
        for _ in range(per_class):
            clouds.append(sample_shape_cloud(kind, n_points, int(rng.integers(2**63))))
            labels.append(label)
    return ShapeDataset(clouds=clouds, labels=np.array(labels), num_classes=len(SHAPE_KINDS))
