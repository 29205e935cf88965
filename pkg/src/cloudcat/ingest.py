"""Mesh/point-cloud file parsing, surface sampling and unit-sphere scaling.

Supported formats are ASCII OFF (meshes; polygon faces are fan-triangulated
on load) and ASCII XYZ (one point per row, extra columns ignored).  Both
parsers tolerate ``#`` comments and blank lines and report errors with
1-based line numbers.  The writers emit a canonical numeric format (shortest
round-trip ``repr``), so parse -> write -> parse is bit-exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AllPointsCoincident,
    IndexOutOfRange,
    MalformedHeader,
    NonNumericToken,
    TruncatedFile,
    ZeroAreaMesh,
)
from .geometry import as_cloud


@dataclass(frozen=True)
class TriMesh:
    """Triangulated mesh: (V, 3) float vertices and (F, 3) integer faces."""

    vertices: np.ndarray
    faces: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        f = np.asarray(self.faces, dtype=np.int64).reshape(-1, 3)
        if v.ndim != 2 or v.shape[1] != 3:
            raise ValueError(f"vertices must be (V, 3), got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("vertices have non-finite coordinates")
        if f.size and (f.min() < 0 or f.max() >= len(v)):
            raise ValueError("face index out of range")
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "faces", f)


def _content_lines(text: str):
    """Yield (1-based line number, token list) skipping blanks and comments."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield lineno, body.split()


def _as_text(data) -> str:
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def parse_off(data) -> TriMesh:
    """Parse an ASCII OFF mesh from bytes or str.

    The ``OFF`` header token is optional and may be fused with the counts
    line (``OFF 4 4 0`` on one line, or the common ``OFF4 4 0`` with no
    separator).  Faces with k > 3 vertices are fan-triangulated; face lines
    may carry trailing color values, which are ignored.

    Raises:
        MalformedHeader: bad counts line or non-numeric vertex/face data.
        IndexOutOfRange: face references a vertex index >= V.
        TruncatedFile: file ends before V vertices / F faces are read.
    """
    lines = list(_content_lines(_as_text(data)))
    pos = 0
    if not lines:
        raise TruncatedFile("empty file", 1)

    lineno, tokens = lines[pos]
    if tokens[0] == "OFF":
        if len(tokens) == 1:
            pos += 1
            if pos >= len(lines):
                raise TruncatedFile("missing counts line", lineno + 1)
            lineno, tokens = lines[pos]
        else:
            tokens = tokens[1:]
    elif tokens[0].startswith("OFF"):
        tokens = [tokens[0][3:]] + tokens[1:]

    if len(tokens) < 2:
        raise MalformedHeader("counts line needs vertex and face counts", lineno)
    try:
        n_vertices, n_faces = int(tokens[0]), int(tokens[1])
    except ValueError:
        raise MalformedHeader(f"non-integer counts {tokens[:3]}", lineno) from None
    if n_vertices < 0 or n_faces < 0:
        raise MalformedHeader("negative counts", lineno)
    pos += 1

    vertices = np.empty((n_vertices, 3))
    for i in range(n_vertices):
        if pos >= len(lines):
            raise TruncatedFile(
                f"expected {n_vertices} vertices, file ended after {i}", lineno + 1
            )
        lineno, tokens = lines[pos]
        if len(tokens) < 3:
            raise MalformedHeader("vertex line needs 3 coordinates", lineno)
        try:
            vertices[i] = [float(t) for t in tokens[:3]]
        except ValueError:
            raise MalformedHeader(f"non-numeric vertex {tokens[:3]}", lineno) from None
        pos += 1

    triangles = []
    for i in range(n_faces):
        if pos >= len(lines):
            raise TruncatedFile(
                f"expected {n_faces} faces, file ended after {i}", lineno + 1
            )
        lineno, tokens = lines[pos]
        try:
            k = int(tokens[0])
        except ValueError:
            raise MalformedHeader(f"non-integer face size {tokens[0]!r}", lineno) from None
        if k < 3:
            raise MalformedHeader(f"face needs at least 3 vertices, got {k}", lineno)
        if len(tokens) < 1 + k:
            raise MalformedHeader(
                f"face declares {k} vertices but lists {len(tokens) - 1}", lineno
            )
        try:
            idx = [int(t) for t in tokens[1 : 1 + k]]
        except ValueError:
            raise MalformedHeader("non-integer face index", lineno) from None
        for j in idx:
            if j < 0 or j >= n_vertices:
                raise IndexOutOfRange(
                    f"face index {j} out of range [0, {n_vertices})", lineno
                )
        for j in range(1, k - 1):
            triangles.append((idx[0], idx[j], idx[j + 1]))
        pos += 1

    return TriMesh(vertices, np.array(triangles, dtype=np.int64).reshape(-1, 3))


def write_off(mesh: TriMesh) -> str:
    """Serialize a mesh to canonical OFF text (bit-exact round-trip)."""
    out = ["OFF", f"{len(mesh.vertices)} {len(mesh.faces)} 0"]
    for v in mesh.vertices:
        out.append(f"{float(v[0])!r} {float(v[1])!r} {float(v[2])!r}")
    for f in mesh.faces:
        out.append(f"3 {f[0]} {f[1]} {f[2]}")
    return "\n".join(out) + "\n"


def parse_xyz(data) -> np.ndarray:
    """Parse whitespace-separated coordinate rows into an (N, 3) cloud.

    Rows need at least 3 numeric columns; extra columns are ignored.

    Raises:
        NonNumericToken: a row's first three columns are not all numeric.
        TruncatedFile: no data rows at all.
    """
    rows = []
    for lineno, tokens in _content_lines(_as_text(data)):
        if len(tokens) < 3:
            raise NonNumericToken(f"row has {len(tokens)} columns, need 3", lineno)
        try:
            rows.append([float(t) for t in tokens[:3]])
        except ValueError:
            raise NonNumericToken(f"non-numeric value in {tokens[:3]}", lineno) from None
    if not rows:
        raise TruncatedFile("no data rows", 1)
    return np.array(rows)


def write_xyz(points, digits: int | None = None) -> str:
    """Serialize a cloud to XYZ text.

    With ``digits=None`` coordinates are written as shortest round-trip
    ``repr`` (bit-exact on reparse); otherwise with that many significant
    digits.  In the fixed-digits mode, values below the cloud's resolution
    at that digit count (relative to its largest coordinate) print as 0, so
    rounding noise on exact zeros cannot leak into the output.
    """
    p = as_cloud(points)
    if digits is None:
        fmt = lambda v: repr(float(v))  # noqa: E731
    else:
        threshold = 10.0 ** (-digits) * max(float(np.abs(p).max()), 1e-300)
        p = np.where(np.abs(p) < threshold, 0.0, p)
        fmt = lambda v: format(float(v), f".{digits}g")  # noqa: E731
    return "\n".join(" ".join(fmt(c) for c in row) for row in p) + "\n"


def triangle_areas(mesh: TriMesh) -> np.ndarray:
    """Area of every face."""
    a = mesh.vertices[mesh.faces[:, 0]]
    b = mesh.vertices[mesh.faces[:, 1]]
    c = mesh.vertices[mesh.faces[:, 2]]
    return 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)


def sample_surface(mesh: TriMesh, n: int, seed: int) -> np.ndarray:
    """Sample n points uniformly from the mesh surface.

    Triangles are chosen with probability proportional to area; placement
    within a triangle is uniform (reflected barycentric coordinates).

    Raises:
        ZeroAreaMesh: if the total surface area is zero.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if len(mesh.faces) == 0:
        raise ZeroAreaMesh("mesh has no faces")
    areas = triangle_areas(mesh)
    total = float(areas.sum())
    if total <= 0.0:
        raise ZeroAreaMesh("mesh surface area is zero")

    rng = np.random.default_rng(seed)
    chosen = rng.choice(len(mesh.faces), size=n, p=areas / total)
    u = rng.random(n)
    v = rng.random(n)
    flip = u + v > 1.0
    u[flip] = 1.0 - u[flip]
    v[flip] = 1.0 - v[flip]
    a = mesh.vertices[mesh.faces[chosen, 0]]
    b = mesh.vertices[mesh.faces[chosen, 1]]
    c = mesh.vertices[mesh.faces[chosen, 2]]
    return a + u[:, None] * (b - a) + v[:, None] * (c - a)


def normalize_unit_sphere(points) -> np.ndarray:
    """Center the cloud on its barycenter and scale the max radius to 1.

    Raises:
        AllPointsCoincident: if the cloud has zero radius.
    """
    p = as_cloud(points)
    centered = p - p.mean(axis=0)
    radius = float(np.linalg.norm(centered, axis=1).max())
    if radius < 1e-12:
        raise AllPointsCoincident("cannot scale a cloud with zero radius")
    return centered / radius
