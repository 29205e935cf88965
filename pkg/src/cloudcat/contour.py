"""Contour-aware canonicalization of point clouds.

The transform builds an orthonormal, right-handed frame from three
self-referential landmarks of the cloud -- its barycenter plus the farthest
and closest points from it -- and re-expresses every point in that frame.
Because the landmarks move rigidly with the cloud, the output is invariant
to rotating or translating the input.  The construction only breaks down
when the landmark choice is ambiguous (tied extremal distances) or the
landmark vectors are collinear; both conditions are detected and surfaced
rather than hidden.

Frame construction, given barycenter ``b``, farthest point ``f`` and
closest point ``c``:

    axis_far    = f - b
    axis_normal = (c - b) x axis_far
    axis_close  = axis_far x axis_normal

The basis columns are the normalized axes.  ``axis_far`` is orthogonal to
``axis_normal`` by construction, so the three columns are exactly
orthogonal and the frame is right-handed (X x Y = Z).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AllPointsCoincident, DegenerateFrame
from .geometry import as_cloud

DEFAULT_TIE_TOL = 1e-9
DEFAULT_COLLINEAR_TOL = 1e-10

# Below this radius the cloud carries no direction information at all.
_COINCIDENT_TOL = 1e-12


@dataclass(frozen=True)
class ContourFrame:
    """Landmarks, raw axes and the orthonormal basis built from them.

    ``closest`` is the landmark actually used for the frame: normally the
    closest point to the barycenter, but after a degenerate fallback it is
    the nearest point whose direction is not collinear with ``axis_far``.

    ``tie_report`` lists (winner, other) index pairs whose distance to the
    barycenter ties with an extremal distance within the tolerance; an empty
    report is a precondition of the invariance guarantee.
    """

    barycenter: np.ndarray
    farthest: np.ndarray
    closest: np.ndarray
    axis_far: np.ndarray
    axis_normal: np.ndarray
    axis_close: np.ndarray
    basis: np.ndarray
    tie_report: tuple


@dataclass(frozen=True)
class CatResult:
    """Canonicalized cloud plus the frame that produced it."""

    transformed: np.ndarray
    frame: ContourFrame
    degenerate: bool
    reason: str | None


def barycenter(points) -> np.ndarray:
    """Componentwise mean of all points."""
    return as_cloud(points).mean(axis=0)


def _landmark_indices(dist: np.ndarray, tie_tol: float):
    """Extremal winners (lowest index among candidates within tie_tol) and ties.

    Tie tolerance is relative to the cloud radius max(dist), which also
    bounds how much a rigid motion can perturb the distances.
    """
    if not np.all(np.isfinite(dist)):
        raise ValueError("cloud coordinates too large; squared distances overflow")
    scale = float(dist.max())
    if scale < _COINCIDENT_TOL:
        raise AllPointsCoincident("all points coincide with the barycenter")
    far_ties = np.nonzero(scale - dist <= tie_tol * scale)[0]
    close_ties = np.nonzero(dist - dist.min() <= tie_tol * scale)[0]
    far = int(far_ties[0])
    close = int(close_ties[0])
    report = [(far, int(j)) for j in far_ties[1:]]
    report += [(close, int(j)) for j in close_ties[1:]]
    return far, close, tuple(report)


def extremal_points(points, tie_tol: float = DEFAULT_TIE_TOL):
    """Farthest and closest points from the barycenter, plus the tie report.

    Returns ``(farthest, closest, tie_report)``.  Ties within ``tie_tol``
    (relative to the cloud radius) are broken toward the lowest original
    index and reported as (winner, other) pairs.
    """
    p = as_cloud(points)
    if len(p) < 3:
        raise ValueError("need at least 3 points")
    centered = p - p.mean(axis=0)
    dist = np.sqrt(np.einsum("ij,ij->i", centered, centered))
    far, close, report = _landmark_indices(dist, tie_tol)
    return p[far].copy(), p[close].copy(), report


def _build_frame(points, tie_tol: float, collinear_tol: float):
    p = as_cloud(points)
    if len(p) < 3:
        raise ValueError("need at least 3 points")
    center = p.mean(axis=0)
    centered = p - center
    dist = np.sqrt(np.einsum("ij,ij->i", centered, centered))
    far, close, report = _landmark_indices(dist, tie_tol)

    axis_far = centered[far]
    norm_far = float(np.linalg.norm(axis_far))

    def spans_plane(idx):
        raw = centered[idx]
        normal = np.cross(raw, axis_far)
        if np.linalg.norm(normal) > collinear_tol * norm_far * np.linalg.norm(raw):
            return normal
        return None

    # Closest landmark, falling back to the next-nearest point whenever the
    # candidate is collinear with axis_far.  The sorted scan only runs in
    # the degenerate case, keeping the common path O(N).
    chosen, axis_normal = close, spans_plane(close)
    if axis_normal is None:
        chosen = None
        for idx in np.argsort(dist, kind="stable"):
            idx = int(idx)
            if idx == close or idx == far:
                continue
            axis_normal = spans_plane(idx)
            if axis_normal is not None:
                chosen = idx
                break
    if chosen is None:
        raise DegenerateFrame(
            "every point is collinear with the barycenter-to-farthest axis"
        )
    reason = None
    if chosen != close:
        reason = (
            f"closest point (index {close}) is collinear with the farthest axis; "
            f"fell back to index {chosen}"
        )

    axis_close = np.cross(axis_far, axis_normal)
    basis = np.column_stack(
        [
            axis_far / norm_far,
            axis_normal / np.linalg.norm(axis_normal),
            axis_close / np.linalg.norm(axis_close),
        ]
    )
    frame = ContourFrame(
        barycenter=center,
        farthest=p[far].copy(),
        closest=p[chosen].copy(),
        axis_far=axis_far,
        axis_normal=axis_normal,
        axis_close=axis_close,
        basis=basis,
        tie_report=report,
    )
    return frame, reason, centered


def contour_frame(
    points,
    tie_tol: float = DEFAULT_TIE_TOL,
    collinear_tol: float = DEFAULT_COLLINEAR_TOL,
) -> ContourFrame:
    """Self-contour frame of a cloud (N >= 3).

    Raises:
        AllPointsCoincident: if the cloud has no radius.
        DegenerateFrame: if every point is collinear with the farthest axis.
    """
    frame, _, _ = _build_frame(points, tie_tol, collinear_tol)
    return frame


def cat_transform(
    points,
    tie_tol: float = DEFAULT_TIE_TOL,
    collinear_tol: float = DEFAULT_COLLINEAR_TOL,
) -> CatResult:
    """Canonicalize a cloud: re-express every point in its self-contour frame.

    Each output point is ``basis.T @ (p - barycenter)``; order and count are
    preserved, the output barycenter is the origin, and pairwise distances
    are unchanged.  ``degenerate`` is set when the closest landmark had to be
    replaced by a fallback candidate (collinear geometry).
    """
    frame, reason, centered = _build_frame(points, tie_tol, collinear_tol)
    transformed = centered @ frame.basis
    return CatResult(
        transformed=transformed,
        frame=frame,
        degenerate=reason is not None,
        reason=reason,
    )
