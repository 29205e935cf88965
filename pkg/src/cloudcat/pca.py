"""PCA pose normalization, the classical contrast case.

PCA aligns a cloud to the eigenvectors of its covariance.  Eigenvectors are
only defined up to sign, so a deterministic sign convention is required --
and exactly that convention makes the method rotation-VARIANT: a rotation of
the input can flip which sign the convention picks, changing the output by
an axis reflection.  The contour-based transform has no such ambiguity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EigenFailure
from .geometry import as_cloud

# Adjacent eigenvalue gaps below this fraction of the largest eigenvalue
# make the eigenbasis ill-determined.
NEAR_DEGENERATE_GAP = 1e-8


@dataclass(frozen=True)
class PcaFrame:
    """Mean, descending eigenvalues and sign-fixed eigenvector basis."""

    mean: np.ndarray
    eigenvalues: np.ndarray
    basis: np.ndarray
    near_degenerate: bool


def covariance(points) -> np.ndarray:
    """Biased (1/N) covariance of the cloud about its mean; N >= 2."""
    p = as_cloud(points)
    if len(p) < 2:
        raise ValueError("need at least 2 points")
    centered = p - p.mean(axis=0)
    cov = centered.T @ centered / len(p)
    # Enforce exact symmetry; matmul rounding can differ across the diagonal.
    return (cov + cov.T) / 2.0


def pca_normalize(points):
    """Align a cloud to its principal axes.

    Eigenvalues are sorted descending.  Each eigenvector is flipped so that
    its largest-magnitude component is positive (ties broken toward +x, then
    +y, then +z); if the resulting basis has negative determinant, the third
    column is negated.  Returns ``(transformed, PcaFrame)`` where
    ``transformed = (points - mean) @ basis``.

    Raises:
        EigenFailure: if the covariance has non-finite entries.
    """
    p = as_cloud(points)
    if len(p) < 4:
        raise ValueError("need at least 4 points")
    mean = p.mean(axis=0)
    cov = covariance(p)
    if not np.all(np.isfinite(cov)):
        raise EigenFailure("covariance has non-finite entries")

    eigenvalues, vectors = np.linalg.eigh(cov)
    order = np.argsort(eigenvalues, kind="stable")[::-1]
    eigenvalues = eigenvalues[order]
    basis = vectors[:, order]

    for k in range(3):
        col = basis[:, k]
        lead = int(np.argmax(np.abs(col)))  # first index wins magnitude ties
        if col[lead] < 0:
            basis[:, k] = -col
    if np.linalg.det(basis) < 0:
        basis[:, 2] = -basis[:, 2]

    gaps = eigenvalues[:-1] - eigenvalues[1:]
    near_degenerate = bool(np.any(gaps < NEAR_DEGENERATE_GAP * eigenvalues[0]))

    frame = PcaFrame(
        mean=mean,
        eigenvalues=eigenvalues,
        basis=basis,
        near_degenerate=near_degenerate,
    )
    return (p - mean) @ basis, frame
