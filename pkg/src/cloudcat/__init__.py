"""Rotation/translation-invariant point-cloud canonicalization.

The core transform re-expresses a cloud in an orthonormal frame built from
its own contour landmarks (barycenter, farthest and closest points), which
makes the output provably invariant to rigid motions of the input.  On top
of that sit a learned frame-alignment stage, a PCA baseline for contrast,
perturbation generators, mesh/point-cloud ingestion, and a benchmark CLI.
"""

__version__ = "0.1.0"

from .contour import CatResult, ContourFrame, barycenter, cat_transform, contour_frame, extremal_points
from .errors import (
    AllPointsCoincident,
    CloudcatError,
    ConfigError,
    DegenerateFrame,
    EigenFailure,
    IndexOutOfRange,
    InvalidCount,
    InvalidQuaternion,
    MalformedHeader,
    NonNumericToken,
    ParseError,
    TrainingDiverged,
    TruncatedFile,
    ZeroAreaMesh,
)
from .frame_align import (
    ClassifierParams,
    FaParams,
    MlpLayer,
    TrainConfig,
    accuracy,
    cat_fa_transform,
    classifier_logits,
    contour_encode,
    fa_transform,
    grad_check,
    load_checkpoint,
    predict_labels,
    regress_frame,
    save_checkpoint,
    train_toy,
)
from .geometry import (
    RigidMotion,
    apply_rigid,
    as_cloud,
    as_vec3,
    cross_matrix,
    is_rotation_matrix,
    quat_to_rotation,
    random_rotation,
    rotation_from_rng,
)
from .ingest import (
    TriMesh,
    normalize_unit_sphere,
    parse_off,
    parse_xyz,
    sample_surface,
    triangle_areas,
    write_off,
    write_xyz,
)
from .pca import PcaFrame, covariance, pca_normalize
from .perturb import (
    PerturbSpec,
    add_noise,
    apply_perturbation,
    crop_partial,
    crop_partial_indices,
    random_rigid,
    subsample,
    subsample_indices,
)
from .report import BenchReport, TrialRecord, aggregate_records
from .shapes import (
    SHAPE_KINDS,
    ShapeDataset,
    box_mesh,
    cylinder_mesh,
    ellipsoid_mesh,
    make_dataset,
    sample_shape_cloud,
)
