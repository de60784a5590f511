"""Deformation-based drift detection for vector-space data."""
from .core import BaselineSummary, DriftConfig, PointCloud, fit_baseline, validate_cloud
from .density import (
    DensityModel,
    cosine_deformation,
    density_difference,
    frequency_l2,
    frequency_wasserstein,
    kde_density,
    kl_discrete,
    kl_divergence,
    model_from_cloud,
    wasserstein_1d,
    wasserstein_per_feature,
)
from .displacement import ForceField, average_displacement, force_field
from .geometry import Projection, SnapshotSeries, convex_hull_2d, fit_projection, hull_area, in_hull, snapshot_series
from .ingest import EmbeddingTable, TokenizedText, embed_text, load_csv, load_embedding_table, tokenize
from .monitor import DeformationReport, RunningStats, evaluate_batch, merge, update
from .shape import (
    ShapeDeformation,
    compare_shapes,
    composite_index,
    covariance_shift,
    eigen_ratios,
    mean_shift,
    rotation_angles,
)
from .strain import StrainSample, StrainSummary, displacement_at, strain_at, strain_summary
from .textdrift import text_drift

__version__ = "0.1.0"
