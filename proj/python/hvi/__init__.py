"""Python bindings for the hvi library."""

import json

from ._core import (
    BoundSpec,
    ImportanceBatch,
    IntegrationRule,
    LocalEvidenceEstimate,
    Model,
    PartitionSchedule,
    PathSpec,
    QuadratureTable,
    ThermodynamicEstimate,
    compute_bounds,
    default_test_betas,
    draw_batch,
    elbo,
    eubo,
    evaluate_bound,
    iw_elbo,
    local_evidence,
    model_ids,
    rvi,
    thermodynamic_integral,
    tune_alpha_bisect,
    tune_alpha_grid,
    wasserstein_bounds,
)
from ._core import _make_model


def make_model(model_id, params=None):
    """Build a registered model; params is a JSON-serializable dict."""
    return _make_model(model_id, json.dumps(params or {}))


__all__ = [
    "BoundSpec",
    "ImportanceBatch",
    "IntegrationRule",
    "LocalEvidenceEstimate",
    "Model",
    "PartitionSchedule",
    "PathSpec",
    "QuadratureTable",
    "ThermodynamicEstimate",
    "compute_bounds",
    "default_test_betas",
    "draw_batch",
    "elbo",
    "eubo",
    "evaluate_bound",
    "iw_elbo",
    "local_evidence",
    "make_model",
    "model_ids",
    "rvi",
    "thermodynamic_integral",
    "tune_alpha_bisect",
    "tune_alpha_grid",
    "wasserstein_bounds",
]
