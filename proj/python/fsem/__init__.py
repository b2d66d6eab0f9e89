"""Few-shot embedding toolkit."""

from ._fsem import (
    StageError,
    __version__,
    canonical_config,
    classification_report,
    generate_synthetic,
    gmm,
    kmeans,
    pca,
    render_scatter_svg,
    run_experiment,
    run_stage,
    silhouette_score,
    tsne,
    verify_manifest,
)

__all__ = [
    "StageError",
    "__version__",
    "canonical_config",
    "classification_report",
    "generate_synthetic",
    "gmm",
    "kmeans",
    "pca",
    "render_scatter_svg",
    "run_experiment",
    "run_stage",
    "silhouette_score",
    "tsne",
    "verify_manifest",
]
