"""Density-sensitive shortest-path metrics and semi-supervised classifiers.

The heavy lifting lives in the compiled ``_core`` extension; this package
re-exports its public surface.
"""

from ._core import (
    Embedding,
    FermatMatrix,
    __version__,
    choose_target_dim,
    classical_mds,
    default_graph_k,
    default_k,
    estimate_intrinsic_dim,
    fd_svm_predict,
    fermat_matrix,
    sample_labeled_indices,
    select_sigma_cv,
    sigma_grid,
    two_moon,
    vmf_clusters,
    weighted_knn_predict,
)

__all__ = [
    "Embedding",
    "FermatMatrix",
    "__version__",
    "choose_target_dim",
    "classical_mds",
    "default_graph_k",
    "default_k",
    "estimate_intrinsic_dim",
    "fd_svm_predict",
    "fermat_matrix",
    "sample_labeled_indices",
    "select_sigma_cv",
    "sigma_grid",
    "two_moon",
    "vmf_clusters",
    "weighted_knn_predict",
]
