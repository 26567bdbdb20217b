"""Clustering and classification protocols with their metrics."""

from .cluster import cut_tree, minmax_scale, pca_fit, pca_project, ward_cluster, ward_linkage
from .logreg import LogRegModel, logreg_fit, logreg_predict
from .metrics import ami, ari, confusion_matrix, contingency, f1_per_class, matched_accuracy
from .protocols import ClassifyReport, ClusterReport, protocol_A, protocol_BC, stratified_split

__all__ = [
    "ClassifyReport", "ClusterReport", "LogRegModel", "ami", "ari", "confusion_matrix", "contingency",
    "cut_tree", "f1_per_class", "logreg_fit", "logreg_predict", "matched_accuracy", "minmax_scale",
    "pca_fit", "pca_project", "protocol_A", "protocol_BC", "stratified_split", "ward_cluster",
    "ward_linkage",
]
