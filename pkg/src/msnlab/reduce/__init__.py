"""Reduction moves, certificates and the certificate generators."""

from .certificate import Builder, CheckResult, ReductionCertificate, check_certificate, replay
from .moves import (
    AddEdge, MergeIntoS, MergeIntoT, Move, MoveError, RemoveUselessEdges, ReplaceEdgeWithSinkT,
    ReplaceEdgeWithSourceS, apply_move, is_useless, merge, move_from_json,
)
from .paths import (
    DepthLabeling, NotATreeError, depth_labeling, dplen_path_certificate, end_path, sqrt_path_certificate, straighten,
)
from .trees import (
    GraphSequence, chunk_into_paths, final_shape_ok, flowout_lower_certificate, is_disjoint_st_paths,
    thm51_lower_certificates, upper_graph_sequence,
)

__all__ = [
    "Builder", "CheckResult", "ReductionCertificate", "check_certificate", "replay",
    "AddEdge", "MergeIntoS", "MergeIntoT", "Move", "MoveError", "RemoveUselessEdges",
    "ReplaceEdgeWithSinkT", "ReplaceEdgeWithSourceS", "apply_move", "is_useless", "merge", "move_from_json",
    "DepthLabeling", "NotATreeError", "depth_labeling", "dplen_path_certificate", "end_path",
    "sqrt_path_certificate", "straighten",
    "GraphSequence", "chunk_into_paths", "final_shape_ok", "flowout_lower_certificate", "is_disjoint_st_paths",
    "thm51_lower_certificates", "upper_graph_sequence",
]
