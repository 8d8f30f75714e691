"""Percolation, spectral bounds and minimal spanning forests on Cayley graph balls."""

__version__ = "0.1.0"

from .presentations import (GroupPresentation, parse_presentation,
                            lattice_presentation, free_presentation,
                            matrix_presentation, kfold_family, lazify)
from .balls import CayleyBall, enumerate_ball
from .walks import (WalkDistribution, SpectralEstimate, return_probabilities,
                    spectral_radius, kfold_spectral_check, mohar_lower_bound)
from .isoperimetry import IsoperimetricReport, isoperimetric_search, boundary_ratio
from .percolation import (EdgeLabeling, Configuration, ClusterPartition, ClusterCensus,
                          sample_labels, threshold, find_clusters, cluster_census,
                          coupled_containment, graphing_cost, percolate_sweep)
from .estimators import (PcEstimate, estimate_pc, relative_pc,
                         estimate_pc_invasion, estimate_pc_crossing)
from .exploration import ExplorationTrace, exploration_sequence, pooled_bits
from .forests import (Forest, ForestStats, msf_free, msf_wired, f_value, w_value,
                      forest_stats, fmsf_wmsf_gap)
from .cycles import CycleCensus, count_simple_cycles, gamma_estimate
from .bounds import BoundReport, bound_chain, pak_smirnova_k

__all__ = [
    "GroupPresentation", "parse_presentation", "lattice_presentation",
    "free_presentation", "matrix_presentation", "kfold_family", "lazify",
    "CayleyBall", "enumerate_ball",
    "WalkDistribution", "SpectralEstimate", "return_probabilities",
    "spectral_radius", "kfold_spectral_check", "mohar_lower_bound",
    "IsoperimetricReport", "isoperimetric_search", "boundary_ratio",
    "EdgeLabeling", "Configuration", "ClusterPartition", "ClusterCensus",
    "sample_labels", "threshold", "find_clusters", "cluster_census",
    "coupled_containment", "graphing_cost", "percolate_sweep",
    "PcEstimate", "estimate_pc", "relative_pc",
    "estimate_pc_invasion", "estimate_pc_crossing",
    "ExplorationTrace", "exploration_sequence", "pooled_bits",
    "Forest", "ForestStats", "msf_free", "msf_wired", "f_value", "w_value",
    "forest_stats", "fmsf_wmsf_gap",
    "CycleCensus", "count_simple_cycles", "gamma_estimate",
    "BoundReport", "bound_chain", "pak_smirnova_k",
]
