"""Graph nodes as special unitary operators, compared with quantum kernels."""

__version__ = "0.1.0"

from .baseline import EmbeddingSet, cosine, fastrp_embed
from .graph import (
    HermAdjParam,
    LocalHermitian,
    WeightedGraph,
    ego_nodes,
    erdos_renyi_weighted,
    herm_adj,
    karate_club,
    load_graph,
    local_adjacency,
    pad_batch,
)
from .kernels import KernelConfig, SimilarityScore, fidelity_exact, fidelity_sampled, swap_test
from .linalg import NodeUnitary, eigh, expm_neg_i, expm_taylor_oracle
from .pipeline import SimilarityMatrix, heatmap_matrix, quop_pairwise, relabel_graph
