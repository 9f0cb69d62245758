"""FastRP node embeddings and cosine similarity, the classical comparison.

Very sparse random projection (Chen et al., 2019): a random matrix with
entries ``sqrt(s) * {+1, 0, -1}`` drawn with probabilities
``{1/(2s), 1 - 1/s, 1/(2s)}`` is propagated through the degree-normalised
adjacency ``D^-1 A``. Each propagation step is L2-normalised row by row
and the steps are mixed with ``iteration_weights``.

Rows of the random matrix are indexed by node position, so relabelling a
graph reorders nodes against a different set of random rows. Unlike the
operator embedding, FastRP is not invariant under relabelling.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import WeightedGraph

DEFAULT_ITERATION_WEIGHTS = (0.0, 0.0, 1.0, 3.0)
DEFAULT_DIM = 16
SPARSITY = 3.0


class ZeroVectorWarning(UserWarning):
    pass


@dataclass(frozen=True)
class EmbeddingSet:
    node_ids: tuple
    dim: int
    vectors: np.ndarray
    seed: int | None
    iteration_weights: tuple

    def vector(self, v) -> np.ndarray:
        return self.vectors[self.node_ids.index(v)]

    def to_csv(self) -> str:
        lines = [",".join(["node_id"] + [f"x_{k}" for k in range(self.dim)])]
        for v, row in zip(self.node_ids, self.vectors):
            lines.append(",".join([str(v)] + [repr(float(x)) for x in row]))
        return "\n".join(lines) + "\n"


def sparse_projection(n: int, dim: int, seed: int, s: float = SPARSITY) -> np.ndarray:
    rng = np.random.default_rng(seed)
    root = math.sqrt(s)
    return rng.choice(
        [root, 0.0, -root], size=(n, dim), p=[1 / (2 * s), 1 - 1 / s, 1 / (2 * s)]
    )


def _normalize_rows(x: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    return np.divide(x, norms, out=np.zeros_like(x), where=norms > 0)


def fastrp_embed(
    g: WeightedGraph,
    dim: int = DEFAULT_DIM,
    iteration_weights: Sequence[float] = DEFAULT_ITERATION_WEIGHTS,
    seed: int = 0,
) -> EmbeddingSet:
    if g.n_nodes == 0:
        raise ValueError("cannot embed an empty graph")
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    weights = tuple(float(w) for w in iteration_weights)
    if not weights:
        raise ValueError("iteration_weights must not be empty")

    a = g.adjacency()
    if g.directed:
        # propagate along the underlying undirected structure
        a = a + a.T
    deg = a.sum(axis=1, keepdims=True)
    trans = np.divide(a, deg, out=np.zeros_like(a), where=deg != 0)

    x = sparse_projection(g.n_nodes, dim, seed)
    out = np.zeros((g.n_nodes, dim))
    for w in weights:
        x = _normalize_rows(trans @ x)
        out += w * x
    return EmbeddingSet(tuple(g.nodes), dim, out, seed, weights)


def cosine(u, v) -> float:
    """Cosine similarity; 0.0 with a :class:`ZeroVectorWarning` if either vector is zero."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        warnings.warn("cosine of a zero vector is defined as 0.0", ZeroVectorWarning, stacklevel=2)
        return 0.0
    c = float(np.dot(u / nu, v / nv))
    return min(1.0, max(-1.0, c))


def read_embedding_csv(path) -> EmbeddingSet:
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows or rows[0][0].strip() != "node_id":
        raise ValueError(f"{path}: expected a 'node_id,x_0,...' header")
    dim = len(rows[0]) - 1
    ids, vecs = [], []
    for lineno, r in enumerate(rows[1:], start=2):
        if len(r) != dim + 1:
            raise ValueError(f"{path}:{lineno}: expected {dim + 1} columns, got {len(r)}")
        ids.append(int(r[0]))
        vecs.append([float(x) for x in r[1:]])
    return EmbeddingSet(tuple(ids), dim, np.array(vecs).reshape(len(ids), dim), None, ())
