"""Batch embedding of nodes as unitaries and the pairwise similarity matrix."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import GraphError, PadsizeError, UnknownNodeError
from .graph import HermAdjParam, WeightedGraph, ego_distances, ego_matrix, pad_batch, padded_dim
from .kernels import KernelConfig, score
from .linalg import node_unitary

MAX_PADSIZE = 64


@dataclass(frozen=True)
class SimilarityMatrix:
    """Pairwise scores over ``node_ids``.

    ``values`` is upper triangular including the diagonal, which holds the
    self-scores; use :meth:`get` or :func:`heatmap_matrix` for symmetric
    access.
    """

    node_ids: tuple
    values: np.ndarray
    config: KernelConfig
    hops: int
    alpha: HermAdjParam
    padded_dim: int
    ordering: str = "canonical"

    def index(self, v) -> int:
        try:
            return self.node_ids.index(v)
        except ValueError:
            raise UnknownNodeError(f"node {v!r} is not in this matrix") from None

    def get(self, u, v) -> float:
        i, j = sorted((self.index(u), self.index(v)))
        return float(self.values[i, j])

    def to_json(self) -> dict:
        return {
            "node_ids": list(self.node_ids),
            "values": [
                [float(self.values[i, j]) for j in range(i, len(self.node_ids))]
                for i in range(len(self.node_ids))
            ],
            "config": self.config.to_json(),
            "hops": self.hops,
            "alpha": [self.alpha.alpha.real, self.alpha.alpha.imag],
            "padded_dim": self.padded_dim,
            "ordering": self.ordering,
            "diagonal": "self-score",
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["i", "j", "score"])
        n = len(self.node_ids)
        for a in range(n):
            for b in range(a, n):
                writer.writerow([self.node_ids[a], self.node_ids[b], repr(float(self.values[a, b]))])
        return buf.getvalue()


def embed_nodes(
    g: WeightedGraph,
    nodes: Sequence[int],
    h: int = 1,
    alpha: HermAdjParam | None = None,
    batch: Sequence[int] | None = None,
    ordering: str = "canonical",
    jobs: int = 1,
    max_padsize: int = MAX_PADSIZE,
) -> dict:
    """Map each node in ``nodes`` to its :class:`NodeUnitary`.

    The pad size is taken over ``batch`` (default: every node of ``g``)
    together with ``nodes``. Raises :class:`PadsizeError` above
    ``max_padsize``.
    """
    nodes = list(nodes)
    if not nodes:
        raise ValueError("node list is empty")
    if len(set(nodes)) != len(nodes):
        raise GraphError("node list contains duplicates")
    for v in nodes:
        if not g.has_node(v):
            raise UnknownNodeError(f"unknown node id {v!r}")
    batch = g.nodes if batch is None else batch
    pool = list(dict.fromkeys(list(batch) + nodes))
    size = padded_dim(len(ego_distances(g, v, h)) for v in pool)
    if size > max_padsize:
        raise PadsizeError(
            f"ego subgraphs need a {size}x{size} operator (limit {max_padsize}); "
            f"reduce --hops or restrict --batch"
        )
    padded = pad_batch([ego_matrix(g, v, h, alpha, ordering) for v in nodes], size)

    def build(local):
        return node_unitary(local.matrix, anchor=local.anchor)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            unitaries = list(ex.map(build, padded))
    else:
        unitaries = [build(m) for m in padded]
    return dict(zip(nodes, unitaries))


def quop_pairwise(
    g: WeightedGraph,
    nodes: Sequence[int] | None = None,
    h: int = 1,
    alpha: HermAdjParam | None = None,
    cfg: KernelConfig | None = None,
    batch: Sequence[int] | None = None,
    ordering: str = "canonical",
    jobs: int = 1,
    max_padsize: int = MAX_PADSIZE,
) -> SimilarityMatrix:
    """Embed ``nodes`` (default: all) and score every unordered pair."""
    cfg = cfg or KernelConfig()
    alpha = alpha or HermAdjParam()
    nodes = list(g.nodes if nodes is None else nodes)
    us = embed_nodes(g, nodes, h, alpha, batch, ordering, jobs, max_padsize)
    n = len(nodes)
    pairs = [(a, b) for a in range(n) for b in range(a, n)]

    def run(pair):
        a, b = pair
        return score(us[nodes[a]], us[nodes[b]], cfg).value

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            scores = list(ex.map(run, pairs))
    else:
        scores = [run(p) for p in pairs]
    values = np.zeros((n, n))
    for (a, b), s in zip(pairs, scores):
        values[a, b] = s
    values.setflags(write=False)
    size = next(iter(us.values())).dim
    return SimilarityMatrix(tuple(nodes), values, cfg, h, alpha, size, ordering)


def relabel_graph(g: WeightedGraph, perm: Mapping[int, int]) -> WeightedGraph:
    """Rename node ids through the bijection ``perm`` (old id -> new id)."""
    if set(perm) != set(g.nodes) or len(set(perm.values())) != len(perm):
        raise GraphError("relabelling must be a bijection over the graph's nodes")
    return WeightedGraph(
        g.directed,
        tuple(perm[v] for v in g.nodes),
        tuple((perm[u], perm[v], w) for u, v, w in g.edges),
    )


def heatmap_matrix(sim: SimilarityMatrix) -> np.ndarray:
    """Full symmetric matrix, lower triangle mirrored from the upper."""
    upper = np.triu(sim.values)
    return upper + np.triu(upper, 1).T


# -- file formats -------------------------------------------------------------


def read_similarity_csv(path) -> tuple[list, np.ndarray]:
    """Read an ``i,j,score`` file back into ``(node_ids, dense symmetric matrix)``.

    Node order is order of first appearance. Every unordered pair,
    diagonal included, must be present exactly once.
    """
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["i", "j", "score"]:
        raise GraphError(f"{path}: expected header 'i,j,score'")
    entries = {}
    order: dict[int, int] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        try:
            i, j, s = int(row[0]), int(row[1]), float(row[2])
            if len(row) != 3:
                raise ValueError
        except (ValueError, IndexError):
            raise GraphError(f"{path}:{lineno}: malformed row {row!r}") from None
        key = (min(i, j), max(i, j))
        if key in entries:
            raise GraphError(f"{path}:{lineno}: duplicate pair {key}")
        entries[key] = s
        for v in (i, j):
            order.setdefault(v, len(order))
    ids = list(order)
    n = len(ids)
    if len(entries) != n * (n + 1) // 2:
        raise GraphError(f"{path}: expected {n * (n + 1) // 2} pairs for {n} nodes, found {len(entries)}")
    dense = np.zeros((n, n))
    for (i, j), s in entries.items():
        dense[order[i], order[j]] = dense[order[j], order[i]] = s
    return ids, dense


def write_dense_csv(ids, dense, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["node"] + list(ids))
        for v, row in zip(ids, dense):
            writer.writerow([v] + [repr(float(x)) for x in row])


def to_pixels(dense) -> np.ndarray:
    """8-bit grey levels, ``round(255 * score)`` with halves rounded up."""
    levels = np.floor(255.0 * np.asarray(dense, dtype=float) + 0.5)
    return np.clip(levels, 0, 255).astype(np.uint8)


def write_pgm(dense, path) -> None:
    """Binary portable graymap (P5), row i = node i."""
    pix = to_pixels(dense)
    h, w = pix.shape
    Path(path).write_bytes(f"P5\n{w} {h}\n255\n".encode("ascii") + pix.tobytes())


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    magic, dims, maxval, body = data.split(b"\n", 3)
    if magic != b"P5" or maxval != b"255":
        raise ValueError(f"{path}: not an 8-bit P5 graymap")
    w, h = (int(x) for x in dims.split())
    return np.frombuffer(body, dtype=np.uint8).reshape(h, w)


def write_similarity_json(sim: SimilarityMatrix, path) -> None:
    Path(path).write_text(json.dumps(sim.to_json(), indent=1) + "\n")
