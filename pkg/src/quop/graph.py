"""Weighted graphs, ego neighbourhoods and the local Hermitian generators.

Every node is turned into a small Hermitian matrix: the adjacency of its
h-hop ego subgraph, made Hermitian for directed graphs, and zero padded
to a power-of-two size so that it can act on a register of qubits.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import GraphError, GraphParseError, UnknownNodeError

KARATE_MAX_WEIGHT = 6.0
ORDERINGS = ("canonical", "id")


@dataclass(frozen=True)
class HermAdjParam:
    """Unit-modulus phase ``alpha = a + bi`` with ``a >= 0``.

    The default ``alpha = i`` gives the classical Hermitian adjacency
    (``+i`` on an arc, ``-i`` on its reverse).
    """

    alpha: complex = 1j

    def __post_init__(self):
        a = complex(self.alpha)
        if not (math.isfinite(a.real) and math.isfinite(a.imag)):
            raise ValueError(f"alpha must be finite, got {a}")
        if abs(abs(a) - 1.0) > 1e-12:
            raise ValueError(f"|alpha| must be 1, got {abs(a)!r}")
        if a.real < 0:
            raise ValueError(f"Re(alpha) must be >= 0, got {a.real!r}")
        object.__setattr__(self, "alpha", a)

    @classmethod
    def from_parts(cls, re: float, im: float) -> "HermAdjParam":
        return cls(complex(re, im))


@dataclass(frozen=True)
class WeightedGraph:
    """Immutable weighted graph with integer node ids.

    ``edges`` holds ``(source, target, weight)`` triples. An undirected
    graph stores each edge once; lookups through :meth:`weight` see it in
    both directions.
    """

    directed: bool
    nodes: tuple
    edges: tuple
    _weights: dict = field(init=False, repr=False, compare=False)
    _nbrs: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        nodes = tuple(_as_node_id(v) for v in self.nodes)
        if len(set(nodes)) != len(nodes):
            raise GraphError("duplicate node ids")
        node_set = set(nodes)
        weights: dict[tuple[int, int], float] = {}
        nbrs: dict[int, set] = {v: set() for v in nodes}
        edges = []
        for e in self.edges:
            u, v, w = _as_node_id(e[0]), _as_node_id(e[1]), float(e[2])
            if u not in node_set or v not in node_set:
                missing = u if u not in node_set else v
                raise UnknownNodeError(f"edge ({u}, {v}) references unknown node {missing}")
            if u == v:
                raise GraphError(f"self-loop on node {u} is not allowed")
            if not math.isfinite(w):
                raise GraphError(f"edge ({u}, {v}) has non-finite weight {w}")
            key = (u, v) if self.directed else (min(u, v), max(u, v))
            if key in weights:
                raise GraphError(f"duplicate edge ({u}, {v})")
            weights[key] = w
            nbrs[u].add(v)
            nbrs[v].add(u)
            edges.append((u, v, w))
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "_weights", weights)
        object.__setattr__(self, "_nbrs", {v: frozenset(s) for v, s in nbrs.items()})

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def has_node(self, v) -> bool:
        return v in self._nbrs

    def _check(self, v):
        if v not in self._nbrs:
            raise UnknownNodeError(f"unknown node id {v!r}")

    def weight(self, u, v) -> float:
        """Weight ``a_uv`` (0.0 when there is no edge from u to v)."""
        if self.directed:
            return self._weights.get((u, v), 0.0)
        return self._weights.get((min(u, v), max(u, v)), 0.0)

    def neighbors(self, v) -> frozenset:
        """Neighbours in the underlying undirected graph."""
        self._check(v)
        return self._nbrs[v]

    def degree(self, v) -> int:
        return len(self.neighbors(v))

    def adjacency(self, order: Sequence[int] | None = None) -> np.ndarray:
        order = list(self.nodes if order is None else order)
        index = {v: i for i, v in enumerate(order)}
        a = np.zeros((len(order), len(order)))
        for (u, v), w in self._weights.items():
            if u in index and v in index:
                a[index[u], index[v]] = w
                if not self.directed:
                    a[index[v], index[u]] = w
        return a

    def to_json(self) -> dict:
        return {
            "directed": self.directed,
            "nodes": list(self.nodes),
            "edges": [[u, v, w] for u, v, w in self.edges],
        }


def _as_node_id(v) -> int:
    if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
        raise GraphError(f"node ids must be integers, got {v!r}")
    return int(v)


# -- generators and fixtures -------------------------------------------------


def erdos_renyi_weighted(n: int, p: float, seed: int) -> WeightedGraph:
    """G(n, p) graph with weights drawn uniformly from the open interval (0, 1)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    keep = rng.random(len(pairs)) < p
    weights = rng.random(len(pairs))
    # rng.random() samples [0, 1); zero is excluded by resampling
    while np.any(weights == 0.0):
        zeros = weights == 0.0
        weights[zeros] = rng.random(int(zeros.sum()))
    edges = [(i, j, float(w)) for (i, j), k, w in zip(pairs, keep, weights) if k]
    return WeightedGraph(False, tuple(range(n)), tuple(edges))


def karate_club(divisor: float = KARATE_MAX_WEIGHT) -> WeightedGraph:
    """Zachary's karate club with interaction counts rescaled to ``w * pi / divisor``.

    The shipped counts are the published ones; note that their maximum is 7
    (members 25 and 31), so the default divisor of 6 yields a largest
    rescaled weight of 7*pi/6. Pass ``divisor=7`` to map the maximum to pi.
    """
    text = resources.files("quop.data").joinpath("karate.edgelist").read_text()
    raw = parse_edgelist(text, directed=False)
    scale = math.pi / divisor
    return WeightedGraph(False, raw.nodes, tuple((u, v, w * scale) for u, v, w in raw.edges))


# -- ingestion ----------------------------------------------------------------


def parse_edgelist(
    text: str, directed: bool = False, normalize: bool = False, path=None
) -> WeightedGraph:
    """Parse ``u v w`` lines; ``#`` starts a comment, blank lines are skipped.

    Nodes are the endpoints that appear, in ascending order. With
    ``normalize`` every weight is divided by the largest absolute weight.
    """
    edges = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise GraphParseError(f"expected 'u v w', got {line!r}", lineno, path)
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2])
        except ValueError:
            raise GraphParseError(f"cannot parse {line!r}", lineno, path) from None
        if u == v:
            raise GraphParseError(f"self-loop on node {u}", lineno, path)
        if not math.isfinite(w):
            raise GraphParseError(f"non-finite weight {parts[2]!r}", lineno, path)
        key = (u, v) if directed else (min(u, v), max(u, v))
        if key in seen:
            raise GraphParseError(
                f"duplicate edge ({u}, {v}), first seen on line {seen[key]}", lineno, path
            )
        seen[key] = lineno
        edges.append((u, v, w))
    if normalize and edges:
        top = max(abs(w) for _, _, w in edges)
        if top == 0.0:
            raise GraphError("cannot normalise: all weights are zero")
        edges = [(u, v, w / top) for u, v, w in edges]
    nodes = sorted({u for u, _, _ in edges} | {v for _, v, _ in edges})
    return WeightedGraph(directed, tuple(nodes), tuple(edges))


def graph_from_json(obj) -> WeightedGraph:
    if not isinstance(obj, dict) or not {"directed", "nodes", "edges"} <= obj.keys():
        raise GraphError("graph JSON needs 'directed', 'nodes' and 'edges' keys")
    if not isinstance(obj["directed"], bool):
        raise GraphError("'directed' must be a boolean")
    edges = []
    for e in obj["edges"]:
        if not isinstance(e, list) or len(e) != 3:
            raise GraphError(f"edge entries must be [u, v, w], got {e!r}")
        if isinstance(e[2], bool) or not isinstance(e[2], (int, float)):
            raise GraphError(f"edge weight must be a number, got {e[2]!r}")
        edges.append(tuple(e))
    return WeightedGraph(obj["directed"], tuple(obj["nodes"]), tuple(edges))


def load_graph(
    path, format: str | None = None, directed: bool = False, normalize: bool = False
) -> WeightedGraph:
    """Read a graph from JSON or edge-list text.

    ``format`` defaults to ``json`` for ``.json`` files and ``edgelist``
    otherwise. ``directed`` and ``normalize`` only apply to edge lists;
    JSON carries its own ``directed`` flag.
    """
    path = Path(path)
    if format is None:
        format = "json" if path.suffix.lower() == ".json" else "edgelist"
    text = path.read_text()
    if format == "json":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphParseError(exc.msg, exc.lineno, path) from None
        g = graph_from_json(obj)
        if normalize:
            g = normalize_weights(g)
        return g
    if format == "edgelist":
        return parse_edgelist(text, directed=directed, normalize=normalize, path=path)
    raise ValueError(f"unknown graph format {format!r}")


def normalize_weights(g: WeightedGraph) -> WeightedGraph:
    if not g.edges:
        return g
    top = max(abs(w) for _, _, w in g.edges)
    if top == 0.0:
        raise GraphError("cannot normalise: all weights are zero")
    return WeightedGraph(g.directed, g.nodes, tuple((u, v, w / top) for u, v, w in g.edges))


def dumps_graph(g: WeightedGraph) -> str:
    return json.dumps(g.to_json(), indent=1) + "\n"


def save_graph(g: WeightedGraph, path) -> None:
    Path(path).write_text(dumps_graph(g))


# -- ego subgraphs ------------------------------------------------------------


def ego_distances(g: WeightedGraph, v, h: int) -> dict:
    """Undirected hop distance from ``v`` for every node within ``h`` hops."""
    if h < 1:
        raise ValueError(f"hops must be >= 1, got {h}")
    g._check(v)
    dist = {v: 0}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        if dist[u] == h:
            continue
        for x in g.neighbors(u):
            if x not in dist:
                dist[x] = dist[u] + 1
                queue.append(x)
    return dist


def ego_nodes(g: WeightedGraph, v, h: int) -> list:
    """Nodes within ``h`` undirected hops of ``v``, ascending by id."""
    return sorted(ego_distances(g, v, h))


def canonical_order(g: WeightedGraph, v, h: int) -> list:
    """Order an ego set by structure rather than by label.

    The anchor comes first, so ``|0...0>`` is the walker sitting on the
    anchor. The remaining nodes are ranked by hop distance, then by the
    weights on their links with the anchor, then by their weighted
    strength and sorted incident weights inside the ego subgraph. Only
    ties that survive all of that fall back to node id, so a relabelling
    of the graph permutes each ego matrix onto the same matrix.
    """
    dist = ego_distances(g, v, h)
    members = sorted(dist)

    def key(u):
        incident = sorted(
            ((g.weight(u, x), g.weight(x, u)) for x in members if x != u and x in g.neighbors(u)),
            reverse=True,
        )
        strength = math.fsum(a + b for a, b in incident)
        return (
            dist[u],
            -g.weight(v, u),
            -g.weight(u, v),
            -strength,
            [(-a, -b) for a, b in incident],
            u,
        )

    return [v] + sorted((u for u in members if u != v), key=key)


def local_adjacency(g: WeightedGraph, v, h: int, ordering: str = "canonical"):
    """Adjacency of the ``h``-hop ego subgraph of ``v``.

    Returns ``(matrix, order)`` where ``order[i]`` is the global id of row
    ``i``. ``ordering="id"`` lays rows out by ascending node id instead of
    the structural order of :func:`canonical_order`.
    """
    if ordering == "canonical":
        order = canonical_order(g, v, h)
    elif ordering == "id":
        order = ego_nodes(g, v, h)
    else:
        raise ValueError(f"ordering must be one of {ORDERINGS}, got {ordering!r}")
    return g.adjacency(order), order


def herm_adj(m, alpha=None) -> np.ndarray:
    """Hermitian adjacency: ``a_ij`` where ``a_ij == a_ji``, else ``a_ij*alpha + a_ji*conj(alpha)``."""
    if alpha is None:
        alpha = HermAdjParam()
    elif not isinstance(alpha, HermAdjParam):
        alpha = HermAdjParam(alpha)
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    if np.any(np.diag(m) != 0):
        raise ValueError("diagonal must be zero")
    a = alpha.alpha
    mixed = m * a + m.T * a.conjugate()
    return np.where(m == m.T, m.astype(complex), mixed)


# -- padding ------------------------------------------------------------------


def padded_dim(dims: Iterable[int]) -> int:
    """``2**ceil(log2(max dim))`` with a floor of 2."""
    top = max(dims)
    return max(2, 1 << (int(top) - 1).bit_length())


@dataclass(frozen=True)
class EgoMatrix:
    """Unpadded Hermitian generator for one node."""

    anchor: int | None
    hops: int
    ordering: tuple
    matrix: np.ndarray


@dataclass(frozen=True)
class LocalHermitian:
    anchor: int | None
    hops: int
    ordering: tuple
    original_dim: int
    padded_dim: int
    matrix: np.ndarray

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))


def ego_matrix(
    g: WeightedGraph, v, h: int = 1, alpha: HermAdjParam | None = None, ordering: str = "canonical"
) -> EgoMatrix:
    """Local generator of ``v``; Hermitian adjacency is applied only to directed graphs.

    For undirected graphs the adjacency is symmetric, where the Hermitian
    transform is the identity anyway.
    """
    m, order = local_adjacency(g, v, h, ordering)
    mat = herm_adj(m, alpha) if g.directed else m.astype(complex)
    mat.setflags(write=False)
    return EgoMatrix(v, h, tuple(order), mat)


def pad_batch(mats: Sequence[EgoMatrix], size: int | None = None) -> list[LocalHermitian]:
    """Zero pad every generator in the batch to the batch's common power-of-two size.

    ``size`` overrides the computed size, e.g. when the padding batch is
    larger than the set of matrices actually needed.
    """
    if not mats:
        raise ValueError("pad_batch needs at least one matrix")
    need = padded_dim(m.matrix.shape[0] for m in mats)
    if size is None:
        size = need
    elif size < need or size & (size - 1):
        raise ValueError(f"size {size} is not a power of two >= {need}")
    out = []
    for m in mats:
        d = m.matrix.shape[0]
        big = np.zeros((size, size), dtype=complex)
        big[:d, :d] = m.matrix
        big.setflags(write=False)
        out.append(LocalHermitian(m.anchor, m.hops, m.ordering, d, size, big))
    return out
