"""Immutable undirected simple graphs, edge-list ingestion and generators."""
from __future__ import annotations

import hashlib
import io
import logging
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import networkx as nx
import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from . import _kernels
from .errors import ParameterError, ParseError

log = logging.getLogger(__name__)

_NODES_HEADER = re.compile(r"^[#%]\s*nodes:\s*(\d+)\s*$")


def _readonly(a):
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph on nodes ``0..n-1`` in CSR form.

    ``edges`` holds each edge once as ``(v, w)`` with ``v < w``, sorted
    lexicographically. ``indices[indptr[v]:indptr[v+1]]`` is the sorted
    neighbour list of ``v`` and ``edge_of`` maps each CSR slot to its edge id.
    Use :meth:`from_edges` to build one.
    """

    n: int
    edges: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    edge_of: np.ndarray
    degrees: np.ndarray

    @classmethod
    def from_edges(cls, n, edges):
        """Build a graph, dropping self-loops and collapsing duplicates."""
        n = int(n)
        if n < 1:
            raise ParameterError("graph needs at least one node")
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise ParameterError("edge endpoint outside 0..n-1")
        e = e[e[:, 0] != e[:, 1]]
        e = np.sort(e, axis=1)
        e = np.unique(e, axis=0) if e.size else np.empty((0, 2), np.int64)
        m = len(e)
        # CSR with both orientations; column order within a row is sorted.
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        eids = np.concatenate([np.arange(m), np.arange(m)])
        order = np.lexsort((cols, rows))
        degrees = np.bincount(rows, minlength=n).astype(np.int64)
        indptr = np.zeros(n + 1, np.int64)
        np.cumsum(degrees, out=indptr[1:])
        return cls(
            n=n,
            edges=_readonly(np.ascontiguousarray(e)),
            indptr=_readonly(indptr),
            indices=_readonly(np.ascontiguousarray(cols[order])),
            edge_of=_readonly(np.ascontiguousarray(eids[order])),
            degrees=_readonly(degrees),
        )

    @property
    def m(self):
        return len(self.edges)

    def neighbors(self, v):
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def edge_index(self, v, w):
        """Id of edge ``{v, w}``; raises ``KeyError`` if absent."""
        nb = self.neighbors(v)
        j = np.searchsorted(nb, w)
        if j >= len(nb) or nb[j] != w:
            raise KeyError(f"({v}, {w}) is not an edge")
        return int(self.edge_of[self.indptr[v] + j])

    def has_edge(self, v, w):
        try:
            self.edge_index(v, w)
        except KeyError:
            return False
        return True

    @cached_property
    def adjacency(self):
        """Symmetric 0/1 adjacency as a CSR matrix."""
        data = np.ones(len(self.indices))
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    @cached_property
    def fingerprint(self):
        h = hashlib.sha1(np.int64(self.n).tobytes())
        h.update(self.edges.tobytes())
        return h.hexdigest()[:16]

    def induced(self, keep):
        """Subgraph on the nodes where boolean mask ``keep`` is true.

        Returns ``(subgraph, original_ids)``; the subgraph is relabelled densely
        in ascending original-id order. The receiver is not modified.
        """
        keep = np.asarray(keep, dtype=bool)
        ids = np.flatnonzero(keep)
        new_id = np.full(self.n, -1, np.int64)
        new_id[ids] = np.arange(len(ids))
        mask = keep[self.edges[:, 0]] & keep[self.edges[:, 1]]
        sub = Graph.from_edges(max(len(ids), 1), new_id[self.edges[mask]])
        return sub, ids

    def to_networkx(self):
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(map(tuple, self.edges.tolist()))
        return g

    @classmethod
    def from_networkx(cls, g):
        """Convert a networkx graph whose nodes are ``0..n-1``."""
        return cls.from_edges(g.number_of_nodes(), list(g.edges()))


@dataclass(frozen=True)
class RelabelMap:
    """Bijection between original node labels and dense ids."""

    labels: tuple

    @cached_property
    def _index(self):
        return {lab: i for i, lab in enumerate(self.labels)}

    def to_id(self, label):
        return self._index[label]

    def to_label(self, node):
        return self.labels[node]

    def __len__(self):
        return len(self.labels)


@dataclass(frozen=True)
class LoadReport:
    lines: int
    self_loops: int
    duplicates: int


@dataclass(frozen=True)
class GraphStats:
    n: int
    m: int
    mean_degree: float
    diameter: int
    clustering: float
    mean_distance: float
    clustering_nonleaf: float = field(default=float("nan"), compare=False)

    CSV_FIELDS = ("n", "m", "mean_degree", "diameter", "clustering", "mean_distance",
                  "clustering_nonleaf")

    def as_row(self):
        return [self.n, self.m, f"{self.mean_degree:.2f}", self.diameter,
                f"{self.clustering:.4f}", f"{self.mean_distance:.4f}",
                f"{self.clustering_nonleaf:.4f}"]


def load_edge_list(text):
    """Parse edge-list text into ``(Graph, RelabelMap, LoadReport)``.

    Lines starting with ``#`` or ``%`` are comments. A ``# nodes: N`` comment
    (as written by :func:`format_edge_list`) declares dense integer labels
    ``0..N-1`` so isolated nodes survive a round trip.
    """
    declared = None
    pairs = []
    lineno = 0
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line:
            continue
        if line[0] in "#%":
            hit = _NODES_HEADER.match(line)
            if hit:
                declared = int(hit.group(1))
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"expected 2 tokens, got {len(tokens)}", line=lineno)
        pairs.append((tokens[0], tokens[1]))

    if declared is not None:
        labels = [str(i) for i in range(declared)]
        index = {lab: i for i, lab in enumerate(labels)}
        for a, b in pairs:
            if a not in index or b not in index:
                declared = None
                break
    if declared is None:
        if not pairs:
            raise ParseError("no edges in input")
        labels = []
        index = {}
        for a, b in pairs:
            for lab in (a, b):
                if lab not in index:
                    index[lab] = len(labels)
                    labels.append(lab)
    if not labels:
        raise ParseError("no nodes in input")

    raw_edges = np.array([(index[a], index[b]) for a, b in pairs], np.int64).reshape(-1, 2)
    loops = int(np.sum(raw_edges[:, 0] == raw_edges[:, 1]))
    g = Graph.from_edges(len(labels), raw_edges)
    dups = len(raw_edges) - loops - g.m
    if loops or dups:
        log.info("dropped %d self-loops and %d duplicate edges", loops, dups)
    return g, RelabelMap(tuple(labels)), LoadReport(lineno, loops, dups)


def read_graph(path):
    """Load a graph file: GML by extension, otherwise an edge list."""
    path = Path(path)
    if path.suffix.lower() == ".gml":
        g = nx.read_gml(path, label="id")
        g = nx.Graph(g)
        g.remove_edges_from(list(nx.selfloop_edges(g)))
        labels = sorted(g.nodes())
        relabel = {lab: i for i, lab in enumerate(labels)}
        edges = [(relabel[a], relabel[b]) for a, b in g.edges()]
        graph = Graph.from_edges(len(labels), edges)
        return graph, RelabelMap(tuple(str(x) for x in labels)), LoadReport(0, 0, 0)
    return load_edge_list(path.read_text(encoding="utf-8"))


def format_edge_list(g, header=()):
    """Serialise with dense ids; isolated nodes are kept via a ``# nodes:`` line."""
    out = io.StringIO()
    for line in header:
        out.write(f"# {line}\n")
    out.write(f"# nodes: {g.n}\n")
    for v, w in g.edges.tolist():
        out.write(f"{v} {w}\n")
    return out.getvalue()


def _check_seed(seed):
    if seed is None or int(seed) < 0:
        raise ParameterError("seed must be a non-negative integer")
    return int(seed)


def generate_watts_strogatz(n, k, p, seed):
    """Ring lattice with ``k`` nearest neighbours, far endpoints rewired w.p. ``p``.

    Edge count stays exactly ``n*k/2``.
    """
    if k % 2 or k < 2 or k >= n:
        raise ParameterError(f"need even k with 2 <= k < n, got n={n}, k={k}")
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"p must lie in [0, 1], got {p}")
    g = nx.watts_strogatz_graph(int(n), int(k), float(p), seed=_check_seed(seed))
    return Graph.from_networkx(g)


def generate_erdos_renyi(n, p, seed):
    if n < 1 or not 0.0 <= p <= 1.0:
        raise ParameterError(f"need n >= 1 and p in [0, 1], got n={n}, p={p}")
    g = nx.fast_gnp_random_graph(int(n), float(p), seed=_check_seed(seed))
    return Graph.from_networkx(g)


def generate_barabasi_albert(n, m0, seed):
    if m0 < 1 or m0 >= n:
        raise ParameterError(f"need 1 <= m0 < n, got n={n}, m0={m0}")
    g = nx.barabasi_albert_graph(int(n), int(m0), seed=_check_seed(seed))
    return Graph.from_networkx(g)


GENERATORS = {
    "ws": (generate_watts_strogatz, ("n", "k", "p")),
    "er": (generate_erdos_renyi, ("n", "p")),
    "ba": (generate_barabasi_albert, ("n", "m0")),
}


def parse_generator_spec(spec):
    """Split ``"ws:n=1000,k=12,p=0.15"`` into ``("ws", {...})``."""
    model, _, rest = spec.partition(":")
    if model not in GENERATORS:
        raise ParameterError(f"unknown graph model {model!r}; choose from {sorted(GENERATORS)}")
    names = GENERATORS[model][1]
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, value = item.partition("=")
        if not eq or key not in names:
            raise ParameterError(f"bad parameter {item!r} for model {model}; expected {names}")
        params[key] = float(value) if key == "p" else int(value)
    missing = set(names) - set(params)
    if missing:
        raise ParameterError(f"model {model} missing parameters {sorted(missing)}")
    return model, params


def generate(spec, seed):
    model, params = parse_generator_spec(spec)
    return GENERATORS[model][0](seed=seed, **params)


def bfs_distances(g, source):
    """Hop distances from ``source``; unreachable nodes are ``-1``."""
    if not 0 <= source < g.n:
        raise ParameterError(f"source {source} out of range 0..{g.n - 1}")
    dist = np.empty(g.n, np.int64)
    queue = np.empty(g.n, np.int64)
    _kernels.bfs(g.indptr, g.indices, int(source), dist, queue)
    return dist


def connected_components(g):
    """Component label per node, plus component sizes sorted descending.

    Labels are ordered so that label 0 is the largest component.
    """
    _, labels = csgraph.connected_components(g.adjacency, directed=False)
    sizes = np.bincount(labels)
    order = np.argsort(-sizes, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    return rank[labels], sizes[order]


def largest_component_size(g):
    if g.m == 0:
        return min(g.n, 1)
    return int(connected_components(g)[1][0])


def local_clustering(g):
    """Local clustering per node; nodes of degree < 2 get 0."""
    a = g.adjacency
    tri = np.asarray((a @ a).multiply(a).sum(axis=1)).ravel() / 2.0
    d = g.degrees.astype(float)
    pairs = d * (d - 1) / 2.0
    out = np.zeros(g.n)
    np.divide(tri, pairs, out=out, where=pairs > 0)
    return out


def compute_stats(g):
    """Table-style summary; distances are taken over the largest component."""
    if g.m == 0:
        raise ParameterError("statistics need at least one edge")
    labels, sizes = connected_components(g)
    lcc = np.flatnonzero(labels == 0)
    ecc, total, reached, _ = _kernels.distance_sums(g.indptr, g.indices, lcc)
    npairs = len(lcc) * (len(lcc) - 1)
    cc = local_clustering(g)
    nonleaf = g.degrees >= 2
    return GraphStats(
        n=g.n,
        m=g.m,
        mean_degree=2.0 * g.m / g.n,
        diameter=int(ecc.max()),
        clustering=float(cc.mean()),
        mean_distance=float(total.sum() / npairs),
        clustering_nonleaf=float(cc[nonleaf].mean()) if nonleaf.any() else 0.0,
    )
