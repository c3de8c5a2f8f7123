"""Centrality measures: alpha-current-flow betweenness and the baselines it is compared to."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numba
import numpy as np
import scipy.linalg as la

from . import _kernels
from .errors import BudgetError, ParameterError
from .graph import connected_components
from .solver import SolverConfig, check_alpha, potential_matrix, solve_rows

DEFAULT_MAX_PAIRS = 4_000_000


@dataclass(frozen=True)
class Measure:
    """What produced a score vector."""

    name: str
    alpha: float | None = None
    truncated: bool = False
    samples: int | str | None = None
    seed: int | None = None
    epsilon: float | None = None

    @property
    def label(self):
        if self.alpha is None:
            return self.name
        return f"{self.name}{'_tr' if self.truncated else ''}:{self.alpha:g}"

    def metadata(self):
        return {k: v for k, v in vars(self).items() if v is not None}


@dataclass(frozen=True, eq=False)
class EdgeScores:
    edges: np.ndarray
    values: np.ndarray
    measure: Measure
    stderr: np.ndarray | None = None
    counts: np.ndarray | None = None

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True, eq=False)
class NodeScores:
    values: np.ndarray
    measure: Measure

    def __len__(self):
        return len(self.values)


def node_sums(g, edge_values):
    """Sum of the scores of each node's incident edges."""
    return (np.bincount(g.edges[:, 0], weights=edge_values, minlength=g.n)
            + np.bincount(g.edges[:, 1], weights=edge_values, minlength=g.n))


def _pack(g, values, measure, **extra):
    return EdgeScores(g.edges, values, measure, **extra), NodeScores(node_sums(g, values), measure)


class PairSampler:
    """Seeded stream of ordered pairs ``(s, t)``, ``s != t``, uniform over all ``n(n-1)``."""

    def __init__(self, n, seed):
        if n < 2:
            raise ParameterError("pair sampling needs n >= 2")
        self.n = int(n)
        self.seed = int(seed)
        self.position = 0
        self._rng = np.random.default_rng(self.seed)

    def draw(self, k):
        u = self._rng.integers(0, self.n * (self.n - 1), size=int(k), dtype=np.int64)
        s = u // (self.n - 1)
        t = u % (self.n - 1)
        t += t >= s
        self.position += int(k)
        return s, t


def all_ordered_pairs(n):
    s, t = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    off = s != t
    return s[off], t[off]


def _check_budget(n, max_pairs):
    if n * (n - 1) > max_pairs:
        raise BudgetError(
            f"exact mode needs {n * (n - 1)} pairs (budget {max_pairs}); "
            "use sampled mode instead (--pairs N without --exact)")


def alpha_cf_exact(g, alpha, truncated=False, max_pairs=DEFAULT_MAX_PAIRS):
    """Exact alpha-CF betweenness over all ordered pairs via the dense inverse.

    With ``truncated`` the pairs whose source is an endpoint of the edge are
    left out and each edge is averaged over its remaining ``(n-1)(n-2)`` pairs.
    """
    alpha = check_alpha(alpha)
    n = g.n
    if n < 2:
        raise ParameterError("need at least two nodes")
    _check_budget(n, max_pairs)
    c = potential_matrix(g, alpha)
    v, w = g.edges[:, 0], g.edges[:, 1]
    sums = _exact_sums(c, v, w, truncated)
    pairs = (n - 1) * (n - 2) if truncated else n * (n - 1)
    values = sums / pairs if pairs else np.zeros(g.m)
    measure = Measure("alpha_cf", alpha, truncated, "exact")
    return _pack(g, values, measure)


@numba.njit(cache=True, parallel=True)
def _exact_sums_kernel(grad, ratio, v, w, truncated):
    n, m = grad.shape
    out = np.zeros(m)
    for e in numba.prange(m):
        acc = 0.0
        ve = v[e]
        we = w[e]
        for t in range(n):
            gt = grad[t, e]
            for s in range(n):
                if truncated and (s == ve or s == we):
                    continue
                acc += abs(grad[s, e] - ratio[s, t] * gt)
        out[e] = acc
    return out


def _exact_sums(c, v, w, truncated):
    # drop(s,t,e) = grad[s,e] - ratio[s,t] * grad[t,e], zero when s == t
    grad = np.asfortranarray(c[:, v] - c[:, w])
    ratio = np.asfortranarray(c / np.diag(c)[None, :])
    return _exact_sums_kernel(grad, ratio, v, w, truncated)


def pair_contributions(g, alpha, v, w, truncated=False):
    """Per-pair scores ``|phi_v - phi_w|`` of edge ``(v, w)`` over all ordered pairs."""
    alpha = check_alpha(alpha)
    g.edge_index(v, w)
    c = potential_matrix(g, alpha)
    grad = c[:, v] - c[:, w]
    ratio = c / np.diag(c)[None, :]
    x = np.abs(grad[:, None] - ratio * grad[None, :])
    keep = ~np.eye(g.n, dtype=bool)
    if truncated:
        keep[[v, w], :] = False
    return x[keep]


def alpha_cf_sampled(g, alpha, n_pairs, truncated=False, seed=0, cfg=SolverConfig(),
                     enumerate_all=False, pair_batch=16, row_memory=1 << 28):
    """Monte Carlo estimate of alpha-CF betweenness from ``n_pairs`` random pairs.

    Returns edge scores (with per-edge standard error and included-pair count)
    and node scores. ``enumerate_all`` replaces sampling with every ordered pair.
    """
    alpha = check_alpha(alpha)
    if g.n < 2:
        raise ParameterError("need at least two nodes")
    if enumerate_all:
        s_all, t_all = all_ordered_pairs(g.n)
        samples = "all"
    else:
        if n_pairs < 1:
            raise ParameterError("need at least one pair")
        s_all, t_all = PairSampler(g.n, seed).draw(n_pairs)
        samples = int(n_pairs)
    v, w = g.edges[:, 0], g.edges[:, 1]
    total = np.zeros(g.m)
    total_sq = np.zeros(g.m)
    counts = np.zeros(g.m, np.int64)

    # solve rows in chunks of pairs whose distinct endpoints fit in row_memory
    max_rows = max(2 * pair_batch, row_memory // (8 * g.n))
    lo = 0
    while lo < len(s_all):
        hi = lo
        nodes = {}
        while hi < len(s_all) and len(nodes) + 2 <= max_rows:
            nodes.setdefault(int(s_all[hi]), len(nodes))
            nodes.setdefault(int(t_all[hi]), len(nodes))
            hi += 1
        rows, _ = solve_rows(g, alpha, list(nodes), cfg)
        idx = np.fromiter(nodes.values(), np.int64)
        pos = np.empty(max(nodes) + 1, np.int64)
        pos[np.fromiter(nodes.keys(), np.int64)] = idx
        for b in range(lo, hi, pair_batch):
            s = s_all[b:min(b + pair_batch, hi)]
            t = t_all[b:min(b + pair_batch, hi)]
            cs = rows[pos[s]]
            ct = rows[pos[t]]
            k = np.arange(len(s))
            ratio = cs[k, t] / ct[k, t]
            x = np.abs((cs[:, v] - cs[:, w]) + ratio[:, None] * (ct[:, w] - ct[:, v]))
            if truncated:
                inc = (v[None, :] != s[:, None]) & (w[None, :] != s[:, None])
                x *= inc
                counts += inc.sum(axis=0)
            else:
                counts += len(s)
            total += x.sum(axis=0)
            total_sq += (x * x).sum(axis=0)
        lo = hi

    mean = np.zeros(g.m)
    np.divide(total, counts, out=mean, where=counts > 0)
    var = np.zeros(g.m)
    np.divide(total_sq, counts, out=var, where=counts > 0)
    var = np.maximum(var - mean ** 2, 0.0)
    stderr = np.zeros(g.m)
    np.divide(var, counts - 1, out=stderr, where=counts > 1)
    measure = Measure("alpha_cf", alpha, truncated, samples, None if enumerate_all else seed,
                      cfg.epsilon if cfg.method == "power" else None)
    return _pack(g, mean, measure, stderr=np.sqrt(stderr), counts=counts)


def cf_betweenness_baseline(g, max_n=5000):
    """Current-flow betweenness with unit resistances and a grounded target.

    Edge score is ``|phi_v - phi_w|`` averaged over ordered pairs; node score is
    the sum over incident edges.
    """
    n = g.n
    if n < 2:
        raise ParameterError("need at least two nodes")
    if n > max_n:
        raise BudgetError(f"dense current-flow baseline limited to n <= {max_n}")
    if connected_components(g)[1].size > 1:
        raise ParameterError("current-flow betweenness needs a connected graph")
    lap = np.diag(g.degrees.astype(float)) - g.adjacency.toarray()
    # pseudo-inverse of a connected Laplacian
    pinv = la.inv(lap + 1.0 / n) - 1.0 / n
    v, w = g.edges[:, 0], g.edges[:, 1]
    h = np.sort(pinv[:, v] - pinv[:, w], axis=0)
    # sum over ordered pairs of |h_s - h_t| from the sorted column
    weights = 2.0 * np.arange(n) - (n - 1)
    values = 2.0 * (weights @ h) / (n * (n - 1))
    return _pack(g, values, Measure("cf"))


def shortest_path_betweenness(g):
    """Brandes accumulation, normalised by ``n(n-1)`` over ordered pairs."""
    n = g.n
    if n < 2 or g.m == 0:
        z = Measure("betweenness")
        return EdgeScores(g.edges, np.zeros(g.m), z), NodeScores(np.zeros(n), z)
    chunks = max(1, min(numba.get_num_threads(), n))
    edge_bc, node_bc = _kernels.brandes(g.indptr, g.indices, g.edge_of, g.m, chunks)
    norm = n * (n - 1)
    measure = Measure("betweenness")
    return EdgeScores(g.edges, edge_bc / norm, measure), NodeScores(node_bc / norm, measure)


def closeness(g):
    """``(k-1) / sum of distances`` with ``k`` the size of the node's component."""
    _, total, reached, _ = _kernels.distance_sums(g.indptr, g.indices, np.arange(g.n))
    out = np.zeros(g.n)
    np.divide(reached - 1, total, out=out, where=total > 0)
    return NodeScores(out, Measure("closeness"))


def pagerank(g, damping=0.85, epsilon=1e-12, max_iter=10_000):
    """PageRank with uniform teleportation; dangling mass is spread uniformly."""
    if not 0.0 < damping < 1.0:
        raise ParameterError("damping must lie in (0, 1)")
    n = g.n
    d = g.degrees.astype(float)
    dangling = d == 0
    inv_d = np.where(dangling, 0.0, 1.0 / np.maximum(d, 1))
    a = g.adjacency
    x = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        nxt = damping * (a @ (x * inv_d)) + (damping * x[dangling].sum() + 1.0 - damping) / n
        diff = np.abs(nxt - x).sum()
        x = nxt
        if diff < epsilon:
            break
    return NodeScores(x / x.sum(), Measure("pagerank", epsilon=epsilon))


def degree_centrality(g):
    return NodeScores(g.degrees.astype(float), Measure("degree"))


MEASURES = ("degree", "pagerank", "closeness", "betweenness", "cf", "alpha_cf", "alpha_cf_tr")
TABLE_MEASURES = ("degree", "pagerank", "closeness", "betweenness", "cf",
                  "alpha_cf:0.8", "alpha_cf_tr:0.8", "alpha_cf:0.98")


def parse_measure(spec):
    """``"alpha_cf_tr:0.8"`` -> ``("alpha_cf_tr", 0.8)``; the number is optional."""
    name, _, arg = spec.partition(":")
    if name not in MEASURES:
        raise ParameterError(f"unknown measure {name!r}; choose from {MEASURES}")
    value = None
    if arg:
        try:
            value = float(arg)
        except ValueError:
            raise ParameterError(f"bad parameter in measure {spec!r}") from None
    return name, value


def compute_measure(g, spec, alpha=None, exact=True, n_pairs=1000, seed=0,
                    cfg=SolverConfig(), max_pairs=DEFAULT_MAX_PAIRS):
    """Evaluate a measure by name; returns ``(EdgeScores or None, NodeScores)``.

    For the alpha-CF family the alpha comes from a ``:alpha`` suffix on the name, then
    ``alpha``, then 0.8 (truncated) or 0.98 (plain).
    """
    name, arg = parse_measure(spec)
    if name == "degree":
        return None, degree_centrality(g)
    if name == "pagerank":
        return None, pagerank(g, 0.85 if arg is None else arg)
    if name == "closeness":
        return None, closeness(g)
    if name == "betweenness":
        return shortest_path_betweenness(g)
    if name == "cf":
        return cf_betweenness_baseline(g)
    truncated = name == "alpha_cf_tr"
    a = arg if arg is not None else alpha
    if a is None:
        a = 0.8 if truncated else 0.98
    if exact:
        return alpha_cf_exact(g, a, truncated, max_pairs=max_pairs)
    return alpha_cf_sampled(g, a, n_pairs, truncated, seed, cfg)


def with_label(scores, label):
    """Copy of a score object whose measure name is replaced by ``label``."""
    return replace(scores, measure=replace(scores.measure, name=label))
