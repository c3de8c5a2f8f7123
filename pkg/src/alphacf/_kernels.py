"""Compiled inner loops over CSR adjacency (indptr, indices)."""
import warnings

import numba as nb
import numpy as np
from numba.core.errors import NumbaWarning

# an outdated system TBB only disables that layer; numba falls back to omp/workqueue
warnings.filterwarnings("ignore", message="The TBB threading layer", category=NumbaWarning)

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0


@nb.njit(cache=True)
def _mix(z):
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


@nb.njit(cache=True)
def _stream_state(seed, source, walker):
    # splitmix64 chain keyed by (seed, source, walker)
    s = _mix(np.uint64(seed) + _GOLDEN)
    s = _mix(s ^ (np.uint64(source) + _GOLDEN))
    return _mix(s ^ (np.uint64(walker) + _GOLDEN))


@nb.njit(cache=True)
def bfs(indptr, indices, source, dist, queue):
    """Fill ``dist`` with hop distances from ``source`` (-1 = unreachable).

    Returns the number of reached nodes; ``queue[:count]`` holds them in BFS order.
    """
    dist[:] = -1
    dist[source] = 0
    queue[0] = source
    head = 0
    tail = 1
    while head < tail:
        v = queue[head]
        head += 1
        dv = dist[v] + 1
        for j in range(indptr[v], indptr[v + 1]):
            w = indices[j]
            if dist[w] < 0:
                dist[w] = dv
                queue[tail] = w
                tail += 1
    return tail


@nb.njit(cache=True, parallel=True)
def distance_sums(indptr, indices, sources):
    """Per-source eccentricity, distance sum, reached count and inverse-distance sum."""
    n = indptr.shape[0] - 1
    k = sources.shape[0]
    ecc = np.zeros(k, np.int64)
    total = np.zeros(k, np.int64)
    reached = np.zeros(k, np.int64)
    inv = np.zeros(k, np.float64)
    for i in nb.prange(k):
        dist = np.empty(n, np.int64)
        queue = np.empty(n, np.int64)
        cnt = bfs(indptr, indices, sources[i], dist, queue)
        e = 0
        t = 0
        f = 0.0
        for j in range(1, cnt):
            d = dist[queue[j]]
            t += d
            f += 1.0 / d
            if d > e:
                e = d
        ecc[i] = e
        total[i] = t
        reached[i] = cnt
        inv[i] = f
    return ecc, total, reached, inv


@nb.njit(cache=True)
def _brandes_chunk(indptr, indices, edge_of, sources, m, edge_acc, node_acc):
    n = indptr.shape[0] - 1
    dist = np.empty(n, np.int64)
    queue = np.empty(n, np.int64)
    sigma = np.zeros(n, np.float64)
    delta = np.zeros(n, np.float64)
    for s in sources:
        cnt = bfs(indptr, indices, s, dist, queue)
        for j in range(cnt):
            sigma[queue[j]] = 0.0
            delta[queue[j]] = 0.0
        sigma[s] = 1.0
        for j in range(cnt):
            v = queue[j]
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
        for j in range(cnt - 1, 0, -1):
            w = queue[j]
            coeff = (1.0 + delta[w]) / sigma[w]
            for p in range(indptr[w], indptr[w + 1]):
                v = indices[p]
                if dist[v] == dist[w] - 1:
                    c = sigma[v] * coeff
                    edge_acc[edge_of[p]] += c
                    delta[v] += c
            node_acc[w] += delta[w]


@nb.njit(cache=True, parallel=True)
def brandes(indptr, indices, edge_of, m, nchunks):
    """Unnormalised ordered-pair edge and node shortest-path betweenness."""
    n = indptr.shape[0] - 1
    edge_parts = np.zeros((nchunks, m), np.float64)
    node_parts = np.zeros((nchunks, n), np.float64)
    for c in nb.prange(nchunks):
        srcs = np.arange(c, n, nchunks)
        _brandes_chunk(indptr, indices, edge_of, srcs, m, edge_parts[c], node_parts[c])
    edge_bc = np.zeros(m, np.float64)
    node_bc = np.zeros(n, np.float64)
    for c in range(nchunks):
        edge_bc += edge_parts[c]
        node_bc += node_parts[c]
    return edge_bc, node_bc


@nb.njit(cache=True)
def walk_visits(indptr, indices, alpha, source, n_walks, seed):
    """Every-visit counts of absorbing random walks started at ``source``.

    Each step continues to a uniform neighbour with probability ``alpha``.
    Returns per-node sum and sum of squares of per-walk visit counts.
    """
    n = indptr.shape[0] - 1
    total = np.zeros(n, np.float64)
    total_sq = np.zeros(n, np.float64)
    counts = np.zeros(n, np.int64)
    touched = np.empty(n, np.int64)
    for walker in range(n_walks):
        state = _stream_state(seed, source, walker)
        ntouched = 0
        v = source
        while True:
            if counts[v] == 0:
                touched[ntouched] = v
                ntouched += 1
            counts[v] += 1
            state += _GOLDEN
            u = float(_mix(state) >> _S11) * _INV53
            if u >= alpha:
                break
            deg = indptr[v + 1] - indptr[v]
            state += _GOLDEN
            r = float(_mix(state) >> _S11) * _INV53
            v = indices[indptr[v] + int(r * deg)]
        for j in range(ntouched):
            w = touched[j]
            c = float(counts[w])
            total[w] += c
            total_sq[w] += c * c
            counts[w] = 0
    return total, total_sq
