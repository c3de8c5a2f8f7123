"""Rank correlations, score distributions and node-removal vulnerability sweeps."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import _kernels
from .centrality import compute_measure, parse_measure
from .errors import ParameterError
from .graph import largest_component_size


def kendall_tau(a, b):
    """Tie-corrected Kendall tau-b between two score vectors (O(n log n))."""
    x = np.asarray(getattr(a, "values", a), dtype=float)
    y = np.asarray(getattr(b, "values", b), dtype=float)
    if x.shape != y.shape or x.ndim != 1 or len(x) < 2:
        raise ParameterError("kendall_tau needs two vectors of equal length >= 2")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise ParameterError("kendall_tau is undefined for a constant vector")
    return float(stats.kendalltau(x, y, variant="b").statistic)


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    names: tuple
    values: np.ndarray

    def __getitem__(self, key):
        i, j = (self.names.index(k) for k in key)
        return float(self.values[i, j])


def correlation_table(g, measures, **params):
    """Pairwise Kendall tau between the node scores of ``measures`` on ``g``.

    ``params`` are forwarded to :func:`alphacf.centrality.compute_measure`.
    """
    for spec in measures:
        parse_measure(spec)
    scores = [compute_measure(g, spec, **params)[1].values for spec in measures]
    k = len(measures)
    out = np.eye(k)
    for i in range(k):
        for j in range(i + 1, k):
            out[i, j] = out[j, i] = kendall_tau(scores[i], scores[j])
    return CorrelationMatrix(tuple(measures), out)


@dataclass(frozen=True, eq=False)
class CCDF:
    """``counts[i]`` = number of items with score strictly greater than ``thresholds[i]``."""

    thresholds: np.ndarray
    counts: np.ndarray
    total: int

    def at(self, x):
        """Number of items with score strictly greater than ``x``."""
        i = np.searchsorted(self.thresholds, x, side="right")
        return self.total if i == 0 else int(self.counts[i - 1])


def ccdf(values):
    x = np.sort(np.asarray(values, dtype=float).ravel())
    if x.size == 0:
        raise ParameterError("ccdf of an empty sample")
    thresholds = np.unique(x)
    counts = len(x) - np.searchsorted(x, thresholds, side="right")
    return CCDF(thresholds, counts, len(x))


def inverse_average_distance(g):
    """Mean of ``1/d(u, v)`` over ordered pairs; disconnected pairs add 0."""
    if g.n < 2:
        return 0.0
    _, _, _, inv = _kernels.distance_sums(g.indptr, g.indices, np.arange(g.n))
    return float(inv.sum() / (g.n * (g.n - 1)))


@dataclass(frozen=True, eq=False)
class RemovalTrace:
    strategy: str
    fractions: np.ndarray
    removed: np.ndarray
    inverse_avg_distance: np.ndarray
    lcc_size: np.ndarray


def removal_order(scores):
    """Nodes by descending score, ties broken by ascending id."""
    s = np.asarray(getattr(scores, "values", scores), dtype=float)
    return np.lexsort((np.arange(len(s)), -s))


def default_steps(n):
    """Removal counts: every node for n <= 200, else 1% of n per step."""
    step = 1 if n <= 200 else max(1, round(n / 100))
    counts = list(range(0, n + 1, step))
    if counts[-1] != n:
        counts.append(n)
    return np.array(counts)


def _residual(g, removed_mask):
    keep = ~removed_mask
    if not keep.any():
        return None
    return g.induced(keep)[0]


def vulnerability_sweep(g, ranking, steps=None, strategy=None, recompute=None):
    """Remove top-ranked nodes and record connectivity of what remains.

    ``ranking`` holds node scores on the intact graph; ``steps`` are cumulative
    removal counts (default :func:`default_steps`). With ``recompute`` set to a
    callable ``graph -> scores`` the ranking is recomputed on the residual graph
    before each step instead of being fixed up front.
    """
    steps = default_steps(g.n) if steps is None else np.asarray(sorted(set(int(k) for k in steps)))
    if steps.size and (steps[0] < 0 or steps[-1] > g.n):
        raise ParameterError("removal counts must lie in 0..n")
    if strategy is None:
        strategy = getattr(getattr(ranking, "measure", None), "label", "custom")
    removed = np.zeros(g.n, bool)
    order = removal_order(ranking)
    iad, lcc = [], []
    done = 0
    for k in steps:
        if recompute is None:
            removed[order[:k]] = True
        else:
            while done < k:
                sub, ids = g.induced(~removed)
                live = sub.degrees > 0
                if live.all():
                    scores = np.asarray(recompute(sub).values, float)
                else:
                    # isolated nodes are scored 0 and the measure runs on the rest
                    scores = np.zeros(sub.n)
                    if live.sum() >= 2:
                        core, core_ids = sub.induced(live)
                        scores[core_ids] = np.asarray(recompute(core).values, float)
                removed[ids[removal_order(scores)[0]]] = True
                done += 1
        res = _residual(g, removed)
        if res is None:
            iad.append(0.0)
            lcc.append(0)
        else:
            iad.append(inverse_average_distance(res))
            lcc.append(largest_component_size(res))
    return RemovalTrace(strategy, steps / g.n, steps, np.array(iad), np.array(lcc, np.int64))
