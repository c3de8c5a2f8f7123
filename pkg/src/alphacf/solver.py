"""Rows of ``C = (D - alpha*A)^-1`` and the voltage drops derived from them.

Three interchangeable row solvers are provided: a Cholesky/LU factorisation
(``direct``), the truncated Neumann series ``sum_k alpha^k P^k`` (``power``),
and every-visit counting over absorbing random walks (``montecarlo``).
:func:`solve_kirchhoff_direct` solves the grounded system for a single
source/target pair and serves as an independent check on the row formula.
"""
from __future__ import annotations

import math
import struct
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import _kernels
from .errors import ConvergenceError, ParameterError

METHODS = ("direct", "power", "montecarlo")


def check_alpha(alpha):
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ParameterError(f"alpha must lie in the open interval (0, 1), got {alpha}")
    return alpha


@dataclass(frozen=True)
class SolverConfig:
    method: str = "power"
    epsilon: float = 1e-8
    max_iterations: int = 100_000
    walks_per_source: int = 10_000
    seed: int = 0
    dense_limit: int = 5000
    batch_size: int = 32
    check_residual: bool = False

    def __post_init__(self):
        if self.method not in METHODS:
            raise ParameterError(f"unknown solver method {self.method!r}; choose from {METHODS}")
        if not self.epsilon > 0:
            raise ParameterError(f"epsilon must be positive, got {self.epsilon}")
        if self.walks_per_source < 1 or self.max_iterations < 1:
            raise ParameterError("walks_per_source and max_iterations must be >= 1")

    def power_terms(self, alpha):
        """Number of series terms ``ceil(log eps / log alpha)``."""
        return max(1, math.ceil(math.log(self.epsilon) / math.log(alpha)))


@dataclass(frozen=True, eq=False)
class PotentialRow:
    source: int
    values: np.ndarray
    method: str
    tolerance: float
    stderr: np.ndarray | None = field(default=None, repr=False)


def _system_matrix(g, alpha):
    return (sp.diags(g.degrees.astype(float)) - alpha * g.adjacency).tocsc()


def _check_degrees(g, nodes):
    bad = [int(v) for v in nodes if g.degrees[v] == 0]
    if bad:
        raise ParameterError(f"node(s) {bad[:5]} have degree 0; D - alpha*A is singular there")


@lru_cache(maxsize=8)
def _factor(g, alpha, dense_limit):
    if g.n <= dense_limit:
        m = _system_matrix(g, alpha).toarray()
        return "dense", la.cho_factor(m, lower=True)
    return "sparse", spla.splu(_system_matrix(g, alpha))


def _direct_rows(g, alpha, sources, cfg):
    kind, fac = _factor(g, alpha, cfg.dense_limit)
    rhs = np.zeros((g.n, len(sources)))
    rhs[sources, np.arange(len(sources))] = 1.0
    cols = la.cho_solve(fac, rhs) if kind == "dense" else fac.solve(rhs)
    # C is symmetric, so column s is row s
    return cols.T.copy()


@lru_cache(maxsize=8)
def _walk_operator(g, alpha):
    # alpha * A * D^-1, applied to column vectors e_s
    inv_d = 1.0 / np.maximum(g.degrees, 1)
    data = alpha * inv_d[g.indices]
    return sp.csr_matrix((data, g.indices, g.indptr), shape=(g.n, g.n))


def _power_rows(g, alpha, sources, cfg):
    terms = cfg.power_terms(alpha)
    if terms > cfg.max_iterations:
        tail = alpha ** (cfg.max_iterations + 1) / (1 - alpha)
        raise ConvergenceError(
            f"power series needs {terms} terms, max_iterations is {cfg.max_iterations}", tail)
    op = _walk_operator(g, alpha)
    out = np.empty((len(sources), g.n))
    for lo in range(0, len(sources), cfg.batch_size):
        batch = sources[lo:lo + cfg.batch_size]
        x = np.zeros((g.n, len(batch)))
        x[batch, np.arange(len(batch))] = 1.0
        y = x.copy()
        for _ in range(terms):
            x = op @ x
            y += x
        out[lo:lo + len(batch)] = (y / g.degrees[:, None]).T
    return out


def _montecarlo_rows(g, alpha, sources, cfg):
    w = cfg.walks_per_source
    rows = np.empty((len(sources), g.n))
    errs = np.empty_like(rows)
    d = g.degrees.astype(float)
    for i, s in enumerate(sources):
        tot, tot_sq = _kernels.walk_visits(g.indptr, g.indices, alpha, int(s), w, cfg.seed)
        mean = tot / w
        var = np.maximum(tot_sq / w - mean ** 2, 0.0)
        rows[i] = mean / d
        errs[i] = np.sqrt(var / max(w - 1, 1)) / d
    return rows, errs


def solve_rows(g, alpha, sources, cfg=SolverConfig()):
    """Rows ``c_{s,.}`` for every ``s`` in ``sources`` as a 2-D array.

    For ``montecarlo`` the per-entry standard errors are returned as well,
    otherwise the second element is ``None``.
    """
    alpha = check_alpha(alpha)
    sources = np.asarray(sources, dtype=np.int64).ravel()
    if sources.size and (sources.min() < 0 or sources.max() >= g.n):
        raise ParameterError("source node out of range")
    _check_degrees(g, sources)
    errs = None
    if cfg.method == "direct":
        rows = _direct_rows(g, alpha, sources, cfg)
    elif cfg.method == "power":
        rows = _power_rows(g, alpha, sources, cfg)
    else:
        rows, errs = _montecarlo_rows(g, alpha, sources, cfg)
    if cfg.check_residual and cfg.method != "montecarlo":
        m = _system_matrix(g, alpha)
        res = m @ rows.T
        res[sources, np.arange(len(sources))] -= 1.0
        worst = float(np.abs(res).max()) if res.size else 0.0
        bound = max(cfg.epsilon, 1e-9) * max(1.0, g.degrees.max())
        assert worst <= bound, f"row residual {worst:.3e} exceeds {bound:.3e}"
    return rows, errs


def solve_row(g, alpha, s, cfg=SolverConfig()):
    """One row of ``C = (D - alpha*A)^-1`` wrapped as a :class:`PotentialRow`."""
    rows, errs = solve_rows(g, alpha, [s], cfg)
    alpha = float(alpha)
    if cfg.method == "direct":
        tol = float(np.finfo(float).eps * g.n / ((1 - alpha) * max(g.degrees.min(), 1)))
        stderr = None
    elif cfg.method == "power":
        k = cfg.power_terms(alpha)
        # (P^k)_{sv}/d_v = (P^k)_{vs}/d_s <= 1/d_s bounds the dropped tail
        tol = alpha ** (k + 1) / ((1 - alpha) * g.degrees[s])
        stderr = None
    else:
        stderr = errs[0]
        tol = float(stderr.max())
    return PotentialRow(int(s), rows[0], cfg.method, float(tol), stderr)


def potential_matrix(g, alpha):
    """The full dense ``C``; intended for exact all-pairs runs on small graphs."""
    alpha = check_alpha(alpha)
    _check_degrees(g, range(g.n))
    fac = la.cho_factor(_system_matrix(g, alpha).toarray(), lower=True)
    c = la.cho_solve(fac, np.eye(g.n))
    return (c + c.T) / 2


def edge_drops(g, c_s, c_t, s, t):
    """Signed drops ``phi_v - phi_w`` on every edge ``(v, w)`` for pair ``(s, t)``.

    ``c_s`` and ``c_t`` are the rows of ``C`` for ``s`` and ``t``; edges use the
    canonical ``v < w`` orientation of ``g.edges``.
    """
    v, w = g.edges[:, 0], g.edges[:, 1]
    ratio = c_s[t] / c_t[t]
    return (c_s[v] - c_s[w]) + ratio * (c_t[w] - c_t[v])


def voltage_drop(g, row_s, row_t, v, w):
    """Potential difference ``phi_v - phi_w`` for the pair (row_s.source, row_t.source)."""
    if not g.has_edge(v, w):
        raise ParameterError(f"({v}, {w}) is not an edge")
    c_s, c_t = row_s.values, row_t.values
    t = row_t.source
    if not c_t[t] > 0:
        raise ParameterError("diagonal entry of the target row must be positive")
    return float((c_s[v] - c_s[w]) + c_s[t] / c_t[t] * (c_t[w] - c_t[v]))


def solve_kirchhoff_direct(g, alpha, s, t, max_n=5000):
    """Potentials for unit injection at ``s`` with ``t`` grounded (``phi_t = 0``).

    Solves the reduced system ``(D - alpha*A)`` with row and column ``t``
    deleted by dense Cholesky.
    """
    alpha = check_alpha(alpha)
    if s == t or not (0 <= s < g.n and 0 <= t < g.n):
        raise ParameterError("need distinct source and target inside the graph")
    if g.n > max_n:
        raise ParameterError(f"dense Kirchhoff solve limited to n <= {max_n}, got {g.n}")
    keep = np.ones(g.n, bool)
    keep[t] = False
    m = _system_matrix(g, alpha).toarray()[np.ix_(keep, keep)]
    b = np.zeros(g.n - 1)
    b[s if s < t else s - 1] = 1.0
    # isolated nodes leave zero rows; they carry zero potential
    live = np.diag(m) > 0
    phi_red = np.zeros(g.n - 1)
    if live.any():
        phi_red[live] = la.cho_solve(la.cho_factor(m[np.ix_(live, live)], lower=True), b[live])
    phi = np.zeros(g.n)
    phi[keep] = phi_red
    return phi


class RowCache:
    """Thread-safe cache of solved rows keyed by graph, alpha, node, method and epsilon."""

    def __init__(self):
        self._rows = {}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._rows)

    def _key(self, g, alpha, node, cfg):
        return (g.fingerprint, float(alpha), int(node), cfg.method, cfg.epsilon)

    def rows(self, g, alpha, nodes, cfg):
        """Return ``{node: row}`` for ``nodes``, solving only the missing ones."""
        nodes = [int(v) for v in dict.fromkeys(nodes)]
        with self._lock:
            found = {v: self._rows.get(self._key(g, alpha, v, cfg)) for v in nodes}
        missing = [v for v, r in found.items() if r is None]
        if missing:
            solved, _ = solve_rows(g, alpha, missing, cfg)
            with self._lock:
                for v, row in zip(missing, solved):
                    self._rows.setdefault(self._key(g, alpha, v, cfg), row)
                    found[v] = row
        return found

    def clear(self):
        with self._lock:
            self._rows.clear()


_ROW_MAGIC = b"ACFROW01"
_ROW_HEADER = struct.Struct("<8sqdqqd")


def write_row(path, row, alpha, epsilon):
    """Spill a row to disk: header then little-endian float64 values."""
    values = np.asarray(row.values, dtype="<f8")
    header = _ROW_HEADER.pack(_ROW_MAGIC, len(values), float(alpha), row.source,
                              METHODS.index(row.method), float(epsilon))
    Path(path).write_bytes(header + values.tobytes())


def read_row(path):
    """Inverse of :func:`write_row`; returns ``(PotentialRow, alpha, epsilon)``."""
    data = Path(path).read_bytes()
    magic, n, alpha, source, method, eps = _ROW_HEADER.unpack_from(data)
    if magic != _ROW_MAGIC:
        raise ParameterError(f"{path} is not a row cache file")
    values = np.frombuffer(data, dtype="<f8", count=n, offset=_ROW_HEADER.size).astype(float)
    return PotentialRow(source, values, METHODS[method], eps), alpha, eps
