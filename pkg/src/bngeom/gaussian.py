"""Zero-mean Gaussian DAG networks.

``X_k = sum_{j in pa(k)} a_jk X_j + eps_k`` with ``Var(eps_k) = v_k``.  Each
node owns a contiguous block holding one regression slot per parent
(ascending parent index) followed by its variance slot; blocks follow the
topological order.
"""

from __future__ import annotations

import numpy as np

from bngeom.dag import Dag
from bngeom.errors import InputError
from bngeom.jet import Jet2, variables

__all__ = [
    "GaussianModel",
    "covariance",
    "gaussian_fisher_metric",
    "gaussian_metric_jet",
    "sample",
]

MIN_VARIANCE = 1e-12


class GaussianModel:
    def __init__(self, dag: Dag):
        self.dag = dag
        self.n = dag.node_count
        self.parents = tuple(dag.parents(k) for k in range(self.n))
        self._a_slot = {}
        self._v_slot = {}
        o = 0
        for k in dag.topo_order:
            for p in self.parents[k]:
                self._a_slot[(p, k)] = o
                o += 1
            self._v_slot[k] = o
            o += 1
        self.dim = o
        self.is_variance = np.zeros(o, dtype=bool)
        self.is_variance[list(self._v_slot.values())] = True
        self.slot_node = np.empty(o, dtype=np.int64)
        for (p, k), j in self._a_slot.items():
            self.slot_node[j] = k
        for k, j in self._v_slot.items():
            self.slot_node[j] = k

    def __repr__(self):
        return f"GaussianModel(n={self.n}, d={self.dim}, edges={list(self.dag.edges)})"

    def a_slot(self, parent, child):
        try:
            return self._a_slot[(parent, child)]
        except KeyError:
            raise InputError(f"no edge {parent} -> {child}") from None

    def v_slot(self, k):
        return self._v_slot[k]

    def block(self, k):
        return [self._a_slot[(p, k)] for p in self.parents[k]] + [self._v_slot[k]]

    def validate_point(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise InputError(f"expected {self.dim} parameters, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise InputError("parameters must be finite")
        if np.any(x[self.is_variance] <= MIN_VARIANCE):
            raise InputError("variances must be strictly positive")
        return x

    def random_point(self, rng, v_range=(0.1, 10.0), a_range=(-3.0, 3.0)):
        x = rng.uniform(*a_range, self.dim)
        lo, hi = np.log(v_range[0]), np.log(v_range[1])
        x[self.is_variance] = np.exp(rng.uniform(lo, hi, int(self.is_variance.sum())))
        return x


def _propagate(model, vals):
    """Covariance entries by forward propagation in topological order."""
    n = model.n
    cov = [[None] * n for _ in range(n)]
    done = []
    for k in model.dag.topo_order:
        pa = model.parents[k]
        coef = [vals[model.a_slot(p, k)] for p in pa]
        for m in done:
            acc = 0.0
            for c, p in zip(coef, pa):
                acc = c * cov[p][m] + acc
            cov[k][m] = cov[m][k] = acc
        var = vals[model.v_slot(k)]
        for c, p in zip(coef, pa):
            for c2, q in zip(coef, pa):
                var = c * c2 * cov[p][q] + var
        cov[k][k] = var
        done.append(k)
    return cov


def covariance(model: GaussianModel, x):
    x = model.validate_point(x)
    return np.array(_propagate(model, list(x)), dtype=float)


def _metric_entries(model, vals, cov):
    """``{(i, j): value}`` for the nonzero upper-triangle metric entries."""
    out = {}
    for k in range(model.n):
        pa = model.parents[k]
        v = vals[model.v_slot(k)]
        for i, p in enumerate(pa):
            for q in pa[i:]:
                out[(model.a_slot(p, k), model.a_slot(q, k))] = cov[p][q] / v
        out[(model.v_slot(k), model.v_slot(k))] = 0.5 / (v * v)
    return out


def gaussian_fisher_metric(model: GaussianModel, x):
    """Block-diagonal Fisher metric: parent covariance over v_k, and 1/(2 v_k^2)."""
    x = model.validate_point(x)
    vals = list(x)
    g = np.zeros((model.dim, model.dim))
    for (i, j), val in _metric_entries(model, vals, _propagate(model, vals)).items():
        g[i, j] = g[j, i] = val
    return g


def gaussian_metric_jet(model: GaussianModel, x):
    from bngeom.curvature import MetricJet

    x = model.validate_point(x)
    d = model.dim
    xs = variables(x)
    g = np.zeros((d, d))
    dg = np.zeros((d, d, d))
    ddg = np.zeros((d, d, d, d))
    for (i, j), e in _metric_entries(model, xs, _propagate(model, xs)).items():
        if not isinstance(e, Jet2):
            g[i, j] = g[j, i] = e
            continue
        g[i, j] = g[j, i] = e.val
        dg[:, i, j] = dg[:, j, i] = e.grad
        ddg[:, :, i, j] = ddg[:, :, j, i] = e.hess
    return MetricJet(g, dg, ddg, diagonal=False)


def sample(model: GaussianModel, x, size, rng):
    x = model.validate_point(x)
    out = np.zeros((size, model.n))
    for k in model.dag.topo_order:
        mean = np.zeros(size)
        for p in model.parents[k]:
            mean += x[model.a_slot(p, k)] * out[:, p]
        out[:, k] = mean + np.sqrt(x[model.v_slot(k)]) * rng.standard_normal(size)
    return out
