"""Binary Bayesian networks ("bitnets") and their diagonal Fisher metric.

Each node ``k`` owns a contiguous block of ``2**m_k`` parameters, one per
parent configuration; blocks are laid out in topological order.  A parent
configuration is encoded with the lowest-index parent as the least
significant bit.  Slot ``j`` of node ``k`` with configuration ``s`` holds
``P(X_k = 1 | parents = s)``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from bngeom.dag import Dag, all_bits
from bngeom.errors import CapabilityError, InputError
from bngeom.jet import Jet2, variables

__all__ = [
    "BitnetModel",
    "MleResult",
    "ENUMERATION_CAP",
    "joint_probability",
    "slot_marginals",
    "parent_config_marginal",
    "fisher_metric",
    "metric_jet",
    "diagonal_jet_arrays",
    "mle_and_counts",
    "sample",
    "load_csv",
]

ENUMERATION_CAP = 16
DEFAULT_EPS = 1e-9


class BitnetModel:
    """Parameter layout of a bitnet over a fixed DAG."""

    def __init__(self, dag: Dag):
        self.dag = dag
        n = dag.node_count
        self.n = n
        self.parents = tuple(dag.parents(k) for k in range(n))
        self.offsets = [0] * n
        o = 0
        for k in dag.topo_order:
            self.offsets[k] = o
            o += 2 ** len(self.parents[k])
        self.dim = o
        self.slot_node = np.empty(o, dtype=np.int64)
        self.slot_config = np.empty(o, dtype=np.int64)
        for k in range(n):
            size = 2 ** len(self.parents[k])
            self.slot_node[self.offsets[k]:self.offsets[k] + size] = k
            self.slot_config[self.offsets[k]:self.offsets[k] + size] = np.arange(size)

    def __repr__(self):
        return f"BitnetModel(n={self.n}, d={self.dim}, edges={list(self.dag.edges)})"

    @property
    def parent_counts(self):
        return [len(p) for p in self.parents]

    def block(self, k):
        return range(self.offsets[k], self.offsets[k] + 2 ** len(self.parents[k]))

    def slot(self, k, s):
        if not 0 <= s < 2 ** len(self.parents[k]):
            raise InputError(f"configuration {s} out of range for node {k}")
        return self.offsets[k] + s

    def config_of(self, k, x):
        return sum(int(x[p]) << i for i, p in enumerate(self.parents[k]))

    @cached_property
    def leaf_slots(self):
        """Slots of nodes without children.

        These coordinates never enter another node's parent marginal, so
        the metric is translation invariant along them (after the arcsine
        reparameterization) and the curvature does not depend on them.
        """
        mask = np.zeros(self.dim, dtype=bool)
        for k in range(self.n):
            if not self.dag.children(k):
                mask[list(self.block(k))] = True
        return mask

    def check_enumerable(self):
        if self.n > ENUMERATION_CAP:
            raise CapabilityError(
                f"exact enumeration is capped at {ENUMERATION_CAP} nodes (model has {self.n})"
            )

    @cached_property
    def enumeration(self):
        """``(bits, slots)``: every assignment and the slot each node uses in it."""
        self.check_enumerable()
        bits = all_bits(self.n)
        slots = np.empty(bits.shape, dtype=np.int64)
        for k in range(self.n):
            s = np.zeros(bits.shape[0], dtype=np.int64)
            for i, p in enumerate(self.parents[k]):
                s |= bits[:, p].astype(np.int64) << i
            slots[:, k] = self.offsets[k] + s
        return bits, slots

    def validate_point(self, theta, eps=DEFAULT_EPS):
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.dim,):
            raise InputError(f"expected {self.dim} parameters, got shape {theta.shape}")
        if not np.all(np.isfinite(theta)) or np.any(theta < eps) or np.any(theta > 1 - eps):
            raise InputError(f"bitnet parameters must lie in [{eps}, 1 - {eps}]")
        return theta

    def random_point(self, rng, low=0.05, high=0.95):
        return rng.uniform(low, high, self.dim)

    def point_from_cpts(self, cpts):
        """Flat point from ``{node: [theta_s for s in configs]}``."""
        theta = np.empty(self.dim)
        for k in range(self.n):
            vals = np.asarray(cpts[k], dtype=float).ravel()
            if vals.size != 2 ** len(self.parents[k]):
                raise InputError(f"node {k} needs {2 ** len(self.parents[k])} CPT entries")
            theta[list(self.block(k))] = vals
        return theta


def joint_probability(model: BitnetModel, theta, assignment):
    x = [int(b) for b in assignment]
    if len(x) != model.n:
        raise InputError(f"assignment has {len(x)} bits, model has {model.n} nodes")
    p = 1.0
    for k in range(model.n):
        t = theta[model.slot(k, model.config_of(k, x))]
        p *= t if x[k] else 1.0 - t
    return p


def _forward_marginals(model, theta, one):
    """Parent-configuration marginal of every slot by forward enumeration.

    Nodes are visited in topological order while a table of joint
    probabilities over the already-visited nodes is extended one node at a
    time; each node's parent marginals are read off that table before the
    node is appended.  Works for floats and for :class:`Jet2` entries.
    """
    order = model.dag.topo_order
    pos = {k: i for i, k in enumerate(order)}
    table = [one]
    out = [None] * model.dim
    for t, k in enumerate(order):
        pa = model.parents[k]
        for s in range(2 ** len(pa)):
            out[model.offsets[k] + s] = 0.0
        for idx, p in enumerate(table):
            s = 0
            for i, q in enumerate(pa):
                s |= ((idx >> pos[q]) & 1) << i
            j = model.offsets[k] + s
            out[j] = p + out[j]
        new = [None] * (2 * len(table))
        for idx, p in enumerate(table):
            s = 0
            for i, q in enumerate(pa):
                s |= ((idx >> pos[q]) & 1) << i
            th = theta[model.offsets[k] + s]
            new[idx] = p * (1.0 - th)
            new[idx | (1 << t)] = p * th
        table = new
    return out


def slot_marginals(model: BitnetModel, theta):
    """``pi_j = P(parents of node(j) = config(j))`` for every slot."""
    model.check_enumerable()
    theta = np.asarray(theta, dtype=float)
    return np.array(_forward_marginals(model, theta, 1.0), dtype=float)


def parent_config_marginal(model: BitnetModel, theta, j):
    return float(slot_marginals(model, theta)[j])


def fisher_metric(model: BitnetModel, theta):
    theta = np.asarray(theta, dtype=float)
    return np.diag(slot_marginals(model, theta) / (theta * (1.0 - theta)))


def _metric_diagonal_jets(model, theta):
    theta = np.asarray(theta, dtype=float)
    model.check_enumerable()
    xs = variables(theta)
    one = Jet2(1.0, np.zeros(model.dim), np.zeros((model.dim, model.dim)))
    pis = _forward_marginals(model, xs, one)
    out = []
    for j in range(model.dim):
        pi = pis[j] if isinstance(pis[j], Jet2) else one * pis[j]
        out.append(pi / (xs[j] * (1.0 - xs[j])))
    return out


def diagonal_jet_arrays(model: BitnetModel, theta):
    """Compact jet of the diagonal metric: ``h[i]``, ``dh[m, i]``, ``d2h[m, i]``.

    ``dh[m, i] = d h_i / d theta_m`` and ``d2h[m, i] = d^2 h_i / d theta_m^2``
    are exactly the derivatives the diagonal curvature formula consumes.
    """
    jets = _metric_diagonal_jets(model, theta)
    h = np.array([g.val for g in jets])
    dh = np.stack([g.grad for g in jets], axis=1)
    d2h = np.stack([np.diag(g.hess) for g in jets], axis=1)
    return h, dh, d2h


def metric_jet(model: BitnetModel, theta):
    """Full :class:`~bngeom.curvature.MetricJet` of the bitnet metric."""
    from bngeom.curvature import MetricJet

    jets = _metric_diagonal_jets(model, theta)
    d = model.dim
    g = np.zeros((d, d))
    dg = np.zeros((d, d, d))
    ddg = np.zeros((d, d, d, d))
    for j, jet in enumerate(jets):
        g[j, j] = jet.val
        dg[:, j, j] = jet.grad
        ddg[:, :, j, j] = jet.hess
    return MetricJet(g, dg, ddg, diagonal=True)


@dataclass
class MleResult:
    theta: np.ndarray
    ones: np.ndarray
    config_counts: np.ndarray
    n_rows: int
    zero_count: np.ndarray
    boundary: np.ndarray

    @property
    def rho(self):
        return self.config_counts / self.n_rows


def _as_dataset(model, data):
    data = np.asarray(data)
    if data.ndim != 2 or data.shape[0] == 0:
        raise InputError("dataset must be a nonempty 2-D array of bits")
    if data.shape[1] != model.n:
        raise InputError(f"dataset rows have {data.shape[1]} columns, model has {model.n} nodes")
    if not np.all((data == 0) | (data == 1)):
        raise InputError("dataset entries must be 0 or 1")
    return data.astype(np.int64)


def mle_and_counts(model: BitnetModel, data) -> MleResult:
    """Maximum-likelihood CPTs by direct counting.

    Slots whose parent configuration never occurs get ``theta = 0.5`` and
    are flagged in ``zero_count``; MLEs equal to 0 or 1 are flagged in
    ``boundary``.
    """
    data = _as_dataset(model, data)
    d = model.dim
    ones = np.zeros(d)
    counts = np.zeros(d)
    for k in range(model.n):
        s = np.zeros(data.shape[0], dtype=np.int64)
        for i, p in enumerate(model.parents[k]):
            s |= data[:, p] << i
        j = model.offsets[k] + s
        np.add.at(counts, j, 1.0)
        np.add.at(ones, j, data[:, k].astype(float))
    zero = counts == 0
    theta = np.where(zero, 0.5, ones / np.where(zero, 1.0, counts))
    boundary = ~zero & ((theta == 0.0) | (theta == 1.0))
    return MleResult(theta, ones, counts, data.shape[0], zero, boundary)


def sample(model: BitnetModel, theta, size, rng):
    """Ancestral sampling; returns an ``(size, n)`` int8 array."""
    theta = np.asarray(theta, dtype=float)
    x = np.zeros((size, model.n), dtype=np.int8)
    for k in model.dag.topo_order:
        s = np.zeros(size, dtype=np.int64)
        for i, p in enumerate(model.parents[k]):
            s |= x[:, p].astype(np.int64) << i
        x[:, k] = rng.random(size) < theta[model.offsets[k] + s]
    return x


def load_csv(path, n_nodes):
    """Read a 0/1 CSV (one column per node, optional header row)."""
    rows = []
    with Path(path).open(newline="") as fh:
        for lineno, rec in enumerate(csv.reader(fh), start=1):
            if not rec or all(not c.strip() for c in rec):
                continue
            try:
                vals = [int(c.strip()) for c in rec]
            except ValueError:
                if lineno == 1 and not rows:
                    continue  # header
                raise InputError(f"{path}:{lineno}: non-integer entry") from None
            if len(vals) != n_nodes:
                raise InputError(f"{path}:{lineno}: expected {n_nodes} columns, got {len(vals)}")
            rows.append(vals)
    if not rows:
        raise InputError(f"{path}: dataset is empty")
    data = np.array(rows, dtype=np.int64)
    if not np.all((data == 0) | (data == 1)):
        raise InputError(f"{path}: entries must be 0 or 1")
    return data
