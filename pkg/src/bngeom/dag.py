"""Directed acyclic graphs, the topology catalog and skeleton analysis.

Nodes are the integers ``0..n-1``.  The topological order is produced by
Kahn's algorithm with ties broken by ascending node index, so it is fully
deterministic.
"""

from __future__ import annotations

import enum
import heapq
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from bngeom.errors import InputError

__all__ = [
    "Dag",
    "TopologyId",
    "SkeletonSummary",
    "QuantizationClass",
    "build_catalog_dag",
    "skeleton_summary",
    "quantization_class",
    "parse_topology_name",
    "load_model_json",
    "random_dag",
    "random_forest",
]


def _kahn_order(n, edges):
    children = [[] for _ in range(n)]
    indeg = [0] * n
    for p, c in edges:
        children[p].append(c)
        indeg[c] += 1
    heap = [k for k in range(n) if indeg[k] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        k = heapq.heappop(heap)
        order.append(k)
        for c in children[k]:
            indeg[c] -= 1
            if indeg[c] == 0:
                heapq.heappush(heap, c)
    if len(order) != n:
        raise InputError("graph contains a directed cycle")
    return tuple(order)


@dataclass(frozen=True)
class Dag:
    """An immutable DAG on nodes ``0..node_count-1``.

    Edges are (parent, child) pairs.  Construction rejects self-loops,
    duplicate edges, out-of-range endpoints and directed cycles.
    """

    node_count: int
    edges: tuple[tuple[int, int], ...]
    labels: tuple[str, ...] | None = None
    topo_order: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        n = int(self.node_count)
        if n < 1:
            raise InputError("a DAG needs at least one node")
        edges = tuple((int(p), int(c)) for p, c in self.edges)
        seen = set()
        for p, c in edges:
            if not (0 <= p < n and 0 <= c < n):
                raise InputError(f"edge {(p, c)} references a node outside 0..{n - 1}")
            if p == c:
                raise InputError(f"self-loop on node {p}")
            if (p, c) in seen:
                raise InputError(f"duplicate edge {(p, c)}")
            seen.add((p, c))
        if self.labels is not None and len(self.labels) != n:
            raise InputError("labels must have one entry per node")
        object.__setattr__(self, "node_count", n)
        object.__setattr__(self, "edges", tuple(sorted(edges)))
        object.__setattr__(self, "topo_order", _kahn_order(n, edges))

    def parents(self, k):
        """Parents of node ``k`` in ascending index order."""
        return tuple(p for p, c in self.edges if c == k)

    def children(self, k):
        return tuple(c for p, c in self.edges if p == k)

    def is_topological(self, order=None):
        order = self.topo_order if order is None else order
        pos = {k: i for i, k in enumerate(order)}
        return len(pos) == self.node_count and all(pos[p] < pos[c] for p, c in self.edges)

    def relabel(self, perm):
        """Return the DAG with node ``k`` renamed to ``perm[k]``."""
        perm = list(perm)
        return Dag(self.node_count, tuple((perm[p], perm[c]) for p, c in self.edges))

    def name_of(self, k):
        return self.labels[k] if self.labels else f"X{k + 1}"


class TopologyId:
    """A catalog family plus its size parameter.

    ``K``, ``L`` and ``E`` take the node count; ``C`` takes the number of
    parents of the single sink (so ``TopologyId("C", 3)`` is the 4-node
    collider).  ``D4`` has no size.
    """

    FAMILIES = ("K", "L", "E", "C", "D4", "Custom")

    def __init__(self, family, n=None):
        if family not in self.FAMILIES:
            raise InputError(f"unknown topology family {family!r}")
        self.family = family
        self.n = n

    def __repr__(self):
        return f"TopologyId({self.family!r}, {self.n!r})"

    def __eq__(self, other):
        return isinstance(other, TopologyId) and (self.family, self.n) == (other.family, other.n)

    def __hash__(self):
        return hash((self.family, self.n))

    @property
    def name(self):
        if self.family == "D4":
            return "D4"
        if self.family == "C":
            return f"C{self.n + 1}"
        if self.family == "Custom":
            return "custom"
        return f"{self.family}{self.n}"


def build_catalog_dag(tid: TopologyId) -> Dag:
    """Canonical DAG for a catalog topology."""
    fam, n = tid.family, tid.n
    if fam == "D4":
        return Dag(4, ((0, 2), (1, 2), (0, 3), (1, 3)))
    if fam == "Custom":
        raise InputError("custom topologies come from a model file, not the catalog")
    if n is None or int(n) < 1:
        what = "parents" if fam == "C" else "nodes"
        raise InputError(f"family {fam} needs at least one {what.rstrip('s')} (got n={n})")
    n = int(n)
    if fam == "K":
        return Dag(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))
    if fam == "L":
        return Dag(n, tuple((i, i + 1) for i in range(n - 1)))
    if fam == "E":
        return Dag(n, tuple((0, j) for j in range(1, n)))
    # collapsing star: n roots into one sink
    return Dag(n + 1, tuple((i, n) for i in range(n)))


@dataclass(frozen=True)
class SkeletonSummary:
    vertex_count: int
    edge_count: int
    component_count: int
    betti_1: int

    @property
    def is_forest(self):
        return self.betti_1 == 0


def skeleton_summary(dag: Dag) -> SkeletonSummary:
    """Cycle rank of the undirected skeleton, ``|E| - |V| + c``."""
    parent = list(range(dag.node_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    undirected = {tuple(sorted(e)) for e in dag.edges}
    for a, b in undirected:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    comps = len({find(k) for k in range(dag.node_count)})
    betti = len(undirected) - dag.node_count + comps
    return SkeletonSummary(dag.node_count, len(undirected), comps, betti)


class QuantizationClass(str, enum.Enum):
    HALF_INTEGER_EXPECTED = "HalfIntegerExpected"
    RATIONAL_EXPECTED = "RationalExpected"
    IRRATIONAL_CONJECTURED = "IrrationalConjectured"


def quantization_class(summary: SkeletonSummary) -> QuantizationClass:
    """Label predicted from the cycle rank alone; nothing is computed."""
    if summary.betti_1 == 0:
        return QuantizationClass.HALF_INTEGER_EXPECTED
    if summary.betti_1 == 1:
        return QuantizationClass.RATIONAL_EXPECTED
    return QuantizationClass.IRRATIONAL_CONJECTURED


# Gaussian-network names used in tables and on the command line.
GAUSSIAN_ALIASES = {
    "single": "K1",
    "chain": "L2",
    "v": "C3",
    "l3": "L3",
    "l4": "L4",
    "star2": "C3",
    "star3": "C4",
}

_NAME_RE = re.compile(r"^(K|L|E|C)(\d+)$")


def parse_topology_name(name: str):
    """Resolve a catalog name to ``(kind, TopologyId, Dag)``.

    Bitnet names are ``K<n>``, ``L<n>``, ``E<n>``, ``C<n+1>`` and ``D4``.
    A ``gauss:`` prefix selects the Gaussian family; besides the bitnet
    names it accepts ``single``, ``chain``, ``v``, ``star<n>``, ``l3``,
    ``l4`` and ``diamond`` (X0 -> X1, X0 -> X2, X1 -> X3, X2 -> X3).
    """
    kind = "bitnet"
    raw = name.strip()
    if raw.lower().startswith("gauss:"):
        kind = "gaussian"
        raw = raw[len("gauss:"):]
        low = raw.lower()
        if low == "diamond":
            return kind, TopologyId("Custom"), Dag(4, ((0, 1), (0, 2), (1, 3), (2, 3)))
        m = re.match(r"^star(\d+)$", low)
        if m:
            raw = f"C{int(m.group(1)) + 1}"
        else:
            raw = GAUSSIAN_ALIASES.get(low, raw)
    raw = raw.upper()
    if raw == "D4":
        tid = TopologyId("D4")
        return kind, tid, build_catalog_dag(tid)
    m = _NAME_RE.match(raw)
    if not m:
        raise InputError(f"unknown topology name {name!r}")
    fam, size = m.group(1), int(m.group(2))
    if fam == "C":
        if size < 2:
            raise InputError("collapsing stars start at C2 (one parent)")
        tid = TopologyId("C", size - 1)
    else:
        tid = TopologyId(fam, size)
    return kind, tid, build_catalog_dag(tid)


def load_model_json(source):
    """Parse the JSON model format into ``(kind, Dag)``.

    ``{"kind": "bitnet"|"gaussian", "nodes": [names], "edges": [[p, c], ...]}``;
    edge endpoints may be node names or integer indices.  Cycles are
    rejected here.
    """
    if isinstance(source, (str, Path)) and Path(source).exists():
        text = Path(source).read_text()
    else:
        text = source
    try:
        doc = json.loads(text) if isinstance(text, str) else dict(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"model file is not valid JSON: {exc}") from None
    kind = doc.get("kind", "bitnet")
    if kind not in ("bitnet", "gaussian"):
        raise InputError(f"unknown model kind {kind!r}")
    nodes = doc.get("nodes")
    if not isinstance(nodes, list) or not nodes:
        raise InputError("model needs a nonempty 'nodes' list")
    names = [str(x) for x in nodes]
    if len(set(names)) != len(names):
        raise InputError("node names must be unique")
    index = {nm: i for i, nm in enumerate(names)}

    def resolve(v):
        if isinstance(v, int) and not isinstance(v, bool):
            return v
        if str(v) in index:
            return index[str(v)]
        raise InputError(f"edge endpoint {v!r} is not a declared node")

    edges = []
    for e in doc.get("edges", []):
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise InputError(f"malformed edge {e!r}")
        edges.append((resolve(e[0]), resolve(e[1])))
    return kind, Dag(len(names), tuple(edges), tuple(names))


def random_dag(n, rng, edge_prob=0.5, max_parents=None):
    """Random DAG on ``n`` nodes consistent with the identity order."""
    edges = []
    for c in range(n):
        cand = [p for p in range(c) if rng.random() < edge_prob]
        if max_parents is not None and len(cand) > max_parents:
            cand = sorted(rng.choice(cand, size=max_parents, replace=False).tolist())
        edges.extend((p, c) for p in cand)
    return Dag(n, tuple(edges))


def random_forest(rng, max_dim=6, min_edges=1, max_tries=1000):
    """Random DAG whose skeleton is a forest, with bitnet dimension <= max_dim.

    Edges are added one at a time with a random orientation, skipping any
    that would close a cycle in the skeleton.
    """
    for _ in range(max_tries):
        n = int(rng.integers(2, 5))
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        rng.shuffle(pairs)
        n_edges = int(rng.integers(min_edges, n))
        comp = list(range(n))
        edges = []
        for i, j in pairs:
            if len(edges) == n_edges:
                break
            if comp[i] == comp[j]:
                continue
            old, new = comp[j], comp[i]
            comp = [new if c == old else c for c in comp]
            edges.append((i, j) if rng.random() < 0.5 else (j, i))
        dag = Dag(n, tuple(edges))
        dim = sum(2 ** len(dag.parents(k)) for k in range(n))
        if len(edges) >= min_edges and dim <= max_dim:
            return dag
    raise RuntimeError("could not draw a forest within the dimension budget")


def all_bits(n):
    """All 2**n assignments as rows, node 0 in column 0."""
    return ((np.arange(2**n)[:, None] >> np.arange(n)[None, :]) & 1).astype(np.int8)
