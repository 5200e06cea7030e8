"""Closed-form predicted volumes and curvatures for the catalog topologies.

Predictors marked ``caveat=True`` are heuristic: they are reported next to
computed values and never asserted against them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from bngeom.constants import (
    BURES_FISHER_RATIO,
    COLLAPSING_STAR_INTERCEPTS,
    VOLUME_TURNAROUND,
)
from bngeom.dag import Dag, TopologyId, skeleton_summary
from bngeom.errors import InputError

__all__ = [
    "PredictionRecord",
    "predict_complete",
    "predict_chain_star",
    "predict_collapsing_star",
    "predict_tree_node_sum",
    "predict_gaussian_star",
    "bures_rescale",
    "curvature_sign_inversion",
    "VOLUME_TURNAROUND",
]


@dataclass(frozen=True)
class PredictionRecord:
    topology: TopologyId
    d: int
    predictor_provenance: str
    predicted_volume: float | None = None
    predicted_R_constant: float | None = None
    predicted_avg_R: float | None = None
    caveat: bool = False
    extras: tuple = ()

    def __post_init__(self):
        if not self.predictor_provenance:
            raise ValueError("provenance is required")
        if self.predicted_volume is None and self.predicted_R_constant is None and self.predicted_avg_R is None:
            raise ValueError("a prediction needs at least one predicted quantity")

    def extra(self, key, default=None):
        return dict(self.extras).get(key, default)

    def to_dict(self):
        out = {
            "topology": self.topology.name,
            "d": self.d,
            "predicted_volume": self.predicted_volume,
            "predicted_R_constant": self.predicted_R_constant,
            "predicted_avg_R": self.predicted_avg_R,
            "provenance": self.predictor_provenance,
            "caveat": self.caveat,
        }
        out.update(dict(self.extras))
        return out


def _check_n(n, low=1):
    if int(n) != n or n < low:
        raise InputError(f"n must be an integer >= {low}")
    return int(n)


def predict_complete(n) -> PredictionRecord:
    n = _check_n(n)
    d = 2**n - 1
    half = 2 ** (n - 1)
    vol = math.pi**half / math.factorial(half - 1)
    r = d * (d - 1) / 4
    return PredictionRecord(
        TopologyId("K", n), d, "complete-DAG closed form: constant curvature d(d-1)/4",
        predicted_volume=vol, predicted_R_constant=r, predicted_avg_R=r,
    )


def predict_chain_star(n) -> PredictionRecord:
    """Shared chain/exploding-star prediction ``<R> = (2n - 1)/2``.

    ``n = 1`` is the single free node, whose curvature is 0; the sequence
    value 1/2 is kept and flagged.
    """
    n = _check_n(n)
    d = 2 * n - 1
    if n == 1:
        return PredictionRecord(
            TopologyId("L", 1), 1, "chain/star sequence extended to one node",
            predicted_volume=math.pi, predicted_avg_R=0.5, caveat=True,
            extras=(("note", "a one-dimensional manifold is flat (R = 0)"),),
        )
    return PredictionRecord(
        TopologyId("L", n), d, "chain/star closed form: equal volumes and averages",
        predicted_volume=math.pi ** (1 + 2 * n), predicted_avg_R=(2 * n - 1) / 2,
        extras=(("also_applies_to", TopologyId("E", n).name),),
    )


def collapsing_star_slope(n):
    half = 2 ** (n - 1)
    return half * (half - 1) / 4


def collapsing_star_expectation(n):
    """Closed-form ``<1/(rho(1-rho))>`` for a root of the n-parent collider."""
    if n < 2:
        return math.inf
    return 2.0 ** (n + 1) / (2.0 ** (n - 1) - 1.0)


def predict_collapsing_star(n) -> PredictionRecord:
    n = _check_n(n)
    if n not in COLLAPSING_STAR_INTERCEPTS:
        raise InputError("collapsing-star intercepts are tabulated for 1..5 parents only")
    a, source = COLLAPSING_STAR_INTERCEPTS[n]
    b = collapsing_star_slope(n)
    avg = a if b == 0 else a - b * n * collapsing_star_expectation(n)
    return PredictionRecord(
        TopologyId("C", n), n + 2**n, f"affine collapsing-star form; a_n: {source}",
        predicted_avg_R=avg, extras=(("a", a), ("b", b)),
    )


def curvature_sign_inversion():
    """Linear interpolation of the parent count where ``<R>`` changes sign."""
    prev = predict_collapsing_star(1).predicted_avg_R
    for n in range(2, 6):
        cur = predict_collapsing_star(n).predicted_avg_R
        if prev > 0 >= cur:
            return (n - 1) + prev / (prev - cur)
        prev = cur
    return None


def predict_tree_node_sum(dag: Dag) -> PredictionRecord:
    """Heuristic ``sum_k m_k (m_k + 1)/4`` over parent counts ``m_k`` (flagged)."""
    summary = skeleton_summary(dag)
    if not summary.is_forest:
        raise InputError("node-sum heuristic needs a forest skeleton")
    total2 = sum(m * (m + 1) // 2 for m in (len(dag.parents(k)) for k in range(dag.node_count)))
    value = total2 / 2
    assert (2 * value) == int(2 * value)
    d = sum(2 ** len(dag.parents(k)) for k in range(dag.node_count))
    return PredictionRecord(
        TopologyId("Custom", dag.node_count), d, "per-node parent-count heuristic",
        predicted_avg_R=value, caveat=True,
    )


def predict_gaussian_star(n=None, d=None) -> PredictionRecord:
    """``R = -(d+5)(d-1)/8`` for the Gaussian star with ``n`` roots (``d = 2n+1``).

    Passing an even ``d`` is allowed but flagged, since no star has that
    dimension.
    """
    if (n is None) == (d is None):
        raise InputError("give exactly one of n (roots) or d (dimension)")
    caveat = False
    if n is not None:
        n = _check_n(n, 0)
        d = 2 * n + 1
    else:
        d = _check_n(d)
        caveat = d % 2 == 0
    r = -(d + 5) * (d - 1) / 8
    roots = (d - 1) // 2
    return PredictionRecord(
        TopologyId("C", roots) if roots else TopologyId("K", 1), d,
        "Gaussian star closed form -(d+5)(d-1)/8",
        predicted_R_constant=r + 0.0, caveat=caveat,
    )


def bures_rescale(value):
    """Fisher to Bures Ricci scalar: the metric shrinks by 4, so R grows by 4."""
    if isinstance(value, PredictionRecord):
        value = value.predicted_R_constant if value.predicted_R_constant is not None else value.predicted_avg_R
    return value / BURES_FISHER_RATIO
