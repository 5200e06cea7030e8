"""Curvature information criterion for bitnet structures on binary data.

``total`` approximates ``log Z_N`` (higher is better) as

    max log-lik + (d/2) log(N / 2 pi) + log sqrt(det g(theta_hat))
    - (1/24) sum_k 1/(N_k rho_k) + (1/12) sum_k 1/N_k

with ``k`` running over parameter slots, ``N_k`` the number of rows in slot
``k``'s parent configuration and ``rho_k = N_k / N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from bngeom.bitnet import DEFAULT_EPS, BitnetModel, mle_and_counts, slot_marginals
from bngeom.dag import skeleton_summary

__all__ = ["CicReport", "cic_score"]

LOOP_ADVISORY = (
    "skeleton has cycles: the curvature reading of the 1/N penalty is only "
    "justified for forests; raw expansion terms are reported"
)


@dataclass
class CicReport:
    log_lik_term: float
    bic_term: float
    metric_term: float | None
    curvature_penalty: float | None
    stirling_term: float | None
    total: float | None
    n_rows: int
    d: int
    flags: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def flagged(self):
        return any(self.flags.values())

    @property
    def bic_with_metric(self):
        if self.metric_term is None:
            return None
        return self.log_lik_term + self.bic_term + self.metric_term

    def to_dict(self):
        return {
            "log_lik_term": self.log_lik_term,
            "bic_term": self.bic_term,
            "metric_term": self.metric_term,
            "curvature_penalty": self.curvature_penalty,
            "stirling_term": self.stirling_term,
            "total": self.total,
            "bic_with_metric": self.bic_with_metric,
            "n_rows": self.n_rows,
            "d": self.d,
            "flags": {k: list(v) for k, v in self.flags.items()},
            "notes": list(self.notes),
            "details": dict(self.details),
        }


def _xlogy(x, y):
    return np.where(x > 0, x * np.log(np.where(x > 0, y, 1.0)), 0.0)


def cic_score(model: BitnetModel, data, eps=DEFAULT_EPS) -> CicReport:
    """Score ``model`` on a 0/1 array with one column per node.

    Terms that depend on an unobserved parent configuration (``N_k = 0``) or
    on an MLE at 0 or 1 are returned as ``None`` and the slots are listed in
    ``flags``; ``total`` is then ``None`` too.
    """
    mle = mle_and_counts(model, data)
    n = mle.n_rows
    th, ones, counts = mle.theta, mle.ones, mle.config_counts
    d = model.dim

    log_lik = float(np.sum(_xlogy(ones, th) + _xlogy(counts - ones, 1.0 - th)))
    bic = 0.5 * d * math.log(n / (2.0 * math.pi))

    clamped = np.clip(th, eps, 1.0 - eps)
    pi = slot_marginals(model, clamped)
    metric_clamped = float(0.5 * np.sum(np.log(pi) - np.log(clamped * (1.0 - clamped))))

    zero = np.flatnonzero(mle.zero_count).tolist()
    boundary = np.flatnonzero(mle.boundary).tolist()
    flags = {"zero_count": zero, "boundary_mle": boundary}

    metric = None if (zero or boundary) else metric_clamped
    if zero:
        penalty = stirling = None
    else:
        penalty = -float(np.sum(n / counts**2)) / 24.0
        stirling = float(np.sum(1.0 / counts)) / 12.0

    parts = (log_lik, bic, metric, penalty, stirling)
    total = None if any(p is None for p in parts) else float(sum(parts))

    notes = []
    if skeleton_summary(model.dag).betti_1 >= 1:
        notes.append(LOOP_ADVISORY)
    details = {"metric_term_clamped": metric_clamped, "eps": eps}
    return CicReport(log_lik, bic, metric, penalty, stirling, total, n, d, flags, notes, details)
