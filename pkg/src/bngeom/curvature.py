"""Christoffel symbols, Ricci tensor and Ricci scalar from a metric jet.

Sign convention: the round sphere has positive scalar curvature.  With
``Ric_ij = d_l G^l_ij - d_j G^l_il + G^l_lm G^m_ij - G^l_jm G^m_il`` the
complete bitnet on two nodes (the positive orthant of a radius-2 3-sphere)
has ``R = 3/2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from bngeom.errors import ConditioningError, InputError

__all__ = [
    "MetricJet",
    "CurvatureReport",
    "StarFit",
    "CONDITION_LIMIT",
    "curvature_report",
    "ricci_scalar",
    "ricci_scalar_diagonal",
    "diagonal_ricci_from_arrays",
    "bitnet_ricci",
    "gaussian_ricci",
    "d4_pointwise_ricci",
    "fit_collapsing_star_form",
]

CONDITION_LIMIT = 1e12


@dataclass
class MetricJet:
    """Metric and its first/second coordinate partials at one point.

    ``dg[k, i, j] = d_k g_ij`` and ``ddg[l, k, i, j] = d_l d_k g_ij``.
    """

    g: np.ndarray
    dg: np.ndarray
    ddg: np.ndarray
    diagonal: bool = False

    @property
    def dim(self):
        return self.g.shape[0]

    def scaled(self, c):
        """Jet of the metric ``c * g``."""
        return MetricJet(c * self.g, c * self.dg, c * self.ddg, self.diagonal)

    def permuted(self, perm):
        """Jet after relabeling coordinate ``perm[i]`` as ``i``."""
        p = np.asarray(perm)
        return MetricJet(
            self.g[np.ix_(p, p)],
            self.dg[np.ix_(p, p, p)],
            self.ddg[np.ix_(p, p, p, p)],
            self.diagonal,
        )

    def check(self, atol=1e-9):
        g, dg, ddg = self.g, self.dg, self.ddg
        d = self.dim
        if g.shape != (d, d) or dg.shape != (d, d, d) or ddg.shape != (d, d, d, d):
            raise InputError("metric jet arrays have inconsistent shapes")
        scale = max(1.0, float(np.max(np.abs(g))))
        if not np.allclose(g, g.T, atol=atol * scale):
            raise InputError("metric is not symmetric")
        if not np.allclose(dg, dg.transpose(0, 2, 1), atol=atol * max(1.0, np.max(np.abs(dg)))):
            raise InputError("metric first partials are not symmetric in (i, j)")
        s2 = atol * max(1.0, np.max(np.abs(ddg)))
        if not np.allclose(ddg, ddg.transpose(1, 0, 2, 3), atol=s2):
            raise InputError("second partials are not symmetric in the derivative indices")
        if not np.allclose(ddg, ddg.transpose(0, 1, 3, 2), atol=s2):
            raise InputError("second partials are not symmetric in (i, j)")
        return self


@dataclass
class CurvatureReport:
    christoffel: np.ndarray  # [l, i, j] = Gamma^l_ij
    ricci: np.ndarray
    scalar: float

    @property
    def dim(self):
        return self.ricci.shape[0]


def _inverse(g):
    cond = float(np.linalg.cond(g))
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise ConditioningError(f"metric condition number {cond:.3g} exceeds {CONDITION_LIMIT:.0e}", cond)
    try:
        c = np.linalg.cholesky(g)
    except np.linalg.LinAlgError:
        raise ConditioningError("metric is not positive definite", cond) from None
    cinv = np.linalg.inv(c)
    return cinv.T @ cinv


def curvature_report(jet: MetricJet) -> CurvatureReport:
    """Dense path: full inverse metric, Christoffel symbols and Ricci tensor."""
    g, dg, ddg = jet.g, jet.dg, jet.ddg
    if jet.dim == 0:
        return CurvatureReport(np.zeros((0, 0, 0)), np.zeros((0, 0)), 0.0)
    ginv = _inverse(g)
    # first kind, lower index first: G1[k, i, j] = (d_i g_jk + d_j g_ik - d_k g_ij) / 2
    g1 = 0.5 * (np.einsum("ijk->kij", dg) + np.einsum("jik->kij", dg) - dg)
    gamma = np.einsum("lk,kij->lij", ginv, g1)
    dg1 = 0.5 * (np.einsum("mijk->mkij", ddg) + np.einsum("mjik->mkij", ddg) - ddg)
    dginv = -np.einsum("la,mab,bk->mlk", ginv, dg, ginv)
    dgamma = np.einsum("mlk,kij->mlij", dginv, g1) + np.einsum("lk,mkij->mlij", ginv, dg1)
    ric = (
        np.einsum("llij->ij", dgamma)
        - np.einsum("jlil->ij", dgamma)
        + np.einsum("llm,mij->ij", gamma, gamma)
        - np.einsum("ljm,mil->ij", gamma, gamma)
    )
    ric = 0.5 * (ric + ric.T)
    return CurvatureReport(gamma, ric, float(np.einsum("ij,ij->", ginv, ric)))


def ricci_scalar(jet: MetricJet) -> float:
    return curvature_report(jet).scalar


def diagonal_ricci_from_arrays(h, dh, d2h):
    """Ricci scalar of ``diag(h)`` from ``dh[m, i] = d_m h_i`` and ``d2h[m, i] = d_m^2 h_i``.

    Sums the coordinate-plane sectional curvatures, ``R = sum_{i != j} K_ij``;
    the only cubic term is the ``sum_m dh[m, i] dh[m, j] / h[m]`` contraction.
    """
    h = np.asarray(h, dtype=float)
    d = h.shape[0]
    if d < 2:
        return 0.0
    if np.any(h <= 0) or not np.all(np.isfinite(h)):
        raise ConditioningError("diagonal metric has a nonpositive entry", float("inf"))
    cond = float(h.max() / h.min())
    if cond > CONDITION_LIMIT:
        raise ConditioningError(f"metric condition number {cond:.3g} exceeds {CONDITION_LIMIT:.0e}", cond)
    D = np.asarray(dh, dtype=float)
    dd = np.diag(D)
    hi = h[:, None]
    hj = h[None, :]
    cross = (D.T / h[None, :]) @ D  # [i, j] = sum_m D[m, i] D[m, j] / h[m]
    t = (
        -0.5 * (d2h + d2h.T)
        + D.T**2 / (4 * hi)
        + D**2 / (4 * hj)
        + D * dd[:, None] / (2 * hi)
        + D.T * dd[None, :] / (2 * hj)
        - cross / 4
    )
    np.fill_diagonal(t, 0.0)
    return float(np.sum(t / (hi * hj)))


def ricci_scalar_diagonal(jet: MetricJet) -> float:
    """Fast path for diagonal metrics; agrees with :func:`ricci_scalar`."""
    if not jet.diagonal:
        raise InputError("diagonal fast path requires a jet flagged diagonal")
    g = jet.g
    if np.any(g[~np.eye(jet.dim, dtype=bool)] != 0.0):
        raise InputError("jet is flagged diagonal but has off-diagonal entries")
    idx = np.arange(jet.dim)
    h = g[idx, idx]
    dh = jet.dg[:, idx, idx]
    d2h = jet.ddg[idx, idx][:, idx, idx]
    return diagonal_ricci_from_arrays(h, dh, d2h)


def bitnet_ricci(model, theta, dense=False):
    """Ricci scalar of a bitnet at one point via exact jets."""
    from bngeom import bitnet

    theta = np.asarray(theta, dtype=float)
    if dense:
        return ricci_scalar(bitnet.metric_jet(model, theta))
    return diagonal_ricci_from_arrays(*bitnet.diagonal_jet_arrays(model, theta))


def gaussian_ricci(model, x):
    from bngeom import gaussian

    return ricci_scalar(gaussian.gaussian_metric_jet(model, x))


def d4_pointwise_ricci(r1, r2):
    """Closed-form Ricci scalar of the double collider in its root marginals."""
    for r in (r1, r2):
        if not 0.0 < r < 1.0:
            raise InputError("root marginals must lie strictly inside (0, 1)")
    num = (
        12 * r1**2 * r2**2 - 12 * r1**2 * r2 + r1**2
        - 12 * r1 * r2**2 + 12 * r1 * r2 - r1 + r2**2 - r2
    )
    return 3 * num / (r1 * r2 * (1 - r1) * (1 - r2))


@dataclass
class StarFit:
    n_parents: int
    a: float
    b: float
    residual: float
    cpt_sensitivity: float
    samples: int


def fit_collapsing_star_form(n_parents, samples=None, seed=0, low=0.15, high=0.85):
    """Fit ``R = a - b * sum_i 1/(rho_i (1 - rho_i))`` on a collapsing star.

    Points draw root marginals uniformly from ``[low, high]`` and child CPT
    entries from ``[0.05, 0.95]``.  ``residual`` is the largest absolute fit
    error; ``cpt_sensitivity`` is the largest change in R when only the
    child CPT is redrawn.
    """
    from bngeom.bitnet import BitnetModel
    from bngeom.dag import TopologyId, build_catalog_dag
    from bngeom.kernels import bitnet_ricci_batch

    n = int(n_parents)
    if not 1 <= n <= 5:
        raise InputError("collapsing-star fits are supported for 1..5 parents")
    samples = 4 * (n + 1) if samples is None else int(samples)
    if samples < 2 * (n + 1):
        raise InputError(f"need at least {2 * (n + 1)} samples for {n} parents")
    model = BitnetModel(build_catalog_dag(TopologyId("C", n)))
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.05, 0.95, (samples, model.dim))
    roots = [model.offsets[k] for k in range(n)]
    theta[:, roots] = rng.uniform(low, high, (samples, n))
    ric = bitnet_ricci_batch(model, theta)
    other = theta.copy()
    child = list(model.block(n))
    other[:, child] = rng.uniform(0.05, 0.95, (samples, len(child)))
    sens = float(np.max(np.abs(bitnet_ricci_batch(model, other) - ric)))

    rho = theta[:, roots]
    x = np.sum(1.0 / (rho * (1.0 - rho)), axis=1)
    design = np.column_stack([np.ones(samples), -x])
    normal = design.T @ design
    cond = float(np.linalg.cond(normal))
    if cond > CONDITION_LIMIT:
        raise ConditioningError(f"rank-deficient design (condition {cond:.3g})", cond)
    coef = np.linalg.solve(normal, design.T @ ric)
    resid = float(np.max(np.abs(design @ coef - ric)))
    return StarFit(n, float(coef[0]), float(coef[1]), resid, sens, samples)
