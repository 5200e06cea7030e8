"""Information volumes and volume-averaged Ricci scalars of bitnets.

Two structural facts keep the integrals tractable:

* The volume element is ``prod_j sqrt(pi_j) * prod_j (theta_j (1 - theta_j))**-0.5``
  and each ``pi_j`` is multilinear, so endpoint singular factors can be
  detected exactly (:func:`weight_spec`).
* Slots of childless nodes enter no parent marginal.  The curvature does not
  depend on them and each integrates to ``B(1/2, 1/2) = pi`` analytically,
  so tensor quadrature only runs over the remaining "active" coordinates.

Monte Carlo samples every coordinate from the arcsine law, so the importance
weight is ``pi**d * prod_j sqrt(pi_j) <= pi**d``.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.special import betaln, roots_jacobi

from bngeom.bitnet import BitnetModel
from bngeom.curvature import d4_pointwise_ricci, fit_collapsing_star_form
from bngeom.dag import TopologyId, build_catalog_dag
from bngeom.errors import CapabilityError, InputError
from bngeom.gaussian import GaussianModel
from bngeom.kernels import bitnet_batch

__all__ = [
    "IntegralEstimate",
    "WeightSpec",
    "weight_spec",
    "gauss_jacobi_01",
    "tanh_sinh_01",
    "volume",
    "average_ricci",
    "reduced_average_d4",
    "reduced_average_collapsing_star",
    "default_partitions",
]

MIN_MC_BUDGET = 1000
MC_CHUNK = 16384
CONSTANT_PROBES = 20
CONSTANT_VARIANCE = 1e-12
MAX_ACTIVE_DIMS = 4
MAX_QUAD_POINTS = 4_000_000
DE_CUTOFF = 1e-30
MC_CLIP = 1e-12


@dataclass
class IntegralEstimate:
    value: float
    error: float
    method: str
    budget: int
    seed: int | None = None
    status: str = "ok"
    details: dict = field(default_factory=dict)

    @property
    def error_kind(self):
        return "std_error" if self.method == "MonteCarlo" and self.status != "constant" else "truncation_estimate"

    def to_dict(self):
        out = asdict(self)
        out["error_kind"] = self.error_kind
        return out


@dataclass
class WeightSpec:
    """Endpoint exponents of the singular factor of the volume element.

    Coordinate ``j`` carries ``theta_j**lower[j] * (1 - theta_j)**upper[j]``;
    these are the ``alpha - 1`` of a Beta-type weight.
    """

    lower: np.ndarray
    upper: np.ndarray

    @property
    def alpha_lower(self):
        return self.lower + 1.0

    @property
    def alpha_upper(self):
        return self.upper + 1.0

    def integrable(self):
        return bool(np.all(self.alpha_lower > 0) and np.all(self.alpha_upper > 0))


def default_partitions():
    try:
        return max(1, int(os.environ.get("BNGEOM_PARTITIONS", "8")))
    except ValueError:
        return 8


def _require_bitnet(model):
    if isinstance(model, GaussianModel):
        raise CapabilityError("Gaussian volumes are improper (unbounded variances); bitnets only")
    if not isinstance(model, BitnetModel):
        raise InputError("expected a BitnetModel")
    model.check_enumerable()


def weight_spec(model: BitnetModel, seed=12345) -> WeightSpec:
    """Exact endpoint exponents of ``sqrt(det g)`` per coordinate.

    Each ``pi_j`` is a sum of nonnegative products and is multilinear, so it
    carries a factor ``theta_m`` exactly when it vanishes at ``theta_m = 0``
    for interior values of the other coordinates.
    """
    from bngeom.bitnet import slot_marginals

    _require_bitnet(model)
    rng = np.random.default_rng(seed)
    d = model.dim
    lower = np.full(d, -0.5)
    upper = np.full(d, -0.5)
    base = rng.uniform(0.2, 0.8, d)
    for m in range(d):
        for end, target in ((0.0, lower), (1.0, upper)):
            th = base.copy()
            th[m] = end
            target[m] += 0.5 * np.count_nonzero(slot_marginals(model, th) == 0.0)
    return WeightSpec(lower, upper)


def gauss_jacobi_01(n, lower, upper):
    """Nodes/weights for ``int_0^1 t**lower (1 - t)**upper f(t) dt``."""
    x, w = roots_jacobi(int(n), upper, lower)
    return (1.0 + x) / 2.0, w / 2.0 ** (lower + upper + 1.0)


def tanh_sinh_01(step, cutoff=DE_CUTOFF, tmax=4.0):
    """Double-exponential nodes/weights for ``int_0^1 f(t) dt``.

    Nodes below ``cutoff`` are dropped (products of several tiny
    coordinates would underflow); near 1 every representable node is kept,
    since ``1 - t`` is exact there.
    """
    k = np.arange(-int(tmax / step), int(tmax / step) + 1)
    t = k * step
    s = 0.5 * math.pi * np.sinh(t)
    x = 0.5 * (1.0 + np.tanh(s))
    w = step * 0.25 * math.pi * np.cosh(t) / np.cosh(s) ** 2
    keep = (x > cutoff) & (x < 1.0)
    return x[keep], w[keep]


def _active(model):
    return np.flatnonzero(~model.leaf_slots)


def _tensor_eval(model, active, rules, want_ricci, extra_log=None):
    """Weighted sums over a tensor grid of the active coordinates.

    Returns ``(sum w * rem, sum w * rem * R)`` where ``rem`` is the volume
    element with the leaf factors removed and divided by ``extra_log``'s
    weight (log-space callable on the active block).
    """
    d = model.dim
    k = len(active)
    if k == 0:
        theta = np.full((1, d), 0.5)
        _, hlp = bitnet_batch(model, theta, want_ricci=False)
        return float(np.exp(hlp[0])), 0.0
    nodes = [r[0] for r in rules]
    weights = [r[1] for r in rules]
    total = int(np.prod([len(x) for x in nodes]))
    if total > 4 * MAX_QUAD_POINTS:
        raise CapabilityError(f"tensor grid of {total} points exceeds the quadrature budget")
    grids = np.meshgrid(*nodes, indexing="ij")
    wgrid = np.ones(grids[0].shape)
    for i, w in enumerate(weights):
        shape = [1] * k
        shape[i] = -1
        wgrid = wgrid * w.reshape(shape)
    pts = np.column_stack([g.ravel() for g in grids])
    wflat = wgrid.ravel()
    s_den = 0.0
    s_num = 0.0
    chunk = 200_000
    for c in range(0, total, chunk):
        blk = pts[c:c + chunk]
        theta = np.full((blk.shape[0], d), 0.5)
        theta[:, active] = blk
        ric, hlp = bitnet_batch(model, theta, want_ricci=want_ricci)
        logrem = hlp - 0.5 * np.log(blk * (1.0 - blk)).sum(axis=1)
        if extra_log is not None:
            logrem = logrem - extra_log(blk)
        rem = np.exp(logrem) * wflat[c:c + chunk]
        s_den += float(rem.sum())
        if want_ricci:
            s_num += float(np.where(rem > 0, rem * ric, 0.0).sum())
    return s_den, s_num


def _richardson(ns, qs):
    """Extrapolate ``Q_N = Q + C N**-p`` from the last three members."""
    q1, q2, q3 = qs[-3:]
    n1, n2, n3 = ns[-3:]
    d1, d2 = q1 - q2, q2 - q3
    tiny = 1e-14 * max(1.0, abs(q3))
    if abs(d2) <= tiny or abs(d1) <= tiny or d1 * d2 <= 0:
        return q3, abs(d2), None
    ratio = d1 / d2

    def eq(p):
        return (n1**-p - n2**-p) / (n2**-p - n3**-p) - ratio

    try:
        p = brentq(eq, 0.05, 60.0)
    except ValueError:
        return q3, abs(d2), None
    corr = d2 / ((n3 / n2) ** p - 1.0)
    return q3 - corr, abs(corr), p


def _node_sequence(k, requested):
    if requested is not None:
        return tuple(int(x) for x in requested)
    if k == 0:
        return (1, 1, 1)
    top = 64
    while top**k > MAX_QUAD_POINTS and top > 6:
        top -= 1
    return (max(2, top // 2), max(3, (3 * top) // 4), top)


def _de_steps(k, requested):
    if requested is not None:
        return tuple(float(x) for x in requested)
    steps = [0.4, 0.2, 0.1]
    while len(tanh_sinh_01(steps[-1])[0]) ** max(k, 1) > MAX_QUAD_POINTS:
        steps = [s * 2 for s in steps]
    return tuple(steps)


def _check_quadrature(model):
    active = _active(model)
    if len(active) > MAX_ACTIVE_DIMS:
        raise CapabilityError(
            f"tensor quadrature needs at most {MAX_ACTIVE_DIMS} non-leaf coordinates "
            f"(model has {len(active)}); use Monte Carlo"
        )
    return active


def _gj_pass(model, active, lo, hi, nodes, want_ricci):
    rules = [gauss_jacobi_01(nodes, lo[i], hi[i]) for i in range(len(active))]

    def extra(blk):
        return (lo * np.log(blk) + hi * np.log1p(-blk)).sum(axis=1)

    return _tensor_eval(model, active, rules, want_ricci, extra if len(active) else None)


def _lowered(exps):
    """Move one endpoint factor from the weight into the integrand where allowed.

    The curvature can carry a ``1/theta`` pole exactly where the volume
    element vanishes; integrating ``R * theta`` against ``theta**(e - 1)``
    is the same integral with the pole cancelled.
    """
    return np.where(exps >= 0.5, exps - 1.0, exps)


def _de_pass(model, active, step, want_ricci):
    rules = [tanh_sinh_01(step) for _ in active]
    return _tensor_eval(model, active, rules, want_ricci)


def _quadrature(model, rule, want_ricci, nodes=None):
    active = _check_quadrature(model)
    k = len(active)
    n_leaf = model.dim - k
    leaf_factor = math.pi**n_leaf
    vols, avgs, levels = [], [], []
    if rule == "gauss-jacobi":
        ws = weight_spec(model)
        levels = list(_node_sequence(k, nodes))
        lo, hi = ws.lower[active], ws.upper[active]
        for n in levels:
            den, _ = _gj_pass(model, active, lo, hi, n, False)
            vols.append(den * leaf_factor)
            if want_ricci:
                _, num = _gj_pass(model, active, _lowered(lo), _lowered(hi), n, True)
                avgs.append(num / den)
            else:
                avgs.append(float("nan"))
        method = "GaussJacobi"
        order_key = levels
    elif rule == "tanh-sinh":
        levels = list(_de_steps(k, nodes))
        for h in levels:
            den, num = _de_pass(model, active, h, want_ricci)
            vols.append(den * leaf_factor)
            avgs.append(num / den if want_ricci else float("nan"))
        method = "DoubleExponential"
        order_key = [1.0 / h for h in levels]
    else:
        raise InputError(f"unknown quadrature rule {rule!r}")
    return method, levels, order_key, vols, avgs, k


def _quad_estimate(model, rule, quantity, nodes):
    want = quantity == "avg"
    method, levels, order_key, vols, avgs, k = _quadrature(model, rule, want, nodes)
    seq = avgs if want else vols
    if method == "GaussJacobi":
        value, err, order = _richardson(order_key, seq)
    else:
        # double-exponential error roughly squares per halving, but rounding
        # near the endpoints leaves a floor; the larger of the last two
        # differences stays on the safe side of it
        value, order = seq[-1], None
        err = max(abs(seq[-1] - seq[-2]), abs(seq[-2] - seq[-3]))
    budget = int(sum(len(tanh_sinh_01(h)[0]) ** k for h in levels)) if method == "DoubleExponential" else int(sum(n**k for n in levels))
    details = {
        "levels": list(levels),
        "sequence": [float(v) for v in seq],
        "active_dims": k,
        "leaf_dims": model.dim - k,
    }
    if order is not None:
        details["richardson_order"] = float(order)
    return IntegralEstimate(float(value), float(err), method, budget, None, "ok", details)


def _auto_rule(model):
    ws = weight_spec(model)
    # Gauss-Jacobi is exact when every marginal factors into endpoint monomials
    return "gauss-jacobi" if _fully_factored(model, ws) else "tanh-sinh"


def _fully_factored(model, ws, seed=7):
    from bngeom.bitnet import slot_marginals

    rng = np.random.default_rng(seed)
    th = rng.uniform(0.2, 0.8, model.dim)
    active = _active(model)
    # remainder of prod sqrt(pi) after the detected monomials must be constant
    vals = []
    for _ in range(3):
        th = rng.uniform(0.2, 0.8, model.dim)
        lp = 0.5 * np.log(slot_marginals(model, th)).sum()
        mono = ((ws.lower[active] + 0.5) * np.log(th[active]) + (ws.upper[active] + 0.5) * np.log1p(-th[active])).sum()
        vals.append(lp - mono)
    return bool(np.ptp(vals) < 1e-10)


# -- Monte Carlo -------------------------------------------------------------


def _arcsine(rng, shape):
    u = rng.random(shape)
    return np.clip(np.sin(0.5 * math.pi * u) ** 2, MC_CLIP, 1.0 - MC_CLIP)


def _partition_stats(model, n_samples, seed_seq, want_ricci):
    rng = np.random.default_rng(seed_seq)
    d = model.dim
    logscale = d * math.log(math.pi)
    chunks = []
    done = 0
    while done < n_samples:
        m = min(MC_CHUNK, n_samples - done)
        theta = _arcsine(rng, (m, d))
        ric, hlp = bitnet_batch(model, theta, want_ricci=want_ricci)
        w = np.exp(hlp + logscale)
        wr = w * ric
        chunks.append(
            (m, w.sum(), wr.sum(), (w * w).sum(), (wr * wr).sum(), (w * wr).sum())
        )
        done += m
    return chunks


def _mc_chunks(model, budget, seed, partitions, workers, want_ricci):
    partitions = int(partitions or default_partitions())
    seqs = np.random.SeedSequence(seed).spawn(partitions)
    counts = [budget // partitions + (1 if i < budget % partitions else 0) for i in range(partitions)]
    workers = max(1, int(workers or 1))
    if workers == 1:
        parts = [_partition_stats(model, c, s, want_ricci) for c, s in zip(counts, seqs)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda cs: _partition_stats(model, cs[0], cs[1], want_ricci), zip(counts, seqs)))
    return np.array([c for p in parts for c in p], dtype=float)


def _volume_from(stats):
    n, sw, sww = stats[:, 0].sum(), stats[:, 1].sum(), stats[:, 3].sum()
    mean = sw / n
    var = max(sww / n - mean**2, 0.0) * n / max(n - 1, 1)
    return mean, math.sqrt(var / n)


def _ratio_delta(stats):
    n = stats[:, 0].sum()
    sw, swr, sww, swrwr, swwr = stats[:, 1:].sum(axis=0)
    r = swr / sw
    ss = swrwr - 2 * r * swwr + r * r * sww
    mean_w = sw / n
    var = ss / max(n - 1, 1)
    if not np.isfinite(var) or var < 0:
        return r, float("nan")
    return r, math.sqrt(var / n) / mean_w


def _ratio_jackknife(stats):
    k = stats.shape[0]
    sw, swr = stats[:, 1], stats[:, 2]
    full = swr.sum() / sw.sum()
    loo = (swr.sum() - swr) / (sw.sum() - sw)
    return full, math.sqrt((k - 1) / k * np.sum((loo - loo.mean()) ** 2))


def _ratio(stats):
    r, se = _ratio_delta(stats)
    n = stats[:, 0].sum()
    _, se_w = _volume_from(stats)
    cv = se_w / (stats[:, 1].sum() / n)
    if (not np.isfinite(se) or cv > 0.1) and stats.shape[0] >= 4:
        r, se = _ratio_jackknife(stats)
        return r, se, "jackknife"
    return r, se, "delta"


def _divergence_suspected(stats, quantity):
    k = stats.shape[0]
    if k < 8:
        return False
    ses = []
    for frac in (4, 2, 1):
        sub = stats[: max(2, k // frac)]
        ses.append(_ratio(sub)[1] if quantity == "avg" else _volume_from(sub)[1])
    if not all(np.isfinite(ses)) or ses[0] == 0:
        return False
    # with finite variance quadrupling the budget halves the error
    return ses[2] / ses[0] > 0.85


def _mc_estimate(model, quantity, budget, seed, partitions, workers):
    budget = int(budget)
    if budget < MIN_MC_BUDGET:
        raise InputError(f"Monte Carlo budget must be at least {MIN_MC_BUDGET} samples")
    partitions = int(partitions or default_partitions())
    stats = _mc_chunks(model, budget, seed, partitions, workers, quantity == "avg")
    details = {"partitions": partitions, "chunks": int(stats.shape[0])}
    if quantity == "avg":
        value, err, how = _ratio(stats)
        details["error_method"] = how
        details["volume"] = float(_volume_from(stats)[0])
    else:
        value, err = _volume_from(stats)
    status = "divergence-suspected" if _divergence_suspected(stats, quantity) else "ok"
    return IntegralEstimate(float(value), float(err), "MonteCarlo", budget, int(seed), status, details)


# -- public API ----------------------------------------------------------------


def volume(model, method="quad", budget=None, seed=0, partitions=None, workers=1, nodes=None):
    """Fisher information volume ``int sqrt(det g) dtheta`` over the open cube.

    ``method`` is ``"quad"`` (Gauss-Jacobi when the volume element factors
    into endpoint monomials, tanh-sinh otherwise), ``"gauss-jacobi"``,
    ``"tanh-sinh"`` or ``"mc"``.
    """
    _require_bitnet(model)
    if method == "mc":
        return _mc_estimate(model, "vol", budget or 10**6, seed, partitions, workers)
    rule = _auto_rule(model) if method == "quad" else method
    return _quad_estimate(model, rule, "vol", nodes)


def _probe_constant(model, seed):
    from bngeom.kernels import bitnet_ricci_batch

    rng = np.random.default_rng(seed)
    probes = bitnet_ricci_batch(model, rng.uniform(0.05, 0.95, (CONSTANT_PROBES, model.dim)))
    if np.var(probes, ddof=1) < CONSTANT_VARIANCE:
        return float(np.mean(probes))
    return None


def average_ricci(model, method="quad", budget=None, seed=0, partitions=None, workers=1,
                  nodes=None, short_circuit=True):
    """Volume-weighted average of the Ricci scalar.

    Numerator and denominator share sample points (ratio estimator).  If
    20 probe points show a constant curvature the probe value is returned
    with zero error and status ``"constant"``.
    """
    _require_bitnet(model)
    if model.dim == 1:
        return IntegralEstimate(0.0, 0.0, "Exact", 0, None, "constant", {"reason": "one-dimensional"})
    if short_circuit:
        const = _probe_constant(model, seed)
        if const is not None:
            tag = "MonteCarlo" if method == "mc" else "DoubleExponential"
            return IntegralEstimate(const, 0.0, tag, CONSTANT_PROBES, int(seed), "constant", {})
    if method == "mc":
        return _mc_estimate(model, "avg", budget or 10**6, seed, partitions, workers)
    rule = _auto_rule(model) if method == "quad" else method
    return _quad_estimate(model, rule, "avg", nodes)


def _gj_ratio(func_num, func_den, exponent, n):
    x, w = gauss_jacobi_01(n, exponent, exponent)
    return func_num(x, w), func_den(x, w)


def reduced_average_d4(nodes=(32, 48, 64), exponent=2.5):
    """2-D average of the closed-form double-collider curvature.

    Weight ``[r1 (1-r1) r2 (1-r2)]**exponent``; Richardson extrapolation
    across the node counts.  When ``exponent > 0`` the numerator uses the
    weight with one power moved into the integrand, which cancels the
    curvature's boundary poles.  ``details["volume_element_exponent"]`` is
    the exponent implied by the full volume element after integrating out
    the collider CPTs.
    """
    rvec = np.vectorize(d4_pointwise_ricci)
    shift = 1.0 if exponent > 0 else 0.0
    qs = []
    for n in nodes:
        x, w = gauss_jacobi_01(n, exponent, exponent)
        xl, wl = gauss_jacobi_01(n, exponent - shift, exponent - shift)
        r1, r2 = np.meshgrid(xl, xl, indexing="ij")
        lift = (r1 * (1 - r1) * r2 * (1 - r2)) ** shift
        num = np.sum(np.outer(wl, wl) * rvec(r1, r2) * lift)
        qs.append(float(num / np.sum(w) ** 2))
    value, err, order = _richardson(list(nodes), qs)
    model = BitnetModel(build_catalog_dag(TopologyId("D4")))
    ws = weight_spec(model)
    details = {
        "weight_exponent": float(exponent),
        "volume_element_exponent": float(ws.lower[model.offsets[0]]),
        "levels": list(nodes),
        "sequence": qs,
    }
    if order is not None:
        details["richardson_order"] = float(order)
    return IntegralEstimate(float(value), float(err), "ReducedQuadrature", int(sum(n * n for n in nodes)), None, "ok", details)


def _root_marginal_expectation(model, root, nodes, inner_nodes):
    """``<1/(rho(1-rho))>`` under the volume element marginalized onto ``rho``.

    The marginal weight is computed at each outer node by tensor Gauss-Jacobi
    over all other active coordinates; leaf slots integrate to ``pi`` each and
    cancel in the ratio.
    """
    ws = weight_spec(model)
    e = float(ws.lower[root])
    if ws.upper[root] != e:
        raise CapabilityError("asymmetric root weight is not supported")
    if e - 1.0 <= -1.0:
        return float("inf"), "divergence-suspected", e
    active = [int(a) for a in _active(model) if a != root]
    lo, hi = ws.lower[active], ws.upper[active]
    inner = [gauss_jacobi_01(inner_nodes, lo[i], hi[i]) for i in range(len(active))]

    def marginal_remainder(rho):
        out = np.empty(rho.size)
        if active:
            grid = np.array(list(itertools.product(*[r[0] for r in inner])))
            wts = np.prod(np.array(list(itertools.product(*[r[1] for r in inner]))), axis=1)
        else:
            grid = np.zeros((1, 0))
            wts = np.ones(1)
        for i, r in enumerate(rho):
            theta = np.full((grid.shape[0], model.dim), 0.5)
            theta[:, active] = grid
            theta[:, root] = r
            _, hlp = bitnet_batch(model, theta, want_ricci=False)
            logv = hlp - 0.5 * np.log(r * (1 - r))
            if active:
                logv = logv - 0.5 * np.log(grid * (1 - grid)).sum(axis=1)
                logv = logv - (lo * np.log(grid) + hi * np.log1p(-grid)).sum(axis=1)
            logv = logv - e * np.log(r * (1 - r))
            out[i] = np.sum(wts * np.exp(logv))
        return out

    vals = []
    for n in nodes:
        xn, wn = gauss_jacobi_01(n, e - 1.0, e - 1.0)
        xd, wd = gauss_jacobi_01(n, e, e)
        vals.append(float(np.sum(wn * marginal_remainder(xn)) / np.sum(wd * marginal_remainder(xd))))
    return vals, "ok", e


def reduced_average_collapsing_star(n_parents, samples=None, seed=0, nodes=(24, 32), inner_nodes=6):
    """Average curvature of the collapsing star from its affine form.

    The fitted ``(a_n, b_n)`` are combined with ``<1/(rho(1-rho))>`` obtained
    two ways: the closed form ``2**(n+1) / (2**(n-1) - 1)`` (reported value)
    and numerical marginalization of the volume element (``details``).
    """
    n = int(n_parents)
    if not 2 <= n <= 5:
        raise InputError("reduced collapsing-star averages need 2..5 parents")
    fit = fit_collapsing_star_form(n, samples, seed)
    closed = 2.0 ** (n + 1) / (2.0 ** (n - 1) - 1.0)
    model = BitnetModel(build_catalog_dag(TopologyId("C", n)))
    vals, status, e = _root_marginal_expectation(model, model.offsets[0], nodes, inner_nodes)
    if status != "ok":
        numeric, trunc = float("inf"), float("inf")
    else:
        numeric, trunc = vals[-1], abs(vals[-1] - vals[-2])
    value = fit.a - fit.b * n * closed
    numeric_avg = fit.a - fit.b * n * numeric
    details = {
        "a": fit.a,
        "b": fit.b,
        "fit_residual": fit.residual,
        "expectation_closed": closed,
        "expectation_numeric": numeric,
        "expectation_truncation": trunc,
        "average_from_numeric": numeric_avg,
        "root_weight_exponent": e,
    }
    err = abs(value - numeric_avg) + fit.b * n * trunc
    return IntegralEstimate(float(value), float(err), "ReducedQuadrature", fit.samples, int(seed), status, details)


def beta_volume(lower, upper):
    """``int_0^1 t**lower (1-t)**upper dt``."""
    return math.exp(betaln(lower + 1.0, upper + 1.0))
