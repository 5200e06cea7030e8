import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bngeom.bitnet import BitnetModel, sample
from bngeom.dag import Dag
from bngeom.errors import InputError
from bngeom.scoring import LOOP_ADVISORY, cic_score

from conftest import model_for


def test_single_node_closed_form():
    rep = cic_score(model_for("K1"), np.array([[1], [1], [1], [0]]))
    t = 0.75
    assert rep.log_lik_term == pytest.approx(3 * math.log(0.75) + math.log(0.25), abs=1e-15)
    assert rep.bic_term == pytest.approx(0.5 * math.log(4 / (2 * math.pi)), abs=1e-15)
    assert rep.metric_term == pytest.approx(0.5 * math.log(1 / (t * (1 - t))), abs=1e-15)
    assert rep.curvature_penalty == pytest.approx(-1 / 96, abs=1e-15)
    assert rep.stirling_term == pytest.approx(1 / 48, abs=1e-15)
    parts = (rep.log_lik_term, rep.bic_term, rep.metric_term, rep.curvature_penalty, rep.stirling_term)
    assert rep.total == pytest.approx(sum(parts), abs=1e-14)
    assert not rep.flagged


def _dependent_data(n, seed):
    rng = np.random.default_rng(seed)
    model = model_for("K2")
    return sample(model, np.array([0.5, 0.2, 0.8]), n, rng)


def test_dependent_data_prefers_the_edge():
    data = _dependent_data(500, 1)
    k2 = cic_score(model_for("K2"), data)
    indep = cic_score(BitnetModel(Dag(2, ())), data)
    assert k2.total > indep.total


def test_correction_is_order_one_over_n():
    ratios = []
    for seed in range(20):
        big = _dependent_data(4000, seed)
        small = big[:2000]
        diff = [r.total - r.bic_with_metric for r in (cic_score(model_for("K2"), x) for x in (big, small))]
        ratios.append(diff[1] / diff[0])
    assert 1.5 <= np.mean(ratios) <= 2.5


@given(st.integers(0, 10_000), st.integers(20, 300))
def test_term_signs_and_permutation_invariance(seed, n):
    rng = np.random.default_rng(seed)
    model = model_for("L3")
    data = sample(model, model.random_point(rng, 0.2, 0.8), n, rng)
    rep = cic_score(model, data)
    if rep.curvature_penalty is not None:
        assert rep.curvature_penalty <= 0 and rep.stirling_term >= 0
    shuffled = cic_score(model, data[rng.permutation(n)])
    for key in ("log_lik_term", "metric_term", "curvature_penalty", "stirling_term", "total"):
        a, b = getattr(rep, key), getattr(shuffled, key)
        assert (a is None and b is None) or a == pytest.approx(b, rel=1e-12, abs=1e-12)


def test_flags_mark_undefined_terms():
    data = np.array([[0, 0], [0, 1], [0, 0]])  # parent never 1
    rep = cic_score(model_for("K2"), data)
    assert rep.flags["zero_count"] == [2]
    assert rep.curvature_penalty is None and rep.total is None and rep.flagged
    rep = cic_score(model_for("K1"), np.array([[1], [1]]))
    assert rep.flags["boundary_mle"] == [0] and rep.metric_term is None
    assert math.isfinite(rep.details["metric_term_clamped"])


def test_loop_advisory():
    rng = np.random.default_rng(3)
    d4 = model_for("D4")
    data = sample(d4, d4.random_point(rng, 0.3, 0.7), 400, rng)
    assert LOOP_ADVISORY in cic_score(d4, data).notes
    assert not cic_score(model_for("E4"), data).notes


def test_input_errors():
    with pytest.raises(InputError):
        cic_score(model_for("K2"), np.zeros((0, 2)))
    with pytest.raises(InputError):
        cic_score(model_for("K2"), np.zeros((5, 3)))
