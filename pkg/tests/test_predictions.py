import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bngeom import predictions as P
from bngeom.constants import VOLUME_TURNAROUND
from bngeom.dag import Dag, random_forest
from bngeom.errors import InputError


def test_complete_values():
    assert P.predict_complete(1).predicted_volume == pytest.approx(math.pi)
    assert P.predict_complete(2).predicted_volume == pytest.approx(math.pi**2)
    rec = P.predict_complete(3)
    assert rec.predicted_volume == pytest.approx(math.pi**4 / 6)
    assert rec.predicted_R_constant == 10.5 and rec.d == 7


def test_complete_volumes_decrease_from_three():
    vols = [P.predict_complete(n).predicted_volume for n in range(3, 9)]
    assert all(b < a for a, b in zip(vols, vols[1:]))
    assert P.predict_complete(3).predicted_volume > P.predict_complete(2).predicted_volume
    assert VOLUME_TURNAROUND == pytest.approx(math.log2(math.pi**2))


def test_chain_star():
    rec = P.predict_chain_star(3)
    assert rec.predicted_avg_R == 2.5 and rec.predicted_volume == pytest.approx(math.pi**7) and not rec.caveat
    one = P.predict_chain_star(1)
    assert one.caveat and one.predicted_avg_R == 0.5


@pytest.mark.parametrize("n,b", [(1, 0.0), (2, 0.5), (3, 3.0), (4, 14.0), (5, 60.0)])
def test_collapsing_star_slope_and_table(n, b):
    rec = P.predict_collapsing_star(n)
    assert rec.extra("b") == b
    assert rec.d == n + 2**n


def test_collapsing_star_averages_from_table():
    vals = [P.predict_collapsing_star(n).predicted_avg_R for n in range(2, 6)]
    assert vals == pytest.approx([2.0, 6.0, 16.0, -272.0])
    with pytest.raises(InputError):
        P.predict_collapsing_star(6)


def test_sign_inversion_point():
    assert P.curvature_sign_inversion() == pytest.approx(4 + 16 / 288)


def test_tree_node_sum_examples():
    assert P.predict_tree_node_sum(Dag(2, ((0, 1),))).predicted_avg_R == 0.5
    assert P.predict_tree_node_sum(Dag(3, ((0, 2), (1, 2)))).predicted_avg_R == 1.5
    assert P.predict_tree_node_sum(Dag(1, ())).predicted_avg_R == 0.0
    with pytest.raises(InputError):
        P.predict_tree_node_sum(Dag(4, ((0, 2), (1, 2), (0, 3), (1, 3))))


@given(st.integers(0, 10_000))
def test_tree_node_sum_is_half_integer(seed):
    rec = P.predict_tree_node_sum(random_forest(np.random.default_rng(seed)))
    assert rec.caveat and (2 * rec.predicted_avg_R) == int(2 * rec.predicted_avg_R)


@pytest.mark.parametrize("d,r", [(1, 0.0), (3, -2.0), (5, -5.0), (7, -9.0)])
def test_gaussian_star(d, r):
    assert P.predict_gaussian_star(d=d).predicted_R_constant == r
    assert P.predict_gaussian_star(n=2).predicted_R_constant == -5.0
    assert P.predict_gaussian_star(d=4).caveat


def test_bures():
    assert P.bures_rescale(1.5) == 6.0
    assert P.bures_rescale(0.0) == 0.0
    for n in (2, 3, 4):
        d = 2**n - 1
        assert P.bures_rescale(P.predict_complete(n)) == pytest.approx(d * (d - 1))
