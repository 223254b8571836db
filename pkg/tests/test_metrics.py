import math

import numpy as np
import pytest

from optsearch.grid import Domain, ScalarField
from optsearch.metrics import cost, detection_probability, plan_report, uniformity
from optsearch.planner import PlateauRegion, allocate, incremental

B10 = 300 ** (1 / 3)
# adaptive dblquad of (1 - e^{-(B-s)}) e^{-s} over the triangle s <= B, B = 300^(1/3)
P_EX1_T10 = 0.962737185211492


def test_zero_allocation(ex1):
    assert detection_probability(ex1, ScalarField.zeros(ex1.domain)) == 0.0
    assert cost(ScalarField.zeros(ex1.domain)) == 0.0


def test_detection_probability_example1(ex1):
    assert 1 - (1 + B10 + B10**2 / 2) * math.exp(-B10) == pytest.approx(P_EX1_T10, abs=1e-12)
    P = detection_probability(ex1, allocate(ex1, 10.0).allocation)
    assert P == pytest.approx(P_EX1_T10, abs=1e-3)
    assert P == pytest.approx(0.9627, abs=1e-3)


def test_detection_probability_circular_normal(cn):
    H = math.sqrt(5 / math.pi)
    h = H * 2.0
    assert h == pytest.approx(2.52313, abs=1e-5)
    expect = 1 - (1 + h) * math.exp(-h)
    assert expect == pytest.approx(0.7174, abs=1e-4)
    assert detection_probability(cn, allocate(cn, 4.0).allocation) == pytest.approx(expect, abs=1e-3)


def test_cost(ex1):
    assert cost(allocate(ex1, 10.0).allocation) == pytest.approx(50.0, rel=5e-5)
    assert cost(ScalarField.constant(Domain(0, 1, 0, 1, 10, 10), 2.0)) == pytest.approx(2.0, rel=1e-15)
    with pytest.raises(ValueError):
        cost(ScalarField.constant(Domain(0, 1, 0, 1, 2, 2), -1.0))


def test_uniformity_incremental(ex1, spatial):
    plan = allocate(ex1, 10.0)
    u = uniformity(incremental(ex1, 10.0, 10.0), plan.plateau)
    assert u["mean"] == pytest.approx(600 ** (1 / 3) - B10, abs=2e-3)
    assert u["rel_std"] <= 1e-9
    splan = allocate(spatial, 10.0)
    assert uniformity(incremental(spatial, 10.0, 10.0), splan.plateau)["rel_std"] > 1e-2


def test_uniformity_constant_and_empty():
    d = Domain(0, 1, 0, 1, 3, 3)
    full = PlateauRegion(np.ones(d.shape, bool), d)
    assert uniformity(ScalarField.constant(d, 4.2), full)["max_abs_dev"] == 0.0
    with pytest.raises(ValueError):
        uniformity(ScalarField.constant(d, 4.2), PlateauRegion(np.zeros(d.shape, bool), d))


def test_optimal_plan_beats_uniform_alternatives(ex1):
    plan = allocate(ex1, 10.0)
    P_opt = detection_probability(ex1, plan.allocation)
    area = ex1.domain.cell_area

    def spread(mask):
        vals = np.where(mask, plan.E / (mask.sum() * area), 0.0)
        return detection_probability(ex1, ScalarField(ex1.domain, vals))

    # highest-density cells holding 90% of the prior mass
    pri = ex1.prior_field.values
    order = np.argsort(pri, axis=None)[::-1]
    cum = np.cumsum(pri.ravel()[order]) * area
    top = np.zeros(pri.size, bool)
    top[order[: np.searchsorted(cum, 0.9) + 1]] = True
    for mask in (plan.plateau.mask, top.reshape(pri.shape)):
        assert P_opt - spread(mask) > 1e-4


def test_detection_ladder(ex1, cn):
    for sc in (ex1, cn):
        P = [detection_probability(sc, allocate(sc, T).allocation) for T in (1, 5, 10, 50, 200)]
        assert all(b > a for a, b in zip(P, P[1:]))
        assert P[-1] >= 0.999


def test_plan_report(ex1):
    rep = plan_report(allocate(ex1, 10.0), t=10.0)
    assert rep.cost == pytest.approx(rep.E, rel=1e-6)
    assert 0 <= rep.detection_probability <= 1
    assert rep.incremental_uniformity["rel_std"] <= 1e-9
    assert '"lambda_star"' in rep.to_json()
