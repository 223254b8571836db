import math

import numpy as np
import pytest

from optsearch.detection import Exponential, GenericRegular
from optsearch.errors import InfeasibleBudgetError
from optsearch.grid import Domain, integrate
from optsearch.planner import (
    Scenario,
    allocate,
    attractiveness,
    attractiveness_inverse,
    budget_error,
    incremental,
    plateau_region,
    threshold,
    total_allocation_at,
)
from optsearch.priors import CircularNormal, CornerExponential, UniformBox

B10 = 300 ** (1 / 3)  # (6 W v T)^(1/3) at W=1, v=5, T=10
B20 = 600 ** (1 / 3)


def test_cube_roots_by_root_finding():
    # guard the frozen constants with an independent Newton solve of B^3 = c
    for c, B in ((300, B10), (600, B20)):
        b = 5.0
        for _ in range(50):
            b -= (b**3 - c) / (3 * b * b)
        assert b == pytest.approx(B, rel=1e-15)
    assert B10 == pytest.approx(6.6943, abs=1e-4)


def test_attractiveness_examples(ex1, cn):
    assert attractiveness(ex1, (1, 1), 0.0) == pytest.approx(math.exp(-2), rel=1e-15)
    assert attractiveness(cn, (0, 0), 0.0) == pytest.approx(1 / (2 * math.pi), rel=1e-15)
    ys = np.linspace(0, 30, 50)
    q = [attractiveness(ex1, (0.5, 0.2), y) for y in ys]
    assert np.all(np.diff(q) < 0) and q[-1] < 1e-12


def test_attractiveness_inverse_examples(ex1):
    assert attractiveness_inverse(ex1, (1, 1), math.exp(-6)) == pytest.approx(4.0, rel=1e-14)
    assert attractiveness_inverse(ex1, (4, 4), math.exp(-6)) == 0.0
    q0 = attractiveness(ex1, (0.3, 2.2), 0.0)
    assert attractiveness_inverse(ex1, (0.3, 2.2), q0) == pytest.approx(0.0, abs=1e-15)
    assert attractiveness_inverse(ex1, (-1, 1), 1e-3) == 0.0


def test_total_allocation_examples(ex1):
    # closed form Q(lam) = -(ln lam)^3 / 6 on the quadrant
    assert total_allocation_at(ex1, 1.0) == 0.0
    assert total_allocation_at(ex1, math.exp(-6)) == pytest.approx(36.0, abs=0.05)
    assert total_allocation_at(ex1, math.exp(-3)) == pytest.approx(4.5, abs=0.02)


def test_total_allocation_strictly_decreasing(ex1):
    lams = np.exp(-np.linspace(0.5, 12, 25))
    Q = [total_allocation_at(ex1, lam) for lam in lams]
    assert np.all(np.diff(Q) > 0)


def test_threshold_examples(ex1):
    assert threshold(ex1, 50.0) == pytest.approx(math.exp(-B10), rel=0.01)
    assert threshold(ex1, 50.0) == pytest.approx(1.238e-3, rel=0.01)
    assert threshold(ex1, 36.0) == pytest.approx(math.exp(-6), rel=0.01)
    lam = threshold(ex1, 50.0)
    assert total_allocation_at(ex1, lam) == pytest.approx(50.0, rel=1e-9)


def test_threshold_vanishing_budget(ex1):
    qmax = math.exp(float(np.max(ex1.log_q0)))
    assert threshold(ex1, 1e-9) == pytest.approx(qmax, rel=1e-3)


def test_threshold_errors(ex1):
    with pytest.raises(ValueError):
        threshold(ex1, 0.0)
    tiny = Scenario(UniformBox((0, 1, 0, 1)), Exponential(1.0), 1.0, 1.0, Domain(0, 1, 0, 1, 8, 8))
    with pytest.raises(InfeasibleBudgetError) as info:
        threshold(tiny, 1e6)
    assert 0 < info.value.max_effort < 1e6


def test_allocate_example1(ex1):
    plan = allocate(ex1, 10.0)
    xs, ys = ex1.mesh
    exact = np.maximum(B10 - xs - ys, 0.0)
    assert np.max(np.abs(plan.allocation.values - exact)) <= 1e-2
    assert integrate(plan.allocation) == pytest.approx(50.0, rel=1e-6)
    at = lambda x, y: attractiveness_inverse(ex1, (x, y), plan.lambda_star)
    # the prior's support is the open quadrant, so approach the corner from inside
    assert at(1e-12, 1e-12) == pytest.approx(B10, abs=1e-3)
    assert at(0.0, 0.0) == 0.0
    assert at(2.0, 3.0) == pytest.approx(B10 - 5.0, abs=1e-3)
    assert at(4.0, 4.0) == 0.0


def test_allocate_zero_time(ex1):
    plan = allocate(ex1, 0.0)
    assert plan.E == 0.0
    assert not plan.allocation.values.any()
    assert plan.plateau.empty


def test_incremental_example1(ex1):
    inc = incremental(ex1, 10.0, 10.0)
    xs, ys = ex1.mesh
    s = xs + ys
    searched = allocate(ex1, 10.0).plateau.mask
    assert np.all(inc.values >= 0)
    np.testing.assert_allclose(inc.values[searched], B20 - B10, atol=2e-3)
    assert B20 - B10 == pytest.approx(1.7400, abs=1e-4)
    assert np.all(inc.values[s > B20 + 0.05] == 0)


def test_incremental_vanishes_with_t(ex1):
    sizes = [np.max(incremental(ex1, 10.0, t).values) for t in (1.0, 1e-2, 1e-4)]
    assert sizes[0] > sizes[1] > sizes[2]
    assert sizes[2] < 1e-4


def test_incremental_constant_equals_log_ratio(ex1):
    a, b = allocate(ex1, 10.0), allocate(ex1, 20.0)
    inc = b.allocation.values - a.allocation.values
    expect = -math.log(b.lambda_star / a.lambda_star)
    np.testing.assert_allclose(inc[a.plateau.mask], expect, rtol=1e-12)


def test_plateau_region_examples(ex1, cn):
    lam = math.exp(-B10)
    region = plateau_region(ex1, lam)
    assert region.area == pytest.approx(B10**2 / 2, abs=0.1)
    assert plateau_region(ex1, 2.0).empty
    assert plateau_region(ex1, 2.0).area == 0.0
    lam = 1e-3
    R2 = -2 * math.log(2 * math.pi * lam)
    assert plateau_region(cn, lam).area == pytest.approx(math.pi * R2, rel=2e-3)


def test_plateau_matches_radius_from_budget(cn):
    # disc radius from the budget: R^2 = 2 H sqrt(T) with H = sqrt(W v / pi)
    H = math.sqrt(5 / math.pi)
    plan = allocate(cn, 4.0)
    R2 = -2 * math.log(2 * math.pi * plan.lambda_star)
    assert R2 == pytest.approx(2 * H * 2.0, rel=1e-4)


@pytest.mark.parametrize("T1,T2", [(1.0, 2.0), (5.0, 10.0), (10.0, 50.0)])
def test_monotone_buildup_and_threshold(ex1, T1, T2):
    a, b = allocate(ex1, T1), allocate(ex1, T2)
    assert np.min(b.allocation.values - a.allocation.values) >= -1e-10
    assert b.lambda_star < a.lambda_star


@pytest.mark.parametrize("T", [0.5, 10.0, 120.0])
def test_budget_and_support_law(ex1, cn, T):
    for sc in (ex1, cn):
        plan = allocate(sc, T)
        assert budget_error(plan) <= 1e-6
        positive = plan.allocation.values > 0
        # positive allocation lies inside the plateau; only boundary cells may be zero inside it
        assert not np.any(positive & ~plan.plateau.mask)
        boundary_zero = plan.plateau.mask & ~positive
        assert np.count_nonzero(boundary_zero) <= 2 * (sc.domain.nx + sc.domain.ny)


def test_water_filling_identity(ex1):
    plan = allocate(ex1, 10.0)
    m = plan.allocation.values > 0
    lhs = ex1.prior_field.values[m] * np.exp(-plan.allocation.values[m])
    np.testing.assert_allclose(lhs, plan.lambda_star, rtol=1e-9)


def test_generic_regular_matches_exponential():
    dom = Domain(0, 10, 0, 10, 24, 24)
    exp_sc = Scenario(CornerExponential(), Exponential(1.5), 1.0, 2.0, dom)
    gen = GenericRegular(
        d=lambda y, x1, x2: -np.expm1(-1.5 * np.asarray(y)) + 0 * np.asarray(x1),
        dd=lambda y, x1, x2: 1.5 * np.exp(-1.5 * np.asarray(y)) + 0 * np.asarray(x1),
    )
    gen_sc = Scenario(CornerExponential(), gen, 1.0, 2.0, dom)
    a, b = allocate(exp_sc, 3.0), allocate(gen_sc, 3.0)
    assert b.lambda_star == pytest.approx(a.lambda_star, rel=1e-8)
    np.testing.assert_allclose(b.allocation.values, a.allocation.values, atol=1e-8)
    assert budget_error(b) <= 1e-9


def test_scenario_validation():
    with pytest.raises(ValueError):
        Scenario(CircularNormal(), Exponential(), 0.0, 1.0, Domain(-1, 1, -1, 1))
    sc = Scenario(CircularNormal(), Exponential(), 1.0, 1.0, Domain(-1, 1, -1, 1, 4, 4), effort_fn=lambda T: T**2)
    assert sc.effort(3.0) == 9.0
    assert not sc.covers_prior(1e-5)
