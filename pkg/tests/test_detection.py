import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from optsearch.detection import (
    Exponential,
    GenericRegular,
    SpatialExponential,
    deriv,
    deriv_inverse,
    prob,
)
from optsearch.errors import ModelRegularityError
from optsearch.grid import Domain, ScalarField


def _quadratic_family():
    # d = 1 - 1/(1 + y)^2: regular, derivative 2/(1+y)^3
    return GenericRegular(
        d=lambda y, x1, x2: 1.0 - 1.0 / (1.0 + np.asarray(y)) ** 2 + 0 * np.asarray(x1),
        dd=lambda y, x1, x2: 2.0 / (1.0 + np.asarray(y)) ** 3 + 0 * np.asarray(x1),
    )


MODELS = [Exponential(1.0), Exponential(2.5), SpatialExponential("norm_sq"), _quadratic_family()]


def test_prob_examples():
    assert prob(Exponential(1.0), (3, 4), 0.0) == 0.0
    assert prob(Exponential(1.0), (0, 0), math.log(2)) == pytest.approx(0.5, rel=1e-15)
    assert prob(SpatialExponential(), (1, 1), 1.0) == pytest.approx(1 - math.exp(-2), rel=1e-15)
    assert prob(SpatialExponential(), (1, 1), 1.0) == pytest.approx(0.8646647, abs=1e-7)
    with pytest.raises(ValueError):
        prob(Exponential(1.0), (0, 0), -1.0)


def test_deriv_examples():
    assert deriv(Exponential(1.0), (0, 0), 0.0) == 1.0
    assert deriv(Exponential(2.0), (0, 0), 1.0) == pytest.approx(0.2706706, abs=1e-7)
    assert deriv(SpatialExponential(), (1, 0), 0.0) == 1.0


def test_deriv_inverse_examples():
    assert deriv_inverse(Exponential(1.0), (0, 0), 1.0) == 0.0
    assert deriv_inverse(Exponential(1.0), (0, 0), math.exp(-4)) == pytest.approx(4.0, rel=1e-14)
    assert deriv_inverse(Exponential(1.0), (0, 0), 2.0) == 0.0
    with pytest.raises(ValueError):
        deriv_inverse(Exponential(1.0), (0, 0), 0.0)


def test_spatial_blind_at_origin():
    assert deriv(SpatialExponential(), (0, 0), 0.0) == 0.0
    assert deriv_inverse(SpatialExponential(), (0, 0), 1e-6) == 0.0


def test_spatial_beta_field():
    d = Domain(0, 2, 0, 2, 4, 4)
    beta = ScalarField.constant(d, 3.0)
    m = SpatialExponential(beta)
    assert prob(m, (1, 1), 0.5) == pytest.approx(1 - math.exp(-1.5), rel=1e-14)
    with pytest.raises(ValueError):
        SpatialExponential("nonsense")


@pytest.mark.parametrize("model", MODELS, ids=["exp1", "exp2.5", "spatial", "generic"])
def test_finite_difference_matches_deriv(model):
    h = 1e-5
    for point in [(0.7, 0.3), (1.5, -2.0), (0.1, 0.2)]:
        for y in (0.01, 0.5, 2.0, 5.0):
            fd = (prob(model, point, y + h) - prob(model, point, y - h)) / (2 * h)
            assert fd == pytest.approx(deriv(model, point, y), abs=1e-6)


@pytest.mark.parametrize("model", MODELS, ids=["exp1", "exp2.5", "spatial", "generic"])
def test_regularity_on_lattice(model):
    ys = np.linspace(0, 20, 64)
    for point in [(0.7, 0.3), (1.5, -2.0)]:
        p = np.array([prob(model, point, y) for y in ys])
        g = np.array([deriv(model, point, y) for y in ys])
        assert p[0] == 0.0
        assert np.all((p >= 0) & (p <= 1))
        assert np.all(np.diff(p) >= 0)
        assert np.all(g > 0) and np.all(np.diff(g) < 0)


@settings(max_examples=60, deadline=None)
@given(
    idx=st.integers(0, len(MODELS) - 1),
    x1=st.floats(0.3, 3), x2=st.floats(0.3, 3),
    frac=st.floats(1e-6, 1.0),
)
def test_round_trip(idx, x1, x2, frac):
    model = MODELS[idx]
    t = frac * deriv(model, (x1, x2), 0.0)
    y = deriv_inverse(model, (x1, x2), t)
    assert deriv(model, (x1, x2), y) == pytest.approx(t, rel=1e-10)


def test_generic_regularity_check_flags_bad_model():
    bad = GenericRegular(
        d=lambda y, x1, x2: np.minimum(np.asarray(y) / 10, 1.0) + 0 * np.asarray(x1),
        dd=lambda y, x1, x2: np.full(np.broadcast(np.asarray(y), np.asarray(x1)).shape, 0.1),
    )
    with pytest.raises(ModelRegularityError):
        bad.check_regularity([0.5], [0.5])
    _quadratic_family().check_regularity([0.5, 1.0], [0.5, 2.0])


def test_generic_detects_non_monotone_derivative():
    wobbly = GenericRegular(
        d=lambda y, x1, x2: 0 * np.asarray(y),
        dd=lambda y, x1, x2: np.exp(-np.asarray(y)) * (1.5 + np.sin(3 * np.asarray(y))) + 0 * np.asarray(x1),
    )
    with pytest.raises(ModelRegularityError):
        deriv_inverse(wobbly, (0, 0), 1e-3)
