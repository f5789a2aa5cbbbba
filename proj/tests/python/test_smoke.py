import json
import math

import pytest

import relbelief as rb


@pytest.fixture
def three_cell():
    return rb.BeliefState(["a", "b", "c"], [0.5, 0.3, 0.2], [1.0, 2.0, 3.0])


def test_state_and_estimate(three_cell):
    assert len(three_cell) == 3
    assert three_cell.prior_predictive == pytest.approx(1.7)
    assert three_cell.rb == pytest.approx([1 / 1.7, 2 / 1.7, 3 / 1.7])
    assert sum(three_cell.posterior) == pytest.approx(1.0)
    assert rb.rb_estimate(three_cell) == 2


def test_region_and_strength(three_cell):
    region = rb.credible_region(three_cell, 0.5)
    assert region.cells == [1, 2]
    report = rb.strength(three_cell, 1)
    assert report.strength == pytest.approx(11 / 17)
    assert report.strength <= report.upper_bound


def test_huber_matches_closed_form(three_cell):
    cells = rb.credible_region(three_cell, 0.5).cells
    bounds = rb.huber_bounds(three_cell, cells, 0.1)
    assert bounds.lower <= bounds.content <= bounds.upper
    assert rb.delta_credible(three_cell, 0.5, 0.1) == pytest.approx(bounds.delta, abs=1e-12)


def test_direction_derivatives(three_cell):
    q = rb.Direction.marginal([0.0, 0.5, 0.5])
    assert q.kind == rb.DirectionKind.marginal
    assert rb.gateaux_strength_marginal(three_cell, 1, q) == pytest.approx(-0.3633, abs=5e-5)
    base = rb.Direction.conditional([1.0, 2.0, 3.0])
    assert rb.gateaux_rb(three_cell, 0, base) == 0.0


def test_conflict_scalars():
    assert rb.location_normal_tail(20, 0.2591, 0.5, 1.0) == pytest.approx(0.8141, abs=5e-4)
    assert rb.location_normal_sup_ratio(20, 0.2591, 0.5, 1.0) == pytest.approx(4.7109, rel=1e-3)
    assert math.isfinite(rb.bernoulli_tail(20, 17, 5.0, 20.0))


def test_reproduce_and_analyze():
    assert "table1" in rb.reproduce_ids()
    assert rb.reproduce("table1", 4).startswith("mu1,sigma1_sq,ratio\n-3,1,0.0065\n")
    config = {
        "grid": {"labels": ["a", "b", "c"], "prior": [0.5, 0.3, 0.2], "cond_predictive": [1, 2, 3]},
        "gamma": 0.5,
        "epsilon": 0.1,
    }
    report = rb.analyze(json.dumps(config))
    assert report.startswith("quantity,cell,direction,value\n")


def test_config_error_is_value_error():
    with pytest.raises(ValueError):
        rb.analyze('{"gamma": 0.5}')
    assert issubclass(rb.ConfigError, ValueError)
