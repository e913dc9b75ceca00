"""
Tests for particle filter touch localization

MIT License

(C) Copyright [2026] tactile_grasp authors

Permission is hereby granted, free of charge, to any person obtaining a
copy of this software and associated documentation files (the "Software"),
to deal in the Software without restriction, including without limitation
the rights to use, copy, modify, merge, publish, distribute, sublicense,
and/or sell copies of the Software, and to permit persons to whom the
Software is furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included
in all copies or substantial portions of the Software.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL
THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR
OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE,
ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR
OTHER DEALINGS IN THE SOFTWARE.
"""
import math

import numpy as np
import pytest
from scipy.stats import chisquare

from tactile_grasp.config import RunConfig
from tactile_grasp.errors import (
    ArgumentError,
    FilterStateError,
    ValidationError,
)
from tactile_grasp.localize import (
    MeasurementModelParams,
    MotionModelParams,
    ParticleSet,
    ScanPlan,
    estimate,
    export_trace,
    init_uniform,
    load_trace,
    localize,
    localize_from_config,
    predict,
    raster_plan,
    resample,
    update,
)
from tactile_grasp.utils import make_rng
from tactile_grasp.world import ContactResult, Workspace, create_scene

from .conftest import tiny_config

WORKSPACE = Workspace()


def _set(points, weights=None):
    points = np.asarray(points, dtype=np.float64)
    if weights is None:
        weights = np.full(len(points), 1.0 / len(points))
    return ParticleSet(points, np.asarray(weights, dtype=np.float64))


def test_init_uniform():
    """ Uniform particles, equal weights, seeded.
    """
    particles = init_uniform(WORKSPACE, 1000, make_rng(1))
    assert len(particles) == 1000
    assert np.all(particles.weights == 1.0 / 1000)
    assert np.allclose(particles.particles.mean(axis=0), (0.3, 0.3),
                       atol=0.02)
    again = init_uniform(WORKSPACE, 1000, make_rng(1))
    assert np.array_equal(again.particles, particles.particles)
    with pytest.raises(ArgumentError):
        init_uniform(WORKSPACE, 0, make_rng(1))


def test_predict():
    """ Zero sigma is the identity; noise has the right spread and
    particles never leave the workspace.
    """
    start = init_uniform(WORKSPACE, 50, make_rng(2))
    same = predict(start, MotionModelParams(0.0), make_rng(3), WORKSPACE)
    assert np.array_equal(same.particles, start.particles)
    assert np.array_equal(same.weights, start.weights)

    point = _set(np.tile([0.3, 0.3], (100000, 1)))
    moved = predict(point, MotionModelParams(0.005), make_rng(4), WORKSPACE)
    assert np.all(np.abs(moved.particles.std(axis=0) - 0.005) <= 0.0002)

    corner = _set(np.tile([0.0, 0.6], (1000, 1)))
    moved = predict(corner, MotionModelParams(1.0), make_rng(5), WORKSPACE)
    assert np.all(moved.particles >= 0.0)
    assert np.all(moved.particles <= 0.6)
    with pytest.raises(ArgumentError):
        MotionModelParams(-1.0)


def test_update_contact_ratio():
    """ A particle at the contact point gains w_occupied over a far one.
    """
    params = MeasurementModelParams()
    result = ContactResult(True, (0.3, 0.3), ((0.3, 0.0), (0.3, 0.3)))
    posterior = update(_set([(0.3, 0.3), (0.55, 0.55)]), result, params)
    assert posterior.weights.sum() == pytest.approx(1.0)
    assert posterior.weights[0] / posterior.weights[1] == pytest.approx(
        params.w_occupied)


def test_update_free_space():
    """A miss that sweeps everything scales all weights equally; a
    narrow miss only lowers the particles along it.

    """
    prior = _set([(0.1, 0.1), (0.3, 0.3), (0.5, 0.2)], [0.2, 0.3, 0.5])
    everything = MeasurementModelParams(vicinity_radius=1.0)
    result = ContactResult(False, None, ((0.0, 0.3), (0.6, 0.3)))
    posterior = update(prior, result, everything)
    assert posterior.weights == pytest.approx(prior.weights)

    posterior = update(prior, result, MeasurementModelParams())
    assert posterior.weights[1] < prior.weights[1]
    assert posterior.weights[0] / posterior.weights[2] == pytest.approx(
        0.2 / 0.5)


def test_update_boundary_is_inside():
    """ A particle exactly vicinity_radius from the contact counts as near.
    """
    params = MeasurementModelParams(vicinity_radius=0.25)
    result = ContactResult(True, (0.5, 0.5), ((0.5, 0.5), (0.5, 0.5)))
    posterior = update(_set([(0.75, 0.5), (0.0, 0.0)]), result, params)
    assert posterior.weights[0] / posterior.weights[1] == pytest.approx(
        params.w_occupied)


def test_update_collapse_resets():
    """ Weights that all vanish are reset to uniform and flagged.
    """
    prior = _set([(0.1, 0.1), (0.2, 0.2)], [0.0, 0.0])
    result = ContactResult(False, None, ((0.0, 0.0), (0.6, 0.6)))
    posterior = update(prior, result, MeasurementModelParams())
    assert posterior.collapsed
    assert np.all(posterior.weights == 0.5)


def test_measurement_params_validation():
    """ Factors must satisfy w_occupied > 1 > w_free > 0.
    """
    for kwargs in ({'w_occupied': 1.0}, {'w_free': 1.0}, {'w_free': 0.0},
                   {'vicinity_radius': 0.0}):
        with pytest.raises(ArgumentError):
            MeasurementModelParams(**kwargs)


def test_resample_degenerate_and_strata():
    """All weight on one particle copies it; (0.75, 0.25) with four
    particles always gives three and one copies.

    """
    points = [(0.1, 0.1), (0.2, 0.2), (0.3, 0.3)]
    result = resample(_set(points, [0.0, 1.0, 0.0]), make_rng(1))
    assert np.all(result.particles == (0.2, 0.2))
    assert np.all(result.weights == 1.0 / 3)

    pair = _set([(0.1, 0.1), (0.4, 0.4), (0.1, 0.1), (0.4, 0.4)],
                [0.75, 0.0, 0.0, 0.25])
    for seed in range(50):
        drawn = resample(pair, make_rng(seed)).particles
        assert int(np.sum(drawn[:, 0] == 0.1)) == 3
        assert int(np.sum(drawn[:, 0] == 0.4)) == 1


def test_resample_uniform_keeps_everyone():
    """ Uniform weights give exactly one copy of every particle.
    """
    particles = init_uniform(WORKSPACE, 100, make_rng(6))
    for seed in range(100):
        drawn = resample(particles, make_rng(seed)).particles
        assert sorted(map(tuple, drawn)) == sorted(
            map(tuple, particles.particles))


def test_resample_matches_weights():
    """ Copy counts over many resamples follow the weights.
    """
    weights = np.array([0.05, 0.1, 0.15, 0.2, 0.22, 0.08, 0.12, 0.08])
    points = np.column_stack([np.arange(8) / 10.0, np.zeros(8)])
    particles = _set(points, weights)
    rng = make_rng(7)
    counts = np.zeros(8)
    rounds = 10000
    for _ in range(rounds):
        drawn = resample(particles, rng).particles
        counts += np.bincount(np.rint(drawn[:, 0] * 10).astype(int),
                              minlength=8)
    _, p_value = chisquare(counts, weights * 8 * rounds)
    assert p_value > 0.01


def test_estimate():
    """ Weighted means, and an error for an empty set.
    """
    assert estimate(_set([(0, 0), (1, 1)])) == (0.5, 0.5)
    assert estimate(_set([(0, 0), (1, 1)], [1.0, 0.0])) == (0.0, 0.0)
    cloud = make_rng(8).normal(0.3, 0.01, size=(1000, 2))
    x_pos, y_pos = estimate(_set(cloud))
    assert math.hypot(x_pos - 0.3, y_pos - 0.3) < 0.002
    with pytest.raises(FilterStateError):
        estimate(_set(np.zeros((0, 2)), np.zeros(0)))


def test_raster_plan():
    """ Alternating full width rows centred on the workspace.
    """
    plan = raster_plan(WORKSPACE, 10, 0.05).validate(WORKSPACE)
    assert len(plan) == 10
    assert plan.scans[0] == ((0.0, pytest.approx(0.075)), (1.0, 0.0), 0.6)
    assert plan.scans[1][0][0] == 0.6
    assert plan.scans[1][1] == (-1.0, 0.0)
    assert len(raster_plan(WORKSPACE, 0)) == 0
    bad = ScanPlan((((0.5, 0.3), (1.0, 0.0), 0.5),))
    with pytest.raises(ValidationError):
        bad.validate(WORKSPACE)


def test_zero_scans_is_prior_mean():
    """ Without evidence the estimate is the workspace centre.
    """
    _, obj = create_scene(1, "box_5cm")
    x_pos, y_pos = localize(WORKSPACE, obj, ScanPlan(), MotionModelParams(),
                            MeasurementModelParams(), 1000,
                            make_rng(9)).estimate
    assert math.hypot(x_pos - 0.3, y_pos - 0.3) < 0.02


def _errors(scenes, config):
    errors = []
    for index in range(scenes):
        workspace, obj = create_scene(500 + index, "box_5cm", config,
                                      position=(0.3, 0.3))
        result = localize_from_config(workspace, obj, make_rng(600, index),
                                      config)
        errors.append(math.dist(result.estimate, result.obj.pose[:2]))
    return errors


def _sharp_config():
    return tiny_config(filter={'n_particles': 5000, 'w_occupied': 1000.0,
                               'w_free': 0.05, 'push_probability': 0.0})


def test_localize_centred_object():
    """ The estimate lands near a centred object in most scenes.
    """
    errors = _errors(10, _sharp_config())
    assert sum(error < 0.025 for error in errors) >= 8


@pytest.mark.slow
def test_localize_accuracy_acceptance():
    """Within the vicinity radius in at least 90 of 100 scenes with the
    default filter parameters.

    """
    errors = _errors(100, RunConfig())
    assert sum(error < 0.025 for error in errors) >= 90


def test_localize_trace_and_export(tmp_path):
    """Localization is seeded, records one snapshot per scan and the
    trace survives an export.

    """
    config = tiny_config(filter={'push_probability': 1.0})
    workspace, obj = create_scene(3, "box_5cm", config, position=(0.3, 0.3))
    first = localize_from_config(workspace, obj, make_rng(1), config)
    second = localize_from_config(workspace, obj, make_rng(1), config)
    estimate_xy, trace = first
    assert estimate_xy == second.estimate
    assert len(trace) == config.filter.n_scans
    assert any(snapshot.contact for snapshot in trace)
    assert all(snapshot.pushed == snapshot.contact for snapshot in trace)
    assert first.obj.pose != obj.pose
    for snapshot in trace:
        assert snapshot.weights.sum() == pytest.approx(1.0)
        assert 1.0 <= snapshot.effective_sample_size <= len(
            snapshot.weights) + 1e-9
    path = str(tmp_path / "trace.jsonl")
    export_trace(trace, path)
    loaded = load_trace(path)
    assert len(loaded) == len(trace)
    assert loaded[-1]['estimate'] == list(trace[-1].estimate)
