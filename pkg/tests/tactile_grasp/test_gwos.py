"""
Tests for the closed-loop grasping controller

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
from dataclasses import replace

import numpy as np
import pytest

from tactile_grasp.config import GRIPPER_MODES
from tactile_grasp.errors import (
    ArgumentError,
    ConfigError,
    ReplayMismatchError,
)
from tactile_grasp.heads.bins import RegraspDelta, bin_decode
from tactile_grasp.pipeline import (
    GwosConfig,
    apply_delta,
    fitting_modes,
    initial_grasp,
    replay_trace,
    run_gwos,
)
from tactile_grasp.utils import make_rng
from tactile_grasp.world import GraspPose, Workspace, create_scene
from tactile_grasp.world.catalog import box_entry
from tactile_grasp.world.sim import execute_grasp

from .conftest import make_bundle, tiny_config


def _scene(config, material='wood'):
    return create_scene(5, box_entry('box', 0.04, 0.06, material), config,
                        orientation=0.3, position=(0.3, 0.3))


def test_gwos_config_validation(config):
    """ Out of range controller settings are refused.
    """
    assert GwosConfig(p_threshold=0.0).p_threshold == 0.0
    for kwargs in ({'t_max': 0}, {'p_threshold': 1.0},
                   {'p_threshold': -0.1}, {'initializer': 'guess'},
                   {'regrasp': 'maybe'}, {'z_range': (0.05, 0.01)}):
        with pytest.raises(ConfigError):
            GwosConfig(**kwargs)
    gwos = GwosConfig.from_config(config, t_max=2, regrasp='random')
    assert gwos.t_max == 2
    assert gwos.regrasp == 'random'
    assert gwos.p_threshold == config.gwos.p_threshold


def test_apply_delta_gripper_frame():
    """dx moves along the closing direction and dy across it; theta is
    wrapped and positions are clamped.

    """
    workspace = Workspace()
    grasp = GraspPose(0.3, 0.3, 0.02, math.pi / 2.0, 'wide')
    moved = apply_delta(grasp, RegraspDelta(0.01, 0.02, 0.005, 0.1),
                        workspace)
    assert moved.x == pytest.approx(0.28)
    assert moved.y == pytest.approx(0.31)
    assert moved.z == pytest.approx(0.025)
    assert moved.theta == pytest.approx(math.pi / 2.0 + 0.1)
    assert moved.mode == 'wide'
    turned = apply_delta(GraspPose(0.3, 0.3, 0.02, 3.0),
                         RegraspDelta(dtheta=0.5), workspace)
    assert turned.theta == pytest.approx(3.5 - 2.0 * math.pi)
    edge = apply_delta(GraspPose(0.595, 0.0, 0.001, 0.0),
                       RegraspDelta(0.02, -0.02, -0.02, 0.0), workspace)
    assert (edge.x, edge.y, edge.z) == (0.6, 0.0, 0.0)


def test_perfect_initializer_succeeds():
    """The perfect initializer grasps the centroid along a graspable
    axis in the narrowest fitting mode.

    """
    config = tiny_config(materials={'wood': [2500.0, 0.5, 0.0]})
    workspace, obj = _scene(config)
    gwos = GwosConfig(initializer='perfect')
    grasp = initial_grasp(gwos, workspace, obj, make_rng(1), config)
    assert (grasp.x, grasp.y) == pytest.approx((0.3, 0.3))
    assert grasp.z == pytest.approx(0.0375)
    assert grasp.mode == fitting_modes(obj, grasp.theta, config)[0]
    grasp.validate(workspace)
    for trial in range(20):
        outcome = execute_grasp(workspace, obj, grasp, make_rng(2, trial),
                                config)
        assert outcome.success


def test_oracle_initializers(config):
    """Oracle grasps start at the centroid; noisy ones stay close and
    pick a fitting mode.

    """
    workspace, obj = _scene(config)
    rng = make_rng(3)
    gwos = GwosConfig(initializer='oracle')
    for _ in range(20):
        grasp = initial_grasp(gwos, workspace, obj, rng, config)
        assert (grasp.x, grasp.y) == pytest.approx((0.3, 0.3))
        assert 0.01 <= grasp.z <= 0.05
        assert grasp.mode in GRIPPER_MODES
        grasp.validate(workspace)
    noisy = GwosConfig(initializer='noisy_oracle')
    for _ in range(50):
        grasp = initial_grasp(noisy, workspace, obj, rng, config)
        assert math.hypot(grasp.x - 0.3, grasp.y - 0.3) < 0.06
        assert grasp.mode in fitting_modes(obj, grasp.theta, config) or \
            grasp.mode == GRIPPER_MODES[-1]


def test_initializers_on_empty_workspace(config):
    """ Without an object the oracles aim at the workspace centre.
    """
    workspace = Workspace()
    for kind in ('oracle', 'perfect', 'noisy_oracle'):
        grasp = initial_grasp(GwosConfig(initializer=kind), workspace, None,
                              make_rng(4), config)
        assert math.hypot(grasp.x - 0.3, grasp.y - 0.3) < 0.06
    assert fitting_modes(None, 0.0, config) == list(GRIPPER_MODES)
    with pytest.raises(ArgumentError):
        initial_grasp(GwosConfig(), workspace, None, make_rng(4), config)
    grasp = initial_grasp(GwosConfig(), workspace, None, make_rng(4), config,
                          location=(0.1, 0.2))
    assert (grasp.x, grasp.y) == (0.1, 0.2)


@pytest.mark.parametrize('overrides', [
    {'p_threshold': 0.0},
    {'t_max': 1},
    {'regrasp': 'none'},
])
def test_single_grasp_stops(config, bundle, overrides):
    """A zero threshold, a budget of one or no re-grasping stop after
    the first grasp.

    """
    workspace, obj = _scene(config)
    gwos = replace(GwosConfig(initializer='oracle'), **overrides)
    result = run_gwos(workspace, obj, bundle, gwos, make_rng(6), config)
    assert result.n_grasps == 1
    assert result.steps[0].delta is None
    assert result.steps[0].probability == pytest.approx(0.5)
    assert result.success == result.steps[0].outcome.success
    assert replay_trace(result, bundle, workspace)


def test_confident_grasp_stops(config):
    """ A stability estimate above the threshold ends the loop.
    """
    bundle = make_bundle(config, stability_logit=5.0)
    workspace, obj = _scene(config)
    result = run_gwos(workspace, obj, bundle,
                      GwosConfig(initializer='oracle', t_max=4),
                      make_rng(6), config)
    assert result.n_grasps == 1
    assert result.steps[0].probability > 0.8


def test_learned_regrasps(config):
    """An unsure stability head uses the whole budget and applies the
    policy's correction between grasps.

    """
    bundle = make_bundle(config, stability_logit=-5.0,
                         policy_bins=(3, 2, 2, 2))
    workspace, obj = _scene(config)
    gwos = GwosConfig(initializer='oracle', t_max=3)
    result = run_gwos(workspace, obj, bundle, gwos, make_rng(7), config)
    assert result.n_grasps == 3
    expected = bin_decode((3, 2, 2, 2))
    for before, after in zip(result.steps, result.steps[1:]):
        assert before.delta == expected
        assert after.grasp == apply_delta(before.grasp, expected, workspace)
    assert result.steps[-1].delta is None
    assert [step.index for step in result.steps] == [0, 1, 2]
    assert replay_trace(result, bundle, workspace)
    data = result.steps[0].to_dict()
    assert data['delta']['dx'] == pytest.approx(0.01)
    assert len(data['latent']) == 4


def test_run_gwos_is_deterministic(config, bundle):
    """ Equal seeds reproduce the trace exactly.
    """
    workspace, obj = _scene(config)
    gwos = GwosConfig(initializer='oracle', t_max=3, regrasp='random')
    first = run_gwos(workspace, obj, bundle, gwos, make_rng(8), config,
                     decision_rng=make_rng(9))
    second = run_gwos(workspace, obj, bundle, gwos, make_rng(8), config,
                      decision_rng=make_rng(9))
    assert [step.to_dict() for step in first.steps] == \
        [step.to_dict() for step in second.steps]


def test_random_regrasps_share_first_grasp(config, bundle):
    """Separate decision streams change the corrections but not the
    first grasp.

    """
    workspace, obj = _scene(config)
    gwos = GwosConfig(initializer='oracle', t_max=3, regrasp='random')
    first = run_gwos(workspace, obj, bundle, gwos, make_rng(8), config,
                     decision_rng=make_rng(1))
    second = run_gwos(workspace, obj, bundle, gwos, make_rng(8), config,
                      decision_rng=make_rng(2))
    assert first.steps[0].grasp == second.steps[0].grasp
    assert first.steps[0].outcome == second.steps[0].outcome
    assert first.steps[0].delta != second.steps[0].delta
    assert replay_trace(first, bundle, workspace)


def test_replay_detects_tampering(config):
    """ Changed probabilities, latents and corrections are caught.
    """
    bundle = make_bundle(config, stability_logit=-5.0,
                         policy_bins=(3, 2, 2, 2))
    workspace, obj = _scene(config)
    gwos = GwosConfig(initializer='oracle', t_max=3)

    def fresh():
        return run_gwos(workspace, obj, bundle, gwos, make_rng(7), config)

    result = fresh()
    result.steps[1].probability = 0.9
    with pytest.raises(ReplayMismatchError, match="step 1: stability"):
        replay_trace(result, bundle, workspace)
    result = fresh()
    result.steps[0].latent = result.steps[0].latent + 1.0
    with pytest.raises(ReplayMismatchError, match="latent"):
        replay_trace(result, bundle, workspace)
    result = fresh()
    result.steps[0].delta = bin_decode((1, 2, 2, 2))
    with pytest.raises(ReplayMismatchError, match="re-grasp"):
        replay_trace(result, bundle, workspace)
    result = fresh()
    result.steps[-1].delta = bin_decode((1, 2, 2, 2))
    with pytest.raises(ReplayMismatchError, match="stop decision"):
        replay_trace(result, bundle, workspace)


def test_empty_workspace_fails(config, bundle):
    """ With no object every grasp fails and no object is pushed.
    """
    workspace = Workspace()
    result = run_gwos(workspace, None, bundle,
                      GwosConfig(initializer='oracle', t_max=2), make_rng(3),
                      config)
    assert not result.success
    assert all(not step.outcome.success for step in result.steps)
    assert result.steps[0].grasp.x == pytest.approx(0.3)


def test_touch_initializer(config, bundle):
    """ The touch initializer grasps at the localization estimate.
    """
    workspace, obj = _scene(config)
    result = run_gwos(workspace, obj, bundle,
                      GwosConfig(regrasp='none'), make_rng(10), config)
    assert result.localization is not None
    estimate = np.asarray(result.localization.estimate, dtype=np.float64)
    first = result.steps[0].grasp
    assert (first.x, first.y) == pytest.approx(
        workspace.clamp(float(estimate[0]), float(estimate[1])))
    assert len(result.localization.trace) == config.filter.n_scans
