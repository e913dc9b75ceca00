"""The closed-loop grasping controller

Localize the object (or take its location from an oracle), pick an
initial grasp, then alternate between executing a grasp, encoding its
haptic episode, checking the estimated stability and re-grasping until
the estimate clears the threshold or the grasp budget runs out.

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
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..config import GRIPPER_MODES, INITIALIZERS, RunConfig
from ..errors import ArgumentError, ConfigError, ReplayMismatchError
from ..haptics import HapticEpisode, generate_episode
from ..heads.bins import DEFAULT_BINS, RegraspDelta, random_regrasp
from ..heads.training import select_regrasp
from ..localize import localize_from_config
from ..utils import wrap_angle
from ..world.sim import (
    GraspPose,
    displace_object,
    enclosure_fraction,
    execute_grasp,
)

LOGGER = logging.getLogger(__name__)

REGRASP_KINDS = ('learned', 'random', 'none')


@dataclass(frozen=True)
class GwosConfig:
    """Controller settings.

        p_threshold: stop once the stability estimate exceeds this
        t_max: total grasps allowed (initial grasp included)
        initializer: one of INITIALIZERS
        sigma_loc, sigma_theta: noise of the noisy_oracle initializer
        z_range: grasp height band sampled by the random initializers,
                 relative to the grasp plane
        regrasp: 'learned' (policy head), 'random' (uniform deltas) or
                 'none' (stop after the first grasp)

    """
    p_threshold: float = 0.8
    t_max: int = 5
    initializer: str = "touch+random"
    sigma_loc: float = 0.01
    sigma_theta: float = 0.2
    z_range: tuple = (0.01, 0.05)
    regrasp: str = "learned"

    def __post_init__(self):
        if self.t_max < 1:
            raise ConfigError("t_max must be >= 1")
        if not 0.0 <= self.p_threshold < 1.0:
            raise ConfigError("p_threshold must be in [0, 1)")
        if self.initializer not in INITIALIZERS:
            raise ConfigError("initializer must be one of %s"
                              % (INITIALIZERS,))
        if self.regrasp not in REGRASP_KINDS:
            raise ConfigError("regrasp must be one of %s" % (REGRASP_KINDS,))
        if not self.z_range[0] <= self.z_range[1]:
            raise ConfigError("z_range must satisfy min <= max")

    @classmethod
    def from_config(cls, config, **overrides):
        """ GwosConfig from config.gwos with keyword overrides.
        """
        params = config.gwos
        gwos = cls(params.p_threshold, params.t_max, params.initializer,
                   params.sigma_loc, params.sigma_theta,
                   tuple(params.z_range))
        return replace(gwos, **overrides)


def fitting_modes(obj, theta, config):
    """ Gripper modes whose aperture takes the object width along theta.
    """
    if obj is None:
        return list(GRIPPER_MODES)
    return [mode for mode in GRIPPER_MODES
            if enclosure_fraction(obj, GraspPose(0.0, 0.0, 0.0, theta, mode),
                                  config) <= 1.0]


def _nearest_axis(obj, rng=None):
    """A graspable axis of 'obj' in the world frame.  With 'rng' the
    axis is drawn uniformly, otherwise the first is used.

    """
    axes = obj.world_axes()
    index = 0 if rng is None else int(rng.integers(0, len(axes)))
    return axes[index][0]


def _band_middle(workspace, obj, config):
    low = config.sim.z_clearance
    high = obj.height - config.sim.z_top_margin
    return workspace.grasp_plane_z + (low + high) / 2.0


def _pose(workspace, x_pos, y_pos, z_pos, theta, mode):
    x_pos, y_pos = workspace.clamp(float(x_pos), float(y_pos))
    return GraspPose(x_pos, y_pos, max(float(z_pos), workspace.grasp_plane_z),
                     float(wrap_angle(theta)), mode)


def initial_grasp(gwos, workspace, obj, rng, config=None, location=None):
    """First grasp of an episode.

    Parameters:

        gwos:

            GwosConfig; gwos.initializer selects the generator:

                touch+random - 'location' (the touch estimate) with
                               theta, z and mode drawn uniformly
                oracle       - the true centroid with theta, z and
                               mode drawn uniformly
                noisy_oracle - centroid + N(0, sigma_loc^2) per axis,
                               a graspable axis + N(0, sigma_theta^2),
                               z uniform, a mode that fits
                perfect      - centroid, graspable axis, middle of
                               the object's height band, the
                               narrowest mode that fits

        location:

            (x, y) estimate, required by touch+random.

    An empty workspace ('obj' None) uses the workspace centre where the
    oracles would use the centroid.

    """
    config = config or RunConfig()
    kind = gwos.initializer
    z_low, z_high = (workspace.grasp_plane_z + gwos.z_range[0],
                     workspace.grasp_plane_z + gwos.z_range[1])
    center = workspace.center if obj is None else tuple(obj.centroid)
    if kind == 'touch+random':
        if location is None:
            raise ArgumentError("touch+random needs a localized position")
        theta = rng.uniform(-math.pi, math.pi)
        z_pos = rng.uniform(z_low, z_high)
        mode = GRIPPER_MODES[int(rng.integers(0, len(GRIPPER_MODES)))]
        return _pose(workspace, location[0], location[1], z_pos, theta, mode)
    if kind == 'oracle':
        theta = rng.uniform(-math.pi, math.pi)
        z_pos = rng.uniform(z_low, z_high)
        mode = GRIPPER_MODES[int(rng.integers(0, len(GRIPPER_MODES)))]
        return _pose(workspace, center[0], center[1], z_pos, theta, mode)
    if kind == 'noisy_oracle':
        noise = rng.normal(0.0, 1.0, 3)
        theta = 0.0 if obj is None else _nearest_axis(obj, rng)
        theta += gwos.sigma_theta * noise[2]
        z_pos = rng.uniform(z_low, z_high)
        modes = fitting_modes(obj, theta, config) or [GRIPPER_MODES[-1]]
        mode = modes[int(rng.integers(0, len(modes)))]
        return _pose(workspace, center[0] + gwos.sigma_loc * noise[0],
                     center[1] + gwos.sigma_loc * noise[1], z_pos, theta,
                     mode)
    if obj is None:
        return _pose(workspace, center[0], center[1], z_low, 0.0,
                     GRIPPER_MODES[-1])
    theta = _nearest_axis(obj)
    modes = fitting_modes(obj, theta, config) or [GRIPPER_MODES[-1]]
    return _pose(workspace, center[0], center[1],
                 _band_middle(workspace, obj, config), theta, modes[0])


def apply_delta(grasp, delta, workspace):
    """Grasp reached by correcting 'grasp' with 'delta'.

    dx moves along the closing direction, dy across it, dz vertically
    and dtheta rotates.  The position is clamped to the workspace, z to
    the grasp plane and theta is wrapped into [-pi, pi).

    """
    cos_t, sin_t = math.cos(grasp.theta), math.sin(grasp.theta)
    x_pos = grasp.x + delta.dx * cos_t - delta.dy * sin_t
    y_pos = grasp.y + delta.dx * sin_t + delta.dy * cos_t
    return _pose(workspace, x_pos, y_pos, grasp.z + delta.dz,
                 grasp.theta + delta.dtheta, grasp.mode)


@dataclass
class GwosStep:
    """One executed grasp of the loop.  'delta' is the correction chosen
    after it (None when the loop stopped here).

    """
    index: int
    grasp: GraspPose
    outcome: object
    episode: HapticEpisode
    latent: np.ndarray
    probability: float
    delta: RegraspDelta = None

    def to_dict(self):
        """ JSON form without the haptic frames.
        """
        return {
            'index': self.index,
            'grasp': self.grasp.to_dict(),
            'outcome': self.outcome.to_dict(),
            'latent': self.latent.tolist(),
            'probability': self.probability,
            'delta': None if self.delta is None else self.delta.to_dict(),
        }


@dataclass
class GwosResult:
    """ Outcome of the last executed grasp plus the full trace.
    """
    outcome: object
    steps: list = field(default_factory=list)
    localization: object = None
    gwos: GwosConfig = None

    @property
    def success(self):
        """ Whether the final grasp held the object.
        """
        return bool(self.outcome.success)

    @property
    def n_grasps(self):
        """ Number of executed grasps.
        """
        return len(self.steps)


def _stops(gwos, probability, index):
    return (gwos.regrasp == 'none' or probability > gwos.p_threshold
            or index + 1 >= gwos.t_max)


def run_gwos(workspace, obj, bundle, gwos, rng, config=None,
             decision_rng=None):
    """Run the grasping loop on one scene.

    Parameters:

        bundle:

            ModelBundle with the encoder and stability head (and the
            policy head when gwos.regrasp is 'learned').

        rng:

            Generator driving localization, grasp execution, haptics
            and the initializer.

        decision_rng:

            Generator for random re-grasps.  Kept apart from 'rng' so
            that arms evaluated on the same seed execute identical
            first grasps; defaults to 'rng'.

    The loop executes at most gwos.t_max grasps.  A grasp that moved the
    object leaves the scene with the displaced object.

    """
    config = config or RunConfig()
    decision_rng = rng if decision_rng is None else decision_rng
    localization = None
    location = None
    if gwos.initializer == 'touch+random':
        localization = localize_from_config(workspace, obj, rng, config)
        obj = localization.obj
        location = localization.estimate
    grasp = initial_grasp(gwos, workspace, obj, rng, config, location)
    steps = []
    for index in range(gwos.t_max):
        outcome = execute_grasp(workspace, obj, grasp, rng, config)
        episode = generate_episode(obj, grasp, outcome, rng, config)
        latent = bundle.latent(episode)
        probability = bundle.stability_probability(latent)
        if obj is not None and any(outcome.object_displacement):
            obj = displace_object(obj, outcome.object_displacement, workspace)
        step = GwosStep(index, grasp, outcome, episode, latent, probability)
        steps.append(step)
        if _stops(gwos, probability, index):
            break
        if gwos.regrasp == 'learned':
            step.delta = select_regrasp(bundle.policy, latent)
        else:
            step.delta = random_regrasp(decision_rng, DEFAULT_BINS)
        grasp = apply_delta(grasp, step.delta, workspace)
    LOGGER.debug("gwos %s/%s: %d grasps, p=%.3f, success=%s",
                 gwos.initializer, gwos.regrasp, len(steps),
                 steps[-1].probability, outcome.success)
    return GwosResult(outcome, steps, localization, gwos)


def replay_trace(result, bundle, workspace):
    """Re-derive every decision of 'result' from its stored haptic
    episodes.  Raises ReplayMismatchError at the first step where the
    latent vector, the stability estimate, the stop decision, the
    chosen correction (learned re-grasps only) or the next grasp
    differs from the trace.

    """
    gwos = result.gwos
    steps = result.steps
    for step in steps:
        episode = HapticEpisode.from_matrix(step.episode.to_matrix(),
                                            step.episode.duration_s,
                                            step.episode.close_event_index,
                                            step.episode.rate_hz)
        latent = bundle.latent(episode)
        if not np.array_equal(latent, step.latent):
            raise ReplayMismatchError("step %d: latent vector differs"
                                      % step.index)
        probability = bundle.stability_probability(latent)
        if probability != step.probability:
            raise ReplayMismatchError("step %d: stability %r != %r"
                                      % (step.index, probability,
                                         step.probability))
        stopped = _stops(gwos, probability, step.index)
        if stopped != (step.delta is None):
            raise ReplayMismatchError("step %d: stop decision differs"
                                      % step.index)
        if stopped:
            continue
        if gwos.regrasp == 'learned':
            delta = select_regrasp(bundle.policy, latent)
            if delta != step.delta:
                raise ReplayMismatchError("step %d: re-grasp %s != %s"
                                          % (step.index, delta.to_dict(),
                                             step.delta.to_dict()))
        following = apply_delta(step.grasp, step.delta, workspace)
        if step.index + 1 < len(steps) \
                and following != steps[step.index + 1].grasp:
            raise ReplayMismatchError("step %d: next grasp differs"
                                      % step.index)
    if steps and steps[-1].delta is not None:
        raise ReplayMismatchError("trace ends with a pending re-grasp")
    return True
