"""Synthetic three finger force sensing for grasp interactions

Each frame holds 12 channels, four per finger in the order left,
middle, right:

    [F, Fx, Fy, Fz]   (N)

F is the force magnitude and (Fx, Fy, Fz) its direction components in
the finger pad frame (x along the closing direction, y across it in the
grasp plane, z vertical).

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
from dataclasses import dataclass

import numpy as np

from .config import GRIPPER_MODES, RunConfig
from .errors import ArgumentError, ConsistencyError
from .world.sim import best_axis, gripper_frame_offset, signed_axis_error

LOGGER = logging.getLogger(__name__)

FINGERS = ('left', 'middle', 'right')
CHANNELS_PER_FINGER = 4
N_CHANNELS = len(FINGERS) * CHANNELS_PER_FINGER
MAGNITUDE_COLUMNS = (0, 4, 8)
COMPONENT_COLUMNS = (1, 2, 3, 5, 6, 7, 9, 10, 11)

# Stiffness at which a contact ramps up in exactly sensor.ramp_s.
REFERENCE_STIFFNESS = 2500.0


@dataclass(frozen=True)
class HapticFrame:
    """ One 12 channel sample.  'values' is a length 12 float64 array.
    """
    values: np.ndarray

    def finger(self, name):
        """ (F, Fx, Fy, Fz) of one finger.
        """
        start = FINGERS.index(name) * CHANNELS_PER_FINGER
        return tuple(float(v) for v in
                     self.values[start:start + CHANNELS_PER_FINGER])

    def problems(self, noise_sigma):
        """Return the frame invariants this frame violates (an empty
        list for a valid frame).

        """
        problems = []
        for name in FINGERS:
            magnitude, f_x, f_y, f_z = self.finger(name)
            if magnitude < 0.0:
                problems.append("%s finger magnitude must be >= 0" % name)
            norm = math.sqrt(f_x * f_x + f_y * f_y + f_z * f_z)
            if abs(magnitude - norm) > 3.0 * noise_sigma + 1e-12:
                problems.append("%s finger magnitude must agree with its "
                                "components within 3 sigma" % name)
        return problems


@dataclass(frozen=True)
class HapticEpisode:
    """The force time series and gripper control trace recorded during
    one grasp closure.

    """
    frames: np.ndarray
    f_trace: np.ndarray
    mode: str
    duration_s: float
    close_event_index: int
    rate_hz: float = 100.0

    def __len__(self):
        return int(self.frames.shape[0])

    def frame(self, index):
        """ HapticFrame at 'index'.
        """
        return HapticFrame(self.frames[index])

    @property
    def mode_index(self):
        """ Position of the gripper mode in GRIPPER_MODES.
        """
        return GRIPPER_MODES.index(self.mode)

    def magnitudes(self):
        """ (n, 3) array of per finger force magnitudes.
        """
        return self.frames[:, MAGNITUDE_COLUMNS]

    def validate(self, noise_sigma=0.2):
        """Raise ConsistencyError naming the first violated episode or
        frame invariant.

        """
        count = len(self)
        if self.frames.ndim != 2 or self.frames.shape[1] != N_CHANNELS:
            raise ConsistencyError("episode frames must be (n, 12)")
        if self.f_trace.shape != (count,):
            raise ConsistencyError("f_trace must have one value per frame")
        if count != int(round(self.duration_s * self.rate_hz)):
            raise ConsistencyError("frame count must equal round(duration_s "
                                   "x rate_hz)")
        if not 0 <= self.close_event_index < count:
            raise ConsistencyError("close_event_index must index a frame")
        rising = np.diff(self.f_trace[:self.close_event_index + 1])
        if np.any(rising < 0.0):
            raise ConsistencyError("f_trace must be non-decreasing until "
                                   "enclosure")
        if np.any(self.f_trace[self.close_event_index:]
                  != self.f_trace[self.close_event_index]):
            raise ConsistencyError("f_trace must be constant after enclosure")
        if self.mode not in GRIPPER_MODES:
            raise ConsistencyError("episode mode must be one of %s"
                                   % (GRIPPER_MODES,))
        if np.any(self.magnitudes() < 0.0):
            raise ConsistencyError("finger magnitudes must be >= 0")
        components = self.frames[:, COMPONENT_COLUMNS].reshape(count, 3, 3)
        norms = np.sqrt((components ** 2).sum(axis=2))
        if np.any(np.abs(self.magnitudes() - norms)
                  > 3.0 * noise_sigma + 1e-12):
            raise ConsistencyError("finger magnitudes must agree with their "
                                   "components within 3 sigma")
        return self

    def to_matrix(self):
        """(n, 14) float64 matrix: 12 force channels, f_t and the mode
        index, the layout of the haptics sidecar file.

        """
        mode_column = np.full((len(self), 1), float(self.mode_index))
        return np.hstack([self.frames, self.f_trace[:, None], mode_column])

    @classmethod
    def from_matrix(cls, matrix, duration_s, close_event_index, rate_hz):
        """ Inverse of to_matrix().
        """
        matrix = np.asarray(matrix, dtype=np.float64)
        return cls(
            frames=matrix[:, :N_CHANNELS].copy(),
            f_trace=matrix[:, N_CHANNELS].copy(),
            mode=GRIPPER_MODES[int(matrix[0, N_CHANNELS + 1])],
            duration_s=float(duration_s),
            close_event_index=int(close_event_index),
            rate_hz=float(rate_hz),
        )


def _frames_from_signal(signal, rng, sigma):
    """Add sensor noise to an (n, 3, 3) noiseless component signal and
    derive the magnitude channels.

    The magnitude is the norm of the noisy components plus its own
    noise draw clipped to 3 sigma, floored at zero.

    """
    count = signal.shape[0]
    components = signal + rng.normal(0.0, sigma, size=signal.shape)
    extra = np.clip(rng.normal(0.0, sigma, size=(count, 3)),
                    -3.0 * sigma, 3.0 * sigma)
    magnitude = np.maximum(
        0.0, np.sqrt((components ** 2).sum(axis=2)) + extra)
    frames = np.concatenate([magnitude[:, :, None], components], axis=2)
    return frames.reshape(count, N_CHANNELS)


def _check_outcome(obj, outcome, f_max):
    """ Raise ConsistencyError when 'outcome' cannot have come from 'obj'.
    """
    if not 0.0 <= outcome.enclosure_dof <= f_max:
        raise ConsistencyError("enclosure_dof must lie in [0, f_max]")
    if outcome.contact:
        if obj is None:
            raise ConsistencyError("contact forces requested for an empty "
                                   "workspace")
        if outcome.enclosure_dof >= f_max:
            raise ConsistencyError("contact forces requested with "
                                   "enclosure_dof=f_max")
    else:
        if outcome.enclosure_dof != f_max:
            raise ConsistencyError("a grasp without contact must report "
                                   "enclosure_dof=f_max")
        if outcome.success or outcome.slip_occurred:
            raise ConsistencyError("a grasp without contact cannot succeed "
                                   "or slip")


def _ramp_envelope(times, t_contact, tau):
    """ 1 - exp(-(t - t_contact) / tau) after contact, 0 before.
    """
    elapsed = np.maximum(0.0, times - t_contact)
    return np.where(times >= t_contact, 1.0 - np.exp(-elapsed / tau), 0.0)


def _piecewise(times, start, points):
    """Multiplier that is 1 before 'start' and then follows the linear
    segments in 'points' [(duration, level), ...], holding the last
    level.

    """
    result = np.ones_like(times)
    t_from, level_from = start, 1.0
    for duration, level in points:
        t_to = t_from + duration
        inside = (times >= t_from) & (times < t_to)
        frac = (times[inside] - t_from) / duration
        result[inside] = level_from + (level - level_from) * frac
        result[times >= t_to] = level
        t_from, level_from = t_to, level
    return result


def generate_episode(obj, grasp, outcome, rng, config=None):
    """Synthesize the haptic episode of executing 'grasp' on 'obj' with
    ground truth 'outcome' (as returned by execute_grasp()).

    Parameters:

        obj:

            The ObjectInstance grasped, or None for an empty
            workspace.

        grasp:

            The GraspPose executed.

        outcome:

            The GraspOutcome the simulator produced for this grasp.

        rng:

            numpy Generator; the episode is a deterministic function
            of its state.

        config:

            RunConfig supplying the sensor and simulator parameters.

    The gripper starts closing at sensor.close_start_s and stalls on
    the object (enclosure) after a time proportional to enclosure_dof.
    From enclosure the per finger force ramps towards a plateau set by
    the material stiffness, the finger-object overlap and a per grasp
    jitter.  Finger asymmetry follows the centroid offset in the
    gripper frame.  Slipping grasps drop and partially recover, other
    failed contacts decay as the object escapes.  Every channel
    carries sensor noise.

    """
    config = config or RunConfig()
    sensor = config.sensor
    f_max = config.sim.f_max
    _check_outcome(obj, outcome, f_max)

    duration = float(rng.uniform(*sensor.duration_range))
    count = int(round(duration * sensor.rate_hz))
    times = np.arange(count) / sensor.rate_hz
    closing_rate = f_max / sensor.closing_time_s
    f_final = float(outcome.enclosure_dof)
    f_trace = np.clip((times - sensor.close_start_s) * closing_rate,
                      0.0, f_final)
    t_enclosure = sensor.close_start_s + f_final / closing_rate
    # The trace reaches f_final exactly at the stall frame.
    close_event_index = int(min(count - 1, math.ceil(t_enclosure
                                                     * sensor.rate_hz)))
    f_trace[close_event_index:] = f_final

    signal = np.zeros((count, 3, 3))
    if outcome.contact:
        signal = _contact_signal(obj, grasp, outcome, rng, config, times,
                                 t_enclosure)
    frames = _frames_from_signal(signal, rng, sensor.noise_sigma)
    return HapticEpisode(frames, f_trace, grasp.mode, duration,
                         close_event_index, float(sensor.rate_hz))


def _contact_signal(obj, grasp, outcome, rng, config, times, t_enclosure):
    """ Noiseless (n, 3 fingers, 3 components) force signal of a contact.
    """
    sensor = config.sensor
    aperture = config.aperture(grasp.mode)
    jitter_u, onset_u = rng.random(2)

    axis_error, _ = best_axis(obj, grasp.theta)
    along, across = gripper_frame_offset(obj, grasp)
    overlap = (max(0.1, math.cos(axis_error))
               * max(0.1, 1.0 - abs(across) / aperture))
    jitter = 1.0 + sensor.stiffness_jitter * (2.0 * jitter_u - 1.0)
    plateau = (obj.material.stiffness * sensor.compression_m * overlap
               * jitter)

    gain = sensor.asymmetry_gain / config.sim.center_tol
    scales = np.clip(np.array([
        1.0 + gain * along,
        1.0 - gain * along + gain * across,
        1.0 - gain * along - gain * across,
    ]), 0.05, 3.0)

    tau = sensor.ramp_s * math.sqrt(REFERENCE_STIFFNESS
                                    / obj.material.stiffness)
    envelope = _ramp_envelope(times, t_enclosure, tau)
    if outcome.slip_occurred:
        low, high = sensor.slip_onset_range
        onset = t_enclosure + low + (high - low) * onset_u
        envelope = envelope * _piecewise(times, onset, [
            (sensor.slip_drop_s, sensor.slip_drop),
            (sensor.slip_recover_s, sensor.slip_recover),
        ])
    elif not outcome.success:
        envelope = envelope * _piecewise(times, t_enclosure, [
            (sensor.escape_s, sensor.escape_level),
        ])

    z_low = config.workspace.grasp_plane_z + config.sim.z_clearance
    z_high = config.workspace.grasp_plane_z + obj.height
    z_mid = (z_low + z_high) / 2.0
    half_band = max((z_high - z_low) / 2.0, 1e-6)
    tilt = sensor.tilt_rad * float(np.clip((grasp.z - z_mid) / half_band,
                                           -1.0, 1.0))
    # Misalignment turns the left pad one way and the opposing pads the
    # other way.
    turn = np.array([1.0, -1.0, -1.0]) * signed_axis_error(obj, grasp.theta)
    shear = sensor.shear_gain * obj.material.friction
    direction = np.stack([
        math.cos(tilt) * np.cos(turn),
        math.cos(tilt) * np.sin(turn) + shear,
        np.full(3, math.sin(tilt)),
    ], axis=1)
    force = envelope[:, None] * (plateau * scales)[None, :]
    return force[:, :, None] * direction[None, :, :]


def noise_floor(rate_hz, duration_s, rng, config=None):
    """A pure sensor noise episode with the gripper fully closed, used
    as a negative control.

    """
    config = config or RunConfig()
    if rate_hz <= 0:
        raise ArgumentError("noise_floor rate_hz must be > 0")
    count = int(round(duration_s * rate_hz))
    if count < 1:
        raise ArgumentError("noise_floor needs at least one frame")
    frames = _frames_from_signal(np.zeros((count, 3, 3)), rng,
                                 config.sensor.noise_sigma)
    f_trace = np.full(count, float(config.sim.f_max))
    return HapticEpisode(frames, f_trace, 'normal', float(duration_s), 0,
                         float(rate_hz))


def downsample(episode, rate_hz):
    """Resample 'episode' to 'rate_hz' by picking the frame at or
    before each new sample time.  The rate must not exceed the
    episode's own.

    """
    if not 0 < rate_hz <= episode.rate_hz:
        raise ArgumentError("downsample rate must be in (0, %g]"
                            % episode.rate_hz)
    count = int(round(episode.duration_s * rate_hz))
    ratio = episode.rate_hz / rate_hz
    index = np.minimum(len(episode) - 1,
                       np.floor(np.arange(count) * ratio + 1e-9).astype(int))
    close = int(min(count - 1, math.ceil(episode.close_event_index / ratio
                                         - 1e-9)))
    f_trace = episode.f_trace[index].copy()
    f_trace[close:] = episode.f_trace[episode.close_event_index]
    return HapticEpisode(episode.frames[index].copy(), f_trace, episode.mode,
                         episode.duration_s, close, float(rate_hz))


def plateau_force(episode, settle_s=0.5):
    """Mean per finger force magnitude from 'settle_s' after the stall
    event to the end of the episode.

    """
    start = min(len(episode) - 1,
                episode.close_event_index
                + int(round(settle_s * episode.rate_hz)))
    return episode.magnitudes()[start:].mean(axis=0)

